//! Smooth degree-`d` surfaces in P³ containing a line `L`.
//!
//! On such a surface the classes `H` (plane section) and `L` span a rank-two
//! sublattice with `H² = d`, `H·L = 1`, `L² = 2 − d`, and `K ≡ (d−4)H`. The
//! curves residual to `L` in a complete intersection with a degree-`a`
//! surface have class `C ≡ aH − L`; this module runs the regularity
//! criterion along that family and evaluates the closed-form thresholds on
//! `a` against brute force.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::{delta_max, CriterionError, RegularityReport};
use crate::exactnum::{fmt_rational, serde_exact, Rational, SurdExpr};
use crate::lattice::{arithmetic_genus, pair, DivisorClass, IntersectionLattice, SurfaceModel};

/// Default `b` in the simplified threshold `d − 3 + (d√d − b)/2`.
pub const DEFAULT_B: i64 = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("degree d = {0} is out of range, need d >= 5")]
    Degree(i64),
    #[error("a = {0} is out of range, need a >= 1")]
    Multiple(i64),
    #[error("a_cap = {0} must be at least 1")]
    Cap(i64),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
}

fn check_d(d: i64) -> Result<(), FamilyError> {
    if d < 5 {
        return Err(FamilyError::Degree(d));
    }
    Ok(())
}

fn check_a(a: i64) -> Result<(), FamilyError> {
    if a < 1 {
        return Err(FamilyError::Multiple(a));
    }
    Ok(())
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// The lattice ⟨H, L⟩ of a degree-`d` surface containing a line.
pub fn build_surface(d: i64) -> Result<SurfaceModel, FamilyError> {
    check_d(d)?;
    let lattice = IntersectionLattice::from_rows(&["H", "L"], &[&[d, 1], &[1, 2 - d]])
        .expect("rank-two gram");
    let canonical = DivisorClass::from_i64(&[d - 4, 0]);
    Ok(SurfaceModel::new(format!("degree-{d} surface containing a line"), lattice, canonical)
        .expect("canonical has rank two"))
}

/// `aH − L` in the basis `(H, L)`.
pub fn residual_class(a: i64) -> DivisorClass {
    DivisorClass::from_i64(&[a, -1])
}

/// `(ad(a+d) − 2a − d(4a+1) + 3)/2`, the published family genus formula.
pub fn closed_form_genus(d: i64, a: i64) -> Rational {
    Rational::new((a * d * (a + d) - 2 * a - d * (4 * a + 1) + 3).into(), 2.into())
}

/// `(a²d − 2a(d²−4d+1) + 2d − 15)/4`, the published node bound for the family.
pub fn proposition_delta(d: i64, a: i64) -> Rational {
    Rational::new((a * a * d - 2 * a * (d * d - 4 * d + 1) + 2 * d - 15).into(), 4.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub d: i64,
    pub a: i64,
    /// deg C = C·H = ad − 1
    #[serde(with = "serde_exact::bigint")]
    pub degree: BigInt,
    #[serde(with = "serde_exact::rational")]
    pub pa_adjunction: Rational,
    #[serde(with = "serde_exact::rational")]
    pub pa_closed_form: Rational,
    pub report: RegularityReport,
    #[serde(with = "serde_exact::rational")]
    pub proposition_delta: Rational,
    pub notes: Vec<String>,
}

pub fn family_point(d: i64, a: i64) -> Result<FamilyPoint, FamilyError> {
    check_d(d)?;
    check_a(a)?;
    let surface = build_surface(d)?;
    let c = residual_class(a);
    let h = DivisorClass::from_i64(&[1, 0]);
    let degree = pair(surface.lattice(), &c, &h).map_err(CriterionError::from)?;
    debug_assert_eq!(degree, BigInt::from(a * d - 1));
    let genus = arithmetic_genus(&surface, &c).map_err(CriterionError::from)?;
    let report = delta_max(&surface, &c)?;
    let pa_closed_form = closed_form_genus(d, a);
    let prop = proposition_delta(d, a);

    let mut notes = Vec::new();
    if !genus.integral {
        notes.push(format!("arithmetic genus {} is not an integer", fmt_rational(&genus.value)));
    }
    if pa_closed_form != genus.value {
        notes.push(format!(
            "closed-form genus {} differs from adjunction {}; adjunction is used",
            fmt_rational(&pa_closed_form),
            fmt_rational(&genus.value)
        ));
    }
    let theorem_bound = Rational::new(&report.invariants.t - 4, BigInt::from(4));
    if prop != theorem_bound {
        notes.push(format!(
            "closed-form node bound {} differs from (t-4)/4 = {}; delta_max follows (t-4)/4",
            fmt_rational(&prop),
            fmt_rational(&theorem_bound)
        ));
        if let Some(m) = &report.delta_max {
            if prop.floor().to_integer() > *m {
                notes.push(format!(
                    "floor of the closed-form bound exceeds delta_max = {m}"
                ));
            }
        }
    }
    Ok(FamilyPoint {
        d,
        a,
        degree,
        pa_adjunction: genus.value,
        pa_closed_form,
        report,
        proposition_delta: prop,
        notes,
    })
}

/// Smallest `a ∈ [1, a_cap]` for which every hypothesis holds on `aH − L`.
pub fn minimal_a(d: i64, a_cap: i64) -> Result<Option<i64>, FamilyError> {
    check_d(d)?;
    if a_cap < 1 {
        return Err(FamilyError::Cap(a_cap));
    }
    let surface = build_surface(d)?;
    for a in 1..=a_cap {
        if delta_max(&surface, &residual_class(a))?.passes() {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

pub fn default_a_cap(d: i64) -> i64 {
    10 * d
}

/// Closed-form lower bounds on `a` for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub d: i64,
    pub b: i64,
    /// `2d − 6`, stated for `5 ≤ d ≤ 7`.
    pub small_d_bound: Option<i64>,
    /// Larger root in `a` of `4a²d − 8a(d²−4d+1) − (d⁴−10d³+33d²−44d+56)`;
    /// the Hodge hypothesis holds exactly for `a` strictly above it.
    pub hodge_root: SurdExpr,
    #[serde(with = "serde_exact::bigint")]
    pub hodge_root_min_a: BigInt,
    /// `⌈d − 3 + (d√d − b)/2⌉`, stated for `d ≥ 8`.
    #[serde(with = "serde_exact::opt_bigint")]
    pub simplified_bound: Option<BigInt>,
    pub minimal_a_bruteforce: Option<i64>,
    /// `2b√d ≤ 6d − 1 + (b² − 32)/d`
    pub b_check: bool,
    /// `d√d > 2d + b − 6`
    pub d_check: bool,
}

/// The Hodge-hypothesis root `(2(d²−4d+1) + √N) / (2d)` with
/// `N = d⁵ − 6d⁴ + d³ + 28d² + 24d + 4`, i.e.
/// `d − 4 + 1/d + ½·√(d³ − 6d² + d + 28 + 24/d + 4/d²)` with the inner
/// fractions cleared under the radical.
pub fn hodge_root(d: i64) -> SurdExpr {
    let d = BigInt::from(d);
    let d2 = &d * &d;
    let radicand = d2.clone() * &d2 * &d - 6 * &d2 * &d2 + &d2 * &d + 28 * &d2 + 24 * &d + 4;
    let p = 2 * (&d2 - 4 * &d + 1);
    SurdExpr::new(p, BigInt::from(1), radicand, 2 * d).expect("radicand is positive for d >= 1")
}

/// `d − 3 + (d√d − b)/2` as `(2d − 6 − b + √(d³))/2`.
pub fn simplified_threshold(d: i64, b: i64) -> SurdExpr {
    SurdExpr::from_parts(2 * d - 6 - b, 1, d * d * d, 2).expect("positive radicand")
}

/// `2b√d ≤ 6d − 1 + (b² − 32)/d`
pub fn b_inequality(d: i64, b: i64) -> bool {
    let lhs = SurdExpr::from_parts(0, 2 * b, d, 1).expect("positive radicand");
    let rhs = Rational::new(((6 * d - 1) * d + b * b - 32).into(), d.into());
    lhs.cmp_rational(&rhs) != Ordering::Greater
}

/// `d√d > 2d + b − 6`
pub fn d_inequality(d: i64, b: i64) -> bool {
    let lhs = SurdExpr::from_parts(0, 1, d * d * d, 1).expect("positive radicand");
    lhs.cmp_rational(&q(2 * d + b - 6)) == Ordering::Greater
}

pub fn thresholds(d: i64) -> Result<ThresholdRecord, FamilyError> {
    thresholds_with(d, DEFAULT_B, default_a_cap(d))
}

pub fn thresholds_with(d: i64, b: i64, a_cap: i64) -> Result<ThresholdRecord, FamilyError> {
    check_d(d)?;
    let root = hodge_root(d);
    let root_min = root.floor() + 1;
    Ok(ThresholdRecord {
        d,
        b,
        small_d_bound: (d <= 7).then_some(2 * d - 6),
        hodge_root_min_a: root_min,
        hodge_root: root,
        simplified_bound: (d >= 8).then(|| simplified_threshold(d, b).ceil()),
        minimal_a_bruteforce: minimal_a(d, a_cap)?,
        b_check: b_inequality(d, b),
        d_check: d_inequality(d, b),
    })
}

/// Node bounds against the genus bound for curves on a general degree-`d`
/// surface through a line, with `s = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClComparison {
    pub d: i64,
    pub a: i64,
    pub s: i64,
    /// `2 + (d−6)/2 · deg C`
    #[serde(with = "serde_exact::rational")]
    pub genus_lower_bound: Rational,
    /// `C²/2 + C·H − 1`
    #[serde(with = "serde_exact::rational")]
    pub delta_cl: Rational,
    /// `C²/4 − (d−4)/2 · C·H − 1`
    #[serde(with = "serde_exact::rational")]
    pub delta_ours: Rational,
    pub consistent: bool,
    pub report_passes: bool,
    pub notes: Vec<String>,
}

pub fn cl_comparison(d: i64, a: i64) -> Result<ClComparison, FamilyError> {
    check_d(d)?;
    check_a(a)?;
    let surface = build_surface(d)?;
    let c = residual_class(a);
    let h = DivisorClass::from_i64(&[1, 0]);
    let lat = surface.lattice();
    let c2 = Rational::from_integer(pair(lat, &c, &c).map_err(CriterionError::from)?);
    let ch = Rational::from_integer(pair(lat, &c, &h).map_err(CriterionError::from)?);
    let one = q(1);

    let genus_lower_bound = q(2) + q(d - 6) / q(2) * &ch;
    let delta_cl = &c2 / q(2) + &ch - &one;
    let delta_ours = &c2 / q(4) - q(d - 4) / q(2) * &ch - &one;
    let consistent = delta_ours <= delta_cl;

    let report = delta_max(&surface, &c)?;
    let mut notes = Vec::new();
    if d < 6 {
        notes.push(format!(
            "d = {d}: the genus lower bound 2 + (d-6)/2 deg C is below 2"
        ));
    }
    if let Some(m) = &report.delta_max {
        let gap = &delta_ours - Rational::from_integer(m.clone());
        debug_assert!(gap >= Rational::from_integer(0.into()) && gap <= Rational::new(3.into(), 4.into()));
    }
    Ok(ClComparison {
        d,
        a,
        s: 1,
        genus_lower_bound,
        delta_cl,
        delta_ours,
        consistent,
        report_passes: report.passes(),
        notes,
    })
}

/// Evaluates every `(d, a)` cell, `d` outer and `a` inner.
pub fn scan(
    d_range: RangeInclusive<i64>,
    a_range: RangeInclusive<i64>,
) -> Result<Vec<FamilyPoint>, FamilyError> {
    if d_range.is_empty() || a_range.is_empty() {
        return Ok(Vec::new());
    }
    check_d(*d_range.start())?;
    check_a(*a_range.start())?;
    let mut out = Vec::new();
    for d in d_range {
        for a in a_range.clone() {
            out.push(family_point(d, a)?);
        }
    }
    Ok(out)
}
