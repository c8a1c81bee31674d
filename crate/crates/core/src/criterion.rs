//! The numerical regularity criterion for Severi varieties of nodal curves.
//!
//! Given a surface `S` (as a lattice with canonical class `K`) and a class
//! `C`, five inequalities on intersection numbers are checked. When they all
//! hold, every reduced irreducible member of `|C|` with at most `delta_max`
//! nodes has its nodes imposing independent conditions on `|C|`.
//!
//! The bound comes from the integer quadratic
//! `F(δ) = 16δ² − 4tδ + H(C,K)` with `t = C·(C−2K)`; its roots are
//! `α, β = (t ∓ √(C²·(C−2K)²)) / 8`, and the hypotheses force every
//! admissible δ into the open interval `(α, β)` where `F < 0`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{serde_exact, Rational, SurdExpr};
use crate::lattice::{invariants, DivisorClass, LatticeError, NumericalInvariants, SurfaceModel};

/// Attached to every report: the lattice cannot see these geometric inputs.
pub const GEOMETRIC_CAVEAT: &str = "conditional on |C| having a smooth irreducible general member \
and on the curve C' being reduced, irreducible and nodal; C is assumed nef and big; \
non-emptiness of the Severi variety is not asserted";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriterionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("negative discriminant C²·(C−2K)² = {0}")]
    NegativeDiscriminant(BigInt),
    #[error("{0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HypothesisId {
    H1a,
    H1b,
    H2,
    H3,
    H4,
}

impl fmt::Display for HypothesisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    GreaterOrEqual,
    #[serde(rename = "<")]
    Less,
}

impl Relation {
    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Relation::Greater => lhs > rhs,
            Relation::GreaterOrEqual => lhs >= rhs,
            Relation::Less => lhs < rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Greater => ">",
            Relation::GreaterOrEqual => ">=",
            Relation::Less => "<",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub id: HypothesisId,
    pub description: String,
    #[serde(with = "serde_exact::bigint")]
    pub lhs: BigInt,
    pub relation: Relation,
    #[serde(with = "serde_exact::bigint")]
    pub rhs: BigInt,
    pub satisfied: bool,
}

impl HypothesisCheck {
    fn new(id: HypothesisId, description: &str, lhs: BigInt, relation: Relation, rhs: BigInt) -> Self {
        let satisfied = relation.holds(&lhs, &rhs);
        HypothesisCheck { id, description: description.to_string(), lhs, relation, rhs, satisfied }
    }
}

/// Which form of the node bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// `t ≥ 8`: δ ≤ t/4 − 1.
    I,
    /// `0 < t < 8`: δ < β.
    II,
    /// `t ≤ 0`: no bound.
    None,
}

impl Case {
    pub fn of(t: &BigInt) -> Case {
        if *t >= BigInt::from(8) {
            Case::I
        } else if t.is_positive() {
            Case::II
        } else {
            Case::None
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
            Case::None => "none",
        }
    }
}

/// Evaluates hypotheses 1–4 on precomputed invariants.
pub fn checks_from_invariants(inv: &NumericalInvariants) -> Vec<HypothesisCheck> {
    use HypothesisId::*;
    let zero = BigInt::zero();
    let h2 = if inv.t >= BigInt::from(8) {
        HypothesisCheck::new(H2, "K^2 > -4 (case t >= 8)", inv.k2.clone(), Relation::Greater, BigInt::from(-4))
    } else {
        HypothesisCheck::new(H2, "K^2 >= 0 (case t < 8)", inv.k2.clone(), Relation::GreaterOrEqual, zero.clone())
    };
    vec![
        HypothesisCheck::new(H1a, "(C-2K)^2 > 0", inv.cm2k_sq.clone(), Relation::Greater, zero.clone()),
        HypothesisCheck::new(H1b, "t = C(C-2K) > 0", inv.t.clone(), Relation::Greater, zero.clone()),
        h2,
        HypothesisCheck::new(H3, "CK >= 0", inv.ck.clone(), Relation::GreaterOrEqual, zero),
        HypothesisCheck::new(
            H4,
            "H(C,K) < 4(t-4)",
            inv.hodge.clone(),
            Relation::Less,
            4 * (&inv.t - 4),
        ),
    ]
}

pub fn check_hypotheses(surface: &SurfaceModel, c: &DivisorClass) -> Result<Vec<HypothesisCheck>, CriterionError> {
    Ok(checks_from_invariants(&invariants(surface, c)?))
}

/// The roots `(α, β)` of `F`.
pub fn roots_alpha_beta(inv: &NumericalInvariants) -> Result<(SurdExpr, SurdExpr), CriterionError> {
    let disc = inv.root_discriminant();
    if disc.is_negative() {
        return Err(CriterionError::NegativeDiscriminant(disc));
    }
    let eight = BigInt::from(8);
    let alpha = SurdExpr::new(inv.t.clone(), BigInt::from(-1), disc.clone(), eight.clone())
        .expect("nonnegative radicand");
    let beta = SurdExpr::new(inv.t.clone(), BigInt::from(1), disc, eight).expect("nonnegative radicand");
    Ok((alpha, beta))
}

/// `F(δ) = 16δ² − 4tδ + H(C,K)`.
pub fn f_delta(inv: &NumericalInvariants, delta: &BigInt) -> BigInt {
    16 * delta * delta - 4 * &inv.t * delta + &inv.hodge
}

/// `(C−K)² − 4δ`, the discriminant `c₁² − 4c₂` of the rank-two bundle.
pub fn bogomolov_discriminant(inv: &NumericalInvariants, delta: &BigInt) -> BigInt {
    inv.cmk_sq() - 4 * delta
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub invariants: NumericalInvariants,
    pub checks: Vec<HypothesisCheck>,
    pub case: Case,
    #[serde(with = "serde_exact::opt_bigint")]
    pub delta_max: Option<BigInt>,
    pub alpha: Option<SurdExpr>,
    pub beta: Option<SurdExpr>,
    pub notes: Vec<String>,
}

impl RegularityReport {
    pub fn passes(&self) -> bool {
        self.delta_max.is_some()
    }

    pub fn failed(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }

    pub fn probe(&self, delta: &BigInt) -> DeltaProbe {
        DeltaProbe {
            delta: delta.clone(),
            f_delta: f_delta(&self.invariants, delta),
            bogomolov: bogomolov_discriminant(&self.invariants, delta),
            within_bound: self.delta_max.as_ref().is_some_and(|m| delta <= m),
        }
    }
}

/// `F(δ)`, the bundle discriminant and the bound check at one node count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaProbe {
    #[serde(with = "serde_exact::bigint")]
    pub delta: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub f_delta: BigInt,
    #[serde(with = "serde_exact::bigint")]
    pub bogomolov: BigInt,
    pub within_bound: bool,
}

/// Builds the full report from invariants.
pub fn report_from_invariants(inv: NumericalInvariants) -> RegularityReport {
    let checks = checks_from_invariants(&inv);
    let case = Case::of(&inv.t);
    let mut notes = Vec::new();
    let roots = match roots_alpha_beta(&inv) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let all_pass = checks.iter().all(|c| c.satisfied);
    let delta_max = match (all_pass, case, &roots) {
        (true, Case::I, _) => Some((&inv.t - BigInt::from(4)).div_floor(&BigInt::from(4))),
        (true, Case::II, Some((_, beta))) => Some(beta.strict_sup_int()),
        _ => None,
    };
    if let Some(m) = &delta_max {
        debug_assert!(*m >= BigInt::from(1), "H4 keeps the bound above one node");
        notes.push(format!(
            "every reduced irreducible curve in |C| with delta <= {m} nodes is a smooth point of \
             codimension delta of the Severi variety"
        ));
    }
    if inv.hodge.is_negative() {
        notes.push(format!(
            "negative Hodge number {}: the lattice violates the index theorem for C",
            inv.hodge
        ));
    }
    notes.push(GEOMETRIC_CAVEAT.to_string());
    let (alpha, beta) = match roots {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    RegularityReport { invariants: inv, checks, case, delta_max, alpha, beta, notes }
}

/// Evaluates the criterion for `C` on `surface`.
pub fn delta_max(surface: &SurfaceModel, c: &DivisorClass) -> Result<RegularityReport, CriterionError> {
    Ok(report_from_invariants(invariants(surface, c)?))
}

/// Bounds for `C ≡ pK` with `NS(S) = ℤ[K]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsBounds {
    #[serde(with = "serde_exact::rational")]
    pub p: Rational,
    #[serde(with = "serde_exact::bigint")]
    pub k2: BigInt,
    /// β(pK, K) = p(p−2)K²/4
    #[serde(with = "serde_exact::rational")]
    pub beta_cs: Rational,
    /// (p−1)²K²/4
    #[serde(with = "serde_exact::rational")]
    pub sharp_delta: Rational,
}

pub fn cs_bounds(p: &Rational, k2: &BigInt) -> Result<CsBounds, CriterionError> {
    let two = Rational::from_integer(2.into());
    if p.cmp(&two) == Ordering::Less {
        return Err(CriterionError::Domain(format!("p = {p} must be at least 2")));
    }
    if !k2.is_positive() {
        return Err(CriterionError::Domain(format!("K^2 = {k2} must be positive")));
    }
    let one = Rational::from_integer(1.into());
    let k2r = Rational::from_integer(k2.clone());
    let four = Rational::from_integer(4.into());
    let beta_cs = p * (p - &two) * &k2r / &four;
    let pm1 = p - one;
    let sharp_delta = &pm1 * &pm1 * &k2r / four;
    Ok(CsBounds { p: p.clone(), k2: k2.clone(), beta_cs, sharp_delta })
}
