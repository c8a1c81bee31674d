//! Intersection lattices, divisor classes and the numbers derived from them.
//!
//! A surface is modelled by its Néron–Severi pairing (an integer Gram matrix
//! over a named basis) together with the class of the canonical divisor.
//! Everything the regularity criterion needs is an intersection number.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{serde_exact, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("class has {got} coefficients but the lattice has rank {rank}")]
    DimensionMismatch { rank: usize, got: usize },
    #[error("lattice must have positive rank")]
    EmptyLattice,
    #[error("gram matrix is not square: row {row} has {len} entries, expected {rank}")]
    MalformedGram { row: usize, len: usize, rank: usize },
    #[error("{names} basis names for a rank {rank} gram matrix")]
    BasisLength { names: usize, rank: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
}

/// Integer Gram matrix of an intersection pairing.
///
/// Construction only checks the shape. Symmetry, distinct names and the
/// hyperbolic signature are reported by [`validate_lattice`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    basis_names: Vec<String>,
    #[serde(with = "gram_serde")]
    gram: Vec<Vec<BigInt>>,
}

mod gram_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = g
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .into_iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.parse().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

impl IntersectionLattice {
    pub fn new(basis_names: Vec<String>, gram: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::EmptyLattice);
        }
        if let Some((row, r)) = gram.iter().enumerate().find(|(_, r)| r.len() != rank) {
            return Err(LatticeError::MalformedGram { row, len: r.len(), rank });
        }
        if basis_names.len() != rank {
            return Err(LatticeError::BasisLength { names: basis_names.len(), rank });
        }
        Ok(IntersectionLattice { basis_names, gram })
    }

    /// Convenience constructor from small integer entries.
    pub fn from_rows<S: AsRef<str>>(names: &[S], rows: &[&[i64]]) -> Result<Self, LatticeError> {
        let gram = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(names.iter().map(|s| s.as_ref().to_string()).collect(), gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (i + 1..n).all(|j| self.gram[i][j] == self.gram[j][i]))
    }

    pub fn signature(&self) -> Result<Signature, LatticeError> {
        signature(&self.gram)
    }
}

/// Integer coefficients of a divisor class over a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(#[serde(with = "serde_exact::bigint_vec")] pub Vec<BigInt>);

impl DivisorClass {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        DivisorClass(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, m: &BigInt) -> DivisorClass {
        DivisorClass(self.0.iter().map(|x| x * m).collect())
    }

    /// `self + m·other`; lengths must agree.
    pub fn add_scaled(&self, other: &DivisorClass, m: &BigInt) -> DivisorClass {
        assert_eq!(self.len(), other.len(), "class length mismatch");
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + m * b).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A surface given by its intersection lattice and canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub name: String,
    lattice: IntersectionLattice,
    canonical: DivisorClass,
}

impl SurfaceModel {
    pub fn new(
        name: impl Into<String>,
        lattice: IntersectionLattice,
        canonical: DivisorClass,
    ) -> Result<Self, LatticeError> {
        check_len(&lattice, &canonical)?;
        Ok(SurfaceModel { name: name.into(), lattice, canonical })
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }
}

fn check_len(lattice: &IntersectionLattice, c: &DivisorClass) -> Result<(), LatticeError> {
    if c.len() != lattice.rank() {
        return Err(LatticeError::DimensionMismatch { rank: lattice.rank(), got: c.len() });
    }
    Ok(())
}

/// The intersection number `aᵀ·G·b`.
pub fn pair(
    lattice: &IntersectionLattice,
    a: &DivisorClass,
    b: &DivisorClass,
) -> Result<BigInt, LatticeError> {
    check_len(lattice, a)?;
    check_len(lattice, b)?;
    let mut acc = BigInt::zero();
    for (ai, row) in a.0.iter().zip(&lattice.gram) {
        if ai.is_zero() {
            continue;
        }
        let row_dot: BigInt = row.iter().zip(&b.0).map(|(g, bj)| g * bj).sum();
        acc += ai * row_dot;
    }
    Ok(acc)
}

/// Counts of positive, negative and null directions of a quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    /// True for the `(1, rank-1)` signature forced by the Hodge index theorem.
    pub fn is_hyperbolic(&self) -> bool {
        self.positive == 1 && self.zero == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signature ({},{})", self.positive, self.negative)?;
        if self.zero > 0 {
            write!(f, " with {} null direction(s)", self.zero)?;
        }
        Ok(())
    }
}

/// Exact signature of a symmetric integer matrix.
///
/// Symmetric Gaussian elimination over the rationals. A nonzero diagonal
/// entry is used as a 1×1 pivot; when every remaining diagonal entry is zero
/// but an off-diagonal one is not, the pair of indices spans a hyperbolic
/// plane, contributing one positive and one negative direction, and is
/// eliminated as a 2×2 block.
pub fn signature(gram: &[Vec<BigInt>]) -> Result<Signature, LatticeError> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(LatticeError::MalformedGram {
            row: gram.iter().position(|r| r.len() != n).unwrap_or(0),
            len: 0,
            rank: n,
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            if gram[i][j] != gram[j][i] {
                return Err(LatticeError::NotSymmetric);
            }
        }
    }
    let mut m: Vec<Vec<Rational>> = gram
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = Signature { positive: 0, negative: 0, zero: 0 };

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) {
            let p = active.remove(pos);
            let pivot = m[p][p].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for &j in &active {
                if m[j][p].is_zero() {
                    continue;
                }
                let factor = &m[j][p] / &pivot;
                for &k in &active {
                    let delta = &factor * &m[p][k];
                    m[j][k] -= delta;
                }
            }
            continue;
        }
        let hyperbolic = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..]
                .iter()
                .find(|&&j| !m[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = hyperbolic else {
            sig.zero += active.len();
            break;
        };
        active.retain(|&k| k != i && k != j);
        sig.positive += 1;
        sig.negative += 1;
        // Block [[0, b], [b, 0]] has inverse [[0, 1/b], [1/b, 0]].
        let b = m[i][j].clone();
        for &k in &active {
            for &l in &active {
                let delta = (&m[k][i] * &m[j][l] + &m[k][j] * &m[i][l]) / &b;
                m[k][l] -= delta;
            }
        }
    }
    Ok(sig)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotSymmetric { row: usize, col: usize },
    DuplicateBasisName(String),
    EmptyBasisName(usize),
    Signature(Signature),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSymmetric { row, col } => {
                write!(f, "not symmetric: gram[{row}][{col}] != gram[{col}][{row}]")
            }
            Violation::DuplicateBasisName(name) => write!(f, "duplicate basis name {name:?}"),
            Violation::EmptyBasisName(i) => write!(f, "basis name {i} is empty"),
            Violation::Signature(sig) => write!(f, "{sig}, expected a single positive direction"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationOutcome {
    pub violations: Vec<Violation>,
}

impl ValidationOutcome {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Collects every structural problem of a lattice; never fails.
pub fn validate_lattice(
    lattice: &IntersectionLattice,
    require_hodge_signature: bool,
) -> ValidationOutcome {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for (i, name) in lattice.basis_names.iter().enumerate() {
        if name.is_empty() {
            violations.push(Violation::EmptyBasisName(i));
        } else if !seen.insert(name.as_str()) {
            violations.push(Violation::DuplicateBasisName(name.clone()));
        }
    }
    let n = lattice.rank();
    for i in 0..n {
        for j in i + 1..n {
            if lattice.gram[i][j] != lattice.gram[j][i] {
                violations.push(Violation::NotSymmetric { row: i, col: j });
            }
        }
    }
    if require_hodge_signature && lattice.is_symmetric() {
        let sig = lattice.signature().expect("symmetric gram");
        if !sig.is_hyperbolic() {
            violations.push(Violation::Signature(sig));
        }
    }
    ValidationOutcome { violations }
}

/// Every intersection number the regularity criterion consumes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalInvariants {
    /// C²
    #[serde(with = "serde_exact::bigint")]
    pub c2: BigInt,
    /// C·K
    #[serde(with = "serde_exact::bigint")]
    pub ck: BigInt,
    /// K²
    #[serde(with = "serde_exact::bigint")]
    pub k2: BigInt,
    /// C·(C − 2K)
    #[serde(with = "serde_exact::bigint")]
    pub t: BigInt,
    /// (C − 2K)²
    #[serde(with = "serde_exact::bigint")]
    pub cm2k_sq: BigInt,
    /// Hodge number (C·K)² − C²·K²
    #[serde(with = "serde_exact::bigint")]
    pub hodge: BigInt,
    /// Arithmetic genus by adjunction.
    #[serde(with = "serde_exact::rational")]
    pub pa: Rational,
}

impl NumericalInvariants {
    /// Derives the remaining invariants from C², C·K and K².
    pub fn from_numbers(c2: BigInt, ck: BigInt, k2: BigInt) -> Self {
        let t = &c2 - 2 * &ck;
        let cm2k_sq = &c2 - 4 * &ck + 4 * &k2;
        let hodge = &ck * &ck - &c2 * &k2;
        let pa = Rational::new(&c2 + &ck, BigInt::from(2)) + Rational::from_integer(1.into());
        NumericalInvariants { c2, ck, k2, t, cm2k_sq, hodge, pa }
    }

    /// (C − K)², the first Chern class square of the rank-two bundle.
    pub fn cmk_sq(&self) -> BigInt {
        &self.c2 - 2 * &self.ck + &self.k2
    }

    /// `C²·(C−2K)²`, the radicand of the bound roots.
    pub fn root_discriminant(&self) -> BigInt {
        &self.c2 * &self.cm2k_sq
    }
}

/// Computes C², C·K, K² and the derived quantities by pairing.
///
/// `t` and `(C−2K)²` are paired directly against `C − 2K` and then checked
/// against the expanded identities.
pub fn invariants(surface: &SurfaceModel, c: &DivisorClass) -> Result<NumericalInvariants, LatticeError> {
    let lat = &surface.lattice;
    let k = &surface.canonical;
    let c2 = pair(lat, c, c)?;
    let ck = pair(lat, c, k)?;
    let k2 = pair(lat, k, k)?;
    let c_minus_2k = c.add_scaled(k, &BigInt::from(-2));
    let t = pair(lat, c, &c_minus_2k)?;
    let cm2k_sq = pair(lat, &c_minus_2k, &c_minus_2k)?;

    let inv = NumericalInvariants::from_numbers(c2, ck, k2);
    assert_eq!(inv.t, t, "t = C² - 2CK");
    assert_eq!(inv.cm2k_sq, cm2k_sq, "(C-2K)² = C² - 4CK + 4K²");
    Ok(inv)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticGenus {
    pub value: Rational,
    /// False when C·(C+K) is odd, which no curve class on a surface allows.
    pub integral: bool,
}

/// Adjunction: `p_a(C) = C·(C+K)/2 + 1`.
pub fn arithmetic_genus(surface: &SurfaceModel, c: &DivisorClass) -> Result<ArithmeticGenus, LatticeError> {
    let c_plus_k = c.add_scaled(&surface.canonical, &BigInt::from(1));
    let cck = pair(&surface.lattice, c, &c_plus_k)?;
    let integral = cck.is_even();
    let value = Rational::new(cck, BigInt::from(2)) + Rational::from_integer(1.into());
    Ok(ArithmeticGenus { value, integral })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricGenus {
    pub value: Rational,
    /// Set when δ exceeds the arithmetic genus.
    pub negative: bool,
}

/// `g = p_a − δ` for a curve with δ nodes.
pub fn geometric_genus(pa: &Rational, delta: u64) -> GeometricGenus {
    let value = pa - Rational::from_integer(delta.into());
    let negative = value.is_negative();
    GeometricGenus { value, negative }
}
