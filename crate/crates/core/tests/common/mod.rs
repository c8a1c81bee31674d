//! Independent oracles shared by the integration suites.
//!
//! Nothing here calls into the code paths it is used to check: square roots
//! use a local Newton iteration, surd comparisons a 256-bit fixed-point
//! evaluation, signatures the signs of principal minors, and the family
//! hypotheses closed-form integer expressions.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use severi::exactnum::{Rational, SurdExpr};

/// Newton iteration for ⌊√n⌋.
pub fn newton_isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut x = BigUint::one() << ((n.bits() / 2) + 1);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

pub const FIXED_BITS: u64 = 256;
pub const SEPARATION_BITS: u64 = 100;

/// Sign of `e − x` from a 256-bit fixed-point evaluation, or `None` when
/// the two values may lie within 2⁻¹⁰⁰ of each other.
pub fn fixed_point_cmp(e: &SurdExpr, x: &Rational) -> Option<Ordering> {
    let scale = BigInt::one() << FIXED_BITS;
    // floor(|q|·√n·2^256), exact to within 1.
    let q2n = e.q() * e.q() * e.n() * (&scale * &scale);
    let root = BigInt::from_biguint(Sign::Plus, newton_isqrt(q2n.magnitude()));
    let rad = if e.q().is_negative() { -root } else { root };
    // e·2^256 ≈ (p·2^256 + rad)/r with error below 1/r.
    let num = e.p() * &scale + rad;
    let (a, b) = (x.numer(), x.denom());
    // (num/r − a·S/b)·r·b = num·b − a·S·r
    let diff = &num * b - a * &scale * e.r();
    let slack = (e.r() * b) << (FIXED_BITS - SEPARATION_BITS);
    if diff.abs() <= slack {
        None
    } else {
        Some(diff.sign().cmp_zero())
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn rand_big<R: Rng>(rng: &mut R, bits: u32, signed: bool) -> BigInt {
    let b = rng.gen_range(1..=bits);
    let hi: u128 = rng.gen::<u128>() >> (128 - b.min(128));
    let v = BigInt::from(hi);
    if signed && rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Uniform integer below 2^bits.
pub fn random_bits<R: Rng>(rng: &mut R, bits: u64) -> BigUint {
    let words = bits.div_ceil(32) as usize;
    let mut digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    let spare = words as u64 * 32 - bits;
    if let Some(top) = digits.last_mut() {
        *top >>= spare;
    }
    BigUint::from_slice(&digits)
}

pub fn random_surd<R: Rng>(rng: &mut R) -> SurdExpr {
    let p = rand_big(rng, 64, true);
    let q = rand_big(rng, 40, true);
    let n = rand_big(rng, 64, false);
    let r = rand_big(rng, 32, false) + BigInt::one();
    SurdExpr::new(p, q, n, r).unwrap()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let a = rand_big(rng, 80, true);
    let b = rand_big(rng, 32, false) + BigInt::one();
    Rational::new(a, b)
}

/// A surd `(p + q·s)/r` written with radicand `s²` next to its exact value.
pub fn random_tie<R: Rng>(rng: &mut R) -> (SurdExpr, Rational) {
    let p = rand_big(rng, 40, true);
    let q = rand_big(rng, 20, true);
    let s = rand_big(rng, 30, false);
    let r = rand_big(rng, 20, false) + BigInt::one();
    let exact = Rational::new(&p + &q * &s, r.clone());
    (SurdExpr::new(p, q, &s * &s, r).unwrap(), exact)
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, spread: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            // Plenty of zeros so zero pivots and hyperbolic pairs show up.
            let v = if rng.gen_bool(0.4) { 0 } else { rng.gen_range(-spread..=spread) };
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn leibniz_det(m: &[Vec<i64>], idx: &[usize]) -> i128 {
    fn permute(k: usize, perm: &mut Vec<usize>, sign: i128, m: &[Vec<i64>], idx: &[usize], acc: &mut i128) {
        let n = perm.len();
        if k == n {
            let prod: i128 = (0..n).map(|i| m[idx[i]][idx[perm[i]]] as i128).product();
            *acc += sign * prod;
            return;
        }
        for j in k..n {
            perm.swap(k, j);
            let s = if j == k { sign } else { -sign };
            permute(k + 1, perm, s, m, idx, acc);
            perm.swap(k, j);
        }
    }
    let mut perm: Vec<usize> = (0..idx.len()).collect();
    let mut acc = 0;
    permute(0, &mut perm, 1, m, idx, &mut acc);
    acc
}

/// Signature from the characteristic polynomial, whose coefficients are
/// signed sums of principal minors. The roots of a symmetric matrix's
/// characteristic polynomial are real, so Descartes' rule counts them
/// exactly.
pub fn minor_signature(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut e = vec![0i128; n + 1];
    e[0] = 1;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        e[idx.len()] += leibniz_det(m, &idx);
    }
    // det(xI − A) = Σ (−1)^k E_k x^(n−k)
    let coeffs: Vec<i128> = (0..=n).map(|k| if k % 2 == 0 { e[k] } else { -e[k] }).collect();
    let changes = |cs: &[i128]| {
        let nz: Vec<i128> = cs.iter().copied().filter(|&c| c != 0).collect();
        nz.windows(2).filter(|w| (w[0] > 0) != (w[1] > 0)).count()
    };
    let positive = changes(&coeffs);
    let zero = n - (0..=n).rev().find(|&k| e[k] != 0).unwrap_or(0);
    let negative = n - positive - zero;
    (positive, negative, zero)
}

/// (C², C·K, K²) for `aH − L` with `H² = d`, `HL = 1`, `L² = 2 − d`,
/// `K = (d−4)H`.
pub fn family_numbers(d: i128, a: i128) -> (i128, i128, i128) {
    let c2 = a * a * d - 2 * a + 2 - d;
    let ck = (d - 4) * (a * d - 1);
    let k2 = d * (d - 4) * (d - 4);
    (c2, ck, k2)
}

pub fn hypotheses_hold(c2: i128, ck: i128, k2: i128) -> bool {
    let t = c2 - 2 * ck;
    let cm2k = c2 - 4 * ck + 4 * k2;
    let hodge = ck * ck - c2 * k2;
    let h2 = if t >= 8 { k2 > -4 } else { k2 >= 0 };
    cm2k > 0 && t > 0 && h2 && ck >= 0 && hodge < 4 * (t - 4)
}

pub fn minimal_a_oracle(d: i128, cap: i128) -> Option<i128> {
    (1..=cap).find(|&a| {
        let (c2, ck, k2) = family_numbers(d, a);
        hypotheses_hold(c2, ck, k2)
    })
}
