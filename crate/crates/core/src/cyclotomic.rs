//! Exact Gaussian periods and period polynomials.
//!
//! A [`CycInt`] is an element of `Z[zeta_p]` written as `sum_j c_j zeta^j` over
//! `j = 0..p`. Since `1 + zeta + ... + zeta^{p-1} = 0` the representation is only
//! unique up to adding a constant to every count; we normalise so the smallest
//! count is zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    counts: Vec<i64>,
}

impl CycInt {
    pub fn from_counts(p: u64, mut counts: Vec<i64>) -> Self {
        assert_eq!(counts.len() as u64, p, "need one count per power of zeta");
        let min = counts.iter().copied().min().unwrap_or(0);
        counts.iter_mut().for_each(|c| *c -= min);
        CycInt { p, counts }
    }

    pub fn from_int(p: u64, v: i64) -> Self {
        let mut counts = vec![0; p as usize];
        counts[0] = v;
        Self::from_counts(p, counts)
    }

    pub fn zero(p: u64) -> Self {
        Self::from_int(p, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Canonical counts (minimum entry zero).
    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn is_rational(&self) -> bool {
        self.counts[1..].windows(2).all(|w| w[0] == w[1])
    }

    /// The integer value, if this element lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        if !self.is_rational() {
            return None;
        }
        Some(self.counts[0] - self.counts.get(1).copied().unwrap_or(0))
    }

    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * j as f64 / p))
            .sum()
    }

    /// The Galois image under `zeta -> zeta^a`, `a` prime to `p`.
    pub fn galois(&self, a: u64) -> Self {
        let p = self.p as usize;
        let mut counts = vec![0; p];
        for (t, &c) in self.counts.iter().enumerate() {
            counts[(t * a as usize) % p] = c;
        }
        Self::from_counts(self.p, counts)
    }

    /// Multiply by a rational integer.
    pub fn scale(&self, s: i64) -> Self {
        Self::from_counts(self.p, self.counts.iter().map(|c| c * s).collect())
    }

    pub fn add_int(&self, v: i64) -> Self {
        let mut counts = self.counts.clone();
        counts[0] += v;
        Self::from_counts(self.p, counts)
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p);
        CycInt::from_counts(
            self.p,
            self.counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p);
        CycInt::from_counts(
            self.p,
            self.counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p);
        let p = self.p as usize;
        let mut out = vec![0i64; p];
        for (i, &a) in self.counts.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.counts.iter().enumerate().filter(|(_, &b)| b != 0) {
                out[(i + j) % p] += a * b;
            }
        }
        CycInt::from_counts(self.p, out)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (j, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c != 0) {
            let sign = if first { "" } else { " + " };
            first = false;
            match (c, j) {
                (_, 0) => write!(f, "{sign}{c}")?,
                (1, _) => write!(f, "{sign}z^{j}")?,
                _ => write!(f, "{sign}{c}*z^{j}")?,
            }
        }
        write!(f, " (z = exp(2*pi*i/{}))", self.p)
    }
}

/// The Gaussian periods `eta_0, ..., eta_{k-1}` of GF(q) for `k | q - 1`, where
/// `eta_i = sum_{x in C_i} zeta_p^{Tr(x)}`.
pub fn gaussian_periods(field: &Field, k: u64) -> Result<Vec<CycInt>> {
    let q = field.q();
    if k == 0 || !(q - 1).is_multiple_of(k) {
        return Err(Error::Precondition(format!(
            "k = {k} must divide q - 1 = {}",
            q - 1
        )));
    }
    let p = field.p() as usize;
    let mut counts = vec![vec![0i64; p]; k as usize];
    let trace = field.trace_table();
    for (e, &x) in field.exp_table().iter().enumerate() {
        counts[e % k as usize][trace[x as usize] as usize] += 1;
    }
    Ok(counts
        .into_iter()
        .map(|c| CycInt::from_counts(field.p(), c))
        .collect())
}

/// A polynomial with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntPoly {
    #[serde(serialize_with = "serialize_bigints")]
    coeffs: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `prod (X - r)` over the given roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        let mut acc = IntPoly::from_i64(&[1]);
        for &r in roots {
            acc = acc.mul(&IntPoly::from_i64(&[-r, 1]));
        }
        acc
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `X^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| {
            acc * x + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    /// `k^k P((X - 1) / k)` for a monic `P` of degree `k`; its roots are `k r + 1`.
    pub fn reduced(&self, k: u64) -> IntPoly {
        let kk = BigInt::from(k);
        let deg = self.degree();
        let x_minus_1 = IntPoly::from_i64(&[-1, 1]);
        let mut out = IntPoly::from_i64(&[0]);
        let mut power = IntPoly::from_i64(&[1]);
        for (j, c) in self.coeffs.iter().enumerate() {
            let scale = c * num_traits::pow(kk.clone(), deg - j);
            let term = IntPoly::new(power.coeffs.iter().map(|a| a * &scale).collect());
            out = out.add(&term);
            power = power.mul(&x_minus_1);
        }
        out
    }

    fn add(&self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_coeff = j == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match j {
                0 => {}
                1 => write!(f, "{}X", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}X^{j}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Rough operation count for expanding a product of `degree` linear factors
/// with periods of support `support` in `Z[zeta_p]`.
pub fn expansion_cost(degree: u64, p: u64, support: u64) -> u64 {
    degree
        .saturating_mul(degree)
        .saturating_mul(p)
        .saturating_mul(support.min(p))
        / 2
}

/// The period polynomial `prod_i (X - eta_i)`, verified to lie in `Z[X]`.
pub fn period_polynomial(field: &Field, k: u64) -> Result<IntPoly> {
    let periods = gaussian_periods(field, k)?;
    expand_linear_factors(field.p(), &periods)
}

/// `k^k Psi((X - 1) / k)`, whose roots are `k eta_i + 1`.
pub fn reduced_period_polynomial(field: &Field, k: u64) -> Result<IntPoly> {
    Ok(period_polynomial(field, k)?.reduced(k))
}

/// Number of Galois orbits on the periods, `gcd((q - 1)/(p - 1), k)`.
pub fn orbit_count(field: &Field, k: u64) -> u64 {
    let q = field.q();
    num_integer::gcd((q - 1) / (field.p() - 1), k)
}

/// The shift `s` with `sigma_a(eta_i) = eta_{i + s}` for all `i`, where `sigma_a` is
/// the Galois automorphism `zeta -> zeta^a` for the smallest generator `a` of
/// `(Z/p)^*`. `None` if the generator does not act on the periods as a shift.
///
/// The Galois orbits on the periods are then the classes mod `gcd(s, k)`, and
/// every product over a union of orbits has rational, hence integral, coefficients.
pub fn galois_shift(periods: &[CycInt]) -> Option<u64> {
    let k = periods.len();
    let p = periods.first()?.p();
    if p == 2 {
        return Some(0);
    }
    let a = (2..p).find(|&a| crate::arith::mult_order(a, p) == Some(p - 1))?;
    let image0 = periods[0].galois(a);
    (0..k)
        .filter(|&s| periods[s] == image0)
        .find(|&s| (0..k).all(|i| periods[i].galois(a) == periods[(i + s) % k]))
        .map(|s| s as u64)
}

/// The factors `prod_{j = i mod N} (X - eta_j)` for `i = 0..N`, each verified to
/// have integer coefficients.
pub fn orbit_factors(field: &Field, k: u64) -> Result<Vec<IntPoly>> {
    let periods = gaussian_periods(field, k)?;
    let n_orbits = orbit_count(field, k) as usize;
    (0..n_orbits)
        .map(|i| {
            let orbit: Vec<CycInt> = periods.iter().skip(i).step_by(n_orbits).cloned().collect();
            expand_linear_factors(field.p(), &orbit)
        })
        .collect()
}

/// Expand `prod (X - r)` over `Z[zeta_p]` and project every coefficient to `Z`.
pub fn expand_linear_factors(p: u64, roots: &[CycInt]) -> Result<IntPoly> {
    match expand_i128(p, roots) {
        Some(coeffs) => project(
            p,
            coeffs
                .into_iter()
                .map(|c| c.into_iter().map(BigInt::from).collect()),
        ),
        None => project(p, expand_big(p, roots).into_iter()),
    }
}

fn project(p: u64, coeffs: impl Iterator<Item = Vec<BigInt>>) -> Result<IntPoly> {
    let mut out = Vec::new();
    for (j, c) in coeffs.enumerate() {
        if p > 1 && c[1..].windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::NonIntegral(format!(
                "coefficient of X^{j} is not in Z"
            )));
        }
        let tail = c.get(1).cloned().unwrap_or_default();
        out.push(&c[0] - tail);
    }
    Ok(IntPoly::new(out))
}

fn expand_i128(p: u64, roots: &[CycInt]) -> Option<Vec<Vec<i128>>> {
    let p = p as usize;
    let mut poly: Vec<Vec<i128>> = vec![one_vec(p)];
    for r in roots {
        let support: Vec<(usize, i128)> = r
            .counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c as i128))
            .collect();
        let mut next = vec![vec![0i128; p]; poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            for (t, &v) in c.iter().enumerate() {
                next[j + 1][t] = next[j + 1][t].checked_add(v)?;
            }
            for &(s, a) in &support {
                for (t, &v) in c.iter().enumerate().filter(|(_, &v)| v != 0) {
                    let idx = (s + t) % p;
                    next[j][idx] = next[j][idx].checked_sub(a.checked_mul(v)?)?;
                }
            }
        }
        for c in &mut next {
            let min = *c.iter().min().unwrap();
            for v in c.iter_mut() {
                *v = v.checked_sub(min)?;
            }
        }
        poly = next;
    }
    Some(poly)
}

fn expand_big(p: u64, roots: &[CycInt]) -> Vec<Vec<BigInt>> {
    let p = p as usize;
    let mut poly: Vec<Vec<BigInt>> = vec![one_vec(p).into_iter().map(BigInt::from).collect()];
    for r in roots {
        let support: Vec<(usize, BigInt)> = r
            .counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, BigInt::from(c)))
            .collect();
        let mut next = vec![vec![BigInt::zero(); p]; poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            for (t, v) in c.iter().enumerate() {
                next[j + 1][t] += v;
            }
            for (s, a) in &support {
                for (t, v) in c.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    next[j][(s + t) % p] -= a * v;
                }
            }
        }
        for c in &mut next {
            let min = c.iter().min().unwrap().clone();
            c.iter_mut().for_each(|v| *v -= &min);
        }
        poly = next;
    }
    poly
}

fn one_vec(p: usize) -> Vec<i128> {
    let mut v = vec![0; p];
    v[0] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = CycInt::from_counts(5, vec![3, 1, 1, 1, 1]);
        assert_eq!(a.counts(), &[2, 0, 0, 0, 0]);
        assert_eq!(a.as_integer(), Some(2));
        let b = CycInt::from_counts(5, vec![0, 1, 1, 1, 1]);
        assert_eq!(b.as_integer(), Some(-1));
        assert!((b.to_complex().re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn wide_coefficients_fall_back_to_bigints() {
        let f = Field::new(2, 10).unwrap();
        let per = gaussian_periods(&f, 93).unwrap();
        let psi = expand_linear_factors(2, &per).unwrap();
        let n = orbit_count(&f, 93) as usize;
        let prod = (0..n).fold(IntPoly::from_i64(&[1]), |acc, i| {
            let orbit: Vec<CycInt> = per.iter().skip(i).step_by(n).cloned().collect();
            acc.mul(&expand_linear_factors(2, &orbit).unwrap())
        });
        assert_eq!(prod, psi);
    }

    #[test]
    fn galois_orbits() {
        let f = Field::new(7, 1).unwrap();
        let per = gaussian_periods(&f, 3).unwrap();
        let s = galois_shift(&per).unwrap();
        assert_eq!(num_integer::gcd(s, 3), orbit_count(&f, 3));
        let f = Field::new(3, 2).unwrap();
        let per = gaussian_periods(&f, 4).unwrap();
        assert_eq!(galois_shift(&per), Some(0));
        let f = Field::new(5, 2).unwrap();
        let per = gaussian_periods(&f, 8).unwrap();
        let s = galois_shift(&per).unwrap();
        assert_eq!(num_integer::gcd(s, 8), orbit_count(&f, 8));
    }

    #[test]
    fn arithmetic() {
        let z = CycInt::from_counts(3, vec![0, 1, 0]);
        let z2 = &z * &z;
        assert_eq!(z2.counts(), &[0, 0, 1]);
        let sum = &(&CycInt::from_int(3, 1) + &z) + &z2;
        assert_eq!(sum.as_integer(), Some(0));
        assert_eq!((&z - &z).as_integer(), Some(0));
        assert_eq!((-&z).add_int(0).as_integer(), None);
    }

    #[test]
    fn periods_of_gf5() {
        let f = Field::new(5, 1).unwrap();
        let eta = gaussian_periods(&f, 2).unwrap();
        // eta_0 = z + z^4 = (-1 + sqrt 5)/2.
        assert_eq!(eta[0].counts(), &[0, 1, 0, 0, 1]);
        let v = eta[0].to_complex().re;
        assert!((v - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn period_polynomial_of_gf7_cubic() {
        let f = Field::new(7, 1).unwrap();
        let psi = period_polynomial(&f, 3).unwrap();
        // X^3 + X^2 - 2X - 1
        assert_eq!(psi, IntPoly::from_i64(&[-1, -2, 1, 1]));
        assert_eq!(psi.to_string(), "X^3 + X^2 - 2*X - 1");
    }

    #[test]
    fn reduced_polynomial_roots() {
        let p = IntPoly::from_roots(&[1, -2]);
        let r = p.reduced(2);
        assert_eq!(r, IntPoly::from_roots(&[3, -3]));
    }

    #[test]
    fn big_path_matches_small_path() {
        let f = Field::new(13, 1).unwrap();
        let eta = gaussian_periods(&f, 4).unwrap();
        let a = project(13, expand_big(13, &eta).into_iter()).unwrap();
        let b = expand_linear_factors(13, &eta).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_integral_is_rejected() {
        let z = CycInt::from_counts(5, vec![0, 1, 0, 0, 0]);
        assert!(matches!(
            expand_linear_factors(5, &[z]),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn rejects_non_divisor() {
        let f = Field::new(7, 1).unwrap();
        assert!(gaussian_periods(&f, 4).is_err());
    }
}
