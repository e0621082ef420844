//! Finite fields GF(p^m) with log, antilog and trace tables.
//!
//! Elements are indexed by `0..q`: the index of `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`
//! is `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The modulus is the lexicographically
//! smallest monic irreducible polynomial of degree `m` (coefficients compared from
//! the constant term upwards) and the primitive element is the smallest generator
//! in index order, so every field is reproducible.

use crate::arith::{is_prime, prime_divisors};
use crate::error::{Error, Result};

/// Default upper bound on `q`; override with `GP_SPECTRA_MAX_Q`.
pub const DEFAULT_MAX_Q: u64 = 1_000_000;

pub const MAX_Q_ENV: &str = "GP_SPECTRA_MAX_Q";

pub fn max_q() -> u64 {
    std::env::var(MAX_Q_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_Q)
}

/// An element, stored as its index.
pub type Elem = u32;

#[derive(Debug, Clone)]
pub struct Field {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    omega: Elem,
    log: Vec<u32>,
    exp: Vec<Elem>,
    trace: Vec<u32>,
    pow_p: Vec<u64>,
}

impl Field {
    /// Build GF(p^m) with the deterministic modulus and generator.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let cap = max_q();
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= cap)
            .ok_or(Error::FieldTooLarge {
                q: p.saturating_pow(m),
                cap,
            })?;
        let modulus = find_irreducible(p, m)?;
        let poly = PolyField {
            p,
            m,
            modulus: &modulus,
        };
        let omega = poly.find_generator(q)?;
        let mut field = Field {
            p,
            m,
            q,
            modulus,
            omega,
            log: Vec::new(),
            exp: Vec::new(),
            trace: Vec::new(),
            pow_p: (0..m).map(|i| p.pow(i)).collect(),
        };
        field.fill_log_tables(omega);
        field.fill_trace_table();
        Ok(field)
    }

    /// The same field with `new_omega` as primitive element.
    pub fn rebased(&self, new_omega: Elem) -> Result<Self> {
        if new_omega == 0 || new_omega as u64 >= self.q {
            return Err(Error::InvalidParameter(format!(
                "{new_omega} is not a nonzero element"
            )));
        }
        let order = (self.q - 1) / num_integer::gcd(self.log(new_omega) as u64, self.q - 1);
        if order != self.q - 1 {
            return Err(Error::InvalidParameter(format!(
                "{new_omega} is not a primitive element of GF({})",
                self.q
            )));
        }
        let mut field = self.clone();
        field.omega = new_omega;
        field.fill_log_tables(new_omega);
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    /// Discrete logarithm base omega. Panics on zero.
    pub fn log(&self, x: Elem) -> u32 {
        assert!(x != 0, "log of zero");
        self.log[x as usize]
    }

    /// `omega^e`.
    pub fn exp(&self, e: u64) -> Elem {
        self.exp[(e % (self.q - 1)) as usize]
    }

    /// Absolute trace to GF(p), as an integer in `0..p`.
    pub fn trace(&self, x: Elem) -> u32 {
        self.trace[x as usize]
    }

    pub fn trace_table(&self) -> &[u32] {
        &self.trace
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    pub fn exp_table(&self) -> &[Elem] {
        &self.exp
    }

    /// Index `i` of the cyclotomic class `C_i = omega^i R_k` containing `x`.
    pub fn coset_index(&self, x: Elem, k: u64) -> u64 {
        self.log(x) as u64 % k
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p) as Elem;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        for &pk in &self.pow_p {
            out += ((a % self.p + b % self.p) % self.p) * pk;
            a /= self.p;
            b /= self.p;
        }
        out as Elem
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut a = a as u64;
        let mut out = 0u64;
        for &pk in &self.pow_p {
            out += ((self.p - a % self.p) % self.p) * pk;
            a /= self.p;
        }
        out as Elem
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp(e)
    }

    /// The multiplicative subgroup `R_k` of `k`-th powers, in the order
    /// `omega^0, omega^k, omega^2k, ...`.
    pub fn kth_powers(&self, k: u64) -> Vec<Elem> {
        let k = num_integer::gcd(k, self.q - 1);
        let n = (self.q - 1) / k;
        (0..n).map(|j| self.exp(j * k)).collect()
    }

    fn fill_log_tables(&mut self, omega: Elem) {
        let q = self.q as usize;
        let poly = PolyField {
            p: self.p,
            m: self.m,
            modulus: &self.modulus,
        };
        let w = poly.to_digits(omega as u64);
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur = poly.to_digits(1);
        for e in 0..q - 1 {
            let idx = poly.to_index(&cur) as Elem;
            exp.push(idx);
            log[idx as usize] = e as u32;
            cur = poly.mul(&cur, &w);
        }
        self.exp = exp;
        self.log = log;
    }

    fn fill_trace_table(&mut self) {
        let poly = PolyField {
            p: self.p,
            m: self.m,
            modulus: &self.modulus,
        };
        let m = self.m as usize;
        let basis: Vec<u64> = (0..m)
            .map(|i| {
                let mut e = vec![0u64; m];
                e[i] = 1;
                poly.trace_of(&e)
            })
            .collect();
        let p = self.p;
        let trace = (0..self.q)
            .map(|mut idx| {
                let mut t = 0u64;
                for &b in &basis {
                    t += (idx % p) * b;
                    idx /= p;
                }
                (t % p) as u32
            })
            .collect();
        self.trace = trace;
    }
}

/// Polynomial arithmetic modulo the field modulus; used only while building tables.
struct PolyField<'a> {
    p: u64,
    m: u32,
    modulus: &'a [u64],
}

impl PolyField<'_> {
    fn to_digits(&self, mut idx: u64) -> Vec<u64> {
        (0..self.m)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    fn to_index(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let m = self.m as usize;
        let mut prod = vec![0u128; 2 * m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for d in (m..2 * m).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (i, &f) in self.modulus[..m].iter().enumerate() {
                let t = prod[d - m + i] + (p - c) * f as u128 % p;
                prod[d - m + i] = t % p;
            }
            prod[d] = 0;
        }
        prod[..m].iter().map(|&c| c as u64).collect()
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.to_digits(1);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn trace_of(&self, a: &[u64]) -> u64 {
        let mut cur = a.to_vec();
        let mut acc = vec![0u64; self.m as usize];
        for _ in 0..self.m {
            for (s, c) in acc.iter_mut().zip(&cur) {
                *s = (*s + c) % self.p;
            }
            cur = self.pow(&cur, self.p);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    fn find_generator(&self, q: u64) -> Result<Elem> {
        let primes = prime_divisors(q - 1);
        let one = self.to_digits(1);
        (1..q)
            .find(|&g| {
                let d = self.to_digits(g);
                primes.iter().all(|&r| self.pow(&d, (q - 1) / r) != one)
            })
            .map(|g| g as Elem)
            .ok_or(Error::NoGenerator(q))
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `m` over GF(p),
/// coefficients listed constant term first and compared in that order.
pub fn find_irreducible(p: u64, m: u32) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if m == 1 {
        return Ok(vec![0, 1]);
    }
    let count = p.checked_pow(m).ok_or(Error::FieldTooLarge {
        q: u64::MAX,
        cap: max_q(),
    })?;
    for t in 0..count {
        // The constant term is the most significant digit of `t`.
        let mut coeffs = vec![0u64; m as usize + 1];
        let mut rest = t;
        for i in (0..m as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[m as usize] = 1;
        if coeffs[0] != 0 && is_irreducible(p, &coeffs) {
            return Ok(coeffs);
        }
    }
    Err(Error::NoSolution(format!(
        "no irreducible polynomial of degree {m} over GF({p})"
    )))
}

/// Rabin's test for a monic polynomial over GF(p).
pub fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = f.len() as u32 - 1;
    if m == 1 {
        return true;
    }
    let poly = PolyField { p, m, modulus: f };
    let mut x = vec![0u64; m as usize];
    x[1] = 1;
    let frob = |a: &[u64], times: u32| -> Vec<u64> {
        let mut cur = a.to_vec();
        for _ in 0..times {
            cur = poly.pow(&cur, p);
        }
        cur
    };
    if frob(&x, m) != x {
        return false;
    }
    for r in prime_divisors(m as u64) {
        let mut h = frob(&x, m / r as u32);
        h[1] = (h[1] + p - 1) % p;
        if gcd_degree(p, f, &h) > 0 {
            return false;
        }
    }
    true
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    trim(&mut a);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let shift = a.len() - 1 - db;
        let c = a[a.len() - 1] * inv % p;
        for (i, &bc) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + (p - c) * bc % p) % p;
        }
        trim(&mut a);
    }
    a
}

/// Degree of `gcd(f, h)`; `h` is given modulo `f`.
fn gcd_degree(p: u64, f: &[u64], h: &[u64]) -> usize {
    let mut a = f.to_vec();
    let mut b = h.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_modulus_and_generator() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x^2 + 1: x has order 4, so the smallest generator is 1 + x (index 4).
        assert_eq!(f.omega(), 4);
    }

    #[test]
    fn gf5_generator() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.omega(), 2);
        assert_eq!(f.coset_index(4, 2), 0);
        assert_eq!(f.coset_index(2, 2), 1);
    }

    #[test]
    fn gf8_modulus() {
        assert_eq!(find_irreducible(2, 3).unwrap(), vec![1, 0, 1, 1]);
        assert_eq!(find_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(2, &[1, 1, 0, 0, 1]));
        assert!(!is_irreducible(2, &[1, 0, 1, 0, 1]));
        assert!(!is_irreducible(3, &[2, 0, 1]));
    }

    #[test]
    fn trace_is_linear_and_balanced() {
        let f = Field::new(3, 3).unwrap();
        let mut counts = [0u32; 3];
        for x in 0..27 {
            counts[f.trace(x) as usize] += 1;
            for y in 0..27 {
                assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % 3);
            }
        }
        assert_eq!(counts, [9, 9, 9]);
    }

    #[test]
    fn prime_field_trace_is_identity() {
        let f = Field::new(7, 1).unwrap();
        for x in 0..7 {
            assert_eq!(f.trace(x), x);
        }
    }

    #[test]
    fn rebase_preserves_subgroups() {
        let f = Field::new(2, 4).unwrap();
        let g = f.rebased(f.exp(7)).unwrap();
        let mut a = f.kth_powers(3);
        let mut b = g.kth_powers(3);
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(f.rebased(f.exp(3)).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            Field::new(1009, 3),
            Err(Error::FieldTooLarge { .. })
        ));
    }
}
