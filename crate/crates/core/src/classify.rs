//! Structural classification: integrality, semiprimitive pairs, strongly regular
//! parameters, Ramanujan verdicts, Hamming detection and energy.

use serde::Serialize;

use crate::arith::{divisors, pow_mod};
use crate::cyclotomic::gaussian_periods;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::gp_is_connected;
use crate::spectra::{
    closed_form_k3, closed_form_k4, closed_form_semiprimitive, spectrum_complement, Spectrum,
};

/// Absolute slack when comparing floating eigenvalue moduli against bounds.
const BOUND_TOL: f64 = 1e-9;

/// `Gamma(k, q)` is integral iff `k | (q - 1)/(p - 1)`.
pub fn is_integral_pred(p: u64, m: u32, k: u64) -> bool {
    let q = p.pow(m);
    ((q - 1) / (p - 1)).is_multiple_of(k)
}

/// The arithmetic condition `(p = 1 mod k and k | m) or p != 1 mod k`.
pub fn integrality_condition(p: u64, m: u32, k: u64) -> bool {
    if k == 1 {
        return true;
    }
    p % k != 1 || (m as u64).is_multiple_of(k)
}

/// Checks that the integrality criterion agrees with the exact periods and that
/// `k eta + 1 = 0 (mod p)` for every integral period.
pub fn check_integrality_consistency(field: &Field, k: u64) -> Result<bool> {
    let periods = gaussian_periods(field, k)?;
    let pred = is_integral_pred(field.p(), field.m(), k);
    let values: Vec<Option<i64>> = periods.iter().map(|c| c.as_integer()).collect();
    let all_integral = values.iter().all(Option::is_some);
    if pred != all_integral {
        return Ok(false);
    }
    let p = field.p() as i64;
    Ok(!all_integral
        || values
            .iter()
            .flatten()
            .all(|&eta| (k as i64 * eta + 1).rem_euclid(p) == 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemiprimitiveWitness {
    /// Smallest `t >= 1` with `k | p^t + 1`.
    pub t: u32,
    /// `m / (2t)`.
    pub s: u32,
    /// `(-1)^(s + 1)`.
    pub sigma: i8,
    /// Set for `k = 2`, where `t = 1` always and the Paley formulas apply.
    pub degenerate_k2: bool,
}

/// A witness that `(k, p^m)` is a semiprimitive pair: `m` even, `k | p^t + 1`
/// for some `t | m/2`, and `k != p^(m/2) + 1`.
///
/// For `k = 2` this means `p` odd and `m` even.
pub fn is_semiprimitive_pair(k: u64, p: u64, m: u32) -> Option<SemiprimitiveWitness> {
    if k < 2 || m == 0 || !m.is_multiple_of(2) {
        return None;
    }
    let half = m / 2;
    if k == 2 {
        if p == 2 {
            return None;
        }
        return Some(SemiprimitiveWitness {
            t: 1,
            s: half,
            sigma: sign(half),
            degenerate_k2: true,
        });
    }
    if p.checked_pow(half).and_then(|r| r.checked_add(1)) == Some(k) {
        return None;
    }
    divisors(half as u64)
        .into_iter()
        .map(|t| t as u32)
        .find(|&t| (pow_mod(p, t as u64, k) + 1).is_multiple_of(k))
        .map(|t| {
            let s = m / (2 * t);
            SemiprimitiveWitness {
                t,
                s,
                sigma: sign(s),
                degenerate_k2: false,
            }
        })
}

fn sign(s: u32) -> i8 {
    if s % 2 == 1 {
        1
    } else {
        -1
    }
}

/// All `k` with `(k, p^m)` semiprimitive, sorted.
pub fn table1_semiprimitive_k(p: u64, m: u32) -> Vec<u64> {
    if m == 0 || !m.is_multiple_of(2) {
        return Vec::new();
    }
    let mut ks: Vec<u64> = divisors((m / 2) as u64)
        .into_iter()
        .flat_map(|t| divisors(p.pow(t as u32) + 1))
        .chain(std::iter::once(2))
        .filter(|&k| is_semiprimitive_pair(k, p, m).is_some())
        .collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatinType {
    /// `PL_delta(w) = srg(w^2, delta(w-1), delta^2 - 3delta + w, delta(delta-1))`.
    Pseudo {
        delta: i64,
        w: i64,
        consistent: bool,
    },
    /// `srg(w^2, h(w+1), h^2 + 3h - w, h(h+1))`, `h` the positive eigenvalue; for
    /// `Gamma(k, q)` itself `h = min(|f|, |g|)`.
    NegativeLike { h: i64, w: i64, consistent: bool },
}

impl LatinType {
    /// Short label such as `PL_3(8)`, or `None` for the negative-like type.
    pub fn pl_label(&self) -> Option<String> {
        match self {
            LatinType::Pseudo { delta, w, .. } => Some(format!("PL_{delta}({w})")),
            LatinType::NegativeLike { .. } => None,
        }
    }

    pub fn consistent(&self) -> bool {
        match self {
            LatinType::Pseudo { consistent, .. } | LatinType::NegativeLike { consistent, .. } => {
                *consistent
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SrgTuple {
    pub v: i64,
    pub r: i64,
    pub e: i64,
    pub d: i64,
}

impl SrgTuple {
    /// `r(r - e - 1) = (v - r - 1) d`.
    pub fn feasible(&self) -> bool {
        self.r * (self.r - self.e - 1) == (self.v - self.r - 1) * self.d
    }

    /// Parameters of the complementary graph.
    pub fn complement(&self) -> SrgTuple {
        SrgTuple {
            v: self.v,
            r: self.v - self.r - 1,
            e: self.v - 2 - 2 * self.r + self.d,
            d: self.v - 2 * self.r + self.e,
        }
    }

    /// Intersection array `{r, r - e - 1; 1, d}`.
    pub fn intersection_array(&self) -> [i64; 4] {
        [self.r, self.r - self.e - 1, 1, self.d]
    }

    pub fn is_conference(&self) -> bool {
        2 * self.r + (self.v - 1) * (self.e - self.d) == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub graph: SrgTuple,
    pub complement: SrgTuple,
    pub intersection_array: [i64; 4],
    pub complement_intersection_array: [i64; 4],
    pub latin: LatinType,
    pub complement_latin: LatinType,
    pub conference: bool,
    pub witness: SemiprimitiveWitness,
}

fn latin_type(v: i64, r: i64, e: i64, d: i64, f: i64, g: i64, s_odd: bool) -> LatinType {
    let w = f - g;
    if s_odd {
        let delta = -g;
        let consistent = (
            w * w,
            delta * (w - 1),
            delta * delta - 3 * delta + w,
            delta * (delta - 1),
        ) == (v, r, e, d);
        LatinType::Pseudo {
            delta,
            w,
            consistent,
        }
    } else {
        let h = f;
        let consistent = (w * w, h * (w + 1), h * h + 3 * h - w, h * (h + 1)) == (v, r, e, d);
        LatinType::NegativeLike { h, w, consistent }
    }
}

/// Strongly regular parameters of a semiprimitive GP-graph and its complement.
pub fn srg_params(k: u64, p: u64, m: u32) -> Result<SrgParams> {
    let sp = closed_form_semiprimitive(k, p, m)?;
    let q = p.pow(m) as i64;
    let n = (q - 1) / k as i64;
    let (l1, l2) = (sp.lambda1, sp.lambda2);
    let d = n + l1 * l2;
    let e = d + l1 + l2;
    let graph = SrgTuple { v: q, r: n, e, d };
    let complement = graph.complement();
    let (f, g) = (l1.max(l2), l1.min(l2));
    let s_odd = sp.witness.s % 2 == 1;
    let latin = latin_type(q, n, e, d, f, g, s_odd);
    let c = complement;
    let complement_latin = latin_type(c.v, c.r, c.e, c.d, -1 - g, -1 - f, s_odd);
    Ok(SrgParams {
        graph,
        complement,
        intersection_array: graph.intersection_array(),
        complement_intersection_array: complement.intersection_array(),
        latin,
        complement_latin,
        conference: graph.is_conference(),
        witness: sp.witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamanujanVerdict {
    /// Largest modulus of an eigenvalue whose modulus differs from the degree.
    pub lambda_max: f64,
    /// `2 sqrt(n - 1)`.
    pub bound_undirected: f64,
    /// `sqrt(n)`.
    pub bound_directed_lp: f64,
    pub is_ramanujan_undirected: bool,
    pub is_ramanujan_directed_classical: bool,
    pub is_ramanujan_directed_lp: bool,
    /// Abelian Cayley graphs have normal adjacency matrices.
    pub adjacency_normal: bool,
    pub directed: bool,
}

impl RamanujanVerdict {
    /// The verdict for the notion matching the graph: undirected, or the classical
    /// directed notion.
    pub fn is_ramanujan(&self) -> bool {
        if self.directed {
            self.is_ramanujan_directed_classical
        } else {
            self.is_ramanujan_undirected
        }
    }
}

/// Ramanujan verdicts for a connected regular graph with the given spectrum.
pub fn is_ramanujan(spec: &Spectrum, directed: bool) -> Result<RamanujanVerdict> {
    if spec.principal_multiplicity() != 1 {
        return Err(Error::Disconnected);
    }
    let n = spec.principal();
    let nf = n as f64;
    let mut lambda = 0.0f64;
    let mut int_max: Option<i64> = Some(0);
    for (v, _) in spec.entries() {
        let z = v.to_complex().norm();
        if (z - nf).abs() <= BOUND_TOL {
            continue;
        }
        lambda = lambda.max(z);
        int_max = match (int_max, v.as_integer()) {
            (Some(a), Some(b)) => Some(a.max(b.abs())),
            _ => None,
        };
    }
    let bound_u = 2.0 * ((n - 1).max(0) as f64).sqrt();
    let bound_lp = nf.sqrt();
    let (und, lp) = match int_max {
        Some(l) => (l * l <= 4 * (n - 1), l * l <= n),
        None => (
            lambda <= bound_u + BOUND_TOL,
            lambda <= bound_lp + BOUND_TOL,
        ),
    };
    Ok(RamanujanVerdict {
        lambda_max: lambda,
        bound_undirected: bound_u,
        bound_directed_lp: bound_lp,
        is_ramanujan_undirected: und,
        is_ramanujan_directed_classical: und,
        is_ramanujan_directed_lp: lp,
        adjacency_normal: true,
        directed,
    })
}

/// The case letter of the Ramanujan classification for a semiprimitive pair, or
/// `None` when the classification says "not Ramanujan".
pub fn rama_case(k: u64, p: u64, m: u32) -> Option<char> {
    let case = match k {
        2 => 'a',
        3 if p == 2 && m >= 4 => 'b',
        3 if p != 2 && p % 3 == 2 && m >= 2 => 'c',
        4 if p == 3 && m >= 4 => 'd',
        4 if p != 3 && p % 4 == 3 && m >= 2 => 'e',
        5 if p == 2 && m >= 8 && m.is_multiple_of(4) => 'f',
        5 if p != 2 && (p % 5 == 2 || p % 5 == 3) && m >= 4 && m.is_multiple_of(4) => 'g',
        5 if p % 5 == 4 && m >= 2 && m.is_multiple_of(2) => 'h',
        _ => return None,
    };
    Some(case)
}

/// The arithmetic Ramanujan classification of a semiprimitive GP-graph. Also
/// checks that the complement is Ramanujan.
pub fn rama_classification_semiprimitive(k: u64, p: u64, m: u32) -> Result<bool> {
    let sp = closed_form_semiprimitive(k, p, m)?;
    let comp = is_ramanujan(&sp.complement, false)?;
    if !comp.is_ramanujan_undirected {
        return Err(Error::TheoremViolation(format!(
            "complement of Gamma({k}, {p}^{m}) is not Ramanujan: lambda = {}",
            comp.lambda_max
        )));
    }
    Ok(rama_case(k, p, m).is_some())
}

/// Direct Ramanujan verdict for `Gamma(k, q)` with `k` in `{3, 4}` and `p = 1 (mod k)`
/// (and `m` even for `k = 4`), from the closed-form spectrum.
pub fn check_rama_nonsemiprimitive_k34(p: u64, m: u32, k: u64) -> Result<RamanujanVerdict> {
    let spec = match k {
        3 if p % 3 == 1 => closed_form_k3(p, m)?,
        4 if p % 4 == 1 && m.is_multiple_of(2) => closed_form_k4(p, m)?,
        _ => {
            return Err(Error::Precondition(format!(
                "needs k in {{3, 4}} with p = 1 mod k (m even for k = 4), got k = {k}, p = {p}, m = {m}"
            )))
        }
    };
    is_ramanujan(&spec, false)
}

/// `(b, m)` with `k = (p^M - 1)/(b(p^m - 1))`, `M = b m` and `b | (p^M - 1)/(p^m - 1)`,
/// in which case `Gamma(k, p^M)` is the Hamming graph `H(b, p^m)`.
///
/// The graph must also be connected: `Gamma(10, 81)` has the arithmetic shape with
/// `b = 4` but its connection set is `GF(9)^*`.
pub fn is_hamming_gp(k: u64, p: u64, big_m: u32) -> Option<(u32, u32)> {
    let qm = (p as u128).checked_pow(big_m)?;
    if k == 0 || (qm - 1) % k as u128 != 0 {
        return None;
    }
    let n = ((qm - 1) / k as u128) as u64;
    if !gp_is_connected(p, big_m, n) {
        return None;
    }
    for b in divisors(big_m as u64) {
        let m = big_m / b as u32;
        let base = (p as u128).pow(m) - 1;
        let ratio = (qm - 1) / base;
        if ratio.is_multiple_of(b as u128) && ratio / b as u128 == k as u128 {
            return Some((b as u32, m));
        }
    }
    None
}

/// Waring number `g(k, q)`: the least `g` with every element a sum of `g` values
/// `x^k`, `x` in GF(q). `None` when the `k`-th powers lie in a proper subfield.
///
/// The balls `B_j` are unions of cosets of `R_k` and `B_j + R_k = R_k (B_j + 1)`,
/// so each step costs `O(q)`.
pub fn waring_number(field: &Field, k: u64) -> Option<u32> {
    let q = field.q() as usize;
    let k = num_integer::gcd(k, q as u64 - 1);
    let mut ball = vec![false; q];
    ball[0] = true;
    let mut covered = 1;
    let mut g = 0;
    while covered < q {
        let mut hit = vec![false; k as usize];
        let mut zero = false;
        for x in (0..q).filter(|&x| ball[x]) {
            let y = field.add(x as u32, 1);
            if y == 0 {
                zero = true;
            } else {
                hit[field.coset_index(y, k) as usize] = true;
            }
        }
        let mut next = ball.clone();
        next[0] |= zero;
        for x in 1..q {
            if !next[x] && hit[field.coset_index(x as u32, k) as usize] {
                next[x] = true;
            }
        }
        let count = next.iter().filter(|&&b| b).count();
        if count == covered {
            return None;
        }
        ball = next;
        covered = count;
        g += 1;
    }
    Some(g)
}

/// Energy `E = sum mult |lambda|` of an integral spectrum and whether the degree
/// divides it.
pub fn energy_check(spec: &Spectrum) -> Result<(i64, bool)> {
    let entries = spec
        .integer_entries()
        .ok_or_else(|| Error::Precondition("energy check needs an integral spectrum".into()))?;
    let e: i64 = entries.iter().map(|&(v, m)| v.abs() * m as i64).sum();
    let n = spec.principal();
    Ok((e, n != 0 && e % n == 0))
}

/// Ramanujan verdict for the complement of a spectrum.
pub fn complement_ramanujan(spec: &Spectrum) -> Result<RamanujanVerdict> {
    is_ramanujan(&spectrum_complement(spec), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn waring_numbers() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(waring_number(&f, 2), Some(2));
        assert_eq!(waring_number(&f, 4), None);
        assert_eq!(waring_number(&f, 1), Some(1));
        let f = Field::new(2, 4).unwrap();
        assert_eq!(waring_number(&f, 3), Some(2));
        let f = Field::new(7, 1).unwrap();
        assert_eq!(waring_number(&f, 3), Some(3));
    }

    #[test]
    fn integrality() {
        assert!(!is_integral_pred(5, 1, 2));
        assert!(is_integral_pred(3, 2, 2));
        assert!(is_integral_pred(7, 3, 3));
        let f = Field::new(3, 2).unwrap();
        assert!(check_integrality_consistency(&f, 4).unwrap());
        let f = Field::new(7, 1).unwrap();
        assert!(check_integrality_consistency(&f, 3).unwrap());
    }

    #[test]
    fn semiprimitive_witnesses() {
        let w = is_semiprimitive_pair(5, 3, 4).unwrap();
        assert_eq!((w.t, w.s, w.sigma), (2, 1, 1));
        assert!(is_semiprimitive_pair(10, 3, 4).is_none());
        let w = is_semiprimitive_pair(41, 3, 8).unwrap();
        assert_eq!((w.t, w.s, w.sigma), (4, 1, 1));
        assert!(is_semiprimitive_pair(2, 5, 1).is_none());
        assert!(is_semiprimitive_pair(2, 3, 2).unwrap().degenerate_k2);
    }

    #[test]
    fn table_one_cells() {
        assert_eq!(table1_semiprimitive_k(5, 4), vec![2, 3, 6, 13]);
        assert_eq!(table1_semiprimitive_k(7, 2), vec![2, 4]);
        assert_eq!(
            table1_semiprimitive_k(5, 6),
            vec![2, 3, 6, 7, 9, 14, 18, 21, 42, 63]
        );
        assert_eq!(table1_semiprimitive_k(2, 2), Vec::<u64>::new());
    }

    #[test]
    fn srg_rows() {
        let s = srg_params(3, 5, 2).unwrap();
        assert_eq!(
            s.graph,
            SrgTuple {
                v: 25,
                r: 8,
                e: 3,
                d: 2
            }
        );
        assert_eq!(
            s.complement,
            SrgTuple {
                v: 25,
                r: 16,
                e: 9,
                d: 12
            }
        );
        assert_eq!(s.latin.pl_label().as_deref(), Some("PL_2(5)"));
        assert_eq!(s.complement_latin.pl_label().as_deref(), Some("PL_4(5)"));
        assert!(s.latin.consistent() && s.complement_latin.consistent());
        let s = srg_params(4, 3, 4).unwrap();
        assert_eq!(
            s.graph,
            SrgTuple {
                v: 81,
                r: 20,
                e: 1,
                d: 6
            }
        );
        assert!(s.latin.pl_label().is_none());
        assert!(s.latin.consistent());
        let s = srg_params(5, 7, 4).unwrap();
        assert_eq!(
            s.graph,
            SrgTuple {
                v: 2401,
                r: 480,
                e: 119,
                d: 90
            }
        );
        assert_eq!(s.latin.pl_label().as_deref(), Some("PL_10(49)"));
        assert!(!s.conference);
    }

    #[test]
    fn ramanujan_verdicts() {
        let p5 = crate::spectra::closed_form_k2(5, 1).unwrap();
        let v = is_ramanujan(&p5, false).unwrap();
        assert!((v.lambda_max - 1.618033988749895).abs() < 1e-9);
        assert!(v.is_ramanujan_undirected);
        let p7 = crate::spectra::closed_form_k2(7, 1).unwrap();
        let v = is_ramanujan(&p7, true).unwrap();
        assert!(v.is_ramanujan_directed_classical && v.is_ramanujan_directed_lp);
        let g49 = crate::spectra::closed_form_k4(3, 2).unwrap();
        assert_eq!(is_ramanujan(&g49, false), Err(Error::Disconnected));
    }

    #[test]
    fn classification_examples() {
        assert!(rama_classification_semiprimitive(3, 2, 4).unwrap());
        // 5 = 2^2 + 1, so (5, 16) is excluded from the semiprimitive pairs.
        assert!(rama_classification_semiprimitive(5, 2, 4).is_err());
        assert!(rama_classification_semiprimitive(5, 2, 8).unwrap());
        assert!(
            !rama_classification_semiprimitive(5, 3, 4).unwrap() || rama_case(5, 3, 4) == Some('g')
        );
        assert!(!rama_classification_semiprimitive(13, 5, 4).unwrap());
        assert!(
            check_rama_nonsemiprimitive_k34(7, 3, 3)
                .unwrap()
                .is_ramanujan_undirected
        );
        assert!(
            check_rama_nonsemiprimitive_k34(5, 4, 4)
                .unwrap()
                .is_ramanujan_undirected
        );
    }

    #[test]
    fn hamming_detection() {
        assert_eq!(is_hamming_gp(3, 5, 2), Some((2, 1)));
        assert_eq!(is_hamming_gp(2, 3, 2), Some((2, 1)));
        assert_eq!(is_hamming_gp(3, 7, 2), None);
        assert_eq!(is_hamming_gp(1, 7, 3), Some((1, 3)));
        assert_eq!(is_hamming_gp(10, 3, 4), None);
    }

    #[test]
    fn energies() {
        let f = Field::new(2, 4).unwrap();
        let s = crate::spectra::spectrum_from_periods(&f, 3).unwrap();
        assert_eq!(energy_check(&s).unwrap(), (30, true));
        let f = Field::new(3, 4).unwrap();
        let s = crate::spectra::spectrum_from_periods(&f, 4).unwrap();
        assert_eq!(energy_check(&s).unwrap(), (280, true));
    }
}
