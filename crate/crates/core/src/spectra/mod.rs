//! Spectra of generalized Paley graphs: the general period-based spectrum and
//! the closed forms for particular `k`.

mod closed;
mod diophantine;

pub use closed::{
    closed_form, closed_form_k2, closed_form_k3, closed_form_k4, closed_form_k5_p1mod5,
    closed_form_semiprimitive, hamming_spectrum, ClosedForm, SemiprimitiveSpectra,
};
pub use diophantine::{solve_3_27, solve_dickson, solve_two_squares, DicksonSet, DicksonSolution};

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::cyclotomic::{gaussian_periods, CycInt};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::Variant;

/// Complex distance under which two descriptor eigenvalues are merged.
pub const MERGE_TOL: f64 = 1e-9;

/// A symbolic closed-form eigenvalue together with its complex embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    /// Short tag naming the formula, e.g. `"k4-quartic"`.
    pub case: String,
    /// Human-readable expression.
    pub expr: String,
    /// Integer constants used by the formula, e.g. `[("c", -3), ("d", 2)]`.
    pub params: Vec<(String, i64)>,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvalue {
    Int(i64),
    Cyclotomic(CycInt),
    Algebraic(Descriptor),
}

impl Eigenvalue {
    /// Wrap a period, collapsing rational ones to integers.
    pub fn from_cyc(c: CycInt) -> Self {
        match c.as_integer() {
            Some(v) => Eigenvalue::Int(v),
            None => Eigenvalue::Cyclotomic(c),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Eigenvalue::Int(v) => Complex64::new(*v as f64, 0.0),
            Eigenvalue::Cyclotomic(c) => c.to_complex(),
            Eigenvalue::Algebraic(d) => d.value,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Eigenvalue::Int(v) => Some(*v),
            Eigenvalue::Cyclotomic(c) => c.as_integer(),
            Eigenvalue::Algebraic(_) => None,
        }
    }

    /// `-1 - self`, the complement image of a non-principal eigenvalue.
    pub fn complement(&self) -> Self {
        match self {
            Eigenvalue::Int(v) => Eigenvalue::Int(-1 - v),
            Eigenvalue::Cyclotomic(c) => Eigenvalue::from_cyc((-c).add_int(-1)),
            Eigenvalue::Algebraic(d) => Eigenvalue::Algebraic(Descriptor {
                case: d.case.clone(),
                expr: format!("-1 - ({})", d.expr),
                params: d.params.clone(),
                value: -1.0 - d.value,
            }),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Eigenvalue::Int(v) => Eigenvalue::Int(-v),
            Eigenvalue::Cyclotomic(c) => Eigenvalue::from_cyc(-c),
            Eigenvalue::Algebraic(d) => Eigenvalue::Algebraic(Descriptor {
                case: d.case.clone(),
                expr: format!("-({})", d.expr),
                params: d.params.clone(),
                value: -d.value,
            }),
        }
    }

    fn exact_key(&self) -> Option<ExactKey> {
        match self {
            Eigenvalue::Int(v) => Some(ExactKey::Int(*v)),
            Eigenvalue::Cyclotomic(c) => Some(match c.as_integer() {
                Some(v) => ExactKey::Int(v),
                None => ExactKey::Cyc(c.counts().to_vec()),
            }),
            Eigenvalue::Algebraic(_) => None,
        }
    }

    fn same_as(&self, other: &Eigenvalue) -> bool {
        match (self.as_integer(), other.as_integer()) {
            (Some(a), Some(b)) => a == b,
            _ => match (self, other) {
                (Eigenvalue::Cyclotomic(a), Eigenvalue::Cyclotomic(b)) => a == b,
                (Eigenvalue::Algebraic(_), _) | (_, Eigenvalue::Algebraic(_)) => {
                    (self.to_complex() - other.to_complex()).norm() <= MERGE_TOL
                }
                _ => false,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ExactKey {
    Int(i64),
    Cyc(Vec<i64>),
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Int(v) => write!(f, "{v}"),
            Eigenvalue::Cyclotomic(c) => {
                let z = c.to_complex();
                write!(f, "{} ~ {}", c, format_complex(z))
            }
            Eigenvalue::Algebraic(d) => write!(f, "{} ~ {}", d.expr, format_complex(d.value)),
        }
    }
}

/// Format with 12 significant digits, dropping a negligible imaginary part.
pub fn format_complex(z: Complex64) -> String {
    let re = crate::report::sig12(z.re);
    let im = crate::report::sig12(z.im);
    if im.abs() < 1e-12 {
        format!("{re}")
    } else if re.abs() < 1e-12 {
        format!("{im}i")
    } else {
        format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

/// A spectrum: the principal eigenvalue (the out-degree, with one all-ones
/// eigenvector) plus the remaining eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    principal: i64,
    others: Vec<(Eigenvalue, u64)>,
}

impl Spectrum {
    pub fn new(principal: i64, others: Vec<(Eigenvalue, u64)>) -> Self {
        let mut merged: Vec<(Eigenvalue, u64)> = Vec::new();
        let mut index: HashMap<ExactKey, usize> = HashMap::new();
        let mut algebraic: Vec<usize> = Vec::new();
        for (v, m) in others {
            if m == 0 {
                continue;
            }
            let key = v.exact_key();
            let slot = match &key {
                Some(key) => index.get(key).copied(),
                None => merged.iter().position(|(w, _)| w.same_as(&v)),
            }
            .or_else(|| algebraic.iter().copied().find(|&i| merged[i].0.same_as(&v)));
            match slot {
                Some(i) => merged[i].1 += m,
                None => {
                    match key {
                        Some(key) => {
                            index.insert(key, merged.len());
                        }
                        None => algebraic.push(merged.len()),
                    }
                    merged.push((v, m));
                }
            }
        }
        let mut keyed: Vec<(Complex64, (Eigenvalue, u64))> =
            merged.into_iter().map(|e| (e.0.to_complex(), e)).collect();
        keyed.sort_by(|a, b| cmp_desc(&a.0, &b.0));
        Spectrum {
            principal,
            others: keyed.into_iter().map(|(_, e)| e).collect(),
        }
    }

    pub fn principal(&self) -> i64 {
        self.principal
    }

    /// Non-principal eigenvalues, merged, sorted by decreasing real part.
    pub fn others(&self) -> &[(Eigenvalue, u64)] {
        &self.others
    }

    /// All eigenvalues with the principal one merged into any equal entry.
    pub fn entries(&self) -> Vec<(Eigenvalue, u64)> {
        let mut all = vec![(Eigenvalue::Int(self.principal), 1)];
        all.extend(self.others.iter().cloned());
        Spectrum::new(0, all).others
    }

    /// Sum of multiplicities, which equals the number of vertices.
    pub fn total(&self) -> u64 {
        1 + self.others.iter().map(|(_, m)| m).sum::<u64>()
    }

    pub fn is_integral(&self) -> bool {
        self.others.iter().all(|(v, _)| v.as_integer().is_some())
    }

    /// Integer eigenvalues with multiplicities, if the spectrum is integral.
    pub fn integer_entries(&self) -> Option<Vec<(i64, u64)>> {
        self.entries()
            .iter()
            .map(|(v, m)| v.as_integer().map(|x| (x, *m)))
            .collect()
    }

    /// `sum mult * lambda` in the complex embedding.
    pub fn trace(&self) -> Complex64 {
        self.others
            .iter()
            .map(|(v, m)| v.to_complex() * *m as f64)
            .sum::<Complex64>()
            + self.principal as f64
    }

    /// Number of distinct eigenvalues.
    pub fn distinct(&self) -> usize {
        self.entries().len()
    }

    /// Multiplicity of the principal eigenvalue (1 iff connected).
    pub fn principal_multiplicity(&self) -> u64 {
        self.entries()
            .iter()
            .find(|(v, _)| v.as_integer() == Some(self.principal))
            .map_or(1, |(_, m)| *m)
    }

    /// All eigenvalues as complex numbers with multiplicities.
    pub fn complex_entries(&self) -> Vec<(Complex64, u64)> {
        self.entries()
            .iter()
            .map(|(v, m)| (v.to_complex(), *m))
            .collect()
    }

    /// Multiset equality: exact on pairs of integers, complex distance `tol`
    /// otherwise.
    pub fn matches(&self, other: &Spectrum, tol: f64) -> bool {
        if self.total() != other.total() {
            return false;
        }
        let mut rest: Vec<(Eigenvalue, u64)> = other.entries();
        for (v, mut m) in self.entries() {
            for slot in rest.iter_mut().filter(|s| s.1 > 0) {
                let close = match (v.as_integer(), slot.0.as_integer()) {
                    (Some(a), Some(b)) => a == b,
                    _ => (v.to_complex() - slot.0.to_complex()).norm() <= tol,
                };
                if close {
                    let take = m.min(slot.1);
                    slot.1 -= take;
                    m -= take;
                    if m == 0 {
                        break;
                    }
                }
            }
            if m > 0 {
                return false;
            }
        }
        rest.iter().all(|s| s.1 == 0)
    }
}

fn cmp_desc(a: &Complex64, b: &Complex64) -> Ordering {
    let key = |z: &Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    key(b).cmp(&key(a))
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .iter()
            .map(|(v, m)| format!("[{v}]^{m}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `Spec Gamma(k, q)` from the exact Gaussian periods: `[n]^1` and `[eta_i]^n`.
pub fn spectrum_from_periods(field: &Field, k: u64) -> Result<Spectrum> {
    let periods = gaussian_periods(field, k)?;
    Ok(spectrum_of_periods(&periods, (field.q() - 1) / k))
}

pub fn spectrum_of_periods(periods: &[CycInt], n: u64) -> Spectrum {
    Spectrum::new(
        n as i64,
        periods
            .iter()
            .map(|c| (Eigenvalue::from_cyc(c.clone()), n))
            .collect(),
    )
}

/// Spectrum of the complement from the spectrum of `Gamma(k, q)`.
///
/// The principal eigenvalue becomes `q - 1 - n` with multiplicity one; every other
/// eigenvalue `eta` becomes `-1 - eta`, including those equal to `n` when the
/// graph is disconnected.
pub fn spectrum_complement(spec: &Spectrum) -> Spectrum {
    let q = spec.total() as i64;
    Spectrum::new(
        q - 1 - spec.principal,
        spec.others
            .iter()
            .map(|(v, m)| (v.complement(), *m))
            .collect(),
    )
}

/// Spectrum of the sum graph `Gamma^+(k, q)` from the spectrum of `Gamma(k, q)`.
///
/// For `q` even the two graphs coincide. For `q` odd and `n` even each non-principal
/// eigenvalue splits into `+eta` and `-eta` with half the multiplicity. The case `q`
/// odd and `n` odd is rejected.
pub fn spectrum_sum_graph(spec: &Spectrum) -> Result<Spectrum> {
    let q = spec.total();
    let n = spec.principal;
    if q.is_multiple_of(2) {
        return Ok(spec.clone());
    }
    if n % 2 != 0 {
        return Err(Error::UnsupportedSumSpectrum);
    }
    let mut others = Vec::new();
    for (v, m) in &spec.others {
        others.push((v.clone(), m / 2));
        others.push((v.neg(), m / 2));
    }
    Ok(Spectrum::new(n, others))
}

/// Period-based spectrum of the requested variant.
pub fn spectrum_of_variant(field: &Field, k: u64, variant: Variant) -> Result<Spectrum> {
    let spec = spectrum_from_periods(field, k)?;
    match variant {
        Variant::Standard => Ok(spec),
        Variant::Complement => Ok(spectrum_complement(&spec)),
        Variant::Sum => spectrum_sum_graph(&spec),
    }
}

/// Apply the variant transform to an already computed `Gamma(k, q)` spectrum.
pub fn apply_variant(spec: &Spectrum, variant: Variant) -> Result<Spectrum> {
    match variant {
        Variant::Standard => Ok(spec.clone()),
        Variant::Complement => Ok(spectrum_complement(spec)),
        Variant::Sum => spectrum_sum_graph(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(principal: i64, others: &[(i64, u64)]) -> Spectrum {
        Spectrum::new(
            principal,
            others
                .iter()
                .map(|&(v, m)| (Eigenvalue::Int(v), m))
                .collect(),
        )
    }

    #[test]
    fn gamma_4_9() {
        let f = Field::new(3, 2).unwrap();
        let s = spectrum_from_periods(&f, 4).unwrap();
        assert_eq!(s.integer_entries().unwrap(), vec![(2, 3), (-1, 6)]);
        assert_eq!(s.principal_multiplicity(), 3);
    }

    #[test]
    fn gamma_3_16_and_complement() {
        let f = Field::new(2, 4).unwrap();
        let s = spectrum_from_periods(&f, 3).unwrap();
        assert_eq!(s.integer_entries().unwrap(), vec![(5, 1), (1, 10), (-3, 5)]);
        let c = spectrum_complement(&s);
        assert_eq!(
            c.integer_entries().unwrap(),
            vec![(10, 1), (2, 5), (-2, 10)]
        );
        assert_eq!(spectrum_complement(&c), s);
    }

    #[test]
    fn complement_of_complete_graph() {
        let f = Field::new(7, 1).unwrap();
        let s = spectrum_from_periods(&f, 1).unwrap();
        let c = spectrum_complement(&s);
        assert_eq!(c.integer_entries().unwrap(), vec![(0, 7)]);
    }

    #[test]
    fn paley_five_is_self_complementary() {
        let f = Field::new(5, 1).unwrap();
        let s = spectrum_from_periods(&f, 2).unwrap();
        assert!(!s.is_integral());
        assert!(s.matches(&spectrum_complement(&s), 1e-9));
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((s.others()[0].0.to_complex().re - golden).abs() < 1e-12);
    }

    #[test]
    fn sum_graph_splitting() {
        let s = ints(20, &[(2, 60), (-7, 20)]);
        let t = ints(20, &[(2, 30), (-2, 30), (7, 10), (-7, 10)]);
        assert_eq!(spectrum_sum_graph(&s).unwrap(), t);
        let odd = ints(3, &[(1, 3), (-2, 3)]);
        assert_eq!(spectrum_sum_graph(&odd), Err(Error::UnsupportedSumSpectrum));
        let even_q = ints(5, &[(1, 10), (-3, 5)]);
        assert_eq!(spectrum_sum_graph(&even_q).unwrap(), even_q);
    }

    #[test]
    fn matching_is_multiset_equality() {
        let a = ints(4, &[(1, 4), (-2, 4)]);
        let b = ints(4, &[(-2, 4), (1, 4)]);
        let c = ints(4, &[(1, 5), (-2, 3)]);
        assert!(a.matches(&b, 1e-9));
        assert!(!a.matches(&c, 1e-9));
    }
}
