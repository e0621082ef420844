//! Independent numerical checks: direct character sums and dense symmetric
//! eigensolvers. Nothing here touches the exact period pipeline.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::graph::{GpGraph, Variant};
use crate::spectra::Spectrum;

/// Default absolute tolerance for oracle comparisons.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const JACOBI_OFF_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 60;

/// The nonzero `k`-th powers, computed by exponentiating every element.
fn kth_power_set(field: &Field, k: u64) -> Vec<Elem> {
    let q = field.q();
    let mut hit = vec![false; q as usize];
    for x in 1..q as Elem {
        let mut acc: Elem = 1;
        let mut base = x;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = field.mul(acc, base);
            }
            base = field.mul(base, base);
            e >>= 1;
        }
        hit[acc as usize] = true;
    }
    (1..q as Elem).filter(|&y| hit[y as usize]).collect()
}

/// `lambda_gamma = sum_{y in R_k} exp(2 pi i Tr(gamma y)/p)` for every `gamma`.
pub fn character_sum_eigenvalues(field: &Field, k: u64) -> Result<Vec<Complex64>> {
    if k == 0 || !(field.q() - 1).is_multiple_of(k) {
        return Err(Error::Precondition(format!("k = {k} must divide q - 1")));
    }
    Ok(character_sums(field, &kth_power_set(field, k)))
}

/// Character sums over an arbitrary connection set.
pub fn character_sums(field: &Field, set: &[Elem]) -> Vec<Complex64> {
    let p = field.p();
    let roots: Vec<Complex64> = (0..p)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / p as f64))
        .collect();
    let trace = field.trace_table();
    let logs: Vec<u32> = set.iter().map(|&y| field.log(y)).collect();
    let exp = field.exp_table();
    let order = field.q() as usize - 1;
    let mut out = Vec::with_capacity(field.q() as usize);
    out.push(Complex64::new(set.len() as f64, 0.0));
    for gamma in 1..field.q() as Elem {
        let lg = field.log(gamma) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for &ly in &logs {
            let mut e = lg + ly as usize;
            if e >= order {
                e -= order;
            }
            acc += roots[trace[exp[e] as usize] as usize];
        }
        out.push(acc);
    }
    out
}

/// Character-sum eigenvalues of the standard or complement variant.
pub fn graph_character_sums(graph: &GpGraph) -> Result<Vec<Complex64>> {
    match graph.variant() {
        Variant::Sum => Err(Error::OracleUnavailable(
            "sum graphs are not Cayley graphs; use the dense eigensolver".into(),
        )),
        _ => Ok(character_sums(graph.field(), &graph.connection_set())),
    }
}

/// A dense symmetric matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::InvalidParameter("matrix is not square".into()));
            }
            data.extend(row.iter().map(|&x| x as f64));
        }
        let m = SymMatrix { dim, data };
        for i in 0..dim {
            for j in 0..i {
                if m.data[i * dim + j] != m.data[j * dim + i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn from_graph(graph: &GpGraph) -> Result<Self> {
        if !graph.is_undirected() {
            return Err(Error::InvalidParameter(
                "directed graphs have no symmetric adjacency matrix".into(),
            ));
        }
        Self::from_rows(&graph.adjacency_matrix()?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// All eigenvalues, ascending, by the cyclic Jacobi method.
pub fn dense_eigen_symmetric(matrix: &SymMatrix) -> Result<Vec<f64>> {
    let n = matrix.dim;
    let mut a = matrix.data.clone();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off < JACOBI_OFF_TOL {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        // Skip rotations far below the current off-diagonal mass.
        let threshold = if sweeps < 4 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[p * n + r];
                    let arq = a[q * n + r];
                    a[p * n + r] = c * arp - s * arq;
                    a[q * n + r] = s * arp + c * arq;
                }
                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// All eigenvalues, ascending, by Householder tridiagonalisation and implicit QR.
/// Much faster than Jacobi for large dimensions; used by the bulk sweep.
pub fn dense_eigen_symmetric_fast(matrix: &SymMatrix) -> Result<Vec<f64>> {
    let n = matrix.dim;
    let m = nalgebra::DMatrix::from_row_slice(n, n, &matrix.data);
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if eig.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence(0));
    }
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Unmatched {
    pub expected_re: f64,
    pub expected_im: f64,
    pub nearest_re: f64,
    pub nearest_im: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub max_abs_deviation: f64,
    pub matched: bool,
    pub unmatched_entries: Vec<Unmatched>,
}

/// Greedy nearest-match comparison of an exact spectrum against oracle values.
pub fn compare_spectra(exact: &Spectrum, oracle: &[Complex64], tol: f64) -> OracleReport {
    let mut pool: Vec<(Complex64, bool)> = oracle.iter().map(|&z| (z, false)).collect();
    pool.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut report = OracleReport {
        max_abs_deviation: 0.0,
        matched: true,
        unmatched_entries: Vec::new(),
    };
    if exact.total() as usize != oracle.len() {
        report.matched = false;
    }
    for (v, mult) in exact.complex_entries() {
        for _ in 0..mult {
            match nearest_unused(&pool, v) {
                Some((i, d)) => {
                    pool[i].1 = true;
                    report.max_abs_deviation = report.max_abs_deviation.max(d);
                    if d > tol {
                        report.matched = false;
                        if report.unmatched_entries.len() < 32 {
                            report.unmatched_entries.push(Unmatched {
                                expected_re: v.re,
                                expected_im: v.im,
                                nearest_re: pool[i].0.re,
                                nearest_im: pool[i].0.im,
                                distance: d,
                            });
                        }
                    }
                }
                None => {
                    report.matched = false;
                    break;
                }
            }
        }
    }
    report
}

/// Nearest unused entry of a pool sorted by real part, scanning outwards from
/// the insertion point until the real-part gap exceeds the best distance.
fn nearest_unused(pool: &[(Complex64, bool)], v: Complex64) -> Option<(usize, f64)> {
    let start = pool.partition_point(|(z, _)| z.re < v.re);
    let mut best: Option<(usize, f64)> = None;
    let better = |best: &Option<(usize, f64)>, d: f64| best.is_none_or(|(_, b)| d < b);
    for i in start..pool.len() {
        let (z, used) = pool[i];
        if best.is_some_and(|(_, b)| z.re - v.re > b) {
            break;
        }
        let d = (z - v).norm();
        if !used && better(&best, d) {
            best = Some((i, d));
        }
    }
    for i in (0..start).rev() {
        let (z, used) = pool[i];
        if best.is_some_and(|(_, b)| v.re - z.re > b) {
            break;
        }
        let d = (z - v).norm();
        if !used && better(&best, d) {
            best = Some((i, d));
        }
    }
    best
}

/// Real eigenvalues lifted to complex numbers.
pub fn as_complex(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::spectrum_from_periods;

    fn sorted_re(v: &[Complex64]) -> Vec<f64> {
        let mut r: Vec<f64> = v.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn k4_jacobi() {
        let rows = vec![
            vec![0, 1, 1, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![1, 1, 1, 0],
        ];
        let eig = dense_eigen_symmetric(&SymMatrix::from_rows(&rows).unwrap()).unwrap();
        for (a, b) in eig.iter().zip([-1.0, -1.0, -1.0, 3.0]) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let rows = vec![vec![0, 1], vec![0, 0]];
        assert!(SymMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn paley_nine_both_solvers() {
        let g = GpGraph::build(3, 2, 2, Variant::Standard).unwrap();
        let m = SymMatrix::from_graph(&g).unwrap();
        let a = dense_eigen_symmetric(&m).unwrap();
        let b = dense_eigen_symmetric_fast(&m).unwrap();
        let want = [-2.0, -2.0, -2.0, -2.0, 1.0, 1.0, 1.0, 1.0, 4.0];
        for ((x, y), w) in a.iter().zip(&b).zip(want) {
            assert!((x - w).abs() < 1e-9 && (y - w).abs() < 1e-9);
        }
    }

    #[test]
    fn character_sums_gf16() {
        let f = Field::new(2, 4).unwrap();
        let vals = character_sum_eigenvalues(&f, 3).unwrap();
        assert_eq!(vals[0], Complex64::new(5.0, 0.0));
        let spec = spectrum_from_periods(&f, 3).unwrap();
        let rep = compare_spectra(&spec, &vals, 1e-9);
        assert!(rep.matched, "{rep:?}");
    }

    #[test]
    fn character_sums_gf5() {
        let f = Field::new(5, 1).unwrap();
        let r = sorted_re(&character_sum_eigenvalues(&f, 2).unwrap());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for (a, b) in r.iter().zip([-phi, -phi, phi - 1.0, phi - 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let f = Field::new(2, 4).unwrap();
        let spec = spectrum_from_periods(&f, 3).unwrap();
        let mut vals = character_sum_eigenvalues(&f, 3).unwrap();
        vals[3] += 0.5;
        let rep = compare_spectra(&spec, &vals, 1e-6);
        assert!(!rep.matched);
        assert!(!rep.unmatched_entries.is_empty());
    }
}
