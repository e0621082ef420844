//! Closed-form spectra for `k = 2, 3, 4, 5`, semiprimitive pairs and Hamming graphs.

use num_complex::Complex64;
use serde::Serialize;

use super::diophantine::{solve_3_27, solve_dickson, solve_two_squares};
use super::{Descriptor, Eigenvalue, Spectrum};
use crate::arith::{binomial, exact_div, is_prime};
use crate::classify::{is_hamming_gp, is_semiprimitive_pair, SemiprimitiveWitness};
use crate::error::{Error, Result};

/// A spectrum obtained from a named closed formula.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub method: &'static str,
    pub spectrum: Spectrum,
}

/// Spectra of a semiprimitive GP-graph and of its complement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiprimitiveSpectra {
    pub witness: SemiprimitiveWitness,
    pub lambda1: i64,
    pub lambda2: i64,
    #[serde(skip)]
    pub graph: Spectrum,
    #[serde(skip)]
    pub complement: Spectrum,
}

fn check_prime_power(p: u64, m: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    p.checked_pow(m)
        .filter(|&q| q < 1 << 53)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{m} is too large")))
}

fn div_exact(num: i128, den: i128, what: &str) -> Result<i64> {
    exact_div(num, den)
        .map(|v| v as i64)
        .ok_or_else(|| Error::NonIntegral(format!("{what}: {num}/{den}")))
}

fn descriptor(case: &str, expr: String, params: &[(&str, i64)], value: Complex64) -> Eigenvalue {
    Eigenvalue::Algebraic(Descriptor {
        case: case.to_string(),
        expr,
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        value,
    })
}

/// Every closed form that applies to `Gamma(k, p^m)`, with `k` already dividing
/// `q - 1`.
pub fn closed_form(p: u64, m: u32, k: u64) -> Result<Vec<ClosedForm>> {
    let q = check_prime_power(p, m)?;
    if k == 0 || (q - 1) % k != 0 {
        return Err(Error::Precondition(format!(
            "k = {k} must divide q - 1 = {}",
            q - 1
        )));
    }
    let mut out = Vec::new();
    if is_semiprimitive_pair(k, p, m).is_some() {
        out.push(ClosedForm {
            method: "semiprimitive",
            spectrum: closed_form_semiprimitive(k, p, m)?.graph,
        });
    }
    match k {
        2 => out.push(ClosedForm {
            method: "k2",
            spectrum: closed_form_k2(p, m)?,
        }),
        3 if q >= 5 => out.push(ClosedForm {
            method: "k3",
            spectrum: closed_form_k3(p, m)?,
        }),
        4 => out.push(ClosedForm {
            method: "k4",
            spectrum: closed_form_k4(p, m)?,
        }),
        5 if p % 5 == 1 && m.is_multiple_of(5) => out.push(ClosedForm {
            method: "k5",
            spectrum: closed_form_k5_p1mod5(p, m)?,
        }),
        _ => {}
    }
    if let Some((b, base)) = is_hamming_gp(k, p, m) {
        out.push(ClosedForm {
            method: "hamming",
            spectrum: hamming_spectrum(b, p, base)?,
        });
    }
    Ok(out)
}

/// Paley graphs: `{[n]^1, [eta_0]^n, [-1 - eta_0]^n}`.
pub fn closed_form_k2(p: u64, m: u32) -> Result<Spectrum> {
    let q = check_prime_power(p, m)?;
    if p == 2 {
        return Err(Error::Precondition("k = 2 needs q odd".into()));
    }
    let n = (q - 1) / 2;
    let sq = (q as f64).sqrt();
    let params = [("p", p as i64), ("m", m as i64)];
    let eta0 = match (p % 4, m % 2) {
        (1, 0) => Eigenvalue::Int(-(1 + p.pow(m / 2) as i64) / 2),
        (3, 0) => {
            let sign = if (m / 2).is_multiple_of(2) { 1 } else { -1 };
            Eigenvalue::Int((-1 - sign * p.pow(m / 2) as i64) / 2)
        }
        (1, _) => descriptor(
            "k2",
            format!("(-1 + sqrt({q}))/2"),
            &params,
            Complex64::new((sq - 1.0) / 2.0, 0.0),
        ),
        _ => {
            let sign = if ((m - 1) / 2).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            let s = if sign > 0.0 { "+" } else { "-" };
            descriptor(
                "k2",
                format!("(-1 {s} i*sqrt({q}))/2"),
                &params,
                Complex64::new(-0.5, sign * sq / 2.0),
            )
        }
    };
    let eta1 = eta0.complement();
    Ok(Spectrum::new(n as i64, vec![(eta0, n), (eta1, n)]))
}

/// `k = 3`, split by `p mod 3` and `m`.
pub fn closed_form_k3(p: u64, m: u32) -> Result<Spectrum> {
    let q = check_prime_power(p, m)?;
    if (q - 1) % 3 != 0 || q < 5 {
        return Err(Error::Precondition(format!(
            "k = 3 needs 3 | q - 1 and q >= 5, got q = {q}"
        )));
    }
    let n = (q - 1) / 3;
    let ni = n as i64;
    let others = match (p % 3, m % 3) {
        (1, 0) => {
            let c = p.pow(m / 3) as i128;
            let (a, b) = solve_3_27(4 * c as u64, p)?;
            let (a, b) = (a as i128, b as i128);
            vec![
                (
                    Eigenvalue::Int(div_exact(a * c - 1, 3, "(a q^(1/3) - 1)/3")?),
                    n,
                ),
                (
                    Eigenvalue::Int(div_exact(-(a + 9 * b) * c - 2, 6, "k3 case a")?),
                    n,
                ),
                (
                    Eigenvalue::Int(div_exact(-(a - 9 * b) * c - 2, 6, "k3 case a")?),
                    n,
                ),
            ]
        }
        (1, _) => {
            let (a, b) = solve_3_27(4 * q, p)?;
            let qf = q as f64;
            let inner = Complex64::new(-a as f64, 27f64.sqrt() * b as f64) / 2.0;
            let w = qf.cbrt() * inner.powf(1.0 / 3.0);
            let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
            (0..3)
                .map(|j| {
                    let wj = omega.powi(j) * w;
                    let x = -(1.0 + wj + qf / wj) / 3.0;
                    let expr = format!(
                        "-(1 + w^{j} W + {q}/(w^{j} W))/3, W^3 = {q}*(-{a} + sqrt(-27)*{b})/2"
                    );
                    (
                        descriptor("k3-cubic", expr, &[("a", a), ("b", b), ("j", j as i64)], x),
                        n,
                    )
                })
                .collect()
        }
        (2, _) if m.is_multiple_of(2) => {
            let r = p.pow(m / 2) as i128;
            if m.is_multiple_of(4) {
                vec![
                    (
                        Eigenvalue::Int(div_exact(r - 1, 3, "(sqrt q - 1)/3")?),
                        2 * n,
                    ),
                    (
                        Eigenvalue::Int(div_exact(-2 * r - 1, 3, "(-2 sqrt q - 1)/3")?),
                        n,
                    ),
                ]
            } else {
                vec![
                    (
                        Eigenvalue::Int(div_exact(2 * r - 1, 3, "(2 sqrt q - 1)/3")?),
                        n,
                    ),
                    (
                        Eigenvalue::Int(div_exact(-r - 1, 3, "(-sqrt q - 1)/3")?),
                        2 * n,
                    ),
                ]
            }
        }
        _ => {
            return Err(Error::Precondition(format!(
                "no k = 3 case for p = {p}, m = {m}"
            )))
        }
    };
    Ok(Spectrum::new(ni, others))
}

/// `k = 4`, split by `p mod 4`, `m mod 4` and the parity of `n`.
pub fn closed_form_k4(p: u64, m: u32) -> Result<Spectrum> {
    let q = check_prime_power(p, m)?;
    if (q - 1) % 4 != 0 {
        return Err(Error::Precondition(format!(
            "k = 4 needs 4 | q - 1, got q = {q}"
        )));
    }
    let n = (q - 1) / 4;
    let others = match (p % 4, m % 4) {
        (1, 0) => {
            let r2 = p.pow(m / 2) as i128;
            let r4 = p.pow(m / 4) as i128;
            let (c, d) = solve_two_squares(r2 as u64, p)?;
            let (c, d) = (c as i128, d as i128);
            [
                r2 + 4 * d * r4 - 1,
                r2 - 4 * d * r4 - 1,
                -r2 + 2 * c * r4 - 1,
                -r2 - 2 * c * r4 - 1,
            ]
            .into_iter()
            .map(|num| Ok((Eigenvalue::Int(div_exact(num, 4, "k4 case a")?), n)))
            .collect::<Result<Vec<_>>>()?
        }
        (1, 2) => {
            let r = p.pow(m / 2) as i64;
            let (c, d) = solve_two_squares(q, p)?;
            let qf = q as f64;
            let rf = r as f64;
            let params = [("c", c), ("d", d)];
            let mut v = Vec::new();
            for (base, inner_sign) in [(-(1.0 + rf), 1.0), (-(1.0 - rf), -1.0)] {
                let rad = (2.0 * (qf + inner_sign * c as f64 * rf)).sqrt();
                for s in [1.0, -1.0] {
                    let expr = format!(
                        "({} {} sqrt(2({q} {} {c}*{r})))/4",
                        if inner_sign > 0.0 {
                            format!("-(1 + {r})")
                        } else {
                            format!("-(1 - {r})")
                        },
                        if s > 0.0 { "+" } else { "-" },
                        if inner_sign > 0.0 { "+" } else { "-" },
                    );
                    v.push((
                        descriptor(
                            "k4-biquadratic",
                            expr,
                            &params,
                            Complex64::new((base + s * rad) / 4.0, 0.0),
                        ),
                        n,
                    ));
                }
            }
            v
        }
        (1, _) => {
            let (c, d) = solve_two_squares(q, p)?;
            let (qf, cf) = (q as f64, c as f64);
            let (b2, b1, b0) = if n % 2 == 0 {
                (
                    -(3.0 * qf - 3.0) / 8.0,
                    ((2.0 * cf - 3.0) * qf + 1.0) / 16.0,
                    (qf * qf - (4.0 * cf * cf - 8.0 * cf + 6.0) * qf + 1.0) / 256.0,
                )
            } else {
                (
                    (qf + 3.0) / 8.0,
                    ((2.0 * cf + 1.0) * qf + 1.0) / 16.0,
                    (9.0 * qf * qf - (4.0 * cf * cf - 8.0 * cf - 2.0) * qf + 1.0) / 256.0,
                )
            };
            quartic_roots(1.0, b2, b1, b0)
                .into_iter()
                .enumerate()
                .map(|(i, z)| {
                    let expr = format!("root {i} of X^4 + X^3 + ({b2})X^2 + ({b1})X + ({b0})");
                    (
                        descriptor(
                            "k4-quartic",
                            expr,
                            &[("c", c), ("d", d), ("branch", i as i64)],
                            z,
                        ),
                        n,
                    )
                })
                .collect()
        }
        (3, _) if m.is_multiple_of(2) => {
            let r = p.pow(m / 2) as i128;
            if m.is_multiple_of(4) {
                vec![
                    (
                        Eigenvalue::Int(div_exact(r - 1, 4, "(sqrt q - 1)/4")?),
                        3 * n,
                    ),
                    (
                        Eigenvalue::Int(div_exact(-3 * r - 1, 4, "(-3 sqrt q - 1)/4")?),
                        n,
                    ),
                ]
            } else {
                vec![
                    (
                        Eigenvalue::Int(div_exact(3 * r - 1, 4, "(3 sqrt q - 1)/4")?),
                        n,
                    ),
                    (
                        Eigenvalue::Int(div_exact(-r - 1, 4, "(-sqrt q - 1)/4")?),
                        3 * n,
                    ),
                ]
            }
        }
        _ => {
            return Err(Error::Precondition(format!(
                "no k = 4 case for p = {p}, m = {m}"
            )))
        }
    };
    Ok(Spectrum::new(n as i64, others))
}

/// Roots of the monic cubic `z^3 + a z^2 + b z + c` by Cardano's formula.
fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 3] {
    // z = y - a/3 gives y^3 + P y + Q = 0.
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let u = u3.powf(1.0 / 3.0);
    let mut out = [Complex64::default(); 3];
    for (j, slot) in out.iter_mut().enumerate() {
        let uj = u * omega.powi(j as i32);
        let y = if uj.norm() == 0.0 {
            Complex64::default()
        } else {
            uj - p / (3.0 * uj)
        };
        *slot = y - a / 3.0;
    }
    out
}

/// Roots of `x^4 + b3 x^3 + b2 x^2 + b1 x + b0` by Ferrari's method.
fn quartic_roots(b3: f64, b2: f64, b1: f64, b0: f64) -> [Complex64; 4] {
    // x = t - b3/4 gives t^4 + al t^2 + be t + ga = 0.
    let shift = b3 / 4.0;
    let al = b2 - 3.0 * b3 * b3 / 8.0;
    let be = b3 * b3 * b3 / 8.0 - b3 * b2 / 2.0 + b1;
    let ga = -3.0 * b3.powi(4) / 256.0 + b3 * b3 * b2 / 16.0 - b3 * b1 / 4.0 + b0;
    let c = |v: f64| Complex64::new(v, 0.0);
    let ts: [Complex64; 4] = if be.abs() < 1e-300 {
        let disc = c(al * al - 4.0 * ga).sqrt();
        let s1 = ((-al + disc) / 2.0).sqrt();
        let s2 = ((-al - disc) / 2.0).sqrt();
        [s1, -s1, s2, -s2]
    } else {
        // Resolvent cubic y^3 + al y^2 + (al^2/4 - ga) y - be^2/8 = 0, any nonzero root.
        let ys = cubic_roots(c(al), c(al * al / 4.0 - ga), c(-be * be / 8.0));
        let y = ys
            .into_iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap();
        let r = (2.0 * y).sqrt();
        let k = be / r;
        let d1 = (-(2.0 * al + 2.0 * y) - 2.0 * k).sqrt();
        let d2 = (-(2.0 * al + 2.0 * y) + 2.0 * k).sqrt();
        [
            (r + d1) / 2.0,
            (r - d1) / 2.0,
            (-r + d2) / 2.0,
            (-r - d2) / 2.0,
        ]
    };
    ts.map(|t| t - shift)
}

/// `k = 5` with `p = 1 (mod 5)` and `5 | m`, via Dickson's system for `p^(m/5)`.
pub fn closed_form_k5_p1mod5(p: u64, m: u32) -> Result<Spectrum> {
    let q = check_prime_power(p, m)?;
    if p % 5 != 1 || !m.is_multiple_of(5) {
        return Err(Error::Precondition(format!(
            "needs p = 1 mod 5 and 5 | m, got p = {p}, m = {m}"
        )));
    }
    let s = m / 5;
    let set = solve_dickson(p, s)?;
    let rep = set.unramified[0];
    let ps = (p as i128).pow(s);
    let x3 = (rep.x as i128).pow(3);
    let mut stars = vec![div_exact(-ps * (x3 - 25 * rep.l()), 16, "eta_0*")?];
    let mut cur = rep;
    for _ in 0..4 {
        stars.push(div_exact(ps * (x3 - 25 * cur.m()), 64, "eta_i*")?);
        cur = cur.sigma();
    }
    let n = (q - 1) / 5;
    let others = stars
        .into_iter()
        .map(|st| {
            Ok((
                Eigenvalue::Int(div_exact(st as i128 - 1, 5, "(eta* - 1)/5")?),
                n,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new(n as i64, others))
}

/// Semiprimitive pairs: `{[n]^1, [lambda_1]^n, [lambda_2]^((k-1)n)}` and the
/// complement `{[(k-1)n]^1, [(k-1)lambda_2]^n, [-1-lambda_2]^((k-1)n)}`.
pub fn closed_form_semiprimitive(k: u64, p: u64, m: u32) -> Result<SemiprimitiveSpectra> {
    let q = check_prime_power(p, m)?;
    let witness = is_semiprimitive_pair(k, p, m).ok_or_else(|| {
        Error::Precondition(format!("({k}, {p}^{m}) is not a semiprimitive pair"))
    })?;
    let n = ((q - 1) / k) as i64;
    let ki = k as i128;
    let sigma = witness.sigma as i128;
    let r = p.pow(m / 2) as i128;
    let lambda1 = div_exact(sigma * (ki - 1) * r - 1, ki, "lambda_1")?;
    let lambda2 = div_exact(-(sigma * r + 1), ki, "lambda_2")?;
    let nu = n as u64;
    let graph = if k == 2 {
        closed_form_k2(p, m)?
    } else {
        Spectrum::new(
            n,
            vec![
                (Eigenvalue::Int(lambda1), nu),
                (Eigenvalue::Int(lambda2), (k - 1) * nu),
            ],
        )
    };
    let complement = Spectrum::new(
        (k as i64 - 1) * n,
        vec![
            (Eigenvalue::Int((k as i64 - 1) * lambda2), nu),
            (Eigenvalue::Int(-1 - lambda2), (k - 1) * nu),
        ],
    );
    Ok(SemiprimitiveSpectra {
        witness,
        lambda1,
        lambda2,
        graph,
        complement,
    })
}

/// The Hamming graph `H(b, p^m)`: eigenvalues `l p^m - b` with multiplicity
/// `C(b, l) (p^m - 1)^(b - l)`.
pub fn hamming_spectrum(b: u32, p: u64, m: u32) -> Result<Spectrum> {
    if b == 0 {
        return Err(Error::InvalidParameter("b must be at least 1".into()));
    }
    let base = check_prime_power(p, m)?;
    base.checked_pow(b)
        .ok_or_else(|| Error::InvalidParameter("H(b, q) too large".into()))?;
    let mut others = Vec::new();
    for l in 0..b as u64 {
        let mult = binomial(b as u64, l) * ((base - 1) as u128).pow(b - l as u32);
        others.push((Eigenvalue::Int((l * base) as i64 - b as i64), mult as u64));
    }
    Ok(Spectrum::new(b as i64 * (base as i64 - 1), others))
}
