//! Exhaustive verification sweep over all `(p, m, k)` with `q = p^m <= max_q` and
//! `k | q - 1`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::gcd;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, is_prime, prime_powers_upto};
use crate::classify::{
    check_rama_nonsemiprimitive_k34, energy_check, integrality_condition, is_hamming_gp,
    is_integral_pred, is_ramanujan, is_semiprimitive_pair, rama_classification_semiprimitive,
    srg_params, waring_number,
};
use crate::cyclotomic::{
    expand_linear_factors, expansion_cost, galois_shift, gaussian_periods, orbit_count, CycInt,
    IntPoly,
};
use crate::error::Result;
use crate::field::Field;
use crate::graph::{gp_is_connected, srg_by_counting, GpGraph, Variant};
use crate::oracle::{
    as_complex, character_sum_eigenvalues, compare_spectra, dense_eigen_symmetric_fast, SymMatrix,
    DEFAULT_TOL,
};
use crate::report::{sig12, CLOSED_TOL};
use crate::spectra::{
    closed_form, closed_form_semiprimitive, spectrum_complement, spectrum_of_periods,
    spectrum_sum_graph, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub max_q: u64,
    /// Largest `q` for the dense eigensolver.
    pub oracle_cap: u64,
    /// Largest `q` for common-neighbour counting.
    pub srg_cap: u64,
    /// Largest `q` for the character-sum oracle.
    pub charsum_cap: u64,
    /// Largest `q` for the generator-independence check.
    pub generator_cap: u64,
    /// Largest `q` for the dense check of the complement and sum variants.
    pub variant_cap: u64,
    /// Largest `q` for the breadth-first diameter.
    pub bfs_cap: u64,
    /// Operation budget for exact period-polynomial expansion.
    pub psi_budget: u64,
    /// Run only the oracle comparisons.
    pub oracles_only: bool,
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_q: 3000,
            oracle_cap: 1024,
            srg_cap: 1024,
            charsum_cap: 2000,
            generator_cap: 512,
            variant_cap: 128,
            bfs_cap: 1024,
            psi_budget: 5_000_000,
            oracles_only: false,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    pub k: u64,
    pub module: String,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub fields: u64,
    pub instances: u64,
    pub checks: BTreeMap<String, CheckStats>,
    /// Disagreements with a theorem or between computation paths.
    pub findings: Vec<Finding>,
    /// Theorem-level outcomes reported without being asserted.
    pub observations: Vec<Finding>,
}

impl SweepReport {
    pub fn stats(&self, check: &str) -> CheckStats {
        self.checks.get(check).copied().unwrap_or_default()
    }

    /// Stats summed over every check whose name starts with `prefix`.
    pub fn stats_prefix(&self, prefix: &str) -> CheckStats {
        self.checks
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .fold(CheckStats::default(), |a, (_, s)| CheckStats {
                passed: a.passed + s.passed,
                failed: a.failed + s.failed,
                skipped: a.skipped + s.skipped,
            })
    }

    pub fn findings_for(&self, prefix: &str) -> Vec<&Finding> {
        self.findings
            .iter()
            .filter(|f| format!("{}/{}", f.module, f.check).starts_with(prefix))
            .collect()
    }

    pub fn to_json(&self) -> String {
        crate::report::to_json_string(self)
    }
}

#[derive(Default)]
struct Log {
    checks: BTreeMap<String, CheckStats>,
    findings: Vec<Finding>,
    observations: Vec<Finding>,
}

struct Ctx<'a> {
    log: &'a mut Log,
    p: u64,
    m: u32,
    k: u64,
    q: u64,
}

impl Ctx<'_> {
    fn finding(&self, module: &str, check: &str, detail: String) -> Finding {
        Finding {
            q: self.q,
            p: self.p,
            m: self.m,
            k: self.k,
            module: module.to_string(),
            check: check.to_string(),
            detail,
        }
    }

    fn check(&mut self, module: &str, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        let stats = self
            .log
            .checks
            .entry(format!("{module}/{check}"))
            .or_default();
        if ok {
            stats.passed += 1;
        } else {
            stats.failed += 1;
            let f = self.finding(module, check, detail());
            self.log.findings.push(f);
        }
    }

    fn skip(&mut self, module: &str, check: &str) {
        self.log
            .checks
            .entry(format!("{module}/{check}"))
            .or_default()
            .skipped += 1;
    }

    /// Record an outcome that is reported but never counted as a failure.
    fn observe(&mut self, module: &str, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        let stats = self
            .log
            .checks
            .entry(format!("{module}/{check}"))
            .or_default();
        if ok {
            stats.passed += 1;
        } else {
            stats.failed += 1;
            let f = self.finding(module, check, detail());
            self.log.observations.push(f);
        }
    }
}

/// Run every check on every instance up to `cfg.max_q`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let fields = prime_powers_upto(cfg.max_q);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| crate::Error::InvalidParameter(e.to_string()))?;
    // Largest fields first for load balance; the merge below restores a fixed order.
    let mut order: Vec<(u64, u32, u64)> = fields.clone();
    order.reverse();
    let logs: Vec<((u64, u32), Result<(u64, Log)>)> = pool.install(|| {
        order
            .par_iter()
            .map(|&(p, m, _)| ((p, m), sweep_field(p, m, cfg)))
            .collect()
    });
    let mut report = SweepReport {
        config: *cfg,
        fields: fields.len() as u64,
        instances: 0,
        checks: BTreeMap::new(),
        findings: Vec::new(),
        observations: Vec::new(),
    };
    for (_, res) in logs {
        let (count, log) = res?;
        report.instances += count;
        for (name, s) in log.checks {
            let e = report.checks.entry(name).or_default();
            e.passed += s.passed;
            e.failed += s.failed;
            e.skipped += s.skipped;
        }
        report.findings.extend(log.findings);
        report.observations.extend(log.observations);
    }
    report.findings.sort();
    report.observations.sort();
    Ok(report)
}

/// The smallest generator other than the field's own, if any.
fn second_generator(field: &Field) -> Option<u32> {
    let order = field.q() - 1;
    (2..field.q() as u32).find(|&x| x != field.omega() && gcd(field.log(x) as u64, order) == 1)
}

fn sweep_field(p: u64, m: u32, cfg: &SweepConfig) -> Result<(u64, Log)> {
    let field = std::sync::Arc::new(Field::new(p, m)?);
    let q = field.q();
    let alt = if q <= cfg.generator_cap {
        second_generator(&field)
            .map(|g| field.rebased(g))
            .transpose()?
    } else {
        None
    };
    let mut log = Log::default();
    let ks = divisors(q - 1);
    for &k in &ks {
        let mut ctx = Ctx {
            log: &mut log,
            p,
            m,
            k,
            q,
        };
        check_instance(&mut ctx, &field, alt.as_ref(), cfg)?;
    }
    Ok((ks.len() as u64, log))
}

fn sorted_counts(periods: &[CycInt]) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = periods.iter().map(|c| c.counts().to_vec()).collect();
    v.sort();
    v
}

fn fmt_spec(s: &Spectrum) -> String {
    let parts: Vec<String> = s
        .complex_entries()
        .iter()
        .map(|(z, m)| {
            format!(
                "[{}]^{m}",
                crate::spectra::format_complex(Complex64::new(sig12(z.re), sig12(z.im)))
            )
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn check_instance(
    ctx: &mut Ctx,
    field: &std::sync::Arc<Field>,
    alt: Option<&Field>,
    cfg: &SweepConfig,
) -> Result<()> {
    let (k, q) = (ctx.k, ctx.q);
    let n = (q - 1) / k;
    let periods = gaussian_periods(field, k)?;
    let spec = spectrum_of_periods(&periods, n);

    if !cfg.oracles_only {
        check_invariants(ctx, field, alt, cfg, &periods, &spec)?;
    }
    check_oracles(ctx, field, cfg, &spec)
}

fn check_oracles(
    ctx: &mut Ctx,
    field: &std::sync::Arc<Field>,
    cfg: &SweepConfig,
    spec: &Spectrum,
) -> Result<()> {
    let (k, q) = (ctx.k, ctx.q);
    let n = (q - 1) / k;
    // Oracles.
    if q <= cfg.charsum_cap {
        let values = character_sum_eigenvalues(field, k)?;
        let rep = compare_spectra(spec, &values, DEFAULT_TOL);
        ctx.check("oracle", "character_sums", rep.matched, || {
            format!(
                "max deviation {:e}, {} unmatched",
                rep.max_abs_deviation,
                rep.unmatched_entries.len()
            )
        });
    } else {
        ctx.skip("oracle", "character_sums");
    }
    let undirected = q % 2 == 0 || n % 2 == 0;
    if undirected && q <= cfg.oracle_cap {
        let graph = GpGraph::new(field.clone(), k, Variant::Standard)?;
        let values = dense_eigen_symmetric_fast(&SymMatrix::from_graph(&graph)?)?;
        let rep = compare_spectra(spec, &as_complex(&values), DEFAULT_TOL);
        ctx.check("oracle", "dense_eigen", rep.matched, || {
            format!(
                "max deviation {:e}, {} unmatched",
                rep.max_abs_deviation,
                rep.unmatched_entries.len()
            )
        });
    } else if undirected {
        ctx.skip("oracle", "dense_eigen");
    }
    if undirected && q <= cfg.variant_cap {
        let comp = GpGraph::new(field.clone(), k, Variant::Complement)?;
        let values = dense_eigen_symmetric_fast(&SymMatrix::from_graph(&comp)?)?;
        let rep = compare_spectra(
            &spectrum_complement(spec),
            &as_complex(&values),
            DEFAULT_TOL,
        );
        ctx.check("oracle", "complement_dense", rep.matched, || {
            format!("max deviation {:e}", rep.max_abs_deviation)
        });
    }
    if q <= cfg.variant_cap {
        if let Ok(sum_spec) = spectrum_sum_graph(spec) {
            let sum = GpGraph::new(field.clone(), k, Variant::Sum)?;
            let values = dense_eigen_symmetric_fast(&SymMatrix::from_graph(&sum)?)?;
            let rep = compare_spectra(&sum_spec, &as_complex(&values), DEFAULT_TOL);
            ctx.check("oracle", "sum_graph_dense", rep.matched, || {
                format!("max deviation {:e}", rep.max_abs_deviation)
            });
        }
    }

    Ok(())
}

fn check_invariants(
    ctx: &mut Ctx,
    field: &std::sync::Arc<Field>,
    alt: Option<&Field>,
    cfg: &SweepConfig,
    periods: &[CycInt],
    spec: &Spectrum,
) -> Result<()> {
    let (p, m, k, q) = (ctx.p, ctx.m, ctx.k, ctx.q);
    let n = (q - 1) / k;
    // Sum rule.
    let total = periods.iter().fold(CycInt::zero(p), |acc, c| &acc + c);
    ctx.check(
        "cyclotomic",
        "sum_rule",
        total == CycInt::from_int(p, -1),
        || format!("sum of periods = {total}"),
    );

    // Integrality.
    let ints: Vec<Option<i64>> = periods.iter().map(|c| c.as_integer()).collect();
    let integral = ints.iter().all(Option::is_some);
    let pred = is_integral_pred(p, m, k);
    ctx.check("classify", "integrality_theorem", pred == integral, || {
        format!("k | (q-1)/(p-1) is {pred} but periods integral is {integral}")
    });
    if integral {
        let bad: Vec<i64> = ints
            .iter()
            .flatten()
            .copied()
            .filter(|&e| (k as i64 * e + 1).rem_euclid(p as i64) != 0)
            .collect();
        ctx.check("classify", "integrality_congruence", bad.is_empty(), || {
            format!("k*eta + 1 not divisible by p for eta in {bad:?}")
        });
    }
    let cond = integrality_condition(p, m, k);
    if p % k == 1 % k && k > 1 {
        let expect = (m as u64).is_multiple_of(k);
        ctx.check(
            "classify",
            "integrality_p1_mod_k",
            integral == expect,
            || format!("p = 1 mod k: integral is {integral}, k | m is {expect}"),
        );
    }
    if integral {
        ctx.check("classify", "integrality_condition_necessary", cond, || {
            "integral but condition fails".into()
        });
    }
    if is_prime(k) {
        ctx.check(
            "classify",
            "integrality_condition_prime_k",
            cond == integral,
            || format!("prime k: condition is {cond}, integral is {integral}"),
        );
    }

    // Galois action: the period polynomial and the orbit factors have rational
    // coefficients.
    let n_orb = orbit_count(field, k);
    let shift = galois_shift(periods);
    ctx.check(
        "cyclotomic",
        "galois_orbits",
        shift.map(|s| gcd(s, k)) == Some(n_orb),
        || format!("generator acts as shift {shift:?}, expected orbits mod {n_orb}"),
    );

    // Explicit expansion of the period polynomial and its orbit factors.
    let support = periods
        .iter()
        .map(|c| c.counts().iter().filter(|&&x| x != 0).count() as u64)
        .max()
        .unwrap_or(0);
    if expansion_cost(k, p, support) <= cfg.psi_budget {
        match expand_linear_factors(p, periods) {
            Ok(psi) => {
                let ok = psi.degree() == k as usize && psi.coeff(k as usize) == 1.into() && {
                    k == 0 || psi.coeff(k as usize - 1) == 1.into()
                };
                ctx.check("cyclotomic", "period_polynomial", ok, || {
                    format!("Psi = {psi}")
                });
                let reduced = psi.reduced(k);
                ctx.check(
                    "cyclotomic",
                    "reduced_period_polynomial",
                    reduced.coeff(k as usize) == 1.into(),
                    || format!("Psi* = {reduced}"),
                );
                let n_orb = n_orb as usize;
                let factors: Result<Vec<IntPoly>> = (0..n_orb)
                    .map(|i| {
                        let orbit: Vec<CycInt> =
                            periods.iter().skip(i).step_by(n_orb).cloned().collect();
                        expand_linear_factors(p, &orbit)
                    })
                    .collect();
                match factors {
                    Ok(fs) => {
                        let prod = fs.iter().fold(IntPoly::from_i64(&[1]), |a, f| a.mul(f));
                        ctx.check("cyclotomic", "orbit_factorization", prod == psi, || {
                            format!("product of {} orbit factors differs from Psi", fs.len())
                        });
                    }
                    Err(e) => {
                        ctx.check("cyclotomic", "orbit_factorization", false, || e.to_string())
                    }
                }
            }
            Err(e) => ctx.check("cyclotomic", "period_polynomial", false, || e.to_string()),
        }
    } else {
        ctx.skip("cyclotomic", "period_polynomial");
        ctx.skip("cyclotomic", "reduced_period_polynomial");
        ctx.skip("cyclotomic", "orbit_factorization");
    }

    // Trace and second moment.
    let tr = spec.trace();
    ctx.check("spectra", "trace_zero", tr.norm() <= 1e-8, || {
        format!("trace = {}", tr.norm())
    });
    let second: f64 = spec
        .complex_entries()
        .iter()
        .map(|(z, mult)| z.norm_sqr() * *mult as f64)
        .sum();
    let expect = (n * q) as f64;
    ctx.check(
        "spectra",
        "second_moment",
        (second - expect).abs() <= 1e-9 * expect.max(1.0),
        || format!("sum |lambda|^2 = {second}, expected nq = {expect}"),
    );

    // Closed forms.
    match closed_form(p, m, k) {
        Ok(forms) => {
            for f in forms {
                ctx.check(
                    "spectra",
                    &format!("closed_form_{}", f.method),
                    f.spectrum.matches(spec, CLOSED_TOL),
                    || {
                        format!(
                            "closed {} vs periods {}",
                            fmt_spec(&f.spectrum),
                            fmt_spec(spec)
                        )
                    },
                );
            }
        }
        Err(e) => ctx.check("spectra", "closed_form_error", false, || e.to_string()),
    }

    // Connectivity and Waring number.
    let connected_arith = gp_is_connected(p, m, n);
    let connected_spec = spec.principal_multiplicity() == 1;
    let g = waring_number(field, k);
    ctx.check(
        "graph",
        "connectivity",
        connected_arith == connected_spec && connected_spec == g.is_some(),
        || format!("arithmetic {connected_arith}, spectral {connected_spec}, waring {g:?}"),
    );
    let s = {
        let mut c = sorted_counts(periods);
        c.dedup();
        c.len()
    };
    if let Some(g) = g {
        ctx.check(
            "classify",
            "waring_bounds",
            g as usize <= s && s as u64 <= k,
            || format!("g = {g}, s = {s}, k = {k}"),
        );
        if q <= cfg.bfs_cap {
            let graph = GpGraph::new(field.clone(), k, Variant::Standard)?;
            let d = graph.diameter().ok();
            ctx.check("graph", "diameter_is_waring", d == Some(g), || {
                format!("diameter {d:?}, waring {g}")
            });
        } else {
            ctx.skip("graph", "diameter_is_waring");
        }
    }
    let semiprimitive = is_semiprimitive_pair(k, p, m);
    let hamming = is_hamming_gp(k, p, m);
    if semiprimitive.is_some() || hamming.is_some() {
        ctx.check("classify", "waring_equality", g == Some(s as u32), || {
            format!("distance-regular instance with g = {g:?}, s = {s}")
        });
    }

    // Energy.
    if integral {
        match energy_check(spec) {
            Ok((e, div)) => ctx.check("classify", "energy_divisibility", div, || {
                format!("E = {e}, n = {n}")
            }),
            Err(e) => ctx.check("classify", "energy_divisibility", false, || e.to_string()),
        }
    }

    // Generator independence.
    if let Some(alt) = alt {
        let other = gaussian_periods(alt, k)?;
        ctx.check(
            "cyclotomic",
            "generator_independence",
            sorted_counts(&other) == sorted_counts(periods),
            || format!("generator {} changes the period multiset", alt.omega()),
        );
    }

    // Semiprimitive pairs.
    if let Some(w) = semiprimitive {
        ctx.check("classify", "semiprimitive_integral", integral, || {
            "semiprimitive but not integral".into()
        });
        let params = srg_params(k, p, m)?;
        ctx.check(
            "classify",
            "srg_feasible",
            params.graph.feasible() && params.complement.feasible(),
            || format!("{:?}", params.graph),
        );
        ctx.check(
            "classify",
            "latin_consistent",
            params.latin.consistent() && params.complement_latin.consistent(),
            || format!("{:?} / {:?}", params.latin, params.complement_latin),
        );
        if q <= cfg.srg_cap {
            let graph = GpGraph::new(field.clone(), k, Variant::Standard)?;
            let counted = srg_by_counting(&graph)?;
            let expect = (params.graph.e as u64, params.graph.d as u64);
            ctx.check("classify", "srg_counting", counted == Some(expect), || {
                format!("counted {counted:?}, closed form {expect:?}")
            });
        } else {
            ctx.skip("classify", "srg_counting");
        }
        let sp = closed_form_semiprimitive(k, p, m)?;
        match rama_classification_semiprimitive(k, p, m) {
            Ok(arith) => {
                ctx.check("classify", "complement_ramanujan", true, String::new);
                match is_ramanujan(&sp.graph, false) {
                    Ok(v) => ctx.check(
                        "classify",
                        "ramanujan_classification",
                        v.is_ramanujan_undirected == arith,
                        || {
                            format!(
                                "classification {arith}, lambda {} vs bound {}",
                                v.lambda_max, v.bound_undirected
                            )
                        },
                    ),
                    Err(e) => ctx.check("classify", "ramanujan_classification", false, || {
                        e.to_string()
                    }),
                }
            }
            Err(e) => ctx.check("classify", "complement_ramanujan", false, || e.to_string()),
        }
        // The k = p^l + 1 family.
        for l in divisors(m as u64).into_iter().map(|l| l as u32) {
            if p.checked_pow(l).map(|x| x + 1) != Some(k) || (m / l) % 2 != 0 || l == m / 2 {
                continue;
            }
            let sigma: i128 = if (m / (2 * l)) % 2 == 1 { 1 } else { -1 };
            let pl = (p as i128).pow(l);
            let half = (p as i128).pow(m / 2);
            let l1 = (sigma * half * pl - 1) / (pl + 1);
            let l2 = -(sigma * half + 1) / (pl + 1);
            let ok = (l1, l2) == (sp.lambda1 as i128, sp.lambda2 as i128) && w.t == l;
            ctx.check("spectra", "pl_plus_one_identity", ok, || {
                format!(
                    "formula ({l1}, {l2}) vs closed form ({}, {}), t = {}",
                    sp.lambda1, sp.lambda2, w.t
                )
            });
        }
    }

    // The non-semiprimitive k = 3, 4 Ramanujan theorem, reported only.
    let k34 = (k == 3 && p % 3 == 1) || (k == 4 && p % 4 == 1 && m % 2 == 0);
    if k34 && semiprimitive.is_none() {
        match check_rama_nonsemiprimitive_k34(p, m, k) {
            Ok(v) => ctx.observe(
                "classify",
                "rama_nonsemiprimitive_k34",
                v.is_ramanujan_undirected,
                || {
                    format!(
                        "lambda {} > bound {}",
                        sig12(v.lambda_max),
                        sig12(v.bound_undirected)
                    )
                },
            ),
            Err(e) => ctx.observe("classify", "rama_nonsemiprimitive_k34", false, || {
                e.to_string()
            }),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_is_clean() {
        let cfg = SweepConfig {
            max_q: 64,
            ..Default::default()
        };
        let r = run_sweep(&cfg).unwrap();
        assert!(r.findings.is_empty(), "{:#?}", r.findings);
        assert!(r.stats("cyclotomic/sum_rule").passed > 50);
        assert_eq!(r.to_json(), run_sweep(&cfg).unwrap().to_json());
    }
}
