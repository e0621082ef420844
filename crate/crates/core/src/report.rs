//! Per-instance report records with deterministic JSON, text and CSV renderings.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::classify::{
    energy_check, is_hamming_gp, is_integral_pred, is_ramanujan, is_semiprimitive_pair, rama_case,
    srg_params, waring_number, RamanujanVerdict, SemiprimitiveWitness, SrgParams,
};
use crate::cyclotomic::gaussian_periods;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::{srg_by_counting, GpGraph, Variant};
use crate::oracle::{
    as_complex, compare_spectra, dense_eigen_symmetric, dense_eigen_symmetric_fast,
    graph_character_sums, OracleReport, SymMatrix, DEFAULT_TOL,
};
use crate::spectra::{apply_variant, closed_form, spectrum_of_periods, Eigenvalue, Spectrum};

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Absolute tolerance between the closed-form and period spectra.
pub const CLOSED_TOL: f64 = 1e-8;

/// Largest dimension handled by the Jacobi solver; larger matrices use the
/// tridiagonal QR solver.
pub const JACOBI_LIMIT: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Periods,
    Closed,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periods" => Ok(Method::Periods),
            "closed" => Ok(Method::Closed),
            "both" => Ok(Method::Both),
            _ => Err(Error::InvalidParameter(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub method: Method,
    pub verify: bool,
    pub classify: bool,
    /// Largest `q` for the oracle paths.
    pub oracle_cap: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            method: Method::Periods,
            verify: false,
            classify: false,
            oracle_cap: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flags {
    pub undirected: bool,
    pub connected: bool,
    pub integral: bool,
    pub semiprimitive: bool,
    pub hamming: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueRecord {
    /// `int`, `complex` (a Gaussian period) or `descriptor` (a closed form).
    pub kind: &'static str,
    pub re: f64,
    pub im: f64,
    pub exact: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryRecord {
    pub value: ValueRecord,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamanujanRecord {
    /// `None` for disconnected graphs.
    pub verdict: Option<RamanujanVerdict>,
    pub error: Option<String>,
    /// Case letter of the semiprimitive classification (`none` when it predicts
    /// "not Ramanujan"); only for standard semiprimitive graphs.
    pub classification_case: Option<String>,
    pub classification_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRecord {
    pub method: String,
    pub tolerance: f64,
    pub report: Option<OracleReport>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SrgRecord {
    pub params: SrgParams,
    pub pl_type: Option<String>,
    pub complement_pl_type: Option<String>,
    /// `(e, d)` from counting common neighbours, when the graph is small enough.
    pub counted: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityRecord {
    /// `k | (q - 1)/(p - 1)`.
    pub predicted: bool,
    pub periods_integral: bool,
    /// Every integral period satisfies `k eta + 1 = 0 (mod p)`.
    pub congruence: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaringRecord {
    /// Waring number, equal to the diameter; `None` when disconnected.
    pub g: Option<u32>,
    /// Number of distinct Gaussian periods.
    pub s: usize,
    pub within_bounds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HammingRecord {
    pub b: u32,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub energy: i64,
    pub divisible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationRecord {
    pub integrality: IntegralityRecord,
    pub semiprimitive_witness: Option<SemiprimitiveWitness>,
    pub hamming: Option<HammingRecord>,
    pub waring: Option<WaringRecord>,
    pub energy: Option<EnergyRecord>,
    pub complement_ramanujan: Option<RamanujanVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedRecord {
    pub method: String,
    pub agrees_with_periods: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub p: u64,
    pub m: u32,
    pub k: u64,
    pub q: u64,
    pub n: u64,
    pub variant: String,
    pub method: Method,
    pub flags: Flags,
    pub spectrum: Vec<EntryRecord>,
    pub closed_forms: Vec<ClosedRecord>,
    pub srg: Option<SrgRecord>,
    pub ramanujan: RamanujanRecord,
    pub oracle: Option<OracleRecord>,
    pub classification: Option<ClassificationRecord>,
}

impl ReportRecord {
    /// True when every requested verification passed.
    pub fn verified(&self) -> bool {
        let oracle_ok = self
            .oracle
            .as_ref()
            .is_none_or(|o| o.report.as_ref().is_none_or(|r| r.matched));
        let closed_ok = self
            .closed_forms
            .iter()
            .all(|c| c.agrees_with_periods != Some(false));
        let srg_ok = self.srg.as_ref().is_none_or(|s| {
            s.counted
                .is_none_or(|(e, d)| (e as i64, d as i64) == (s.params.graph.e, s.params.graph.d))
        });
        let rama_ok = self.ramanujan.classification_agrees != Some(false);
        oracle_ok && closed_ok && srg_ok && rama_ok
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Gamma(k={}, q={}^{}={}) variant={} n={} method={}",
            self.k,
            self.p,
            self.m,
            self.q,
            self.variant,
            self.n,
            serde_json::to_value(self.method)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default()
        );
        let f = &self.flags;
        let _ = writeln!(
            s,
            "flags: undirected={} connected={} integral={} semiprimitive={} hamming={}",
            f.undirected, f.connected, f.integral, f.semiprimitive, f.hamming
        );
        let _ = writeln!(s, "spectrum:");
        for e in &self.spectrum {
            let v = &e.value;
            if v.kind == "int" {
                let _ = writeln!(s, "  [{}]^{}", v.exact, e.mult);
            } else {
                let _ = writeln!(
                    s,
                    "  [{} ~ {}]^{}",
                    v.exact,
                    fmt_complex(v.re, v.im),
                    e.mult
                );
            }
        }
        for c in &self.closed_forms {
            let agree = match c.agrees_with_periods {
                Some(true) => "agrees with periods",
                Some(false) => "DISAGREES with periods",
                None => "not compared",
            };
            let _ = writeln!(s, "closed form {}: {agree}", c.method);
        }
        if let Some(srg) = &self.srg {
            let g = srg.params.graph;
            let c = srg.params.complement;
            let a = srg.params.intersection_array;
            let _ = writeln!(
                s,
                "srg({},{},{},{}) array {{{},{};{},{}}} PL: {}",
                g.v,
                g.r,
                g.e,
                g.d,
                a[0],
                a[1],
                a[2],
                a[3],
                srg.pl_type.as_deref().unwrap_or("no")
            );
            let _ = writeln!(
                s,
                "complement srg({},{},{},{}) PL: {}",
                c.v,
                c.r,
                c.e,
                c.d,
                srg.complement_pl_type.as_deref().unwrap_or("no")
            );
            if let Some((e, d)) = srg.counted {
                let _ = writeln!(s, "counted (e, d) = ({e}, {d})");
            }
        }
        match (&self.ramanujan.verdict, &self.ramanujan.error) {
            (Some(v), _) => {
                let _ = writeln!(
                    s,
                    "ramanujan: lambda={} bound={} undirected={} directed_classical={} directed_lp={}",
                    sig12(v.lambda_max),
                    sig12(v.bound_undirected),
                    v.is_ramanujan_undirected,
                    v.is_ramanujan_directed_classical,
                    v.is_ramanujan_directed_lp
                );
            }
            (None, Some(e)) => {
                let _ = writeln!(s, "ramanujan: {e}");
            }
            _ => {}
        }
        if let Some(case) = &self.ramanujan.classification_case {
            let _ = writeln!(
                s,
                "ramanujan classification case: {case} (agrees: {})",
                self.ramanujan
                    .classification_agrees
                    .map_or("n/a".into(), |b| b.to_string())
            );
        }
        if let Some(c) = &self.classification {
            let i = &c.integrality;
            let _ = writeln!(
                s,
                "integrality: predicted={} periods={} congruence={}",
                i.predicted,
                i.periods_integral,
                i.congruence.map_or("n/a".into(), |b| b.to_string())
            );
            if let Some(w) = &c.semiprimitive_witness {
                let _ = writeln!(
                    s,
                    "semiprimitive witness: t={} s={} sigma={}",
                    w.t, w.s, w.sigma
                );
            }
            if let Some(h) = &c.hamming {
                let _ = writeln!(s, "hamming: H({}, {}^{})", h.b, self.p, h.m);
            }
            if let Some(w) = &c.waring {
                let _ = writeln!(
                    s,
                    "waring number: {} (distinct periods {})",
                    w.g.map_or("none (disconnected)".into(), |g| g.to_string()),
                    w.s
                );
            }
            if let Some(e) = &c.energy {
                let _ = writeln!(s, "energy: {} (divisible by n: {})", e.energy, e.divisible);
            }
            if let Some(v) = &c.complement_ramanujan {
                let _ = writeln!(s, "complement ramanujan: {}", v.is_ramanujan_undirected);
            }
        }
        if let Some(o) = &self.oracle {
            match &o.report {
                Some(r) => {
                    let _ = writeln!(
                        s,
                        "oracle ({}): matched={} max deviation={:e}",
                        o.method, r.matched, r.max_abs_deviation
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        "oracle ({}): {}",
                        o.method,
                        o.note.as_deref().unwrap_or("")
                    );
                }
            }
        }
        s
    }

    /// One CSV row per spectrum entry.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,m,k,q,n,variant,kind,re,im,exact,mult\n");
        for e in &self.spectrum {
            let v = &e.value;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                self.p,
                self.m,
                self.k,
                self.q,
                self.n,
                self.variant,
                v.kind,
                sig12(v.re),
                sig12(v.im),
                csv_field(&v.exact),
                e.mult
            );
        }
        s
    }
}

fn fmt_complex(re: f64, im: f64) -> String {
    crate::spectra::format_complex(num_complex::Complex64::new(re, im))
}

/// Quote a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Serialize with every float rounded to 12 significant digits and `-0` folded
/// to `0`.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report serialization");
    normalize_floats(&mut v);
    serde_json::to_string_pretty(&v).expect("report serialization")
}

pub fn normalize_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = sig12(n.as_f64().unwrap_or(0.0));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(normalize_floats),
        Value::Object(o) => o.values_mut().for_each(normalize_floats),
        _ => {}
    }
}

pub fn entry_records(spec: &Spectrum) -> Vec<EntryRecord> {
    spec.entries()
        .into_iter()
        .map(|(v, mult)| {
            let z = v.to_complex();
            let im = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
            let (kind, exact) = match &v {
                Eigenvalue::Int(x) => ("int", x.to_string()),
                Eigenvalue::Cyclotomic(c) => match c.as_integer() {
                    Some(x) => ("int", x.to_string()),
                    None => ("complex", c.to_string()),
                },
                Eigenvalue::Algebraic(d) => ("descriptor", format!("{} [{}]", d.expr, d.case)),
            };
            EntryRecord {
                value: ValueRecord {
                    kind,
                    re: z.re,
                    im,
                    exact,
                },
                mult,
            }
        })
        .collect()
}

/// Build the report for `Gamma(k, p^m)` or one of its variants.
pub fn build_report(
    p: u64,
    m: u32,
    k_input: u64,
    variant: Variant,
    opts: &ReportOptions,
) -> Result<ReportRecord> {
    let field = Arc::new(Field::new(p, m)?);
    let graph = GpGraph::new(field.clone(), k_input, variant)?;
    let k = graph.k();
    let q = field.q();
    let n = (q - 1) / k;

    let periods = gaussian_periods(&field, k)?;
    let base = spectrum_of_periods(&periods, n);
    let base_variant = apply_variant(&base, variant)?;

    let mut closed_forms = Vec::new();
    let mut closed_spec = None;
    if opts.method != Method::Periods {
        let forms = closed_form(p, m, k)?;
        if forms.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "no closed form applies to Gamma({k}, {p}^{m})"
            )));
        }
        for f in &forms {
            let agrees =
                (opts.method == Method::Both).then(|| f.spectrum.matches(&base, CLOSED_TOL));
            closed_forms.push(ClosedRecord {
                method: f.method.to_string(),
                agrees_with_periods: agrees,
            });
        }
        closed_spec = Some(apply_variant(&forms[0].spectrum, variant)?);
    }
    let spec = match (opts.method, closed_spec) {
        (Method::Closed, Some(s)) => s,
        _ => base_variant,
    };

    let witness = is_semiprimitive_pair(k, p, m);
    let hamming = is_hamming_gp(k, p, m);
    let flags = Flags {
        undirected: graph.is_undirected(),
        connected: spec.principal_multiplicity() == 1,
        integral: spec.is_integral(),
        semiprimitive: witness.is_some(),
        hamming: hamming.is_some(),
    };

    let srg = match witness {
        Some(_) => {
            let params = srg_params(k, p, m)?;
            let counted = if opts.classify && q <= opts.oracle_cap && variant != Variant::Sum {
                let g = GpGraph::new(field.clone(), k, Variant::Standard)?;
                srg_by_counting(&g)?
            } else {
                None
            };
            Some(SrgRecord {
                pl_type: params.latin.pl_label(),
                complement_pl_type: params.complement_latin.pl_label(),
                params,
                counted,
            })
        }
        None => None,
    };

    let ramanujan = {
        let (verdict, error) = match is_ramanujan(&spec, !flags.undirected) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let (case, agrees) = match (witness, variant) {
            (Some(_), Variant::Standard) => {
                let case = rama_case(k, p, m);
                let agrees = verdict.map(|v| v.is_ramanujan() == case.is_some());
                (
                    Some(case.map_or("none".to_string(), |c| c.to_string())),
                    agrees,
                )
            }
            _ => (None, None),
        };
        RamanujanRecord {
            verdict,
            error,
            classification_case: case,
            classification_agrees: agrees,
        }
    };

    let oracle = opts
        .verify
        .then(|| run_oracle(&graph, &spec, opts.oracle_cap));

    let classification = if opts.classify {
        let ints: Vec<Option<i64>> = periods.iter().map(|c| c.as_integer()).collect();
        let periods_integral = ints.iter().all(Option::is_some);
        let congruence = periods_integral.then(|| {
            ints.iter()
                .flatten()
                .all(|&eta| (k as i64 * eta + 1).rem_euclid(p as i64) == 0)
        });
        let mut distinct: Vec<&[i64]> = periods.iter().map(|c| c.counts()).collect();
        distinct.sort();
        distinct.dedup();
        let s = distinct.len();
        let waring = (variant == Variant::Standard).then(|| {
            let g = waring_number(&field, k);
            WaringRecord {
                g,
                s,
                within_bounds: g.map(|g| g as usize <= s && s as u64 <= k),
            }
        });
        let energy = energy_check(&spec)
            .ok()
            .map(|(energy, divisible)| EnergyRecord { energy, divisible });
        let complement_ramanujan = if variant == Variant::Standard {
            is_ramanujan(
                &crate::spectra::spectrum_complement(&spec),
                !flags.undirected,
            )
            .ok()
        } else {
            None
        };
        Some(ClassificationRecord {
            integrality: IntegralityRecord {
                predicted: is_integral_pred(p, m, k),
                periods_integral,
                congruence,
            },
            semiprimitive_witness: witness,
            hamming: hamming.map(|(b, m)| HammingRecord { b, m }),
            waring,
            energy,
            complement_ramanujan,
        })
    } else {
        None
    };

    Ok(ReportRecord {
        p,
        m,
        k,
        q,
        n,
        variant: variant.to_string(),
        method: opts.method,
        flags,
        spectrum: entry_records(&spec),
        closed_forms,
        srg,
        ramanujan,
        oracle,
        classification,
    })
}

/// Character sums for Cayley variants, the dense eigensolver for sum graphs.
fn run_oracle(graph: &GpGraph, spec: &Spectrum, cap: u64) -> OracleRecord {
    let q = graph.q();
    let skipped = |method: &str, note: String| OracleRecord {
        method: method.to_string(),
        tolerance: DEFAULT_TOL,
        report: None,
        note: Some(note),
    };
    if q > cap {
        return skipped("none", format!("q = {q} exceeds the oracle cap {cap}"));
    }
    if graph.variant() != Variant::Sum {
        return match graph_character_sums(graph) {
            Ok(values) => OracleRecord {
                method: "character_sums".into(),
                tolerance: DEFAULT_TOL,
                report: Some(compare_spectra(spec, &values, DEFAULT_TOL)),
                note: None,
            },
            Err(e) => skipped("character_sums", e.to_string()),
        };
    }
    let (method, solver): (&str, fn(&SymMatrix) -> Result<Vec<f64>>) = if q <= JACOBI_LIMIT {
        ("dense_jacobi", dense_eigen_symmetric)
    } else {
        ("dense_tridiagonal_qr", dense_eigen_symmetric_fast)
    };
    match SymMatrix::from_graph(graph).and_then(|m| solver(&m)) {
        Ok(values) => OracleRecord {
            method: method.into(),
            tolerance: DEFAULT_TOL,
            report: Some(compare_spectra(spec, &as_complex(&values), DEFAULT_TOL)),
            note: None,
        },
        Err(e) => skipped(method, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounding() {
        assert_eq!(sig12(-0.0), 0.0);
        assert!(sig12(-0.0).is_sign_positive());
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(-1e-20), -1e-20);
    }

    #[test]
    fn json_is_stable() {
        let opts = ReportOptions {
            verify: true,
            classify: true,
            ..Default::default()
        };
        let a = build_report(2, 4, 3, Variant::Standard, &opts).unwrap();
        let b = build_report(2, 4, 3, Variant::Standard, &opts).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let v: Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(v["n"], 5);
        assert_eq!(v["oracle"]["report"]["matched"], true);
        assert_eq!(v["srg"]["params"]["graph"]["d"], 2);
        assert_eq!(v["spectrum"][0]["value"]["kind"], "int");
    }

    #[test]
    fn disconnected_report() {
        let r = build_report(3, 2, 4, Variant::Standard, &ReportOptions::default()).unwrap();
        assert!(!r.flags.connected);
        assert!(r.ramanujan.verdict.is_none());
        assert_eq!(r.spectrum.len(), 2);
    }

    #[test]
    fn sum_graph_oracle() {
        let opts = ReportOptions {
            verify: true,
            ..Default::default()
        };
        let r = build_report(3, 2, 2, Variant::Sum, &opts).unwrap();
        assert!(r.oracle.unwrap().report.unwrap().matched);
        let r = build_report(3, 2, 4, Variant::Complement, &opts).unwrap();
        assert!(r.verified());
    }
}
