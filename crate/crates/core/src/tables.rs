//! The table of small semiprimitive pairs and the table of the smallest
//! semiprimitive strongly regular GP-graphs.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::classify::{srg_params, table1_semiprimitive_k, LatinType, SrgTuple};
use crate::error::Result;
use crate::field::Field;
use crate::graph::{srg_by_counting, GpGraph, Variant};
use crate::oracle::{
    as_complex, character_sums, compare_spectra, dense_eigen_symmetric, OracleReport, SymMatrix,
    DEFAULT_TOL,
};
use crate::report::csv_field;
use crate::spectra::{
    closed_form_semiprimitive, spectrum_complement, spectrum_from_periods, Spectrum,
};

pub const TABLE1_PRIMES: [u64; 4] = [2, 3, 5, 7];
pub const TABLE1_DEGREES: [u32; 4] = [2, 4, 6, 8];

/// `(k, p, m)` of the ten graphs of the srg table, in printed order.
pub const TABLE2_GRAPHS: [(u64, u64, u32); 10] = [
    (3, 2, 4),
    (3, 2, 6),
    (3, 5, 2),
    (3, 5, 4),
    (4, 3, 4),
    (4, 3, 6),
    (4, 7, 2),
    (4, 7, 4),
    (5, 3, 4),
    (5, 7, 4),
];

/// Largest `q` checked by the oracles in the srg table.
pub const TABLE2_ORACLE_CAP: u64 = 4096;

/// Largest `q` diagonalised by the Jacobi solver in the srg table.
pub const TABLE2_DENSE_CAP: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Cell {
    pub p: u64,
    pub m: u32,
    pub ks: Vec<u64>,
}

pub fn table1() -> Vec<Table1Cell> {
    TABLE1_PRIMES
        .iter()
        .flat_map(|&p| {
            TABLE1_DEGREES.iter().map(move |&m| Table1Cell {
                p,
                m,
                ks: table1_semiprimitive_k(p, m),
            })
        })
        .collect()
}

fn ks_text(ks: &[u64]) -> String {
    if ks.is_empty() {
        "--".to_string()
    } else {
        ks.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
    }
}

pub fn table1_text(cells: &[Table1Cell]) -> String {
    let mut s = String::from("p \\ m");
    for m in TABLE1_DEGREES {
        let _ = write!(s, " | m={m}");
    }
    s.push('\n');
    for p in TABLE1_PRIMES {
        let _ = write!(s, "p={p}");
        for m in TABLE1_DEGREES {
            let cell = cells
                .iter()
                .find(|c| c.p == p && c.m == m)
                .map_or(String::new(), |c| ks_text(&c.ks));
            let _ = write!(s, " | {cell}");
        }
        s.push('\n');
    }
    s
}

pub fn table1_csv(cells: &[Table1Cell]) -> String {
    let mut s = String::from("p,m,ks\n");
    for c in cells {
        let ks: Vec<String> = c.ks.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "{},{},{}", c.p, c.m, csv_field(&ks.join(" ")));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub method: String,
    pub report: OracleReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Row {
    pub label: String,
    pub complement: bool,
    pub k: u64,
    pub p: u64,
    pub m: u32,
    pub srg: SrgTuple,
    /// Integer eigenvalues with multiplicities, principal first.
    pub spectrum: Vec<(i64, u64)>,
    pub t: u32,
    pub s: u32,
    /// `PL_delta(w)` label, or `None` where the table prints "no".
    pub pl: Option<String>,
    pub latin: LatinType,
    /// The closed form agrees with the exact period spectrum.
    pub periods_agree: bool,
    /// `(e, d)` from counting common neighbours, when verified.
    pub counted: Option<(u64, u64)>,
    pub oracles: Vec<OracleCheck>,
}

impl Table2Row {
    pub fn verified(&self) -> bool {
        self.periods_agree
            && self
                .counted
                .is_none_or(|(e, d)| (e as i64, d as i64) == (self.srg.e, self.srg.d))
            && self.oracles.iter().all(|o| o.report.matched)
    }
}

fn spectrum_ints(s: &Spectrum) -> Vec<(i64, u64)> {
    let mut v = s.integer_entries().unwrap_or_default();
    let principal = s.principal();
    v.sort_by_key(|&(x, _)| (x != principal, std::cmp::Reverse(x)));
    v
}

/// The twenty rows of the srg table. With `verify`, every row is compared with
/// the character-sum oracle and common-neighbour counting (`q <= 4096`) and with
/// the Jacobi eigensolver (`q <= 1024`).
pub fn table2(verify: bool) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::new();
    for (k, p, m) in TABLE2_GRAPHS {
        let params = srg_params(k, p, m)?;
        let sp = closed_form_semiprimitive(k, p, m)?;
        let field = Arc::new(Field::new(p, m)?);
        let periods = spectrum_from_periods(&field, k)?;
        let q = field.q();
        for complement in [false, true] {
            let (srg, spec, latin, exact) = if complement {
                (
                    params.complement,
                    &sp.complement,
                    params.complement_latin,
                    spectrum_complement(&periods),
                )
            } else {
                (params.graph, &sp.graph, params.latin, periods.clone())
            };
            let mut counted = None;
            let mut oracles = Vec::new();
            if verify && q <= TABLE2_ORACLE_CAP {
                let variant = if complement {
                    Variant::Complement
                } else {
                    Variant::Standard
                };
                let graph = GpGraph::new(field.clone(), k, variant)?;
                counted = srg_by_counting(&graph)?;
                let values = character_sums(&field, &graph.connection_set());
                oracles.push(OracleCheck {
                    method: "character_sums".into(),
                    report: compare_spectra(spec, &values, DEFAULT_TOL),
                });
                if q <= TABLE2_DENSE_CAP {
                    let values = dense_eigen_symmetric(&SymMatrix::from_graph(&graph)?)?;
                    oracles.push(OracleCheck {
                        method: "dense_jacobi".into(),
                        report: compare_spectra(spec, &as_complex(&values), DEFAULT_TOL),
                    });
                }
            }
            let bar = if complement { "complement " } else { "" };
            rows.push(Table2Row {
                label: format!("{bar}Gamma({k},{p}^{m})"),
                complement,
                k,
                p,
                m,
                srg,
                spectrum: spectrum_ints(spec),
                t: params.witness.t,
                s: params.witness.s,
                pl: latin.pl_label(),
                latin,
                periods_agree: spec.matches(&exact, 0.0),
                counted,
                oracles,
            });
        }
    }
    Ok(rows)
}

fn spectrum_text(spec: &[(i64, u64)]) -> String {
    let parts: Vec<String> = spec.iter().map(|(v, m)| format!("[{v}]^{m}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn table2_text(rows: &[Table2Row]) -> String {
    let mut s = String::from("graph | srg parameters | spectrum | t | s | pseudo-latin square");
    let verified = rows.iter().any(|r| !r.oracles.is_empty());
    if verified {
        s.push_str(" | verified");
    }
    s.push('\n');
    for r in rows {
        let g = r.srg;
        let _ = write!(
            s,
            "{} | ({}, {}, {}, {}) | {} | {} | {} | {}",
            r.label,
            g.v,
            g.r,
            g.e,
            g.d,
            spectrum_text(&r.spectrum),
            r.t,
            r.s,
            r.pl.as_deref().unwrap_or("no")
        );
        if verified {
            let methods: Vec<&str> = r.oracles.iter().map(|o| o.method.as_str()).collect();
            let _ = write!(
                s,
                " | {} ({})",
                if r.verified() { "ok" } else { "MISMATCH" },
                methods.join(", ")
            );
        }
        s.push('\n');
    }
    s
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut s = String::from("graph,v,r,e,d,spectrum,t,s,pl,verified\n");
    for r in rows {
        let g = r.srg;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.label),
            g.v,
            g.r,
            g.e,
            g.d,
            csv_field(&spectrum_text(&r.spectrum)),
            r.t,
            r.s,
            r.pl.as_deref().unwrap_or("no"),
            if r.oracles.is_empty() {
                "".to_string()
            } else {
                r.verified().to_string()
            }
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_cells() {
        let cells = table1();
        assert_eq!(cells.len(), 16);
        let cell = |p, m| {
            cells
                .iter()
                .find(|c| c.p == p && c.m == m)
                .unwrap()
                .ks
                .clone()
        };
        assert_eq!(cell(5, 6), vec![2, 3, 6, 7, 9, 14, 18, 21, 42, 63]);
        assert_eq!(cell(3, 8), vec![2, 4, 5, 10, 41]);
        assert_eq!(cell(2, 2), Vec::<u64>::new());
    }

    #[test]
    fn table2_unverified() {
        let rows = table2(false).unwrap();
        assert_eq!(rows.len(), 20);
        let r = rows.iter().find(|r| r.label == "Gamma(4,3^6)").unwrap();
        assert_eq!((r.srg.v, r.srg.r, r.srg.e, r.srg.d), (729, 182, 55, 42));
        assert_eq!(r.spectrum, vec![(182, 1), (20, 182), (-7, 546)]);
        assert_eq!(r.pl.as_deref(), Some("PL_7(27)"));
        assert!(rows.iter().all(|r| r.periods_agree));
    }
}
