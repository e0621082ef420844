//! Command-line front end for exact spectra of generalized Paley graphs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gp_spectra::graph::{GpGraph, Variant};
use gp_spectra::report::{build_report, to_json_string, Method, ReportOptions};
use gp_spectra::sweep::{run_sweep, SweepConfig};
use gp_spectra::tables;

#[derive(Parser)]
#[command(
    name = "gp-spectra",
    version,
    about = "Exact spectra of generalized Paley graphs Gamma(k, q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Standard,
    Sum,
    Complement,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Sum => Variant::Sum,
            VariantArg::Complement => Variant::Complement,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Periods,
    Closed,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Periods => Method::Periods,
            MethodArg::Closed => Method::Closed,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(clap::Args)]
struct Instance {
    /// Characteristic of the field.
    #[arg(long)]
    p: u64,
    /// Extension degree, q = p^m.
    #[arg(long)]
    m: u32,
    /// Exponent: the connection set is the set of nonzero k-th powers.
    #[arg(long)]
    k: u64,
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum of one graph.
    Spectrum {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value = "periods")]
        method: MethodArg,
        /// Compare with an independent numerical oracle.
        #[arg(long)]
        verify: bool,
        /// Largest q for the oracle.
        #[arg(long, default_value_t = 4096)]
        oracle_cap: u64,
        /// Also write the arc list to this file.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Full classification of one graph.
    Classify {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        verify: bool,
        /// Largest q for the oracle and common-neighbour counting.
        #[arg(long, default_value_t = 4096)]
        oracle_cap: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduce the table of semiprimitive pairs (1) or of srg parameters (2).
    Table {
        #[arg(long, value_parser = ["1", "2"])]
        which: String,
        /// Check table 2 against the oracles.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Verify every invariant over all (p, m, k) with p^m <= max-q.
    Sweep {
        #[arg(long, default_value_t = 3000)]
        max_q: u64,
        /// Largest q for the dense eigensolver and common-neighbour counting.
        #[arg(long, default_value_t = 1024)]
        oracle_cap: u64,
        /// Largest q for the character-sum oracle.
        #[arg(long, default_value_t = 2000)]
        charsum_cap: u64,
        /// Operation budget for explicit period-polynomial expansion.
        #[arg(long, default_value_t = SweepConfig::default().psi_budget)]
        psi_budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Findings file (JSON); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            let mut f =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            f.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                f.write_all(b"\n")?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

/// Runs a command and returns whether every verification passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum {
            instance,
            method,
            verify,
            oracle_cap,
            edges,
            output,
        } => {
            let opts = ReportOptions {
                method: method.into(),
                verify,
                classify: false,
                oracle_cap,
            };
            let variant: Variant = instance.variant.into();
            let report = build_report(instance.p, instance.m, instance.k, variant, &opts)?;
            if let Some(path) = edges {
                let graph = GpGraph::build(instance.p, instance.m, instance.k, variant)?;
                let mut w = BufWriter::new(
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?,
                );
                graph.write_edges(&mut w)?;
                w.flush()?;
            }
            let text = match output.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(&text, output.out.as_ref())?;
            Ok(report.verified())
        }
        Command::Classify {
            instance,
            verify,
            oracle_cap,
            output,
        } => {
            let opts = ReportOptions {
                method: Method::Periods,
                verify,
                classify: true,
                oracle_cap,
            };
            let report = build_report(
                instance.p,
                instance.m,
                instance.k,
                instance.variant.into(),
                &opts,
            )?;
            let text = match output.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(&text, output.out.as_ref())?;
            Ok(report.verified())
        }
        Command::Table {
            which,
            verify,
            output,
        } => {
            if which == "1" {
                let cells = tables::table1();
                let text = match output.format {
                    Format::Text => tables::table1_text(&cells),
                    Format::Json => to_json_string(&cells),
                    Format::Csv => tables::table1_csv(&cells),
                };
                emit(&text, output.out.as_ref())?;
                Ok(true)
            } else {
                let rows = tables::table2(verify)?;
                let text = match output.format {
                    Format::Text => tables::table2_text(&rows),
                    Format::Json => to_json_string(&rows),
                    Format::Csv => tables::table2_csv(&rows),
                };
                emit(&text, output.out.as_ref())?;
                Ok(rows.iter().all(|r| r.verified()))
            }
        }
        Command::Sweep {
            max_q,
            oracle_cap,
            charsum_cap,
            psi_budget,
            jobs,
            out,
        } => {
            let cfg = SweepConfig {
                max_q,
                oracle_cap,
                charsum_cap,
                psi_budget,
                jobs,
                ..SweepConfig::default()
            };
            let start = Instant::now();
            let report = run_sweep(&cfg)?;
            emit(&report.to_json(), out.as_ref())?;
            let failed: u64 = report.checks.values().map(|s| s.failed).sum();
            let passed: u64 = report.checks.values().map(|s| s.passed).sum();
            eprintln!(
                "sweep q <= {max_q}: {} fields, {} instances, {passed} checks passed, {failed} failed, {} findings, {} observations ({:.1}s)",
                report.fields,
                report.instances,
                report.findings.len(),
                report.observations.len(),
                start.elapsed().as_secs_f64()
            );
            for f in &report.findings {
                eprintln!(
                    "finding: Gamma({}, {}^{}) {}/{}: {}",
                    f.k, f.p, f.m, f.module, f.check, f.detail
                );
            }
            Ok(report.findings.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
