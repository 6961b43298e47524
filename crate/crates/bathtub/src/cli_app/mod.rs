//! Command-line front end: argument definitions, configuration loading,
//! subcommand dispatch and deterministic output.
//!
//! The thin `bathtub` binary only parses arguments and maps errors to exit
//! codes; everything else lives here so it can be tested in-process.

pub mod config;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::core_model::{orbit_catalog, period_t, ModelParams};
use crate::error::{BathtubError, Result};
use crate::fd_oracle::{oracle_eigenvalues, OracleOptions, DEFAULT_BASE_INTERVALS};
use crate::heat_trace::{reference_trace, HeatGrid, HeatTable, DEFAULT_N_EXACT};
use crate::quantization::{bohr_sommerfeld, correction_series, eigen_batch, MAX_SERIES_ORDER};
use crate::selftest;
use crate::trace_formulas::{
    gap_window, hbar_sweep, isolating_window, AsymptoticEigenvalues, BumpSpec, EigenSource,
    ExactEigenvalues, OrbitSelector,
};

use config::{parse_config, parse_range, parse_triple, ParamOverrides};
use output::{json_object, Cell, Format, Table};

/// Exit code when `selftest` finds a failing check.
pub const SELFTEST_FAILURE_EXIT: i32 = 12;

/// Spectral analysis of the bathtub Schrödinger operator.
#[derive(Debug, Parser)]
#[command(name = "bathtub", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Flat key=value parameter file (keys: m, omega_minus, omega_plus, ell, hbar).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Mass (overrides the config file).
    #[arg(long, global = true)]
    pub m: Option<f64>,
    /// Left-well frequency.
    #[arg(long = "omega-minus", global = true)]
    pub omega_minus: Option<f64>,
    /// Right-well frequency.
    #[arg(long = "omega-plus", global = true)]
    pub omega_plus: Option<f64>,
    /// Length of the flat bottom.
    #[arg(long, global = true)]
    pub ell: Option<f64>,
    /// Semiclassical parameter.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Output encoding (default: csv, except json for `count`).
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Subcommands.
#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact eigenvalues from the quantization condition, with Bohr–Sommerfeld
    /// and corrected asymptotic values.
    Eig {
        /// Half-open index range a..b.
        #[arg(long, default_value = "0..20", value_parser = parse_range)]
        n: std::ops::Range<u64>,
        /// Correction-series order N (0..=6).
        #[arg(long, default_value_t = MAX_SERIES_ORDER)]
        order: u32,
    },
    /// Bohr–Sommerfeld energies S(E) = 2πħ(n+½).
    Bohr {
        #[arg(long, default_value = "0..20", value_parser = parse_range)]
        n: std::ops::Range<u64>,
    },
    /// The eigenvalue correction series ΔE(𝓔ₙ) of a given order.
    Expand {
        #[arg(long, default_value = "0..20", value_parser = parse_range)]
        n: std::ops::Range<u64>,
        #[arg(long, default_value_t = MAX_SERIES_ORDER)]
        order: u32,
    },
    /// Independent finite-difference eigenvalues with error estimates.
    Oracle {
        /// Number of lowest eigenvalues.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Intervals of the coarsest grid (doubled twice).
        #[arg(long = "base-intervals", default_value_t = DEFAULT_BASE_INTERVALS)]
        base_intervals: usize,
        /// Fail if any error estimate exceeds this relative tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Periods and actions of the classical periodic orbits.
    Orbits {
        #[arg(long = "E", default_value_t = 2.0)]
        energy: f64,
        /// Maximal number of reflections (0 or 1).
        #[arg(long = "N", default_value_t = 1)]
        reflections: u32,
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        /// Keep the 0+/l- rows when ell = 0.
        #[arg(long = "include-degenerate")]
        include_degenerate: bool,
    },
    /// Smoothed eigenvalue-counting sums and periodic-orbit predictions over
    /// an hbar sweep.
    Count {
        #[arg(long = "E", default_value_t = 2.0)]
        energy: f64,
        /// Comma-separated hbar values.
        #[arg(
            long = "hbar-list",
            default_value = "0.05,0.025,0.0125",
            value_delimiter = ','
        )]
        hbar_list: Vec<f64>,
        /// Center of the time window (default: isolate the selected orbit,
        /// or the widest gap between periods in [0, T(E)]).
        #[arg(long = "rho-center")]
        rho_center: Option<f64>,
        #[arg(long = "rho-width")]
        rho_width: Option<f64>,
        /// Center of the energy window (default E).
        #[arg(long = "chi-center")]
        chi_center: Option<f64>,
        /// Half-width of the energy window (default 0.3 E).
        #[arg(long = "chi-width")]
        chi_width: Option<f64>,
        /// Orbit k,alpha,beta whose prediction is reported.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
        mode: Option<(i64, i64, i64)>,
        /// Eigenvalue source.
        #[arg(long, value_enum, default_value_t = SourceKind::Exact)]
        source: SourceKind,
    },
    /// Heat trace of the asymmetric oscillator (ell = 0, hbar = 1) and the
    /// t⁵ log t fit.
    Heat {
        #[arg(long = "t-min", default_value_t = 1e-3)]
        t_min: f64,
        #[arg(long = "t-max", default_value_t = 5e-2)]
        t_max: f64,
        #[arg(long, default_value_t = 60)]
        points: usize,
        /// Number of exactly solved levels (series beyond).
        #[arg(long = "n-exact", default_value_t = DEFAULT_N_EXACT)]
        n_exact: usize,
        /// Fit report destination (default: standard error).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Runs the acceptance checks and prints one PASS/FAIL line each.
    Selftest {
        /// Comma-separated check numbers (default: all).
        #[arg(long)]
        only: Option<String>,
    },
}

/// Eigenvalue source for `count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SourceKind {
    Exact,
    Asymptotic,
}

/// Validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub command: Command,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Loads the config file (if any), applies flag overrides and validates.
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let g = cli.global;
        let file = match &g.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    BathtubError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_config(&text)?
            }
            None => ParamOverrides::default(),
        };
        let flags = ParamOverrides {
            m: g.m,
            omega_minus: g.omega_minus,
            omega_plus: g.omega_plus,
            ell: g.ell,
            hbar: g.hbar,
        };
        let params = file.merged_with(flags).resolve()?;
        let default_format = if matches!(cli.command, Command::Count { .. }) {
            Format::Json
        } else {
            Format::Csv
        };
        Ok(Self {
            params,
            command: cli.command,
            output: g.output,
            format: g.format.unwrap_or(default_format),
        })
    }
}

/// Executes a run. Returns the process exit status (`0`, or
/// [`SELFTEST_FAILURE_EXIT`] when a self-test check fails).
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &cfg.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let code = dispatch(cfg, &mut w, stderr)?;
            w.flush()?;
            Ok(code)
        }
        None => dispatch(cfg, stdout, stderr),
    }
}

fn dispatch(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<i32> {
    let p = &cfg.params;
    match &cfg.command {
        Command::Eig { n, order } => eig_table(p, n.clone(), *order)?.write(cfg.format, out)?,
        Command::Bohr { n } => {
            let mut t = Table::new(&["n", "E_bohr"]);
            for i in n.clone() {
                t.push(vec![i.into(), bohr_sommerfeld(i, p)?.into()]);
            }
            t.write(cfg.format, out)?;
        }
        Command::Expand { n, order } => {
            expand_table(p, n.clone(), *order)?.write(cfg.format, out)?
        }
        Command::Oracle {
            count,
            base_intervals,
            tol,
        } => {
            let opts = OracleOptions {
                base_intervals: *base_intervals,
                tolerance: *tol,
            };
            let mut t = Table::new(&["n", "value", "error_estimate"]);
            for o in oracle_eigenvalues(p, *count, opts)? {
                t.push(vec![
                    (o.n as u64).into(),
                    o.value.into(),
                    o.error_estimate.into(),
                ]);
            }
            t.write(cfg.format, out)?;
        }
        Command::Orbits {
            energy,
            reflections,
            kmax,
            include_degenerate,
        } => {
            let mut t = Table::new(&["k", "alpha", "beta", "kind", "period", "action"]);
            for o in orbit_catalog(*energy, *reflections, *kmax, p, *include_degenerate)? {
                t.push(vec![
                    o.k.into(),
                    o.alpha.into(),
                    o.beta.into(),
                    o.kind.label().into(),
                    o.period.into(),
                    o.action.into(),
                ]);
            }
            t.write(cfg.format, out)?;
        }
        Command::Count {
            energy,
            hbar_list,
            rho_center,
            rho_width,
            chi_center,
            chi_width,
            mode,
            source,
        } => {
            let chi = BumpSpec::new(
                chi_center.unwrap_or(*energy),
                chi_width.unwrap_or(0.3 * energy),
            )?;
            let selector = mode.map(|(k, alpha, beta)| OrbitSelector { k, alpha, beta });
            let rho_hat = match (rho_center, rho_width, selector) {
                (Some(c), Some(w), _) => BumpSpec::new(*c, *w)?,
                (Some(_), None, _) | (None, Some(_), _) => {
                    return Err(BathtubError::InvalidArgument(
                        "--rho-center and --rho-width must be given together".into(),
                    ))
                }
                (None, None, Some(sel)) => {
                    let orbit = crate::core_model::PeriodicOrbit::new(
                        sel.k, sel.alpha, sel.beta, *energy, p,
                    )?;
                    isolating_window(*energy, orbit.period, p)?
                }
                (None, None, None) => gap_window(*energy, p, 0.0, period_t(*energy, p)?)?,
            };
            let eigs: Box<dyn EigenSource> = match source {
                SourceKind::Exact => Box::new(ExactEigenvalues),
                SourceKind::Asymptotic => Box::new(AsymptoticEigenvalues {
                    order: MAX_SERIES_ORDER,
                }),
            };
            let rows = hbar_sweep(*energy, p, chi, rho_hat, hbar_list, eigs.as_ref(), selector)?;
            let mut t = Table::new(&[
                "hbar",
                "sum_re",
                "sum_im",
                "prediction_re",
                "prediction_im",
                "ratio",
            ]);
            for r in rows {
                t.push(vec![
                    r.hbar.into(),
                    r.value.re.into(),
                    r.value.im.into(),
                    r.prediction.map(|z| z.re).into(),
                    r.prediction.map(|z| z.im).into(),
                    r.prediction.map(|z| r.value.norm() / z.norm()).into(),
                ]);
            }
            t.write(cfg.format, out)?;
        }
        Command::Heat {
            t_min,
            t_max,
            points,
            n_exact,
            report,
        } => {
            let grid = HeatGrid {
                t_min: *t_min,
                t_max: *t_max,
                points: *points,
            };
            let ts = grid.nodes()?;
            let table = HeatTable::new(p, grid.t_min, *n_exact)?;
            let fit = crate::heat_trace::heat_fit_from_table(&table, &ts)?;
            let mut t = Table::new(&["t", "exact", "reference", "D"]);
            for (&ti, &d) in ts.iter().zip(&fit.difference) {
                t.push(vec![
                    ti.into(),
                    table.exact_trace(ti)?.into(),
                    reference_trace(ti, p)?.into(),
                    d.into(),
                ]);
            }
            t.write(cfg.format, out)?;
            let labels: Vec<String> = fit.fit.basis.iter().map(|b| b.label()).collect();
            let line = json_object(&[
                ("basis", Cell::Text(labels.join(";"))),
                ("coefficients", Cell::Reals(fit.fit.coefficients.clone())),
                ("log_coefficient", fit.log_coefficient.into()),
                ("log_coefficient_error", fit.log_coefficient_error.into()),
                ("predicted", fit.predicted.into()),
                ("ratio", fit.ratio().into()),
                ("condition", fit.condition_estimate.into()),
                ("rms", fit.rms.into()),
                ("rms_without_log", fit.rms_without_log.into()),
                (
                    "extended_log_coefficient",
                    fit.extended_log_coefficient.into(),
                ),
                (
                    "inverse_t5_log_coefficient",
                    fit.inverse_t5_log_coefficient.into(),
                ),
            ]);
            match report {
                Some(path) => std::fs::write(path, format!("{line}\n"))?,
                None => writeln!(diag, "{line}")?,
            }
        }
        Command::Selftest { only } => {
            let ids: Vec<u32> = match only {
                Some(list) => list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u32>()
                            .ok()
                            .filter(|i| selftest::CRITERIA.contains(i))
                            .ok_or_else(|| {
                                BathtubError::InvalidArgument(format!("unknown check {s:?}"))
                            })
                    })
                    .collect::<Result<_>>()?,
                None => selftest::CRITERIA.collect(),
            };
            let mut all_passed = true;
            for id in ids {
                let outcome = selftest::run_check(id);
                all_passed &= outcome.passed;
                match cfg.format {
                    Format::Csv => writeln!(out, "{}", outcome.line())?,
                    Format::Json => writeln!(out, "{}", outcome.json())?,
                }
                out.flush()?;
            }
            return Ok(if all_passed { 0 } else { SELFTEST_FAILURE_EXIT });
        }
    }
    Ok(0)
}

fn eig_table(p: &ModelParams, n: std::ops::Range<u64>, order: u32) -> Result<Table> {
    if order > MAX_SERIES_ORDER {
        return Err(BathtubError::InvalidArgument(format!(
            "order must be <= {MAX_SERIES_ORDER}, got {order}"
        )));
    }
    let mut t = Table::new(&["n", "E_exact", "E_bohr", "E_asymptotic", "delta"]);
    for r in eigen_batch(n, p, order)? {
        t.push(vec![
            r.n.into(),
            r.e_exact.into(),
            r.e_bohr.into(),
            r.e_asymptotic.into(),
            r.delta.into(),
        ]);
    }
    Ok(t)
}

fn expand_table(p: &ModelParams, n: std::ops::Range<u64>, order: u32) -> Result<Table> {
    if order > MAX_SERIES_ORDER {
        return Err(BathtubError::InvalidArgument(format!(
            "order must be <= {MAX_SERIES_ORDER}, got {order}"
        )));
    }
    let mut t = Table::new(&["n", "E_bohr", "correction", "E_asymptotic"]);
    for i in n {
        let e = bohr_sommerfeld(i, p)?;
        let corr = correction_series(e, p, order).ok();
        t.push(vec![
            i.into(),
            e.into(),
            corr.into(),
            corr.map(|c| e + c).into(),
        ]);
    }
    Ok(t)
}

/// Machine-readable error line for standard error.
pub fn error_json(err: &BathtubError) -> String {
    json_object(&[
        ("error", Cell::Text(err.kind().to_string())),
        ("message", Cell::Text(err.to_string())),
        ("exit_code", Cell::Int(err.exit_code() as i64)),
    ])
}

/// Parses `args`, runs, and returns the exit status; errors are reported
/// on `stderr` as one JSON object.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return e.exit_code();
        }
    };
    let result = crate::init_thread_pool()
        .and_then(|_| RunConfig::from_cli(cli))
        .and_then(|cfg| run(&cfg, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "{}", error_json(&err));
            err.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["bathtub"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eig_default_range() {
        let (code, out, _) = run_args(&["eig", "--n", "0..20"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 21);
        assert_eq!(lines[0], "n,E_exact,E_bohr,E_asymptotic,delta");
        let es: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(es.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn orbits_catalog_rows() {
        let (code, out, _) = run_args(&["orbits", "--E", "2", "--N", "1", "--kmax", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1 + 5 * 5);
    }

    #[test]
    fn count_emits_json_lines() {
        let (code, out, _) = run_args(&[
            "--omega-plus",
            "1.4142135623730951",
            "count",
            "--E",
            "2",
            "--hbar-list",
            "0.1,0.05",
            "--mode",
            "1,0,0",
        ]);
        assert_eq!(code, 0, "{out}");
        for line in out.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v["ratio"].as_f64().unwrap() > 0.5);
        }
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(run_args(&["eig", "--n", "0-3"]).0, 2);
        assert_eq!(run_args(&["--m=-1", "eig"]).0, 3);
        let (code, _, err) = run_args(&["heat"]);
        assert_eq!(code, 4);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "invalid_argument");
        assert_eq!(v["exit_code"], 4);
        assert_eq!(run_args(&["orbits", "--N", "2"]).0, 10);
        assert_eq!(
            run_args(&[
                "count",
                "--mode",
                "1,0,0",
                "--rho-center",
                "3",
                "--rho-width",
                "5"
            ])
            .0,
            8
        );
    }
}
