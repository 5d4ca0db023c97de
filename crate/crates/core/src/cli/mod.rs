//! Command-line front end: configuration, the check suite, CSV tables and
//! JSON reports. Exit codes: 0 all checks pass, 1 a check or row failed,
//! 2 configuration or usage error.

pub mod config;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::laxpair::Family;
use crate::painleve::{evolution_residuals, orbit, step_backward, PainleveState};

pub use config::{Overrides, RunConfig};
pub use report::{CheckRecord, Expect, Report};
pub use suite::{full_suite, Group, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Significant digits written for f, g and t in CSV tables.
const CSV_DIGITS: usize = 30;

#[derive(Debug, Parser)]
#[command(name = "e6lax", version, about = "Build and verify the E6(1) q-Painlevé Lax pair from orthogonal polynomials")]
pub struct Cli {
    /// TOML configuration file; defaults apply to anything it omits.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Lattice points per half-line in the Jackson sums.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Working tolerance for singularity guards.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for sample points and random states.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check.
    Selftest,
    /// Tabulate (f, g) from orthogonal polynomial data along t, qt, q²t, ...
    DeriveFg {
        #[arg(long)]
        n: Option<usize>,
        /// Number of time points.
        #[arg(long, default_value_t = 3)]
        times: usize,
    },
    /// Iterate the q-Painlevé map from a seed, auditing each step.
    Evolve {
        /// Seed f as "re" or "re,im" with exact rationals.
        #[arg(long, allow_hyphen_values = true)]
        f0: String,
        #[arg(long, allow_hyphen_values = true)]
        g0: String,
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// Checks on the spectral and deformation matrices.
    VerifyLax,
    /// Checks against Sakai's or Yamada's form of the Lax pair.
    Correspond {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Sakai,
    Yamada,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            precision: self.precision,
            truncation: self.truncation,
            tol: self.tol,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

/// Result of one command: the text to write and the exit code.
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn family(cfg: &RunConfig) -> Result<Family> {
    Ok(Family::new(cfg.params()?, cfg.ctx.clone()))
}

/// Runs the given groups and assembles the report.
pub fn run_groups(cfg: &RunConfig, command: &str, groups: &[Group]) -> Result<Report> {
    let fam = family(cfg)?;
    let checks = Suite::new(&fam, cfg.seed).run(groups);
    Ok(Report::new(command, cfg.seed, cfg.ctx.prec, cfg.ctx.truncation, cfg.describe(), checks))
}

pub fn selftest_report(cfg: &RunConfig) -> Result<Report> {
    run_groups(cfg, "selftest", &Group::ALL)
}

fn report_outcome(r: Report, json: bool) -> Outcome {
    let code = if r.all_pass() { EXIT_PASS } else { EXIT_FAIL };
    let output = if json { r.to_json() } else { r.to_text() };
    Outcome { output, code }
}

fn decimal(s: &Scalar) -> (String, String) {
    s.to_decimal(CSV_DIGITS)
}

fn csv_text(rows: Vec<Vec<String>>, header: &[&str]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv write to memory");
    for row in rows {
        w.write_record(row).expect("csv write to memory");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv output is utf-8")
}

fn residual_cell(r: f64) -> String {
    format!("{r:.3e}")
}

/// One row per time tq^k, k < times. Residuals use the pair at k and k + 1.
pub fn derive_fg(cfg: &RunConfig, n: usize, times: usize) -> Result<Outcome> {
    let fam = family(cfg)?;
    let p = fam.params(n, 0).map_err(|e| Error::Config(e.to_string()))?;
    let header = ["t", "re_f", "im_f", "re_g", "im_g", "residual_first", "residual_second", "status"];
    let mut rows = Vec::new();
    let mut code = EXIT_PASS;
    let state = |k: i32| -> Result<PainleveState> {
        let fg = fam.fg(n, k)?;
        Ok(PainleveState::new(fg.f, fg.g, fam.time(k)))
    };
    for k in 0..times as i32 {
        let t = fam.time(k);
        let row = state(k).and_then(|s| {
            let next = state(k + 1)?;
            let r = evolution_residuals(&s, &next, &p)?;
            Ok((s, r))
        });
        let (tr, _) = decimal(&t);
        match row {
            Ok((s, r)) => {
                let ok = r.iter().all(|v| *v < suite::COMPOUNDED);
                if !ok {
                    code = EXIT_FAIL;
                }
                let (fr, fi) = decimal(&s.f);
                let (gr, gi) = decimal(&s.g);
                let status = if ok { "ok".to_string() } else { "residual above 1e-20".to_string() };
                rows.push(vec![tr, fr, fi, gr, gi, residual_cell(r[0]), residual_cell(r[1]), status]);
            }
            Err(e) => {
                code = EXIT_FAIL;
                let blank = String::new;
                rows.push(vec![tr, blank(), blank(), blank(), blank(), blank(), blank(), e.to_string()]);
            }
        }
    }
    Ok(Outcome { output: csv_text(rows, &header), code })
}

fn parse_complex(what: &str, s: &str, prec: u32) -> Result<Scalar> {
    let part = |v: &str| {
        v.trim()
            .parse::<Rational>()
            .map(|r| Scalar::from_rational(&r, prec))
            .map_err(|_| Error::Config(format!("{what}: expected \"re\" or \"re,im\" with exact rationals, got {s:?}")))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(part(re)? + part(im)? * Scalar::imag_unit(prec)),
        None => part(s),
    }
}

/// The orbit with, per row, the evolution residuals of the step leaving it
/// and the distance of step_backward(next) from it.
pub fn evolve(cfg: &RunConfig, f0: &str, g0: &str, steps: usize) -> Result<Outcome> {
    let prec = cfg.ctx.prec;
    let f = parse_complex("f0", f0, prec)?;
    let g = parse_complex("g0", g0, prec)?;
    let p = cfg.params()?;
    let header = ["step", "t", "re_f", "im_f", "re_g", "im_g", "residual_first", "residual_second", "round_trip", "status"];
    let seed = PainleveState::new(f, g, p.t.clone());
    let (states, failure) = match orbit(&seed, steps as i64, &p) {
        Ok(s) => (s, None),
        Err(e) => {
            let mut partial = vec![seed.clone()];
            while partial.len() <= steps {
                match crate::painleve::step_forward(partial.last().expect("nonempty"), &p) {
                    Ok(s) => partial.push(s),
                    Err(_) => break,
                }
            }
            (partial, Some(e))
        }
    };
    let mut code = EXIT_PASS;
    let mut rows = Vec::new();
    for (k, s) in states.iter().enumerate() {
        let (tr, _) = decimal(&s.t);
        let (fr, fi) = decimal(&s.f);
        let (gr, gi) = decimal(&s.g);
        let mut cells = vec![k.to_string(), tr, fr, fi, gr, gi];
        let mut status = "ok".to_string();
        match states.get(k + 1) {
            Some(next) => {
                let audit = evolution_residuals(s, next, &p).and_then(|r| Ok((r, step_backward(next, &p)?.distance(s))));
                match audit {
                    Ok((r, back)) => {
                        if r.iter().any(|v| *v >= suite::STANDARD) || back >= suite::STANDARD {
                            code = EXIT_FAIL;
                            status = "audit above 1e-25".to_string();
                        }
                        cells.extend([residual_cell(r[0]), residual_cell(r[1]), residual_cell(back)]);
                    }
                    Err(e) => {
                        code = EXIT_FAIL;
                        status = e.to_string();
                        cells.extend([String::new(), String::new(), String::new()]);
                    }
                }
            }
            None => {
                cells.extend([String::new(), String::new(), String::new()]);
                if let Some(e) = &failure {
                    code = EXIT_FAIL;
                    status = e.to_string();
                }
            }
        }
        cells.push(status);
        rows.push(cells);
    }
    Ok(Outcome { output: csv_text(rows, &header), code })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides())?;
    match &cli.command {
        Command::Selftest => Ok(report_outcome(selftest_report(&cfg)?, cli.json)),
        Command::VerifyLax => {
            let groups = [Group::Spectral, Group::Index, Group::Deform, Group::Compat];
            Ok(report_outcome(run_groups(&cfg, "verify-lax", &groups)?, cli.json))
        }
        Command::Correspond { target } => {
            let (name, group) = match target {
                Target::Sakai => ("correspond sakai", Group::Sakai),
                Target::Yamada => ("correspond yamada", Group::Yamada),
            };
            Ok(report_outcome(run_groups(&cfg, name, &[group])?, cli.json))
        }
        Command::DeriveFg { n, times } => derive_fg(&cfg, n.unwrap_or(cfg.exact.n), *times),
        Command::Evolve { f0, g0, steps } => evolve(&cfg, f0, g0, *steps),
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Entry point shared by the binary and the integration tests.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            if let Err(e) = write_output(cli.out.as_ref(), &o.output) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_CONFIG;
            }
            o.code
        }
        Err(e @ Error::Config(_)) | Err(e @ Error::InvalidParams(_)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}
