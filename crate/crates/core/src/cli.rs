//! Command-line front end. [`run`] is the whole program; the binary only
//! prints its outcome.
//!
//! Structured arguments (`--cone`, `--e`, `--config`, …) take inline JSON or a
//! path to a JSON file. Results go to stdout as JSON. Exit codes: 0 success,
//! 1 parse or validation failure, 2 non-convergence.

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::cone_metric::{
    induced_metric, order_check, validate_cone_metric, EuclideanMetric, FiniteConeMetric, Metric,
    SupMetric,
};
use crate::cones::SolidCone;
use crate::error::{Error, Result};
use crate::fixed_point::{jungck_solve, tvs_jungck_solve, JungckProblem, SolveReport, Status};
use crate::json::{self, load, MetricSpec, SolveConfig, TvsSolveConfig};
use crate::sampling;
use crate::scalarization::{equivalence_constants, norm_e, xi};
use crate::selftest;
use crate::vector::Vector;

pub const SEED_ENV: &str = "CONESCALE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "conescale",
    version,
    about = "Solid-cone scalarization, induced metrics and a Jungck fixed-point solver"
)]
struct Cli {
    /// Seed for every sampled check; the CONESCALE_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = sampling::DEFAULT_SEED)]
    seed: u64,
    /// Print a one-line summary to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check pointedness, solidity and closure of a cone.
    ValidateCone {
        #[arg(long)]
        cone: String,
    },
    /// ξ_e(y) with its bracket and method.
    Scalarize {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        e: String,
        #[arg(long)]
        y: String,
    },
    /// ‖x‖_e.
    Norm {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        e: String,
        #[arg(long)]
        x: String,
    },
    /// Best constants between ‖·‖_e and ‖·‖_e2.
    Equiv {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        e: String,
        #[arg(long)]
        e2: String,
    },
    /// Compare x ≤ y by membership and by sampled scalarizations.
    Order {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Check the cone-metric axioms of a finite space.
    MetricValidate {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Also print the induced real distance matrix for this interior point.
        #[arg(long)]
        e: Option<String>,
    },
    /// Jungck iteration for affine maps under a real metric.
    Solve {
        #[arg(long)]
        config: String,
    },
    /// Jungck iteration with cone-valued distance and cone gauges.
    SolveTvs {
        #[arg(long)]
        config: String,
    },
    /// Seeded property suites.
    Selftest {
        /// Suite to run; repeatable. All suites by default.
        #[arg(long)]
        suite: Vec<String>,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(code: i32, value: &impl Serialize) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("serializable output");
        stdout.push('\n');
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let kind = match e {
            Error::Dimension { .. } => "dimension",
            Error::NotInterior(_) => "not_interior",
            Error::Numerical(_) => "numerical",
            Error::Domain(_) => "domain",
            Error::Template(_) => "template",
            Error::RangeInclusion(_) => "range_inclusion",
            Error::Parse(_) => "parse",
            Error::NonFinite { .. } => "non_finite",
        };
        let mut out = Outcome::json(
            1,
            &json!({ "error": { "kind": kind, "message": e.to_string() } }),
        );
        out.stderr = format!("error: {e}\n");
        out
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let seed = match std::env::var(SEED_ENV) {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(s) => s,
            Err(_) => {
                return Outcome::error(&Error::Parse(format!(
                    "{SEED_ENV}={v:?} is not an unsigned integer"
                )))
            }
        },
        Err(_) => cli.seed,
    };
    let mut out = dispatch(cli.command, seed).unwrap_or_else(|e| Outcome::error(&e));
    if cli.verbose && out.stderr.is_empty() {
        out.stderr = format!("seed {seed}, exit {}\n", out.code);
    }
    out
}

fn dispatch(command: Command, seed: u64) -> Result<Outcome> {
    let mut rng = sampling::rng(seed);
    match command {
        Command::ValidateCone { cone } => {
            let cone: SolidCone = load(&cone)?;
            let report = cone.validate_with(&mut rng);
            Ok(Outcome::json(if report.passed() { 0 } else { 1 }, &report))
        }
        Command::Scalarize { cone, e, y } => {
            let cone: SolidCone = load(&cone)?;
            Ok(Outcome::json(0, &xi(&cone, &load(&e)?, &load(&y)?)?))
        }
        Command::Norm { cone, e, x } => {
            let cone: SolidCone = load(&cone)?;
            Ok(Outcome::json(
                0,
                &json!({ "norm": norm_e(&cone, &load(&e)?, &load(&x)?)? }),
            ))
        }
        Command::Equiv { cone, e, e2 } => {
            let cone: SolidCone = load(&cone)?;
            Ok(Outcome::json(
                0,
                &equivalence_constants(&cone, &load(&e)?, &load(&e2)?)?,
            ))
        }
        Command::Order {
            cone,
            x,
            y,
            samples,
        } => {
            let cone: SolidCone = load(&cone)?;
            let es = sampling::interior_directions(&cone, samples.max(1), &mut rng);
            Ok(Outcome::json(
                0,
                &order_check(&cone, &load(&x)?, &load(&y)?, &es)?,
            ))
        }
        Command::MetricValidate { space, samples, e } => {
            let space: FiniteConeMetric = load(&space)?;
            let report = validate_cone_metric(&space, &space.points(), samples, &mut rng);
            let induced = match e {
                Some(e) => Some(space.induced_matrix(&load::<Vector>(&e)?)?),
                None => None,
            };
            let code = if report.passed() { 0 } else { 1 };
            Ok(Outcome::json(
                code,
                &json!({ "report": report, "induced": induced }),
            ))
        }
        Command::Solve { config } => solve(load(&config)?),
        Command::SolveTvs { config } => solve_tvs(load(&config)?),
        Command::Selftest { suite } => {
            let report = selftest::run(seed, &suite)?;
            Ok(Outcome::json(if report.passed { 0 } else { 1 }, &report))
        }
    }
}

fn solved(report: &SolveReport<Vector, Vector>) -> Outcome {
    let code = match report.status {
        Status::Converged => 0,
        Status::NonConvergence => 2,
    };
    Outcome::json(code, report)
}

fn solve(cfg: SolveConfig) -> Result<Outcome> {
    let dim = cfg.x0.dim();
    let maps = json::affine_maps(&cfg.f, cfg.g.as_ref(), dim)?;
    let gauges = cfg.gauges.expand();
    let tolerances = json::tolerances(cfg.tol_conv, cfg.max_iter);
    let run = |metric: Box<dyn Metric<Vector> + '_>| {
        let problem = JungckProblem {
            metric,
            maps,
            gauges,
            x0: cfg.x0.clone(),
            tolerances,
            weakly_compatible: cfg.weakly_compatible,
        };
        jungck_solve(&problem).map(|r| solved(&r))
    };
    match &cfg.metric {
        MetricSpec::Euclidean => run(Box::new(EuclideanMetric)),
        MetricSpec::Sup => run(Box::new(SupMetric)),
        MetricSpec::Abs => {
            if dim != 1 {
                return Err(Error::Domain(format!(
                    "the abs metric needs dimension 1, got {dim}"
                )));
            }
            run(Box::new(EuclideanMetric))
        }
        MetricSpec::Induced { cone, distance, e } => {
            let space = distance.build(cone)?;
            run(Box::new(induced_metric(&space, e)?))
        }
    }
}

fn solve_tvs(cfg: TvsSolveConfig) -> Result<Outcome> {
    let maps = json::affine_maps(&cfg.f, cfg.g.as_ref(), cfg.x0.dim())?;
    let space = cfg.distance.build(&cfg.cone)?;
    let psi = json::cone_gauges(&cfg.psi, &cfg.cone)?;
    let tolerances = json::tolerances(cfg.tol_conv, cfg.max_iter);
    let mut report = tvs_jungck_solve(&space, maps, &psi, &cfg.e, cfg.x0.clone(), tolerances)?;
    if cfg.weakly_compatible {
        let f = json::affine_maps(&cfg.f, cfg.g.as_ref(), cfg.x0.dim())?.f;
        let d = induced_metric(&space, &cfg.e)?;
        report.fixed_point_residual = Some(d.distance(&report.limit, &f(&report.limit))?);
    }
    Ok(solved(&report))
}
