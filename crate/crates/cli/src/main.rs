use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use radii_core::colourful::{
    brute_force_max, detect_hexagon_equality, detect_orthogonal_equality, greedy_select,
    in_three_set_theorem, minmax_center,
};
use radii_core::format::{parse_body, parse_gauge, parse_instances, parse_sets, to_line};
use radii_core::gauge::Gauge;
use radii_core::harness::{
    explore_lp_conjecture, explore_n_plus_one, run_random, run_suite, Suite,
};
use radii_core::radii::{circumradius, extract_certificate};
use radii_core::tol::{Limits, DEFAULT_MAX_SUM_POINTS, EPS_EQ};
use radii_core::Error;

const BUDGET_VAR: &str = "RADII_MAX_SUM_POINTS";

/// Circumradii, colourful selections and Minkowski-sum radius checks.
#[derive(Parser)]
#[command(name = "radii", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circumradius of a body with respect to a gauge.
    Circumradius {
        #[arg(long)]
        body: PathBuf,
        /// Gauge file; the Euclidean ball when omitted.
        #[arg(long)]
        gauge: Option<PathBuf>,
        /// Include the optimal-containment certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Choose one vector per balanced set.
    Select {
        #[arg(long)]
        sets: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Run an inequality suite over given or random instances.
    Check {
        #[arg(long)]
        suite: Suite,
        #[arg(long, conflicts_with_all = ["random", "seed"])]
        instances: Option<PathBuf>,
        #[arg(long, requires = "seed")]
        random: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Gauge for factor-j and max-bound.
        #[arg(long)]
        gauge: Option<PathBuf>,
    },
    /// Explore one of the open conjectures.
    Explore {
        #[arg(long, value_enum)]
        conjecture: Conjecture,
        #[arg(long)]
        n: usize,
        /// Exponent for the lp conjecture, a number or "inf".
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Greedy,
    Brute,
    Minmax,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conjecture {
    Lp,
    NPlusOne,
}

enum Failure {
    Usage(String),
    Core(Error),
    /// Reports were written but at least one failed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn limits() -> Result<Limits, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_sum_points| Limits { max_sum_points })
            .map_err(|_| {
                Failure::Usage(format!(
                    "{BUDGET_VAR} must be a positive integer, got \"{v}\""
                ))
            }),
        Err(_) => Ok(Limits {
            max_sum_points: DEFAULT_MAX_SUM_POINTS,
        }),
    }
}

fn emit(out: &mut impl Write, v: &impl serde::Serialize) -> Result<(), Failure> {
    let line = to_line(v)?;
    writeln!(out, "{line}").map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let limits = limits()?;
    match cli.command {
        Command::Circumradius {
            body,
            gauge,
            certificate,
        } => {
            let k = parse_body(&read(&body)?)?;
            let c = match gauge {
                Some(g) => parse_gauge(&read(&g)?)?,
                None => Gauge::Euclidean,
            };
            let r = circumradius(&k, &c)?;
            let mut v = json!({"radius": r.radius, "center": r.center, "method": r.method});
            if certificate && r.radius > 0.0 {
                v["certificate"] = serde_json::to_value(extract_certificate(&k, &c, &r)?)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            emit(out, &v)
        }
        Command::Select { sets, mode } => {
            let f = parse_sets(&read(&sets)?)?;
            match mode {
                Mode::Greedy => emit(out, &greedy_select(&f.sets, &f.c)?),
                Mode::Brute => emit(out, &brute_force_max(&f.sets, &f.c, &limits)?),
                Mode::Minmax => {
                    let mm = minmax_center(&f.sets, &limits)?;
                    let mut v = json!({
                        "center": mm.center,
                        "value": mm.value,
                        "orthogonal_equality": detect_orthogonal_equality(&f.sets, EPS_EQ),
                    });
                    // the planar three-set bound is only asserted for k_i <= 3
                    if f.sets.len() == 3 && f.dim == 2 {
                        let within = in_three_set_theorem(&f.sets);
                        v["three_set_theorem"] = json!(within);
                        v["hexagon_equality"] =
                            json!(within && detect_hexagon_equality(&f.sets, EPS_EQ)?);
                    }
                    emit(out, &v)
                }
            }
        }
        Command::Check {
            suite,
            instances,
            random,
            seed,
            gauge,
        } => {
            let fixed = gauge
                .map(|g| read(&g).and_then(|t| Ok(parse_gauge(&t)?)))
                .transpose()?;
            let reports = match (instances, random) {
                (Some(path), None) => {
                    let f = parse_instances(&read(&path)?)?;
                    let mut reports = Vec::with_capacity(f.instances.len());
                    for (id, inst) in f.instances.iter().enumerate() {
                        let g = inst.gauge.as_ref().or(fixed.as_ref());
                        let mut r = run_suite(suite, &inst.bodies, g, &limits)?;
                        r.instance_id = id as u64;
                        reports.push(r);
                    }
                    reports
                }
                (None, Some(count)) => {
                    run_random(suite, count, seed.unwrap_or(0), fixed.as_ref(), &limits)?
                }
                _ => {
                    return Err(Failure::Usage(
                        "give either --instances or --random with --seed".into(),
                    ))
                }
            };
            for r in &reports {
                emit(out, r)?;
            }
            if reports.iter().all(|r| r.pass) {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Explore {
            conjecture,
            n,
            p,
            trials,
            seed,
        } => {
            let report = match conjecture {
                Conjecture::Lp => {
                    let p = p.ok_or_else(|| {
                        Failure::Usage("--p is required for the lp conjecture".into())
                    })?;
                    let p = match p.as_str() {
                        "inf" => f64::INFINITY,
                        s => s
                            .parse()
                            .map_err(|_| Failure::Usage(format!("invalid --p \"{s}\"")))?,
                    };
                    explore_lp_conjecture(n, p, trials, seed, &limits)?
                }
                Conjecture::NPlusOne => explore_n_plus_one(n, trials, seed, &limits)?,
            };
            emit(out, &report)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::NotInHull { .. } | Error::NoCertificate(_) => 2,
        Error::SolverFailure { .. } | Error::InvariantViolation(_) => 3,
        Error::Budget { .. } => 4,
    }
}

fn fail(out: &mut impl Write, msg: &str, code: u8) -> ExitCode {
    eprintln!("radii: {msg}");
    let _ = writeln!(out, "{}", json!({ "error": msg }));
    let _ = out.flush();
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprint!("{msg}");
            let _ = writeln!(out, "{}", json!({ "error": first }));
            let _ = out.flush();
            return ExitCode::from(2);
        }
    };
    let code = match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(m)) => fail(&mut out, &m, 2),
        Err(Failure::Core(e)) => fail(&mut out, &e.to_string(), exit_code(&e)),
    };
    let _ = out.flush();
    code
}
