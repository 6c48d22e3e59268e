//! The `minclaim` command line.
//!
//! Exit codes: 0 success (or the order holds), 1 the order fails or a bound
//! curve leaves the sandwich, 2 usage or parse error, 3 domain error,
//! 4 premise failure, 5 inconclusive.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use minclaim_core::orders::{
    check_st_on_grid, hr_characterization_gumbel_phr, lr_characterization, numeric_hr_check,
    numeric_lr_check, predict_st_from_premises, StPrediction,
};
use minclaim_core::portfolio::SANDWICH_TOL;
use minclaim_core::{
    linspace, BoundsCurve, BoundsMethod, BoundsOptions, Direction, OrderVerdict, Portfolio,
    Relation,
};
use serde::{Deserialize, Deserializer, Serialize};

use crate::builtin::builtin_example;
use crate::error::{exit, Error, Result};
use crate::io;
use crate::sampler::{compare_with_exact, oracle_grid, sample_smallest_claim, SimulationRow};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
const ORACLE_POINTS: usize = 11;

#[derive(Debug, Parser)]
#[command(name = "minclaim", version, about = "Survival, bounds and stochastic orders of the smallest claim amount")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact survival curve: `x,exact`.
    Survival(Flags),
    /// Bound curves with premise checks: `x,exact,lower,upper,method`.
    Bounds(Flags),
    /// Order verdict between two portfolios, printed as JSON.
    Compare(Flags),
    /// Monte Carlo check of the exact survival.
    Simulate(Flags),
    /// Data behind the figures of a worked example (1, 2 or 3).
    Reproduce(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Worked example number (reproduce only).
    example: Option<u8>,
    /// Portfolio JSON; give it twice for `compare`.
    #[arg(long, value_name = "FILE")]
    portfolio: Vec<PathBuf>,
    /// Grid of N points on [0, X_MAX].
    #[arg(long, value_name = "X_MAX:N")]
    grid: Option<String>,
    /// Bound method: thm4, thm5, cor7, cor8, cor10, cor11, cor13, cor14.
    #[arg(long, value_name = "M")]
    method: Option<String>,
    /// Order relation: st, hr or lr.
    #[arg(long, value_name = "R")]
    relation: Option<String>,
    /// Monte Carlo sample size.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Output file (output directory for `reproduce`).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// JSON file with defaults for any of these flags.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Emit bounds even when a premise fails.
    #[arg(long)]
    force: bool,
    /// Also write the raw samples of `simulate` as CSV.
    #[arg(long, value_name = "PATH")]
    samples: Option<PathBuf>,
}

/// Parameters of a run after merging the config file and the flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, deserialize_with = "one_or_many", skip_serializing_if = "Vec::is_empty")]
    pub portfolio: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub force: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<PathBuf>,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<PathBuf>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(PathBuf),
        Many(Vec<PathBuf>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(p) => vec![p],
        OneOrMany::Many(v) => v,
    })
}

impl RunConfig {
    /// Flags win over the config file.
    fn resolve(flags: Flags) -> Result<Self> {
        let base = match &flags.config {
            Some(path) => {
                let text = io::read_text(path)?;
                serde_json::from_str(&text).map_err(|source| Error::Json {
                    context: path.display().to_string(),
                    source,
                })?
            }
            None => RunConfig::default(),
        };
        Ok(RunConfig {
            portfolio: if flags.portfolio.is_empty() {
                base.portfolio
            } else {
                flags.portfolio
            },
            example: flags.example.or(base.example),
            grid: flags.grid.or(base.grid),
            method: flags.method.or(base.method),
            relation: flags.relation.or(base.relation),
            n: flags.n.or(base.n),
            seed: flags.seed.or(base.seed),
            out: flags.out.or(base.out),
            force: flags.force || base.force,
            samples: flags.samples.or(base.samples),
        })
    }

    fn single_portfolio(&self) -> Result<Portfolio> {
        match self.portfolio.as_slice() {
            [path] => io::read_portfolio(path),
            [] => Err(Error::usage("--portfolio is required")),
            _ => Err(Error::usage("expected exactly one --portfolio")),
        }
    }

    /// The explicit grid, or `fallback` when none was given.
    fn grid_or(&mut self, fallback: impl FnOnce() -> Result<Vec<f64>>) -> Result<Vec<f64>> {
        match &self.grid {
            Some(spec) => io::parse_grid(spec),
            None => {
                let xs = fallback()?;
                self.grid = Some(format!("{}:{}", xs[xs.len() - 1], xs.len()));
                Ok(xs)
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    fingerprints: Vec<String>,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".config.json");
    PathBuf::from(name)
}

fn write_sidecar(path: &Path, command: &str, config: &RunConfig, portfolios: &[&Portfolio]) -> Result<()> {
    let fingerprints = portfolios
        .iter()
        .map(|p| io::fingerprint(p))
        .collect::<Result<_>>()?;
    let sidecar = Sidecar {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        fingerprints,
    };
    io::write_text(path, &io::to_json_pretty(&sidecar)?)
}

/// Writes to `--out` (plus the resolved-config sidecar) or to stdout.
fn emit(config: &RunConfig, command: &str, content: &str, portfolios: &[&Portfolio]) -> Result<()> {
    match &config.out {
        Some(out) => {
            io::write_text(out, content)?;
            write_sidecar(&sidecar_path(out), command, config, portfolios)
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(c) = e.condition() {
                eprintln!("failed premise: {c}");
            }
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Survival(f) => survival(RunConfig::resolve(f)?),
        Command::Bounds(f) => bounds(RunConfig::resolve(f)?),
        Command::Compare(f) => compare(RunConfig::resolve(f)?),
        Command::Simulate(f) => simulate(RunConfig::resolve(f)?),
        Command::Reproduce(f) => reproduce(RunConfig::resolve(f)?),
    }
}

fn survival(mut config: RunConfig) -> Result<i32> {
    let p = config.single_portfolio()?;
    let xs = config.grid_or(|| Ok(p.figure_grid()?))?;
    let curve = p.survival_curve(&xs)?;
    emit(&config, "survival", &io::survival_csv(&curve), &[&p])?;
    Ok(exit::OK)
}

fn parse_method(s: &str) -> Result<BoundsMethod> {
    s.parse().map_err(|_| Error::usage(format!("unknown bounds method `{s}`")))
}

/// Bounds with the sandwich verified; a forced curve is still returned so
/// that it can be written before the violation is reported.
fn checked_bounds(
    p: &Portfolio,
    xs: &[f64],
    method: BoundsMethod,
    force: bool,
) -> Result<(BoundsCurve, Option<Error>)> {
    let opts = BoundsOptions {
        force,
        ..BoundsOptions::default()
    };
    let curve = p.bounds(xs, method, &opts)?;
    if !curve.premises_verified {
        eprintln!("warning: {method} premises unverified:");
        for c in curve.premises.iter().filter(|c| !c.holds) {
            eprintln!("  {}: {}", c.condition, c.detail);
        }
    }
    let violation = curve
        .sandwich_violation(SANDWICH_TOL)
        .map(|(i, excess)| Error::Sandwich { x: xs[i], excess });
    match violation {
        Some(e) if !force => Err(e),
        v => Ok((curve, v)),
    }
}

fn bounds(mut config: RunConfig) -> Result<i32> {
    let p = config.single_portfolio()?;
    let method = match &config.method {
        Some(m) => parse_method(m)?,
        None => BoundsMethod::family_methods(p.marginal()).map_or(BoundsMethod::Thm4, |c| c.0),
    };
    config.method = Some(method.to_string());
    let xs = config.grid_or(|| Ok(p.figure_grid()?))?;
    let (curve, violation) = checked_bounds(&p, &xs, method, config.force)?;
    emit(&config, "bounds", &io::bounds_csv(&curve), &[&p])?;
    match violation {
        Some(e) => Err(e),
        None => Ok(exit::OK),
    }
}

/// Everything `compare` reports.
#[derive(Debug, Serialize)]
pub struct Comparison {
    pub relation: Relation,
    /// The decisive verdict.
    pub verdict: OrderVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebraic: Option<OrderVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<OrderVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<StPrediction>,
}

fn inconclusive(relation: Relation, why: &str) -> OrderVerdict {
    OrderVerdict {
        relation,
        direction: Direction::Inconclusive,
        witness: None,
        counter_witness: None,
        certificate: why.to_string(),
    }
}

/// Compares `a` against `b` in `relation`.
pub fn compare_portfolios(a: &Portfolio, b: &Portfolio, relation: Relation, xs: &[f64]) -> Result<Comparison> {
    if relation == Relation::St {
        let verdict = check_st_on_grid(a, b, xs)?;
        let prediction = predict_st_from_premises(a, b, xs, 0)?;
        return Ok(Comparison {
            relation,
            verdict,
            algebraic: None,
            numeric: None,
            prediction: Some(prediction),
        });
    }
    let (Ok((base_a, _)), Ok((base_b, _))) = (a.phr_gumbel_parts(), b.phr_gumbel_parts()) else {
        return Ok(Comparison {
            relation,
            verdict: inconclusive(
                relation,
                "hazard-rate and likelihood-ratio checks need PHR marginals under a Gumbel-Hougaard copula",
            ),
            algebraic: None,
            numeric: None,
            prediction: None,
        });
    };
    let numeric = if relation == Relation::Hr {
        numeric_hr_check(a, b, xs)?
    } else {
        numeric_lr_check(a, b, xs)?
    };
    let shared = base_a == base_b && a.copula().theta() == b.copula().theta() && a.dim() == b.dim();
    let algebraic = if shared {
        let theta = a.copula().theta();
        let f = if relation == Relation::Hr {
            hr_characterization_gumbel_phr
        } else {
            lr_characterization
        };
        Some(f(b.lambdas(), a.lambdas(), b.probs(), a.probs(), theta)?)
    } else {
        None
    };
    let verdict = match &algebraic {
        Some(v) => v.clone(),
        None => numeric.clone(),
    };
    Ok(Comparison {
        relation,
        verdict,
        algebraic,
        numeric: Some(numeric),
        prediction: None,
    })
}

fn compare(mut config: RunConfig) -> Result<i32> {
    let [pa, pb] = config.portfolio.as_slice() else {
        return Err(Error::usage("compare needs exactly two --portfolio files"));
    };
    let a = io::read_portfolio(pa)?;
    let b = io::read_portfolio(pb)?;
    let relation: Relation = match &config.relation {
        Some(r) => r.parse().map_err(|_| Error::usage(format!("unknown relation `{r}`")))?,
        None => Relation::St,
    };
    config.relation = Some(relation.to_string());
    let xs = config.grid_or(|| {
        let x_max = a.tail_horizon(1e-4)?.max(b.tail_horizon(1e-4)?);
        Ok(linspace(0.0, x_max, 201))
    })?;
    let result = compare_portfolios(&a, &b, relation, &xs)?;
    let json = io::to_json_pretty(&result)?;
    if config.out.is_some() {
        emit(&config, "compare", &json, &[&a, &b])?;
    }
    print!("{json}");
    Ok(match result.verdict.direction {
        Direction::ALeqB | Direction::Equal => exit::OK,
        Direction::BLeqA | Direction::Incomparable => exit::FAILS,
        Direction::Inconclusive => exit::INCONCLUSIVE,
    })
}

fn summarize(rows: &[SimulationRow]) -> String {
    let max_z = rows.iter().map(SimulationRow::z).fold(0.0, f64::max);
    let within = rows.iter().filter(|r| r.within_3se).count();
    format!("max |z| = {max_z:.3}; {within}/{} points within 3 SE", rows.len())
}

fn simulate(mut config: RunConfig) -> Result<i32> {
    let p = config.single_portfolio()?;
    let n = *config.n.get_or_insert(DEFAULT_SAMPLES);
    let seed = *config.seed.get_or_insert(DEFAULT_SEED);
    let xs = config.grid_or(|| oracle_grid(&p, ORACLE_POINTS))?;
    let batch = sample_smallest_claim(&p, n, seed)?;
    let rows = compare_with_exact(&p, &batch, &xs)?;
    if let Some(path) = &config.samples {
        io::write_text(path, &io::batch_csv(&batch))?;
        let mut side = path.as_os_str().to_owned();
        side.push(".json");
        io::write_text(Path::new(&side), &io::batch_sidecar(&batch)?)?;
    }
    emit(&config, "simulate", &io::simulation_csv(&rows), &[&p])?;
    eprintln!("{}", summarize(&rows));
    Ok(exit::OK)
}

fn reproduce(mut config: RunConfig) -> Result<i32> {
    let k = config
        .example
        .ok_or_else(|| Error::usage("reproduce needs an example number (1, 2 or 3)"))?;
    let p = builtin_example(k)?;
    let dir = config
        .out
        .get_or_insert_with(|| PathBuf::from(format!("example{k}")))
        .clone();
    let n = *config.n.get_or_insert(DEFAULT_SAMPLES);
    let seed = *config.seed.get_or_insert(DEFAULT_SEED);
    let stem = format!("example{k}");

    io::write_text(&dir.join(format!("{stem}_portfolio.json")), &io::to_json_pretty(&p)?)?;
    let xs = p.figure_grid()?;
    let (schur, puod) = BoundsMethod::family_methods(p.marginal())
        .expect("worked examples use families with closed-form bounds");
    for method in [schur, puod] {
        let (curve, _) = checked_bounds(&p, &xs, method, false)?;
        io::write_text(&dir.join(format!("{stem}_{method}.csv")), &io::bounds_csv(&curve))?;
    }
    let batch = sample_smallest_claim(&p, n, seed)?;
    let rows = compare_with_exact(&p, &batch, &oracle_grid(&p, ORACLE_POINTS)?)?;
    io::write_text(&dir.join(format!("{stem}_simulate.csv")), &io::simulation_csv(&rows))?;
    write_sidecar(&dir.join("reproduce.config.json"), "reproduce", &config, &[&p])?;
    eprintln!("example {k}: {}", summarize(&rows));
    Ok(exit::OK)
}
