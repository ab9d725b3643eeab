//! Command-line front end.
//!
//! Samples are read from one-column CSV files, results are written as a
//! JSON report (default) or as `key,value` CSV. Values missing from the
//! command line are taken from an optional `key=value` config file whose
//! keys are the long flag names; flags win over the file.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::contamination::{
    ks_distance, min_contamination_above, min_contamination_below, pi_index, pi_index_reversed, precedence_index,
    ContaminationIndex, DEFAULT_GRID,
};
use crate::dist_model::{Distribution, Sample};
use crate::error::{config, data, Error, Result};
use crate::inference::{
    bootstrap_bias_correct, confidence_bounds, contact_sets, empirical_pi, test_against, test_for, Bootstrap,
    BoundMethod, Constants, Method, TestResult, DEFAULT_BOOTSTRAP, DEFAULT_K_CONST,
};
use crate::limit_law::{self, LimitLawParams};
use crate::simulation::{
    reproduce_table, run_scenario, write_table_csv, ReplicationReport, Scenario, TableId, TableScale, TestSpec,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_ALPHA: f64 = 0.05;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_REPS: usize = 1000;
/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "STOCORDER_THREADS";

#[rustfmt::skip]
const CONFIG_KEYS: &[&str] = &[
    "x", "y", "alpha", "pi0", "method", "bootstrap", "k-const", "seed", "format", "output", "a", "lambda", "tail",
    "quantile", "f", "g", "grid", "scenario", "table", "n", "m", "reps", "n-subset", "pi0-subset",
];

#[derive(Debug, Parser)]
#[command(name = "stocorder", version, about = "Inference on contaminated stochastic order")]
pub struct Cli {
    /// Config file with `key=value` lines named after the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ForMethod {
    Conservative,
    Plugin,
    Boot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMethod {
    Conservative,
    Plugin,
    Boot,
    Against,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    UpperBoot,
    UpperDirect,
    Lower,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// π̂, its bias-corrected version, σ̂, contact sets and the precedence index.
    Estimate(EstimateArgs),
    /// Test H₀: π(F, G) ≥ π₀.
    TestFor(TestForArgs),
    /// Test H₀: π(F, G) ≤ π₀.
    TestAgainst(TestAgainstArgs),
    /// One-sided confidence bound for π(F, G).
    Bounds(BoundsArgs),
    /// Tail, quantiles and moments of the limit law.
    Limit(LimitArgs),
    /// Contamination indices between analytic distributions.
    Index(IndexArgs),
    /// Monte Carlo rejection frequencies for a scenario or a whole table.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Sample from F, one value per row.
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Sample from G, one value per row.
    #[arg(long)]
    pub y: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub samples: SampleArgs,
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "k-const")]
    pub k_const: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TestForArgs {
    #[command(flatten)]
    pub samples: SampleArgs,
    #[arg(long)]
    pub pi0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<ForMethod>,
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TestAgainstArgs {
    #[command(flatten)]
    pub samples: SampleArgs,
    #[arg(long)]
    pub pi0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub samples: SampleArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<BoundKind>,
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "k-const")]
    pub k_const: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Points v for P(B̄ > v); repeat or separate by commas.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub tail: Vec<f64>,
    /// Probabilities p for the p-quantile; repeat or separate by commas.
    #[arg(long, value_delimiter = ',')]
    pub quantile: Vec<f64>,
    /// Report mean and variance (the default when nothing else is asked).
    #[arg(long)]
    pub moments: bool,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// First law, e.g. `uniform(0,1)`, `normal(1,1)`, `sqrt`, `Fpi_b:0.1`.
    #[arg(long)]
    pub f: Option<String>,
    /// Second law.
    #[arg(long)]
    pub g: Option<String>,
    /// Sampling ratio for the registry families that depend on it.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Reproduce a table: T1, T2, T3 or T4.
    #[arg(long, conflicts_with = "scenario")]
    pub table: Option<String>,
    /// Registry scenario, e.g. `Fpi_a:0.1`.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<SimMethod>,
    #[arg(long)]
    pub pi0: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Table rows to run, by sample size.
    #[arg(long = "n-subset", value_delimiter = ',')]
    pub n_subset: Vec<usize>,
    /// Table rows to run, by π₀.
    #[arg(long = "pi0-subset", value_delimiter = ',')]
    pub pi0_subset: Vec<f64>,
}

/// Values from the config file, consulted for flags left unset.
#[derive(Debug, Default)]
struct Settings {
    file: HashMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Settings::default()) };
        let text =
            fs::read_to_string(path).map_err(|e| config(format!("cannot read config {}: {e}", path.display())))?;
        let mut file = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
            let key = key.trim().trim_start_matches("--").to_string();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(config(format!("{}:{}: unknown key '{key}'", path.display(), i + 1)));
            }
            file.insert(key, value.trim().to_string());
        }
        Ok(Settings { file })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.file.get(key).map(String::as_str)
    }

    fn value<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key).map(|s| s.parse::<T>().map_err(|e| config(format!("config key '{key}': {e}")))).transpose()
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        Ok(self.value(flag, key)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        self.value(flag, key)?.ok_or_else(|| config(format!("--{key} is required")))
    }

    fn choice<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key).map(|s| T::from_str(s, true).map_err(|e| config(format!("config key '{key}': {e}")))).transpose()
    }

    fn list<T: FromStr>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>>
    where
        T::Err: Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        let Some(raw) = self.raw(key) else { return Ok(Vec::new()) };
        raw.split(',').map(|s| s.trim().parse::<T>().map_err(|e| config(format!("config key '{key}': {e}")))).collect()
    }
}

/// Reads one value per row. A non-numeric first row is taken as a header;
/// blank rows are skipped. Parsing is locale-independent (decimal point).
pub fn parse_samples(path: &Path) -> Result<Sample> {
    let text = fs::read_to_string(path).map_err(|e| data(format!("cannot read {}: {e}", path.display())))?;
    parse_sample_text(&text).map_err(|e| match e {
        Error::Data(msg) => data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_sample_text(text: &str) -> Result<Sample> {
    let mut values = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(data(format!("line {}: non-finite value '{line}'", i + 1))),
            Err(_) if first => {}
            Err(_) => return Err(data(format!("line {}: '{line}' is not a number", i + 1))),
        }
        first = false;
    }
    if values.is_empty() {
        return Err(data("no values"));
    }
    Sample::new(values).map_err(|e| data(e.to_string()))
}

/// Parses a named analytic law: `uniform(a,b)`, `normal(mu,sigma)`, `sqrt`
/// or a scenario registry name such as `Fpi_a:0.1`.
pub fn parse_distribution(spec: &str, lambda: f64) -> Result<Distribution> {
    let s = spec.trim();
    let lower = s.to_ascii_lowercase();
    let args = |name: &str| -> Option<Result<Vec<f64>>> {
        let inner = lower.strip_prefix(name)?.trim().strip_prefix('(')?.strip_suffix(')')?;
        Some(
            inner
                .split(',')
                .map(|p| p.trim().parse::<f64>().map_err(|_| config(format!("bad number in '{spec}'"))))
                .collect(),
        )
    };
    let two = |v: Vec<f64>| -> Result<(f64, f64)> {
        match v[..] {
            [p, q] => Ok((p, q)),
            _ => Err(config(format!("'{spec}' needs two parameters"))),
        }
    };
    let dist = if lower == "sqrt" {
        Ok(Distribution::sqrt_law())
    } else if let Some(v) = args("uniform") {
        let (lo, hi) = two(v?)?;
        Distribution::uniform(lo, hi)
    } else if let Some(v) = args("normal") {
        let (mu, sigma) = two(v?)?;
        Distribution::normal(mu, sigma)
    } else {
        return Scenario::from_registry(s, lambda).map(|sc| sc.f_dist);
    };
    dist.map_err(as_usage)
}

/// Library domain errors raised by parameter values are usage errors here.
fn as_usage(e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Config(m),
        other => other,
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(config(format!("--alpha {alpha} must lie in (0, 1)")))
    }
}

fn check_pi0(pi0: f64) -> Result<f64> {
    if (0.0..1.0).contains(&pi0) {
        Ok(pi0)
    } else {
        Err(config(format!("--pi0 {pi0} must lie in [0, 1)")))
    }
}

fn check_positive(value: usize, key: &str) -> Result<usize> {
    if value > 0 {
        Ok(value)
    } else {
        Err(config(format!("--{key} must be positive")))
    }
}

struct Inputs {
    x: Sample,
    y: Sample,
    json: Value,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load_inputs(args: &SampleArgs, settings: &Settings) -> Result<Inputs> {
    let xp: PathBuf = settings.required(args.x.clone(), "x")?;
    let yp: PathBuf = settings.required(args.y.clone(), "y")?;
    let mut hashes = Vec::new();
    for p in [&xp, &yp] {
        let bytes = fs::read(p).map_err(|e| data(format!("cannot read {}: {e}", p.display())))?;
        hashes.push(sha256_hex(&bytes));
    }
    let x = parse_samples(&xp)?;
    let y = parse_samples(&yp)?;
    let json = json!({
        "n": x.len(),
        "m": y.len(),
        "paths": {"x": xp.display().to_string(), "y": yp.display().to_string()},
        "hashes": {"x": hashes[0], "y": hashes[1]},
    });
    Ok(Inputs { x, y, json })
}

fn constants_json(c: &Constants, delta_nm: Option<f64>) -> Value {
    json!({
        "sigma_bar": c.sigma_bar,
        "sigma_hat": c.sigma_hat,
        "sigma_used": c.sigma_used,
        "sigma_fallback": c.sigma_fallback,
        "K_quantile": c.k_quantile,
        "delta_nm": delta_nm,
        "lambda_nm": c.lambda_nm,
        "pi_hat": c.pi_hat,
        "pi_boot": c.pi_boot,
        "bias_hat": c.bias_hat,
    })
}

fn data_report(command: &str, inputs: &Inputs, params: Value, seed: Option<u64>) -> Map<String, Value> {
    let mut r = Map::new();
    r.insert("command".into(), json!(command));
    r.insert("inputs".into(), inputs.json.clone());
    r.insert("params".into(), params);
    r.insert("statistic".into(), Value::Null);
    r.insert("threshold".into(), Value::Null);
    r.insert("decision".into(), Value::Null);
    r.insert("bounds".into(), Value::Null);
    r.insert("constants".into(), Value::Null);
    r.insert("seed".into(), json!(seed));
    r.insert("version".into(), json!(VERSION));
    r
}

fn test_report(command: &str, inputs: &Inputs, params: Value, seed: Option<u64>, t: &TestResult) -> Value {
    let mut r = data_report(command, inputs, params, seed);
    r.insert("statistic".into(), json!(t.statistic));
    r.insert("threshold".into(), json!(t.threshold));
    r.insert("decision".into(), json!(t.decision.as_str()));
    r.insert("constants".into(), constants_json(&t.constants, None));
    Value::Object(r)
}

fn estimate(args: EstimateArgs, settings: &Settings) -> Result<Value> {
    let inputs = load_inputs(&args.samples, settings)?;
    let b = check_positive(settings.or(args.bootstrap, "bootstrap", DEFAULT_BOOTSTRAP)?, "bootstrap")?;
    let seed = settings.or(args.seed, "seed", DEFAULT_SEED)?;
    let k_const = settings.or(args.k_const, "k-const", DEFAULT_K_CONST)?;
    let (x, y) = (&inputs.x, &inputs.y);
    let stat = empirical_pi(x, y);
    let bias = bootstrap_bias_correct(x, y, b, seed)?;
    let sets = contact_sets(x, y, k_const).map_err(as_usage)?;
    let theta = precedence_index(&Distribution::empirical(x.clone()), &Distribution::empirical(y.clone()));
    let reversed = empirical_pi(y, x).pi_hat();
    let params = json!({"bootstrap": b, "k_const": k_const});
    let mut r = data_report("estimate", &inputs, params, Some(seed));
    r.insert("statistic".into(), json!(stat.pi_hat()));
    r.insert(
        "estimates".into(),
        json!({
            "pi_hat": stat.pi_hat(),
            "pi_boot": bias.pi_boot,
            "bias_hat": bias.bias_hat,
            "sigma_hat": stat.sigma_hat(),
            "pi_reversed": reversed,
            "ks": stat.pi_hat().max(reversed),
            "theta": theta,
            "argmax_points": stat.argmax_points,
            "t_hat": sets.t_hat,
            "gamma_n": {
                "count": sets.gamma_n.len(),
                "min": sets.gamma_n.first(),
                "max": sets.gamma_n.last(),
                "includes_left_tail": sets.includes_left_tail,
            },
        }),
    );
    r.insert(
        "constants".into(),
        json!({
            "sigma_hat": stat.sigma_hat(),
            "delta_nm": sets.delta_nm,
            "lambda_nm": stat.lambda_nm,
        }),
    );
    Ok(Value::Object(r))
}

fn for_method(m: ForMethod) -> Method {
    match m {
        ForMethod::Conservative => Method::Conservative,
        ForMethod::Plugin => Method::Plugin,
        ForMethod::Boot => Method::Boot,
    }
}

fn run_test_for(args: TestForArgs, settings: &Settings) -> Result<Value> {
    let pi0 = check_pi0(settings.required(args.pi0, "pi0")?)?;
    let alpha = check_alpha(settings.or(args.alpha, "alpha", DEFAULT_ALPHA)?)?;
    let method = settings.choice(args.method, "method")?.unwrap_or(ForMethod::Conservative);
    let b = check_positive(settings.or(args.bootstrap, "bootstrap", DEFAULT_BOOTSTRAP)?, "bootstrap")?;
    let seed = settings.or(args.seed, "seed", DEFAULT_SEED)?;
    let inputs = load_inputs(&args.samples, settings)?;
    let method = for_method(method);
    let boot = Bootstrap { replicates: b, seed };
    let t = test_for(&inputs.x, &inputs.y, pi0, alpha, method, Some(boot))?;
    let uses_boot = method == Method::Boot;
    let params = json!({
        "pi0": pi0,
        "alpha": alpha,
        "method": method.as_str(),
        "bootstrap": uses_boot.then_some(b),
    });
    Ok(test_report("test-for", &inputs, params, uses_boot.then_some(seed), &t))
}

fn run_test_against(args: TestAgainstArgs, settings: &Settings) -> Result<Value> {
    let pi0 = check_pi0(settings.required(args.pi0, "pi0")?)?;
    let alpha = check_alpha(settings.or(args.alpha, "alpha", DEFAULT_ALPHA)?)?;
    let inputs = load_inputs(&args.samples, settings)?;
    let t = test_against(&inputs.x, &inputs.y, pi0, alpha)?;
    let params = json!({"pi0": pi0, "alpha": alpha, "method": Method::Against.as_str()});
    Ok(test_report("test-against", &inputs, params, None, &t))
}

fn run_bounds(args: BoundsArgs, settings: &Settings) -> Result<Value> {
    let alpha = check_alpha(settings.or(args.alpha, "alpha", DEFAULT_ALPHA)?)?;
    let kind = settings.choice(args.method, "method")?.unwrap_or(BoundKind::Lower);
    let b = check_positive(settings.or(args.bootstrap, "bootstrap", DEFAULT_BOOTSTRAP)?, "bootstrap")?;
    let seed = settings.or(args.seed, "seed", DEFAULT_SEED)?;
    let k_const = settings.or(args.k_const, "k-const", DEFAULT_K_CONST)?;
    let inputs = load_inputs(&args.samples, settings)?;
    let method = match kind {
        BoundKind::UpperBoot => BoundMethod::UpperBoot,
        BoundKind::UpperDirect => BoundMethod::UpperDirect,
        BoundKind::Lower => BoundMethod::Lower,
    };
    let bound =
        confidence_bounds(&inputs.x, &inputs.y, alpha, method, Some(Bootstrap { replicates: b, seed }), k_const)
            .map_err(as_usage)?;
    let uses_boot = method != BoundMethod::Lower;
    let params = json!({
        "alpha": alpha,
        "method": method.as_str(),
        "bootstrap": uses_boot.then_some(b),
        "k_const": (method == BoundMethod::UpperBoot).then_some(k_const),
    });
    let mut r = data_report("bounds", &inputs, params, uses_boot.then_some(seed));
    r.insert("statistic".into(), json!(bound.constants.pi_hat));
    let side = if method == BoundMethod::Lower { "lower" } else { "upper" };
    r.insert("bounds".into(), json!({ side: bound.value, "level": 1.0 - alpha }));
    r.insert("constants".into(), constants_json(&bound.constants, bound.delta_nm));
    Ok(Value::Object(r))
}

fn run_limit(args: LimitArgs, settings: &Settings) -> Result<Value> {
    let a = settings.required(args.a, "a")?;
    let lambda = settings.or(args.lambda, "lambda", 0.5)?;
    let tails = settings.list(args.tail, "tail")?;
    let quantiles = settings.list(args.quantile, "quantile")?;
    let params = LimitLawParams::new(a, lambda).map_err(as_usage)?;
    let want_moments = args.moments || (tails.is_empty() && quantiles.is_empty());
    let tail: Vec<Value> = tails
        .iter()
        .map(|&v| Ok(json!({"v": v, "p": limit_law::tail_prob(&params, v).map_err(as_usage)?})))
        .collect::<Result<_>>()?;
    let quantile: Vec<Value> = quantiles
        .iter()
        .map(|&p| Ok(json!({"p": p, "value": limit_law::quantile(&params, p).map_err(as_usage)?})))
        .collect::<Result<_>>()?;
    let moments = if want_moments {
        let (mean, variance) = limit_law::moments(&params).map_err(as_usage)?;
        json!({"mean": mean, "variance": variance})
    } else {
        Value::Null
    };
    Ok(json!({
        "command": "limit",
        "params": {"a": a, "lambda": lambda},
        "tail": tail,
        "quantile": quantile,
        "moments": moments,
        "version": VERSION,
    }))
}

fn index_json(ix: &ContaminationIndex) -> Value {
    json!({"value": ix.value, "argmax": ix.argmax})
}

fn run_index(args: IndexArgs, settings: &Settings) -> Result<Value> {
    let f_spec: String = settings.required(args.f, "f")?;
    let g_spec: String = settings.required(args.g, "g")?;
    let lambda = settings.or(args.lambda, "lambda", 0.5)?;
    let grid = check_positive(settings.or(args.grid, "grid", DEFAULT_GRID)?, "grid")?;
    let f = parse_distribution(&f_spec, lambda)?;
    let g = parse_distribution(&g_spec, lambda)?;
    Ok(json!({
        "command": "index",
        "params": {"f": f_spec, "g": g_spec, "f_law": f.label(), "g_law": g.label(), "lambda": lambda, "grid": grid},
        "pi0_below": index_json(&min_contamination_below(&f, &g, grid)),
        "pi0_prime_above": index_json(&min_contamination_above(&f, &g, grid)),
        "pi": index_json(&pi_index(&f, &g, grid)),
        "pi_reversed": index_json(&pi_index_reversed(&f, &g, grid)),
        "ks": ks_distance(&f, &g, grid),
        "theta": precedence_index(&f, &g),
        "version": VERSION,
    }))
}

fn spec_json(spec: &TestSpec) -> Value {
    json!({
        "method": spec.method().as_str(),
        "pi0": spec.pi0(),
        "alpha": spec.alpha(),
        "bootstrap": spec.bootstrap(),
    })
}

fn report_json(r: &ReplicationReport) -> Value {
    json!({
        "scenario": r.scenario,
        "n": r.n,
        "m": r.m,
        "reps": r.reps,
        "test": spec_json(&r.test),
        "k_const": r.k_const,
        "rejections": r.rejections,
        "frequency": r.frequency,
        "base_seed": r.base_seed,
        "wall_time_secs": r.wall_time.as_secs_f64(),
    })
}

enum Output {
    Json(Value),
    TableCsv(crate::simulation::TableRun),
}

fn run_simulate(args: SimulateArgs, settings: &Settings) -> Result<Output> {
    let seed = settings.or(args.seed, "seed", DEFAULT_SEED)?;
    let reps = check_positive(settings.or(args.reps, "reps", DEFAULT_REPS)?, "reps")?;
    let b = check_positive(settings.or(args.bootstrap, "bootstrap", DEFAULT_BOOTSTRAP)?, "bootstrap")?;
    let table: Option<String> = settings.value(args.table, "table")?;
    if let Some(table) = table {
        let table: TableId = table.parse()?;
        let n_subset = settings.list(args.n_subset, "n-subset")?;
        let pi0_subset = settings.list(args.pi0_subset, "pi0-subset")?;
        let scale = TableScale {
            reps,
            bootstrap: b,
            n_subset: (!n_subset.is_empty()).then_some(n_subset),
            pi0_subset: (!pi0_subset.is_empty()).then_some(pi0_subset),
        };
        return Ok(Output::TableCsv(reproduce_table(table, &scale, seed)?));
    }
    let name: String = settings.required(args.scenario, "scenario")?;
    let n = check_positive(settings.required(args.n, "n")?, "n")?;
    let m = check_positive(settings.or(args.m, "m", n)?, "m")?;
    let lambda = settings.or(args.lambda, "lambda", n as f64 / (n + m) as f64)?;
    let pi0 = check_pi0(settings.required(args.pi0, "pi0")?)?;
    let alpha = check_alpha(settings.or(args.alpha, "alpha", DEFAULT_ALPHA)?)?;
    let method = settings.choice(args.method, "method")?.unwrap_or(SimMethod::Conservative);
    let spec = match method {
        SimMethod::Against => TestSpec::Against { pi0, alpha },
        SimMethod::Conservative => TestSpec::For { method: Method::Conservative, pi0, alpha, bootstrap: None },
        SimMethod::Plugin => TestSpec::For { method: Method::Plugin, pi0, alpha, bootstrap: None },
        SimMethod::Boot => TestSpec::For { method: Method::Boot, pi0, alpha, bootstrap: Some(b) },
    };
    let scenario = Scenario::from_registry(&name, lambda)?;
    let report = run_scenario(&scenario, n, m, reps, spec, seed)?;
    Ok(Output::Json(json!({
        "command": "simulate",
        "params": {"scenario": name, "lambda": lambda, "true_pi": scenario.true_pi},
        "report": report_json(&report),
        "seed": seed,
        "version": VERSION,
    })))
}

fn table_json(run: &crate::simulation::TableRun) -> Value {
    let cells: Vec<Value> = run
        .cells
        .iter()
        .map(|c| {
            json!({
                "pi0": c.pi0,
                "n": c.n,
                "column": c.column,
                "frequency": c.report.frequency,
                "published": c.published,
                "tolerance": c.tolerance,
                "within_tolerance": c.within_tolerance(),
                "report": report_json(&c.report),
            })
        })
        .collect();
    json!({
        "command": "simulate",
        "params": {
            "table": run.table.to_string(),
            "reps": run.scale.reps,
            "bootstrap": run.scale.bootstrap,
            "n_subset": run.scale.n_subset,
            "pi0_subset": run.scale.pi0_subset,
        },
        "cells": cells,
        "seed": run.base_seed,
        "version": VERSION,
    })
}

/// Flattens a JSON value into `key,value` rows; arrays are joined with `;`.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, rows);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            rows.push((prefix.to_string(), parts.join(";")));
        }
        Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), inner, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_csv_rows<W: Write>(v: &Value, out: &mut W) -> io::Result<()> {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    writeln!(out, "key,value")?;
    for (k, val) in rows {
        let val =
            if val.contains(',') || val.contains('"') { format!("\"{}\"", val.replace('"', "\"\"")) } else { val };
        writeln!(out, "{k},{val}")?;
    }
    Ok(())
}

fn emit<W: Write>(output: Output, format: Option<Format>, out: &mut W) -> io::Result<()> {
    match (output, format) {
        (Output::TableCsv(run), None | Some(Format::Csv)) => write_table_csv(&run, out),
        (Output::TableCsv(run), Some(Format::Json)) => {
            writeln!(out, "{}", serde_json::to_string_pretty(&table_json(&run)).expect("serializable"))
        }
        (Output::Json(v), None | Some(Format::Json)) => {
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))
        }
        (Output::Json(v), Some(Format::Csv)) => write_csv_rows(&v, out),
    }
}

/// Applies the worker cap from the environment, if any.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| config(format!("{THREADS_ENV}={raw} is not a positive integer")))?;
    // A pool set up earlier in the same process stays in place.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Runs a parsed command line, writing the report to `out` unless an
/// output path was given.
pub fn execute<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    configure_threads()?;
    let settings = Settings::load(cli.config.as_deref())?;
    let format = settings.choice(cli.format, "format")?;
    let output_path: Option<PathBuf> = settings.value(cli.output, "output")?;
    let output = match cli.command {
        Command::Estimate(a) => Output::Json(estimate(a, &settings)?),
        Command::TestFor(a) => Output::Json(run_test_for(a, &settings)?),
        Command::TestAgainst(a) => Output::Json(run_test_against(a, &settings)?),
        Command::Bounds(a) => Output::Json(run_bounds(a, &settings)?),
        Command::Limit(a) => Output::Json(run_limit(a, &settings)?),
        Command::Index(a) => Output::Json(run_index(a, &settings)?),
        Command::Simulate(a) => run_simulate(a, &settings)?,
    };
    let io_err = |e: io::Error| data(format!("cannot write report: {e}"));
    match output_path {
        Some(path) => {
            let mut file = io::BufWriter::new(
                fs::File::create(&path).map_err(|e| data(format!("cannot create {}: {e}", path.display())))?,
            );
            emit(output, format, &mut file).map_err(io_err)?;
            file.flush().map_err(io_err)
        }
        None => emit(output, format, out).map_err(io_err),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("stocorder: {e}");
            e.exit_code()
        }
    }
}
