//! The `statdist` command-line front end.
//!
//! Every subcommand writes one artifact (JSON report or CSV projection) to
//! `--out` or stdout and a short human summary to stderr. Reports embed the
//! resolved configuration. Exit codes: 0 on success, 2 for invalid input,
//! 3 for numeric failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::channels::{channel_similarity, ChannelBank};
use crate::distance::{check_proportionality, closed_form_distance, fisher_information, fisher_limit_ratio, statistical_distance};
use crate::error::{Error, Result};
use crate::finite::{distance_by_counting, SampleSize};
use crate::hilbert::{device_distance, hilbert_distance, optimize_basis, random_basis, random_state, MeasurementBasis, OptimizerSettings, PureState};
use crate::law::ResponseLaw;
use crate::sim::{column_distance_matrix, csv_error, empirical_distance, mix_seed, replicate_study, ColumnSheet, MatrixMode, DEFAULT_COLUMNS};

#[derive(Parser, Debug)]
#[command(name = "statdist", version, about = "Statistical distance between probabilistic preparations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Artifact path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel kernels.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Show angles in degrees in the console summary. Files stay in radians.
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Flat `key = value` file mirroring the long flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Quadrature, closed-form distance and proportionality check.
    Dist(DistArgs),
    /// Counting-limit convergence table of D(n)/sqrt(n).
    Count(CountArgs),
    /// Monte Carlo replicates, empirical counting and column matrices.
    Simulate(SimulateArgs),
    /// Hilbert angle, device distances and analyzer optimization.
    Hilbert(HilbertArgs),
    /// Fisher information and the small-separation Wootters ratio.
    Fisher(FisherArgs),
    /// Channel encode/decode and similarity sweeps.
    Channels(ChannelsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dist(_) => "dist",
            Command::Count(_) => "count",
            Command::Simulate(_) => "simulate",
            Command::Hilbert(_) => "hilbert",
            Command::Fisher(_) => "fisher",
            Command::Channels(_) => "channels",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DistArgs {
    /// `cos2`, `cos2:<w>` or `table:<path>`.
    #[arg(long, default_value = "cos2")]
    pub law: String,
    #[arg(long)]
    pub theta1: Option<f64>,
    #[arg(long)]
    pub theta2: Option<f64>,
    /// Rows `(θ1, θ1 + (θ2−θ1)·i/points)` for `i = 1..=points`.
    #[arg(long, default_value_t = 1)]
    pub points: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CountArgs {
    #[arg(long, default_value = "cos2")]
    pub law: String,
    #[arg(long, default_value_t = 0.2)]
    pub theta1: f64,
    #[arg(long, default_value_t = 1.2)]
    pub theta2: f64,
    /// Comma-separated, strictly increasing sample sizes.
    #[arg(long, default_value = "100,1000,10000,100000,1000000")]
    pub schedule: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Analytic,
    Empirical,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimulateArgs {
    #[arg(long, default_value = "cos2")]
    pub law: String,
    /// Orientation of the replicate study.
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    /// Trials per replicate.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long, default_value_t = 200)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0.2)]
    pub theta1: f64,
    #[arg(long, default_value_t = 1.2)]
    pub theta2: f64,
    /// Sample sizes for empirical counting.
    #[arg(long, default_value = "100,10000,1000000")]
    pub schedule: String,
    /// Column sheet JSON; a uniform sheet is generated when omitted.
    #[arg(long)]
    pub sheet: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_COLUMNS)]
    pub columns: usize,
    /// Also build the inter-column distance matrix.
    #[arg(long, value_enum)]
    pub matrix: Option<MatrixKind>,
    /// Trials per record for the empirical matrix.
    #[arg(long, default_value_t = 1_000_000)]
    pub matrix_n: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HilbertArgs {
    /// State as inline JSON `[[re, im], ...]` or a path to such a file.
    #[arg(long)]
    pub psi1: Option<String>,
    #[arg(long)]
    pub psi2: Option<String>,
    /// Dimension of randomly drawn states when none are given.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Array of bases as inline JSON or a file path.
    #[arg(long)]
    pub bases: Option<String>,
    /// Random analyzer bases to add to the table.
    #[arg(long, default_value_t = 10)]
    pub random_bases: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FisherArgs {
    #[arg(long, default_value = "cos2")]
    pub law: String,
    #[arg(long, default_value_t = 0.7)]
    pub theta: f64,
    /// Comma-separated separations.
    #[arg(long, default_value = "0.1,0.05,0.025,0.0125,0.00625,0.003125,0.0015625,0.00078125")]
    pub dtheta: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ChannelsArgs {
    /// Number of channels.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long, default_value_t = 0.0)]
    pub span_lo: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub span_hi: f64,
    /// Width scale `w`; defaults to `π/(3·spacing)`.
    #[arg(long)]
    pub width: Option<f64>,
    /// Interior sweep points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Orientation compared against in the similarity column.
    #[arg(long)]
    pub reference: Option<f64>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config(format!("line {}: expected `key = value`", i + 1)));
        };
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        out.push((key, value));
    }
    Ok(out)
}

fn takes_value(arg: &clap::Arg) -> bool {
    arg.get_action().takes_values()
}

/// Splices config entries in front of the user's arguments so that the
/// later command-line occurrences override them.
fn merge_config(raw: Vec<String>) -> Result<Vec<String>> {
    let command = Cli::command();
    let globals: Vec<&clap::Arg> = command.get_arguments().filter(|a| a.is_global_set()).collect();
    let mut config_path = None;
    let mut sub_at = None;
    let mut i = 1;
    while i < raw.len() {
        let tok = &raw[i];
        if let Some(rest) = tok.strip_prefix("--config") {
            if let Some(v) = rest.strip_prefix('=') {
                config_path = Some(v.to_string());
            } else if rest.is_empty() {
                config_path = raw.get(i + 1).cloned();
            }
        }
        if sub_at.is_none() {
            if let Some(name) = tok.strip_prefix("--") {
                let valued = globals.iter().any(|a| a.get_long() == Some(name) && takes_value(a));
                i += if valued { 2 } else { 1 };
                continue;
            }
            if command.find_subcommand(tok).is_some() {
                sub_at = Some(i);
            } else {
                break;
            }
        }
        i += 1;
    }
    let (Some(path), Some(at)) = (config_path, sub_at) else {
        return Ok(raw);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let entries = parse_config(&text)?;
    let sub = command.find_subcommand(&raw[at]).expect("located above");
    let mut spliced = vec![raw[0].clone(), raw[at].clone()];
    for (key, value) in entries {
        let arg = sub
            .get_arguments()
            .chain(globals.iter().copied())
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config" && key != "help");
        let Some(arg) = arg else {
            return Err(Error::Config(format!("unknown key `{key}` for `{}`", raw[at])));
        };
        if takes_value(arg) {
            spliced.push(format!("--{key}={value}"));
        } else {
            match value.as_str() {
                "true" => spliced.push(format!("--{key}")),
                "false" => {}
                _ => return Err(Error::Config(format!("`{key}` expects true or false, got `{value}`"))),
            }
        }
    }
    spliced.extend(raw[1..at].iter().cloned());
    spliced.extend(raw[at + 1..].iter().cloned());
    Ok(spliced)
}

fn parse_list<T: std::str::FromStr>(key: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Config(format!("`{key}`: cannot parse `{s}`"))))
        .collect()
}

fn schedule(key: &str, text: &str) -> Result<Vec<SampleSize>> {
    parse_list::<u64>(key, text)?.into_iter().map(SampleSize::new).collect()
}

fn require(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("`--{name}` is required")))
}

/// Inline JSON when the text starts with `[`, otherwise a file path.
fn load_json<T: serde::de::DeserializeOwned>(source: &str) -> Result<T> {
    if source.trim_start().starts_with('[') {
        Ok(serde_json::from_str(source)?)
    } else {
        let text = std::fs::read_to_string(source).map_err(|e| Error::io(source, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// A finished command: JSON result, CSV projection and console summary.
struct Outcome {
    result: serde_json::Value,
    csv: Vec<u8>,
    summary: String,
}

struct Angles {
    degrees: bool,
}

impl Angles {
    fn show(&self, radians: f64) -> String {
        if self.degrees {
            format!("{:.6} deg", radians.to_degrees())
        } else {
            format!("{radians:.9} rad")
        }
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| Error::io("csv output", std::io::Error::other(e.to_string())))
}

fn cmd_dist(a: &DistArgs, fmt: &Angles) -> Result<Outcome> {
    let law = ResponseLaw::parse_spec(&a.law)?;
    let t1 = require("theta1", a.theta1)?;
    let t2 = require("theta2", a.theta2)?;
    if a.points == 0 {
        return Err(Error::Config("`--points` must be at least 1".into()));
    }
    let proportionality = check_proportionality(&law)?;
    let mut rows = Vec::with_capacity(a.points);
    for i in 1..=a.points {
        let target = if i == a.points { t2 } else { t1 + (t2 - t1) * i as f64 / a.points as f64 };
        let q = statistical_distance(&law, t1, target)?;
        let c = closed_form_distance(&law, t1, target)?;
        rows.push(json!({
            "theta1": t1,
            "theta2": target,
            "d_quadrature": q.value,
            "d_closed_form": c.value,
            "abs_diff": (q.value - c.value).abs(),
            "quadrature": q.diagnostics,
            "closed_form": c.diagnostics,
        }));
    }
    let csv = csv_table(
        &["theta1", "theta2", "d_quadrature", "d_closed_form", "abs_diff"],
        rows.iter().map(|r| {
            ["theta1", "theta2", "d_quadrature", "d_closed_form", "abs_diff"]
                .iter()
                .map(|k| r[*k].to_string())
                .collect()
        }),
    )?;
    let last = rows.last().expect("points >= 1");
    let summary = format!(
        "d({t1}, {}) = {} (closed form {}); proportional: {}",
        last["theta2"],
        fmt.show(last["d_quadrature"].as_f64().unwrap_or(f64::NAN)),
        fmt.show(last["d_closed_form"].as_f64().unwrap_or(f64::NAN)),
        proportionality.proportional
    );
    Ok(Outcome {
        result: json!({ "law": law.describe(), "proportionality": proportionality, "rows": rows }),
        csv,
        summary,
    })
}

fn cmd_count(a: &CountArgs, fmt: &Angles) -> Result<Outcome> {
    let law = ResponseLaw::parse_spec(&a.law)?;
    let sched = schedule("schedule", &a.schedule)?;
    let conv = distance_by_counting(&law, a.theta1, a.theta2, &sched)?;
    let reference = statistical_distance(&law, a.theta1, a.theta2)?.value;
    let csv = csv_table(
        &["n", "D", "D_over_sqrt_n"],
        conv.rows.iter().map(|r| vec![r.n.to_string(), r.count.to_string(), r.scaled.to_string()]),
    )?;
    let mut summary = String::new();
    for r in &conv.rows {
        let _ = writeln!(summary, "n = {:>9}  D = {:>7}  D/sqrt(n) = {}", r.n, r.count, fmt.show(r.scaled));
    }
    let _ = write!(summary, "quadrature reference {}", fmt.show(reference));
    Ok(Outcome {
        result: json!({
            "law": law.describe(),
            "theta1": a.theta1,
            "theta2": a.theta2,
            "reference": reference,
            "rows": conv.rows,
            "richardson": conv.richardson,
        }),
        csv,
        summary,
    })
}

fn cmd_simulate(a: &SimulateArgs, seed: u64, fmt: &Angles) -> Result<Outcome> {
    let law = ResponseLaw::parse_spec(&a.law)?;
    let n = SampleSize::new(a.n)?;
    let replicates = replicate_study(&law, a.theta, n, a.replicates, mix_seed(seed, 1))?;
    let sched = schedule("schedule", &a.schedule)?;
    if sched.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule);
    }
    let convergence = sched
        .iter()
        .map(|&m| empirical_distance(&law, a.theta1, a.theta2, m, mix_seed(seed, 2 ^ (m.get() << 8))))
        .collect::<Result<Vec<_>>>()?;
    let matrix = match a.matrix {
        None => None,
        Some(kind) => {
            let sheet = match &a.sheet {
                Some(path) => {
                    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
                    ColumnSheet::from_json(file, law.clone())?
                }
                None => ColumnSheet::uniform(law.clone(), a.columns)?,
            };
            let mode = match kind {
                MatrixKind::Analytic => MatrixMode::Analytic,
                MatrixKind::Empirical => MatrixMode::Empirical {
                    n: SampleSize::new(a.matrix_n)?,
                    seed: mix_seed(seed, 3),
                },
            };
            Some(column_distance_matrix(&sheet, mode))
        }
    };
    let csv = match &matrix {
        Some(m) => {
            let mut out = Vec::new();
            m.write_csv(&mut out)?;
            out
        }
        None => csv_table(
            &["n", "D_hat", "empirical", "analytic", "boundary_hits"],
            convergence.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.count.to_string(),
                    r.empirical.to_string(),
                    r.analytic.to_string(),
                    r.boundary_hits.to_string(),
                ]
            }),
        )?,
    };
    let mut summary = format!(
        "std(p_hat) = {:.6e} vs predicted {:.6e}; coverage {:.3}",
        replicates.std_p_hat, replicates.predicted_std, replicates.coverage
    );
    for r in &convergence {
        let _ = write!(summary, "\nn = {:>9}  empirical {}  analytic {}", r.n, fmt.show(r.empirical), fmt.show(r.analytic));
    }
    if let Some(m) = &matrix {
        let _ = write!(summary, "\nmatrix {}x{} with {} failed entries", m.ids.len(), m.ids.len(), m.failures.len());
    }
    Ok(Outcome {
        result: json!({
            "law": law.describe(),
            "replicates": replicates,
            "convergence": convergence,
            "matrix": matrix,
        }),
        csv,
        summary,
    })
}

fn cmd_hilbert(a: &HilbertArgs, seed: u64, fmt: &Angles) -> Result<Outcome> {
    let psi1: PureState = match &a.psi1 {
        Some(s) => load_json(s)?,
        None => random_state(a.dim, mix_seed(seed, 1))?,
    };
    let psi2: PureState = match &a.psi2 {
        Some(s) => load_json(s)?,
        None => random_state(psi1.dim(), mix_seed(seed, 2))?,
    };
    let d = hilbert_distance(&psi1, &psi2)?;
    let mut bases: Vec<(&str, MeasurementBasis)> = Vec::new();
    if let Some(src) = &a.bases {
        let given: Vec<MeasurementBasis> = load_json(src)?;
        bases.extend(given.into_iter().map(|b| ("given", b)));
    }
    for i in 0..a.random_bases {
        bases.push(("random", random_basis(psi1.dim(), mix_seed(seed, 100 + i as u64))?));
    }
    let mut rows = Vec::with_capacity(bases.len());
    for (i, (source, basis)) in bases.iter().enumerate() {
        let d_a = device_distance(basis, &psi1, &psi2)?;
        rows.push(json!({ "basis": i, "source": source, "d_A": d_a, "d": d, "gap": d - d_a }));
    }
    let settings = OptimizerSettings {
        restarts: a.restarts,
        ..Default::default()
    };
    let optimum = optimize_basis(&psi1, &psi2, settings, mix_seed(seed, 3))?;
    let csv = csv_table(
        &["basis", "source", "d_A", "d", "gap"],
        rows.iter().map(|r| {
            vec![
                r["basis"].to_string(),
                r["source"].as_str().unwrap_or("").to_string(),
                r["d_A"].to_string(),
                r["d"].to_string(),
                r["gap"].to_string(),
            ]
        }),
    )?;
    let summary = format!(
        "hilbert angle {}; best analyzer {} (numeric {}, converged {})",
        fmt.show(d),
        fmt.show(optimum.d_a_max),
        fmt.show(optimum.numeric.d_a),
        optimum.numeric.converged
    );
    Ok(Outcome {
        result: json!({
            "psi1": psi1,
            "psi2": psi2,
            "hilbert_distance": d,
            "bases": rows,
            "optimizer": optimum,
        }),
        csv,
        summary,
    })
}

fn cmd_fisher(a: &FisherArgs, fmt: &Angles) -> Result<Outcome> {
    let law = ResponseLaw::parse_spec(&a.law)?;
    let info = fisher_information(&law, a.theta)?;
    let rows = parse_list::<f64>("dtheta", &a.dtheta)?
        .into_iter()
        .map(|dt| fisher_limit_ratio(&law, a.theta, dt))
        .collect::<Result<Vec<_>>>()?;
    let csv = csv_table(
        &["dtheta", "W", "I", "ratio"],
        rows.iter().map(|r| {
            vec![
                r.delta_theta.to_string(),
                r.wootters.to_string(),
                r.information.to_string(),
                r.ratio.to_string(),
            ]
        }),
    )?;
    let mut summary = format!("I({}) = {info}", fmt.show(a.theta));
    for r in &rows {
        let _ = write!(summary, "\ndtheta = {:<12} W = {}  ratio = {:.9}", r.delta_theta, fmt.show(r.wootters), r.ratio);
    }
    Ok(Outcome {
        result: json!({ "law": law.describe(), "theta": a.theta, "information": info, "rows": rows }),
        csv,
        summary,
    })
}

fn cmd_channels(a: &ChannelsArgs, fmt: &Angles) -> Result<Outcome> {
    let bank = ChannelBank::new(a.k, a.span_lo, a.span_hi, a.width)?;
    let (lo, hi) = bank.interior();
    let reference = a.reference.unwrap_or(0.5 * (lo + hi));
    let ref_vec = bank.encode(reference)?;
    let mut rows = Vec::with_capacity(a.points);
    let mut worst = 0.0f64;
    for i in 1..=a.points {
        let t = lo + (hi - lo) * i as f64 / (a.points + 1) as f64;
        let v = bank.encode(t)?;
        let decoded = bank.decode(&v)?;
        let similarity = channel_similarity(&ref_vec, &v)?;
        worst = worst.max((decoded - t).abs());
        rows.push(json!({
            "theta": t,
            "decoded": decoded,
            "abs_error": (decoded - t).abs(),
            "similarity": similarity,
            "activations": v,
        }));
    }
    let mut header = vec!["theta".to_string(), "decoded".into(), "abs_error".into(), "similarity".into()];
    header.extend((0..bank.len()).map(|k| format!("a{k}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let csv = csv_table(
        &header_refs,
        rows.iter().map(|r| {
            let mut out: Vec<String> = ["theta", "decoded", "abs_error", "similarity"]
                .iter()
                .map(|k| r[*k].to_string())
                .collect();
            if let Some(acts) = r["activations"].as_array() {
                out.extend(acts.iter().map(|x| x.to_string()));
            }
            out
        }),
    )?;
    let summary = format!(
        "{} channels, spacing {}, w = {}; max round-trip error {}",
        bank.len(),
        fmt.show(bank.spacing()),
        bank.width(),
        fmt.show(worst)
    );
    Ok(Outcome {
        result: json!({ "bank": bank, "reference": reference, "max_abs_error": worst, "rows": rows }),
        csv,
        summary,
    })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let fmt = Angles { degrees: cli.global.degrees };
    let seed = cli.global.seed;
    match &cli.command {
        Command::Dist(a) => cmd_dist(a, &fmt),
        Command::Count(a) => cmd_count(a, &fmt),
        Command::Simulate(a) => cmd_simulate(a, seed, &fmt),
        Command::Hilbert(a) => cmd_hilbert(a, seed, &fmt),
        Command::Fisher(a) => cmd_fisher(a, &fmt),
        Command::Channels(a) => cmd_channels(a, &fmt),
    }
}

fn write_artifact(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::io(p.display().to_string(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| Error::io("stdout", e))
        }
    }
}

fn run_cli(cli: &Cli) -> Result<()> {
    let outcome = match cli.global.threads {
        Some(0) => return Err(Error::Config("`--threads` must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| execute(cli))?,
        None => execute(cli)?,
    };
    let bytes = match cli.global.format {
        Format::Json => {
            let report = json!({
                "command": cli.command.name(),
                "config": {
                    "global": cli.global,
                    "args": cli.command,
                },
                "result": outcome.result,
            });
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            text.into_bytes()
        }
        Format::Csv => outcome.csv,
    };
    write_artifact(cli.global.out.as_deref(), &bytes)?;
    eprintln!("{}", outcome.summary);
    Ok(())
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        3
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let raw: Vec<String> = args.into_iter().map(|a| a.into().to_string_lossy().into_owned()).collect();
    let merged = match merge_config(raw) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let matches = match Cli::command().args_override_self(true).try_get_matches_from(merged) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match run_cli(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn config_parsing() {
        let c = parse_config("# comment\nseed = 4\n\ntheta_1 = 0.5 # trailing\nlaw = \"cos2\"\n").unwrap();
        assert_eq!(
            c,
            vec![
                ("seed".into(), "4".into()),
                ("theta-1".into(), "0.5".into()),
                ("law".into(), "cos2".into())
            ]
        );
        assert!(matches!(parse_config("novalue\n"), Err(Error::Config(m)) if m.contains("line 1")));
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "seed = 9\ntheta1 = 0.1\ntheta2 = 0.3\ndegrees = true\n").unwrap();
        let p = path.to_str().unwrap();
        let merged = merge_config(s(&["statdist", "--seed", "2", "--config", p, "dist", "--theta2", "0.9"])).unwrap();
        let m = Cli::command().args_override_self(true).try_get_matches_from(merged).unwrap();
        let cli = Cli::from_arg_matches(&m).unwrap();
        assert_eq!(cli.global.seed, 2);
        assert!(cli.global.degrees);
        let Command::Dist(a) = cli.command else { panic!() };
        assert_eq!(a.theta1, Some(0.1));
        assert_eq!(a.theta2, Some(0.9));
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "restarts = 3\n").unwrap();
        let err = merge_config(s(&["statdist", "dist", "--config", path.to_str().unwrap()])).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list::<u64>("k", "1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_list::<u64>("k", "1,x").is_err());
        assert!(schedule("k", "0,10").is_err());
    }
}
