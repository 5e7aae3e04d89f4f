//! Command-line front end. The `sca` binary is a thin wrapper around [`run`].
//!
//! Exit codes: `0` success, `1` error, `2` a valid run whose scientific verdict
//! is negative (no admissible `q`, closeness fails, dominance not guaranteed).
//!
//! Primary output goes to `--out` (or stdout). A run manifest with the
//! resolved parameters, the model digest and timing goes to `--manifest`,
//! defaulting to `<out>.manifest.json`, or to stderr when writing to stdout.
//! Primary output never contains timing, so reruns are byte-identical.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{self, DEFAULT_EPSILON};
use crate::dynamics::{expected_flips_glauber, expected_flips_sca, sca_flip_factors, Kernel, SamplerParams};
use crate::error::{Error, Result};
use crate::model::{compute_constants, IsingModel, SpinConfiguration, DEFAULT_ENUMERATION_CAP};
use crate::oracle::{tv_distance, Caps, Enumeration, DEFAULT_MATRIX_CAP};
use crate::search::{ensemble_search, Schedule, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "sca", version, about = "SCA and Glauber dynamics for finite Ising models")]
struct Cli {
    /// Largest |V| for full enumeration of configurations.
    #[arg(long, global = true, env = "SCA_ENUM_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    enum_cap: usize,

    /// Largest |V| for explicit transition matrices.
    #[arg(long, global = true, env = "SCA_MATRIX_CAP", default_value_t = DEFAULT_MATRIX_CAP)]
    matrix_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the primary JSON output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Where to write the run manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Admissible q interval and temperature ceiling.
    Bounds {
        model: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Exact order-preservation, total-variation and detailed-balance checks.
    Verify {
        model: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Expected spin flips per update for Glauber and SCA.
    Flips {
        model: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        q: f64,
        /// Evaluate every configuration.
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        exhaustive: bool,
        /// Evaluate this many uniformly drawn configurations.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Ensemble ground-state search with independent chains.
    Search {
        model: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, conflicts_with = "auto_q", required_unless_present = "auto_q")]
        q: Option<f64>,
        /// Use the midpoint of the admissible q interval.
        #[arg(long)]
        auto_q: bool,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long)]
        chains: u64,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON list of [step, beta] breakpoints.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Write per-chain traces to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KernelArg::Sca)]
        kernel: KernelArg,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Exact Gibbs (and SCA) distributions plus the ground states.
    Exact {
        model: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        q: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KernelArg {
    Sca,
    Glauber,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Sca => Kernel::Sca,
            KernelArg::Glauber => Kernel::Glauber,
        }
    }
}

/// What a successful command produced.
struct Report {
    primary: Value,
    negative: bool,
    parameters: Value,
    seed: Option<u64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let caps = Caps {
        distribution: cli.enum_cap,
        matrix: cli.matrix_cap,
    };
    let started = Instant::now();
    let (name, model_path, output) = match &cli.command {
        Command::Bounds { model, output, .. } => ("bounds", model, output),
        Command::Verify { model, output, .. } => ("verify", model, output),
        Command::Flips { model, output, .. } => ("flips", model, output),
        Command::Search { model, output, .. } => ("search", model, output),
        Command::Exact { model, output, .. } => ("exact", model, output),
    };
    let (model, digest) = load_model(model_path)?;
    let report = match &cli.command {
        Command::Bounds { beta, epsilon, .. } => cmd_bounds(&model, *beta, *epsilon)?,
        Command::Verify { beta, q, epsilon, .. } => cmd_verify(&model, caps, *beta, *q, *epsilon)?,
        Command::Flips {
            beta,
            q,
            exhaustive,
            samples,
            seed,
            ..
        } => cmd_flips(
            &model,
            caps,
            *beta,
            *q,
            if *exhaustive { None } else { *samples },
            *seed,
        )?,
        Command::Search {
            beta,
            q,
            auto_q,
            epsilon,
            chains,
            steps,
            seed,
            schedule,
            trace,
            kernel,
            threads,
            ..
        } => cmd_search(
            &model,
            SearchArgs {
                beta: *beta,
                q: *q,
                auto_q: *auto_q,
                epsilon: *epsilon,
                chains: *chains,
                steps: *steps,
                seed: *seed,
                schedule: schedule.as_deref(),
                trace: trace.as_deref(),
                kernel: (*kernel).into(),
                threads: *threads,
            },
        )?,
        Command::Exact { beta, q, .. } => cmd_exact(&model, caps, *beta, *q)?,
    };

    let mut text = serde_json::to_string_pretty(&report.primary).expect("JSON values serialize");
    text.push('\n');
    match &output.out {
        Some(path) => write_file(path, text.as_bytes())?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| io_err("<stdout>", source))?,
    }

    let manifest = json!({
        "command": name,
        "parameters": report.parameters,
        "model_file": model_path.display().to_string(),
        "model_digest": digest,
        "seed": report.seed,
        "caps": { "enumeration": caps.distribution, "matrix": caps.matrix },
        "tool_version": env!("CARGO_PKG_VERSION"),
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    let manifest_text = format!(
        "{}\n",
        serde_json::to_string_pretty(&manifest).expect("JSON values serialize")
    );
    let manifest_path = output.manifest.clone().or_else(|| {
        output.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    match manifest_path {
        Some(path) => write_file(&path, manifest_text.as_bytes())?,
        None => stderr
            .write_all(manifest_text.as_bytes())
            .map_err(|source| io_err("<stderr>", source))?,
    }
    Ok(if report.negative { 2 } else { 0 })
}

fn io_err(path: impl Into<String>, source: std::io::Error) -> Error {
    Error::Io {
        path: path.into(),
        source,
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| io_err(path.display().to_string(), source))
}

/// Loads a model and returns it with the SHA-256 of its canonical JSON
/// (sorted keys, no whitespace).
pub fn load_model(path: &Path) -> Result<(IsingModel, String)> {
    let text = std::fs::read_to_string(path).map_err(|source| io_err(path.display().to_string(), source))?;
    let value: Value = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.display().to_string(),
        source,
    })?;
    let model = IsingModel::load(path)?;
    let mut canonical = String::new();
    write_canonical(&value, &mut canonical);
    let digest = Sha256::digest(canonical.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok((model, hex))
}

fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn cmd_bounds(model: &IsingModel, beta: f64, epsilon: f64) -> Result<Report> {
    let plan = bounds::plan(model, beta, epsilon)?;
    Ok(Report {
        negative: !plan.is_feasible(),
        primary: serde_json::to_value(&plan).expect("plan serializes"),
        parameters: json!({ "beta": beta, "epsilon": epsilon }),
        seed: None,
    })
}

fn cmd_verify(model: &IsingModel, caps: Caps, beta: f64, q: f64, epsilon: f64) -> Result<Report> {
    let params = SamplerParams::new(beta, q)?;
    let ex = Enumeration::new(model, caps)?;
    let constants = compute_constants(model, false)?;
    let r_h = ex.range();
    let pi_sca = ex.sca(beta, q)?;
    let pi_g = ex.gibbs(beta)?;
    let closeness = ex.check_order_preservation(&pi_sca, epsilon, r_h)?;
    let closeness_sqrt_v = ex.check_order_preservation(&pi_sca, epsilon, constants.r_h_lower)?;
    let kernels = if model.n_vertices() <= caps.matrix {
        let sca = ex.transition_matrix(&params, Kernel::Sca)?;
        let glauber = ex.transition_matrix(&params, Kernel::Glauber)?;
        json!({
            "detailed_balance": {
                "sca": sca.detailed_balance_residual(&pi_sca)?,
                "glauber": glauber.detailed_balance_residual(&pi_g)?,
            },
            "stationarity": {
                "sca": sca.stationarity_residual(&pi_sca)?,
                "glauber": glauber.stationarity_residual(&pi_g)?,
            },
        })
    } else {
        json!({ "skipped": format!("|V| = {} exceeds the matrix cap {}", model.n_vertices(), caps.matrix) })
    };
    let primary = json!({
        "beta": beta,
        "q": q,
        "epsilon": epsilon,
        "r_h": { "exact": r_h, "sqrt_v": constants.r_h_lower, "upper": constants.r_h_upper },
        "closeness": closeness,
        "closeness_sqrt_v": closeness_sqrt_v,
        "tv_sca_gibbs": tv_distance(&pi_sca, &pi_g)?,
        "kernels": kernels,
    });
    Ok(Report {
        negative: !closeness.is_close,
        primary,
        parameters: json!({ "beta": beta, "q": q, "epsilon": epsilon }),
        seed: None,
    })
}

#[derive(Default)]
struct Summary {
    min: f64,
    max: f64,
    sum: f64,
    n: u64,
}

impl Summary {
    fn push(&mut self, x: f64) {
        if self.n == 0 {
            self.min = x;
            self.max = x;
        } else {
            self.min = self.min.min(x);
            self.max = self.max.max(x);
        }
        self.sum += x;
        self.n += 1;
    }

    fn to_json(&self) -> Value {
        json!({ "min": self.min, "mean": self.sum / self.n as f64, "max": self.max })
    }
}

fn cmd_flips(model: &IsingModel, caps: Caps, beta: f64, q: f64, samples: Option<u64>, seed: u64) -> Result<Report> {
    let params = SamplerParams::new(beta, q)?;
    let n = model.n_vertices();
    let configurations: Box<dyn Iterator<Item = SpinConfiguration>> = match samples {
        None => {
            if n > caps.distribution {
                return Err(Error::Capacity {
                    what: "exhaustive flip comparison",
                    n_vertices: n,
                    cap: caps.distribution,
                });
            }
            Box::new((0..1u64 << n).map(move |i| SpinConfiguration::from_index(n, i)))
        }
        Some(m) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..m).map(move |_| {
                let spins = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
                SpinConfiguration::new(spins).expect("±1 spins")
            }))
        }
    };

    let (mut g, mut s, mut sel) = (Summary::default(), Summary::default(), Summary::default());
    let mut violations = 0u64;
    let mut rows = Vec::new();
    for sigma in configurations {
        let eg = expected_flips_glauber(model, beta, &sigma)?;
        let es = expected_flips_sca(model, beta, q, &sigma)?;
        let max_eps = sca_flip_factors(model, &params, &sigma)?
            .iter()
            .map(|f| f.epsilon)
            .fold(0.0, f64::max);
        let selection = n as f64 * max_eps;
        g.push(eg);
        s.push(es);
        sel.push(selection);
        if eg > es {
            violations += 1;
        }
        if samples.is_none() {
            rows.push(json!({
                "index": if n <= 64 { json!(sigma.index()) } else { json!(sigma.to_string()) },
                "glauber": eg,
                "sca": es,
                "selection_bound": selection,
            }));
        }
    }

    let constants = compute_constants(model, false)?;
    let q_max = bounds::q_upper_flips(&constants, n, beta);
    let hypothesis = q <= q_max;
    let verdict = match (hypothesis, violations) {
        (true, 0) => "dominant",
        (true, _) => "violated",
        (false, _) => "not guaranteed",
    };
    let mut primary = json!({
        "mode": if samples.is_none() { "exhaustive" } else { "sampled" },
        "beta": beta,
        "q": q,
        "n_configurations": g.n,
        "glauber": g.to_json(),
        "sca": s.to_json(),
        "selection_bound": sel.to_json(),
        "violations": violations,
        "q_upper_flips": q_max,
        "hypothesis_holds": hypothesis,
        "verdict": verdict,
    });
    if samples.is_none() {
        primary["per_configuration"] = Value::Array(rows);
    }
    Ok(Report {
        negative: verdict != "dominant",
        primary,
        parameters: json!({ "beta": beta, "q": q, "samples": samples }),
        seed: samples.map(|_| seed),
    })
}

struct SearchArgs<'a> {
    beta: f64,
    q: Option<f64>,
    auto_q: bool,
    epsilon: f64,
    chains: u64,
    steps: u64,
    seed: u64,
    schedule: Option<&'a Path>,
    trace: Option<&'a Path>,
    kernel: Kernel,
    threads: Option<usize>,
}

fn cmd_search(model: &IsingModel, args: SearchArgs<'_>) -> Result<Report> {
    let schedule = match args.schedule {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| io_err(path.display().to_string(), source))?;
            let s: Schedule = serde_json::from_str(&text).map_err(|source| Error::Json {
                path: path.display().to_string(),
                source,
            })?;
            Some(s)
        }
        None => None,
    };
    let mut parameters = json!({
        "beta": args.beta,
        "epsilon": args.epsilon,
        "chains": args.chains,
        "steps": args.steps,
        "kernel": args.kernel,
        "schedule": schedule,
        "threads": args.threads,
    });

    let q = if args.auto_q {
        let plan = bounds::plan(model, args.beta, args.epsilon)?;
        parameters["q_derivation"] = serde_json::to_value(&plan).expect("plan serializes");
        match plan.recommended_q {
            Some(q) => q,
            None => {
                return Ok(Report {
                    primary: serde_json::to_value(&plan).expect("plan serializes"),
                    negative: true,
                    parameters,
                    seed: Some(args.seed),
                })
            }
        }
    } else {
        args.q.expect("clap requires --q without --auto-q")
    };
    parameters["q"] = json!(q);

    let config = SearchConfig {
        beta: args.beta,
        q,
        n_steps: args.steps,
        n_chains: args.chains,
        seed: args.seed,
        record_trace: args.trace.is_some(),
        schedule,
        kernel: args.kernel,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start thread pool: {e}")))?;
    let profile = pool.install(|| ensemble_search(model, &config))?;

    if let Some(path) = args.trace {
        let file = std::fs::File::create(path).map_err(|source| io_err(path.display().to_string(), source))?;
        profile
            .write_trace_csv(std::io::BufWriter::new(file))
            .map_err(|source| io_err(path.display().to_string(), source))?;
    }
    let mut primary = profile.to_json();
    primary["beta"] = json!(args.beta);
    primary["q"] = json!(q);
    Ok(Report {
        primary,
        negative: false,
        parameters,
        seed: Some(args.seed),
    })
}

fn cmd_exact(model: &IsingModel, caps: Caps, beta: f64, q: Option<f64>) -> Result<Report> {
    SamplerParams::new(beta, q.unwrap_or(0.0))?;
    let ex = Enumeration::new(model, caps)?;
    let sca = q.map(|q| ex.sca(beta, q)).transpose()?;
    let primary = json!({
        "n": model.n_vertices(),
        "beta": beta,
        "q": q,
        "gibbs": ex.gibbs(beta)?,
        "sca": sca,
        "ground_states": ex.ground_state_indices(),
        "ground_energy": ex.ground_energy(),
        "range": ex.range(),
    });
    Ok(Report {
        primary,
        negative: false,
        parameters: json!({ "beta": beta, "q": q }),
        seed: None,
    })
}
