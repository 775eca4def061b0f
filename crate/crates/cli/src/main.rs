mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};
use steinerlab::dynamics::Mode;
use steinerlab::{Error, Result};

use commands::Status;
use config::RunConfig;

#[derive(Parser)]
#[command(name = "steinerlab", version, about = "Iterated Steiner symmetrization of planar compact sets")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(multiple = false)]
struct InputArgs {
    /// Set file (JSON).
    #[arg(long)]
    set: Option<PathBuf>,
    /// Builtin shape name.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate symmetrizations from one set and write the trajectory.
    Run {
        /// JSON config; flags override its keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        input: InputArgs,
        /// kronecker:A | powerlaw:THETA,SIGMA | iid[:SEED] | finite:PATH | explicit:PATH
        #[arg(long)]
        spec: Option<String>,
        /// plain | rotated
        #[arg(long)]
        mode: Option<Mode>,
        /// Number of steps.
        #[arg(short = 'M')]
        big_m: Option<usize>,
        /// Raster cell size (default: diameter / 512).
        #[arg(long = "h")]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for `--spec iid`.
        #[arg(long)]
        seed: Option<u64>,
        /// Perturb the area at this step (exercises the invariant check).
        #[arg(long, hide = true)]
        inject_area_fault: Option<usize>,
    },
    /// Seeded property suites.
    Verify {
        /// conservation | inequalities | oracle | all
        #[arg(default_value = "all")]
        suite: String,
        #[arg(default_value_t = 200)]
        n_cases: usize,
        #[arg(default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment.
    Reproduce {
        /// ex2.1 | ex2.2 | ex2.3 | thm2.1 | thm5.1 | sec5-ud | thm6.1
        id: String,
        /// JSON object of parameter overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Parameter override, key=value (repeatable).
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        input: InputArgs,
        #[arg(short = 'M')]
        big_m: Option<usize>,
        #[arg(long = "h")]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn reproduce_overrides(
    config: Option<PathBuf>,
    params: &[String],
    input: InputArgs,
    big_m: Option<usize>,
    h: Option<f64>,
) -> Result<Value> {
    let mut map = match config {
        Some(p) => match serde_json::from_str(&std::fs::read_to_string(&p)?) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(Error::parse("config", "expected a JSON object")),
            Err(e) => return Err(Error::parse("config", format!("{}: {e}", p.display()))),
        },
        None => Map::new(),
    };
    for s in params {
        let (k, v) = commands::parse_param(s)?;
        map.insert(k, v);
    }
    if let Some(p) = input.set {
        map.insert("input".into(), Value::String(p.to_string_lossy().into_owned()));
    }
    if let Some(b) = input.builtin {
        map.insert("input".into(), Value::String(b));
    }
    if let Some(m) = big_m {
        map.insert("M".into(), m.into());
    }
    if let Some(h) = h {
        map.insert("h".into(), h.into());
    }
    Ok(Value::Object(map))
}

fn dispatch(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Run {
            config,
            input,
            spec,
            mode,
            big_m,
            h,
            out,
            seed,
            inject_area_fault,
        } => {
            let base = match config {
                Some(p) => RunConfig::from_file(&p)?,
                None => RunConfig::default(),
            };
            let mut flags = RunConfig {
                spec,
                mode,
                big_m,
                h,
                out,
                seed,
                ..Default::default()
            };
            // An input flag replaces whichever input the file named.
            let base = if input.set.is_some() || input.builtin.is_some() {
                flags.set = input.set;
                flags.builtin = input.builtin;
                RunConfig {
                    set: None,
                    builtin: None,
                    ..base
                }
            } else {
                base
            };
            commands::run(base.merged(flags), inject_area_fault)
        }
        Command::Verify {
            suite,
            n_cases,
            seed,
            out,
        } => commands::verify(&suite, n_cases, seed, out),
        Command::Reproduce {
            id,
            config,
            params,
            input,
            big_m,
            h,
            out,
        } => {
            let overrides = reproduce_overrides(config, &params, input, big_m, h)?;
            commands::reproduce_cmd(&id, overrides, out)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors share exit 1 with other input errors; 2 means an invariant broke.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let status = match dispatch(cli.command) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            commands::exit_code(&e)
        }
    };
    ExitCode::from(status as u8)
}
