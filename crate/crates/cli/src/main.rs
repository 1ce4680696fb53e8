use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use stover::pipeline::{run, Config, RunReport, Target};

/// Staged verification of the group-theoretic and wedge-geometry claims.
#[derive(Parser, Debug)]
#[command(name = "stover", version)]
struct Args {
    /// Stage to run: phi, subgroups, rewrite, h1, nilq, chars, kernel,
    /// quadric, lagrangian, albanese, report or all.
    #[arg(long, default_value = "all")]
    stage: String,
    #[arg(long, default_value = "stover-cache")]
    cache_dir: PathBuf,
    /// Letters a Tietze simplification may rewrite before giving up.
    #[arg(long)]
    tietze_budget: Option<u64>,
    /// Largest coset table any stage may build.
    #[arg(long)]
    max_cosets: Option<usize>,
    /// Critical-pair cap for Gröbner basis computations.
    #[arg(long)]
    groebner_pairs: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Also write the JSON report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    let args = Args::parse();
    let target: Target = args.stage.parse()?;
    let defaults = Config::default();
    let cfg = Config {
        cache_dir: args.cache_dir,
        tietze_budget: args.tietze_budget.unwrap_or(defaults.tietze_budget),
        max_cosets: args.max_cosets.unwrap_or(defaults.max_cosets),
        groebner_pairs: args.groebner_pairs.unwrap_or(defaults.groebner_pairs),
        threads: args.threads,
    };
    let report = RunReport::new(run(target, &cfg)?);
    for r in &report.stages {
        let status = if r.matched {
            "ok"
        } else if r.inconclusive {
            "INCONCLUSIVE"
        } else {
            "MISMATCH"
        };
        eprintln!("[{status:>12}] {:<28} expected {}  computed {}", r.id, r.expected, r.computed);
    }
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.json_out {
        std::fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{json}");
    Ok(report.all_match())
}
