use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::{info, warn};

use euclid2d::election::write_soc;
use euclid2d::ilp::solver::{parse_lp, solve_builtin, SolveStatus};
use euclid2d::instances;
use euclid2d::portfolio::{
    dataset_of, parse_lanes, run_portfolio, summarize, verify_certificate, BatchRecord, CertificateFile, Config,
    Status, Verdict,
};
use euclid2d::qcp::{parse_qcp_system, solve_penalty, Embedding};
use euclid2d::{parse_soc, Election, Stop};

#[derive(Parser)]
#[command(name = "euclid2d", version, about = "Decide whether a preference profile is 2-Euclidean")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the portfolio on one .soc file
    Recognize {
        file: PathBuf,
        /// Global time budget in seconds
        #[arg(long)]
        budget: Option<f64>,
        /// Comma-separated lanes: 38, hull, closure, qcp, hull-full, ilp
        #[arg(long)]
        lanes: Option<String>,
        /// Write the certificate as JSON to this path
        #[arg(long)]
        emit_cert: Option<PathBuf>,
        /// Print the full verdict as JSON
        #[arg(long)]
        json: bool,
        /// TOML configuration file
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a certificate against a .soc file without searching
    Verify {
        file: PathBuf,
        cert: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the portfolio on every .soc file in a directory
    Batch {
        dir: PathBuf,
        /// Write the per-dataset table (Markdown) here
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        lanes: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Builtin 0/1 solver speaking the external LP bridge protocol
    #[command(hide = true)]
    SolveLp {
        file: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        secs: f64,
    },
    /// Builtin embedder speaking the external QCP bridge protocol
    #[command(hide = true)]
    SolveQcp {
        file: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        secs: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
    /// Write the bundled example elections as .soc files
    #[command(hide = true)]
    Fixtures { dir: PathBuf },
}

fn load_config(path: Option<&Path>, budget: Option<f64>, lanes: Option<&str>) -> Result<Config> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Config::from_toml(&text)?
        }
        None => Config::default(),
    };
    if let Some(b) = budget {
        if !(b >= 0.0) {
            bail!("budget must be a non-negative number of seconds");
        }
        cfg.portfolio.budget_secs = b;
    }
    if let Some(l) = lanes {
        cfg.portfolio.lanes = parse_lanes(l)?;
    }
    Ok(cfg)
}

fn load_election(path: &Path) -> Result<Election> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_soc(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_verdict(v: &Verdict) {
    println!("status: {}", v.status);
    if let Some(c) = &v.certificate {
        println!("certificate: {}", c.kind());
    }
    if let Some(l) = v.lane {
        println!("lane: {l}");
    }
    println!(
        "reduced: {} candidates, {} votes ({} reduction steps)",
        v.reduced_candidates,
        v.reduced_votes,
        v.trace.steps.len()
    );
    for t in &v.timings {
        println!("  {:<9} {:>8.3} s  {}", t.lane.to_string(), t.secs, t.outcome);
    }
    for d in &v.diagnostics {
        println!("note: {d}");
    }
    println!("elapsed: {:.3} s", v.elapsed_secs);
}

fn exit_for(status: Status) -> ExitCode {
    match status {
        Status::Unknown => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}

fn recognize(
    file: &Path,
    cfg: &Config,
    emit_cert: Option<&Path>,
    json: bool,
) -> Result<ExitCode> {
    let e = load_election(file)?;
    info!("{}: {} candidates, {} distinct votes", file.display(), e.num_candidates(), e.num_votes());
    let v = run_portfolio(&e, cfg);
    if json {
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        print_verdict(&v);
    }
    if let Some(path) = emit_cert {
        match v.certificate_file() {
            Some(c) => {
                fs::write(path, serde_json::to_string_pretty(&c)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            None => warn!("no certificate to write: the verdict is unknown"),
        }
    }
    Ok(exit_for(v.status))
}

fn verify(file: &Path, cert: &Path, cfg: &Config) -> Result<ExitCode> {
    let e = load_election(file)?;
    let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let c: CertificateFile = serde_json::from_str(&text).context("certificate is not valid JSON")?;
    if c.tool_version != euclid2d::portfolio::TOOL_VERSION {
        warn!("certificate written by {}", c.tool_version);
    }
    verify_certificate(&e, &c, cfg)?;
    println!("accepted: {} certificate, {}", c.certificate.kind(), c.status);
    Ok(ExitCode::SUCCESS)
}

fn batch(dir: &Path, cfg: &Config, summary: Option<&Path>) -> Result<ExitCode> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|d| d.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "soc"))
        .collect();
    files.sort();
    let mut records = Vec::new();
    for path in &files {
        let t = Instant::now();
        let (status, lane, error) = match load_election(path) {
            Ok(e) => {
                let v = run_portfolio(&e, cfg);
                let lane = v.lane.map(|l| l.to_string());
                let lane = lane.or_else(|| v.certificate.as_ref().map(|c| c.kind().to_lowercase()));
                (Some(v.status), lane, None)
            }
            Err(err) => (None, None, Some(format!("{err:#}"))),
        };
        let secs = t.elapsed().as_secs_f64();
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match (&status, &error) {
            (Some(s), _) => println!("{name}: {s} ({}, {secs:.3} s)", lane.as_deref().unwrap_or("-")),
            (None, Some(err)) => println!("{name}: error: {err}"),
            _ => {}
        }
        records.push(BatchRecord {
            file: name,
            dataset: dataset_of(path),
            status,
            lane,
            secs,
            error,
        });
    }
    let (_, table) = summarize(&records);
    println!();
    print!("{table}");
    if let Some(p) = summary {
        fs::write(p, &table).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_lp(file: &Path, secs: f64) -> Result<ExitCode> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let p = parse_lp(&text)?;
    let stop = Stop::after(Duration::try_from_secs_f64(secs.max(0.0)).unwrap_or(Duration::MAX));
    match solve_builtin(&p, &stop) {
        SolveStatus::Infeasible => println!("INFEASIBLE"),
        SolveStatus::Unknown => println!("TIME_LIMIT"),
        SolveStatus::Feasible { values, optimal } => {
            println!("{}", if optimal { "OPTIMAL" } else { "TIME_LIMIT" });
            for (name, _) in p.names.iter().zip(&values).filter(|(_, &b)| b) {
                println!("{name} 1");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_qcp(file: &Path, secs: f64, seed: u64, restarts: usize) -> Result<ExitCode> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let sys = parse_qcp_system(&text)?;
    let stop = Stop::after(Duration::try_from_secs_f64(secs.max(0.0)).unwrap_or(Duration::MAX));
    match solve_penalty(&sys, seed, restarts, 400, &stop) {
        Some(z) => {
            let pt = |k: usize| [z[2 * k], z[2 * k + 1]];
            let emb = Embedding {
                candidates: (0..sys.m).map(pt).collect(),
                voters: (sys.m..sys.m + sys.n).map(pt).collect(),
            };
            println!("FEASIBLE");
            print!("{}", emb.to_lines());
        }
        None => println!("TIME_LIMIT"),
    }
    Ok(ExitCode::SUCCESS)
}

fn fixtures(dir: &Path) -> Result<ExitCode> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, e) in instances::all() {
        // underscores keep each fixture in its own batch dataset
        let path = dir.join(format!("{}.soc", name.replace('-', "_")));
        fs::write(&path, write_soc(&e)).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Recognize { file, budget, lanes, emit_cert, json, config } => {
            let cfg = load_config(config.as_deref(), budget, lanes.as_deref())?;
            recognize(&file, &cfg, emit_cert.as_deref(), json)
        }
        Command::Verify { file, cert, config } => {
            let cfg = load_config(config.as_deref(), None, None)?;
            verify(&file, &cert, &cfg)
        }
        Command::Batch { dir, summary, budget, lanes, config } => {
            let cfg = load_config(config.as_deref(), budget, lanes.as_deref())?;
            batch(&dir, &cfg, summary.as_deref())
        }
        Command::SolveLp { file, secs } => solve_lp(&file, secs),
        Command::SolveQcp { file, secs, seed, restarts } => solve_qcp(&file, secs, seed, restarts),
        Command::Fixtures { dir } => fixtures(&dir),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // exit code 2 means "unknown", so usage errors exit with 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
