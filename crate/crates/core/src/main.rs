use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;

use wsnsim::config::{build_config, render_config};
use wsnsim::protocols::ProtocolKind;
use wsnsim::report::{self, SummaryRow};
use wsnsim::simulator::{SimConfig, SimResult, Simulation};
use wsnsim::Error;

/// Round-based clustering simulator for wireless sensor networks
#[derive(Parser, Debug)]
#[command(name = "wsnsim", version, about)]
struct Args {
    /// Shipped scenario: ch2-scenario1, ch2-scenario2 or ch3
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,

    /// Config file of `key = value` lines
    #[arg(long)]
    config: Option<PathBuf>,

    /// Clustering protocol, overriding the scenario's
    #[arg(long)]
    protocol: Option<ProtocolKind>,

    /// Seed of the first run
    #[arg(long)]
    seed: Option<u64>,

    /// Number of runs, seeded consecutively from --seed
    #[arg(long, default_value_t = 1)]
    seeds: u64,

    /// Round cap per run
    #[arg(long)]
    rounds: Option<u64>,

    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Also write every round's clusters and next hops
    #[arg(long)]
    dump_clusters: bool,

    /// Also write the protocol's fuzzy input/output surface
    #[arg(long)]
    dump_fis_surface: bool,

    /// Fixed topology (id,x,y[,energy_J]) replacing the random deployment
    #[arg(long)]
    positions: Option<PathBuf>,

    /// Extra config override, `key=value` (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn load(args: &Args) -> Result<SimConfig, Error> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?,
        None => String::new(),
    };
    let base = match (&args.preset, &args.config) {
        (Some(p), _) => Some(p.as_str()),
        (None, None) => Some("ch2-scenario1"),
        (None, Some(_)) => None,
    };
    let mut overrides = Vec::new();
    for kv in &args.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| {
            Error::Config(wsnsim::ConfigError::Invalid {
                field: "--set".into(),
                value: kv.clone(),
            })
        })?;
        overrides.push((k.trim().to_string(), v.trim().to_string()));
    }
    if let Some(p) = args.protocol {
        overrides.push(("protocol".into(), p.to_string()));
    }
    if let Some(s) = args.seed {
        overrides.push(("seed".into(), s.to_string()));
    }
    if let Some(r) = args.rounds {
        overrides.push(("max_rounds".into(), r.to_string()));
    }
    let mut cfg = build_config(base, &text, &overrides)?;
    if let Some(path) = &args.positions {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        let placed = report::read_positions(&text).map_err(|e| Error::Csv {
            path: path.clone(),
            line: e.line,
            msg: e.msg,
        })?;
        cfg.nodes = placed.len();
        cfg.positions = Some(placed);
    }
    wsnsim::config::validate(&cfg)?;
    Ok(cfg)
}

struct Run {
    result: SimResult,
    deployment: String,
    clusters: Option<String>,
}

fn run_one(cfg: SimConfig, dump_clusters: bool) -> Result<Run, Error> {
    let mut sim = Simulation::new(cfg)?;
    let deployment = report::deployment_csv(sim.network());
    let mut clusters = dump_clusters.then(|| format!("{}\n", report::CLUSTERS_HEADER));
    while let Some(step) = sim.step()? {
        if let Some(s) = clusters.as_mut() {
            report::append_clusters(s, step.metrics.round, &step.plan);
        }
    }
    Ok(Run {
        result: sim.finish(),
        deployment,
        clusters,
    })
}

fn write_surface(cfg: &SimConfig, out: &Path) -> Result<(), Error> {
    let csv = match cfg.protocol.kind {
        ProtocolKind::Type2Fl => report::type2_surface_csv(&cfg.fis.type2()?, 101)?,
        ProtocolKind::FuzzyUnequal => report::type1_surface_csv(&cfg.fis.type1()?, 21)?,
        ProtocolKind::Leach => {
            eprintln!("note: leach has no fuzzy system; no surface written");
            return Ok(());
        }
    };
    report::write_file(&out.join("fis_surface.csv"), &csv)
}

fn run(args: &Args) -> Result<(), Error> {
    let cfg = load(args)?;
    if args.seeds == 0 {
        return Err(Error::Config(wsnsim::ConfigError::OutOfRange {
            field: "--seeds".into(),
            msg: "need at least one run".into(),
        }));
    }
    std::fs::create_dir_all(&args.out).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;
    report::write_file(&args.out.join("config.txt"), &render_config(&cfg))?;
    if args.dump_fis_surface {
        write_surface(&cfg, &args.out)?;
    }

    let seeds: Vec<u64> = (0..args.seeds).map(|i| cfg.seed.wrapping_add(i)).collect();
    let runs: Vec<Run> = seeds
        .par_iter()
        .map(|&seed| {
            run_one(
                SimConfig {
                    seed,
                    ..cfg.clone()
                },
                args.dump_clusters,
            )
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(runs.len());
    for run in &runs {
        let seed = run.result.seed;
        report::write_metrics_csv(
            &run.result,
            &args.out.join(format!("metrics_seed{seed}.csv")),
        )?;
        report::write_file(
            &args.out.join(format!("deployment_seed{seed}.csv")),
            &run.deployment,
        )?;
        if let Some(c) = &run.clusters {
            report::write_file(&args.out.join(format!("clusters_seed{seed}.csv")), c)?;
        }
        rows.push(SummaryRow::from_result(cfg.protocol.kind, &run.result));
    }
    report::write_summary_csv(&rows, &args.out.join("summary.csv"))?;
    for r in &rows {
        let show = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        println!(
            "seed {} {}: fnd {} hnd {} lnd {}",
            r.seed,
            r.protocol,
            show(r.fnd),
            show(r.hnd),
            show(r.lnd)
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
