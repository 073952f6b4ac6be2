//! Thin command-line front-end over [`chainring::harness`].

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use chainring::counting::SimplexMode;
use chainring::graphs::{self, GraphKind};
use chainring::harness::{self, Experiment, ExperimentConfig, ReportFormat};
use chainring::ring::Ring;

#[derive(Parser)]
#[command(name = "chainring", version, about = "Experiments over finite valuation rings of order q^r")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a ring: order, units, uniformizer, defining polynomial.
    Ring {
        #[command(subcommand)]
        sub: RingCommand,
    },
    /// Build a graph and print its singular spectrum.
    Graph {
        #[command(subcommand)]
        sub: GraphCommand,
    },
    /// Run one experiment; exit code 0 iff every asserted inequality holds.
    Verify {
        experiment: String,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
    /// Run one experiment across the --sizes grid and report rates.
    Sweep {
        experiment: String,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
}

#[derive(Subcommand)]
enum RingCommand {
    Info {
        #[arg(long, value_name = "p^n^r:family")]
        ring: String,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    Spectrum {
        #[arg(long, value_name = "p^n^r:family")]
        ring: String,
        #[arg(long, default_value = "product", value_parser = parse_graph_kind)]
        graph: GraphKind,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Write the adjacency dump to this path.
        #[arg(long, value_name = "PATH")]
        dump: Option<String>,
    },
}

#[derive(Args)]
struct ExperimentOpts {
    #[arg(long, value_name = "p^n^r:family")]
    ring: String,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value = "product", value_parser = parse_graph_kind)]
    graph: GraphKind,
    #[arg(long, default_value = "units-only", value_parser = parse_mode)]
    mode: SimplexMode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    /// Size tuple, comma-separated (repeatable), e.g. --sizes 40,40.
    #[arg(long, value_name = "N[,M]")]
    sizes: Vec<String>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// For graph-backed experiments (mixing, variance, spectrum,
    /// sumproduct): also write the graph adjacency dump here.
    #[arg(long, value_name = "PATH")]
    dump: Option<String>,
}

fn parse_graph_kind(s: &str) -> Result<GraphKind, String> {
    match s {
        "product" => Ok(GraphKind::Product),
        "er" => Ok(GraphKind::ErdosRenyi),
        _ => Err(format!("unknown graph `{s}` (expected product|er)")),
    }
}

fn parse_mode(s: &str) -> Result<SimplexMode, String> {
    match s {
        "units-only" => Ok(SimplexMode::UnitsOnly),
        "all-values" => Ok(SimplexMode::AllValues),
        _ => Err(format!("unknown mode `{s}` (expected units-only|all-values)")),
    }
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    match s {
        "csv" => Ok(ReportFormat::Csv),
        "json" => Ok(ReportFormat::Json),
        _ => Err(format!("unknown format `{s}` (expected csv|json)")),
    }
}

fn parse_sizes(raw: &[String]) -> Result<Vec<Vec<u64>>, String> {
    raw.iter()
        .map(|tuple| {
            tuple
                .split(',')
                .map(|v| v.trim().parse::<u64>().map_err(|_| format!("bad size entry `{v}` in --sizes")))
                .collect()
        })
        .collect()
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Ring { sub: RingCommand::Info { ring } } => {
            let ring = Ring::parse_descriptor(&ring).map_err(|e| e.to_string())?;
            println!("descriptor: {}", ring.descriptor());
            println!("order q^r: {}", ring.order());
            println!("residue field: {}", ring.q());
            println!("units |R^*|: {}", ring.unit_count());
            println!("maximal ideal |R^0|: {}", ring.nonunit_count());
            println!("uniformizer: {}", ring.uniformizer());
            if ring.n() > 1 {
                let poly: Vec<String> = ring.field_poly().iter().map(|c| c.to_string()).collect();
                println!("field polynomial (low-first): {}", poly.join(","));
            }
            Ok(true)
        }
        Command::Graph { sub: GraphCommand::Spectrum { ring, graph, d, dump } } => {
            let ring = Ring::parse_descriptor(&ring).map_err(|e| e.to_string())?;
            let started = Instant::now();
            let g = match graph {
                GraphKind::Product => graphs::build_product_graph(&ring, d),
                GraphKind::ErdosRenyi => graphs::build_er_graph(&ring, d),
            }
            .map_err(|e| e.to_string())?;
            if let Some(path) = dump {
                let mut file = fs::File::create(&path).map_err(|e| format!("{path}: {e}"))?;
                g.dump(&mut file).map_err(|e| e.to_string())?;
            }
            eprintln!(
                "# part={} deg={} connected={} bound={:.6} ({:.2?})",
                g.part_size(),
                g.deg_a(),
                g.is_connected(),
                g.spectral_bound(),
                started.elapsed()
            );
            let mut stdout = std::io::stdout();
            g.dump_spectrum(&mut stdout).map_err(|e| e.to_string())?;
            Ok(g.third_eigenvalue() <= g.spectral_bound() + 1e-6)
        }
        Command::Verify { experiment, opts } => run_experiment(&experiment, opts, false),
        Command::Sweep { experiment, opts } => run_experiment(&experiment, opts, true),
    }
}

fn run_experiment(experiment: &str, opts: ExperimentOpts, sweep: bool) -> Result<bool, String> {
    let experiment: Experiment = experiment.parse().map_err(|e: harness::HarnessError| e.to_string())?;
    let ring = Ring::parse_descriptor(&opts.ring).map_err(|e| e.to_string())?;
    let mut cfg = ExperimentConfig::new(experiment, ring);
    cfg.d = opts.d;
    cfg.k = opts.k;
    cfg.graph = opts.graph;
    cfg.mode = opts.mode;
    cfg.seed = opts.seed;
    cfg.trials = opts.trials;
    cfg.sizes = parse_sizes(&opts.sizes)?;
    if let Some(path) = &opts.dump {
        let g = match experiment {
            Experiment::Mixing | Experiment::Variance | Experiment::Spectrum => match cfg.graph {
                GraphKind::Product => graphs::build_product_graph(&cfg.ring, cfg.d),
                GraphKind::ErdosRenyi => graphs::build_er_graph(&cfg.ring, cfg.d),
            },
            Experiment::SumProduct => graphs::build_er_graph(&cfg.ring, 3),
            _ => return Err(format!("--dump is not applicable to experiment `{experiment}`")),
        }
        .map_err(|e| e.to_string())?;
        let mut file = fs::File::create(path).map_err(|e| format!("{path}: {e}"))?;
        g.dump(&mut file).map_err(|e| e.to_string())?;
    }
    let started = Instant::now();
    let report = if sweep { harness::sweep(&cfg) } else { harness::run(&cfg) }.map_err(|e| e.to_string())?;
    eprintln!("# wall time: {:.2?}", started.elapsed());
    let rendered = report.render(opts.format);
    match opts.out {
        Some(path) => {
            let mut file = fs::File::create(&path).map_err(|e| format!("{path}: {e}"))?;
            file.write_all(rendered.as_bytes()).map_err(|e| e.to_string())?;
        }
        None => print!("{rendered}"),
    }
    Ok(report.all_pass())
}
