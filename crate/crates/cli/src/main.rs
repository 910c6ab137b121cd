//! `sticky`: predict, simulate and plot sticky-particle systems, and compute
//! one-cluster probabilities for the unit-mass ±1 problem.
//!
//! Exit codes: 0 success, 1 validation/domain/guard error, 2 parse error.

mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sticky_core::combinatorics::{
    asymptotic_trend_report, count_paths, count_paths_bruteforce, one_cluster_probability,
    one_cluster_probability_bruteforce, YoungShape,
};
use sticky_core::montecarlo::{sample_cluster_counts_with_workers, McConfig};
use sticky_core::{
    analyze, diagram_svg, predict_clusters, rational_parse, simulate, trajectories_svg,
    ClusterSet, CollisionEvent, DiagramSvgOptions, Error, Rational, TrajectorySvgOptions,
};

use input::{read_particle_file, Format};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::parse(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "sticky", version, about = "Cluster structure of one-dimensional sticky-particle systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict the final clusters from the cumulative momentum diagram.
    Predict {
        input: PathBuf,
        /// Input format; inferred from the file extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact event-driven collision simulation.
    Simulate {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Include the collision event log.
        #[arg(long)]
        events: bool,
        /// Write a trajectory plot.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// End of the plotted time window (rational, > 0).
        #[arg(long = "t-max")]
        t_max: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit diagram points, contacts and polygons; optionally plot them.
    Diagram {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the diagram plot here and a JSON sidecar next to it.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact one-cluster probability for n unit masses with ±1 velocities.
    Prob {
        #[arg(long)]
        n: Option<u32>,
        /// Closed form via lattice-path determinants (the default).
        #[arg(long, conflicts_with = "enumerate")]
        exact: bool,
        /// Enumerate all 2^n velocity sequences instead.
        #[arg(long)]
        enumerate: bool,
        /// CSV table of p_n and n p_n for n = 2 ..= N.
        #[arg(long)]
        table: Option<u32>,
        /// Print decimals with this many digits instead of exact fractions.
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Monte Carlo histogram of cluster counts.
    Mc {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Count North-East lattice paths through a Young diagram.
    Paths {
        /// Comma-separated weakly decreasing row lengths, e.g. "4,2,1,0,0".
        #[arg(long)]
        shape: String,
        /// Use the dynamic-programming count instead of the determinant.
        #[arg(long)]
        bruteforce: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::invalid(format!("cannot write to stdout: {e}")))
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SimulationOutput<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    events: Option<&'a [CollisionEvent]>,
    clusters: &'a [sticky_core::Cluster],
}

#[derive(Serialize)]
struct DiagramSidecar<'a> {
    points: &'a [sticky_core::Point2D],
    contacts: &'a [usize],
    vertices: &'a [usize],
    edge_slopes: &'a [Rational],
    polygons: &'a [sticky_core::Polygon],
    clusters: &'a ClusterSet,
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Predict { input, format, out } => {
            let system = read_particle_file(&input, format)?;
            emit(out.as_deref(), &to_json(&predict_clusters(&system)))
        }
        Command::Simulate {
            input,
            format,
            events,
            svg,
            t_max,
            out,
        } => {
            let t_max = t_max
                .map(|t| {
                    let t = rational_parse(&t)?;
                    if !t.is_positive() {
                        return Err(Failure::invalid(format!("--t-max must be positive, got {t}")));
                    }
                    Ok(t)
                })
                .transpose()?;
            let system = read_particle_file(&input, format)?;
            let result = simulate(&system);
            if let Some(path) = svg {
                let t_max = t_max.unwrap_or_else(|| default_t_max(&result.events));
                let plot = trajectories_svg(&result, &system, &t_max, &TrajectorySvgOptions::default())?;
                write_file(&path, &plot)?;
            }
            let output = SimulationOutput {
                events: events.then_some(result.events.as_slice()),
                clusters: &result.final_clusters.clusters,
            };
            emit(out.as_deref(), &to_json(&output))
        }
        Command::Diagram {
            input,
            format,
            svg,
            out,
        } => {
            let system = read_particle_file(&input, format)?;
            let report = analyze(&system);
            let sidecar = to_json(&DiagramSidecar {
                points: &report.diagram.points,
                contacts: &report.envelope.contact_indices,
                vertices: &report.envelope.vertex_indices,
                edge_slopes: &report.envelope.edge_slopes,
                polygons: &report.polygons.polygons,
                clusters: &report.clusters,
            });
            if let Some(path) = svg {
                write_file(&path, &diagram_svg(&system, &DiagramSvgOptions::default()))?;
                write_file(&path.with_extension("json"), &sidecar)?;
            }
            emit(out.as_deref(), &sidecar)
        }
        Command::Prob {
            n,
            exact: _,
            enumerate,
            table,
            decimal,
        } => {
            if n.is_none() && table.is_none() {
                return Err(Failure::invalid("give --n N and/or --table N"));
            }
            let render = |r: &Rational| match decimal {
                Some(d) => r.to_decimal(d),
                None => r.to_string(),
            };
            let mut text = String::new();
            if let Some(n) = n {
                let p = if enumerate {
                    one_cluster_probability_bruteforce(n)?
                } else {
                    one_cluster_probability(n)?
                };
                text.push_str(&render(&p));
                text.push('\n');
            }
            if let Some(n_max) = table {
                text.push_str(&trend_csv(n_max, decimal.unwrap_or(12))?);
            }
            emit(None, &text)
        }
        Command::Mc {
            n,
            trials,
            seed,
            workers,
        } => {
            if workers == 0 {
                return Err(Failure::invalid("--workers must be at least 1"));
            }
            let config = McConfig::new(n, trials, seed)?;
            let result = sample_cluster_counts_with_workers(&config, workers)?;
            emit(None, &to_json(&result))
        }
        Command::Paths { shape, bruteforce } => {
            let rows = shape
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|e| Failure::parse(format!("bad row length {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let shape = YoungShape::new(rows)?;
            let count = if bruteforce {
                count_paths_bruteforce(&shape)?
            } else {
                count_paths(&shape)
            };
            emit(None, &format!("{count}\n"))
        }
    }
}

/// Half again past the last collision, or 1 when nothing collides.
fn default_t_max(events: &[CollisionEvent]) -> Rational {
    match events.last() {
        Some(e) if e.time.is_positive() => &e.time * Rational::new(3, 2).expect("nonzero"),
        _ => Rational::one(),
    }
}

fn trend_csv(n_max: u32, digits: usize) -> Result<String, Failure> {
    let rows = asymptotic_trend_report(n_max)?;
    let mut out = String::from("n,p,n_times_p,p_decimal,n_times_p_decimal\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.p,
            r.n_times_p,
            r.p.to_decimal(digits),
            r.n_times_p.to_decimal(digits)
        ));
    }
    Ok(out)
}
