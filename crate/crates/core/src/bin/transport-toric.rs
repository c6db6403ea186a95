use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use transport_toric::pipeline::{Mode, OrderChoice};
use transport_toric::report::{
    analyze, lattice_points_report, markov_report, subdivide_report, triangulate_report, verify_report, PipelineOptions, Report,
};
use transport_toric::verify::{verify, Section, VerifyOptions};
use transport_toric::{Error, Margins};

#[derive(Parser)]
#[command(name = "transport-toric", version, about = "Lattice points, subdivisions, triangulations and toric ideals of transportation polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Emit key-sorted JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args)]
struct MarginArgs {
    /// Row sums, comma separated.
    #[arg(long)]
    rows: String,
    /// Column sums, comma separated.
    #[arg(long)]
    cols: String,
}

#[derive(Subcommand)]
enum Command {
    /// Smoothness, subdivision, triangulation and ideal of one polytope.
    Analyze {
        #[command(flatten)]
        margins: MarginArgs,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value = "v")]
        order: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// All lattice points, in lexicographic order.
    LatticePoints {
        #[command(flatten)]
        margins: MarginArgs,
        #[command(flatten)]
        common: Common,
    },
    /// The fine or coarse width-one subdivision.
    Subdivide {
        #[command(flatten)]
        margins: MarginArgs,
        #[arg(long)]
        mode: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Pull every cell of a subdivision. `--order` is v, lex or a file of indices.
    Triangulate {
        #[command(flatten)]
        margins: MarginArgs,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value = "v")]
        order: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Is the toric ideal generated by quadrics, checked to a degree.
    Markov {
        #[command(flatten)]
        margins: MarginArgs,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute the reference tables and claims.
    VerifyPaper {
        #[arg(long, default_value = "all")]
        section: String,
        #[arg(long, default_value_t = 8)]
        max_sum: u64,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_list(s: &str, what: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| Error::InvalidInput(format!("{what}: {x:?} is not a positive integer"))))
        .collect()
}

fn margins(a: &MarginArgs) -> Result<Margins, Error> {
    Margins::new(parse_list(&a.rows, "--rows")?, parse_list(&a.cols, "--cols")?)
}

fn mode(s: &Option<String>) -> Result<Option<Mode>, Error> {
    s.as_deref().map(str::parse).transpose()
}

fn order(s: &str) -> Result<OrderChoice, Error> {
    match s {
        "v" => Ok(OrderChoice::V),
        "lex" => Ok(OrderChoice::Lex),
        path => {
            let text = std::fs::read_to_string(PathBuf::from(path))
                .map_err(|e| Error::InvalidInput(format!("--order: expected v, lex or a readable file ({path}: {e})")))?;
            let perm = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidInput(format!("--order file: {t:?} is not an index"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(OrderChoice::Explicit(perm))
        }
    }
}

fn run(cli: Cli) -> Result<(Report, bool), Error> {
    let (report, json) = match cli.command {
        Command::Analyze { margins: m, mode: md, order: o, max_degree, common } => {
            let opts = PipelineOptions { mode: mode(&md)?, order: order(&o)?, max_degree, certificate: true };
            (analyze(&margins(&m)?, &opts)?, common.json)
        }
        Command::LatticePoints { margins: m, common } => (lattice_points_report(&margins(&m)?)?, common.json),
        Command::Subdivide { margins: m, mode: md, common } => (subdivide_report(&margins(&m)?, mode(&md)?)?, common.json),
        Command::Triangulate { margins: m, mode: md, order: o, max_degree, common } => {
            let opts = PipelineOptions { mode: mode(&md)?, order: order(&o)?, max_degree, certificate: true };
            (triangulate_report(&margins(&m)?, &opts)?, common.json)
        }
        Command::Markov { margins: m, max_degree, common } => (markov_report(&margins(&m)?, max_degree)?, common.json),
        Command::VerifyPaper { section, max_sum, max_degree, common } => {
            let section: Section = section.parse()?;
            (verify_report(verify(section, VerifyOptions { max_sum, max_degree })?), common.json)
        }
    };
    Ok((report, json))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((report, json)) => {
            print!("{}", if json { report.to_json() } else { report.to_text() });
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                for c in report.failures() {
                    eprintln!("FAILED {}: {}\n  witness: {}", c.anchor, c.claim, c.witness);
                }
                ExitCode::from(1)
            }
        }
        Err(e @ Error::InvalidInput(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
