//! `dspace`: depth-from-outside analysis of axial maps and Hotelling
//! linear-city equilibria from the command line.

mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dspace_core::hotelling::{DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use dspace_core::mapfile::{self, InputFormat, ParseOptions};
use dspace_core::{
    best_response_solve, equilibrium, graph_from_facts, site_score, syntax_report, BandThresholds,
    MarketConfig, SyntaxReport, DEFAULT_ROOT,
};

use error::{CliError, EXIT_USAGE};
use output::{
    render, AnalyzeResult, DValueResult, EquilibriumView, HotellingResult, MarketView, Meta,
    OutputFormat, Payload, SiteScoreResult,
};

#[derive(Parser, Debug)]
#[command(
    name = "dspace",
    version,
    about = "Space-syntax depth and d-value analysis"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Omit run metadata (version, input digest, timestamp).
    #[arg(long, global = true)]
    no_meta: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Depth from the root and d-value of every space.
    Analyze(MapArgs),
    /// Depth and d-value of a single space.
    Dvalue {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        space: String,
    },
    /// Spaces ranked by closeness of their d-value to 1.
    SiteScore {
        #[command(flatten)]
        map: MapArgs,
        /// Number of spaces to list.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        top: u32,
        /// d-values below this are labelled end-of-settlement.
        #[arg(long, default_value_t = 0.5)]
        low_band: f64,
        /// d-values above this are labelled central.
        #[arg(long, default_value_t = 1.5)]
        high_band: f64,
    },
    /// Price equilibrium of the two-store linear city.
    #[command(allow_negative_numbers = true)]
    Hotelling {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Mode::Closed)]
        mode: Mode,
        /// Price tolerance for the numeric solver.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: u32,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Connectivity file (.pl facts or .csv edge list).
    map: PathBuf,
    /// Name of the carrier space.
    #[arg(long, default_value = DEFAULT_ROOT)]
    root: String,
    /// Override format detection by file extension.
    #[arg(long, value_enum)]
    input_format: Option<InputKind>,
    /// Reject whitespace inside facts.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputKind {
    Pl,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Closed,
    Numeric,
    Both,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Closed => "closed",
            Mode::Numeric => "numeric",
            Mode::Both => "both",
        }
    }
}

struct Loaded {
    report: SyntaxReport,
    meta: Meta,
}

fn load(args: &MapArgs) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(&args.map).map_err(|source| CliError::Read {
        path: args.map.clone(),
        source,
    })?;
    let format = match args.input_format {
        Some(InputKind::Pl) => InputFormat::Prolog,
        Some(InputKind::Csv) => InputFormat::Csv,
        None => InputFormat::from_path(&args.map)
            .ok_or_else(|| CliError::UnknownInputFormat(args.map.clone()))?,
    };
    let text = String::from_utf8_lossy(&bytes);
    let options = ParseOptions {
        strict: args.strict,
    };
    let (facts, diagnostics) = match mapfile::parse(&text, format, options) {
        Ok(parsed) => parsed,
        Err(source) => {
            report_line_errors(&args.map, &source.diagnostics().errors);
            return Err(CliError::Parse {
                path: args.map.clone(),
                source,
            });
        }
    };
    report_line_errors(&args.map, &diagnostics.errors);

    let graph = graph_from_facts(&facts, &args.root)?;
    let report = syntax_report(&graph)?;
    Ok(Loaded {
        report,
        meta: Meta::new(&bytes),
    })
}

fn report_line_errors(path: &Path, errors: &[mapfile::LineError]) {
    for e in errors {
        eprintln!("warning: {}: {e}", path.display());
    }
}

fn emit<T: Payload>(payload: &T, cli: &Cli, meta: &Meta) {
    let meta = (!cli.no_meta).then_some(meta);
    print!("{}", render(payload, cli.format, meta));
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(map) => {
            let loaded = load(map)?;
            emit(&AnalyzeResult::from(&loaded.report), cli, &loaded.meta);
        }
        Command::Dvalue { map, space } => {
            let loaded = load(map)?;
            if *space == map.root {
                return Err(CliError::RootHasNoDValue(space.clone()));
            }
            let row = loaded
                .report
                .row(space)
                .ok_or_else(|| dspace_core::GraphError::UnknownSpace(space.clone()))?;
            let result = DValueResult {
                space: row.space.to_string(),
                depth_from_outside: row.depth_from_outside,
                md_o: loaded.report.md_o,
                d_value: row.d_value,
            };
            emit(&result, cli, &loaded.meta);
        }
        Command::SiteScore {
            map,
            top,
            low_band,
            high_band,
        } => {
            let loaded = load(map)?;
            let bands = BandThresholds {
                low: *low_band,
                high: *high_band,
            };
            let ranked = site_score(&loaded.report, &bands);
            let result = SiteScoreResult::new(&loaded.report, &ranked, *top as usize);
            emit(&result, cli, &loaded.meta);
        }
        Command::Hotelling {
            l,
            a,
            b,
            c,
            mode,
            tol,
            max_iter,
        } => {
            let market = MarketConfig::new(*l, *a, *b, *c).map_err(CliError::Market)?;
            let closed = matches!(mode, Mode::Closed | Mode::Both).then(|| equilibrium(&market));
            let numeric = if matches!(mode, Mode::Numeric | Mode::Both) {
                Some(best_response_solve(&market, *tol, *max_iter).map_err(CliError::Market)?)
            } else {
                None
            };
            let max_discrepancy = match (&closed, &numeric) {
                (Some(x), Some(y)) => Some(
                    (x.prices.p1 - y.prices.p1)
                        .abs()
                        .max((x.prices.p2 - y.prices.p2).abs()),
                ),
                _ => None,
            };
            let result = HotellingResult {
                mode: mode.as_str(),
                market: MarketView::from(&market),
                closed: closed.as_ref().map(EquilibriumView::from),
                numeric: numeric.as_ref().map(EquilibriumView::from),
                max_discrepancy,
            };
            let params = format!("l={l},a={a},b={b},c={c}");
            emit(&result, cli, &Meta::new(params.as_bytes()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
