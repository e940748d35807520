use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use urn_cli::commands::{
    build_closed_form, cmd_closed_form, cmd_exact, cmd_figures, cmd_series, cmd_simulate, cmd_validate,
    load_scheme, resolve_color, ClosedFormArgs, ClosedFormParams, ExactArgs, Figure, FiguresArgs,
    SchemeSource, SeriesMode, SimulateArgs,
};
use urn_cli::parallel::default_workers;
use urn_cli::preset::parse_counts;
use urn_cli::scheme_file::to_json;
use urn_cli::{CliError, Result};
use urn_core::tenability::DEFAULT_HORIZON;
use urn_core::UrnScheme;

/// Exact distributions, series solutions and simulations for balanced Pólya urns
/// with random replacement rules.
#[derive(Debug, Parser)]
#[command(name = "urn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
struct SchemeArgs {
    /// JSON scheme file
    #[arg(long, group = "source")]
    scheme: Option<PathBuf>,
    /// Built-in scheme, e.g. `polya-friedman:p=2/5` or `binomial:theta=2,p=1/2`
    #[arg(long, group = "source")]
    preset: Option<String>,
}

#[derive(Debug, Args)]
struct Source {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Initial counts, comma separated; overrides the file or preset default
    #[arg(long)]
    initial: Option<String>,
}

impl Source {
    fn load(&self) -> Result<UrnScheme> {
        let source = match (&self.scheme.scheme, &self.scheme.preset) {
            (Some(path), _) => SchemeSource::File(path.clone()),
            (None, Some(spec)) => SchemeSource::Preset(spec.clone()),
            (None, None) => return Err(CliError::Usage("--scheme or --preset is required".into())),
        };
        let initial = self.initial.as_deref().map(parse_counts).transpose()?;
        load_scheme(&source, initial.as_deref())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    EmitSystem,
    EmitQ,
    Check,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a scheme and report its tenability
    Validate {
        #[command(flatten)]
        source: Source,
        /// Draws explored when the balance is positive
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Exact law of one color after n draws, as CSV
    Exact {
        #[command(flatten)]
        source: Source,
        #[arg(short, long)]
        n: usize,
        /// Color index or name
        #[arg(long, default_value = "0")]
        color: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// The associated differential system and its series solution
    Series {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(value_enum)]
        mode: Mode,
    },
    /// Evaluate a closed-form law over its support
    ClosedForm {
        /// coupon-delay | binomial-half | uniform | two-type-coupon-red
        name: String,
        #[arg(short, long)]
        n: u64,
        #[arg(long)]
        b0: Option<u64>,
        #[arg(long)]
        w0: Option<u64>,
        #[arg(long)]
        r0: Option<u64>,
        #[arg(long)]
        g0: Option<u64>,
        #[arg(long)]
        theta: Option<u64>,
        #[arg(long)]
        p: Option<String>,
        /// Compare against the exact engine; exit 3 on any difference
        #[arg(long)]
        check: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Write the data behind the sample-path and limit-shape figures
    Figures {
        #[arg(value_enum)]
        figure: FigureArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// fig1: histories per file
        #[arg(long, default_value_t = 100)]
        histories: u64,
        /// fig1: draws per history
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// fig2: number of draws
        #[arg(short, long, default_value_t = 200)]
        n: usize,
        /// Also write a gnuplot command file
        #[arg(long)]
        gnuplot: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Monte Carlo histogram of one color after n draws
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(short, long)]
        n: usize,
        #[arg(short = 'm', long)]
        histories: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "0")]
        color: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write every trajectory to this CSV file
        #[arg(long)]
        trajectories: Option<PathBuf>,
        /// Skip the exact comparison above this many draws
        #[arg(long, default_value_t = 400)]
        exact_limit: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print a scheme as canonical JSON
    Show {
        #[command(flatten)]
        source: Source,
    },
}

fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<i32> {
    let workers = |w: Option<usize>| w.unwrap_or_else(default_workers).max(1);
    match cli.command {
        Command::Validate { source, horizon } => cmd_validate(&source.load()?, horizon, out),
        Command::Exact { source, n, color, output, workers: w } => {
            let scheme = source.load()?;
            let color = resolve_color(&scheme, &color)?;
            let args = ExactArgs { n, color, workers: workers(w), output };
            cmd_exact(&scheme, &args, out, log)
        }
        Command::Series { source, order, mode } => {
            let mode = match mode {
                Mode::EmitSystem => SeriesMode::EmitSystem,
                Mode::EmitQ => SeriesMode::EmitQ,
                Mode::Check => SeriesMode::Check,
            };
            cmd_series(&source.load()?, order, mode, out)
        }
        Command::ClosedForm { name, n, b0, w0, r0, g0, theta, p, check, output, workers: w } => {
            let params = ClosedFormParams { b0, w0, r0, g0, theta, p };
            let form = build_closed_form(&name, &params)?;
            let args = ClosedFormArgs { n, check, workers: workers(w), output };
            cmd_closed_form(&form, &args, out, log)
        }
        Command::Figures { figure, out_dir, seed, histories, steps, n, gnuplot, workers: w } => {
            let figure = match figure {
                FigureArg::Fig1 => Figure::Fig1,
                FigureArg::Fig2 => Figure::Fig2,
            };
            let args = FiguresArgs { figure, out_dir, seed, histories, steps, n, workers: workers(w), gnuplot };
            cmd_figures(&args, out)
        }
        Command::Simulate { source, n, histories, seed, color, output, trajectories, exact_limit, workers: w } => {
            let scheme = source.load()?;
            let color = resolve_color(&scheme, &color)?;
            let args = SimulateArgs {
                n,
                histories,
                seed,
                color,
                workers: workers(w),
                exact_limit,
                output,
                trajectories,
            };
            cmd_simulate(&scheme, &args, out, log)
        }
        Command::Show { source } => {
            let json = serde_json::to_string_pretty(&to_json(&source.load()?)).expect("json value");
            writeln!(out, "{json}")?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors as 2, which here means an untenable scheme
            return ExitCode::from(if e.use_stderr() { urn_cli::exit::INPUT as u8 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut log = stderr.lock();
    let code = match run(cli, &mut out, &mut log) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            let _ = writeln!(log, "error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
