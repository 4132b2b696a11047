use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sixj::analysis::records::{AsymptoticRow, GeometryRow, RecursionRow, SixjRow};
use sixj::analysis::{
    attach_fits, fit_dl_coefficients, parse_scales, run_identity_suite, scan_asymptotics, write_records,
    OutputFormat, Record, ScaleMode, ToolkitError,
};
use sixj::asymptotics::pr_leading;
use sixj::geometry::{build_geometry, EdgeLengths};
use sixj::recursion::{recursion_residual, Normalization};
use sixj::{sixj_exact, SixJLabels};

#[derive(Parser)]
#[command(name = "sixj", version, about = "Exact and asymptotic 6j symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Spins,
    Lengths,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    ThetaGraph,
    WithEdgeFactors,
}

#[derive(Args)]
struct LabelArg {
    /// j12,j13,j14,j23,j24,j34 as integers, fractions (3/2) or decimals (1.5).
    #[arg(long)]
    labels: String,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    labels: LabelArg,
    /// Comma list and inclusive ranges, e.g. `8..512` or `1,2,4`.
    #[arg(long)]
    scales: String,
    #[arg(long, value_enum, default_value = "spins")]
    mode: Mode,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value.
    Sixj(LabelArg),
    /// Tetrahedron with edge lengths j + 1/2.
    Geom(LabelArg),
    /// Leading asymptotics next to the exact value.
    Asympt(LabelArg),
    /// Scaling sweep of exact against leading order.
    Scan(SweepArgs),
    /// Windowed fits of the cosine and sine coefficients over a sweep.
    FitDl {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = 16)]
        window: usize,
        /// Emit the rows with their window's coefficients instead of one line per window.
        #[arg(long)]
        rows: bool,
    },
    /// Residual of the shift-operator recursion.
    Recursion {
        #[command(flatten)]
        labels: LabelArg,
        #[arg(long, value_enum, default_value = "theta-graph")]
        normalization: Norm,
    },
    /// Randomized identity suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn labels(arg: &LabelArg) -> Result<SixJLabels, ToolkitError> {
    Ok(SixJLabels::parse(&arg.labels)?)
}

fn sweep(args: &SweepArgs) -> Result<Vec<sixj::analysis::ScanRow>, ToolkitError> {
    let scales = parse_scales(&args.scales).map_err(ToolkitError::Usage)?;
    let mode = match args.mode {
        Mode::Spins => ScaleMode::Spins,
        Mode::Lengths => ScaleMode::Lengths,
    };
    Ok(scan_asymptotics(&labels(&args.labels)?, &scales, mode)?)
}

fn emit<R: Record>(rows: &[R], cli: &Cli) -> Result<(), ToolkitError> {
    let format = match cli.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(sixj::analysis::RecordError::from)?)),
        None => Box::new(io::stdout().lock()),
    };
    Ok(write_records(rows, format, out)?)
}

fn run(cli: &Cli) -> Result<(), ToolkitError> {
    match &cli.command {
        Command::Sixj(arg) => emit(&[SixjRow::new(&labels(arg)?)], cli),
        Command::Geom(arg) => {
            let g = build_geometry(&EdgeLengths::new(labels(arg)?.lengths())?)?;
            emit(&[GeometryRow::from(&g)], cli)
        }
        Command::Asympt(arg) => {
            let l = labels(arg)?;
            let breakdown = pr_leading(&l)?;
            emit(&[AsymptoticRow { exact: sixj_exact(&l).to_f64(), labels: l, breakdown }], cli)
        }
        Command::Scan(args) => emit(&sweep(args)?, cli),
        Command::FitDl { sweep: args, window, rows } => {
            let mut scan = sweep(args)?;
            let fits = fit_dl_coefficients(&scan, *window)?;
            if *rows {
                attach_fits(&mut scan, &fits, *window);
                emit(&scan, cli)
            } else {
                emit(&fits, cli)
            }
        }
        Command::Recursion { labels: arg, normalization } => {
            let l = labels(arg)?;
            let conv = match normalization {
                Norm::ThetaGraph => Normalization::ThetaGraph,
                Norm::WithEdgeFactors => Normalization::WithEdgeFactors,
            };
            let report = recursion_residual(&l, conv)?;
            emit(&[RecursionRow { labels: l, report }], cli)
        }
        Command::Verify { seed, trials } => {
            let report = run_identity_suite(*seed, *trials);
            emit(&report.outcomes, cli)?;
            eprint!("{report}");
            if report.passed() {
                Ok(())
            } else {
                let names: Vec<&str> = report.failures().iter().map(|o| o.name.as_str()).collect();
                Err(ToolkitError::Verification(names.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
