//! `peerstat` command-line front end.
//!
//! [`run`] is the whole program minus process plumbing so it can be driven
//! from tests with in-memory writers.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use peerstat_core::{
    bootstrap_corr_ci, boxplots_by_quality, histogram, idealized_sort_benchmark, mean_differences,
    parse_dataset, partition_by_quality, ratio_claim, table1_with, validate_dataset, adler_tau,
    spearman, BootstrapConfig, CiMethod, ColumnOrder, CorrelationMethod, Dataset, Error,
    ParseOptions, SdConvention,
};

use crate::report::{
    CorrelationsSection, DiffsSection, FiguresSection, RatioClaim, Redraws, Report, Table1Section,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "peerstat",
    version,
    about = "Compare a citation indicator with ordinal peer-review scores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the input file and count groups per quality score
    Validate(Options),
    /// Median, mean, standard deviation and bootstrap CI of the mean per quality score
    Table1(Options),
    /// Differences in mean between consecutive quality scores, plus the top-two ratio
    Diffs(Options),
    /// Spearman and Adler rank correlations with bootstrap CIs
    Correlations(Options),
    /// Group means after reassigning scores to the sorted indicator values
    Counterfactual(Options),
    /// Box-plot and stacked-histogram data
    Figures(Options),
    /// Every section above
    All(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CiArg {
    Percentile,
    Bca,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SdArg {
    Sample,
    Population,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColumnsArg {
    Auto,
    IndicatorFirst,
    QualityFirst,
}

#[derive(Debug, Args)]
struct Options {
    /// Two-column data file (indicator, quality score)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    replicates: usize,
    /// Confidence level in (0, 1)
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, value_enum, default_value_t = CiArg::Percentile)]
    ci_method: CiArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0.25)]
    bin_width: f64,
    #[arg(long, default_value_t = 0.0)]
    bin_origin: f64,
    #[arg(long, value_enum, default_value_t = SdArg::Sample)]
    sd: SdArg,
    /// Column roles in the input file
    #[arg(long, value_enum, default_value_t = ColumnsArg::Auto)]
    columns: ColumnsArg,
    /// Bootstrap worker threads (0 = all cores); output does not depend on it
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl Options {
    fn bootstrap(&self) -> BootstrapConfig {
        BootstrapConfig {
            replicates: self.replicates,
            level: self.level,
            seed: self.seed,
            method: match self.ci_method {
                CiArg::Percentile => CiMethod::Percentile,
                CiArg::Bca => CiMethod::Bca,
            },
            workers: self.workers,
        }
    }

    fn sd_convention(&self) -> SdConvention {
        match self.sd {
            SdArg::Sample => SdConvention::Sample,
            SdArg::Population => SdConvention::Population,
        }
    }

    fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            columns: match self.columns {
                ColumnsArg::Auto => ColumnOrder::Auto,
                ColumnsArg::IndicatorFirst => ColumnOrder::IndicatorFirst,
                ColumnsArg::QualityFirst => ColumnOrder::QualityFirst,
            },
            source_label: Some(self.input.display().to_string()),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = format!("{}: {e}", e.kind());
        match e {
            Error::InvalidConfig(_) => Failure::Usage(message),
            _ => Failure::Data(message),
        }
    }
}

#[derive(Clone, Copy)]
struct Sections {
    validation: bool,
    table1: bool,
    diffs: bool,
    correlations: bool,
    counterfactual: bool,
    figures: bool,
}

impl Sections {
    const NONE: Sections = Sections {
        validation: false,
        table1: false,
        diffs: false,
        correlations: false,
        counterfactual: false,
        figures: false,
    };
}

fn split(command: Command) -> (Options, Sections) {
    let none = Sections::NONE;
    match command {
        Command::Validate(o) => (o, Sections { validation: true, ..none }),
        Command::Table1(o) => (o, Sections { table1: true, ..none }),
        Command::Diffs(o) => (o, Sections { diffs: true, ..none }),
        Command::Correlations(o) => (o, Sections { correlations: true, ..none }),
        Command::Counterfactual(o) => (o, Sections { counterfactual: true, ..none }),
        Command::Figures(o) => (o, Sections { figures: true, ..none }),
        Command::All(o) => (
            o,
            Sections {
                validation: true,
                table1: true,
                diffs: true,
                correlations: true,
                counterfactual: true,
                figures: true,
            },
        ),
    }
}

fn load(opts: &Options) -> Result<Dataset, Failure> {
    let text = std::fs::read_to_string(&opts.input)
        .map_err(|e| Failure::Data(format!("cannot read {}: {e}", opts.input.display())))?;
    parse_dataset(&text, &opts.parse_options()).map_err(Failure::from)
}

fn diffs_section(d: &Dataset, cfg: &BootstrapConfig) -> Result<DiffsSection, Failure> {
    let differences = mean_differences(d, cfg)?;
    let groups: Vec<_> = partition_by_quality(d).into_iter().collect();
    let ratio = match groups.as_slice() {
        [.., (lo_q, lo), (hi_q, hi)] => {
            let mean_hi = peerstat_core::summarize(hi)?.mean;
            let mean_lo = peerstat_core::summarize(lo)?.mean;
            Some(RatioClaim {
                group_hi: *hi_q,
                group_lo: *lo_q,
                mean_hi,
                mean_lo,
                ratio: ratio_claim(mean_hi, mean_lo)?,
            })
        }
        _ => None,
    };
    Ok(DiffsSection { differences, ratio })
}

fn correlations_section(d: &Dataset, cfg: &BootstrapConfig) -> Result<CorrelationsSection, Failure> {
    let x = d.indicators();
    let y = d.qualities();
    let pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    let mut rho = spearman(&x, &y)?;
    let mut tau = adler_tau(&x, &y)?;
    let rho_ci = bootstrap_corr_ci(&pairs, CorrelationMethod::Spearman, cfg)?;
    let tau_ci = bootstrap_corr_ci(&pairs, CorrelationMethod::Adler, cfg)?;
    rho.ci = Some(rho_ci.ci);
    tau.ci = Some(tau_ci.ci);
    Ok(CorrelationsSection {
        n: d.len(),
        spearman: rho,
        adler: tau,
        redraws: Redraws {
            spearman: rho_ci.redraws,
            adler: tau_ci.redraws,
        },
    })
}

fn build(opts: &Options, sections: Sections, d: &Dataset) -> Result<Report, Failure> {
    let cfg = opts.bootstrap();
    cfg.validate()?;
    let mut report = Report::default();
    if sections.validation {
        report.validation = Some(validate_dataset(d));
    }
    if sections.table1 {
        report.table1 = Some(Table1Section {
            rows: table1_with(d, &cfg, opts.sd_convention())?,
        });
    }
    if sections.diffs {
        report.diffs = Some(diffs_section(d, &cfg)?);
    }
    if sections.correlations {
        report.correlations = Some(correlations_section(d, &cfg)?);
    }
    if sections.counterfactual {
        report.counterfactual = Some(idealized_sort_benchmark(d));
    }
    if sections.figures {
        report.figures = Some(FiguresSection {
            boxplots: boxplots_by_quality(d)?,
            histogram: histogram(d, opts.bin_width, opts.bin_origin)?,
        });
    }
    Ok(report)
}

fn render(report: &Report, format: Format) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Csv => Ok(report.to_csv()),
        Format::Json => report.to_json().map_err(|e| Failure::Internal(format!("json: {e}"))),
    }
}

fn execute(opts: Options, sections: Sections, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let dataset = load(&opts)?;
    for notice in dataset.notices() {
        let _ = writeln!(err, "note: {notice}");
    }
    let report = build(&opts, sections, &dataset)?;
    let rendered = render(&report, opts.format)?;
    out.write_all(rendered.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Internal(format!("write failed: {e}")))
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (opts, sections) = split(cli.command);
    match execute(opts, sections, out, err) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}
