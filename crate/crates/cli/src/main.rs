//! `pdc`: batch computations for heralded-photon purity studies. Every
//! subcommand writes CSV data and its resolved configuration to `--out`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pdc_core::PefShape;

mod commands;
mod config;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration. Exit code 2.
    Usage(String),
    /// The computation itself failed. Exit code 1.
    Numeric(pdc_core::Error),
}

impl From<pdc_core::Error> for CliError {
    fn from(e: pdc_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numeric(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "pdc",
    version,
    about = "Spectral purity of heralded photons from parametric downconversion"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Pump envelope shape.
    #[arg(long, global = true)]
    pef: Option<PefShape>,
    /// Phase-matching function: gaussian, sinc or custom:<pattern file>.
    #[arg(long, global = true)]
    pmf: Option<String>,
    /// PMF to PEF width ratio. Defaults to the shape pair's optimum.
    #[arg(long, global = true)]
    xi: Option<f64>,
    /// Pump chirp k w^2.
    #[arg(long, global = true)]
    kw2: Option<f64>,
    /// Spectral range in units of the marginal photon FWHM.
    #[arg(long, global = true)]
    zeta: Option<f64>,
    /// Grid bins per axis.
    #[arg(long, global = true)]
    bins: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads. Defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// JSON file whose keys override the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal xi and maximum purity for every PEF/PMF pair.
    Table1,
    /// Purity against xi.
    XiSweep {
        #[arg(long = "xi-values", value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Separability-optimal KTP crystal length against pump duration.
    CrystalLength {
        /// Pump intensity FWHM durations in fs.
        #[arg(long = "durations", value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Purity against pump chirp at the optimal xi.
    ChirpSweep {
        #[arg(long = "kw2-values", value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Fabrication-error Monte Carlo for the three poling methods.
    PolingErrors {
        /// over-poling, wall-jitter, missed-domains or all.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// |PMF| over a wide mismatch interval for each poling method.
    PmfSurvey {
        #[arg(long)]
        points: Option<usize>,
        /// Interval start in units of pi / l_c.
        #[arg(long)]
        dk_min: Option<f64>,
        /// Interval end in units of pi / l_c.
        #[arg(long)]
        dk_max: Option<f64>,
    },
    /// Purity against spectral range at fixed resolutions.
    RangeSweep {
        #[arg(long = "zeta-values", value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long = "bins-values", value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Purity against resolution at fixed spectral ranges.
    ResolutionSweep {
        #[arg(long = "zeta-values", value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long = "bins-values", value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Purity over a (zeta, N) grid plus the high-accuracy reference value.
    PurityMap {
        #[arg(long)]
        zeta_max: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        zeta_points: Option<usize>,
        #[arg(long)]
        n_points: Option<usize>,
        /// Reference on the cheaper 1000-bin grid.
        #[arg(long)]
        fast: bool,
    },
    /// Poissonian counting noise on a measured JSI.
    JsiCounts {
        #[arg(long, value_delimiter = ',')]
        max_counts: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Hong-Ou-Mandel pattern between two identical heralded sources.
    Hom {
        /// Number of delay points.
        #[arg(long)]
        points: Option<usize>,
    },
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let c = self.common;
        let mut cfg = RunConfig {
            pef: c.pef,
            pmf: c.pmf,
            xi: c.xi,
            kw2: c.kw2,
            zeta: c.zeta,
            bins: c.bins,
            seed: c.seed,
            threads: c.threads,
            out: c.out,
            ..Default::default()
        };
        cfg.command = match self.command {
            Command::Table1 => "table1",
            Command::XiSweep { values } => {
                cfg.values = values;
                "xi-sweep"
            }
            Command::CrystalLength { values } => {
                cfg.values = values;
                "crystal-length"
            }
            Command::ChirpSweep { values } => {
                cfg.values = values;
                "chirp-sweep"
            }
            Command::PolingErrors {
                kind,
                levels,
                trials,
            } => {
                cfg.kind = kind;
                cfg.levels = levels;
                cfg.trials = trials;
                "poling-errors"
            }
            Command::PmfSurvey {
                points,
                dk_min,
                dk_max,
            } => {
                cfg.points = points;
                cfg.dk_min = dk_min;
                cfg.dk_max = dk_max;
                "pmf-survey"
            }
            Command::RangeSweep { values, sizes } => {
                cfg.values = values;
                cfg.sizes = sizes;
                "range-sweep"
            }
            Command::ResolutionSweep { values, sizes } => {
                cfg.values = values;
                cfg.sizes = sizes;
                "resolution-sweep"
            }
            Command::PurityMap {
                zeta_max,
                n_max,
                zeta_points,
                n_points,
                fast,
            } => {
                cfg.zeta_max = zeta_max;
                cfg.n_max = n_max;
                cfg.zeta_points = zeta_points;
                cfg.n_points = n_points;
                cfg.fast = fast;
                "purity-map"
            }
            Command::JsiCounts { max_counts, trials } => {
                cfg.max_counts = max_counts;
                cfg.trials = trials;
                "jsi-counts"
            }
            Command::Hom { points } => {
                cfg.points = points;
                "hom"
            }
        }
        .to_owned();
        match c.config {
            Some(path) => cfg.merge_file(&path),
            None => Ok(cfg),
        }
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let cfg = cli.into_config()?;
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    commands::run(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
