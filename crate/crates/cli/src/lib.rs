//! The `dqm` command line.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use dqm_core::Error;

pub use config::{Format, JobConfig};

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const UNRESOLVED: i32 = 3;
    pub const VERIFY_FAILED: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "dqm", version, about = "Exact computation with Drinfeld quasi-modular forms over F_q(T)")]
pub struct Cli {
    /// Characteristic of the constant field.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u32,
    /// Extension degree, q = p^e.
    #[arg(long, global = true, default_value_t = 1)]
    pub e: u32,
    /// Modulus of F_q over F_p as coefficients, constant term first (e.g. 1,1,1).
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Directory for cached Taylor tables.
    #[arg(long, global = true, env = "DQM_CACHE_DIR")]
    pub cache: Option<PathBuf>,
    /// Do not read or write cached tables.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest u-precision tried by adaptive searches.
    #[arg(long, global = true, default_value_t = dqm_core::forms::NuPolicy::DEFAULT_CAP)]
    pub precision_cap: usize,
    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// u-expansion of a form.
    Expand {
        #[arg(long)]
        expr: String,
        /// Number of coefficients; an integer expression in q.
        #[arg(long, default_value = "4*q")]
        prec: String,
        /// Print the order of vanishing instead of the series.
        #[arg(long)]
        nu: bool,
    },
    /// Hyperderivative D_n, or the Serre operator of degree d with --serre.
    Derive {
        #[arg(long)]
        expr: String,
        /// Order of the derivative; an integer expression in q.
        #[arg(long)]
        n: String,
        #[arg(long)]
        serre: Option<String>,
    },
    /// Truncated Taylor expansion T_X(f).
    Taylor {
        #[arg(long)]
        target: String,
        /// Work modulo X^(q^stage).
        #[arg(long, default_value_t = 1, conflicts_with = "xprec")]
        stage: u32,
        /// Work modulo X^xprec.
        #[arg(long)]
        xprec: Option<usize>,
    },
    /// Members of one of the sequences g, h, x, y, xi, eta.
    Seq {
        name: String,
        #[arg(long, default_value_t = 0)]
        from: u32,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Also compute orders of vanishing.
        #[arg(long)]
        nu: bool,
        /// Also compute differential exponents.
        #[arg(long)]
        epsilon: bool,
    },
    /// Order of vanishing, leading coefficient and multiplicity bounds.
    Nu {
        #[arg(long)]
        expr: String,
    },
    /// Extremal form of the space of weight w, type m and depth at most l.
    Extremal {
        #[arg(long)]
        w: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        l: String,
    },
    /// Orders of vanishing attained in a graded space.
    Spectrum {
        #[arg(long)]
        w: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        l: String,
    },
    /// Extremal cells for k <= kmax and l <= lmax against their predicted forms.
    Table {
        #[arg(long, default_value_t = 1)]
        kmax: u32,
        #[arg(long, default_value = "q+1")]
        lmax: String,
        /// Skip differential exponents.
        #[arg(long)]
        no_epsilon: bool,
    },
    /// Built-in identity checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Run only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fast,
    Full,
    Paper,
}

impl Cli {
    pub fn config(&self) -> Result<JobConfig, Error> {
        let modulus = self.modulus.as_deref().map(config::parse_modulus).transpose()?;
        let cache_dir = if self.no_cache { None } else { self.cache.clone().or_else(config::default_cache_dir) };
        let cfg = JobConfig {
            p: self.p,
            e: self.e,
            modulus,
            cache_dir,
            precision_cap: self.precision_cap,
            format: self.format,
            jobs: self.jobs,
            progress: !self.quiet,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidField(_) | Error::InvalidArgument(_) | Error::DivisionByZero => exit::USAGE,
        Error::Unresolved { .. } | Error::Precision(_) => exit::UNRESOLVED,
        _ => exit::INTERNAL,
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    let result = cli.config().and_then(|cfg| {
        if let Some(n) = cfg.jobs {
            // Fails only if a pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        commands::dispatch(&cli.command, &cfg)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
