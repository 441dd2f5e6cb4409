//! Command-line reports for the `d`-dimensional Coulomb problem.
//!
//! [`run`] parses arguments, dispatches to [`commands`] and returns the bytes
//! for stdout and stderr plus the exit code, so the binary is a thin shell
//! and the whole interface is testable in-process.

pub mod commands;
pub mod report;
pub mod verify;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use coulomb_nd_core::PhysicalParams;

use crate::commands::Failure;
use crate::report::{Format, ReportConfig};
use crate::verify::{Suite, Tolerances, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "coulomb-nd", version, about = "Spectrum, degeneracies, harmonics and radial states of the d-dimensional Coulomb problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Significant digits of floating-point fields.
    #[arg(long, default_value_t = ReportConfig::DEFAULT_PRECISION, global = true,
          value_parser = clap::value_parser!(u8).range(4..=17))]
    pub precision: u8,
    /// Reduced mass μ.
    #[arg(long, default_value_t = 1.0, global = true, allow_negative_numbers = true)]
    pub mu: f64,
    /// Coupling k of the potential −k/r.
    #[arg(long, default_value_t = 1.0, global = true, allow_negative_numbers = true)]
    pub k: f64,
    /// Action quantum ħ.
    #[arg(long, default_value_t = 1.0, global = true, allow_negative_numbers = true)]
    pub hbar: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies, degeneracies and Casimir eigenvalues for n = 0..=n-max.
    Spectrum {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=1000))]
        d: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Degeneracy of level n split by angular degree, or the full state list.
    Degeneracy {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=1000))]
        d: u32,
        #[arg(long)]
        n: u32,
        /// List every angular chain of the level.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate one harmonic at a point, or the Gram matrix up to a degree.
    Harmonic {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=64))]
        d: u32,
        /// Ladder highest-first with optional sign, e.g. `2,1,1,+`.
        #[arg(long, requires = "theta", conflicts_with = "l_max")]
        chain: Option<String>,
        /// Angles θ₁,…,θ_{d−1}, comma-separated.
        #[arg(long, requires = "chain", allow_hyphen_values = true)]
        theta: Option<String>,
        /// Gram matrix of all chains with degree ≤ l-max.
        #[arg(long, required_unless_present = "chain")]
        l_max: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-difference radial eigenvalues against the closed form.
    Radial {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=64))]
        d: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 3)]
        states: u32,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the property suites; exits 1 if any check fails.
    Verify {
        /// Restrict every suite to one dimension.
        #[arg(long)]
        d: Option<u32>,
        /// Largest level for the exact suites.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=50))]
        n_max: u32,
        /// Angular degree cap for the eigenvalue and orthonormality suites.
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=6))]
        l_max: Option<u32>,
        /// Threshold override, `VALUE` for all checks or `CHECK=VALUE`.
        #[arg(long)]
        tolerance: Vec<String>,
        /// Run only these suites.
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        #[command(flatten)]
        common: Common,
    },
}

/// Bytes to print and the exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Invocation {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: 0 }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Invocation::ok(e.to_string());
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("error: invalid arguments");
            return Invocation { stdout: String::new(), stderr: format!("{line}\n"), code: 2 };
        }
    };
    let (common, result) = dispatch(cli.command);
    match result {
        Ok(report) => Invocation::ok(report.render(common.format)),
        Err(f) => {
            let code = f.exit_code();
            let (msg, stdout) = match f {
                Failure::Usage(m) => (m, String::new()),
                Failure::Refused(m, out) => (m, out.unwrap_or_default()),
            };
            Invocation { stdout, stderr: format!("error: {}\n", msg.replace('\n', " ")), code }
        }
    }
}

fn dispatch(command: Command) -> (ReportConfig, commands::Outcome) {
    let (common, result) = match command {
        Command::Spectrum { d, n_max, common } => {
            let cfg = config(&common);
            let r = params(&common).and_then(|p| commands::spectrum(d, n_max, p, &cfg));
            (cfg, r)
        }
        Command::Degeneracy { d, n, list, common } => {
            let cfg = config(&common);
            let r = params(&common).and_then(|_| commands::degeneracy_table(d, n, list));
            (cfg, r)
        }
        Command::Harmonic { d, chain, theta, l_max, common } => {
            let cfg = config(&common);
            let r = params(&common).and_then(|_| match (chain, theta, l_max) {
                (Some(c), Some(t), None) => commands::harmonic_point(d, &c, &t, &cfg),
                (None, None, Some(l)) => commands::harmonic_gram(d, l, &cfg),
                _ => Err(Failure::Usage("use either --chain with --theta, or --l-max".into())),
            });
            (cfg, r)
        }
        Command::Radial { d, l, states, r_max, grid_points, common } => {
            let cfg = config(&common);
            let r = params(&common)
                .and_then(|p| commands::radial(d, l, states, r_max, grid_points, p, &cfg));
            (cfg, r)
        }
        Command::Verify { d, n_max, l_max, tolerance, suite, common } => {
            let cfg = config(&common);
            let r = params(&common).and_then(|p| {
                let mut tol = Tolerances::default();
                for t in &tolerance {
                    tol.add(t).map_err(Failure::Usage)?;
                }
                let suites = if suite.is_empty() { Suite::ALL.to_vec() } else { suite };
                let vcfg = VerifyConfig { d, n_max, l_max, suites, params: p };
                commands::verify(&vcfg, &tol, &cfg)
            });
            (cfg, r)
        }
    };
    (common, result)
}

fn config(c: &Common) -> ReportConfig {
    ReportConfig { format: c.format, precision: c.precision }
}

fn params(c: &Common) -> Result<PhysicalParams, Failure> {
    PhysicalParams::new(c.mu, c.k, c.hbar).map_err(|e| Failure::Usage(e.to_string()))
}
