mod commands;
mod error;
mod observables;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use xducer::params::{parse_frequency, AngularFrequency};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "xducer", version, about = "Magnon-mediated microwave-to-optical converter design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn frequency(text: &str) -> Result<AngularFrequency, String> {
    parse_frequency(text)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Design the device from a config and check conditions (a)-(e).
    Feasibility {
        /// Device config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Report path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optical detuning as a multiple of the optical linewidth.
        #[arg(long, default_value_t = 5.0)]
        linewidth_multiple: f64,
        /// Target couplings are delta_M divided by this factor.
        #[arg(long, default_value_t = 10.0)]
        separation_factor: f64,
        /// Fraction of the magnon mode spacing used as delta_M.
        #[arg(long, default_value_t = 1.0)]
        detuning_derate: f64,
        /// Minimum delta_o/Omega0 and delta_o/g_mu.
        #[arg(long, default_value_t = 10.0)]
        adiabatic_threshold: f64,
    },
    /// Efficiency spectrum of the designed converter as CSV (omega in Hz).
    Efficiency {
        /// Device config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Lower end of the signal detuning range [Hz, or with unit suffix: 5MHz, 3e7rad/s].
        #[arg(long, value_parser = frequency, allow_hyphen_values = true)]
        omega_min: Option<AngularFrequency>,
        /// Upper end of the signal detuning range [Hz, or with unit suffix]. Defaults to ±10 kappa.
        #[arg(long, value_parser = frequency, allow_hyphen_values = true)]
        omega_max: Option<AngularFrequency>,
        /// Number of grid points (at least 2).
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Impedance-matching solution for given couplings, printed as JSON.
    Match {
        /// Collective microwave coupling G_mu [Hz, or with unit suffix].
        #[arg(long, value_parser = frequency)]
        g_mu: AngularFrequency,
        /// Collective Raman coupling G_oOmega [Hz, or with unit suffix].
        #[arg(long, value_parser = frequency)]
        g_o: AngularFrequency,
        /// Magnon detuning delta_M [Hz, or with unit suffix].
        #[arg(long, value_parser = frequency, allow_hyphen_values = true)]
        delta_m: AngularFrequency,
        /// Microwave cavity frequency [Hz, or with unit suffix]; taken from the config when omitted.
        #[arg(long, value_parser = frequency)]
        omega_mu: Option<AngularFrequency>,
        /// Optical cavity frequency [Hz, or with unit suffix]; taken from the config when omitted.
        #[arg(long, value_parser = frequency)]
        omega_o: Option<AngularFrequency>,
        /// Device config supplying the cavity frequencies; the bundled reference device when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate observables over a parameter sweep as CSV.
    Sweep {
        /// Device config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Sweep spec (JSON).
        #[arg(long)]
        spec: PathBuf,
        /// CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, env = "XDUCER_JOBS")]
        jobs: Option<usize>,
    },
    /// Run a reduction oracle and write its JSON report.
    Oracle {
        /// Device config (JSON).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: OracleMode,
        /// Report path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum OracleMode {
    ThreeMode,
    Raman,
    Scaling,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Feasibility {
            config,
            out,
            linewidth_multiple,
            separation_factor,
            detuning_derate,
            adiabatic_threshold,
        } => commands::feasibility(
            &config,
            out.as_deref(),
            xducer::feasibility::DesignPolicy {
                linewidth_multiple,
                separation_factor,
                detuning_derate,
                adiabatic_threshold,
            },
        ),
        Command::Efficiency {
            config,
            omega_min,
            omega_max,
            points,
            out,
        } => commands::efficiency(&config, omega_min, omega_max, points, out.as_deref()),
        Command::Match {
            g_mu,
            g_o,
            delta_m,
            omega_mu,
            omega_o,
            config,
        } => commands::matching(g_mu, g_o, delta_m, omega_mu, omega_o, config.as_deref()),
        Command::Sweep {
            config,
            spec,
            out,
            jobs,
        } => sweep::run(&config, &spec, out.as_deref(), jobs),
        Command::Oracle { config, mode, out } => commands::oracle(&config, mode, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
