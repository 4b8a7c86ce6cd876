//! Command-line front end: seeded runs, response-curve sweeps and the
//! faked-state power budget.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blindsim_core::error::Error;
use blindsim_core::harness::{
    report, report_budget, report_sweep, run, sweep, EventSink, ReportFormat, ScenarioConfig,
    SweepSpec, SweepVariable,
};
use blindsim_core::optics::{Energy, Power};
use blindsim_core::scw::{table1, ScwChain};

const CONFIG_ERROR_EXIT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "blindsim",
    version,
    about = "Detector-blinding faked-state attack simulator for BB84 and subcarrier-wave QKD"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Jsonl,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Jsonl => ReportFormat::JsonLines,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VarArg {
    /// Trigger pulse energy in femtojoules.
    #[value(name = "trigger_energy_fj", alias = "trigger-energy-fj")]
    TriggerEnergyFj,
    /// C.w. blinding power in nanowatts.
    #[value(name = "cw_power_nw", alias = "cw-power-nw")]
    CwPowerNw,
}

impl From<VarArg> for SweepVariable {
    fn from(v: VarArg) -> SweepVariable {
        match v {
            VarArg::TriggerEnergyFj => SweepVariable::TriggerEnergyFj,
            VarArg::CwPowerNw => SweepVariable::CwPowerNw,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario config and report the run statistics.
    Run {
        /// Scenario config file (TOML).
        config: PathBuf,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the gate count.
        #[arg(long)]
        gates: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stream the per-gate event log (CSV, header row included).
        #[arg(long)]
        log_events: Option<PathBuf>,
    },
    /// Sweep trigger energy or blinding power and measure the detector
    /// response curve.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        var: VarArg,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Gates per sweep point.
        #[arg(long, default_value_t = 100_000)]
        gates: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the faked-state power budget through the SCW receiver chain.
    Budget {
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trigger-energy response curve at the measured blinding point
    /// (sweep with defaults: 10..35 fJ at 35 nW, 26 steps).
    Curve {
        /// Optional scenario config supplying the operating point.
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        gates: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::InvalidArgument { .. } => {
                    ExitCode::from(CONFIG_ERROR_EXIT)
                }
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            seed,
            gates,
            format,
            out,
            log_events,
        } => {
            let mut scenario = ScenarioConfig::load(&config)?;
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            if let Some(gates) = gates {
                scenario.gates = gates;
            }
            let output = match &log_events {
                Some(path) => {
                    let mut writer = BufWriter::new(File::create(path)?);
                    let output = run(&scenario, EventSink::Writer(&mut writer))?;
                    writer.flush()?;
                    output
                }
                None => run(&scenario, EventSink::Discard)?,
            };
            let mut text = report(&output.stats, format.into());
            if matches!(format, FormatArg::Text) {
                if let Some(scw) = &scenario.scw {
                    text.push_str(&format!(
                        "watchdog threshold : {:.4} nW ({}x nominal, {} dB attenuation)\n",
                        scw.chain.watchdog_alarm_threshold.nanowatts(),
                        scw.alarm_factor,
                        scw.chain.watchdog_attenuation.db(),
                    ));
                }
                if output.watchdog_blinded_gates > 0 {
                    text.push_str(&format!(
                        "watchdog blinded   : {} gates (countermeasure defeated)\n",
                        output.watchdog_blinded_gates
                    ));
                }
            }
            emit(&text, out.as_deref())
        }
        Command::Sweep {
            config,
            var,
            from,
            to,
            steps,
            gates,
            seed,
            format,
            out,
        } => {
            let mut scenario = ScenarioConfig::load(&config)?;
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            let variable: SweepVariable = var.into();
            let spec = SweepSpec {
                variable,
                from,
                to,
                steps,
                gates_per_point: gates,
            };
            let points = sweep(&spec, &scenario)?;
            emit(&report_sweep(&points, variable, format.into()), out.as_deref())
        }
        Command::Budget { format, out } => {
            let rows = table1(
                Power::from_nanowatts(35.0),
                Energy::from_femtojoules(25.8),
                Energy::from_femtojoules(15.4),
                &ScwChain::default(),
            );
            emit(&report_budget(&rows, format.into()), out.as_deref())
        }
        Command::Curve {
            config,
            gates,
            seed,
            format,
            out,
        } => {
            let mut scenario = match config {
                Some(path) => ScenarioConfig::load(&path)?,
                None => ScenarioConfig::default_attack_demo(),
            };
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            let variable = SweepVariable::TriggerEnergyFj;
            let spec = SweepSpec {
                variable,
                from: 10.0,
                to: 35.0,
                steps: 26,
                gates_per_point: gates,
            };
            let points = sweep(&spec, &scenario)?;
            emit(&report_sweep(&points, variable, format.into()), out.as_deref())
        }
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
