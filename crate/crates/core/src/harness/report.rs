//! Serialization of run statistics, sweep tables, the power-budget table
//! and per-gate event logs.
//!
//! Machine formats (CSV, JSON lines) keep a stable field order and print
//! floats with 17 significant digits; undefined ratios (no sifted bits)
//! render as an empty CSV field, JSON `null`, and `NA` in text. Output is
//! byte-identical across calls for equal inputs.

use crate::bb84::{GateRecord, RunStats};
use crate::harness::config::SweepVariable;
use crate::harness::sweep::SweepPoint;
use crate::scw::BudgetRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    JsonLines,
}

pub const RUN_STATS_CSV_HEADER: &str =
    "gates_total,clicks,double_clicks,sifted_bits,errors,qber,eve_known_fraction,raw_click_rate_hz,alarms";

pub const EVENT_LOG_CSV_HEADER: &str =
    "gate_index,alice_basis,alice_bit,eve_basis,eve_bit,bob_basis,click0,click1,sifted,error";

pub const BUDGET_CSV_HEADER: &str = "stage,blinding_power_nW,e_always_fJ,e_never_fJ";

/// 17 significant digits, enough to reconstruct the exact f64.
fn machine_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn machine_opt(x: Option<f64>, null: &str) -> String {
    match x {
        Some(v) => machine_f64(v),
        None => null.to_string(),
    }
}

/// Serializes run statistics in the requested format.
pub fn report(stats: &RunStats, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let line = [
                stats.gates_total.to_string(),
                stats.clicks.to_string(),
                stats.double_clicks.to_string(),
                stats.sifted_bits.to_string(),
                stats.errors.to_string(),
                machine_opt(stats.qber, ""),
                machine_opt(stats.eve_known_fraction, ""),
                machine_f64(stats.raw_click_rate_hz),
                stats.alarms.to_string(),
            ]
            .join(",");
            format!("{RUN_STATS_CSV_HEADER}\n{line}\n")
        }
        ReportFormat::JsonLines => {
            format!(
                "{{\"gates_total\":{},\"clicks\":{},\"double_clicks\":{},\"sifted_bits\":{},\"errors\":{},\"qber\":{},\"eve_known_fraction\":{},\"raw_click_rate_hz\":{},\"alarms\":{}}}\n",
                stats.gates_total,
                stats.clicks,
                stats.double_clicks,
                stats.sifted_bits,
                stats.errors,
                machine_opt(stats.qber, "null"),
                machine_opt(stats.eve_known_fraction, "null"),
                machine_f64(stats.raw_click_rate_hz),
                stats.alarms,
            )
        }
        ReportFormat::Text => {
            let ratio = |x: Option<f64>| match x {
                Some(v) => format!("{v:.6}"),
                None => "NA".to_string(),
            };
            format!(
                "gates total        : {}\n\
                 clicks             : {}\n\
                 double clicks      : {}\n\
                 sifted bits        : {}\n\
                 errors             : {}\n\
                 qber               : {}\n\
                 eve known fraction : {}\n\
                 raw click rate     : {:.3} Hz\n\
                 alarms             : {}\n",
                stats.gates_total,
                stats.clicks,
                stats.double_clicks,
                stats.sifted_bits,
                stats.errors,
                ratio(stats.qber),
                ratio(stats.eve_known_fraction),
                stats.raw_click_rate_hz,
                stats.alarms,
            )
        }
    }
}

/// One event-log line, fields matching [`GateRecord`]; Eve's columns are
/// empty when she forged nothing that gate.
pub fn format_event_record(record: &GateRecord) -> String {
    let bit = |b: bool| if b { "1" } else { "0" };
    let (eve_basis, eve_bit) = match record.eve {
        Some(e) => (e.basis.label(), bit(e.bit)),
        None => ("", ""),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        record.gate_index,
        record.alice.basis.label(),
        bit(record.alice.bit),
        eve_basis,
        eve_bit,
        record.bob_basis.label(),
        bit(record.click0),
        bit(record.click1),
        bit(record.sifted),
        bit(record.error),
    )
}

/// Serializes a full event log, header row included.
pub fn report_event_log(records: &[GateRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(EVENT_LOG_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format_event_record(r));
        out.push('\n');
    }
    out
}

/// Serializes a sweep table; the value column is named after the swept
/// variable, units included.
pub fn report_sweep(points: &[SweepPoint], variable: SweepVariable, format: ReportFormat) -> String {
    let var = variable.key();
    match format {
        ReportFormat::Csv => {
            let mut out = format!(
                "{var},gates,pulses,pulse_clicks,total_clicks,click_probability,std_error,click_rate_hz\n"
            );
            for p in points {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    machine_f64(p.value),
                    p.gates,
                    p.pulses,
                    p.pulse_clicks,
                    p.total_clicks,
                    machine_f64(p.click_probability),
                    machine_f64(p.std_error),
                    machine_f64(p.click_rate_hz),
                ));
            }
            out
        }
        ReportFormat::JsonLines => {
            let mut out = String::new();
            for p in points {
                out.push_str(&format!(
                    "{{\"{var}\":{},\"gates\":{},\"pulses\":{},\"pulse_clicks\":{},\"total_clicks\":{},\"click_probability\":{},\"std_error\":{},\"click_rate_hz\":{}}}\n",
                    machine_f64(p.value),
                    p.gates,
                    p.pulses,
                    p.pulse_clicks,
                    p.total_clicks,
                    machine_f64(p.click_probability),
                    machine_f64(p.std_error),
                    machine_f64(p.click_rate_hz),
                ));
            }
            out
        }
        ReportFormat::Text => {
            let mut out = format!(
                "{:>16}  {:>10}  {:>12}  {:>10}  {:>14}\n",
                var, "pulses", "clicks", "p(click)", "rate (Hz)"
            );
            for p in points {
                out.push_str(&format!(
                    "{:>16.4}  {:>10}  {:>12}  {:>10.6}  {:>14.3}\n",
                    p.value, p.pulses, p.pulse_clicks, p.click_probability, p.click_rate_hz
                ));
            }
            out
        }
    }
}

/// Serializes the three-row power-budget table at its display
/// precision (one decimal for the APD-level row, integers downstream).
pub fn report_budget(rows: &[BudgetRow; 3], format: ReportFormat) -> String {
    let cells = |row: &BudgetRow| {
        let d = row.stage.display_decimals();
        (
            format!("{:.*}", 0, row.blinding_power.nanowatts()),
            format!("{:.*}", d, row.e_always.femtojoules()),
            format!("{:.*}", d, row.e_never.femtojoules()),
        )
    };
    match format {
        ReportFormat::Csv => {
            let mut out = format!("{BUDGET_CSV_HEADER}\n");
            for row in rows {
                let (p, ea, en) = cells(row);
                out.push_str(&format!("{},{},{},{}\n", row.stage.key(), p, ea, en));
            }
            out
        }
        ReportFormat::JsonLines => {
            let mut out = String::new();
            for row in rows {
                out.push_str(&format!(
                    "{{\"stage\":\"{}\",\"blinding_power_nW\":{},\"e_always_fJ\":{},\"e_never_fJ\":{}}}\n",
                    row.stage.key(),
                    machine_f64(row.blinding_power.nanowatts()),
                    machine_f64(row.e_always.femtojoules()),
                    machine_f64(row.e_never.femtojoules()),
                ));
            }
            out
        }
        ReportFormat::Text => {
            let mut out = format!(
                "{:<32}{:>22}{:>16}{:>15}\n",
                "Eve's faked-state power in...", "blinding power (nW)", "E_always (fJ)", "E_never (fJ)"
            );
            for row in rows {
                let (p, ea, en) = cells(row);
                out.push_str(&format!(
                    "{:<32}{:>22}{:>16}{:>15}\n",
                    row.stage.label(),
                    p,
                    ea,
                    en
                ));
            }
            out
        }
    }
}
