//! Python bindings: scenarios in, statistics out.
//!
//! The module mirrors the CLI surface: scenarios are TOML strings in the
//! same format the `blindsim` binary reads, runs and sweeps come back as
//! plain result objects, and the optics/budget helpers are exposed as
//! functions. Everything is deterministic under the scenario seed.
//!
//! Usage from Python:
//!
//! ```text
//! import blindsim
//! stats = blindsim.run_toml(blindsim.default_scenario_toml())
//! assert stats.qber == 0.0 and stats.eve_known_fraction == 1.0
//! ```

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use blindsim_core::error::Error;
use blindsim_core::harness::{
    report, run, sweep, EventSink, ReportFormat, ScenarioConfig, SweepSpec, SweepVariable,
};
use blindsim_core::optics::{self, Decibel, Energy, Power};
use blindsim_core::scw;

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Config(_) | Error::InvalidArgument { .. } => PyValueError::new_err(err.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Aggregate statistics of one simulated run.
#[pyclass(name = "RunStats", frozen)]
struct PyRunStats {
    #[pyo3(get)]
    gates_total: u64,
    #[pyo3(get)]
    clicks: u64,
    #[pyo3(get)]
    double_clicks: u64,
    #[pyo3(get)]
    sifted_bits: u64,
    #[pyo3(get)]
    errors: u64,
    /// `None` when no bits were sifted.
    #[pyo3(get)]
    qber: Option<f64>,
    #[pyo3(get)]
    eve_known_fraction: Option<f64>,
    #[pyo3(get)]
    raw_click_rate_hz: f64,
    #[pyo3(get)]
    alarms: u64,
    #[pyo3(get)]
    wrong_basis_clicks: u64,
    #[pyo3(get)]
    watchdog_blinded_gates: u64,
    csv: String,
}

#[pymethods]
impl PyRunStats {
    /// The run statistics as CSV (header plus one row).
    fn to_csv(&self) -> String {
        self.csv.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunStats(gates={}, sifted={}, qber={:?}, eve_known={:?}, alarms={})",
            self.gates_total, self.sifted_bits, self.qber, self.eve_known_fraction, self.alarms
        )
    }
}

/// One point of a response-curve sweep.
#[pyclass(name = "SweepPoint", frozen)]
struct PySweepPoint {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    gates: u64,
    #[pyo3(get)]
    pulses: u64,
    #[pyo3(get)]
    pulse_clicks: u64,
    #[pyo3(get)]
    total_clicks: u64,
    #[pyo3(get)]
    click_probability: f64,
    #[pyo3(get)]
    std_error: f64,
    #[pyo3(get)]
    click_rate_hz: f64,
}

#[pymethods]
impl PySweepPoint {
    fn __repr__(&self) -> String {
        format!(
            "SweepPoint(value={}, p={:.6}, pulses={})",
            self.value, self.click_probability, self.pulses
        )
    }
}

/// One row of the faked-state power budget.
#[pyclass(name = "BudgetRow", frozen)]
struct PyBudgetRow {
    #[pyo3(get)]
    stage: String,
    #[pyo3(get)]
    blinding_power_nw: f64,
    #[pyo3(get)]
    e_always_fj: f64,
    #[pyo3(get)]
    e_never_fj: f64,
}

#[pymethods]
impl PyBudgetRow {
    fn __repr__(&self) -> String {
        format!(
            "BudgetRow(stage='{}', blinding_power_nw={:.1}, e_always_fj={:.1}, e_never_fj={:.1})",
            self.stage, self.blinding_power_nw, self.e_always_fj, self.e_never_fj
        )
    }
}

/// Execute a scenario given as a TOML string; `seed` and `gates`
/// override the config when given.
#[pyfunction]
#[pyo3(signature = (toml, seed=None, gates=None))]
fn run_toml(toml: &str, seed: Option<u64>, gates: Option<u64>) -> PyResult<PyRunStats> {
    let mut config = ScenarioConfig::from_toml_str(toml).map_err(to_py_err)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(gates) = gates {
        config.gates = gates;
    }
    let out = run(&config, EventSink::Discard).map_err(to_py_err)?;
    let s = &out.stats;
    Ok(PyRunStats {
        gates_total: s.gates_total,
        clicks: s.clicks,
        double_clicks: s.double_clicks,
        sifted_bits: s.sifted_bits,
        errors: s.errors,
        qber: s.qber,
        eve_known_fraction: s.eve_known_fraction,
        raw_click_rate_hz: s.raw_click_rate_hz,
        alarms: s.alarms,
        wrong_basis_clicks: out.wrong_basis_clicks,
        watchdog_blinded_gates: out.watchdog_blinded_gates,
        csv: report(s, ReportFormat::Csv),
    })
}

/// Sweep `var` ("trigger_energy_fj" or "cw_power_nw") over
/// `[start, stop]` in `steps` points, `gates` gates each, around the
/// operating point of the scenario's `[attack]` section.
#[pyfunction]
#[pyo3(signature = (toml, var, start, stop, steps, gates=100_000))]
fn sweep_toml(
    toml: &str,
    var: &str,
    start: f64,
    stop: f64,
    steps: usize,
    gates: u64,
) -> PyResult<Vec<PySweepPoint>> {
    let config = ScenarioConfig::from_toml_str(toml).map_err(to_py_err)?;
    let variable = SweepVariable::parse(var).map_err(to_py_err)?;
    let spec = SweepSpec {
        variable,
        from: start,
        to: stop,
        steps,
        gates_per_point: gates,
    };
    let points = sweep(&spec, &config).map_err(to_py_err)?;
    Ok(points
        .into_iter()
        .map(|p| PySweepPoint {
            value: p.value,
            gates: p.gates,
            pulses: p.pulses,
            pulse_clicks: p.pulse_clicks,
            total_clicks: p.total_clicks,
            click_probability: p.click_probability,
            std_error: p.std_error,
            click_rate_hz: p.click_rate_hz,
        })
        .collect())
}

/// The three-stage faked-state power budget through the SCW receiver
/// chain, full precision. Defaults are the measured detector
/// thresholds and the reference chain parameters.
#[pyfunction]
#[pyo3(signature = (
    blinding_power_nw=35.0,
    e_always_fj=25.8,
    e_never_fj=15.4,
    modulation_index=20.0,
    bob_insertion_loss_db=6.4,
))]
fn budget_rows(
    blinding_power_nw: f64,
    e_always_fj: f64,
    e_never_fj: f64,
    modulation_index: f64,
    bob_insertion_loss_db: f64,
) -> PyResult<Vec<PyBudgetRow>> {
    if !(blinding_power_nw >= 0.0 && e_always_fj >= 0.0 && e_never_fj >= 0.0) {
        return Err(PyValueError::new_err("powers and energies must be nonnegative"));
    }
    if !modulation_index.is_finite() || modulation_index <= 1.0 || bob_insertion_loss_db < 0.0 {
        return Err(PyValueError::new_err(
            "modulation_index must be > 1 and the loss nonnegative",
        ));
    }
    let chain = scw::ScwChain {
        modulation_index,
        bob_insertion_loss: Decibel::from_db(bob_insertion_loss_db),
        ..scw::ScwChain::default()
    };
    let rows = scw::table1(
        Power::from_nanowatts(blinding_power_nw),
        Energy::from_femtojoules(e_always_fj),
        Energy::from_femtojoules(e_never_fj),
        &chain,
    );
    Ok(rows
        .iter()
        .map(|r| PyBudgetRow {
            stage: r.stage.key().to_string(),
            blinding_power_nw: r.blinding_power.nanowatts(),
            e_always_fj: r.e_always.femtojoules(),
            e_never_fj: r.e_never.femtojoules(),
        })
        .collect())
}

/// Admissible watchdog attenuation interval in dB, or `None` when the
/// countermeasure is infeasible for these parameters.
#[pyfunction]
fn find_attenuation_window(
    alice_carrier_nw: f64,
    eve_carrier_nw: f64,
    sensitivity_floor_nw: f64,
    blinding_threshold_nw: f64,
    loss_db: f64,
) -> PyResult<Option<(f64, f64)>> {
    for v in [
        alice_carrier_nw,
        eve_carrier_nw,
        sensitivity_floor_nw,
        blinding_threshold_nw,
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(PyValueError::new_err("powers must be finite and nonnegative"));
        }
    }
    let window = scw::find_attenuation_window(
        Power::from_nanowatts(alice_carrier_nw),
        Power::from_nanowatts(eve_carrier_nw),
        Power::from_nanowatts(sensitivity_floor_nw),
        Power::from_nanowatts(blinding_threshold_nw),
        Decibel::from_db(loss_db),
    )
    .map_err(to_py_err)?;
    Ok(window.map(|(lo, hi)| (lo.db(), hi.db())))
}

/// `10^(dB/10)`.
#[pyfunction]
fn db_to_linear(db: f64) -> PyResult<f64> {
    if !db.is_finite() {
        return Err(PyValueError::new_err("dB value must be finite"));
    }
    Ok(optics::db_to_linear(Decibel::from_db(db)))
}

/// Poissonian click probability `1 - exp(-efficiency * mean_photons)`.
#[pyfunction]
fn click_probability(mean_photons: f64, efficiency: f64) -> PyResult<f64> {
    optics::mean_photons_to_click_prob(mean_photons, efficiency).map_err(to_py_err)
}

/// Trigger pulse energy in fJ from the average power of a pulse train.
#[pyfunction]
fn pulse_energy_fj(avg_power_nw: f64, rep_rate_hz: f64) -> PyResult<f64> {
    if !avg_power_nw.is_finite() || avg_power_nw < 0.0 {
        return Err(PyValueError::new_err("power must be finite and nonnegative"));
    }
    optics::pulse_energy_from_avg_power(Power::from_nanowatts(avg_power_nw), rep_rate_hz)
        .map(|e| e.femtojoules())
        .map_err(to_py_err)
}

/// The default faked-state attack scenario at the measured operating
/// point, as a TOML string; a useful starting point for edits.
#[pyfunction]
fn default_scenario_toml() -> String {
    ScenarioConfig::default_attack_demo().to_toml_string()
}

#[pymodule]
fn blindsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyRunStats>()?;
    m.add_class::<PySweepPoint>()?;
    m.add_class::<PyBudgetRow>()?;
    m.add_function(wrap_pyfunction!(run_toml, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_toml, m)?)?;
    m.add_function(wrap_pyfunction!(budget_rows, m)?)?;
    m.add_function(wrap_pyfunction!(find_attenuation_window, m)?)?;
    m.add_function(wrap_pyfunction!(db_to_linear, m)?)?;
    m.add_function(wrap_pyfunction!(click_probability, m)?)?;
    m.add_function(wrap_pyfunction!(pulse_energy_fj, m)?)?;
    m.add_function(wrap_pyfunction!(default_scenario_toml, m)?)?;
    Ok(())
}
