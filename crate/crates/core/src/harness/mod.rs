//! Scenario configuration, seeded execution, parameter sweeps and all
//! file/CLI-facing serialization.

pub mod config;
pub mod report;
pub mod runner;
pub mod sweep;

pub use config::{
    AttackMode, AttackParams, Protocol, ScenarioConfig, ScwScenario, SweepSpec, SweepVariable,
};
pub use report::{report, report_budget, report_sweep, ReportFormat};
pub use runner::{run, EventSink, RunOutput};
pub use sweep::{sweep, SweepPoint};
