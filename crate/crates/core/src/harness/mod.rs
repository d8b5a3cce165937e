//! Config-driven experiments: entropy versus kick strength, surfaces of
//! section, the `hbar_eff` scaling sweep and the quantum-classical
//! correspondence analysis, plus their file output.

mod config;
mod experiments;
mod output;
pub mod stats;

pub use config::{Criteria, ExperimentConfig, ExperimentKind, RotorSetup, Tolerances};
pub use experiments::{
    correspondence_row, run_correspondence, run_entanglement_experiment, run_experiment,
    run_scaling_sweep, run_single, run_sos_experiment, scaling_tables_from_runs, sos_starts,
    CorrespondenceReport, CorrespondenceRow, ExperimentOutput, RunResult, RunSpec, ScalingReport,
    ScalingRow, ScalingTable, Snapshot, SosResult, StepRecord,
};
pub use output::{
    emit_outputs, entropy_svg, scaling_csv, section_csv, timeseries_csv, timeseries_name,
    MANIFEST, TIMESERIES_HEADER, TIMING,
};
