use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use super::config::{ExperimentConfig, ExperimentKind, Tolerances};
use super::stats::{mean, pearson, saturation_window};
use crate::cdynamics::{
    classify, lyapunov_estimate, sample_initial, surface_of_section, PhasePoint, Regime,
    SectionOrbit,
};
use crate::correspondence::{
    classical_cell_probabilities, classical_mutual_information, distribution_distance,
    scaling_predict, CellGrid, ClassicalMixture,
};
use crate::error::{Error, Result};
use crate::par;
use crate::qdynamics::{
    init_product_state, linear_entropy, quantum_weights, reduced_density, trace_distance,
    BipartiteState, DensityOperator, FloquetPropagator, FloquetSpec, InitialStateSpec, Subsystem,
};

/// Observables after one kick.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub omega_heavy: f64,
    pub omega_light: f64,
    pub mutual_information: f64,
    pub p_quantum: Vec<f64>,
    pub p_classical: Vec<f64>,
    pub tv_distance: f64,
    pub max_offdiag: f64,
    pub leak_q: f64,
    pub leak_cl: f64,
    pub norm_error: f64,
    pub valid: bool,
}

/// Trace distances between the evolved state and its classical mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub reduced_distance: f64,
    pub global_distance: f64,
}

/// One `(k, hbar_eff)` evolution, fully specified.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub k: f64,
    pub hbar_eff: f64,
    pub floquet: FloquetSpec,
    pub init: InitialStateSpec,
    pub n_traj: usize,
    pub seed: u64,
    pub steps: usize,
    pub snapshot_steps: Vec<usize>,
    pub tolerance: Tolerances,
    pub hash: String,
}

impl RunSpec {
    pub fn from_config(cfg: &ExperimentConfig, k: f64, hbar: f64) -> Result<Self> {
        Ok(RunSpec {
            k,
            hbar_eff: hbar,
            floquet: cfg.floquet(k, hbar)?,
            init: cfg.initial_state(hbar)?,
            n_traj: cfg.n_traj,
            seed: cfg.seed,
            steps: cfg.steps,
            snapshot_steps: Vec::new(),
            tolerance: cfg.tolerance,
            hash: cfg.run_hash(k, hbar),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub hash: String,
    pub k: f64,
    pub hbar_eff: f64,
    pub seed: u64,
    pub records: Vec<StepRecord>,
    pub snapshots: Vec<Snapshot>,
    pub wall_time: Duration,
    /// False if any record failed a monitor or a snapshot could not be formed.
    pub valid: bool,
    pub notes: Vec<String>,
}

impl RunResult {
    pub fn series(&self, f: impl Fn(&StepRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }

    /// Mean of `f` over the saturation window.
    pub fn saturation_mean(&self, f: impl Fn(&StepRecord) -> f64) -> f64 {
        let last = self.records.len().saturating_sub(1);
        let vals: Vec<f64> = saturation_window(last).map(|t| f(&self.records[t])).collect();
        mean(&vals)
    }

    pub fn record(&self, step: usize) -> Option<&StepRecord> {
        self.records.get(step)
    }

    pub fn snapshot(&self, step: usize) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.step == step)
    }
}

fn measure(
    psi: &BipartiteState,
    rho_h: &DensityOperator,
    ensemble_occupation: &crate::correspondence::CellOccupation,
    step: usize,
    tol: &Tolerances,
) -> StepRecord {
    let rho_l = reduced_density(psi, Subsystem::Light);
    let omega_heavy = linear_entropy(rho_h).clamp(0.0, 1.0);
    let omega_light = linear_entropy(&rho_l).clamp(0.0, 1.0);
    let qw = quantum_weights(rho_h);
    let p_cl = &ensemble_occupation.probabilities;
    let mutual_information = classical_mutual_information(p_cl).clamp(0.0, 1.0);
    let tv_distance = distribution_distance(&qw.weights, p_cl)
        .expect("grid and basis share the heavy index set")
        .clamp(0.0, 1.0);
    let leak_q = psi.leak_probability();
    let leak_cl = ensemble_occupation.out_of_window;
    let norm_error = (psi.norm_sqr() - 1.0).abs();
    let valid = leak_q <= tol.leak
        && leak_cl <= tol.leak
        && (omega_heavy - omega_light).abs() <= tol.symmetry
        && norm_error <= tol.norm;
    StepRecord {
        step,
        omega_heavy,
        omega_light,
        mutual_information,
        p_quantum: qw.weights.values().to_vec(),
        p_classical: p_cl.values().to_vec(),
        tv_distance,
        max_offdiag: qw.max_off_diagonal,
        leak_q,
        leak_cl,
        norm_error,
        valid,
    }
}

/// Evolves the quantum state and the classical ensemble side by side.
pub fn run_single(spec: &RunSpec) -> Result<RunResult> {
    let start = Instant::now();
    let hilbert = spec.floquet.hilbert;
    let mut prop = FloquetPropagator::new(&spec.floquet);
    let mut psi = init_product_state(&spec.floquet, &spec.init)?;
    let mut ensemble = sample_initial(&spec.init, &hilbert, spec.n_traj, spec.seed)?;
    let grid = CellGrid::from_hilbert(&hilbert);
    let total_m = spec.init.total_quantum_number();

    let mut records = Vec::with_capacity(spec.steps + 1);
    let mut snapshots = Vec::new();
    let mut notes = Vec::new();
    for t in 0..=spec.steps {
        if t > 0 {
            prop.step(&mut psi);
            ensemble.advance(&spec.floquet.kick);
        }
        let rho_h = reduced_density(&psi, Subsystem::Heavy);
        let occ = classical_cell_probabilities(&ensemble, &grid);
        let rec = measure(&psi, &rho_h, &occ, t, &spec.tolerance);
        if spec.snapshot_steps.contains(&t) {
            let reduced = trace_distance(&rho_h, &DensityOperator::diagonal(&occ.probabilities))?
                .clamp(0.0, 1.0);
            let global = match ClassicalMixture::momentum_family(
                occ.probabilities.clone(),
                &hilbert,
                total_m,
            ) {
                Ok(mix) => mix.trace_distance_to_pure(&psi)?,
                Err(e) => {
                    notes.push(format!("step {t}: no classical mixture: {e}"));
                    f64::NAN
                }
            };
            snapshots.push(Snapshot {
                step: t,
                reduced_distance: reduced,
                global_distance: global,
            });
        }
        if !rec.valid && notes.iter().all(|n| !n.starts_with("monitor")) {
            notes.push(format!(
                "monitor fired at step {t}: leak_q {:.3e}, leak_cl {:.3e}, symmetry {:.3e}, norm {:.3e}",
                rec.leak_q,
                rec.leak_cl,
                (rec.omega_heavy - rec.omega_light).abs(),
                rec.norm_error
            ));
        }
        records.push(rec);
    }
    let valid = records.iter().all(|r| r.valid) && snapshots.iter().all(|s| s.global_distance.is_finite());
    Ok(RunResult {
        hash: spec.hash.clone(),
        k: spec.k,
        hbar_eff: spec.hbar_eff,
        seed: spec.seed,
        records,
        snapshots,
        wall_time: start.elapsed(),
        valid,
        notes,
    })
}

fn run_grid(cfg: &ExperimentConfig, snapshot_steps: &[usize]) -> Result<Vec<RunResult>> {
    let mut specs = Vec::new();
    for &k in &cfg.k {
        for &h in &cfg.hbar_eff {
            let mut s = RunSpec::from_config(cfg, k, h)?;
            s.snapshot_steps = snapshot_steps.to_vec();
            specs.push(s);
        }
    }
    par::map_slice(&specs, run_single).into_iter().collect()
}

/// One run per `(k, hbar_eff)`, k-major.
pub fn run_entanglement_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    run_grid(cfg, &[])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosResult {
    pub k: f64,
    pub hash: String,
    pub lyapunov: f64,
    pub regime: Regime,
    pub orbits: Vec<SectionOrbit>,
}

/// Orbit starting points spread over the section: angle across the circle,
/// relative momentum across `[-span/2, span/2]`, zero total momentum.
pub fn sos_starts(cfg: &ExperimentConfig) -> Vec<PhasePoint> {
    let n = cfg.sos_orbits;
    (0..n)
        .map(|i| {
            let f = (i as f64 + 0.5) / n as f64;
            let j = cfg.sos_momentum_span * (f - 0.5);
            PhasePoint::new(TAU * f, j, 0.0, -j)
        })
        .collect()
}

/// Section cloud, Lyapunov estimate and regime label per k.
pub fn run_sos_experiment(cfg: &ExperimentConfig) -> Result<Vec<SosResult>> {
    cfg.validate()?;
    let starts = sos_starts(cfg);
    par::map_slice(&cfg.k, |&k| {
        let params = cfg.kick(k);
        let lyapunov = lyapunov_estimate(&params, &cfg.lyapunov_p0, cfg.lyapunov_steps)?;
        Ok(SosResult {
            k,
            hash: cfg.run_hash(k, cfg.hbar_eff[0]),
            lyapunov,
            regime: classify(lyapunov, &cfg.chaos),
            orbits: surface_of_section(&params, &starts, cfg.sos_iterations, cfg.sos_coordinates),
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub step: usize,
    pub omega_coarse: f64,
    pub omega_fine_measured: f64,
    pub omega_fine_predicted: f64,
    /// `|predicted - measured| / (1 - measured)`, the error on `1 - omega`.
    pub rel_err: f64,
}

/// Measured versus predicted entropy for one `hbar_eff` refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub k: f64,
    pub hbar_coarse: f64,
    pub hbar_fine: f64,
    pub ratio: f64,
    pub rows: Vec<ScalingRow>,
    pub sat_omega_coarse: f64,
    pub sat_omega_fine: f64,
    pub sat_predicted: f64,
    pub sat_rel_err: f64,
    /// False when the coarse run does not entangle, where the relation
    /// has no content.
    pub in_domain: bool,
    /// Saturated entropy grows under refinement.
    pub monotone: bool,
}

const OUT_OF_DOMAIN_OMEGA: f64 = 1e-6;

fn rel_err(predicted: f64, measured: f64) -> f64 {
    (predicted - measured).abs() / (1.0 - measured)
}

fn scaling_table(coarse: &RunResult, fine: &RunResult) -> Result<ScalingTable> {
    let ratio = fine.hbar_eff / coarse.hbar_eff;
    let n = coarse.records.len().min(fine.records.len());
    let mut rows = Vec::with_capacity(n);
    for t in 0..n {
        let oc = coarse.records[t].omega_heavy;
        let of = fine.records[t].omega_heavy;
        let pred = scaling_predict(oc, ratio)?;
        rows.push(ScalingRow {
            step: t,
            omega_coarse: oc,
            omega_fine_measured: of,
            omega_fine_predicted: pred,
            rel_err: rel_err(pred, of),
        });
    }
    let sat_omega_coarse = coarse.saturation_mean(|r| r.omega_heavy);
    let sat_omega_fine = fine.saturation_mean(|r| r.omega_heavy);
    let sat_predicted = scaling_predict(sat_omega_coarse, ratio)?;
    Ok(ScalingTable {
        k: coarse.k,
        hbar_coarse: coarse.hbar_eff,
        hbar_fine: fine.hbar_eff,
        ratio,
        rows,
        sat_omega_coarse,
        sat_omega_fine,
        sat_predicted,
        sat_rel_err: rel_err(sat_predicted, sat_omega_fine),
        in_domain: sat_omega_coarse > OUT_OF_DOMAIN_OMEGA,
        monotone: sat_omega_fine > sat_omega_coarse,
    })
}

/// Tables for consecutive refinements (coarse to fine) within each k.
pub fn scaling_tables_from_runs(runs: &[RunResult]) -> Result<Vec<ScalingTable>> {
    let mut ks: Vec<f64> = Vec::new();
    for r in runs {
        if !ks.contains(&r.k) {
            ks.push(r.k);
        }
    }
    let mut tables = Vec::new();
    for k in ks {
        let mut group: Vec<&RunResult> = runs.iter().filter(|r| r.k == k).collect();
        if group.len() < 2 {
            return Err(Error::config(format!(
                "scaling at k = {k} needs at least two hbar_eff values"
            )));
        }
        group.sort_by(|a, b| b.hbar_eff.total_cmp(&a.hbar_eff));
        for pair in group.windows(2) {
            tables.push(scaling_table(pair[0], pair[1])?);
        }
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub runs: Vec<RunResult>,
    pub tables: Vec<ScalingTable>,
}

pub fn run_scaling_sweep(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    if cfg.hbar_eff.len() < 2 {
        return Err(Error::config("the scaling sweep needs at least two hbar_eff values"));
    }
    cfg.validate()?;
    let runs = run_grid(cfg, &[])?;
    let tables = scaling_tables_from_runs(&runs)?;
    Ok(ScalingReport { runs, tables })
}

/// Quantum/classical agreement for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceRow {
    pub k: f64,
    pub hbar_eff: f64,
    pub hash: String,
    /// Correlation of `omega_heavy` with `M` over the whole run.
    pub pearson: f64,
    /// Largest `|omega_heavy - M|` in the saturation window.
    pub saturation_gap: f64,
    pub probe_step: usize,
    pub probe_tv: f64,
    pub probe_max_offdiag: f64,
    pub probe_reduced_distance: f64,
    pub probe_global_distance: f64,
    pub final_reduced_distance: f64,
    pub final_global_distance: f64,
    pub valid: bool,
}

pub fn correspondence_row(run: &RunResult, probe_step: usize) -> CorrespondenceRow {
    let omega = run.series(|r| r.omega_heavy);
    let m = run.series(|r| r.mutual_information);
    let last = run.records.len() - 1;
    let saturation_gap = saturation_window(last)
        .map(|t| (omega[t] - m[t]).abs())
        .fold(0.0, f64::max);
    let probe = &run.records[probe_step.min(last)];
    let snap = |t: usize| run.snapshot(t).copied();
    let nan = Snapshot {
        step: 0,
        reduced_distance: f64::NAN,
        global_distance: f64::NAN,
    };
    let ps = snap(probe.step).unwrap_or(nan);
    let fs = snap(last).unwrap_or(nan);
    CorrespondenceRow {
        k: run.k,
        hbar_eff: run.hbar_eff,
        hash: run.hash.clone(),
        pearson: pearson(&omega, &m),
        saturation_gap,
        probe_step: probe.step,
        probe_tv: probe.tv_distance,
        probe_max_offdiag: probe.max_offdiag,
        probe_reduced_distance: ps.reduced_distance,
        probe_global_distance: ps.global_distance,
        final_reduced_distance: fs.reduced_distance,
        final_global_distance: fs.global_distance,
        valid: run.valid,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub runs: Vec<RunResult>,
    pub rows: Vec<CorrespondenceRow>,
}

/// Runs every `(k, hbar_eff)` with trace-distance snapshots at the probe
/// step and the final step.
pub fn run_correspondence(cfg: &ExperimentConfig) -> Result<CorrespondenceReport> {
    cfg.validate()?;
    let mut snaps = vec![cfg.probe_step, cfg.steps];
    snaps.dedup();
    let runs = run_grid(cfg, &snaps)?;
    let rows = runs
        .iter()
        .map(|r| correspondence_row(r, cfg.probe_step))
        .collect();
    Ok(CorrespondenceReport { runs, rows })
}

/// Result of any experiment kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentOutput {
    Entropy(Vec<RunResult>),
    Sos(Vec<SosResult>),
    Scaling(ScalingReport),
    Correspond(CorrespondenceReport),
}

impl ExperimentOutput {
    pub fn runs(&self) -> &[RunResult] {
        match self {
            ExperimentOutput::Entropy(r) => r,
            ExperimentOutput::Sos(_) => &[],
            ExperimentOutput::Scaling(s) => &s.runs,
            ExperimentOutput::Correspond(c) => &c.runs,
        }
    }

    pub fn all_valid(&self) -> bool {
        self.runs().iter().all(|r| r.valid)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    Ok(match cfg.experiment {
        ExperimentKind::Entropy => ExperimentOutput::Entropy(run_entanglement_experiment(cfg)?),
        ExperimentKind::Sos => ExperimentOutput::Sos(run_sos_experiment(cfg)?),
        ExperimentKind::Scaling => ExperimentOutput::Scaling(run_scaling_sweep(cfg)?),
        ExperimentKind::Correspond => ExperimentOutput::Correspond(run_correspondence(cfg)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::RotorSetup;

    fn small(k: f64) -> ExperimentConfig {
        ExperimentConfig {
            k: vec![k],
            hbar_eff: vec![0.25, 0.125],
            init_light: RotorSetup::Gaussian {
                momentum: 0.0,
                angle: 0.0,
                width: 0.3,
            },
            n_traj: 2000,
            steps: 12,
            probe_step: 2,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn uncoupled_runs_stay_unentangled() {
        let runs = run_entanglement_experiment(&small(0.0)).unwrap();
        assert_eq!(runs.len(), 2);
        for r in &runs {
            assert!(r.valid);
            assert_eq!(r.records.len(), 13);
            for rec in &r.records {
                assert!(rec.omega_heavy <= 1e-12 && rec.omega_light <= 1e-12);
                assert_eq!(rec.mutual_information, 0.0);
            }
        }
    }

    #[test]
    fn zero_steps_gives_single_record() {
        let cfg = small(0.45);
        let mut spec = RunSpec::from_config(&cfg, 0.45, 0.25).unwrap();
        spec.steps = 0;
        let r = run_single(&spec).unwrap();
        assert_eq!(r.records.len(), 1);
        let rec = &r.records[0];
        assert!(rec.omega_heavy <= 1e-12);
        assert_eq!(rec.mutual_information, 0.0);
        // heavy eigenstate: both distributions are the same delta
        assert_eq!(rec.tv_distance, 0.0);
    }

    #[test]
    fn records_satisfy_symmetry_and_ranges() {
        let r = &run_entanglement_experiment(&small(0.45)).unwrap()[1];
        assert!(r.valid, "{:?}", r.notes);
        for rec in &r.records {
            assert!((rec.omega_heavy - rec.omega_light).abs() <= 1e-10);
            for x in [rec.omega_heavy, rec.mutual_information, rec.tv_distance] {
                assert!((0.0..=1.0).contains(&x));
            }
        }
        assert!(r.records.last().unwrap().omega_heavy > 0.01);
    }

    #[test]
    fn identical_hbar_predicts_exactly() {
        let mut cfg = small(0.45);
        cfg.hbar_eff = vec![0.125, 0.125];
        let rep = run_scaling_sweep(&cfg).unwrap();
        assert_eq!(rep.tables.len(), 1);
        let t = &rep.tables[0];
        assert_eq!(t.ratio, 1.0);
        for row in &t.rows {
            assert_eq!(row.omega_fine_predicted, row.omega_fine_measured);
            assert_eq!(row.rel_err, 0.0);
        }
    }

    #[test]
    fn uncoupled_scaling_is_flagged_out_of_domain() {
        let rep = run_scaling_sweep(&small(0.0)).unwrap();
        let t = &rep.tables[0];
        assert!(!t.in_domain);
        assert!(t.sat_omega_coarse <= 1e-12);
        assert!((t.sat_predicted - (1.0 - t.ratio)).abs() <= 1e-12);
        assert_eq!(t.hbar_coarse, 0.25);
    }

    #[test]
    fn scaling_needs_two_hbar_values() {
        let mut cfg = small(0.45);
        cfg.hbar_eff = vec![0.25];
        assert!(matches!(run_scaling_sweep(&cfg), Err(Error::Config(_))));
        let runs = run_entanglement_experiment(&cfg).unwrap();
        assert!(matches!(scaling_tables_from_runs(&runs), Err(Error::Config(_))));
    }

    #[test]
    fn correspondence_snapshots_are_filled() {
        let rep = run_correspondence(&small(0.45)).unwrap();
        for row in &rep.rows {
            assert!(row.probe_reduced_distance.is_finite());
            assert!(row.final_global_distance >= row.final_reduced_distance - 1e-12);
            assert!((0.0..=1.0).contains(&row.final_global_distance));
        }
    }

    #[test]
    fn sections_ignore_the_seed() {
        let mut cfg = small(1.0);
        cfg.sos_iterations = 50;
        cfg.lyapunov_steps = 2000;
        let a = run_sos_experiment(&cfg).unwrap();
        cfg.seed = 99;
        let b = run_sos_experiment(&cfg).unwrap();
        assert_eq!(a[0].orbits, b[0].orbits);
        assert_eq!(a[0].lyapunov, b[0].lyapunov);
    }

    #[test]
    fn uncoupled_sections_are_regular() {
        let mut cfg = small(0.0);
        cfg.lyapunov_steps = 5000;
        let r = run_sos_experiment(&cfg).unwrap();
        assert_eq!(r[0].regime, Regime::Regular);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = small(0.45);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let strip = |mut v: Vec<RunResult>| {
            v.iter_mut().for_each(|r| r.wall_time = Duration::ZERO);
            v
        };
        let a = strip(one.install(|| run_correspondence(&cfg)).unwrap().runs);
        let b = strip(many.install(|| run_correspondence(&cfg)).unwrap().runs);
        assert_eq!(a, b);
    }
}
