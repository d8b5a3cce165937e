use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::cdynamics::{ChaosThresholds, KickParams, PhasePoint, SectionCoords};
use crate::error::{Error, Result};
use crate::qdynamics::{
    quanta, rotor_amplitudes, FloquetSpec, HilbertConfig, InitialStateSpec, RotorInit, Subsystem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Entropy,
    Sos,
    Scaling,
    Correspond,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Entropy => "entropy",
            ExperimentKind::Sos => "sos",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Correspond => "correspond",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(ExperimentKind::Entropy),
            "sos" => Ok(ExperimentKind::Sos),
            "scaling" => Ok(ExperimentKind::Scaling),
            "correspond" => Ok(ExperimentKind::Correspond),
            _ => Err(Error::config(format!("unknown experiment `{s}`"))),
        }
    }
}

/// Initial state of one rotor in action units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotorSetup {
    /// Momentum eigenstate; `momentum` must be a multiple of every `hbar_eff`.
    Eigenstate { momentum: f64 },
    /// Gaussian wavepacket with momentum standard deviation `width`.
    Gaussian { momentum: f64, angle: f64, width: f64 },
}

impl RotorSetup {
    pub fn to_quanta(&self, hbar: f64) -> Result<RotorInit> {
        match *self {
            RotorSetup::Eigenstate { momentum } => quanta(momentum, hbar)
                .map(|m| RotorInit::Eigenstate { m })
                .ok_or_else(|| {
                    Error::config(format!(
                        "eigenstate momentum {momentum} is not a multiple of hbar_eff = {hbar}"
                    ))
                }),
            RotorSetup::Gaussian {
                momentum,
                angle,
                width,
            } => Ok(RotorInit::Gaussian {
                center_m: momentum / hbar,
                angle_center: angle,
                width_m: width / hbar,
            }),
        }
    }
}

/// Numerical validity thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum quantum edge probability and classical out-of-window mass.
    pub leak: f64,
    /// Maximum `|norm^2 - 1|`.
    pub norm: f64,
    /// Maximum `|omega_heavy - omega_light|`.
    pub symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            leak: 1e-3,
            norm: 1e-10,
            symmetry: 1e-10,
        }
    }
}

/// Pass thresholds for the correspondence and scaling checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criteria {
    pub scaling_rel_err: f64,
    pub pearson_min: f64,
    pub saturation_gap_max: f64,
    pub reduced_distance_max: f64,
    pub global_distance_min: f64,
}

impl Default for Criteria {
    fn default() -> Self {
        Criteria {
            scaling_rel_err: 0.1,
            pearson_min: 0.9,
            saturation_gap_max: 0.05,
            reduced_distance_max: 0.05,
            global_distance_min: 0.5,
        }
    }
}

/// Everything needed to reproduce an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub k: Vec<f64>,
    pub tau: f64,
    pub inertia_heavy: f64,
    pub inertia_light: f64,
    pub hbar_eff: Vec<f64>,
    pub window: (f64, f64),
    pub init_heavy: RotorSetup,
    pub init_light: RotorSetup,
    pub n_traj: usize,
    pub seed: u64,
    pub steps: usize,
    pub out: PathBuf,
    pub tolerance: Tolerances,
    pub chaos: ChaosThresholds,
    pub lyapunov_steps: usize,
    pub lyapunov_p0: PhasePoint,
    pub sos_orbits: usize,
    pub sos_iterations: usize,
    pub sos_momentum_span: f64,
    pub sos_coordinates: SectionCoords,
    pub probe_step: usize,
    pub criteria: Criteria,
    pub plots: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Entropy,
            k: vec![0.45],
            tau: 1.0,
            inertia_heavy: 1.0,
            inertia_light: 1.0,
            hbar_eff: vec![1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
            window: (-2.0, 2.0),
            init_heavy: RotorSetup::Eigenstate { momentum: 0.0 },
            init_light: RotorSetup::Gaussian {
                momentum: 0.0,
                angle: 0.0,
                width: 0.2,
            },
            n_traj: 100_000,
            seed: 1,
            steps: 200,
            out: PathBuf::from("out"),
            tolerance: Tolerances::default(),
            chaos: ChaosThresholds::default(),
            lyapunov_steps: 20_000,
            lyapunov_p0: PhasePoint::new(0.1, 0.0, 0.0, 0.0),
            sos_orbits: 12,
            sos_iterations: 1000,
            sos_momentum_span: 2.0,
            sos_coordinates: SectionCoords::Relative,
            probe_step: 2,
            criteria: Criteria::default(),
            plots: true,
        }
    }
}

const KEYS: &[&str] = &[
    "experiment",
    "model.k",
    "model.tau",
    "model.inertia_heavy",
    "model.inertia_light",
    "basis.hbar_eff",
    "basis.window",
    "init.heavy.kind",
    "init.heavy.momentum",
    "init.heavy.angle",
    "init.heavy.width",
    "init.light.kind",
    "init.light.momentum",
    "init.light.angle",
    "init.light.width",
    "classical.n_traj",
    "run.seed",
    "run.steps",
    "run.out",
    "tolerance.leak",
    "tolerance.norm",
    "tolerance.symmetry",
    "chaos.regular_max",
    "chaos.chaotic_min",
    "lyapunov.steps",
    "lyapunov.p0",
    "sos.orbits",
    "sos.iterations",
    "sos.momentum_span",
    "sos.coordinates",
    "correspond.probe_step",
    "criteria.scaling_rel_err",
    "criteria.pearson_min",
    "criteria.saturation_gap_max",
    "criteria.reduced_distance_max",
    "criteria.global_distance_min",
    "plots",
];

fn parse_number(key: &str, s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::config(format!("{key}: `{s}` is not a number"));
    let x = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| parse_number(key, x)).collect()
}

fn parse_int<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: `{s}` is not a non-negative integer")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::config(format!("{key}: expected true or false, got `{s}`"))),
    }
}

fn fixed<const N: usize>(key: &str, s: &str) -> Result<[f64; N]> {
    let v = parse_list(key, s)?;
    v.try_into()
        .map_err(|_| Error::config(format!("{key}: expected {N} comma-separated values")))
}

fn render_f64(x: f64) -> String {
    format!("{x:?}")
}

fn render_list(xs: &[f64]) -> String {
    xs.iter().map(|x| render_f64(*x)).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    /// Parses `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_for(text, None)
    }

    /// As [`parse`](Self::parse), for a fixed experiment kind. A conflicting
    /// `experiment` key is an error.
    pub fn parse_for(text: &str, kind: Option<ExperimentKind>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        let mut cfg = ExperimentConfig::default();
        let get = |k: &str| entries.get(k).map(String::as_str);
        if let Some(v) = get("experiment") {
            cfg.experiment = ExperimentKind::parse(v)?;
        }
        if let Some(kind) = kind {
            if get("experiment").is_some() && cfg.experiment != kind {
                return Err(Error::config(format!(
                    "config is for `{}`, not `{}`",
                    cfg.experiment.as_str(),
                    kind.as_str()
                )));
            }
            cfg.experiment = kind;
        }
        if let Some(v) = get("model.k") {
            cfg.k = parse_list("model.k", v)?;
        }
        if let Some(v) = get("model.tau") {
            cfg.tau = parse_number("model.tau", v)?;
        }
        if let Some(v) = get("model.inertia_heavy") {
            cfg.inertia_heavy = parse_number("model.inertia_heavy", v)?;
        }
        if let Some(v) = get("model.inertia_light") {
            cfg.inertia_light = parse_number("model.inertia_light", v)?;
        }
        if let Some(v) = get("basis.hbar_eff") {
            cfg.hbar_eff = parse_list("basis.hbar_eff", v)?;
        }
        if let Some(v) = get("basis.window") {
            let [lo, hi] = fixed("basis.window", v)?;
            cfg.window = (lo, hi);
        }
        cfg.init_heavy = parse_rotor(&entries, "heavy", cfg.init_heavy)?;
        cfg.init_light = parse_rotor(&entries, "light", cfg.init_light)?;
        if let Some(v) = get("classical.n_traj") {
            cfg.n_traj = parse_int("classical.n_traj", v)?;
        }
        if let Some(v) = get("run.seed") {
            cfg.seed = parse_int("run.seed", v)?;
        }
        if let Some(v) = get("run.steps") {
            cfg.steps = parse_int("run.steps", v)?;
        }
        if let Some(v) = get("run.out") {
            cfg.out = PathBuf::from(v);
        }
        if let Some(v) = get("tolerance.leak") {
            cfg.tolerance.leak = parse_number("tolerance.leak", v)?;
        }
        if let Some(v) = get("tolerance.norm") {
            cfg.tolerance.norm = parse_number("tolerance.norm", v)?;
        }
        if let Some(v) = get("tolerance.symmetry") {
            cfg.tolerance.symmetry = parse_number("tolerance.symmetry", v)?;
        }
        if let Some(v) = get("chaos.regular_max") {
            cfg.chaos.regular_max = parse_number("chaos.regular_max", v)?;
        }
        if let Some(v) = get("chaos.chaotic_min") {
            cfg.chaos.chaotic_min = parse_number("chaos.chaotic_min", v)?;
        }
        if let Some(v) = get("lyapunov.steps") {
            cfg.lyapunov_steps = parse_int("lyapunov.steps", v)?;
        }
        if let Some(v) = get("lyapunov.p0") {
            let [t, n, p, l] = fixed("lyapunov.p0", v)?;
            cfg.lyapunov_p0 = PhasePoint::new(t, n, p, l);
        }
        if let Some(v) = get("sos.orbits") {
            cfg.sos_orbits = parse_int("sos.orbits", v)?;
        }
        if let Some(v) = get("sos.iterations") {
            cfg.sos_iterations = parse_int("sos.iterations", v)?;
        }
        if let Some(v) = get("sos.momentum_span") {
            cfg.sos_momentum_span = parse_number("sos.momentum_span", v)?;
        }
        if let Some(v) = get("sos.coordinates") {
            cfg.sos_coordinates = match v {
                "absolute" => SectionCoords::Absolute,
                "relative" => SectionCoords::Relative,
                _ => {
                    return Err(Error::config(format!(
                        "sos.coordinates: expected absolute or relative, got `{v}`"
                    )))
                }
            };
        }
        if let Some(v) = get("correspond.probe_step") {
            cfg.probe_step = parse_int("correspond.probe_step", v)?;
        }
        let c = &mut cfg.criteria;
        for (key, slot) in [
            ("criteria.scaling_rel_err", &mut c.scaling_rel_err),
            ("criteria.pearson_min", &mut c.pearson_min),
            ("criteria.saturation_gap_max", &mut c.saturation_gap_max),
            ("criteria.reduced_distance_max", &mut c.reduced_distance_max),
            ("criteria.global_distance_min", &mut c.global_distance_min),
        ] {
            if let Some(v) = entries.get(key) {
                *slot = parse_number(key, v)?;
            }
        }
        if let Some(v) = get("plots") {
            cfg.plots = parse_bool("plots", v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, kind: Option<ExperimentKind>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse_for(&text, kind)
    }

    /// Checks every invariant before any computation starts.
    pub fn validate(&self) -> Result<()> {
        if self.k.is_empty() {
            return Err(Error::config("model.k is empty"));
        }
        if self.hbar_eff.is_empty() {
            return Err(Error::config("basis.hbar_eff is empty"));
        }
        for &k in &self.k {
            KickParams::new(k, self.tau, self.inertia_heavy, self.inertia_light).validate()?;
        }
        if self.steps < 1 {
            return Err(Error::config("run.steps must be at least 1"));
        }
        if self.n_traj < 1 {
            return Err(Error::config("classical.n_traj must be at least 1"));
        }
        for (name, t) in [
            ("tolerance.leak", self.tolerance.leak),
            ("tolerance.norm", self.tolerance.norm),
            ("tolerance.symmetry", self.tolerance.symmetry),
        ] {
            if !(t >= 0.0) {
                return Err(Error::config(format!("{name} must be non-negative")));
            }
        }
        if !(self.chaos.regular_max <= self.chaos.chaotic_min) {
            return Err(Error::config("chaos.regular_max exceeds chaos.chaotic_min"));
        }
        if self.lyapunov_steps < 1000 {
            return Err(Error::config("lyapunov.steps must be at least 1000"));
        }
        if self.sos_orbits < 1 || self.sos_iterations < 1 {
            return Err(Error::config("sos.orbits and sos.iterations must be at least 1"));
        }
        if self.probe_step > self.steps {
            return Err(Error::config(format!(
                "correspond.probe_step {} exceeds run.steps {}",
                self.probe_step, self.steps
            )));
        }
        if self.experiment == ExperimentKind::Scaling && self.hbar_eff.len() < 2 {
            return Err(Error::config("the scaling sweep needs at least two hbar_eff values"));
        }
        for &h in &self.hbar_eff {
            let hilbert = self.hilbert(h)?;
            let init = self.initial_state(h)?;
            rotor_amplitudes(&init.heavy, &hilbert, Subsystem::Heavy)?;
            rotor_amplitudes(&init.light, &hilbert, Subsystem::Light)?;
        }
        Ok(())
    }

    pub fn kick(&self, k: f64) -> KickParams {
        KickParams::new(k, self.tau, self.inertia_heavy, self.inertia_light)
    }

    pub fn hilbert(&self, hbar: f64) -> Result<HilbertConfig> {
        HilbertConfig::from_window(self.window.0, self.window.1, hbar)
    }

    pub fn floquet(&self, k: f64, hbar: f64) -> Result<FloquetSpec> {
        FloquetSpec::new(self.kick(k), self.hilbert(hbar)?)
    }

    pub fn initial_state(&self, hbar: f64) -> Result<InitialStateSpec> {
        Ok(InitialStateSpec {
            heavy: self.init_heavy.to_quanta(hbar)?,
            light: self.init_light.to_quanta(hbar)?,
        })
    }

    /// Deterministic text form: every key, fixed order, round-trip floats.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("experiment", self.experiment.as_str().into());
        put("model.k", render_list(&self.k));
        put("model.tau", render_f64(self.tau));
        put("model.inertia_heavy", render_f64(self.inertia_heavy));
        put("model.inertia_light", render_f64(self.inertia_light));
        put("basis.hbar_eff", render_list(&self.hbar_eff));
        put("basis.window", render_list(&[self.window.0, self.window.1]));
        for (name, r) in [("heavy", &self.init_heavy), ("light", &self.init_light)] {
            match *r {
                RotorSetup::Eigenstate { momentum } => {
                    put(&format!("init.{name}.kind"), "eigenstate".into());
                    put(&format!("init.{name}.momentum"), render_f64(momentum));
                }
                RotorSetup::Gaussian {
                    momentum,
                    angle,
                    width,
                } => {
                    put(&format!("init.{name}.kind"), "gaussian".into());
                    put(&format!("init.{name}.momentum"), render_f64(momentum));
                    put(&format!("init.{name}.angle"), render_f64(angle));
                    put(&format!("init.{name}.width"), render_f64(width));
                }
            }
        }
        put("classical.n_traj", self.n_traj.to_string());
        put("run.seed", self.seed.to_string());
        put("run.steps", self.steps.to_string());
        put("tolerance.leak", render_f64(self.tolerance.leak));
        put("tolerance.norm", render_f64(self.tolerance.norm));
        put("tolerance.symmetry", render_f64(self.tolerance.symmetry));
        put("chaos.regular_max", render_f64(self.chaos.regular_max));
        put("chaos.chaotic_min", render_f64(self.chaos.chaotic_min));
        put("lyapunov.steps", self.lyapunov_steps.to_string());
        let p = self.lyapunov_p0;
        put("lyapunov.p0", render_list(&[p.theta, p.n, p.phi, p.l]));
        put("sos.orbits", self.sos_orbits.to_string());
        put("sos.iterations", self.sos_iterations.to_string());
        put("sos.momentum_span", render_f64(self.sos_momentum_span));
        put(
            "sos.coordinates",
            match self.sos_coordinates {
                SectionCoords::Absolute => "absolute",
                SectionCoords::Relative => "relative",
            }
            .into(),
        );
        put("correspond.probe_step", self.probe_step.to_string());
        let c = &self.criteria;
        put("criteria.scaling_rel_err", render_f64(c.scaling_rel_err));
        put("criteria.pearson_min", render_f64(c.pearson_min));
        put("criteria.saturation_gap_max", render_f64(c.saturation_gap_max));
        put("criteria.reduced_distance_max", render_f64(c.reduced_distance_max));
        put("criteria.global_distance_min", render_f64(c.global_distance_min));
        put("plots", self.plots.to_string());
        s
    }

    /// SHA-256 of the canonical form. The output directory is not part of it.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    /// Hash of the single run at `(k, hbar)`, used to name its files.
    pub fn run_hash(&self, k: f64, hbar: f64) -> String {
        let mut one = self.clone();
        one.k = vec![k];
        one.hbar_eff = vec![hbar];
        one.hash()[..16].to_string()
    }
}

fn parse_rotor(
    entries: &BTreeMap<String, String>,
    name: &str,
    default: RotorSetup,
) -> Result<RotorSetup> {
    let key = |f: &str| format!("init.{name}.{f}");
    let get = |f: &str| entries.get(&key(f)).map(String::as_str);
    let num = |f: &str, d: f64| get(f).map_or(Ok(d), |v| parse_number(&key(f), v));
    let (d_momentum, d_angle, d_width) = match default {
        RotorSetup::Eigenstate { momentum } => (momentum, 0.0, 0.2),
        RotorSetup::Gaussian {
            momentum,
            angle,
            width,
        } => (momentum, angle, width),
    };
    let kind = match get("kind") {
        Some(v) => v,
        None => match default {
            RotorSetup::Eigenstate { .. } => "eigenstate",
            RotorSetup::Gaussian { .. } => "gaussian",
        },
    };
    match kind {
        "eigenstate" => {
            if get("angle").is_some() || get("width").is_some() {
                return Err(Error::config(format!(
                    "init.{name}: angle and width do not apply to an eigenstate"
                )));
            }
            Ok(RotorSetup::Eigenstate {
                momentum: num("momentum", d_momentum)?,
            })
        }
        "gaussian" => {
            let width = num("width", d_width)?;
            if !(width > 0.0) {
                return Err(Error::config(format!("{} must be positive", key("width"))));
            }
            Ok(RotorSetup::Gaussian {
                momentum: num("momentum", d_momentum)?,
                angle: num("angle", d_angle)?,
                width,
            })
        }
        other => Err(Error::config(format!(
            "{}: expected eigenstate or gaussian, got `{other}`",
            key("kind")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn parses_lists_fractions_and_comments() {
        let cfg = ExperimentConfig::parse(
            "experiment = sos\n# comment\nmodel.k = 0.25, 1, 10  # trailing\nbasis.hbar_eff = 1/16, 1/32\n",
        )
        .unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Sos);
        assert_eq!(cfg.k, vec![0.25, 1.0, 10.0]);
        assert_eq!(cfg.hbar_eff, vec![0.0625, 0.03125]);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        assert!(matches!(
            ExperimentConfig::parse("model.kk = 1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::parse("model.k = 1\nmodel.k = 2"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::parse("model.k 1"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn invalid_values_are_rejected() {
        for text in [
            "model.k = -1",
            "model.k = abc",
            "run.steps = 0",
            "basis.hbar_eff = 0.3",
            "init.heavy.momentum = 0.01",
            "init.light.width = 0.01",
            "experiment = scaling\nbasis.hbar_eff = 1/16",
            "correspond.probe_step = 500",
            "init.heavy.kind = eigenstate\ninit.heavy.width = 1",
            "plots = yes",
        ] {
            assert!(
                matches!(ExperimentConfig::parse(text), Err(Error::Config(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn fixed_kind_overrides_default_but_not_explicit_key() {
        let cfg = ExperimentConfig::parse_for("model.k = 1", Some(ExperimentKind::Sos)).unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Sos);
        assert!(ExperimentConfig::parse_for("experiment = sos", Some(ExperimentKind::Entropy))
            .is_err());
    }

    #[test]
    fn canonical_form_round_trips() {
        let cfg = ExperimentConfig::parse(
            "model.k = 0.1, 0.3\ninit.heavy.kind = gaussian\ninit.heavy.width = 0.25\nlyapunov.p0 = 0, 0.8, 0, -0.8",
        )
        .unwrap();
        let again = ExperimentConfig::parse(&cfg.canonical()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.hash(), cfg.hash());
    }

    #[test]
    fn hash_ignores_output_directory_only() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.out = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.seed = 2;
        assert_ne!(a.hash(), b.hash());
        assert_ne!(a.run_hash(0.45, 0.0625), a.run_hash(0.45, 0.03125));
        assert_eq!(a.hash().len(), 64);
    }
}
