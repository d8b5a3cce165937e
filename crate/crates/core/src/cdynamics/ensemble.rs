use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{map_step, KickParams, PhasePoint};
use crate::error::{Error, Result};
use crate::par;
use crate::qdynamics::{HilbertConfig, InitialStateSpec, RotorInit};

/// Weighted set of classical phase points.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub points: Vec<PhasePoint>,
    pub weights: Vec<f64>,
    pub seed: u64,
    /// Human-readable description of the initial distribution.
    pub generation: String,
}

impl Ensemble {
    /// Equal weights `1/len`.
    pub fn uniform(points: Vec<PhasePoint>, seed: u64, generation: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::config("an ensemble needs at least one point"));
        }
        let w = 1.0 / points.len() as f64;
        Ok(Ensemble {
            weights: vec![w; points.len()],
            points,
            seed,
            generation: generation.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Applies one period of the map to every point.
    pub fn advance(&mut self, params: &KickParams) {
        par::for_each_mut(&mut self.points, |p| *p = map_step(p, params));
    }

    /// Weighted mean of `f` with a fixed reduction order.
    pub fn mean_by<F>(&self, f: F) -> f64
    where
        F: Fn(&PhasePoint) -> f64 + Sync + Send,
    {
        let pairs: Vec<(PhasePoint, f64)> = self
            .points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .collect();
        par::sum_by(&pairs, |(p, w)| w * f(p)) / self.total_weight()
    }
}

/// Momentum and angle of one rotor drawn from the classical counterpart of its
/// quantum initial state.
fn sample_rotor(init: &RotorInit, hbar: f64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    match *init {
        RotorInit::Eigenstate { m } => (hbar * m as f64, TAU * rng.random::<f64>()),
        RotorInit::Gaussian {
            center_m,
            angle_center,
            width_m,
        } => {
            let zp: f64 = StandardNormal.sample(rng);
            let za: f64 = StandardNormal.sample(rng);
            // Minimum-uncertainty packet: sigma_theta = hbar / (2 sigma_p).
            let momentum = hbar * (center_m + width_m * zp);
            let angle = angle_center + za / (2.0 * width_m);
            (momentum, angle)
        }
    }
}

/// Classical counterpart of the quantum product state.
///
/// A momentum eigenstate `m` becomes a sharp momentum `hbar m` with uniform
/// angle; a Gaussian packet becomes a Gaussian in momentum and angle with the
/// packet's variances. Trajectory `i` draws from ChaCha stream `i` of `seed`,
/// so the ensemble does not depend on how work is scheduled.
pub fn sample_initial(
    init: &InitialStateSpec,
    hilbert: &HilbertConfig,
    n_traj: usize,
    seed: u64,
) -> Result<Ensemble> {
    if n_traj == 0 {
        return Err(Error::config("n_traj must be at least 1"));
    }
    let hbar = hilbert.hbar_eff;
    let points = par::map_range(n_traj, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let (n, theta) = sample_rotor(&init.heavy, hbar, &mut rng);
        let (l, phi) = sample_rotor(&init.light, hbar, &mut rng);
        PhasePoint::new(theta, n, phi, l)
    });
    Ensemble::uniform(points, seed, format!("{init:?} at hbar_eff = {hbar}"))
}

/// The ensemble after `0..=steps` periods (`steps + 1` snapshots).
pub fn evolve_ensemble(e: &Ensemble, steps: usize, params: &KickParams) -> Vec<Ensemble> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = e.clone();
    out.push(cur.clone());
    for _ in 0..steps {
        cur.advance(params);
        out.push(cur.clone());
    }
    out
}
