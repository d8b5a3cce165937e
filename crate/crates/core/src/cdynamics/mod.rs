//! Classical counterpart of the kicked rotor pair: the stroboscopic kick map,
//! trajectory ensembles and chaos diagnostics.
//!
//! One period is free flight `theta += tau n / I_h`, `phi += tau l / I_l`
//! followed by the kick `n += k sin(theta - phi)`, `l -= k sin(theta - phi)`.
//! The map conserves `n + l` and has unit Jacobian determinant. In relative
//! coordinates it is the standard map with stochasticity parameter
//! `K = k tau (1/I_h + 1/I_l)`.

mod chaos;
mod ensemble;

use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub use chaos::{
    classify, lyapunov_estimate, lyapunov_with_tangent, surface_of_section, ChaosThresholds,
    Regime, SectionCoords, SectionOrbit,
};
pub use ensemble::{evolve_ensemble, sample_initial, Ensemble};

/// Classical parameters of one kick period. `hbar_eff` is deliberately absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickParams {
    pub k: f64,
    pub tau: f64,
    pub inertia_heavy: f64,
    pub inertia_light: f64,
}

impl KickParams {
    pub fn new(k: f64, tau: f64, inertia_heavy: f64, inertia_light: f64) -> Self {
        KickParams {
            k,
            tau,
            inertia_heavy,
            inertia_light,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k >= 0.0) || !self.k.is_finite() {
            return Err(Error::config(format!("kick strength must be >= 0, got {}", self.k)));
        }
        if !(self.tau >= 0.0) || !self.tau.is_finite() {
            return Err(Error::config(format!("tau must be >= 0, got {}", self.tau)));
        }
        if !(self.inertia_heavy > 0.0 && self.inertia_light > 0.0) {
            return Err(Error::config("inertias must be positive"));
        }
        Ok(())
    }

    /// Standard-map parameter of the relative motion.
    pub fn stochasticity(&self) -> f64 {
        self.k * self.tau * (1.0 / self.inertia_heavy + 1.0 / self.inertia_light)
    }
}

/// Point of the four-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub n: f64,
    pub phi: f64,
    pub l: f64,
}

impl PhasePoint {
    pub fn new(theta: f64, n: f64, phi: f64, l: f64) -> Self {
        PhasePoint {
            theta: theta.rem_euclid(TAU),
            n,
            phi: phi.rem_euclid(TAU),
            l,
        }
    }

    pub fn total_momentum(&self) -> f64 {
        self.n + self.l
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.theta, self.n, self.phi, self.l]
    }
}

/// One period of the map.
#[inline]
pub fn map_step(p: &PhasePoint, params: &KickParams) -> PhasePoint {
    let theta = (p.theta + params.tau * p.n / params.inertia_heavy).rem_euclid(TAU);
    let phi = (p.phi + params.tau * p.l / params.inertia_light).rem_euclid(TAU);
    let s = params.k * (theta - phi).sin();
    PhasePoint {
        theta,
        n: p.n + s,
        phi,
        l: p.l - s,
    }
}

/// Exact inverse of [`map_step`]: undo the kick, then the free flight.
pub fn inverse_map_step(p: &PhasePoint, params: &KickParams) -> PhasePoint {
    let s = params.k * (p.theta - p.phi).sin();
    let n = p.n - s;
    let l = p.l + s;
    PhasePoint {
        theta: (p.theta - params.tau * n / params.inertia_heavy).rem_euclid(TAU),
        n,
        phi: (p.phi - params.tau * l / params.inertia_light).rem_euclid(TAU),
        l,
    }
}

/// Analytic Jacobian of [`map_step`] in the ordering `(theta, n, phi, l)`.
pub fn jacobian(p: &PhasePoint, params: &KickParams) -> [[f64; 4]; 4] {
    let a = params.tau / params.inertia_heavy;
    let b = params.tau / params.inertia_light;
    let next = map_step(p, params);
    let c = params.k * (next.theta - next.phi).cos();
    // Free flight F, then kick: dn += c (dtheta - dphi), dl -= c (dtheta - dphi).
    [
        [1.0, a, 0.0, 0.0],
        [c, 1.0 + c * a, -c, -c * b],
        [0.0, 0.0, 1.0, b],
        [-c, -c * a, c, 1.0 + c * b],
    ]
}

/// Tangent vector pushed through one period at `p` (before the step).
#[inline]
pub(crate) fn tangent_step(p: &PhasePoint, v: [f64; 4], params: &KickParams) -> (PhasePoint, [f64; 4]) {
    let next = map_step(p, params);
    let dtheta = v[0] + params.tau * v[1] / params.inertia_heavy;
    let dphi = v[2] + params.tau * v[3] / params.inertia_light;
    let c = params.k * (next.theta - next.phi).cos() * (dtheta - dphi);
    (next, [dtheta, v[1] + c, dphi, v[3] - c])
}
