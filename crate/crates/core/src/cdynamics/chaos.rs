use std::f64::consts::TAU;

use super::{map_step, tangent_step, KickParams, PhasePoint};
use crate::error::{Error, Result};
use crate::par;

/// Variables recorded on the stroboscopic section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionCoords {
    /// `(theta mod 2pi, n)`.
    Absolute,
    /// `((theta - phi) mod 2pi, (n - l) / 2)`, the reduced relative motion.
    Relative,
}

impl SectionCoords {
    fn project(self, p: &PhasePoint) -> (f64, f64) {
        match self {
            SectionCoords::Absolute => (p.theta, p.n),
            SectionCoords::Relative => ((p.theta - p.phi).rem_euclid(TAU), 0.5 * (p.n - p.l)),
        }
    }
}

/// Section points of one trajectory, in iteration order.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionOrbit {
    pub start: PhasePoint,
    pub points: Vec<(f64, f64)>,
}

impl SectionOrbit {
    /// `(min, max)` of the momentum coordinate.
    pub fn momentum_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| {
                (lo.min(y), hi.max(y))
            })
    }
}

/// Records every trajectory immediately after each of `n_iterations` kicks.
pub fn surface_of_section(
    params: &KickParams,
    initial: &[PhasePoint],
    n_iterations: usize,
    coords: SectionCoords,
) -> Vec<SectionOrbit> {
    par::map_slice(initial, |start| {
        let mut p = *start;
        let points = (0..n_iterations)
            .map(|_| {
                p = map_step(&p, params);
                coords.project(&p)
            })
            .collect();
        SectionOrbit {
            start: *start,
            points,
        }
    })
}

/// Largest Lyapunov exponent from the tangent map, renormalised every period.
pub fn lyapunov_estimate(params: &KickParams, p0: &PhasePoint, steps: usize) -> Result<f64> {
    lyapunov_with_tangent(params, p0, [1.0, 0.5, -0.3, 0.2], steps)
}

/// As [`lyapunov_estimate`] with an explicit initial tangent vector.
pub fn lyapunov_with_tangent(
    params: &KickParams,
    p0: &PhasePoint,
    tangent: [f64; 4],
    steps: usize,
) -> Result<f64> {
    if steps < 1000 {
        return Err(Error::config(format!(
            "Lyapunov estimates need at least 1000 steps, got {steps}"
        )));
    }
    let norm = |v: &[f64; 4]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n0 = norm(&tangent);
    if !(n0 > 0.0) {
        return Err(Error::usage("tangent vector must be non-zero"));
    }
    let mut v = tangent.map(|x| x / n0);
    let mut p = *p0;
    let mut log_sum = 0.0;
    for _ in 0..steps {
        let (next, w) = tangent_step(&p, v, params);
        let g = norm(&w);
        log_sum += g.ln();
        v = w.map(|x| x / g);
        p = next;
    }
    Ok((log_sum / steps as f64).max(0.0))
}

/// Lyapunov thresholds separating regular from chaotic motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosThresholds {
    pub regular_max: f64,
    pub chaotic_min: f64,
}

impl Default for ChaosThresholds {
    fn default() -> Self {
        ChaosThresholds {
            regular_max: 0.01,
            chaotic_min: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Regular,
    /// Between the thresholds; left unclassified.
    Mixed,
    Chaotic,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Regular => "regular",
            Regime::Mixed => "mixed",
            Regime::Chaotic => "chaotic",
        }
    }
}

pub fn classify(lyapunov: f64, thresholds: &ChaosThresholds) -> Regime {
    if lyapunov <= thresholds.regular_max {
        Regime::Regular
    } else if lyapunov >= thresholds.chaotic_min {
        Regime::Chaotic
    } else {
        Regime::Mixed
    }
}
