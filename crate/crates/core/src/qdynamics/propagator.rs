use std::f64::consts::TAU;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::basis::{FloquetSpec, Subsystem};
use super::state::BipartiteState;
use crate::par;
use crate::C64;

/// Rows handed to one FFT task.
const ROWS_PER_TASK: usize = 8;

/// Split-step Floquet map for one kick period.
///
/// Free flight is diagonal in the joint momentum basis. The kick
/// `exp(-i k cos(theta - phi) / hbar_eff)` is diagonal in the joint angle basis
/// on the grids `theta_j = 2 pi j / d_heavy`, `phi_j = 2 pi j / d_light`.
/// Momentum amplitudes reach the angle grid through the unitary DFT
/// `a_j = d^{-1/2} sum_m c_m exp(+i m theta_j)` on each axis and return through
/// its adjoint. The basis offset contributes a phase `exp(i m_offset theta_j)`
/// that commutes with the kick and is dropped; both `d^{-1/2}` factors of the
/// round trip are folded into the stored kick table.
pub struct FloquetPropagator {
    spec: FloquetSpec,
    free_phase: Vec<C64>,
    /// Kick phases in transposed (light-major) layout, pre-scaled by
    /// `1 / (d_heavy d_light)`.
    kick_phase_t: Vec<C64>,
    heavy_fwd: Arc<dyn Fft<f64>>,
    heavy_inv: Arc<dyn Fft<f64>>,
    light_fwd: Arc<dyn Fft<f64>>,
    light_inv: Arc<dyn Fft<f64>>,
    transposed: Vec<C64>,
}

impl FloquetPropagator {
    pub fn new(spec: &FloquetSpec) -> Self {
        let h = &spec.hilbert;
        let (dh, dl) = (h.d_heavy, h.d_light);
        let hbar = h.hbar_eff;
        let kp = &spec.kick;

        let free_h: Vec<f64> = (0..dh)
            .map(|j| {
                let p = h.momentum(Subsystem::Heavy, j);
                p * p / (2.0 * kp.inertia_heavy)
            })
            .collect();
        let free_l: Vec<f64> = (0..dl)
            .map(|j| {
                let p = h.momentum(Subsystem::Light, j);
                p * p / (2.0 * kp.inertia_light)
            })
            .collect();
        let free_phase = free_h
            .iter()
            .flat_map(|eh| {
                free_l
                    .iter()
                    .map(move |el| C64::from_polar(1.0, -kp.tau * (eh + el) / hbar))
            })
            .collect();

        let scale = 1.0 / (dh * dl) as f64;
        let z = kp.k / hbar;
        let mut kick_phase_t = Vec::with_capacity(dh * dl);
        for jl in 0..dl {
            let phi = TAU * jl as f64 / dl as f64;
            for jh in 0..dh {
                let theta = TAU * jh as f64 / dh as f64;
                kick_phase_t.push(C64::from_polar(scale, -z * (theta - phi).cos()));
            }
        }

        let mut planner = FftPlanner::new();
        FloquetPropagator {
            spec: *spec,
            free_phase,
            kick_phase_t,
            heavy_fwd: planner.plan_fft_forward(dh),
            heavy_inv: planner.plan_fft_inverse(dh),
            light_fwd: planner.plan_fft_forward(dl),
            light_inv: planner.plan_fft_inverse(dl),
            transposed: vec![C64::new(0.0, 0.0); dh * dl],
        }
    }

    pub fn spec(&self) -> &FloquetSpec {
        &self.spec
    }

    /// Free flight over one period `tau`.
    pub fn apply_free(&self, state: &mut BipartiteState) {
        self.check_shape(state);
        let phase = &self.free_phase;
        let dl = state.d_light();
        par::for_each_chunk_mut(state.amplitudes_mut(), dl, |ih, row| {
            let ph = &phase[ih * dl..(ih + 1) * dl];
            row.iter_mut().zip(ph).for_each(|(c, p)| *c *= p);
        });
    }

    /// The contact kick.
    pub fn apply_kick(&mut self, state: &mut BipartiteState) {
        self.check_shape(state);
        let (dh, dl) = (state.d_heavy(), state.d_light());

        fft_rows(state.amplitudes_mut(), &self.light_inv, dl);
        transpose(state.amplitudes(), &mut self.transposed, dh, dl);
        fft_rows(&mut self.transposed, &self.heavy_inv, dh);

        let kick = &self.kick_phase_t;
        par::for_each_chunk_mut(&mut self.transposed, dh, |jl, row| {
            let ph = &kick[jl * dh..(jl + 1) * dh];
            row.iter_mut().zip(ph).for_each(|(c, p)| *c *= p);
        });

        fft_rows(&mut self.transposed, &self.heavy_fwd, dh);
        transpose(&self.transposed, state.amplitudes_mut(), dl, dh);
        fft_rows(state.amplitudes_mut(), &self.light_fwd, dl);
    }

    /// One Floquet period: free flight followed by the kick.
    pub fn step(&mut self, state: &mut BipartiteState) {
        self.apply_free(state);
        self.apply_kick(state);
        state.time_step += 1;
    }

    fn check_shape(&self, state: &BipartiteState) {
        assert_eq!(
            (state.d_heavy(), state.d_light()),
            (self.spec.hilbert.d_heavy, self.spec.hilbert.d_light),
            "state shape does not match the propagator basis"
        );
    }
}

fn fft_rows(data: &mut [C64], fft: &Arc<dyn Fft<f64>>, len: usize) {
    par::for_each_chunk_mut(data, len * ROWS_PER_TASK, |_, block| {
        let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(block, &mut scratch);
    });
}

/// `dst[c][r] = src[r][c]` for a row-major `rows x cols` source.
fn transpose(src: &[C64], dst: &mut [C64], rows: usize, cols: usize) {
    par::for_each_chunk_mut(dst, rows, |c, out| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    });
}

/// Free flight applied to a copy of `state`.
pub fn apply_free(state: &BipartiteState, spec: &FloquetSpec) -> BipartiteState {
    let mut out = state.clone();
    FloquetPropagator::new(spec).apply_free(&mut out);
    out
}

/// Kick applied to a copy of `state`.
pub fn apply_kick(state: &BipartiteState, spec: &FloquetSpec) -> BipartiteState {
    let mut out = state.clone();
    FloquetPropagator::new(spec).apply_kick(&mut out);
    out
}

/// One Floquet period applied to a copy of `state`.
pub fn step(state: &BipartiteState, spec: &FloquetSpec) -> BipartiteState {
    let mut out = state.clone();
    FloquetPropagator::new(spec).step(&mut out);
    out
}
