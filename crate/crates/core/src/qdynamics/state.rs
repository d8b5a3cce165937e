use nalgebra::DMatrix;

use super::basis::{FloquetSpec, HilbertConfig, RotorInit, InitialStateSpec, Subsystem};
use crate::error::{Error, Result};
use crate::C64;

/// Pure state of the rotor pair in the joint momentum basis.
///
/// Amplitudes are stored row-major: row = heavy index, column = light index.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    amplitudes: Vec<C64>,
    d_heavy: usize,
    d_light: usize,
    /// Number of kicks applied so far.
    pub time_step: usize,
}

impl BipartiteState {
    pub fn from_amplitudes(amplitudes: Vec<C64>, d_heavy: usize, d_light: usize) -> Result<Self> {
        if amplitudes.len() != d_heavy * d_light {
            return Err(Error::usage(format!(
                "{} amplitudes do not fill a {d_heavy}x{d_light} grid",
                amplitudes.len()
            )));
        }
        Ok(BipartiteState {
            amplitudes,
            d_heavy,
            d_light,
            time_step: 0,
        })
    }

    /// Joint basis state `|i_heavy> |i_light>` (indices, not quantum numbers).
    pub fn basis(d_heavy: usize, d_light: usize, i_heavy: usize, i_light: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); d_heavy * d_light];
        amplitudes[i_heavy * d_light + i_light] = C64::new(1.0, 0.0);
        BipartiteState {
            amplitudes,
            d_heavy,
            d_light,
            time_step: 0,
        }
    }

    /// `a (x) b` for single-rotor amplitude vectors.
    pub fn product(heavy: &[C64], light: &[C64]) -> Self {
        let amplitudes = heavy
            .iter()
            .flat_map(|a| light.iter().map(move |b| a * b))
            .collect();
        BipartiteState {
            amplitudes,
            d_heavy: heavy.len(),
            d_light: light.len(),
            time_step: 0,
        }
    }

    pub fn d_heavy(&self) -> usize {
        self.d_heavy
    }

    pub fn d_light(&self) -> usize {
        self.d_light
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, i_heavy: usize, i_light: usize) -> C64 {
        self.amplitudes[i_heavy * self.d_light + i_light]
    }

    pub fn row(&self, i_heavy: usize) -> &[C64] {
        &self.amplitudes[i_heavy * self.d_light..(i_heavy + 1) * self.d_light]
    }

    pub fn norm_sqr(&self) -> f64 {
        crate::par::sum_by(&self.amplitudes, |c| c.norm_sqr())
    }

    /// Amplitude grid as a `d_heavy x d_light` matrix.
    pub fn to_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.d_heavy, self.d_light, &self.amplitudes)
    }

    /// Probability in the two outermost momentum rows and columns.
    pub fn leak_probability(&self) -> f64 {
        let edge = |i: usize, d: usize| i < 2 || i + 2 >= d;
        let (dh, dl) = (self.d_heavy, self.d_light);
        let mut total = 0.0;
        for ih in 0..dh {
            let row = self.row(ih);
            if edge(ih, dh) {
                total += row.iter().map(|c| c.norm_sqr()).sum::<f64>();
            } else {
                total += row
                    .iter()
                    .enumerate()
                    .filter(|(il, _)| edge(*il, dl))
                    .map(|(_, c)| c.norm_sqr())
                    .sum::<f64>();
            }
        }
        total
    }

    /// Probability carried by basis states whose total momentum quantum
    /// number differs from `total_m`.
    pub fn off_block_probability(&self, hilbert: &HilbertConfig, total_m: i64) -> f64 {
        let mut total = 0.0;
        for ih in 0..self.d_heavy {
            let mh = hilbert.quantum_number(Subsystem::Heavy, ih);
            for (il, c) in self.row(ih).iter().enumerate() {
                if mh + hilbert.quantum_number(Subsystem::Light, il) != total_m {
                    total += c.norm_sqr();
                }
            }
        }
        total
    }
}

/// Amplitudes of one rotor's initial state.
pub fn rotor_amplitudes(
    init: &RotorInit,
    hilbert: &HilbertConfig,
    which: Subsystem,
) -> Result<Vec<C64>> {
    let d = hilbert.dim(which);
    match *init {
        RotorInit::Eigenstate { m } => {
            let j = hilbert.index_of(which, m).ok_or_else(|| {
                Error::config(format!(
                    "{which:?} eigenstate m = {m} lies outside the basis window"
                ))
            })?;
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[j] = C64::new(1.0, 0.0);
            Ok(v)
        }
        RotorInit::Gaussian {
            center_m,
            angle_center,
            width_m,
        } => {
            if !(width_m >= 1.0) {
                return Err(Error::config(format!(
                    "{which:?} wavepacket width {width_m} is below one momentum quantum"
                )));
            }
            let lo = hilbert.offset(which) as f64;
            if !(center_m >= lo && center_m <= lo + (d - 1) as f64) {
                return Err(Error::config(format!(
                    "{which:?} wavepacket centre m = {center_m} lies outside the basis window"
                )));
            }
            let mut v: Vec<C64> = (0..d)
                .map(|j| {
                    let m = hilbert.quantum_number(which, j) as f64;
                    let x = (m - center_m) / width_m;
                    C64::from_polar((-0.25 * x * x).exp(), -m * angle_center)
                })
                .collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= norm);
            Ok(v)
        }
    }
}

/// Uncoupled initial state `|heavy>|light>` at `time_step = 0`.
pub fn init_product_state(spec: &FloquetSpec, init: &InitialStateSpec) -> Result<BipartiteState> {
    let h = rotor_amplitudes(&init.heavy, &spec.hilbert, Subsystem::Heavy)?;
    let l = rotor_amplitudes(&init.light, &spec.hilbert, Subsystem::Light)?;
    Ok(BipartiteState::product(&h, &l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdynamics::KickParams;
    use crate::qdynamics::{linear_entropy, reduced_density};

    fn spec(d: usize) -> FloquetSpec {
        let hbar = 4.0 / d as f64;
        FloquetSpec::new(
            KickParams::new(0.45, 1.0, 1.0, 1.0),
            HilbertConfig::from_window(-2.0, 2.0, hbar).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn eigenstate_product_is_single_basis_state() {
        let s = spec(16);
        let psi = init_product_state(&s, &InitialStateSpec::eigenstates(0, 0)).unwrap();
        let nonzero: Vec<_> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].0, 8 * 16 + 8);
        assert_eq!(*nonzero[0].1, C64::new(1.0, 0.0));
        assert_eq!(psi.time_step, 0);
    }

    #[test]
    fn product_states_have_zero_entropy() {
        let s = spec(32);
        for init in [
            InitialStateSpec::eigenstates(3, -5),
            InitialStateSpec::wavepackets((1.5, -2.0), (0.3, 2.0), (3.0, 1.2)),
            InitialStateSpec {
                heavy: RotorInit::Eigenstate { m: 0 },
                light: RotorInit::Gaussian {
                    center_m: 0.0,
                    angle_center: 0.0,
                    width_m: 2.5,
                },
            },
        ] {
            let psi = init_product_state(&s, &init).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
            for which in [Subsystem::Heavy, Subsystem::Light] {
                let omega = linear_entropy(&reduced_density(&psi, which));
                assert!(omega.abs() <= 1e-12, "{init:?}: {omega}");
            }
        }
    }

    #[test]
    fn gaussian_marginal_matches_direct_formula() {
        let s = spec(64);
        let (centre, width, angle) = (2.0, 3.0, 0.7);
        let init = InitialStateSpec::wavepackets((centre, 0.0), (angle, 0.0), (width, 3.0));
        let psi = init_product_state(&s, &init).unwrap();

        // Direct evaluation of exp(-(m - c)^2 / (2 w^2)) over the window,
        // normalised over the same discrete support.
        let ms: Vec<f64> = (-32..32).map(|m| m as f64).collect();
        let weights: Vec<f64> = ms
            .iter()
            .map(|m| (-(m - centre).powi(2) / (2.0 * width * width)).exp())
            .collect();
        let z: f64 = weights.iter().sum();
        for (ih, w) in weights.iter().enumerate() {
            let marginal: f64 = psi.row(ih).iter().map(|c| c.norm_sqr()).sum();
            assert!((marginal - w / z).abs() < 1e-12);
        }
        // The angle centre only enters as a linear phase.
        let a = psi.amplitude(33, 32) / psi.amplitude(32, 32);
        assert!((a.arg() + angle).abs() < 1e-12);
    }

    #[test]
    fn invalid_initial_states_are_configuration_errors() {
        let s = spec(16);
        let outside = InitialStateSpec::eigenstates(8, 0);
        assert!(matches!(init_product_state(&s, &outside), Err(Error::Config(_))));
        let narrow = InitialStateSpec::wavepackets((0.0, 0.0), (0.0, 0.0), (0.5, 2.0));
        assert!(matches!(init_product_state(&s, &narrow), Err(Error::Config(_))));
        let off_window = InitialStateSpec::wavepackets((0.0, 12.0), (0.0, 0.0), (2.0, 2.0));
        assert!(matches!(init_product_state(&s, &off_window), Err(Error::Config(_))));
    }

    #[test]
    fn leak_counts_edge_rows_and_columns_once() {
        let psi = BipartiteState::basis(8, 8, 0, 0);
        assert_eq!(psi.leak_probability(), 1.0);
        let psi = BipartiteState::basis(8, 8, 4, 1);
        assert_eq!(psi.leak_probability(), 1.0);
        let psi = BipartiteState::basis(8, 8, 4, 4);
        assert_eq!(psi.leak_probability(), 0.0);
    }
}
