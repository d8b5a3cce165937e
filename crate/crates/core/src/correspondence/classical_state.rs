use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::ProbabilityVector;
use crate::error::{Error, Result};
use crate::qdynamics::{BipartiteState, DensityOperator, HilbertConfig, Subsystem};
use crate::C64;

const ORTHO_TOL: f64 = 1e-10;

/// `sum_N p_N |N><N| (x) |F_N><F_N|`, kept in factored form so that large
/// bases never need the dense joint operator.
#[derive(Debug, Clone)]
pub struct ClassicalMixture {
    p: ProbabilityVector,
    light_states: Vec<DVector<C64>>,
}

impl ClassicalMixture {
    /// One light state per heavy cell. Only states of occupied cells must be
    /// normalised and mutually orthogonal; the rest are ignored.
    pub fn new(p: ProbabilityVector, light_states: Vec<DVector<C64>>) -> Result<Self> {
        if light_states.len() != p.len() {
            return Err(Error::usage(format!(
                "{} light states for {} cells",
                light_states.len(),
                p.len()
            )));
        }
        let occupied: Vec<usize> = (0..p.len()).filter(|&j| p.values()[j] > 0.0).collect();
        if let Some(&j) = occupied.first() {
            let dl = light_states[j].len();
            if occupied.iter().any(|&i| light_states[i].len() != dl) {
                return Err(Error::usage("light states of different dimension"));
            }
        }
        for (a, &i) in occupied.iter().enumerate() {
            for &j in &occupied[a..] {
                let overlap = light_states[i].dotc(&light_states[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (overlap - C64::new(expect, 0.0)).norm() > ORTHO_TOL {
                    return Err(Error::usage(format!(
                        "light states of cells {i} and {j} are not orthonormal (overlap {overlap})"
                    )));
                }
            }
        }
        Ok(ClassicalMixture { p, light_states })
    }

    /// Light partner of heavy cell `N` fixed by total momentum: the light
    /// momentum eigenstate `total_m - m_N`. Occupied cells whose partner falls
    /// outside the light window are an error.
    pub fn momentum_family(p: ProbabilityVector, h: &HilbertConfig, total_m: i64) -> Result<Self> {
        let dl = h.dim(Subsystem::Light);
        let mut states = Vec::with_capacity(p.len());
        for j in 0..p.len() {
            let m = total_m - h.quantum_number(Subsystem::Heavy, j);
            let mut v = DVector::zeros(dl);
            match h.index_of(Subsystem::Light, m) {
                Some(i) => v[i] = C64::new(1.0, 0.0),
                None if p.values()[j] > 0.0 => {
                    return Err(Error::usage(format!(
                        "light partner m = {m} of occupied cell {j} lies outside the basis"
                    )))
                }
                None => {}
            }
            states.push(v);
        }
        Self::new(p, states)
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.p
    }

    pub fn d_light(&self) -> usize {
        self.light_states.first().map_or(0, |v| v.len())
    }

    /// Heavy reduction, `diag(p)`.
    pub fn reduced_heavy(&self) -> DensityOperator {
        DensityOperator::diagonal(&self.p)
    }

    /// Dense joint operator, heavy index major. Quadratic in the joint
    /// dimension.
    pub fn to_density(&self) -> DensityOperator {
        let dl = self.d_light();
        let n = self.p.len() * dl;
        let mut m = DMatrix::zeros(n, n);
        for (j, (&pj, f)) in self.p.values().iter().zip(&self.light_states).enumerate() {
            if pj == 0.0 {
                continue;
            }
            let block = f * f.adjoint() * C64::new(pj, 0.0);
            m.view_mut((j * dl, j * dl), (dl, dl)).copy_from(&block);
        }
        DensityOperator::from_matrix_unchecked(m)
    }

    /// Trace distance between `|psi><psi|` and the mixture.
    ///
    /// Both operators live in the span of `{|N>|F_N>}` plus the component of
    /// `psi` orthogonal to it, so the difference is diagonalised in that
    /// subspace of dimension `cells + 1`.
    pub fn trace_distance_to_pure(&self, state: &BipartiteState) -> Result<f64> {
        if state.d_heavy() != self.p.len() || state.d_light() != self.d_light() {
            return Err(Error::usage(format!(
                "state of shape {}x{} against mixture of shape {}x{}",
                state.d_heavy(),
                state.d_light(),
                self.p.len(),
                self.d_light()
            )));
        }
        let q = self.p.len();
        let mut v = DVector::<C64>::zeros(q + 1);
        let mut captured = 0.0;
        for j in 0..q {
            if self.p.values()[j] == 0.0 {
                continue;
            }
            let row = DVector::from_column_slice(state.row(j));
            let a = self.light_states[j].dotc(&row);
            captured += a.norm_sqr();
            v[j] = a;
        }
        v[q] = C64::new((state.norm_sqr() - captured).max(0.0).sqrt(), 0.0);
        let mut diff = &v * v.adjoint();
        for j in 0..q {
            diff[(j, j)] -= C64::new(self.p.values()[j], 0.0);
        }
        let norm: f64 = SymmetricEigen::new(diff)
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .sum();
        Ok((0.5 * norm).clamp(0.0, 1.0))
    }
}

/// Dense `sum_N p_N |N><N| (x) |F_N><F_N|` over the full joint basis.
pub fn build_rho_cl(p: &ProbabilityVector, light_states: &[DVector<C64>]) -> Result<DensityOperator> {
    Ok(ClassicalMixture::new(p.clone(), light_states.to_vec())?.to_density())
}
