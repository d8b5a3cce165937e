//! Quantum-classical bridge: Planck-cell coarse-graining of the classical
//! ensemble, the classical mixing measure, the linear-entropy scaling relation
//! and the effectively classical density matrix.

mod classical_state;

pub use classical_state::{build_rho_cl, ClassicalMixture};

use crate::cdynamics::Ensemble;
use crate::error::{Error, Result};
use crate::par;
use crate::qdynamics::HilbertConfig;

/// Non-negative weights summing to one (within 1e-10).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    values: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::usage("probabilities must be non-negative"));
        }
        let s: f64 = values.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::usage(format!("probabilities sum to {s}, not 1")));
        }
        Ok(ProbabilityVector { values })
    }

    /// Rescales non-negative weights to unit sum. All-zero input stays zero.
    pub fn normalized(mut values: Vec<f64>) -> Self {
        let s: f64 = values.iter().sum();
        if s > 0.0 {
            values.iter_mut().for_each(|v| *v /= s);
        }
        ProbabilityVector { values }
    }

    pub fn delta(len: usize, at: usize) -> Self {
        let mut values = vec![0.0; len];
        values[at] = 1.0;
        ProbabilityVector { values }
    }

    pub fn uniform(len: usize) -> Self {
        ProbabilityVector {
            values: vec![1.0 / len as f64; len],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|p| p * p).sum()
    }
}

/// Partition of the heavy-momentum axis into cells of width `hbar_eff`, one
/// per heavy basis state. Cell `j` covers `[hbar (m_j - 1/2), hbar (m_j + 1/2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    pub delta_n: f64,
    pub m_offset: i64,
    pub cells: usize,
}

impl CellGrid {
    pub fn from_hilbert(h: &HilbertConfig) -> Self {
        CellGrid {
            delta_n: h.hbar_eff,
            m_offset: h.m_offset_heavy,
            cells: h.d_heavy,
        }
    }

    /// `[lower, upper)` edges of cell `j`.
    pub fn edges(&self, j: usize) -> (f64, f64) {
        let m = (self.m_offset + j as i64) as f64;
        (self.delta_n * (m - 0.5), self.delta_n * (m + 0.5))
    }

    /// Cell containing momentum `n`; points on an edge go to the upper cell.
    pub fn cell_of(&self, n: f64) -> Option<usize> {
        let m = (n / self.delta_n + 0.5).floor();
        let j = m - self.m_offset as f64;
        (j >= 0.0 && j < self.cells as f64).then_some(j as usize)
    }
}

/// Classical cell probabilities plus the mass that fell outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOccupation {
    /// In-window fractions, renormalised to unit sum.
    pub probabilities: ProbabilityVector,
    /// Weight fraction outside the grid window.
    pub out_of_window: f64,
}

impl CellOccupation {
    pub fn is_valid(&self, threshold: f64) -> bool {
        self.out_of_window <= threshold
    }
}

/// Weighted fraction of ensemble points in each cell of `grid`.
pub fn classical_cell_probabilities(e: &Ensemble, grid: &CellGrid) -> CellOccupation {
    let q = grid.cells;
    let indexed: Vec<(f64, f64)> = e
        .points
        .iter()
        .zip(&e.weights)
        .map(|(p, w)| (p.n, *w))
        .collect();
    let partials = par::map_chunks(&indexed, |chunk| {
        let mut hist = vec![0.0; q + 1];
        for &(n, w) in chunk {
            match grid.cell_of(n) {
                Some(j) => hist[j] += w,
                None => hist[q] += w,
            }
        }
        hist
    });
    let mut hist = vec![0.0; q + 1];
    for part in partials {
        hist.iter_mut().zip(part).for_each(|(h, x)| *h += x);
    }
    let total: f64 = hist.iter().sum();
    let out = hist.pop().unwrap_or(0.0);
    CellOccupation {
        probabilities: ProbabilityVector::normalized(hist),
        out_of_window: if total > 0.0 { out / total } else { 0.0 },
    }
}

/// `1 - sum p^2`: how far the distribution has mixed over the cells.
pub fn classical_mutual_information(p: &ProbabilityVector) -> f64 {
    1.0 - p.sum_of_squares()
}

fn scaling_relation(omega: f64, ratio: f64) -> f64 {
    1.0 - ratio * (1.0 - omega)
}

/// Linear entropy predicted at `hbar_fine = ratio * hbar_coarse` from the
/// value `omega` measured at `hbar_coarse`.
pub fn scaling_predict(omega: f64, hbar_ratio: f64) -> Result<f64> {
    if !(hbar_ratio > 0.0 && hbar_ratio <= 1.0) {
        return Err(Error::usage(format!(
            "hbar ratio must lie in (0, 1], got {hbar_ratio}"
        )));
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&omega) {
        return Err(Error::usage(format!("linear entropy {omega} outside [0, 1]")));
    }
    if hbar_ratio == 1.0 {
        return Ok(omega);
    }
    Ok(scaling_relation(omega, hbar_ratio))
}

/// Total variation distance `1/2 sum |p - q|`.
pub fn distribution_distance(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::usage(format!(
            "distributions over {} and {} cells",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5
        * p.values()
            .iter()
            .zip(q.values())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdynamics::PhasePoint;

    fn grid() -> CellGrid {
        CellGrid::from_hilbert(&HilbertConfig::from_window(-2.0, 2.0, 0.25).unwrap())
    }

    fn ensemble(ns: &[f64]) -> Ensemble {
        Ensemble::uniform(
            ns.iter().map(|&n| PhasePoint::new(0.0, n, 0.0, 0.0)).collect(),
            0,
            "test",
        )
        .unwrap()
    }

    #[test]
    fn cells_partition_the_window() {
        let g = grid();
        assert_eq!(g.cells, 16);
        for j in 0..g.cells - 1 {
            assert_eq!(g.edges(j).1, g.edges(j + 1).0);
        }
        assert_eq!(g.edges(0).0, -2.125);
        assert_eq!(g.edges(15).1, 1.875);
    }

    #[test]
    fn single_cell_gives_delta() {
        let occ = classical_cell_probabilities(&ensemble(&[0.01, -0.05, 0.1]), &grid());
        assert_eq!(occ.probabilities, ProbabilityVector::delta(16, 8));
        assert_eq!(occ.out_of_window, 0.0);
    }

    #[test]
    fn even_split_within_binomial_bound() {
        let n = 10_000;
        let ns: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.0 } else { 0.25 }).collect();
        let occ = classical_cell_probabilities(&ensemble(&ns), &grid());
        let bound = 4.0 * (0.25 / n as f64).sqrt();
        assert!((occ.probabilities.values()[8] - 0.5).abs() <= bound);
        assert!((occ.probabilities.values()[9] - 0.5).abs() <= bound);
    }

    #[test]
    fn edge_goes_to_upper_cell() {
        let g = grid();
        assert_eq!(g.cell_of(0.125), Some(9));
        assert_eq!(g.cell_of(0.124_999), Some(8));
        assert_eq!(g.cell_of(-0.125), Some(8));
        assert_eq!(g.cell_of(1.875), None);
    }

    #[test]
    fn out_of_window_mass_is_tracked() {
        let occ = classical_cell_probabilities(&ensemble(&[0.0, 5.0, 0.0, 0.0]), &grid());
        assert_eq!(occ.out_of_window, 0.25);
        assert!(!occ.is_valid(1e-3));
        assert_eq!(occ.probabilities, ProbabilityVector::delta(16, 8));
    }

    #[test]
    fn mutual_information_examples() {
        assert_eq!(classical_mutual_information(&ProbabilityVector::delta(4, 1)), 0.0);
        assert_eq!(classical_mutual_information(&ProbabilityVector::uniform(4)), 0.75);
        let half = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(classical_mutual_information(&half), 0.5);
    }

    #[test]
    fn scaling_examples() {
        assert!((scaling_predict(0.9, 0.5).unwrap() - 0.95).abs() < 1e-15);
        assert_eq!(scaling_predict(0.0, 1.0).unwrap(), 0.0);
        for omega in [0.0, 0.3, 0.77, 1.0] {
            assert_eq!(scaling_predict(omega, 1.0).unwrap(), omega);
        }
    }

    #[test]
    fn scaling_rejects_bad_ratios() {
        assert!(scaling_predict(0.5, 0.0).is_err());
        assert!(scaling_predict(0.5, -0.5).is_err());
        assert!(scaling_predict(0.5, 1.5).is_err());
        assert!(scaling_predict(1.5, 0.5).is_err());
    }

    #[test]
    fn scaling_inverse_round_trip() {
        for &(omega, r) in &[(0.3, 0.5), (0.91, 0.25), (0.0, 0.125), (0.999, 0.8)] {
            let fine = scaling_predict(omega, r).unwrap();
            assert!((scaling_relation(fine, 1.0 / r) - omega).abs() <= 1e-14);
            assert!(fine >= omega);
        }
    }

    #[test]
    fn total_variation_examples() {
        let p = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(distribution_distance(&p, &p).unwrap(), 0.0);
        let a = ProbabilityVector::delta(3, 0);
        let b = ProbabilityVector::delta(3, 2);
        assert_eq!(distribution_distance(&a, &b).unwrap(), 1.0);
        let d = ProbabilityVector::delta(2, 0);
        assert_eq!(distribution_distance(&p, &d).unwrap(), 0.5);
        assert!(distribution_distance(&p, &a).is_err());
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.2, -0.2]).is_err());
        assert!(ProbabilityVector::new(vec![0.25; 4]).is_ok());
    }
}
