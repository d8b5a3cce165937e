//! Independent reference computations for the fast kernels.

use std::f64::consts::{PI, TAU};

use kickent::cdynamics::{
    inverse_map_step, lyapunov_estimate, map_step, KickParams, PhasePoint,
};
use kickent::correspondence::{classical_mutual_information, ClassicalMixture};
use kickent::qdynamics::{
    init_product_state, linear_entropy, quantum_weights, reduced_density, schmidt_weights,
    trace_distance, BipartiteState, DensityOperator, FloquetPropagator, FloquetSpec,
    HilbertConfig, InitialStateSpec, Subsystem,
};
use kickent::C64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(dh: usize, dl: usize, seed: u64) -> BipartiteState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<C64> = (0..dh * dl)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    BipartiteState::from_amplitudes(amps.iter().map(|a| a / norm).collect(), dh, dl).unwrap()
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn spec(k: f64, d: usize) -> FloquetSpec {
    let hilbert = HilbertConfig::from_window(-2.0, 2.0, 4.0 / d as f64).unwrap();
    FloquetSpec::new(KickParams::new(k, 1.0, 1.0, 1.3), hilbert).unwrap()
}

/// Floquet matrix built entry by entry: diagonal free flight, then the kick
/// as an explicit sum over the angle grid.
fn dense_floquet(spec: &FloquetSpec) -> DMatrix<C64> {
    let h = &spec.hilbert;
    let (dh, dl, hbar) = (h.d_heavy, h.d_light, h.hbar_eff);
    let kp = &spec.kick;
    let m = |which, j| h.quantum_number(which, j) as f64;
    let n = dh * dl;
    let free = DMatrix::from_fn(n, n, |r, c| {
        if r != c {
            return C64::new(0.0, 0.0);
        }
        let (mh, ml) = (m(Subsystem::Heavy, r / dl), m(Subsystem::Light, r % dl));
        let e = hbar * hbar * (mh * mh / (2.0 * kp.inertia_heavy) + ml * ml / (2.0 * kp.inertia_light));
        C64::from_polar(1.0, -kp.tau * e / hbar)
    });
    let thetas: Vec<f64> = (0..dh).map(|j| TAU * j as f64 / dh as f64).collect();
    let phis: Vec<f64> = (0..dl).map(|j| TAU * j as f64 / dl as f64).collect();
    let kick = DMatrix::from_fn(n, n, |r, c| {
        let dmh = m(Subsystem::Heavy, r / dl) - m(Subsystem::Heavy, c / dl);
        let dml = m(Subsystem::Light, r % dl) - m(Subsystem::Light, c % dl);
        let mut s = C64::new(0.0, 0.0);
        for &t in &thetas {
            for &p in &phis {
                s += C64::from_polar(1.0, -(dmh * t + dml * p) - kp.k / hbar * (t - p).cos());
            }
        }
        s / (dh * dl) as f64
    });
    kick * free
}

#[test]
fn transform_step_matches_dense_unitary() {
    for d in [8, 16] {
        for k in [0.3, 1.7] {
            let sp = spec(k, d);
            let u = dense_floquet(&sp);
            let unitarity = max_abs(&(&u * u.adjoint() - DMatrix::identity(d * d, d * d)));
            assert!(unitarity < 1e-12, "dense oracle not unitary: {unitarity:e}");

            let mut psi = random_state(d, d, 7 + d as u64);
            let mut v = DVector::from_column_slice(psi.amplitudes());
            let mut prop = FloquetPropagator::new(&sp);
            for _ in 0..20 {
                prop.step(&mut psi);
                v = &u * v;
            }
            let err = psi
                .amplitudes()
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-10, "d = {d}, k = {k}: max error {err:e}");
        }
    }
}

#[test]
fn partial_trace_matches_naive_contraction() {
    let (dh, dl) = (8, 12);
    let psi = random_state(dh, dl, 3);
    let a = |i: usize, j: usize| psi.amplitudes()[i * dl + j];
    let full = |r: (usize, usize), c: (usize, usize)| a(r.0, r.1) * a(c.0, c.1).conj();

    let mut heavy = DMatrix::<C64>::zeros(dh, dh);
    for i in 0..dh {
        for j in 0..dh {
            for l in 0..dl {
                heavy[(i, j)] += full((i, l), (j, l));
            }
        }
    }
    let mut light = DMatrix::<C64>::zeros(dl, dl);
    for i in 0..dl {
        for j in 0..dl {
            for h in 0..dh {
                light[(i, j)] += full((h, i), (h, j));
            }
        }
    }
    let rh = reduced_density(&psi, Subsystem::Heavy);
    let rl = reduced_density(&psi, Subsystem::Light);
    assert!(max_abs(&(rh.matrix() - heavy)) <= 1e-12);
    assert!(max_abs(&(rl.matrix() - light)) <= 1e-12);
}

#[test]
fn factored_distance_matches_dense_on_evolved_state() {
    let sp = spec(1.7, 8);
    let mut psi = random_state(8, 8, 11);
    let mut prop = FloquetPropagator::new(&sp);
    for _ in 0..10 {
        prop.step(&mut psi);
    }
    let rho_h = reduced_density(&psi, Subsystem::Heavy);
    let p = quantum_weights(&rho_h).weights;
    // total m = -1 keeps every light partner inside [-4, 3]
    let mix = ClassicalMixture::momentum_family(p, &sp.hilbert, -1).unwrap();
    let fast = mix.trace_distance_to_pure(&psi).unwrap();
    let dense = trace_distance(&DensityOperator::pure(&psi), &mix.to_density()).unwrap();
    assert!((fast - dense).abs() <= 1e-12, "{fast} vs {dense}");
}

fn wrapped(d: f64) -> f64 {
    (d + PI).rem_euclid(TAU) - PI
}

fn difference(a: &PhasePoint, b: &PhasePoint) -> [f64; 4] {
    [
        wrapped(a.theta - b.theta),
        a.n - b.n,
        wrapped(a.phi - b.phi),
        a.l - b.l,
    ]
}

fn displaced(p: &PhasePoint, v: [f64; 4]) -> PhasePoint {
    PhasePoint::new(p.theta + v[0], p.n + v[1], p.phi + v[2], p.l + v[3])
}

/// Largest exponent from a shadow trajectory kept at distance `delta`.
fn two_trajectory_lyapunov(params: &KickParams, p0: &PhasePoint, steps: usize) -> f64 {
    let delta = 1e-8;
    let s = delta / 2.0;
    let mut a = *p0;
    let mut b = displaced(p0, [s, s, s, s]);
    let mut sum = 0.0;
    for _ in 0..steps {
        a = map_step(&a, params);
        b = map_step(&b, params);
        let d = difference(&b, &a);
        let dist = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        sum += (dist / delta).ln();
        b = displaced(&a, d.map(|x| x * delta / dist));
    }
    sum / steps as f64
}

#[test]
fn lyapunov_matches_two_trajectory_divergence() {
    let p0 = PhasePoint::new(0.1, 0.0, 0.0, 0.0);
    for k in [1.0, 3.0, 10.0] {
        let params = KickParams::new(k, 1.0, 1.0, 1.0);
        let tangent = lyapunov_estimate(&params, &p0, 20_000).unwrap();
        let shadow = two_trajectory_lyapunov(&params, &p0, 20_000);
        assert!(
            (tangent - shadow).abs() <= 0.1 * shadow,
            "k = {k}: tangent {tangent}, shadow {shadow}"
        );
    }
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let a = DMatrix::from_fn(4, 4, |i, j| m[i][j]);
    a.determinant()
}

#[test]
fn finite_difference_jacobian_is_symplectic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let omega = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0,
        ],
    );
    let h = 1e-5;
    for _ in 0..100 {
        let params = KickParams::new(rng.random_range(0.0..5.0), rng.random_range(0.1..2.0), rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let p = PhasePoint::new(
            rng.random_range(0.0..TAU),
            rng.random_range(-2.0..2.0),
            rng.random_range(0.0..TAU),
            rng.random_range(-2.0..2.0),
        );
        let mut jac = [[0.0; 4]; 4];
        for j in 0..4 {
            let mut e = [0.0; 4];
            e[j] = h;
            let plus = map_step(&displaced(&p, e), &params);
            let minus = map_step(&displaced(&p, e.map(|x| -x)), &params);
            let d = difference(&plus, &minus);
            for i in 0..4 {
                jac[i][j] = d[i] / (2.0 * h);
            }
        }
        assert!((det4(jac) - 1.0).abs() <= 1e-8, "det {}", det4(jac));
        let j = DMatrix::from_fn(4, 4, |r, c| jac[r][c]);
        let defect = (j.transpose() * &omega * &j - &omega).amax();
        assert!(defect <= 1e-6, "symplectic defect {defect:e}");
    }
}

#[test]
fn hundred_steps_reverse_exactly() {
    let params = KickParams::new(0.45, 1.0, 1.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let p0 = PhasePoint::new(
            rng.random_range(0.0..TAU),
            rng.random_range(-1.0..1.0),
            rng.random_range(0.0..TAU),
            rng.random_range(-1.0..1.0),
        );
        let mut p = p0;
        for _ in 0..100 {
            p = map_step(&p, &params);
        }
        for _ in 0..100 {
            p = inverse_map_step(&p, &params);
        }
        let err = difference(&p, &p0).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(err <= 1e-6, "round trip error {err:e}");
    }
}

#[test]
fn block_state_schmidt_weights_are_the_heavy_diagonal() {
    let sp = spec(0.6, 16);
    let mut psi = init_product_state(&sp, &InitialStateSpec::eigenstates(1, -2)).unwrap();
    let mut prop = FloquetPropagator::new(&sp);
    for _ in 0..15 {
        prop.step(&mut psi);
    }
    let rho = reduced_density(&psi, Subsystem::Heavy);
    let mut diag: Vec<f64> = (0..16).map(|i| rho.matrix()[(i, i)].re).collect();
    diag.sort_by(|a, b| b.total_cmp(a));
    let w = schmidt_weights(&psi);
    for (a, b) in w.iter().zip(&diag) {
        assert!((a - b).abs() <= 1e-10);
    }
    let qw = quantum_weights(&rho);
    assert!(qw.max_off_diagonal <= 1e-12);
    assert!((classical_mutual_information(&qw.weights) - linear_entropy(&rho)).abs() <= 1e-10);
    assert!(linear_entropy(&rho) > 0.1);
}
