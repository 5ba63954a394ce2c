use nalgebra::{DMatrix, Matrix2, Vector2};
use optomech_core::dynamics::{
    drift_matrix, evolve_cov_closed, evolve_cov_ode, expm, physicality, propagator_closed, CovarianceRoute, GaussianState,
    Mat8,
};
use optomech_core::frame::{build_effective, EffectiveModel};
use optomech_core::observables::{atomic_squeezing_model, gaussian_fidelity, SqueezeCase};
use optomech_core::params::{reduce, SystemParams};
use optomech_core::steady_state::steady_state_for_coupling;
use proptest::prelude::*;

fn model_strategy() -> impl Strategy<Value = EffectiveModel> {
    (0.0..0.6f64, 0.0..0.6f64, 0.0..0.6f64, 0.0..0.1f64, 0.0..0.01f64, 0.0..200.0f64)
        .prop_map(|(g1, g2, eta, kappa, gamma, n)| {
            EffectiveModel::synthetic([g1, g2], eta, kappa, gamma).with_thermal_occupation([n, 0.5 * n])
        })
}

fn squeezed_vacuum(r: [f64; 2]) -> Mat8 {
    let mut v = Mat8::identity() * 0.5;
    for j in 0..2 {
        v[(4 + 2 * j, 4 + 2 * j)] = 0.5 * (2.0 * r[j]).exp();
        v[(5 + 2 * j, 5 + 2 * j)] = 0.5 * (-2.0 * r[j]).exp();
    }
    v
}

fn as_dmatrix(v: &Mat8) -> DMatrix<f64> {
    DMatrix::from_column_slice(8, 8, v.as_slice())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagator_matches_expm(m in model_strategy(), t in 0.0..80.0f64) {
        let a = drift_matrix(&m);
        let d = (propagator_closed(&m, t).unwrap() - expm(&(a * t))).amax();
        prop_assert!(d < 1e-9, "diff {d}");
    }

    #[test]
    fn propagator_semigroup(m in model_strategy(), t1 in 0.0..40.0f64, t2 in 0.0..40.0f64) {
        let lhs = propagator_closed(&m, t1 + t2).unwrap();
        let rhs = propagator_closed(&m, t1).unwrap() * propagator_closed(&m, t2).unwrap();
        prop_assert!((lhs - rhs).amax() < 1e-9);
    }

    #[test]
    fn covariance_stays_physical(m in model_strategy(), t in 0.0..30.0f64, r1 in 0.0..1.0f64, r2 in 0.0..1.0f64) {
        let v = evolve_cov_closed(&squeezed_vacuum([r1, r2]), &m, t).unwrap();
        let p = physicality(&as_dmatrix(&v));
        prop_assert!(p.asymmetry <= 1e-12);
        prop_assert!(p.min_eigenvalue >= -1e-9, "{p:?}");
    }

    #[test]
    fn lossless_dynamics_preserves_purity(g1 in 0.0..0.6f64, g2 in 0.0..0.6f64, eta in 0.0..0.6f64, t in 0.0..50.0f64, r1 in 0.0..1.0f64) {
        let m = EffectiveModel::synthetic([g1, g2], eta, 0.0, 0.0);
        let v = evolve_cov_closed(&squeezed_vacuum([r1, 0.0]), &m, t).unwrap();
        let p = physicality(&as_dmatrix(&v));
        prop_assert!((p.purity_det - 1.0).abs() < 1e-8, "{}", p.purity_det);
    }

    #[test]
    fn quadrature_and_ode_agree(m in model_strategy(), t in 0.0..20.0f64) {
        let v0 = squeezed_vacuum([0.4, 0.2]);
        let a = evolve_cov_closed(&v0, &m, t).unwrap();
        let b = evolve_cov_ode(&v0, &m, t, false).unwrap();
        prop_assert!((a - b).amax() < 1e-7, "{}", (a - b).amax());
    }

    #[test]
    fn fidelity_symmetric_and_bounded(
        a in 0.2..3.0f64, b in 0.2..3.0f64, c in -0.5..0.5f64,
        p in 0.2..3.0f64, q in 0.2..3.0f64,
        dx in -2.0..2.0f64, dy in -2.0..2.0f64,
    ) {
        // Thermal-squeezed states: scale pure states up so det ≥ 1/4.
        let vi = Matrix2::new(a, 0.0, 0.0, 1.0 / (4.0 * a)) * (1.0 + b);
        let vf = Matrix2::new(p, c, c, (0.25 + c * c) / p) * (1.0 + q * 0.1);
        let mi = Vector2::new(0.3, -0.1);
        let mf = mi + Vector2::new(dx, dy);
        let f1 = gaussian_fidelity(&mi, &vi, &mf, &vf).unwrap();
        let f2 = gaussian_fidelity(&mf, &vf, &mi, &vi).unwrap();
        prop_assert!((f1.f - f2.f).abs() < 1e-14);
        prop_assert!(f1.f > 0.0 && f1.f <= 1.0);
        prop_assert!(f1.n_h >= 0.0);
    }

    #[test]
    fn squeezing_invariant_under_rate_rescaling(g in 0.05..0.4f64, eta in 0.05..0.4f64, s in 0.1..10.0f64) {
        let m = EffectiveModel::synthetic([g, g], eta, 0.01, 1e-5).with_thermal_occupation([50.0, 50.0]);
        let scaled = EffectiveModel::synthetic([s * g, s * g], s * eta, s * 0.01, s * 1e-5).with_thermal_occupation([50.0, 50.0]);
        let a = atomic_squeezing_model(&m, SqueezeCase::II, g, CovarianceRoute::Closed).unwrap();
        let b = atomic_squeezing_model(&scaled, SqueezeCase::II, s * g, CovarianceRoute::Closed).unwrap();
        prop_assert!((a.d_yc - b.d_yc).abs() < 1e-9);
    }

    #[test]
    fn bogoliubov_identities(g1 in 0.0..1.5f64) {
        let p = reduce(&SystemParams::paper_defaults()).unwrap();
        let st = steady_state_for_coupling(&p, g1).unwrap();
        let m = build_effective(&st, &p).unwrap();
        for j in 0..2 {
            prop_assert!((m.mu[j] * m.mu[j] - m.nu[j] * m.nu[j] - 1.0).abs() < 1e-12);
            prop_assert!(m.n_r[j] >= m.n_th[j]);
            prop_assert!(m.gp[j] <= m.g_enh[j]);
        }
    }
}

#[test]
fn ground_state_is_pure() {
    let p = reduce(&SystemParams::paper_defaults()).unwrap();
    let st = steady_state_for_coupling(&p, 0.5).unwrap();
    let m = build_effective(&st, &p).unwrap();
    let g = GaussianState::ground_state(&m);
    let ph = physicality(&as_dmatrix(&g.cov));
    assert!((ph.purity_det - 1.0).abs() < 1e-12);
}

#[test]
fn semigroup_also_holds_for_the_scaled_identity() {
    let m = EffectiveModel::synthetic([0.0, 0.0], 0.0, 0.02, 0.02);
    let e = propagator_closed(&m, 3.0).unwrap();
    assert!((e - Mat8::identity() * (-0.06f64).exp()).amax() < 1e-16);
}
