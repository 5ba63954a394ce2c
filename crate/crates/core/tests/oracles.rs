//! Reference values computed independently in double precision with an
//! 8th-order Runge–Kutta Lyapunov integration (rtol 1e-13) and a bracketed
//! cubic root, then frozen here.

use num_complex::Complex64;
use optomech_core::observables::{
    atomic_squeezing, optimal_coupling, transfer_experiment, SqueezeCase, TransferFrame,
};
use optomech_core::params::{reduce, ReducedParams, SystemParams};

fn defaults() -> ReducedParams {
    reduce(&SystemParams::paper_defaults()).unwrap()
}

fn transfer_params() -> ReducedParams {
    let mut p = defaults();
    p.eta_e = 0.005;
    p
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn squeezing_case_ii_at_g1_0_3() {
    let r = atomic_squeezing(&defaults(), SqueezeCase::II, 0.25, 0.3).unwrap();
    assert!(close(r.r1, 0.547_552_840_424_068_6, 1e-12), "{r:?}");
    assert!(close(r.gp1, 0.173_509_028_280_535_97, 1e-12), "{r:?}");
    assert!(close(r.t_s, 8.969_179_078_250_95, 1e-12), "{r:?}");
    assert!(close(r.var_x, 1.462_311_032_602_904_5, 1e-9), "{r:?}");
    assert!(close(r.var_y, 0.193_007_229_843_905_42, 1e-9), "{r:?}");
    assert!(close(r.d_yc, 4.133_964_268_178_611, 1e-9), "{r:?}");
}

#[test]
fn squeezing_case_i_at_g1_0_3() {
    let r = atomic_squeezing(&defaults(), SqueezeCase::I, 0.17, 0.3).unwrap();
    assert!(close(r.t_s, 12.935_877_519_336_803, 1e-12), "{r:?}");
    assert!(close(r.var_x, 1.448_686_883_709_981, 1e-9), "{r:?}");
    assert!(close(r.d_yc, 3.897_749_185_471_121_7, 1e-9), "{r:?}");
}

#[test]
fn squeezing_case_ii_at_g1_0_5() {
    let r = atomic_squeezing(&defaults(), SqueezeCase::II, 0.34, 0.5).unwrap();
    assert!(close(r.var_x, 2.107_698_304_382_689_3, 1e-9), "{r:?}");
    assert!(close(r.d_yc, 5.535_225_519_317_342_5, 1e-9), "{r:?}");
}

#[test]
fn transfer_values() {
    let p = transfer_params();
    let one = Complex64::new(1.0, 0.0);
    let r = transfer_experiment(&p, one, 0.5, 0.3, TransferFrame::Bogoliubov).unwrap();
    assert!(close(r.f, 0.962_964_232_586_178_5, 1e-9), "{r:?}");
    assert!(close(r.n_h, 0.033_022_830_243_552_46, 1e-8), "{r:?}");
    assert!(close(r.lambda_h, 0.073_641_559_545_793_39, 1e-8), "{r:?}");

    let r = transfer_experiment(&p, Complex64::new(2.0, 0.0), 0.5, 0.8, TransferFrame::Bogoliubov).unwrap();
    assert!(close(r.f, 0.949_440_635_443_339_5, 1e-9), "{r:?}");
    assert!(close(r.n_h, 0.046_836_037_378_490_85, 1e-8), "{r:?}");

    let mut base = p.clone();
    base.duffing = [0.0; 2];
    let r = transfer_experiment(&base, one, 0.5, 0.1, TransferFrame::Bogoliubov).unwrap();
    assert!(close(r.f, 0.917_635_242_722_846, 1e-9), "{r:?}");
    assert!(close(r.lambda_h, 0.119_938_798_229_104_51, 1e-8), "{r:?}");
}

#[test]
fn optimal_coupling_values() {
    let p = transfer_params();
    assert!(close(optimal_coupling(&p, 0.5).unwrap(), 0.312_539_282_418_386_6, 1e-10));
    assert!(close(optimal_coupling(&p, 0.25).unwrap(), 0.171_658_606_919_593_4, 1e-10));
}
