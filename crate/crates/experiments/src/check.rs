//! RWA and physicality diagnostics.

use num_complex::Complex64;
use optomech_core::dynamics::{evolve_cov, CovarianceRoute, evolve_cov_closed, physicality, GaussianState, Mat8, Physicality, EIGEN_FLOOR, SYMMETRY_TOL};
use optomech_core::frame::{EffectiveModel, RWA_THRESHOLD};
use optomech_core::observables::{case_model, compare_frames, initial_squeezed_block, transfer_model, SqueezeCase};
use optomech_core::params::ReducedParams;
use serde_json::json;

use crate::config::Config;
use crate::grid;
use crate::manifest::Diagnostics;
use crate::runs::{Context, RunOutput};
use crate::table::{col, Cell, Table};

/// Lab-frame and RWA variances must agree this well at weak coupling.
pub const RWA_AGREEMENT: f64 = 0.01;
/// ... and disagree by at least this much at strong coupling without anharmonicity.
pub const RWA_BREAKDOWN: f64 = 0.1;
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub check: String,
    pub scenario: String,
    pub value: f64,
    pub threshold: f64,
    /// "<", "<=", ">" or ">="
    pub relation: &'static str,
    /// Advisory items are reported but never fail the run.
    pub required: bool,
    pub points: usize,
    pub pass: bool,
}

impl CheckItem {
    fn new(check: &str, scenario: String, value: f64, relation: &'static str, threshold: f64, required: bool, points: usize) -> Self {
        let pass = match relation {
            "<" => value < threshold,
            "<=" => value <= threshold,
            ">" => value > threshold,
            ">=" => value >= threshold,
            _ => unreachable!(),
        };
        CheckItem {
            check: check.into(),
            scenario,
            value,
            threshold,
            relation,
            required,
            points,
            pass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleKind {
    /// Ground state evolved to t_s in the squeezing protocol.
    Squeeze { g1: f64, case: SqueezeCase, eta_e: f64 },
    /// |rho, xi> on mirror 1 evolved to t_s in the transfer protocol.
    Transfer { g1: f64, rho: f64, xi: f64 },
}

/// One covariance evolution performed by a figure command.
#[derive(Debug, Clone, PartialEq)]
pub struct CovSample {
    pub family: &'static str,
    pub params: ReducedParams,
    pub kind: SampleKind,
}

impl CovSample {
    /// Initial covariance, model and swap time.
    pub fn setup(&self) -> optomech_core::Result<(Mat8, EffectiveModel, f64)> {
        match self.kind {
            SampleKind::Squeeze { g1, case, eta_e } => {
                let (_, m) = case_model(&self.params, case, eta_e, g1)?;
                let t = m.swap_time()?;
                Ok((GaussianState::ground_state(&m).cov, m, t))
            }
            SampleKind::Transfer { g1, rho, xi } => {
                let m = transfer_model(&self.params, g1)?;
                let mut v0 = GaussianState::ground_state(&m).cov;
                let (_, block) = initial_squeezed_block(Complex64::new(rho, 0.0), xi, m.r[0]);
                v0.fixed_view_mut::<2, 2>(4, 4).copy_from(&block);
                let t = m.swap_time()?;
                Ok((v0, m, t))
            }
        }
    }

    pub fn covariance(&self, route: CovarianceRoute) -> optomech_core::Result<Mat8> {
        let (v0, m, t) = self.setup()?;
        evolve_cov(&v0, &m, t, route)
    }
}

/// Every (parameters, protocol) pair the fig3 to fig6 commands evolve with `cfg`.
/// fig4 points are taken at the matched coupling rather than at the refined peak.
pub fn figure_samples(cfg: &Config, params: &ReducedParams) -> Vec<CovSample> {
    let cases = [SqueezeCase::I, SqueezeCase::II];
    let mut out = Vec::new();
    let mut push = |family, params: &ReducedParams, kind| {
        out.push(CovSample {
            family,
            params: params.clone(),
            kind,
        })
    };
    for &g1 in &cfg.fig3_g1 {
        for eta_e in cfg.fig3_etas() {
            for case in cases {
                push("squeezing", params, SampleKind::Squeeze { g1, case, eta_e });
            }
        }
    }
    let kappas = grid::logspace(cfg.fig4_kappa_min, cfg.fig4_kappa_max, cfg.fig4_kappa_points);
    let temps = grid::logspace(cfg.fig4_temperature_min, cfg.fig4_temperature_max, cfg.fig4_temperature_points);
    let variants: Vec<ReducedParams> = kappas
        .iter()
        .map(|&k| ReducedParams { kappa: k, ..params.clone() })
        .chain(temps.iter().map(|&t| ReducedParams { temperature: [t, t], ..params.clone() }))
        .collect();
    for &g1 in &cfg.fig4_g1 {
        for case in cases {
            for p in &variants {
                let eta_e = case_model(p, case, 0.0, g1).map_or(f64::NAN, |(_, m)| case.matched_eta(m.gp[0]));
                push("squeezing", p, SampleKind::Squeeze { g1, case, eta_e });
            }
        }
    }
    let p5 = ReducedParams { eta_e: cfg.fig5_eta_e, ..params.clone() };
    for st in cfg.fig5_initial_states().unwrap_or_default() {
        for g1 in cfg.fig5_g1s() {
            push("transfer", &p5, SampleKind::Transfer { g1, rho: st.rho_re, xi: st.xi });
        }
    }
    let p6 = ReducedParams { eta_e: cfg.fig6_eta_e, ..params.clone() };
    let curves: Vec<(f64, [f64; 2])> = cfg.fig6_g1.iter().map(|&g| (g, p6.duffing)).chain([(cfg.fig6_baseline_g1, [0.0; 2])]).collect();
    for (g1, duffing) in curves {
        let base = ReducedParams { duffing, ..p6.clone() };
        let kind = SampleKind::Transfer { g1, rho: cfg.fig6_rho, xi: cfg.fig6_xi };
        for k in grid::linspace(cfg.fig6_kappa_min, cfg.fig6_kappa_max, cfg.fig6_kappa_points) {
            push("transfer", &ReducedParams { kappa: k, ..base.clone() }, kind);
        }
        for e in grid::linspace(cfg.fig6_eta_min, cfg.fig6_eta_max, cfg.fig6_eta_points) {
            push("transfer", &ReducedParams { eta_e: e, ..base.clone() }, kind);
        }
        for t in grid::linspace(cfg.fig6_temperature_min, cfg.fig6_temperature_max, cfg.fig6_temperature_points) {
            push("transfer", &ReducedParams { temperature: [t, t], ..base.clone() }, kind);
        }
    }
    out
}

/// Worst symmetry and uncertainty diagnostics over every covariance the figure
/// commands produce with the current config. Points without a swap time are skipped.
pub fn physicality_survey(ctx: &Context) -> Vec<CheckItem> {
    let jobs = figure_samples(&ctx.cfg, &ctx.params);
    let route = ctx.opts.route();
    let results: Vec<Option<Physicality>> = ctx.par_map(&jobs, |s| s.covariance(route).ok().map(|v| physicality(&v)));
    let mut items = Vec::new();
    for family in ["squeezing", "transfer"] {
        let found: Vec<Physicality> = jobs
            .iter()
            .zip(&results)
            .filter(|(s, _)| s.family == family)
            .filter_map(|(_, r)| *r)
            .collect();
        let total = jobs.iter().filter(|s| s.family == family).count();
        let scenario = format!("{family} covariances at t_s over the figure grids ({} of {total} points have a swap time)", found.len());
        let asym = found.iter().map(|p| p.asymmetry).fold(0.0, f64::max);
        let min_eig = found.iter().map(|p| p.min_eigenvalue).fold(f64::INFINITY, f64::min);
        items.push(CheckItem::new("symmetry", scenario.clone(), asym, "<=", SYMMETRY_TOL, true, found.len()));
        items.push(CheckItem::new("uncertainty", scenario, min_eig, ">=", EIGEN_FLOOR, true, found.len()));
    }
    items.push(lossless_purity(ctx));
    items
}

/// det(2V) of an initially pure state under the dissipation-free dynamics.
fn lossless_purity(ctx: &Context) -> CheckItem {
    let mut jobs = Vec::new();
    for &g in &ctx.cfg.fig3_g1 {
        for case in [SqueezeCase::I, SqueezeCase::II] {
            for eta in [0.0, 0.05, 0.2, 0.6] {
                for frac in [0.3, 1.0, 2.7] {
                    jobs.push((g, case, eta, frac));
                }
            }
        }
    }
    let dev: Vec<Option<f64>> = ctx.par_map(&jobs, |&(g, case, eta, frac)| {
        let (_, m) = case_model(&ctx.params, case, eta, g).ok()?;
        let m = m.lossless();
        let t = frac * m.lossless_swap_time().ok()?;
        let v = evolve_cov_closed(&(Mat8::identity() * 0.5), &m, t).ok()?;
        Some((physicality(&v).purity_det - 1.0).abs())
    });
    let found: Vec<f64> = dev.into_iter().flatten().collect();
    CheckItem::new(
        "purity",
        format!("|det(2V) - 1| for vacuum inputs without dissipation ({} evolutions)", found.len()),
        found.iter().copied().fold(0.0, f64::max),
        "<=",
        PURITY_TOL,
        true,
        found.len(),
    )
}

/// Lab-frame versus RWA agreement at weak coupling and its breakdown at strong
/// coupling without anharmonicity, plus the RWA flags along the fig5 grid.
pub fn rwa_checks(ctx: &Context) -> Vec<CheckItem> {
    let mut items = Vec::new();
    let weak = compare_frames(&ctx.params, SqueezeCase::I, 1e-3);
    items.push(CheckItem::new(
        "rwa-agreement",
        "max relative variance difference, lab vs RWA, G1 = 1e-3 omega1, mirror 2 fixed, eta_e = G'1".into(),
        weak.map_or(f64::NAN, |c| c.max_rel_diff),
        "<",
        RWA_AGREEMENT,
        true,
        1,
    ));
    let mut bare = ctx.params.clone();
    bare.duffing = [0.0; 2];
    let strong = compare_frames(&bare, SqueezeCase::I, 0.5);
    items.push(CheckItem::new(
        "rwa-breakdown",
        "max relative variance difference, lab vs RWA, G1 = 0.5 omega1, no anharmonicity".into(),
        strong.map_or(f64::NAN, |c| c.max_rel_diff),
        ">",
        RWA_BREAKDOWN,
        true,
        1,
    ));
    let mut p5 = ctx.params.clone();
    p5.eta_e = ctx.cfg.fig5_eta_e;
    let g1s = ctx.cfg.fig5_g1s();
    let flags = ctx.par_map(&g1s, |&g| transfer_model(&p5, g).map(|m| m.rwa_diagnostics(RWA_THRESHOLD).rwa_ok));
    let violations = flags.iter().filter(|f| !matches!(f, Ok(true))).count();
    items.push(CheckItem::new(
        "rwa-flags",
        format!("fig5 grid points outside the RWA threshold {RWA_THRESHOLD}"),
        violations as f64,
        "<=",
        0.0,
        false,
        g1s.len(),
    ));
    items
}

/// Runs every diagnostic. The boolean is false when a required check failed.
pub fn run_check(ctx: &Context) -> (RunOutput, bool) {
    let mut items = rwa_checks(ctx);
    items.extend(physicality_survey(ctx));
    let mut t = Table::new(
        "check",
        vec![
            col("check", "-", "diagnostic name"),
            col("scenario", "-", "what was evaluated"),
            col("value", "-", "worst value found"),
            col("relation", "-", "pass condition relating value to threshold"),
            col("threshold", "-", "limit"),
            col("required", "-", "false for advisory items"),
            col("points", "-", "number of evaluations"),
            col("pass", "-", "condition holds"),
        ],
    );
    let mut diag = Diagnostics::default();
    let mut ok = true;
    for it in &items {
        if it.required && !it.pass {
            ok = false;
            diag.record_failure(&format!("{} failed: {} {} {} ({})", it.check, it.value, it.relation, it.threshold, it.scenario));
        } else {
            diag.record_ok(it.pass);
        }
        t.push(vec![
            it.check.as_str().into(),
            format!("\"{}\"", it.scenario).into(),
            it.value.into(),
            it.relation.into(),
            it.threshold.into(),
            it.required.into(),
            it.points.into(),
            Cell::B(it.pass),
        ]);
    }
    let out = RunOutput {
        experiment: "check".into(),
        tables: vec![t],
        diagnostics: diag,
        grids: json!({ "rwa_agreement": RWA_AGREEMENT, "rwa_breakdown": RWA_BREAKDOWN, "purity_tol": PURITY_TOL }),
    };
    (out, ok)
}

/// Human-readable report, one line per item.
pub fn report(items: &Table) -> String {
    let mut s = String::new();
    for row in &items.rows {
        let get = |k: usize| match &row[k] {
            Cell::F(x) => crate::table::format_f64(*x),
            Cell::S(x) => x.trim_matches('"').to_string(),
            Cell::B(b) => b.to_string(),
            Cell::U(n) => n.to_string(),
        };
        let tag = match (&row[7], &row[5]) {
            (Cell::B(true), _) => "PASS",
            (_, Cell::B(false)) => "WARN",
            _ => "FAIL",
        };
        s.push_str(&format!("[{tag}] {}: {} {} {} ({})\n", get(0), get(2), get(3), get(4), get(1)));
    }
    s
}
