use std::f64::consts::LN_10;

use optomech_core::frame::RWA_THRESHOLD;
use optomech_core::observables::{atomic_squeezing_with, case_model, peak_squeezing, refine_peak, SqueezeCase};
use optomech_core::params::ReducedParams;
use serde_json::json;

use super::{collect, status, Context, Row, RunOutput};
use crate::grid;
use crate::manifest::Diagnostics;
use crate::table::{col, Cell, Table};

const CASES: [SqueezeCase; 2] = [SqueezeCase::I, SqueezeCase::II];

/// D_yc versus η_e for both cases and every configured G₁, plus refined peaks.
pub fn run_fig3(ctx: &Context) -> RunOutput {
    let etas = ctx.cfg.fig3_etas();
    let g1s = ctx.cfg.fig3_g1.clone();
    let route = ctx.opts.route();
    let points: Vec<(f64, f64)> = g1s.iter().flat_map(|&g| etas.iter().map(move |&e| (g, e))).collect();

    let mut diag = Diagnostics::default();
    let mut t = Table::new(
        "fig3",
        vec![
            col("g1", "omega1", "enhanced coupling G1"),
            col("eta_e", "omega1", "atom-field coupling"),
            col("gp1", "omega1", "transformed coupling G'1"),
            col("d_yc_i", "dB", "squeezing of y_c, mirror 2 fixed"),
            col("d_yc_ii", "dB", "squeezing of y_c, both mirrors coupled"),
            col("var_y_i", "-", "var(y_c) at t_s, mirror 2 fixed"),
            col("var_y_ii", "-", "var(y_c) at t_s, both mirrors coupled"),
            col("limit_3db", "dB", "3 dB reference"),
            col("rwa_ok", "-", "RWA diagnostics below threshold in both cases"),
            col("status", "-", "ok or failure kind"),
        ],
    );
    let rows = ctx.par_map(&points, |&(g1, eta)| {
        let ri = atomic_squeezing_with(&ctx.params, SqueezeCase::I, eta, g1, route);
        let rii = atomic_squeezing_with(&ctx.params, SqueezeCase::II, eta, g1, route);
        let gp1 = ri.as_ref().or(rii.as_ref()).map_or(f64::NAN, |r| r.gp1);
        let err = ri.as_ref().err().or(rii.as_ref().err()).cloned();
        let rwa_ok = ri.as_ref().is_ok_and(|r| r.rwa_ok) && rii.as_ref().is_ok_and(|r| r.rwa_ok);
        let val = |r: &Result<optomech_core::observables::SqueezeReport, _>, f: fn(&optomech_core::observables::SqueezeReport) -> f64| {
            Cell::F(r.as_ref().map_or(f64::NAN, f))
        };
        Row {
            cells: vec![
                g1.into(),
                eta.into(),
                gp1.into(),
                val(&ri, |r| r.d_yc),
                val(&rii, |r| r.d_yc),
                val(&ri, |r| r.var_y),
                val(&rii, |r| r.var_y),
                3.0.into(),
                rwa_ok.into(),
                status(&err),
            ],
            rwa_ok,
            error: err.map(|e| format!("g1 = {g1}, eta_e = {eta}: {e}")),
            steady: None,
        }
    });
    collect(&mut t, rows, &mut diag);

    let d_i = t.column_f64("d_yc_i");
    let d_ii = t.column_f64("d_yc_ii");
    let n = etas.len();
    let jobs: Vec<(usize, f64, SqueezeCase)> = g1s
        .iter()
        .enumerate()
        .flat_map(|(k, &g)| CASES.map(|c| (k, g, c)))
        .collect();
    let mut peaks = peak_table("fig3_peaks");
    let rows = ctx.par_map(&jobs, |&(k, g1, case)| {
        let col = if case == SqueezeCase::I { &d_i } else { &d_ii };
        let values: Vec<f64> = col[k * n..(k + 1) * n]
            .iter()
            .map(|v| if v.is_nan() { f64::NEG_INFINITY } else { *v })
            .collect();
        let peak = refine_peak(&ctx.params, case, g1, &etas, &values, route);
        peak_row(&ctx.params, case, g1, peak, ctx.cfg.fig3_eta_step)
    });
    collect(&mut peaks, rows, &mut diag);

    RunOutput {
        experiment: "fig3".into(),
        tables: vec![t, peaks],
        diagnostics: diag,
        grids: json!({ "g1": g1s, "eta_e": etas }),
    }
}

fn peak_table(name: &str) -> Table {
    Table::new(
        name,
        vec![
            col("g1", "omega1", "enhanced coupling G1"),
            col("case", "-", "i: mirror 2 fixed, ii: both mirrors coupled"),
            col("kappa", "omega1", "cavity damping"),
            col("temperature", "K", "bath temperature"),
            col("gp1", "omega1", "transformed coupling G'1"),
            col("matched_eta", "omega1", "G'1 (case i) or sqrt(2) G'1 (case ii)"),
            col("grid_eta", "omega1", "best grid point"),
            col("eta_peak", "omega1", "refined peak location"),
            col("d_peak", "dB", "refined peak squeezing"),
            col("offset_steps", "-", "(eta_peak - matched_eta) / grid step"),
            col("d_lossless", "dB", "lossless value (20/ln 10) r1"),
            col("rwa_ok", "-", "RWA diagnostics below threshold at the peak"),
            col("status", "-", "ok or failure kind"),
        ],
    )
}

fn peak_row(
    params: &ReducedParams,
    case: SqueezeCase,
    g1: f64,
    peak: optomech_core::Result<optomech_core::observables::PeakReport>,
    step: f64,
) -> Row {
    let at_peak = peak.as_ref().ok().map(|pk| case_model(params, case, pk.eta_peak, g1));
    let (r1, rwa_ok) = match &at_peak {
        Some(Ok((_, m))) => (m.r[0], m.rwa_diagnostics(RWA_THRESHOLD).rwa_ok),
        _ => (f64::NAN, false),
    };
    let err = match (&peak, at_peak) {
        (Err(e), _) => Some(e.clone()),
        (_, Some(Err(e))) => Some(e),
        _ => None,
    };
    let f = |get: fn(&optomech_core::observables::PeakReport) -> f64| Cell::F(peak.as_ref().map_or(f64::NAN, get));
    let gp1 = peak.as_ref().map_or(f64::NAN, |p| p.gp1);
    let matched = case.matched_eta(gp1);
    Row {
        cells: vec![
            g1.into(),
            case.label().into(),
            params.kappa.into(),
            params.temperature[0].into(),
            gp1.into(),
            matched.into(),
            f(|p| p.grid_eta),
            f(|p| p.eta_peak),
            f(|p| p.d_peak),
            Cell::F(peak.as_ref().map_or(f64::NAN, |p| (p.eta_peak - matched) / step)),
            (20.0 / LN_10 * r1).into(),
            rwa_ok.into(),
            status(&err),
        ],
        rwa_ok,
        error: err.map(|e| format!("peak g1 = {g1}, case {}, kappa = {}, T = {}: {e}", case.label(), params.kappa, params.temperature[0])),
        steady: None,
    }
}

/// Peak D_yc versus κ (table `fig4_kappa`) and versus T (table `fig4_temperature`).
///
/// Each peak is searched on a window of relative half-width `fig4_eta_window`
/// around the matched coupling, then refined by golden section.
pub fn run_fig4(ctx: &Context) -> RunOutput {
    let cfg = &ctx.cfg;
    let kappas = grid::logspace(cfg.fig4_kappa_min, cfg.fig4_kappa_max, cfg.fig4_kappa_points);
    let temps = grid::logspace(cfg.fig4_temperature_min, cfg.fig4_temperature_max, cfg.fig4_temperature_points);
    let mut diag = Diagnostics::default();
    let t_kappa = peak_sweep(ctx, "fig4_kappa", &kappas, |p, x| p.kappa = x, &mut diag);
    let t_temp = peak_sweep(ctx, "fig4_temperature", &temps, |p, x| p.temperature = [x, x], &mut diag);
    RunOutput {
        experiment: "fig4".into(),
        tables: vec![t_kappa, t_temp],
        diagnostics: diag,
        grids: json!({ "g1": cfg.fig4_g1, "kappa": kappas, "temperature": temps }),
    }
}

fn peak_sweep(ctx: &Context, name: &str, xs: &[f64], set: fn(&mut ReducedParams, f64), diag: &mut Diagnostics) -> Table {
    let cfg = &ctx.cfg;
    let route = ctx.opts.route();
    let jobs: Vec<(f64, SqueezeCase, f64)> = cfg
        .fig4_g1
        .iter()
        .flat_map(|&g| CASES.into_iter().flat_map(move |c| xs.iter().map(move |&x| (g, c, x))))
        .collect();
    let rel_step = 2.0 * cfg.fig4_eta_window / (cfg.fig4_eta_points - 1) as f64;
    let rows = ctx.par_map(&jobs, |&(g1, case, x)| {
        let mut p = ctx.params.clone();
        set(&mut p, x);
        let matched = case_model(&p, case, 0.0, g1).map(|(_, m)| case.matched_eta(m.gp[0]));
        let peak = matched.clone().and_then(|c| {
            let window = grid::linspace(c * (1.0 - cfg.fig4_eta_window), c * (1.0 + cfg.fig4_eta_window), cfg.fig4_eta_points);
            peak_squeezing(&p, case, g1, &window, route)
        });
        peak_row(&p, case, g1, peak, rel_step * matched.unwrap_or(f64::NAN))
    });
    let mut t = peak_table(name);
    collect(&mut t, rows, diag);
    t
}
