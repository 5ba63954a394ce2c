use num_complex::Complex64;
use optomech_core::observables::{optimal_coupling, transfer_model, transfer_with_model, TransferReport};
use optomech_core::params::ReducedParams;
use serde_json::json;

use super::{collect, status, Context, Row, RunOutput};
use crate::grid;
use crate::manifest::Diagnostics;
use crate::table::{col, Cell, Column, Table};

fn report_columns() -> Vec<Column> {
    vec![
        col("gp1", "omega1", "transformed coupling G'1"),
        col("r1", "-", "Bogoliubov squeeze of mirror 1"),
        col("t_s", "1/omega1", "swap time"),
        col("fidelity", "-", "transfer fidelity"),
        col("n_h", "-", "heating parameter"),
        col("lambda_h", "-", "amplitude-decay parameter"),
        col("rwa_ok", "-", "RWA diagnostics below threshold"),
        col("status", "-", "ok or failure kind"),
    ]
}

fn report_row(mut cells: Vec<Cell>, gp1: f64, rep: &optomech_core::Result<TransferReport>, what: impl FnOnce() -> String) -> Row {
    let f = |get: fn(&TransferReport) -> f64| Cell::F(rep.as_ref().map_or(f64::NAN, get));
    let rwa_ok = rep.as_ref().is_ok_and(|r| r.rwa_ok);
    let err = rep.as_ref().err().cloned();
    cells.extend([gp1.into(), f(|r| r.r1), f(|r| r.t_s), f(|r| r.f), f(|r| r.n_h), f(|r| r.lambda_h), rwa_ok.into(), status(&err)]);
    Row {
        cells,
        rwa_ok,
        error: err.map(|e| format!("{}: {e}", what())),
        steady: None,
    }
}

/// F, n̄_h and λ_h versus G₁ for each configured initial state (table `fig5`),
/// and the location of the best transfer per state (table `fig5_optimum`).
pub fn run_fig5(ctx: &Context) -> RunOutput {
    let g1s = ctx.cfg.fig5_g1s();
    let states = ctx.cfg.fig5_initial_states().expect("validated config");
    let route = ctx.opts.route();
    let frame = ctx.opts.frame;
    let mut p = ctx.params.clone();
    p.eta_e = ctx.cfg.fig5_eta_e;

    let models = ctx.par_map(&g1s, |&g| transfer_model(&p, g));
    let jobs: Vec<(usize, usize)> = (0..states.len()).flat_map(|s| (0..g1s.len()).map(move |k| (s, k))).collect();
    let rows = ctx.par_map(&jobs, |&(s, k)| {
        let st = states[s];
        let g1 = g1s[k];
        let rep = models[k]
            .clone()
            .and_then(|m| transfer_with_model(&m, Complex64::new(st.rho_re, st.rho_im), st.xi, g1, frame, route));
        let gp1 = models[k].as_ref().map_or(f64::NAN, |m| m.gp[0]);
        report_row(vec![st.rho_re.into(), st.rho_im.into(), st.xi.into(), g1.into()], gp1, &rep, || {
            format!("state ({}, {}, {}), g1 = {g1}", st.rho_re, st.rho_im, st.xi)
        })
    });
    let mut cols = vec![
        col("rho_re", "-", "Re of the coherent amplitude"),
        col("rho_im", "-", "Im of the coherent amplitude"),
        col("xi", "-", "squeeze parameter of the initial state"),
        col("g1", "omega1", "enhanced coupling G1 = G2"),
    ];
    cols.extend(report_columns());
    let mut t = Table::new("fig5", cols);
    let mut diag = Diagnostics::default();
    collect(&mut t, rows, &mut diag);

    let fid = t.column_f64("fidelity");
    let nh = t.column_f64("n_h");
    let opt_rows = ctx.par_map(&(0..states.len()).collect::<Vec<_>>(), |&s| {
        let st = states[s];
        let range = s * g1s.len()..(s + 1) * g1s.len();
        let argbest = |v: &[f64], better: fn(f64, f64) -> bool| {
            let mut best: Option<usize> = None;
            for (k, &x) in v.iter().enumerate() {
                if x.is_finite() && best.is_none_or(|b| better(x, v[b])) {
                    best = Some(k);
                }
            }
            best
        };
        let kf = argbest(&fid[range.clone()], |a, b| a > b);
        let kn = argbest(&nh[range], |a, b| a < b);
        let at = |k: Option<usize>, v: &[f64]| k.map_or((f64::NAN, f64::NAN), |k| (g1s[k], v[s * g1s.len() + k]));
        let (g_f, f_max) = at(kf, &fid);
        let (g_n, n_min) = at(kn, &nh);
        let interior = kf.is_some_and(|k| k > 0 && k + 1 < g1s.len());
        let opt = optimal_coupling(&p, st.xi);
        let g_opt = opt.as_ref().map_or(f64::NAN, |g| *g);
        let err = opt.as_ref().err().cloned();
        Row {
            cells: vec![
                st.rho_re.into(),
                st.rho_im.into(),
                st.xi.into(),
                g_f.into(),
                f_max.into(),
                interior.into(),
                g_n.into(),
                n_min.into(),
                g_opt.into(),
                ((g_f - g_opt).abs() / g_opt).into(),
                true.into(),
                status(&err),
            ],
            rwa_ok: true,
            error: err.map(|e| format!("optimal coupling for xi = {}: {e}", st.xi)),
            steady: None,
        }
    });
    let mut opt = Table::new(
        "fig5_optimum",
        vec![
            col("rho_re", "-", "Re of the coherent amplitude"),
            col("rho_im", "-", "Im of the coherent amplitude"),
            col("xi", "-", "squeeze parameter of the initial state"),
            col("g1_max_fidelity", "omega1", "grid G1 with the largest F"),
            col("fidelity_max", "-", "largest F on the grid"),
            col("interior_max", "-", "largest F not at a grid end"),
            col("g1_min_n_h", "omega1", "grid G1 with the smallest heating parameter"),
            col("n_h_min", "-", "smallest heating parameter on the grid"),
            col("g1_opt", "omega1", "root of r1 = xi + pi kappa / (2 curly G)"),
            col("rel_diff", "-", "|g1_max_fidelity - g1_opt| / g1_opt"),
            col("rwa_ok", "-", "always true, no dynamics evaluated"),
            col("status", "-", "ok or failure kind"),
        ],
    );
    collect(&mut opt, opt_rows, &mut diag);

    RunOutput {
        experiment: "fig5".into(),
        tables: vec![t, opt],
        diagnostics: diag,
        grids: json!({ "g1": g1s, "states": ctx.cfg.fig5_states, "eta_e": ctx.cfg.fig5_eta_e }),
    }
}

struct Curve {
    label: String,
    g1: f64,
    duffing: [f64; 2],
}

/// F versus κ, η_e and T (tables `fig6_kappa`, `fig6_eta`, `fig6_temperature`)
/// for each configured G₁, plus a curve without anharmonicity at the baseline G₁.
pub fn run_fig6(ctx: &Context) -> RunOutput {
    let cfg = &ctx.cfg;
    let mut base = ctx.params.clone();
    base.eta_e = cfg.fig6_eta_e;
    let mut curves: Vec<Curve> = cfg
        .fig6_g1
        .iter()
        .map(|&g| Curve {
            label: format!("g1={}", crate::table::format_f64(g)),
            g1: g,
            duffing: base.duffing,
        })
        .collect();
    curves.push(Curve {
        label: "baseline".into(),
        g1: cfg.fig6_baseline_g1,
        duffing: [0.0; 2],
    });
    let kappas = grid::linspace(cfg.fig6_kappa_min, cfg.fig6_kappa_max, cfg.fig6_kappa_points);
    let etas = grid::linspace(cfg.fig6_eta_min, cfg.fig6_eta_max, cfg.fig6_eta_points);
    let temps = grid::linspace(cfg.fig6_temperature_min, cfg.fig6_temperature_max, cfg.fig6_temperature_points);

    let mut diag = Diagnostics::default();
    let panels: [(&str, &str, &str, &[f64], fn(&mut ReducedParams, f64)); 3] = [
        ("fig6_kappa", "kappa", "omega1", &kappas, |p, x| p.kappa = x),
        ("fig6_eta", "eta_e", "omega1", &etas, |p, x| p.eta_e = x),
        ("fig6_temperature", "temperature", "K", &temps, |p, x| p.temperature = [x, x]),
    ];
    let mut tables = Vec::new();
    for (name, axis, unit, xs, set) in panels {
        let jobs: Vec<(usize, f64)> = (0..curves.len()).flat_map(|c| xs.iter().map(move |&x| (c, x))).collect();
        let rows = ctx.par_map(&jobs, |&(c, x)| {
            let curve = &curves[c];
            let mut p = base.clone();
            p.duffing = curve.duffing;
            set(&mut p, x);
            let model = transfer_model(&p, curve.g1);
            let gp1 = model.as_ref().map_or(f64::NAN, |m| m.gp[0]);
            let rep = model.and_then(|m| {
                transfer_with_model(&m, Complex64::new(cfg.fig6_rho, 0.0), cfg.fig6_xi, curve.g1, ctx.opts.frame, ctx.opts.route())
            });
            report_row(
                vec![curve.label.as_str().into(), curve.g1.into(), curve.duffing[0].into(), x.into()],
                gp1,
                &rep,
                || format!("{name} {} at {axis} = {x}", curve.label),
            )
        });
        let mut cols = vec![
            col("curve", "-", "curve label"),
            col("g1", "omega1", "enhanced coupling G1 = G2"),
            col("duffing1", "omega1", "anharmonicity of mirror 1"),
            col(axis, unit, "swept parameter"),
        ];
        cols.extend(report_columns());
        let mut t = Table::new(name, cols);
        collect(&mut t, rows, &mut diag);
        tables.push(t);
    }

    RunOutput {
        experiment: "fig6".into(),
        tables,
        diagnostics: diag,
        grids: json!({
            "g1": cfg.fig6_g1,
            "baseline_g1": cfg.fig6_baseline_g1,
            "rho": cfg.fig6_rho,
            "xi": cfg.fig6_xi,
            "kappa": kappas,
            "eta_e": etas,
            "temperature": temps,
        }),
    }
}
