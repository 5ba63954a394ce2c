use num_complex::Complex64;
use optomech_core::observables::{atomic_squeezing_with, optimal_coupling, transfer_model, transfer_with_model, SqueezeCase};
use serde_json::json;

use super::{collect, status, Context, Row, RunOutput};
use crate::manifest::Diagnostics;
use crate::sweep::{axis_unit, observable_meta, SweepSpec};
use crate::table::{col, Cell, Table};

struct Point {
    params: optomech_core::params::ReducedParams,
    g1: f64,
    rho: f64,
    xi: f64,
}

/// Long-format Cartesian sweep over the axes declared in the config.
pub fn run_sweep(ctx: &Context) -> RunOutput {
    let spec = SweepSpec::from_config(&ctx.cfg).expect("validated config");
    let points = spec.points();
    let route = ctx.opts.route();

    let rows = ctx.par_map(&points, |values| {
        let mut pt = Point {
            params: ctx.params.clone(),
            g1: ctx.cfg.sweep_g1,
            rho: ctx.cfg.sweep_rho,
            xi: ctx.cfg.sweep_xi,
        };
        for (axis, &v) in spec.axes.iter().zip(values) {
            let p = &mut pt.params;
            match axis.name.as_str() {
                "g1" => pt.g1 = v,
                "eta_e" => p.eta_e = v,
                "kappa" => p.kappa = v,
                "gamma" => {
                    p.gamma_m = [v, v];
                    p.gamma_e = v;
                }
                "duffing" => p.duffing = [v, v],
                "temperature" => p.temperature = [v, v],
                "xi" => pt.xi = v,
                "rho" => pt.rho = v,
                "g1_single" => p.g_single[0] = v,
                other => unreachable!("axis {other} passed validation"),
            }
        }
        evaluate(&spec, &pt, values, route, ctx.opts.frame)
    });

    let mut cols: Vec<_> = spec.axes.iter().map(|a| col(&a.name, axis_unit(&a.name), "sweep axis")).collect();
    for o in &spec.observables {
        let (unit, desc) = observable_meta(o);
        cols.push(col(o, unit, desc));
    }
    cols.push(col("rwa_ok", "-", "RWA diagnostics below threshold for every model used"));
    cols.push(col("status", "-", "ok or first failure kind"));
    let mut t = Table::new("sweep", cols);
    let mut diag = Diagnostics::default();
    collect(&mut t, rows, &mut diag);

    let grids: serde_json::Map<String, serde_json::Value> = spec.axes.iter().map(|a| (a.name.clone(), json!(a.values))).collect();
    RunOutput {
        experiment: "sweep".into(),
        tables: vec![t],
        diagnostics: diag,
        grids: json!({ "axes": grids, "observables": spec.observables }),
    }
}

fn evaluate(
    spec: &SweepSpec,
    pt: &Point,
    values: &[f64],
    route: optomech_core::dynamics::CovarianceRoute,
    frame: optomech_core::observables::TransferFrame,
) -> Row {
    let mut err: Option<optomech_core::Error> = None;
    let mut rwa_ok = true;

    let squeeze = |case| atomic_squeezing_with(&pt.params, case, pt.params.eta_e, pt.g1, route);
    let needs = |names: &[&str]| names.iter().any(|n| spec.wants(n));
    let sq_i = needs(&["d_yc_i", "var_y_i"]).then(|| squeeze(SqueezeCase::I));
    let sq_ii = needs(&["d_yc_ii", "var_y_ii"]).then(|| squeeze(SqueezeCase::II));
    let model = needs(&["fidelity", "n_h", "lambda_h", "r1", "gp1"]).then(|| transfer_model(&pt.params, pt.g1));
    let transfer = needs(&["fidelity", "n_h", "lambda_h"]).then(|| {
        model
            .clone()
            .expect("model computed")
            .and_then(|m| transfer_with_model(&m, Complex64::new(pt.rho, 0.0), pt.xi, pt.g1, frame, route))
    });
    let g_opt = needs(&["g1_opt"]).then(|| optimal_coupling(&pt.params, pt.xi));

    for r in [&sq_i, &sq_ii].into_iter().flatten() {
        match r {
            Ok(rep) => rwa_ok &= rep.rwa_ok,
            Err(e) => note(e, &mut err),
        }
    }
    if let Some(t) = &transfer {
        match t {
            Ok(rep) => rwa_ok &= rep.rwa_ok,
            Err(e) => note(e, &mut err),
        }
    }
    if let Some(Err(e)) = &model {
        note(e, &mut err);
    }
    if let Some(Err(e)) = &g_opt {
        note(e, &mut err);
    }

    let mut cells: Vec<Cell> = values.iter().map(|&v| v.into()).collect();
    for o in &spec.observables {
        let v = match o.as_str() {
            "d_yc_i" => pick(&sq_i, |r| r.d_yc),
            "d_yc_ii" => pick(&sq_ii, |r| r.d_yc),
            "var_y_i" => pick(&sq_i, |r| r.var_y),
            "var_y_ii" => pick(&sq_ii, |r| r.var_y),
            "fidelity" => pick(&transfer, |r| r.f),
            "n_h" => pick(&transfer, |r| r.n_h),
            "lambda_h" => pick(&transfer, |r| r.lambda_h),
            "r1" => pick(&model, |m| m.r[0]),
            "gp1" => pick(&model, |m| m.gp[0]),
            "g1_opt" => pick(&g_opt, |g| *g),
            other => unreachable!("observable {other} passed validation"),
        };
        cells.push(v.into());
    }
    let rwa_ok = rwa_ok && err.is_none();
    cells.push(rwa_ok.into());
    cells.push(status(&err));
    let where_ = spec
        .axes
        .iter()
        .zip(values)
        .map(|(a, v)| format!("{} = {v}", a.name))
        .collect::<Vec<_>>()
        .join(", ");
    Row {
        cells,
        rwa_ok,
        error: err.map(|e| format!("sweep point [{where_}]: {e}")),
        steady: None,
    }
}

fn pick<T>(r: &Option<optomech_core::Result<T>>, f: impl Fn(&T) -> f64) -> f64 {
    match r {
        Some(Ok(v)) => f(v),
        _ => f64::NAN,
    }
}

fn note(e: &optomech_core::Error, err: &mut Option<optomech_core::Error>) {
    if err.is_none() {
        *err = Some(e.clone());
    }
}
