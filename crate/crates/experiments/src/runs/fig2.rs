use optomech_core::frame::{build_effective, RWA_THRESHOLD};
use optomech_core::steady_state::solve_self_consistent;
use serde_json::json;

use super::{collect, Context, Row, RunOutput};
use crate::manifest::Diagnostics;
use crate::table::{col, Cell, Table};

/// Enhanced coupling versus input power: G₁/ω₁ without anharmonicity (table
/// `fig2a`) and G'₁/Ω₁ with it (table `fig2b`), one curve per g₁.
pub fn run_fig2(ctx: &Context) -> RunOutput {
    let powers = ctx.cfg.fig2_powers();
    let points: Vec<(f64, f64)> = ctx
        .cfg
        .fig2_g1_single
        .iter()
        .flat_map(|&g| powers.iter().map(move |&p| (g, p)))
        .collect();

    let mut diag = Diagnostics::default();
    let mut a = Table::new(
        "fig2a",
        vec![
            col("g1_single", "omega1", "single-photon coupling g1 = g2"),
            col("input_power", "W", "laser input power"),
            col("g1", "omega1", "enhanced coupling G1, no anharmonicity"),
            col("iterations", "-", "fixed-point sweeps"),
            col("rwa_ok", "-", "G1/omega1 below the RWA threshold"),
            col("status", "-", "ok or failure kind"),
        ],
    );
    let mut b = Table::new(
        "fig2b",
        vec![
            col("g1_single", "omega1", "single-photon coupling g1 = g2"),
            col("input_power", "W", "laser input power"),
            col("g1", "omega1", "enhanced coupling G1 with anharmonicity"),
            col("r1", "-", "Bogoliubov squeeze of mirror 1"),
            col("omega_1", "omega1", "Bogoliubov frequency Omega1"),
            col("gp1_over_omega_1", "-", "G'1/Omega1"),
            col("iterations", "-", "fixed-point sweeps"),
            col("rwa_ok", "-", "RWA diagnostics below threshold"),
            col("status", "-", "ok or failure kind"),
        ],
    );

    let rows = ctx.par_map(&points, |&(g, power)| {
        let mut p = ctx.params.clone();
        p.g_single = [g, g];
        p.input_power = power;
        let mut bare = p.clone();
        bare.duffing = [0.0; 2];

        let ra = match solve_self_consistent(&bare) {
            Ok(st) => Row {
                cells: vec![g.into(), power.into(), st.g_enh[0].into(), st.iterations.into(), (st.g_enh[0] < RWA_THRESHOLD).into(), "ok".into()],
                rwa_ok: st.g_enh[0] < RWA_THRESHOLD,
                error: None,
                steady: Some((st.iterations, st.residual)),
            },
            Err(e) => failed_row(vec![g.into(), power.into(), f64::NAN.into(), 0usize.into()], &e, g, power),
        };
        let rb = match solve_self_consistent(&p).and_then(|st| build_effective(&st, &p).map(|m| (st, m))) {
            Ok((st, m)) => {
                let ok = m.rwa_diagnostics(RWA_THRESHOLD).rwa_ok;
                Row {
                    cells: vec![
                        g.into(),
                        power.into(),
                        st.g_enh[0].into(),
                        m.r[0].into(),
                        m.omega[0].into(),
                        (m.gp[0] / m.omega[0]).into(),
                        st.iterations.into(),
                        ok.into(),
                        "ok".into(),
                    ],
                    rwa_ok: ok,
                    error: None,
                    steady: Some((st.iterations, st.residual)),
                }
            }
            Err(e) => failed_row(
                vec![g.into(), power.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), 0usize.into()],
                &e,
                g,
                power,
            ),
        };
        (ra, rb)
    });
    let (rows_a, rows_b): (Vec<Row>, Vec<Row>) = rows.into_iter().unzip();
    collect(&mut a, rows_a, &mut diag);
    collect(&mut b, rows_b, &mut diag);

    RunOutput {
        experiment: "fig2".into(),
        tables: vec![a, b],
        diagnostics: diag,
        grids: json!({ "g1_single": ctx.cfg.fig2_g1_single, "input_power": powers }),
    }
}

fn failed_row(mut cells: Vec<Cell>, e: &optomech_core::Error, g: f64, power: f64) -> Row {
    cells.push(false.into());
    cells.push(e.kind().into());
    Row {
        cells,
        rwa_ok: false,
        error: Some(format!("g1_single = {g}, input_power = {power}: {e}")),
        steady: None,
    }
}
