//! Experiment drivers. Each returns its tables plus diagnostics; [`write_output`]
//! puts them on disk next to a single JSON manifest.

mod fig2;
mod squeeze_figs;
mod sweep;
mod transfer_figs;

use std::path::{Path, PathBuf};
use std::time::Instant;

use optomech_core::dynamics::CovarianceRoute;
use optomech_core::observables::TransferFrame;
use optomech_core::params::{reduce, ReducedParams};
use rayon::prelude::*;

use crate::config::{Config, ConfigError};
use crate::manifest::{content_hash, Diagnostics, Manifest, TableEntry};
use crate::table::{format_f64, Cell, Table};

pub use fig2::run_fig2;
pub use squeeze_figs::{run_fig3, run_fig4};
pub use sweep::run_sweep;
pub use transfer_figs::{run_fig5, run_fig6};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// 0 means one worker per available core.
    pub workers: usize,
    /// Integrate the covariance with the oscillating noise term instead of the closed form.
    pub include_nt: bool,
    pub frame: TransferFrame,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            include_nt: false,
            frame: TransferFrame::Bogoliubov,
        }
    }
}

impl RunOptions {
    pub fn route(&self) -> CovarianceRoute {
        if self.include_nt {
            CovarianceRoute::Ode { include_nt: true }
        } else {
            CovarianceRoute::Closed
        }
    }
}

pub struct Context {
    pub cfg: Config,
    pub params: ReducedParams,
    pub opts: RunOptions,
    pool: rayon::ThreadPool,
}

impl Context {
    pub fn new(cfg: Config, opts: RunOptions) -> Result<Context, ConfigError> {
        let params = reduce(&cfg.system_params()?).map_err(|e| ConfigError(e.to_string()))?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| ConfigError(format!("cannot start worker pool: {e}")))?;
        Ok(Context { cfg, params, opts, pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Parallel map that keeps the input order.
    pub fn par_map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }

    /// Comment lines heading every CSV written by this context.
    pub fn preamble(&self, experiment: &str) -> Vec<String> {
        let p = &self.params;
        let pair = |v: [f64; 2]| format!("{}, {}", format_f64(v[0]), format_f64(v[1]));
        let route = match self.opts.route() {
            CovarianceRoute::Closed => "closed".to_string(),
            CovarianceRoute::Ode { include_nt } => format!("ode (include_nt = {include_nt})"),
        };
        vec![
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            format!("experiment: {experiment}"),
            format!("omega1 [rad/s]: {}", format_f64(p.omega1_si)),
            "reduced parameters (rates in units of omega1, temperature in K, power in W):".into(),
            format!("  omega_m = {}", pair(p.omega_m)),
            format!("  gamma_m = {}", pair(p.gamma_m)),
            format!("  duffing = {}", pair(p.duffing)),
            format!("  g_single = {}", pair(p.g_single)),
            format!("  kappa = {}", format_f64(p.kappa)),
            format!("  eta_e = {}", format_f64(p.eta_e)),
            format!("  gamma_e = {}", format_f64(p.gamma_e)),
            format!("  temperature = {}", pair(p.temperature)),
            format!("  omega_l = {}", format_f64(p.omega_l)),
            format!("  input_power = {}", format_f64(p.input_power)),
            format!("  detuning_rule = {}", self.cfg.detuning_rule),
            format!("covariance route: {route}"),
            format!("transfer frame: {}", frame_label(self.opts.frame)),
        ]
    }
}

pub fn frame_label(f: TransferFrame) -> &'static str {
    match f {
        TransferFrame::Bogoliubov => "bogoliubov",
        TransferFrame::Bare => "bare",
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub experiment: String,
    pub tables: Vec<Table>,
    pub diagnostics: Diagnostics,
    pub grids: serde_json::Value,
}

impl RunOutput {
    pub fn table(&self, name: &str) -> &Table {
        self.tables
            .iter()
            .find(|t| t.name == name)
            .unwrap_or_else(|| panic!("{} produced no table {name}", self.experiment))
    }
}

/// One computed row plus what the diagnostics need to know about it.
pub(crate) struct Row {
    pub cells: Vec<Cell>,
    pub rwa_ok: bool,
    pub error: Option<String>,
    pub steady: Option<(usize, f64)>,
}

pub(crate) fn status(err: &Option<optomech_core::Error>) -> Cell {
    match err {
        None => "ok".into(),
        Some(e) => e.kind().into(),
    }
}

/// Pushes rows into `table`, folding their outcomes into `diag`.
pub(crate) fn collect(table: &mut Table, rows: Vec<Row>, diag: &mut Diagnostics) {
    for row in rows {
        match &row.error {
            None => diag.record_ok(row.rwa_ok),
            Some(msg) => diag.record_failure(msg),
        }
        if let Some((it, res)) = row.steady {
            diag.record_steady(it, res);
        }
        table.push(row.cells);
    }
}

pub struct Written {
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Writes `<table>.csv` for every table and `<experiment>.manifest.json`.
pub fn write_output(
    ctx: &Context,
    out: &RunOutput,
    dir: &Path,
    config_path: Option<&Path>,
    config_text: &str,
    started: std::time::SystemTime,
    clock: Instant,
) -> std::io::Result<Written> {
    std::fs::create_dir_all(dir)?;
    let preamble = ctx.preamble(&out.experiment);
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for t in &out.tables {
        let csv = t.to_csv(&preamble);
        let file = format!("{}.csv", t.name);
        let path = dir.join(&file);
        std::fs::write(&path, &csv)?;
        entries.push(TableEntry {
            name: t.name.clone(),
            file,
            rows: t.rows.len(),
            sha256: content_hash(csv.as_bytes()),
        });
        files.push(path);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment: out.experiment.clone(),
        config_path: config_path.map(|p| p.display().to_string()),
        config_hash: content_hash(config_text.as_bytes()),
        config: ctx.cfg.clone(),
        params_si: ctx.params.unreduce(),
        params_reduced: ctx.params.clone(),
        workers: ctx.workers(),
        include_nt: ctx.opts.include_nt,
        frame: frame_label(ctx.opts.frame).into(),
        grids: out.grids.clone(),
        tables: entries,
        diagnostics: out.diagnostics.clone(),
        started_unix: started.duration_since(std::time::UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64()),
        wall_seconds: clock.elapsed().as_secs_f64(),
    };
    let path = dir.join(format!("{}.manifest.json", out.experiment));
    let json = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    std::fs::write(&path, json + "\n")?;
    Ok(Written { files, manifest: path })
}
