//! Time sweeps: evaluate `E_cc`, `E_rr` and `E_gme` on a uniform `gamma0 t`
//! grid for one initial state and one ratio `x`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeModel;
use crate::error::{Error, Result};
use crate::evolution::evolve;
use crate::gme::{solve_gme, GmeOptions, GmeProblem};
use crate::negativity::{negativity_xstate, xstate_margin, ZERO_THRESHOLD};
use crate::state::XState;

pub const DEFAULT_PLATEAU_SLOPE: f64 = 1e-4;
pub const DEFAULT_PLATEAU_DWELL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// `alpha|00> + beta|11>` on the cavities.
    Pure { alpha: f64, beta: f64 },
    Werner { p: f64 },
    Xstate {
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        #[serde(default)]
        rho14: Complex64,
        #[serde(default)]
        rho23: Complex64,
    },
}

impl InitialState {
    pub fn to_xstate(&self) -> Result<XState> {
        match *self {
            InitialState::Pure { alpha, beta } => XState::pure_alpha_beta(alpha, beta),
            InitialState::Werner { p } => XState::werner(p),
            InitialState::Xstate { rho11, rho22, rho33, rho44, rho14, rho23 } => {
                XState::new(rho11, rho22, rho33, rho44, rho14, rho23)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Cc,
    Rr,
    Gme,
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cc" => Ok(Measure::Cc),
            "rr" => Ok(Measure::Rr),
            "gme" => Ok(Measure::Gme),
            other => Err(Error::Config(format!("unknown measure {other:?} (expected cc, rr or gme)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Values at or below this count as zero entanglement.
    pub zero: f64,
    /// Largest `|dE_gme / d(gamma0 t)|` inside a freeze window.
    pub plateau_slope: f64,
    /// Shortest freeze window reported, in `gamma0 t`.
    pub plateau_dwell: f64,
    /// Duality-gap target of each witness solve.
    pub sdp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: ZERO_THRESHOLD,
            plateau_slope: DEFAULT_PLATEAU_SLOPE,
            plateau_dwell: DEFAULT_PLATEAU_DWELL,
            sdp: crate::gme::DEFAULT_TOLERANCE,
        }
    }
}

fn default_measures() -> BTreeSet<Measure> {
    [Measure::Cc, Measure::Rr, Measure::Gme].into_iter().collect()
}

fn default_stride() -> usize {
    1
}

fn default_max_iterations() -> usize {
    crate::gme::DEFAULT_MAX_ITERATIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub initial_state: InitialState,
    pub x: f64,
    pub gamma0_t_max: f64,
    /// Number of grid intervals; the table has `steps + 1` rows.
    pub steps: usize,
    #[serde(default = "default_measures")]
    pub measures: BTreeSet<Measure>,
    /// Evaluate `E_gme` only on every `gme_stride`-th row.
    #[serde(default = "default_stride")]
    pub gme_stride: usize,
    /// Skip `E_gme` beyond this time.
    #[serde(default)]
    pub gme_t_max: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Iteration cap of each witness solve.
    #[serde(default = "default_max_iterations")]
    pub sdp_max_iterations: usize,
    /// Worker threads; `None` uses the global pool.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(initial_state: InitialState, x: f64, gamma0_t_max: f64, steps: usize) -> Self {
        Self {
            initial_state,
            x,
            gamma0_t_max,
            steps,
            measures: default_measures(),
            gme_stride: 1,
            gme_t_max: None,
            tolerances: Tolerances::default(),
            sdp_max_iterations: default_max_iterations(),
            threads: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.steps < 2 {
            return fail(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.gamma0_t_max > 0.0 && self.gamma0_t_max.is_finite()) {
            return fail(format!("gamma0_t_max must be positive, got {}", self.gamma0_t_max));
        }
        if !(self.x > 0.0 && self.x.is_finite()) {
            return fail(format!("x must be positive, got {}", self.x));
        }
        if self.measures.is_empty() {
            return fail("measures must not be empty".into());
        }
        if self.gme_stride == 0 {
            return fail("gme_stride must be at least 1".into());
        }
        let t = &self.tolerances;
        for (name, v) in [("zero", t.zero), ("plateau_slope", t.plateau_slope), ("sdp", t.sdp)] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("tolerances.{name} must be positive, got {v}"));
            }
        }
        if t.plateau_dwell.is_nan() || t.plateau_dwell < 0.0 {
            return fail(format!("tolerances.plateau_dwell must be nonnegative, got {}", t.plateau_dwell));
        }
        if self.threads == Some(0) {
            return fail("threads must be at least 1".into());
        }
        self.initial_state.to_xstate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn time(&self, index: usize) -> f64 {
        if index == self.steps {
            self.gamma0_t_max
        } else {
            self.gamma0_t_max * index as f64 / self.steps as f64
        }
    }

    fn wants_gme(&self, index: usize) -> bool {
        self.measures.contains(&Measure::Gme)
            && index.is_multiple_of(self.gme_stride)
            && self.gme_t_max.is_none_or(|m| self.time(index) <= m + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma0_t: f64,
    pub c0: f64,
    pub e_cc: Option<f64>,
    pub e_rr: Option<f64>,
    pub e_gme: Option<f64>,
    /// Signed distance from the PPT boundary, positive iff entangled. Lets
    /// event detection interpolate crossings of a smooth quantity.
    #[serde(skip)]
    pub margin_cc: Option<f64>,
    #[serde(skip)]
    pub margin_rr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub index: usize,
    pub gamma0_t: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SweepTable {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gamma0_t).collect()
    }
}

fn compute_row(cfg: &SweepConfig, s0: &XState, model: &AmplitudeModel, index: usize) -> Result<(SweepRow, Option<Diagnostic>)> {
    let t = cfg.time(index);
    let ev = evolve(s0, model, t)?;
    let has = |m| cfg.measures.contains(&m);
    let mut row = SweepRow {
        gamma0_t: t,
        c0: ev.c0,
        e_cc: has(Measure::Cc).then(|| negativity_xstate(&ev.cc).value),
        e_rr: has(Measure::Rr).then(|| negativity_xstate(&ev.rr).value),
        e_gme: None,
        margin_cc: has(Measure::Cc).then(|| xstate_margin(&ev.cc)),
        margin_rr: has(Measure::Rr).then(|| xstate_margin(&ev.rr)),
    };
    let mut diagnostic = None;
    if cfg.wants_gme(index) {
        let options = GmeOptions {
            tolerance: cfg.tolerances.sdp,
            max_iterations: cfg.sdp_max_iterations,
            ..GmeOptions::default()
        };
        let outcome = GmeProblem::with_options(ev.full, options).and_then(|p| {
            let sol = solve_gme(&p)?;
            sol.residuals.clone().into_result()?;
            Ok(sol.genuine_negativity)
        });
        match outcome {
            Ok(v) => row.e_gme = Some(v),
            Err(e) => {
                diagnostic = Some(Diagnostic { index, gamma0_t: t, message: e.to_string() });
            }
        }
    }
    Ok((row, diagnostic))
}

fn assemble(results: Vec<Result<(SweepRow, Option<Diagnostic>)>>) -> Result<SweepTable> {
    let mut table = SweepTable::default();
    for r in results {
        let (row, diag) = r?;
        table.rows.push(row);
        table.diagnostics.extend(diag);
    }
    Ok(table)
}

/// Evaluates the grid in parallel. Row `k` is `gamma0 t = k * t_max / steps`.
/// A witness solve that fails leaves `e_gme` empty and adds a diagnostic.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let s0 = cfg.initial_state.to_xstate()?;
    let model = AmplitudeModel::with_ratio(cfg.x)?;
    let work = || -> Vec<_> {
        (0..=cfg.steps).into_par_iter().map(|k| compute_row(cfg, &s0, &model, k)).collect()
    };
    let results = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    assemble(results)
}

/// Same table as [`run_sweep`], evaluated on the calling thread.
pub fn run_sweep_sequential(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let s0 = cfg.initial_state.to_xstate()?;
    let model = AmplitudeModel::with_ratio(cfg.x)?;
    assemble((0..=cfg.steps).map(|k| compute_row(cfg, &s0, &model, k)).collect())
}
