//! Browser bindings. Every export takes plain numbers or a JSON string and
//! returns JSON, so the page needs no generated types.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use gme_dynamics::evolution::evolve_four;
use gme_dynamics::sweep::run_sweep_sequential;
use gme_dynamics::{detect_events, solve_gme, AmplitudeModel, GmeProblem, InitialState, SweepConfig};

/// Largest grid the page may request; keeps the tab responsive.
const MAX_STEPS: usize = 20_000;

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct Curve {
    gamma0_t: Vec<f64>,
    c0: Vec<f64>,
    c: Vec<f64>,
    regime: String,
}

/// `C0` and `C` on `steps + 1` points of `[0, t_max]`.
#[wasm_bindgen]
pub fn amplitude_curve(x: f64, t_max: f64, steps: usize) -> Result<String, String> {
    if !(2..=MAX_STEPS).contains(&steps) || t_max.is_nan() || t_max <= 0.0 {
        return Err(format!("need 2 <= steps <= {MAX_STEPS} and t_max > 0"));
    }
    let model = AmplitudeModel::with_ratio(x).map_err(text)?;
    let mut curve = Curve { gamma0_t: vec![], c0: vec![], c: vec![], regime: format!("{:?}", model.regime()) };
    for k in 0..=steps {
        let t = t_max * k as f64 / steps as f64;
        let (c0, c) = model.amplitudes(t).map_err(text)?;
        curve.gamma0_t.push(t);
        curve.c0.push(c0);
        curve.c.push(c);
    }
    serde_json::to_string(&curve).map_err(text)
}

#[derive(Serialize)]
struct SweepOutput {
    rows: Vec<gme_dynamics::SweepRow>,
    events: gme_dynamics::EventReport,
    diagnostics: Vec<String>,
}

/// Runs a sweep described by a config JSON (same schema as the CLI) on the
/// calling thread and returns the trace with its events.
#[wasm_bindgen]
pub fn sweep(config_json: &str) -> Result<String, String> {
    let cfg = SweepConfig::from_json(config_json).map_err(text)?;
    if cfg.steps > MAX_STEPS {
        return Err(format!("steps must be at most {MAX_STEPS}"));
    }
    let table = run_sweep_sequential(&cfg).map_err(text)?;
    let events = detect_events(&table, &cfg.tolerances).map_err(text)?;
    let diagnostics = table.diagnostics.iter().map(|d| format!("t={}: {}", d.gamma0_t, d.message)).collect();
    serde_json::to_string(&SweepOutput { rows: table.rows, events, diagnostics }).map_err(text)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRequest {
    initial_state: InitialState,
    x: f64,
    gamma0_t: f64,
}

#[derive(Serialize)]
struct PointOutput {
    genuine_negativity: f64,
    lower_bound: f64,
    iterations: usize,
    witness_check_passed: bool,
    /// Smallest-eigenvalue margins of each cut's operators.
    cuts: Vec<CutSummary>,
}

#[derive(Serialize)]
struct CutSummary {
    cut: String,
    p_min: f64,
    q_min: f64,
}

/// Genuine negativity of the four-qubit state at one time.
#[wasm_bindgen]
pub fn gme_point(request_json: &str) -> Result<String, String> {
    let req: PointRequest = serde_json::from_str(request_json).map_err(text)?;
    let model = AmplitudeModel::with_ratio(req.x).map_err(text)?;
    let s0 = req.initial_state.to_xstate().map_err(text)?;
    let rho = evolve_four(&s0, &model, req.gamma0_t).map_err(text)?;
    let sol = solve_gme(&GmeProblem::new(rho).map_err(text)?).map_err(text)?;
    let cuts = sol
        .residuals
        .cuts
        .iter()
        .map(|c| CutSummary { cut: c.cut.clone(), p_min: c.p_min, q_min: c.q_min })
        .collect();
    serde_json::to_string(&PointOutput {
        genuine_negativity: sol.genuine_negativity,
        lower_bound: sol.lower_bound,
        iterations: sol.iterations,
        witness_check_passed: sol.residuals.passed(),
        cuts,
    })
    .map_err(text)
}
