//! Event detection on a sweep table: sudden death and birth of bipartite
//! entanglement, windows where no pair is entangled, and windows where the
//! genuine negativity stays locked at a constant value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::{SweepRow, SweepTable, Tolerances};

/// Relative band around a run's maximum that still counts as the plateau.
pub const PLATEAU_BAND: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EventReport {
    pub esd_time: Option<f64>,
    pub esb_time: Option<f64>,
    pub dead_window: Option<[f64; 2]>,
    pub freeze_windows: Vec<[f64; 2]>,
    pub revival_times: Vec<f64>,
    /// Mean `E_gme` inside each freeze window.
    pub freeze_levels: Vec<f64>,
    /// Entangled intervals of each pair; an open end runs past the horizon.
    pub cc_intervals: Vec<(f64, Option<f64>)>,
    pub rr_intervals: Vec<(f64, Option<f64>)>,
}

struct Sample {
    t: f64,
    value: f64,
    margin: Option<f64>,
}

fn series(rows: &[SweepRow], pick: impl Fn(&SweepRow) -> (Option<f64>, Option<f64>)) -> Vec<Sample> {
    rows.iter()
        .filter_map(|r| {
            let (v, m) = pick(r);
            v.map(|value| Sample { t: r.gamma0_t, value, margin: m })
        })
        .collect()
}

/// Time where the entangled/unentangled status flips between samples `i`
/// and `i + 1`. Uses the signed margin when present; otherwise extends the
/// secant through the two samples on the entangled side down to zero.
fn crossing(s: &[Sample], i: usize, zero: f64) -> f64 {
    let (a, b) = (&s[i], &s[i + 1]);
    let clamp = |t: f64| t.clamp(a.t, b.t);
    if let (Some(ma), Some(mb)) = (a.margin, b.margin) {
        if ma != mb && (ma > 0.0) != (mb > 0.0) {
            return clamp(a.t + (0.0 - ma) / (mb - ma) * (b.t - a.t));
        }
    }
    let dying = a.value > zero;
    let (p, q) = if dying {
        (i.checked_sub(1).map(|k| &s[k]), a)
    } else {
        (s.get(i + 2), b)
    };
    if let Some(p) = p.filter(|p| p.value > zero) {
        let slope = (q.value - p.value) / (q.t - p.t);
        if slope != 0.0 && slope.is_finite() {
            return clamp(q.t - q.value / slope);
        }
    }
    // Single entangled sample next to the crossing: plain interpolation.
    clamp(a.t + (zero - a.value) / (b.value - a.value) * (b.t - a.t))
}

fn intervals(s: &[Sample], zero: f64) -> Vec<(f64, Option<f64>)> {
    let mut out = Vec::new();
    let mut open: Option<f64> = None;
    for i in 0..s.len() {
        let on = s[i].value > zero;
        if i == 0 {
            if on {
                open = Some(s[0].t);
            }
            continue;
        }
        let was = s[i - 1].value > zero;
        if on && !was {
            open = Some(crossing(s, i - 1, zero));
        } else if !on && was {
            let start = open.take().expect("interval opened");
            out.push((start, Some(crossing(s, i - 1, zero))));
        }
    }
    if let Some(start) = open {
        out.push((start, None));
    }
    out
}

/// First stretch inside `[t0, t1]` not covered by any interval.
fn first_gap(mut covered: Vec<(f64, Option<f64>)>, t0: f64, t1: f64) -> Option<[f64; 2]> {
    covered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = t0;
    for (start, end) in covered {
        if start > reach {
            return Some([reach, start]);
        }
        reach = reach.max(end?);
    }
    (reach < t1).then_some([reach, t1])
}

fn freeze_windows(s: &[Sample], tol: &Tolerances) -> Vec<([f64; 2], f64)> {
    let n = s.len();
    if n < 2 {
        return Vec::new();
    }
    let flat = |k: usize| {
        let (a, b) = (&s[k], &s[k + 1]);
        a.value > tol.zero
            && b.value > tol.zero
            && ((b.value - a.value) / (b.t - a.t)).abs() <= tol.plateau_slope
    };
    let mut out = Vec::new();
    let mut k = 0;
    while k + 1 < n {
        if !flat(k) {
            k += 1;
            continue;
        }
        // Maximal run of flat segments: samples first..=last.
        let first = k;
        while k + 1 < n && flat(k) {
            k += 1;
        }
        let last = k;
        let top = s[first..=last].iter().map(|p| p.value).fold(f64::MIN, f64::max);
        let floor = top * (1.0 - PLATEAU_BAND);
        let mut j = first;
        while j <= last {
            if s[j].value < floor {
                j += 1;
                continue;
            }
            let a = j;
            while j <= last && s[j].value >= floor {
                j += 1;
            }
            let b = j - 1;
            if b == a {
                continue;
            }
            let level = s[a..=b].iter().map(|p| p.value).sum::<f64>() / (b - a + 1) as f64;
            let start = ramp_edge(s, a, level, true);
            let end = ramp_edge(s, b, level, false);
            if end - start >= tol.plateau_dwell {
                out.push(([start, end], level));
            }
        }
    }
    out
}

/// Refines a plateau edge at sample `edge`: extends the secant through the
/// two samples just outside the plateau to the plateau level, clamped to the
/// bracketing grid interval.
fn ramp_edge(s: &[Sample], edge: usize, level: f64, leading: bool) -> f64 {
    let (near, far) = if leading {
        (edge.checked_sub(1), edge.checked_sub(2))
    } else {
        (Some(edge + 1).filter(|&k| k < s.len()), Some(edge + 2).filter(|&k| k < s.len()))
    };
    let Some(near) = near else {
        return s[edge].t;
    };
    let (lo, hi) = if leading { (s[near].t, s[edge].t) } else { (s[edge].t, s[near].t) };
    let Some(far) = far else {
        return s[edge].t;
    };
    let slope = (s[near].value - s[far].value) / (s[near].t - s[far].t);
    if slope == 0.0 || !slope.is_finite() {
        return s[edge].t;
    }
    (s[near].t + (level - s[near].value) / slope).clamp(lo, hi)
}

/// Scans a table sorted by time. Sudden death is the end of the first
/// entangled cavity interval, sudden birth the first reservoir interval
/// that opens after the initial time.
pub fn detect_events(table: &SweepTable, tol: &Tolerances) -> Result<EventReport> {
    let rows = &table.rows;
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty sweep table".into()));
    }
    if rows.windows(2).any(|w| w[1].gamma0_t <= w[0].gamma0_t) {
        return Err(Error::InvalidParameter("sweep table is not strictly increasing in time".into()));
    }
    let (t0, t1) = (rows[0].gamma0_t, rows[rows.len() - 1].gamma0_t);
    let cc = series(rows, |r| (r.e_cc, r.margin_cc));
    let rr = series(rows, |r| (r.e_rr, r.margin_rr));
    let gme = series(rows, |r| (r.e_gme, None));

    let mut report = EventReport::default();
    if !cc.is_empty() {
        report.cc_intervals = intervals(&cc, tol.zero);
        report.esd_time = report.cc_intervals.first().and_then(|iv| iv.1);
        if let Some(esd) = report.esd_time {
            report.revival_times =
                report.cc_intervals.iter().map(|iv| iv.0).filter(|&s| s > esd).collect();
        }
    }
    if !rr.is_empty() {
        report.rr_intervals = intervals(&rr, tol.zero);
        report.esb_time = report.rr_intervals.iter().map(|iv| iv.0).find(|&s| s > t0);
    }
    if !cc.is_empty() && !rr.is_empty() {
        let covered = report.cc_intervals.iter().chain(&report.rr_intervals).copied().collect();
        report.dead_window = first_gap(covered, t0, t1).filter(|w| w[1] > w[0]);
    }
    for (w, level) in freeze_windows(&gme, tol) {
        report.freeze_windows.push(w);
        report.freeze_levels.push(level);
    }
    Ok(report)
}
