//! Time evolution of two cavity-reservoir pairs starting from an X state on
//! the cavities and both reservoirs in their vacuum.
//!
//! Each pair evolves independently under
//! `|0>_c|0>_r -> |0,0>` and `|1>_c|0>_r -> C0(t)|1,0> + C(t)|0,1>`.
//! The four-qubit state uses subsystem order `(c1, c2, r1, r2)`.
//!
//! `C0` is real for the Lorentzian model. A complex amplitude would need the
//! coherence factors `C0^2` below replaced by `C0 * conj(C0)`-style products;
//! the dilation in [`evolve_four`] would handle it unchanged.

use num_complex::Complex64;

use crate::amplitude::AmplitudeModel;
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::state::{DensityMatrix, XState};

pub const C1: usize = 0;
pub const C2: usize = 1;
pub const R1: usize = 2;
pub const R2: usize = 3;

/// Cavity-cavity, reservoir-reservoir and full states at one instant.
#[derive(Debug, Clone)]
pub struct EvolvedPair {
    pub t: f64,
    pub c0: f64,
    pub c: f64,
    pub cc: XState,
    pub rr: XState,
    pub full: DensityMatrix,
}

pub fn evolve(s0: &XState, model: &AmplitudeModel, t: f64) -> Result<EvolvedPair> {
    s0.validate()?;
    let (c0, c) = model.amplitudes(t)?;
    Ok(EvolvedPair {
        t,
        c0,
        c,
        cc: cc_closed_form(s0, c0 * c0, c * c),
        rr: rr_closed_form(s0, c0 * c0, c * c),
        full: dilate(s0, c0, c),
    })
}

/// Cavity-cavity reduced state.
pub fn evolve_cc(s0: &XState, model: &AmplitudeModel, t: f64) -> Result<XState> {
    s0.validate()?;
    let (c0, c) = model.amplitudes(t)?;
    Ok(cc_closed_form(s0, c0 * c0, c * c))
}

/// Reservoir-reservoir reduced state.
pub fn evolve_rr(s0: &XState, model: &AmplitudeModel, t: f64) -> Result<XState> {
    s0.validate()?;
    let (c0, c) = model.amplitudes(t)?;
    Ok(rr_closed_form(s0, c0 * c0, c * c))
}

/// Full 16x16 state over `(c1, c2, r1, r2)`.
pub fn evolve_four(s0: &XState, model: &AmplitudeModel, t: f64) -> Result<DensityMatrix> {
    s0.validate()?;
    let (c0, c) = model.amplitudes(t)?;
    Ok(dilate(s0, c0, c))
}

/// Cavity populations decay by `keep = C0^2` and leak `lost = C^2` into the
/// ground state; coherences pick up one factor of `keep`.
fn damp(s: &XState, keep: f64, lost: f64) -> XState {
    XState::new_unchecked(
        s.rho11 + (s.rho22 + s.rho33 + s.rho44 * lost) * lost,
        (s.rho22 + s.rho44 * lost) * keep,
        (s.rho33 + s.rho44 * lost) * keep,
        s.rho44 * keep * keep,
        s.rho14 * keep,
        s.rho23 * keep,
    )
}

fn cc_closed_form(s: &XState, c0_sq: f64, c_sq: f64) -> XState {
    damp(s, c0_sq, c_sq)
}

/// The reservoirs see the same map with the roles of `C0` and `C` exchanged.
fn rr_closed_form(s: &XState, c0_sq: f64, c_sq: f64) -> XState {
    damp(s, c_sq, c0_sq)
}

fn index(c1: usize, c2: usize, r1: usize, r2: usize) -> usize {
    (c1 << 3) | (c2 << 2) | (r1 << 1) | r2
}

/// `K rho K^dagger` with `K` the 16x4 isometry mapping the cavity pair state
/// (reservoirs in vacuum) onto the four-qubit space.
fn dilate(s0: &XState, c0: f64, c: f64) -> DensityMatrix {
    // (cavity, reservoir, amplitude) components of V|a>_c|0>_r.
    let branch = |a: usize| -> Vec<(usize, usize, f64)> {
        if a == 0 {
            vec![(0, 0, 1.0)]
        } else {
            vec![(1, 0, c0), (0, 1, c)]
        }
    };
    let mut k = CMatrix::zeros(16, 4);
    for a in 0..2 {
        for b in 0..2 {
            for &(c1, r1, u) in &branch(a) {
                for &(c2, r2, v) in &branch(b) {
                    k[(index(c1, c2, r1, r2), 2 * a + b)] += Complex64::new(u * v, 0.0);
                }
            }
        }
    }
    let rho = s0.to_density();
    let full = &k * rho.matrix() * k.adjoint();
    DensityMatrix::from_parts(full, vec![2; 4])
}

/// Expected number of cavity excitations, `Tr[rho (n_c1 + n_c2)]`.
pub fn cavity_excitation(full: &DensityMatrix) -> f64 {
    let m = full.matrix();
    (0..16)
        .map(|i| {
            let n = ((i >> 3) & 1) + ((i >> 2) & 1);
            n as f64 * m[(i, i)].re
        })
        .sum()
}

/// `s0 (x) |00><00|` with subsystems `(c1, c2, r1, r2)`.
pub fn initial_four(s0: &XState) -> DensityMatrix {
    s0.to_density().tensor(&DensityMatrix::ground(2))
}

/// Exchange of the two pairs, `(c1, c2, r1, r2) -> (c2, c1, r2, r1)`.
pub fn swap_pairs(full: &DensityMatrix) -> DensityMatrix {
    full.permute(&[C2, C1, R2, R1]).expect("fixed permutation of four subsystems")
}
