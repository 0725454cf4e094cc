#![allow(dead_code)]

use gme_dynamics::linalg::{kron, CMatrix};
use gme_dynamics::state::{DensityMatrix, XState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Full-rank random state `G G^dag / Tr`.
pub fn random_state(rng: &mut impl Rng, dims: &[usize]) -> DensityMatrix {
    let d = dims.iter().product();
    let g = ginibre(rng, d, d);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr, dims.to_vec()).unwrap()
}

pub fn random_pure(rng: &mut impl Rng, d: usize) -> CMatrix {
    let v = ginibre(rng, d, 1);
    let v = &v / Complex64::new(v.norm(), 0.0);
    &v * v.adjoint()
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let qr = ginibre(rng, d, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let z = r[(i, i)];
            z / Complex64::new(z.norm(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    q * phases
}

pub fn random_product_state(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let m = (1..n).fold(random_pure(rng, 2), |acc, _| kron(&acc, &random_pure(rng, 2)));
    DensityMatrix::new(m, vec![2; n]).unwrap()
}

/// Mixture of states, each a product across some bipartition with random
/// (possibly entangled) states on both sides.
pub fn random_biseparable(rng: &mut impl Rng, n: usize, terms: usize) -> DensityMatrix {
    let d = 1usize << n;
    let mut acc = CMatrix::zeros(d, d);
    let mut total = 0.0;
    for _ in 0..terms {
        let mask = rng.random_range(0..(1u32 << (n - 1)) - 1);
        let left: Vec<usize> =
            std::iter::once(0).chain((1..n).filter(|k| mask & (1 << (k - 1)) != 0)).collect();
        let right: Vec<usize> = (0..n).filter(|k| !left.contains(k)).collect();
        let a = random_pure(rng, 1 << left.len());
        let b = random_pure(rng, 1 << right.len());
        let joint = DensityMatrix::new(kron(&a, &b), vec![2; n]).unwrap();
        // Subsystem k of `joint` is left[k] (then right); undo that order.
        let order: Vec<usize> = left.iter().chain(&right).copied().collect();
        let mut inverse = vec![0; n];
        for (k, &s) in order.iter().enumerate() {
            inverse[s] = k;
        }
        let placed = joint.permute(&inverse).unwrap();
        let w: f64 = rng.random();
        acc += placed.matrix() * Complex64::new(w, 0.0);
        total += w;
    }
    DensityMatrix::new(acc / Complex64::new(total, 0.0), vec![2; n]).unwrap()
}

pub fn random_xstate(rng: &mut impl Rng) -> XState {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() + 1e-3);
    let s: f64 = raw.iter().sum();
    let p = raw.map(|v| v / s);
    let phase = |rng: &mut dyn rand::RngCore| {
        let th: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(1.0, th)
    };
    let r14 = rng.random::<f64>() * (p[0] * p[3]).sqrt();
    let r23 = rng.random::<f64>() * (p[1] * p[2]).sqrt();
    XState::new(p[0], p[1], p[2], p[3], phase(rng) * r14, phase(rng) * r23).unwrap()
}
