//! Multi-qubit density matrices, the two-qubit X-state family and the
//! benchmark states used to exercise the genuine-entanglement solver.
//!
//! Basis ordering is big-endian in the subsystem index: for two qubits
//! `|1> = |0_A 0_B>, |2> = |0_A 1_B>, |3> = |1_A 0_B>, |4> = |1_A 1_B>`.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cr, hermitian_eigenvalues, hermiticity_error, CMatrix};

pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Slack on the X-state positivity inequalities, which are tight for pure
/// states.
pub const XSTATE_TOLERANCE: f64 = 1e-12;

/// A validated density matrix over subsystems of dimensions `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        let herm = hermiticity_error(&matrix);
        if herm > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {herm:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min_ev = hermitian_eigenvalues(&matrix)[0];
        if min_ev < -PSD_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (minimum eigenvalue {min_ev:e})"
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Skips validation; callers guarantee a valid state by construction.
    pub(crate) fn from_parts(matrix: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        Self { matrix, dims }
    }

    /// `|psi><psi|` for a normalised state vector.
    pub fn pure(psi: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("state vector has norm^2 {norm}")));
        }
        let n = psi.len();
        let m = CMatrix::from_fn(n, n, |r, c| psi[r] * psi[c].conj());
        check_dims(&m, &dims)?;
        Ok(Self::from_parts(m, dims))
    }

    /// `|0...0><0...0|` on `n` qubits.
    pub fn ground(n: usize) -> Self {
        let d = 1 << n;
        let mut m = CMatrix::zeros(d, d);
        m[(0, 0)] = cr(1.0);
        Self::from_parts(m, vec![2; n])
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1 << n;
        Self::from_parts(CMatrix::identity(d, d) * cr(1.0 / d as f64), vec![2; n])
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        crate::linalg::trace_product(&self.matrix, &self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// True when every imaginary part vanishes to `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.matrix.iter().all(|z| z.im.abs() <= tol)
    }

    /// Kronecker product; subsystem lists are concatenated.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts(self.matrix.kronecker(&other.matrix), dims)
    }

    /// Reduced state over `keep` (subsystem indices, any order; the result
    /// keeps the original relative order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidParameter("partial trace needs at least one kept subsystem".into()));
        }
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
            return Err(Error::InvalidParameter(format!(
                "subsystem {bad} out of range for {n} subsystems"
            )));
        }
        let kept: Vec<usize> = keep.into_iter().collect();
        let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
        let kept_dims: Vec<usize> = kept.iter().map(|&k| self.dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| self.dims[k]).collect();
        let dk: usize = kept_dims.iter().product();
        let dt: usize = traced_dims.iter().product();

        let mut out = CMatrix::zeros(dk, dk);
        let mut digits = vec![0usize; n];
        let full_index = |digits: &mut Vec<usize>, ik: usize, it: usize| {
            scatter(ik, &kept, &kept_dims, digits);
            scatter(it, &traced, &traced_dims, digits);
            compose(digits, &self.dims)
        };
        for r in 0..dk {
            for c in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..dt {
                    let fr = full_index(&mut digits, r, t);
                    let fc = full_index(&mut digits, c, t);
                    acc += self.matrix[(fr, fc)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(Self::from_parts(out, kept_dims))
    }

    /// Partial transpose over the left side of `cut`.
    pub fn partial_transpose(&self, cut: &Bipartition) -> Result<CMatrix> {
        if cut.num_subsystems() != self.dims.len() {
            return Err(Error::InvalidCut(format!(
                "cut is over {} subsystems, state has {}",
                cut.num_subsystems(),
                self.dims.len()
            )));
        }
        Ok(partial_transpose(&self.matrix, &self.dims, cut.left()))
    }

    /// Reorders subsystems: subsystem `order[k]` of `self` becomes subsystem `k`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::InvalidParameter(format!("{order:?} is not a permutation of 0..{n}")));
        }
        Ok(Self::from_parts(
            permute_subsystems(&self.matrix, &self.dims, order),
            order.iter().map(|&k| self.dims[k]).collect(),
        ))
    }

    /// `u rho u^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension(format!(
                "unitary is {}x{}, state is {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        Ok(Self::from_parts(u * &self.matrix * u.adjoint(), self.dims.clone()))
    }

    /// Convex combination `w self + (1 - w) other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!("mixing weight {w} outside [0, 1]")));
        }
        Ok(Self::from_parts(
            &self.matrix * cr(w) + &other.matrix * cr(1.0 - w),
            self.dims.clone(),
        ))
    }
}

fn check_dims(m: &CMatrix, dims: &[usize]) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension(format!("bad subsystem dimensions {dims:?}")));
    }
    let d: usize = dims.iter().product();
    if d != m.nrows() {
        return Err(Error::Dimension(format!(
            "dims {dims:?} give {d}, matrix has {}",
            m.nrows()
        )));
    }
    Ok(())
}

/// Big-endian digits of `index` written into `digits`.
pub(crate) fn decompose(mut index: usize, dims: &[usize], digits: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

pub(crate) fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

fn scatter(index: usize, slots: &[usize], slot_dims: &[usize], digits: &mut [usize]) {
    let mut rem = index;
    for k in (0..slots.len()).rev() {
        digits[slots[k]] = rem % slot_dims[k];
        rem /= slot_dims[k];
    }
}

/// Index map of the partial transpose over `subsystems`: entry `(r, c)` of
/// the result is entry `map(r, c)` of the input.
pub(crate) fn partial_transpose_index(
    r: usize,
    c: usize,
    dims: &[usize],
    subsystems: &[usize],
    dr: &mut [usize],
    dc: &mut [usize],
) -> (usize, usize) {
    decompose(r, dims, dr);
    decompose(c, dims, dc);
    for &k in subsystems {
        std::mem::swap(&mut dr[k], &mut dc[k]);
    }
    (compose(dr, dims), compose(dc, dims))
}

/// Partial transpose of a raw matrix over `subsystems`.
pub fn partial_transpose<T: nalgebra::Scalar + Copy>(
    m: &DMatrix<T>,
    dims: &[usize],
    subsystems: &[usize],
) -> DMatrix<T> {
    let n = dims.len();
    let mut dr = vec![0; n];
    let mut dc = vec![0; n];
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        let (sr, sc) = partial_transpose_index(r, c, dims, subsystems, &mut dr, &mut dc);
        m[(sr, sc)]
    })
}

/// Reorders subsystems of a raw matrix: subsystem `order[k]` becomes `k`.
pub fn permute_subsystems(m: &CMatrix, dims: &[usize], order: &[usize]) -> CMatrix {
    let n = dims.len();
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let mut dn = vec![0; n];
    let mut old = vec![0; n];
    let map = |idx: usize, dn: &mut [usize], old: &mut [usize]| {
        decompose(idx, &new_dims, dn);
        for (k, &src) in order.iter().enumerate() {
            old[src] = dn[k];
        }
        compose(old, dims)
    };
    let d = m.nrows();
    let rows: Vec<usize> = (0..d).map(|i| map(i, &mut dn, &mut old)).collect();
    CMatrix::from_fn(d, d, |r, c| m[(rows[r], rows[c])])
}

/// A cut `M | M-bar` of `n` subsystems. Both sides are nonempty and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: &[usize], n: usize) -> Result<Self> {
        let set: BTreeSet<usize> = left.iter().copied().collect();
        if set.len() != left.len() {
            return Err(Error::InvalidCut(format!("repeated subsystem in {left:?}")));
        }
        if let Some(&bad) = set.iter().find(|&&k| k >= n) {
            return Err(Error::InvalidCut(format!("subsystem {bad} out of range for {n}")));
        }
        if set.is_empty() || set.len() == n {
            return Err(Error::InvalidCut(format!("{left:?} does not split {n} subsystems")));
        }
        let right = (0..n).filter(|k| !set.contains(k)).collect();
        Ok(Self { left: set.into_iter().collect(), right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn num_subsystems(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// The same cut with the sides exchanged.
    pub fn complement(&self) -> Self {
        Self { left: self.right.clone(), right: self.left.clone() }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[usize]| s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", side(&self.left), side(&self.right))
    }
}

/// Two-qubit X state: populations `rho11..rho44` and coherences `rho14`,
/// `rho23`; every other entry vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho14: Complex64,
    pub rho23: Complex64,
}

impl XState {
    /// Validated constructor; the error names the violated condition.
    pub fn new(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: impl Into<Complex64>,
        rho23: impl Into<Complex64>,
    ) -> Result<Self> {
        let s = Self { rho11, rho22, rho33, rho44, rho14: rho14.into(), rho23: rho23.into() };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn new_unchecked(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: Complex64,
        rho23: Complex64,
    ) -> Self {
        Self { rho11, rho22, rho33, rho44, rho14, rho23 }
    }

    pub fn validate(&self) -> Result<()> {
        let pops = [self.rho11, self.rho22, self.rho33, self.rho44];
        if pops.iter().any(|p| !p.is_finite()) || !self.rho14.is_finite() || !self.rho23.is_finite() {
            return Err(Error::InvalidXState("non-finite entry".into()));
        }
        for (k, p) in pops.iter().enumerate() {
            if *p < -XSTATE_TOLERANCE {
                return Err(Error::InvalidXState(format!("rho{0}{0} = {p} is negative", k + 1)));
            }
        }
        let trace: f64 = pops.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidXState(format!(
                "rho11 + rho22 + rho33 + rho44 = {trace}, expected 1"
            )));
        }
        let inner = self.rho22 * self.rho33;
        if inner < self.rho23.norm_sqr() - XSTATE_TOLERANCE {
            return Err(Error::InvalidXState(format!(
                "rho22*rho33 >= |rho23|^2 violated: {inner} < {}",
                self.rho23.norm_sqr()
            )));
        }
        let outer = self.rho11 * self.rho44;
        if outer < self.rho14.norm_sqr() - XSTATE_TOLERANCE {
            return Err(Error::InvalidXState(format!(
                "rho11*rho44 >= |rho14|^2 violated: {outer} < {}",
                self.rho14.norm_sqr()
            )));
        }
        Ok(())
    }

    /// `alpha|00> + beta|11>` with `|alpha|^2 + |beta|^2 = 1`.
    pub fn pure_alpha_beta(alpha: impl Into<Complex64>, beta: impl Into<Complex64>) -> Result<Self> {
        let (alpha, beta) = (alpha.into(), beta.into());
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1")));
        }
        let zero = Complex64::new(0.0, 0.0);
        Self::new(alpha.norm_sqr(), 0.0, 0.0, beta.norm_sqr(), alpha * beta.conj(), zero)
    }

    /// Werner state `p |Phi><Phi| + (1 - p) I / 4`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("Werner weight p = {p} outside [0, 1]")));
        }
        let hi = (1.0 + p) / 4.0;
        let lo = (1.0 - p) / 4.0;
        Self::new(hi, lo, lo, hi, p / 2.0, 0.0)
    }

    pub fn vacuum() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new_unchecked(1.0, 0.0, 0.0, 0.0, zero, zero)
    }

    /// Entangled iff `rho22 rho33 < |rho14|^2` or `rho11 rho44 < |rho23|^2`.
    pub fn is_entangled(&self) -> bool {
        self.rho22 * self.rho33 < self.rho14.norm_sqr() || self.rho11 * self.rho44 < self.rho23.norm_sqr()
    }

    pub fn to_density(&self) -> DensityMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = cr(self.rho11);
        m[(1, 1)] = cr(self.rho22);
        m[(2, 2)] = cr(self.rho33);
        m[(3, 3)] = cr(self.rho44);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        DensityMatrix::from_parts(m, vec![2, 2])
    }

    /// Reads the X-state parameters back from a two-qubit density matrix,
    /// rejecting entries outside the X pattern larger than `tol`.
    pub fn from_density(rho: &DensityMatrix, tol: f64) -> Result<Self> {
        if rho.dims() != [2, 2] {
            return Err(Error::Dimension(format!("expected two qubits, got dims {:?}", rho.dims())));
        }
        let m = rho.matrix();
        for r in 0..4 {
            for c in 0..4 {
                let on_x = r == c || r + c == 3;
                if !on_x && m[(r, c)].norm() > tol {
                    return Err(Error::InvalidXState(format!(
                        "entry ({r},{c}) = {} lies outside the X pattern",
                        m[(r, c)]
                    )));
                }
            }
        }
        Self::new(
            m[(0, 0)].re,
            m[(1, 1)].re,
            m[(2, 2)].re,
            m[(3, 3)].re,
            m[(0, 3)],
            m[(1, 2)],
        )
    }

    pub fn params(&self) -> [f64; 8] {
        [
            self.rho11,
            self.rho22,
            self.rho33,
            self.rho44,
            self.rho14.re,
            self.rho14.im,
            self.rho23.re,
            self.rho23.im,
        ]
    }
}

fn real_vector(entries: &[(usize, f64)], d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    for &(i, a) in entries {
        v[i] += cr(a);
    }
    v
}

/// `(|00> + |11>)/sqrt(2)`.
pub fn bell_phi_plus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&real_vector(&[(0, h), (3, h)], 4), vec![2, 2]).expect("normalised")
}

/// `(|0...0> + |1...1>)/sqrt(2)` on `n >= 2` qubits.
pub fn ghz(n: usize) -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let d = 1 << n;
    DensityMatrix::pure(&real_vector(&[(0, h), (d - 1, h)], d), vec![2; n]).expect("normalised")
}

/// Three-qubit state that is PPT across every cut; valid for `alpha >= 2`.
pub fn kay_state(alpha: f64) -> Result<DensityMatrix> {
    if !(alpha.is_finite() && alpha >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "Kay state requires alpha >= 2 for positivity, got {alpha}"
        )));
    }
    let mut m = DMatrix::<f64>::from_diagonal_element(8, 8, alpha);
    m[(0, 0)] += 4.0;
    m[(7, 7)] += 4.0;
    for (r, c, v) in [(0, 7, 2.0), (1, 6, 2.0), (2, 5, -2.0), (3, 4, 2.0)] {
        m[(r, c)] = v;
        m[(c, r)] = v;
    }
    let m = m.map(|v| cr(v / (8.0 + 8.0 * alpha)));
    Ok(DensityMatrix::from_parts(m, vec![2; 3]))
}

/// Equal mixture of `|Phi+><Phi+|` on each qubit pair with the third qubit in `|0>`.
pub fn biseparable_bell_mixture() -> DensityMatrix {
    let pair = bell_phi_plus();
    let zero = DensityMatrix::ground(1);
    let ab_c = pair.tensor(&zero);
    // Move the Bell pair onto (A, C) and (B, C) by permuting subsystems.
    let ac_b = ab_c.permute(&[0, 2, 1]).expect("permutation");
    let bc_a = ab_c.permute(&[2, 0, 1]).expect("permutation");
    let m = (ab_c.matrix() + ac_b.matrix() + bc_a.matrix()) * cr(1.0 / 3.0);
    DensityMatrix::from_parts(m, vec![2; 3])
}

/// Wire format `{dims, re, im}` for density matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect()).collect()
        };
        Self { dims: rho.dims().to_vec(), re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let d = j.re.len();
        if j.im.len() != d || j.re.iter().chain(&j.im).any(|row| row.len() != d) {
            return Err(Error::Dimension("re/im must both be square of equal size".into()));
        }
        let m = CMatrix::from_fn(d, d, |r, c| Complex64::new(j.re[r][c], j.im[r][c]));
        DensityMatrix::new(m, j.dims)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityMatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DensityMatrixJson::deserialize(d)?;
        DensityMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = max_abs_diff(a, b);
        assert!(d <= tol, "matrices differ by {d:e}");
    }

    #[test]
    fn xstate_examples() {
        assert!(XState::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).is_ok());
        let s = XState::new(1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0, 2f64.sqrt() / 3.0, 0.0).unwrap();
        let p = XState::pure_alpha_beta((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()).unwrap();
        for (a, b) in s.params().iter().zip(p.params()) {
            assert!((a - b).abs() < 1e-15);
        }
        let err = XState::new(0.25, 0.25, 0.25, 0.25, 0.3, 0.0).unwrap_err().to_string();
        assert!(err.contains("rho11*rho44"), "{err}");
        let err = XState::new(0.25, 0.25, 0.25, 0.25, 0.0, 0.3).unwrap_err().to_string();
        assert!(err.contains("rho22*rho33"), "{err}");
        assert!(XState::new(0.5, 0.2, 0.2, 0.2, 0.0, 0.0).is_err());
        assert!(XState::pure_alpha_beta(0.5, 0.5).is_err());
    }

    #[test]
    fn entanglement_criterion() {
        let corner = XState::new(0.5, 0.0, 0.0, 0.5, 0.5, 0.0).unwrap();
        assert!(corner.is_entangled());
        assert!(!XState::vacuum().is_entangled());
        assert!(!XState::werner(1.0 / 3.0).unwrap().is_entangled());
        assert!(XState::werner(0.34).unwrap().is_entangled());
        assert!(XState::werner(1.5).is_err());
    }

    #[test]
    fn named_pure_states() {
        let v = XState::pure_alpha_beta(1.0, 0.0).unwrap();
        assert_eq!(v, XState::vacuum());
        let a = (1.0f64 / 26.0).sqrt();
        let s = XState::pure_alpha_beta(a, 5.0 * a).unwrap();
        assert!((s.rho44 - 25.0 / 26.0).abs() < 1e-15);
        assert!((s.rho14.re - 5.0 / 26.0).abs() < 1e-15);
        let rho = s.to_density();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn werner_extremes() {
        let mixed = XState::werner(0.0).unwrap().to_density();
        assert_close(mixed.matrix(), DensityMatrix::maximally_mixed(2).matrix(), 1e-15);
        let bell = XState::werner(1.0).unwrap().to_density();
        assert_close(bell.matrix(), bell_phi_plus().matrix(), 1e-15);
    }

    #[test]
    fn kay_state_validity() {
        for alpha in [2.0, 2.5, 3.0] {
            let rho = kay_state(alpha).unwrap();
            assert!(DensityMatrix::new(rho.matrix().clone(), rho.dims().to_vec()).is_ok());
            for left in [[0usize], [1], [2]] {
                let cut = Bipartition::new(&left, 3).unwrap();
                let pt = rho.partial_transpose(&cut).unwrap();
                assert!(hermitian_eigenvalues(&pt)[0] > -1e-12, "alpha={alpha} cut={cut}");
            }
        }
        assert!(kay_state(1.9).is_err());
    }

    #[test]
    fn bell_mixture_is_npt_on_every_cut() {
        let rho = biseparable_bell_mixture();
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(DensityMatrix::new(rho.matrix().clone(), vec![2; 3]).is_ok());
        for left in [[0usize], [1], [2]] {
            let cut = Bipartition::new(&left, 3).unwrap();
            let pt = rho.partial_transpose(&cut).unwrap();
            assert!(hermitian_eigenvalues(&pt)[0] < -1e-3, "cut {cut}");
        }
    }

    #[test]
    fn tensor_and_trace() {
        let half = DensityMatrix::maximally_mixed(1);
        let both = half.tensor(&half);
        assert_eq!(both.dims(), &[2, 2]);
        assert_close(both.matrix(), DensityMatrix::maximally_mixed(2).matrix(), 1e-15);

        let x = XState::pure_alpha_beta(0.6, 0.8).unwrap().to_density();
        let ext = x.tensor(&DensityMatrix::ground(1));
        let back = ext.partial_trace(&[0, 1]).unwrap();
        assert_close(back.matrix(), x.matrix(), 1e-15);

        let marginal = bell_phi_plus().partial_trace(&[1]).unwrap();
        assert_close(marginal.matrix(), DensityMatrix::maximally_mixed(1).matrix(), 1e-15);

        assert!(x.partial_trace(&[]).is_err());
        assert!(x.partial_trace(&[2]).is_err());
    }

    #[test]
    fn rank_of_assembled_initial_state() {
        let w = XState::werner(0.45).unwrap().to_density();
        let full = w.tensor(&DensityMatrix::ground(2));
        assert!((full.trace().re - 1.0).abs() < 1e-14);
        let rank = |r: &DensityMatrix| r.eigenvalues().iter().filter(|&&e| e > 1e-12).count();
        assert_eq!(rank(&full), rank(&w));
        assert_eq!(rank(&w), 4);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let cut = Bipartition::new(&[0], 2).unwrap();
        let pt = bell_phi_plus().partial_transpose(&cut).unwrap();
        let ev = hermitian_eigenvalues(&pt);
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let twice = partial_transpose(&pt, &[2, 2], &[0]);
        assert_close(&twice, bell_phi_plus().matrix(), 0.0);
    }

    #[test]
    fn product_states_are_ppt() {
        let a = XState::pure_alpha_beta(0.6, 0.8).unwrap().to_density().partial_trace(&[0]).unwrap();
        let rho = a.tensor(&DensityMatrix::maximally_mixed(1)).tensor(&a);
        for left in [vec![0], vec![1], vec![2], vec![0, 1]] {
            let cut = Bipartition::new(&left, 3).unwrap();
            assert!(hermitian_eigenvalues(&rho.partial_transpose(&cut).unwrap())[0] > -1e-14);
        }
    }

    #[test]
    fn permutation_moves_subsystems() {
        let x = XState::pure_alpha_beta(0.6, 0.8).unwrap().to_density();
        let full = x.tensor(&DensityMatrix::ground(1)); // (A, B, C)
        let moved = full.permute(&[2, 0, 1]).unwrap(); // (C, A, B)
        let back = moved.partial_trace(&[1, 2]).unwrap();
        assert_close(back.matrix(), x.matrix(), 1e-15);
        assert!(full.permute(&[0, 0, 1]).is_err());
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(&[], 3).is_err());
        assert!(Bipartition::new(&[0, 1, 2], 3).is_err());
        assert!(Bipartition::new(&[3], 3).is_err());
        assert!(Bipartition::new(&[1, 1], 3).is_err());
        let cut = Bipartition::new(&[2, 0], 4).unwrap();
        assert_eq!(cut.left(), &[0, 2]);
        assert_eq!(cut.right(), &[1, 3]);
        assert_eq!(cut.to_string(), "{0,2}|{1,3}");
    }

    #[test]
    fn rejects_invalid_matrices() {
        let mut m = CMatrix::identity(2, 2) * cr(0.5);
        m[(0, 1)] = cr(0.1);
        assert!(DensityMatrix::new(m.clone(), vec![2]).is_err()); // not Hermitian
        let bad = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(1.2), cr(-0.2)]));
        assert!(DensityMatrix::new(bad, vec![2]).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(2, 2), vec![2]).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(2, 2) * cr(0.5), vec![3]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let rho = XState::new(0.4, 0.1, 0.2, 0.3, Complex64::new(0.1, 0.2), Complex64::new(0.0, -0.1))
            .unwrap()
            .to_density();
        let text = serde_json::to_string(&rho).unwrap();
        assert!(text.starts_with("{\"dims\":[2,2],\"re\":"));
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rho);
        let bad = r#"{"dims":[2],"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<DensityMatrix>(bad).is_err());
    }
}
