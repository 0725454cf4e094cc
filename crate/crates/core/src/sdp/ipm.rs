//! Primal-dual interior-point method for small dense block-diagonal SDPs.
//!
//! Problem pair, with `A(X)_i = <A_i, X>` and `A^T(y) = sum_i y_i A_i`:
//!
//! ```text
//! (P)  minimize   <C, X>   subject to  A(X) = b,            X >= 0
//! (D)  maximize   b^T y    subject to  S = C - A^T(y),      S >= 0
//! ```
//!
//! Search directions use the HKM scaling with a Mehrotra predictor-corrector
//! step. The dual may be started from a strictly feasible `y0`, in which case
//! every dual iterate stays feasible up to round-off.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::SolveError;

/// One nonzero of a symmetric coefficient matrix, `row <= col`, stored once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Data of the dual-form problem `max b^T y s.t. C - sum_i y_i A_i >= 0`.
#[derive(Debug, Clone)]
pub struct BlockSdp {
    pub block_sizes: Vec<usize>,
    /// Dense symmetric constant blocks.
    pub c: Vec<DMatrix<f64>>,
    /// Sparse coefficient matrix of each dual variable.
    pub a: Vec<Vec<Entry>>,
    pub b: DVector<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct IpmOptions {
    /// Target for relative gap and both infeasibilities.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self { tolerance: 1e-7, max_iterations: 200, step_fraction: 0.98 }
    }
}

#[derive(Debug, Clone)]
pub struct IpmSolution {
    pub y: DVector<f64>,
    pub x: Vec<DMatrix<f64>>,
    pub s: Vec<DMatrix<f64>>,
    /// `<C, X>`, an upper bound on the dual optimum when `X` is feasible.
    pub primal_objective: f64,
    /// `b^T y`.
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
}

impl BlockSdp {
    pub fn num_variables(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let nb = self.block_sizes.len();
        if self.c.len() != nb {
            return Err(SolveError::InvalidProblem(format!("{} constant blocks for {nb} sizes", self.c.len())));
        }
        for (k, (ck, &n)) in self.c.iter().zip(&self.block_sizes).enumerate() {
            if ck.nrows() != n || ck.ncols() != n {
                return Err(SolveError::InvalidProblem(format!("constant block {k} is not {n}x{n}")));
            }
        }
        if self.b.len() != self.a.len() {
            return Err(SolveError::InvalidProblem(format!(
                "{} objective coefficients for {} variables",
                self.b.len(),
                self.a.len()
            )));
        }
        for (i, entries) in self.a.iter().enumerate() {
            for e in entries {
                let ok = e.block < nb && e.row <= e.col && e.col < self.block_sizes[e.block];
                if !ok || !e.value.is_finite() {
                    return Err(SolveError::InvalidProblem(format!("bad entry {e:?} of variable {i}")));
                }
            }
        }
        Ok(())
    }

    /// `A(Z)_i = Tr(A_i Z)`; `z` need not be symmetric.
    pub fn apply(&self, z: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|entries| entries_dot(entries, z)))
    }

    /// `sum_i y_i A_i` as dense blocks.
    pub fn adjoint(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.block_sizes.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        for (entries, &yi) in self.a.iter().zip(y.iter()) {
            for e in entries {
                let v = e.value * yi;
                out[e.block][(e.row, e.col)] += v;
                if e.row != e.col {
                    out[e.block][(e.col, e.row)] += v;
                }
            }
        }
        out
    }

    /// `C - A^T(y)`.
    pub fn slack(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        self.c.iter().zip(self.adjoint(y)).map(|(ck, ak)| ck - ak).collect()
    }
}

fn entries_dot(entries: &[Entry], z: &[DMatrix<f64>]) -> f64 {
    entries
        .iter()
        .map(|e| {
            let zk = &z[e.block];
            if e.row == e.col {
                e.value * zk[(e.row, e.row)]
            } else {
                e.value * (zk[(e.row, e.col)] + zk[(e.col, e.row)])
            }
        })
        .sum()
}

fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn frobenius(a: &[DMatrix<f64>]) -> f64 {
    a.iter().map(|x| x.norm_squared()).sum::<f64>().sqrt()
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for r in 0..n {
        for c in (r + 1)..n {
            let v = 0.5 * (m[(r, c)] + m[(c, r)]);
            m[(r, c)] = v;
            m[(c, r)] = v;
        }
    }
}

/// Largest `alpha` with `x + alpha * dx` positive semidefinite (may be infinite).
fn max_step(x: &[DMatrix<f64>], dx: &[DMatrix<f64>]) -> Result<f64, SolveError> {
    let mut alpha = f64::INFINITY;
    for (xk, dk) in x.iter().zip(dx) {
        let chol = Cholesky::new(xk.clone())
            .ok_or_else(|| SolveError::NumericalFailure("iterate left the cone interior".into()))?;
        let l = chol.l();
        let y = l
            .solve_lower_triangular(dk)
            .ok_or_else(|| SolveError::NumericalFailure("singular Cholesky factor".into()))?;
        let mut w = l
            .solve_lower_triangular(&y.transpose())
            .ok_or_else(|| SolveError::NumericalFailure("singular Cholesky factor".into()))?;
        symmetrize(&mut w);
        let lmin = w.symmetric_eigenvalues().min();
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    Ok(alpha)
}

/// Per-block view of which variables touch the block, for Schur assembly.
struct BlockIncidence {
    /// `(variable, entries of that variable inside the block)`.
    vars: Vec<Vec<(usize, Vec<Entry>)>>,
}

impl BlockIncidence {
    fn new(p: &BlockSdp) -> Self {
        let mut vars: Vec<Vec<(usize, Vec<Entry>)>> = vec![Vec::new(); p.block_sizes.len()];
        for (i, entries) in p.a.iter().enumerate() {
            for e in entries {
                let list = &mut vars[e.block];
                match list.last_mut() {
                    Some((j, es)) if *j == i => es.push(*e),
                    _ => list.push((i, vec![*e])),
                }
            }
        }
        Self { vars }
    }
}

/// Schur complement `M_ij = Tr(A_i X A_j S^{-1})`.
fn schur(
    m: usize,
    inc: &BlockIncidence,
    x: &[DMatrix<f64>],
    sinv: &[DMatrix<f64>],
) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    for (k, vars) in inc.vars.iter().enumerate() {
        let n = x[k].nrows();
        let xk = &x[k];
        let sk = &sinv[k];
        let mut t = DMatrix::<f64>::zeros(n, n);
        for (pos, (i, entries)) in vars.iter().enumerate() {
            // t = X A_i, nonzero only in the columns touched by A_i.
            let mut cols: Vec<usize> = Vec::with_capacity(2 * entries.len());
            for e in entries {
                for r in 0..n {
                    t[(r, e.col)] += xk[(r, e.row)] * e.value;
                }
                cols.push(e.col);
                if e.row != e.col {
                    for r in 0..n {
                        t[(r, e.row)] += xk[(r, e.col)] * e.value;
                    }
                    cols.push(e.row);
                }
            }
            cols.sort_unstable();
            cols.dedup();
            // g = t S^{-1}
            let mut g = DMatrix::<f64>::zeros(n, n);
            for &cidx in &cols {
                for q in 0..n {
                    let s = sk[(cidx, q)];
                    if s != 0.0 {
                        for p in 0..n {
                            g[(p, q)] += t[(p, cidx)] * s;
                        }
                    }
                }
            }
            for &cidx in &cols {
                for r in 0..n {
                    t[(r, cidx)] = 0.0;
                }
            }
            for (j, ej) in &vars[pos..] {
                let v: f64 = ej
                    .iter()
                    .map(|e| {
                        if e.row == e.col {
                            e.value * g[(e.row, e.row)]
                        } else {
                            e.value * (g[(e.row, e.col)] + g[(e.col, e.row)])
                        }
                    })
                    .sum();
                out[(*i, *j)] += v;
                if i != j {
                    out[(*j, *i)] += v;
                }
            }
        }
    }
    out
}

struct Direction {
    dx: Vec<DMatrix<f64>>,
    dy: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
}

/// Solves for the direction with complementarity target `X dS + dX S = r`.
#[allow(clippy::too_many_arguments)]
fn direction(
    p: &BlockSdp,
    chol_m: &Cholesky<f64, Dyn>,
    x: &[DMatrix<f64>],
    sinv: &[DMatrix<f64>],
    rp: &DVector<f64>,
    rd: &[DMatrix<f64>],
    r: &[DMatrix<f64>],
) -> Direction {
    let r_sinv: Vec<DMatrix<f64>> = r.iter().zip(sinv).map(|(rk, sk)| rk * sk).collect();
    let x_rd_sinv: Vec<DMatrix<f64>> =
        x.iter().zip(rd).zip(sinv).map(|((xk, dk), sk)| xk * dk * sk).collect();
    let rhs = rp - p.apply(&r_sinv) + p.apply(&x_rd_sinv);
    let dy = chol_m.solve(&rhs);
    let at_dy = p.adjoint(&dy);
    let ds: Vec<DMatrix<f64>> = rd.iter().zip(&at_dy).map(|(dk, ak)| dk - ak).collect();
    let dx = r_sinv
        .iter()
        .zip(x)
        .zip(&ds)
        .zip(sinv)
        .map(|(((rs, xk), dsk), sk)| {
            let mut d = rs - xk * dsk * sk;
            symmetrize(&mut d);
            d
        })
        .collect();
    Direction { dx, dy, ds }
}

fn cholesky_with_shift(m: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>, SolveError> {
    if let Some(ch) = Cholesky::new(m.clone()) {
        return Ok(ch);
    }
    let scale = m.diagonal().iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    for shift in [1e-14, 1e-12, 1e-10] {
        let mut shifted = m.clone();
        for i in 0..shifted.nrows() {
            shifted[(i, i)] += shift * scale;
        }
        if let Some(ch) = Cholesky::new(shifted) {
            return Ok(ch);
        }
    }
    Err(SolveError::NumericalFailure(
        "Schur complement of the Newton system is not positive definite".into(),
    ))
}

fn invert_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>, SolveError> {
    Cholesky::new(m.clone())
        .map(|c| {
            let mut inv = c.inverse();
            symmetrize(&mut inv);
            inv
        })
        .ok_or_else(|| SolveError::NumericalFailure("dual slack lost definiteness".into()))
}

/// Runs the interior-point iteration. `y0`, when given, must make
/// `C - A^T(y0)` positive definite.
pub fn solve(p: &BlockSdp, opts: &IpmOptions, y0: Option<&DVector<f64>>) -> Result<IpmSolution, SolveError> {
    p.validate()?;
    let m = p.num_variables();
    let n_total: usize = p.block_sizes.iter().sum();
    let inc = BlockIncidence::new(p);
    let b_norm = p.b.norm();
    let c_norm = frobenius(&p.c);

    let (mut y, mut s) = match y0 {
        Some(y0) => {
            let s = p.slack(y0);
            for (k, sk) in s.iter().enumerate() {
                if Cholesky::new(sk.clone()).is_none() {
                    return Err(SolveError::InvalidProblem(format!(
                        "starting point is not strictly feasible in block {k}"
                    )));
                }
            }
            (y0.clone(), s)
        }
        None => {
            let eta = (n_total as f64).sqrt().max(c_norm).max(1.0);
            (
                DVector::zeros(m),
                p.block_sizes.iter().map(|&n| DMatrix::identity(n, n) * eta).collect(),
            )
        }
    };
    let mut x: Vec<DMatrix<f64>> = p.block_sizes.iter().map(|&n| DMatrix::identity(n, n)).collect();

    let mut best: Option<(f64, f64)> = None;
    for iter in 0..=opts.max_iterations {
        let rp = &p.b - p.apply(&x);
        let at_y = p.adjoint(&y);
        let rd: Vec<DMatrix<f64>> =
            p.c.iter().zip(&s).zip(&at_y).map(|((ck, sk), ak)| ck - sk - ak).collect();
        let pobj = inner(&p.c, &x);
        let dobj = p.b.dot(&y);
        let gap = inner(&x, &s);
        let rel_gap = gap.abs().max((pobj - dobj).abs()) / (1.0 + pobj.abs() + dobj.abs());
        let pinf = rp.norm() / (1.0 + b_norm);
        let dinf = frobenius(&rd) / (1.0 + c_norm);
        if dinf <= opts.tolerance {
            best = Some((dobj, pobj));
        }

        if rel_gap <= opts.tolerance && pinf <= opts.tolerance && dinf <= opts.tolerance {
            return Ok(IpmSolution {
                y,
                x,
                s,
                primal_objective: pobj,
                dual_objective: dobj,
                relative_gap: rel_gap,
                primal_infeasibility: pinf,
                dual_infeasibility: dinf,
                iterations: iter,
            });
        }
        if iter == opts.max_iterations {
            break;
        }

        let mu = gap / n_total as f64;
        let sinv: Vec<DMatrix<f64>> = s.iter().map(invert_spd).collect::<Result<_, _>>()?;
        let chol_m = cholesky_with_shift(schur(m, &inc, &x, &sinv))?;

        // Predictor: affine-scaling direction.
        let r_aff: Vec<DMatrix<f64>> = x.iter().zip(&s).map(|(xk, sk)| -(xk * sk)).collect();
        let aff = direction(p, &chol_m, &x, &sinv, &rp, &rd, &r_aff);
        let ap = max_step(&x, &aff.dx)?.min(1.0);
        let ad = max_step(&s, &aff.ds)?.min(1.0);
        let x_aff: Vec<DMatrix<f64>> = x.iter().zip(&aff.dx).map(|(xk, d)| xk + d * ap).collect();
        let s_aff: Vec<DMatrix<f64>> = s.iter().zip(&aff.ds).map(|(sk, d)| sk + d * ad).collect();
        let mu_aff = inner(&x_aff, &s_aff) / n_total as f64;
        let sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powi(3) } else { 0.0 };

        // Corrector with second-order term.
        let r_cor: Vec<DMatrix<f64>> = x
            .iter()
            .zip(&s)
            .zip(aff.dx.iter().zip(&aff.ds))
            .map(|((xk, sk), (dxk, dsk))| {
                let n = xk.nrows();
                DMatrix::identity(n, n) * (sigma * mu) - xk * sk - dxk * dsk
            })
            .collect();
        let dir = direction(p, &chol_m, &x, &sinv, &rp, &rd, &r_cor);
        let ap = (opts.step_fraction * max_step(&x, &dir.dx)?).min(1.0);
        let ad = (opts.step_fraction * max_step(&s, &dir.ds)?).min(1.0);

        for (xk, d) in x.iter_mut().zip(&dir.dx) {
            *xk += d * ap;
        }
        for (sk, d) in s.iter_mut().zip(&dir.ds) {
            *sk += d * ad;
            symmetrize(sk);
        }
        y += &dir.dy * ad;
    }

    let (best_objective, best_bound) = best.unwrap_or((f64::NAN, f64::NAN));
    Err(SolveError::NonConvergence { iterations: opts.max_iterations, best_objective, best_bound })
}
