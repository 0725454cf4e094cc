//! Genuine multipartite negativity from the PPT-mixture witness program
//!
//! ```text
//! minimize Tr(W rho)  over W = P_M + Q_M^{T_M},  0 <= P_M <= 1,  0 <= Q_M <= 1
//! ```
//!
//! for every bipartition `M | M-bar`. A negative minimum certifies genuine
//! multipartite entanglement; the reported value is `max(0, -minimum)`.
//!
//! The program is posed with `W` and every `P_M` as free Hermitian matrices
//! and `Q_M = (W - P_M)^{T_M}` eliminated, giving four linear matrix
//! inequalities per cut. Complex Hermitian blocks enter the solver through
//! the real embedding `[[Re, -Im], [Im, Re]]`; real states use real symmetric
//! variables directly. Phase symmetries of `rho` (see
//! [`crate::sdp::symmetry`]) restrict `W` and `P_M` to invariant operators,
//! which splits every inequality into small blocks without changing the
//! optimum.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, trace_product, CMatrix};
use crate::sdp::symmetry::PhaseClasses;
use crate::sdp::{self, BlockSdp, Entry, IpmOptions};
use crate::state::{partial_transpose, partial_transpose_index, Bipartition, DensityMatrix, XState};

pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Entries of `rho` below this magnitude do not count towards its support
/// when detecting phase symmetries.
const SUPPORT_THRESHOLD: f64 = 1e-13;

/// All `2^{n-1} - 1` cuts of `n` subsystems. Subsystem 0 is always on the
/// left; cuts are ordered by size of the left side, then lexicographically.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least two subsystems, got {n}")));
    }
    let mut cuts = Vec::with_capacity((1 << (n - 1)) - 1);
    for mask in 0usize..(1 << (n - 1)) {
        // Subsystem 0 fixed on the left; `mask` picks the rest of the left side.
        let left: Vec<usize> =
            std::iter::once(0).chain((1..n).filter(|k| mask & (1 << (k - 1)) != 0)).collect();
        if left.len() < n {
            cuts.push(Bipartition::new(&left, n)?);
        }
    }
    cuts.sort_by(|a, b| a.left().len().cmp(&b.left().len()).then_with(|| a.left().cmp(b.left())));
    Ok(cuts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    /// Real symmetric variables when `rho` is real, complex otherwise.
    Auto,
    /// Always use complex Hermitian variables through the real embedding.
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmeOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub field: FieldMode,
    pub symmetry_reduction: bool,
}

impl Default for GmeOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            field: FieldMode::Auto,
            symmetry_reduction: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmeProblem {
    pub rho: DensityMatrix,
    pub cuts: Vec<Bipartition>,
    pub options: GmeOptions,
}

impl GmeProblem {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        Self::with_options(rho, GmeOptions::default())
    }

    pub fn with_options(rho: DensityMatrix, options: GmeOptions) -> Result<Self> {
        if rho.dims().iter().any(|&d| d != 2) {
            return Err(Error::Dimension(format!("qubit subsystems required, got {:?}", rho.dims())));
        }
        let cuts = enumerate_bipartitions(rho.num_subsystems())?;
        Ok(Self { rho, cuts, options })
    }
}

/// Which matrix and part a solver variable parametrises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableRole {
    /// `None` for `W`, `Some(k)` for `P` of cut `k`.
    pub cut: Option<usize>,
    pub row: usize,
    pub col: usize,
    pub imaginary: bool,
}

/// The witness program lowered to solver form.
#[derive(Debug, Clone)]
pub struct WitnessProgram {
    pub sdp: BlockSdp,
    pub roles: Vec<VariableRole>,
    /// Objective `Tr(W rho) = c^T y`.
    pub objective: DVector<f64>,
    /// Strictly feasible start: `W = 1`, `P_M = 1/2`.
    pub start: DVector<f64>,
    pub complex: bool,
    pub classes: PhaseClasses,
    /// `(cut, constraint kind)` for each solver block.
    pub block_origin: Vec<(usize, ConstraintKind)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    PLower,
    PUpper,
    QLower,
    QUpper,
}

/// Hermitian entry `(r, c)` with `r <= c`; the mirror is implied.
type HermEntries = Vec<(usize, usize, Complex64)>;

struct Lmi {
    constant: HermEntries,
    terms: Vec<(usize, HermEntries)>,
}

fn push_entry(list: &mut HermEntries, r: usize, c: usize, z: Complex64) {
    if r <= c {
        list.push((r, c, z));
    } else {
        list.push((c, r, z.conj()));
    }
}

impl WitnessProgram {
    pub fn build(problem: &GmeProblem) -> Result<Self> {
        let rho = problem.rho.matrix();
        let dims = problem.rho.dims().to_vec();
        let n = dims.len();
        let d = rho.nrows();
        let complex = match problem.options.field {
            FieldMode::Complex => true,
            FieldMode::Auto => !problem.rho.is_real(0.0),
        };
        let classes = if problem.options.symmetry_reduction {
            let scale = rho.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            PhaseClasses::from_support(n, |a, b| rho[(a, b)].norm() > SUPPORT_THRESHOLD * scale)
        } else {
            PhaseClasses::trivial(d)
        };

        // Variables: W first, then P of each cut, each over the allowed pattern.
        let mut roles = Vec::new();
        let mut pattern = Vec::new();
        for r in 0..d {
            for c in r..d {
                if classes.same_class(r, c) {
                    pattern.push((r, c));
                }
            }
        }
        let matrices = std::iter::once(None).chain((0..problem.cuts.len()).map(Some));
        for cut in matrices {
            for &(row, col) in &pattern {
                roles.push(VariableRole { cut, row, col, imaginary: false });
                if complex && row != col {
                    roles.push(VariableRole { cut, row, col, imaginary: true });
                }
            }
        }
        let unit = |role: &VariableRole| {
            if role.imaginary {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        };

        let objective = DVector::from_iterator(
            roles.len(),
            roles.iter().map(|role| match role.cut {
                Some(_) => 0.0,
                None if role.row == role.col => rho[(role.row, role.row)].re,
                None if role.imaginary => 2.0 * rho[(role.row, role.col)].im,
                None => 2.0 * rho[(role.row, role.col)].re,
            }),
        );
        let start = DVector::from_iterator(
            roles.len(),
            roles.iter().map(|role| match role.cut {
                _ if role.row != role.col || role.imaginary => 0.0,
                None => 1.0,
                Some(_) => 0.5,
            }),
        );

        let identity: HermEntries = (0..d).map(|k| (k, k, Complex64::new(1.0, 0.0))).collect();
        let mut dr = vec![0; n];
        let mut dc = vec![0; n];
        let mut blocks: Vec<(usize, ConstraintKind, Lmi)> = Vec::new();
        for (k, cut) in problem.cuts.iter().enumerate() {
            let mut p_terms = Vec::new();
            let mut q_terms = Vec::new();
            for (i, role) in roles.iter().enumerate() {
                let z = unit(role);
                let sign = match role.cut {
                    None => 1.0,
                    Some(j) if j == k => -1.0,
                    Some(_) => continue,
                };
                if role.cut.is_some() {
                    p_terms.push((i, vec![(role.row, role.col, z)]));
                }
                // Entry (row, col) of W - P lands at the partially transposed position.
                let (pr, pc) =
                    partial_transpose_index(role.row, role.col, &dims, cut.left(), &mut dr, &mut dc);
                let mut e = Vec::new();
                push_entry(&mut e, pr, pc, z * sign);
                q_terms.push((i, e));
            }
            let negate = |terms: &Vec<(usize, HermEntries)>| -> Vec<(usize, HermEntries)> {
                terms
                    .iter()
                    .map(|(i, es)| (*i, es.iter().map(|&(r, c, z)| (r, c, -z)).collect()))
                    .collect()
            };
            blocks.push((k, ConstraintKind::PLower, Lmi { constant: vec![], terms: p_terms.clone() }));
            blocks.push((k, ConstraintKind::PUpper, Lmi { constant: identity.clone(), terms: negate(&p_terms) }));
            blocks.push((k, ConstraintKind::QLower, Lmi { constant: vec![], terms: q_terms.clone() }));
            blocks.push((k, ConstraintKind::QUpper, Lmi { constant: identity.clone(), terms: negate(&q_terms) }));
        }

        // Lower every matrix inequality F(y) = F0 + sum y_i F_i >= 0 into
        // solver blocks C - sum y_i A_i with C = F0, A_i = -F_i.
        let mut block_sizes = Vec::new();
        let mut c_blocks = Vec::new();
        let mut a: Vec<Vec<Entry>> = vec![Vec::new(); roles.len()];
        let mut block_origin = Vec::new();
        for (k, kind, lmi) in &blocks {
            for component in components(d, lmi) {
                let local: BTreeMap<usize, usize> =
                    component.iter().enumerate().map(|(li, &g)| (g, li)).collect();
                let m = component.len();
                let size = if complex { 2 * m } else { m };
                let block = block_sizes.len();
                block_sizes.push(size);
                block_origin.push((*k, *kind));
                let mut cb = DMatrix::zeros(size, size);
                for &(r, c, z) in &lmi.constant {
                    if let (Some(&lr), Some(&lc)) = (local.get(&r), local.get(&c)) {
                        for (er, ec, v) in embed(lr, lc, z, m, complex) {
                            cb[(er, ec)] += v;
                            if er != ec {
                                cb[(ec, er)] += v;
                            }
                        }
                    }
                }
                c_blocks.push(cb);
                for (i, es) in &lmi.terms {
                    for &(r, c, z) in es {
                        if let (Some(&lr), Some(&lc)) = (local.get(&r), local.get(&c)) {
                            for (er, ec, v) in embed(lr, lc, z, m, complex) {
                                a[*i].push(Entry { block, row: er, col: ec, value: -v });
                            }
                        }
                    }
                }
            }
        }
        for entries in &mut a {
            entries.sort_by_key(|e| (e.block, e.row, e.col));
        }

        let sdp = BlockSdp { block_sizes, c: c_blocks, a, b: -&objective };
        Ok(Self { sdp, roles, objective, start, complex, classes, block_origin })
    }

    /// Rebuilds `W` and the `P_M` from a solver vector.
    pub fn matrices(&self, y: &DVector<f64>, num_cuts: usize, d: usize) -> (CMatrix, Vec<CMatrix>) {
        let mut w = CMatrix::zeros(d, d);
        let mut ps = vec![CMatrix::zeros(d, d); num_cuts];
        for (role, &v) in self.roles.iter().zip(y.iter()) {
            let target = match role.cut {
                None => &mut w,
                Some(k) => &mut ps[k],
            };
            let z = if role.imaginary { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) };
            target[(role.row, role.col)] += z;
            if role.row != role.col {
                target[(role.col, role.row)] += z.conj();
            }
        }
        (w, ps)
    }
}

/// Real symmetric embedding of a Hermitian entry `(r, c)`, `r <= c`, inside
/// a block of complex size `m`. Returned entries satisfy `row <= col`.
fn embed(r: usize, c: usize, z: Complex64, m: usize, complex: bool) -> Vec<(usize, usize, f64)> {
    let (r, c, z) = if r <= c { (r, c, z) } else { (c, r, z.conj()) };
    let mut out = Vec::with_capacity(4);
    if !complex {
        debug_assert!(z.im == 0.0);
        if z.re != 0.0 {
            out.push((r, c, z.re));
        }
        return out;
    }
    if z.re != 0.0 {
        out.push((r, c, z.re));
        out.push((r + m, c + m, z.re));
    }
    if r != c && z.im != 0.0 {
        out.push((r, c + m, -z.im));
        out.push((c, r + m, z.im));
    }
    out
}

/// Connected components of the sparsity graph of an LMI, restricted to
/// indices touched by at least one variable.
fn components(d: usize, lmi: &Lmi) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut touched = vec![false; d];
    let all = lmi.terms.iter().flat_map(|(_, es)| es.iter()).chain(lmi.constant.iter().filter(|e| e.0 != e.1));
    for &(r, c, _) in all {
        touched[r] = true;
        touched[c] = true;
        let (a, b) = (find(&mut parent, r), find(&mut parent, c));
        if a != b {
            parent[a] = b;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &t) in touched.iter().enumerate() {
        if t {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Per-cut witness decomposition `W = P_M + Q_M^{T_M}`.
#[derive(Debug, Clone)]
pub struct CutDecomposition {
    pub cut: Bipartition,
    pub p: CMatrix,
    pub q: CMatrix,
}

#[derive(Debug, Clone)]
pub struct GmeSolution {
    /// `min Tr(W rho)` as attained by the returned witness.
    pub objective: f64,
    /// Lower bound on the minimum from the solver's primal certificate.
    pub lower_bound: f64,
    pub genuine_negativity: f64,
    pub witness: CMatrix,
    pub decompositions: Vec<CutDecomposition>,
    pub residuals: WitnessReport,
    pub iterations: usize,
    pub num_variables: usize,
    pub block_sizes: Vec<usize>,
}

pub fn solve_gme(problem: &GmeProblem) -> Result<GmeSolution> {
    let program = WitnessProgram::build(problem)?;
    let opts = IpmOptions {
        tolerance: problem.options.tolerance,
        max_iterations: problem.options.max_iterations,
        ..IpmOptions::default()
    };
    let sol = sdp::solve(&program.sdp, &opts, Some(&program.start))?;
    let d = problem.rho.dim();
    let (w, ps) = program.matrices(&sol.y, problem.cuts.len(), d);
    let dims = problem.rho.dims();
    let decompositions: Vec<CutDecomposition> = problem
        .cuts
        .iter()
        .zip(ps)
        .map(|(cut, p)| {
            let q = partial_transpose(&(&w - &p), dims, cut.left());
            CutDecomposition { cut: cut.clone(), p, q }
        })
        .collect();
    let objective = program.objective.dot(&sol.y);
    let lower_bound = -sol.primal_objective;
    let mut out = GmeSolution {
        objective,
        lower_bound,
        genuine_negativity: (-objective).max(0.0),
        witness: w,
        decompositions,
        residuals: WitnessReport::default(),
        iterations: sol.iterations,
        num_variables: program.roles.len(),
        block_sizes: program.sdp.block_sizes.clone(),
    };
    out.residuals = verify_witness(&out, problem);
    Ok(out)
}

/// Genuine negativity of `rho`, clipped at zero.
pub fn genuine_negativity(rho: &DensityMatrix, options: GmeOptions) -> Result<f64> {
    let problem = GmeProblem::with_options(rho.clone(), options)?;
    Ok(solve_gme(&problem)?.genuine_negativity)
}

/// For two qubits the witness program reduces to the negativity.
pub fn negativity_via_gme(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_subsystems() != 2 {
        return Err(Error::Dimension(format!(
            "bipartite reduction needs two subsystems, got {}",
            rho.num_subsystems()
        )));
    }
    genuine_negativity(rho, GmeOptions::default())
}

/// Convenience for X states on two qubits.
pub fn negativity_via_gme_xstate(s: &XState) -> Result<f64> {
    negativity_via_gme(&s.to_density())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CutResidual {
    pub cut: String,
    /// Largest entry of `W - (P_M + Q_M^{T_M})`.
    pub decomposition: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// `Tr(W rho)` recomputed from the witness.
    pub objective: f64,
    pub cuts: Vec<CutResidual>,
    pub tolerance: f64,
    pub witness_hermiticity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub cut: String,
    pub constraint: &'static str,
    pub magnitude: f64,
}

impl WitnessReport {
    /// Constraints violated by more than `10 * tolerance`.
    pub fn violations(&self) -> Vec<Violation> {
        let limit = 10.0 * self.tolerance;
        let mut out = Vec::new();
        if self.witness_hermiticity > limit {
            out.push(Violation { cut: "-".into(), constraint: "W Hermitian", magnitude: self.witness_hermiticity });
        }
        for c in &self.cuts {
            let checks = [
                ("W = P + Q^T", c.decomposition),
                ("P >= 0", -c.p_min),
                ("P <= 1", c.p_max - 1.0),
                ("Q >= 0", -c.q_min),
                ("Q <= 1", c.q_max - 1.0),
            ];
            for (name, mag) in checks {
                if mag > limit {
                    out.push(Violation { cut: c.cut.clone(), constraint: name, magnitude: mag });
                }
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn max_violation(&self) -> f64 {
        self.cuts
            .iter()
            .flat_map(|c| [c.decomposition, -c.p_min, c.p_max - 1.0, -c.q_min, c.q_max - 1.0])
            .chain(std::iter::once(self.witness_hermiticity))
            .fold(0.0, f64::max)
    }

    pub fn into_result(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            return Ok(self);
        }
        let text: Vec<String> =
            v.iter().map(|v| format!("cut {}: {} violated by {:e}", v.cut, v.constraint, v.magnitude)).collect();
        Err(Error::Numerical(format!("witness check failed: {}", text.join("; "))))
    }
}

/// Recomputes every constraint of the witness with fresh eigendecompositions.
pub fn verify_witness(sol: &GmeSolution, problem: &GmeProblem) -> WitnessReport {
    let dims = problem.rho.dims();
    let cuts = sol
        .decompositions
        .iter()
        .map(|dec| {
            let rebuilt = &dec.p + partial_transpose(&dec.q, dims, dec.cut.left());
            let decomposition = crate::linalg::max_abs_diff(&sol.witness, &rebuilt);
            let pe = hermitian_eigenvalues(&dec.p);
            let qe = hermitian_eigenvalues(&dec.q);
            CutResidual {
                cut: dec.cut.to_string(),
                decomposition,
                p_min: pe[0],
                p_max: *pe.last().unwrap(),
                q_min: qe[0],
                q_max: *qe.last().unwrap(),
            }
        })
        .collect();
    WitnessReport {
        objective: trace_product(&sol.witness, problem.rho.matrix()).re,
        cuts,
        tolerance: problem.options.tolerance,
        witness_hermiticity: crate::linalg::hermiticity_error(&sol.witness),
    }
}

/// JSON description of a lowered witness program, for cross-checking with
/// external solvers. Sparse entries are `[block, row, col, value]` (upper
/// triangle); constant entries are `[row, col, value]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdpDump {
    pub format: String,
    pub sense: String,
    pub complex_embedding: bool,
    pub block_sizes: Vec<usize>,
    pub b: Vec<f64>,
    pub c: Vec<Vec<(usize, usize, f64)>>,
    pub a: Vec<Vec<(usize, usize, usize, f64)>>,
    pub variables: Vec<VariableRole>,
    pub cuts: Vec<Vec<usize>>,
    pub objective_matrix: crate::state::DensityMatrixJson,
}

impl SdpDump {
    pub fn new(problem: &GmeProblem) -> Result<Self> {
        let program = WitnessProgram::build(problem)?;
        let c = program
            .sdp
            .c
            .iter()
            .map(|cb| {
                let n = cb.nrows();
                let mut es = Vec::new();
                for r in 0..n {
                    for col in r..n {
                        if cb[(r, col)] != 0.0 {
                            es.push((r, col, cb[(r, col)]));
                        }
                    }
                }
                es
            })
            .collect();
        let a = program
            .sdp
            .a
            .iter()
            .map(|es| es.iter().map(|e| (e.block, e.row, e.col, e.value)).collect())
            .collect();
        Ok(Self {
            format: "block-lmi-v1".into(),
            sense: "maximize b'y subject to C - sum_i y_i A_i >= 0 per block; Tr(W rho) = -b'y".into(),
            complex_embedding: program.complex,
            block_sizes: program.sdp.block_sizes.clone(),
            b: program.sdp.b.iter().copied().collect(),
            c,
            a,
            variables: program.roles.clone(),
            cuts: problem.cuts.iter().map(|c| c.left().to_vec()).collect(),
            objective_matrix: (&problem.rho).into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bell_phi_plus, ghz};

    #[test]
    fn bipartition_counts() {
        assert_eq!(enumerate_bipartitions(2).unwrap().len(), 1);
        assert_eq!(enumerate_bipartitions(3).unwrap().len(), 3);
        let four = enumerate_bipartitions(4).unwrap();
        assert_eq!(four.len(), 7);
        assert!(four.iter().all(|c| c.left().contains(&0)));
        let mut uniq = four.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), 7);
        assert!(enumerate_bipartitions(1).is_err());
    }

    #[test]
    fn bell_pair() {
        let v = negativity_via_gme(&bell_phi_plus()).unwrap();
        assert!((v - 0.5).abs() < 1e-6, "{v}");
    }

    #[test]
    fn ghz_three_qubits() {
        let problem = GmeProblem::new(ghz(3)).unwrap();
        let sol = solve_gme(&problem).unwrap();
        assert!((sol.genuine_negativity - 0.5).abs() < 1e-5, "{}", sol.genuine_negativity);
        assert!(sol.lower_bound <= sol.objective + 1e-9);
        assert!((sol.lower_bound - sol.objective).abs() < 1e-5);
        assert!(sol.residuals.passed(), "{:?}", sol.residuals.violations());
    }

    #[test]
    fn embedding_entries_are_upper_triangular() {
        for (r, c) in [(0, 0), (0, 2), (2, 0), (1, 2)] {
            for (er, ec, _) in embed(r, c, Complex64::new(0.3, -0.7), 3, true) {
                assert!(er <= ec);
            }
        }
    }

    #[test]
    fn corrupted_witness_is_caught() {
        let problem = GmeProblem::new(ghz(3)).unwrap();
        let mut sol = solve_gme(&problem).unwrap();
        let base = verify_witness(&sol, &problem).objective;
        sol.witness += CMatrix::identity(8, 8) * Complex64::new(0.1, 0.0);
        let report = verify_witness(&sol, &problem);
        assert!((report.objective - base - 0.1).abs() < 1e-12);
        assert!(report.violations().iter().any(|v| v.constraint == "W = P + Q^T"));
        assert!(report.into_result().is_err());
    }

    #[test]
    fn p_bound_violation_is_named() {
        let problem = GmeProblem::new(ghz(3)).unwrap();
        let mut sol = solve_gme(&problem).unwrap();
        let dec = &mut sol.decompositions[1];
        let (vals, vecs) = crate::linalg::hermitian_eigen(&dec.p);
        let top = vecs.column(vals.len() - 1).into_owned();
        let shift = 1.2 - vals[vals.len() - 1];
        dec.p += &top * top.adjoint() * Complex64::new(shift, 0.0);
        let v = verify_witness(&sol, &problem).violations();
        let hit = v.iter().find(|v| v.constraint == "P <= 1").expect("bound violation");
        assert_eq!(hit.cut, problem.cuts[1].to_string());
        assert!((hit.magnitude - 0.2).abs() < 1e-9);
    }
}
