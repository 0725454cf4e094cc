//! Diagonal phase symmetries of multi-qubit states.
//!
//! A local diagonal unitary `U = (x)_k diag(1, e^{i phi_k})` leaves `rho`
//! invariant iff `phi . (n_a - n_b)` is a multiple of `2 pi` for every
//! nonzero entry `rho_ab`, where `n_a` is the bit string of basis state `a`.
//! The differences span an integer lattice `L`; averaging over the symmetry
//! group keeps exactly those operator entries `(a, b)` with `n_a - n_b` in
//! `L`. Basis states therefore split into classes (cosets of `L`) and any
//! invariant operator is block diagonal over the classes.

/// Integer lattice in `Z^n` kept in row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    dim: usize,
    /// Rows with strictly increasing pivot columns; entries left of a row's
    /// pivot are zero.
    rows: Vec<(usize, Vec<i64>)>,
}

impl IntLattice {
    pub fn span(dim: usize, generators: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut pending: Vec<Vec<i64>> =
            generators.into_iter().filter(|g| g.iter().any(|&v| v != 0)).collect();
        for g in &pending {
            assert_eq!(g.len(), dim, "generator dimension");
        }
        let mut rows = Vec::new();
        for col in 0..dim {
            while let Some(pivot_pos) =
                (0..pending.len()).filter(|&i| pending[i][col] != 0).min_by_key(|&i| pending[i][col].abs())
            {
                let pivot = pending[pivot_pos].clone();
                let mut all_clear = true;
                for (i, row) in pending.iter_mut().enumerate() {
                    if i == pivot_pos || row[col] == 0 {
                        continue;
                    }
                    let q = row[col] / pivot[col];
                    for (r, p) in row.iter_mut().zip(&pivot) {
                        *r -= q * p;
                    }
                    if row[col] != 0 {
                        all_clear = false;
                    }
                }
                if all_clear {
                    let mut row = pending.swap_remove(pivot_pos);
                    if row[col] < 0 {
                        row.iter_mut().for_each(|v| *v = -*v);
                    }
                    rows.push((col, row));
                    pending.retain(|r| r.iter().any(|&v| v != 0));
                    break;
                }
            }
        }
        Self { dim, rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim, "vector dimension");
        let mut v = v.to_vec();
        for (col, row) in &self.rows {
            if v[*col] % row[*col] != 0 {
                return false;
            }
            let q = v[*col] / row[*col];
            for (a, b) in v.iter_mut().zip(row) {
                *a -= q * b;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

fn bits(index: usize, n: usize) -> Vec<i64> {
    (0..n).map(|k| ((index >> (n - 1 - k)) & 1) as i64).collect()
}

fn difference(a: usize, b: usize, n: usize) -> Vec<i64> {
    bits(a, n).into_iter().zip(bits(b, n)).map(|(x, y)| x - y).collect()
}

/// Partition of the `2^n` basis states into symmetry classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseClasses {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl PhaseClasses {
    /// Every basis state in one class (no reduction).
    pub fn trivial(dim: usize) -> Self {
        Self { class_of: vec![0; dim], num_classes: 1 }
    }

    /// Classes induced by the support of an `n`-qubit operator: `support(a, b)`
    /// reports whether entry `(a, b)` is nonzero.
    pub fn from_support(n: usize, support: impl Fn(usize, usize) -> bool) -> Self {
        let dim = 1usize << n;
        let mut gens = Vec::new();
        for a in 0..dim {
            for b in (a + 1)..dim {
                if support(a, b) {
                    gens.push(difference(a, b, n));
                }
            }
        }
        gens.sort();
        gens.dedup();
        let lattice = IntLattice::span(n, gens);
        let mut reps: Vec<usize> = Vec::new();
        let mut class_of = vec![0; dim];
        for (a, slot) in class_of.iter_mut().enumerate() {
            match reps.iter().position(|&r| lattice.contains(&difference(a, r, n))) {
                Some(k) => *slot = k,
                None => {
                    *slot = reps.len();
                    reps.push(a);
                }
            }
        }
        Self { class_of, num_classes: reps.len() }
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_classes];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }
}
