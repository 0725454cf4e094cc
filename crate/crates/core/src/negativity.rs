//! Bipartite entanglement: negativity across a cut, with closed forms for
//! two-qubit X states and the X-state concurrence used as a cross-check.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::hermitian_eigenvalues;
use crate::state::{Bipartition, DensityMatrix, XState};

/// Below this value an entanglement measure is reported as zero when
/// detecting sudden death and birth.
pub const ZERO_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NegativityEigen,
    NegativityXStateClosedForm,
    Concurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementValue {
    pub value: f64,
    pub method: Method,
}

impl EntanglementValue {
    pub fn is_zero(&self) -> bool {
        self.value <= ZERO_THRESHOLD
    }
}

/// Sum of the magnitudes of the negative eigenvalues of `rho^{T_M}`.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<EntanglementValue> {
    let pt = rho.partial_transpose(cut)?;
    let value = hermitian_eigenvalues(&pt).iter().filter(|&&e| e < 0.0).map(|e| -e).sum();
    Ok(EntanglementValue { value, method: Method::NegativityEigen })
}

/// Smallest eigenvalue of the partial transpose; negative iff NPT.
pub fn min_pt_eigenvalue(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    Ok(hermitian_eigenvalues(&rho.partial_transpose(cut)?)[0])
}

/// The partial transpose of an X state is again an X state with `rho14` and
/// `rho23` exchanged. Returns the two smaller eigenvalues of its 2x2 blocks:
/// the outer block `{rho11, rho44; |rho23|}` and the inner block
/// `{rho22, rho33; |rho14|}`.
pub fn xstate_pt_min_eigenvalues(s: &XState) -> (f64, f64) {
    let lower = |a: f64, b: f64, off: f64| 0.5 * (a + b) - (0.25 * (a - b).powi(2) + off * off).sqrt();
    (
        lower(s.rho11, s.rho44, s.rho23.norm()),
        lower(s.rho22, s.rho33, s.rho14.norm()),
    )
}

pub fn negativity_xstate(s: &XState) -> EntanglementValue {
    let (outer, inner) = xstate_pt_min_eigenvalues(s);
    let value = (-outer).max(0.0) + (-inner).max(0.0);
    EntanglementValue { value, method: Method::NegativityXStateClosedForm }
}

/// Wootters concurrence of an X state.
pub fn concurrence_xstate(s: &XState) -> EntanglementValue {
    let a = s.rho14.norm() - (s.rho22 * s.rho33).sqrt();
    let b = s.rho23.norm() - (s.rho11 * s.rho44).sqrt();
    EntanglementValue { value: 2.0 * a.max(b).max(0.0), method: Method::Concurrence }
}

/// Signed entanglement margin of an X state: the smaller PT block eigenvalue
/// with sign flipped, positive iff entangled. Used to refine zero crossings.
pub fn xstate_margin(s: &XState) -> f64 {
    let (outer, inner) = xstate_pt_min_eigenvalues(s);
    -outer.min(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::bell_phi_plus;
    use num_complex::Complex64;

    fn cut2() -> Bipartition {
        Bipartition::new(&[0], 2).unwrap()
    }

    #[test]
    fn reference_values() {
        assert!((negativity(&bell_phi_plus(), &cut2()).unwrap().value - 0.5).abs() < 1e-12);

        let s = XState::pure_alpha_beta((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()).unwrap();
        let n = negativity(&s.to_density(), &cut2()).unwrap().value;
        assert!((n - 2f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((n - 0.4714).abs() < 1e-4);

        let a = (1.0f64 / 26.0).sqrt();
        let s = XState::pure_alpha_beta(a, 5.0 * a).unwrap();
        let n = negativity(&s.to_density(), &cut2()).unwrap().value;
        assert!((n - 5.0 / 26.0).abs() < 1e-12);

        let w = XState::werner(0.45).unwrap();
        assert!((negativity(&w.to_density(), &cut2()).unwrap().value - 0.0875).abs() < 1e-12);
        assert!((negativity_xstate(&w).value - 0.0875).abs() < 1e-15);
    }

    #[test]
    fn werner_closed_form() {
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let n = negativity_xstate(&XState::werner(p).unwrap()).value;
            assert!((n - ((3.0 * p - 1.0) / 4.0).max(0.0)).abs() < 1e-15);
        }
        assert_eq!(negativity_xstate(&XState::vacuum()).value, 0.0);
    }

    #[test]
    fn concurrence_values() {
        let bell = XState::werner(1.0).unwrap();
        assert!((concurrence_xstate(&bell).value - 1.0).abs() < 1e-15);
        let (al, be) = (0.6, Complex64::new(0.0, 0.8));
        let s = XState::pure_alpha_beta(al, be).unwrap();
        assert!((concurrence_xstate(&s).value - 2.0 * 0.48).abs() < 1e-15);
    }

    #[test]
    fn negative_block_is_reported_per_block() {
        let s = XState::new(0.1, 0.4, 0.4, 0.1, 0.0, 0.35).unwrap();
        let closed = negativity_xstate(&s).value;
        let eigen = negativity(&s.to_density(), &cut2()).unwrap().value;
        assert!((closed - eigen).abs() < 1e-12);
        assert!(closed > 0.0 && s.is_entangled());
    }
}
