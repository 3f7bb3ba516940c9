//! Kraus-form CPTP maps acting on a subset of subsystems.

use nalgebra::{DMatrix, DVector};

use crate::error::{arg, Error, Result};
use crate::state::{Bipartition, DensityState, Repr, C64};

pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct KrausChannel {
    ops: Vec<DMatrix<C64>>,
    targets: Vec<usize>,
}

impl KrausChannel {
    /// Channel with Kraus operators `ops` acting jointly on `targets` (in
    /// that order). Rejects sets with `Σ K†K ≠ 1`.
    pub fn new(ops: Vec<DMatrix<C64>>, targets: Vec<usize>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::Validation("a channel needs at least one Kraus operator".into()));
        };
        let dim = first.nrows();
        if ops.iter().any(|k| k.nrows() != dim || k.ncols() != dim) {
            return Err(Error::Validation("Kraus operators must be square and of equal shape".into()));
        }
        if targets.is_empty() {
            return arg("a channel needs at least one target subsystem");
        }
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != targets.len() {
            return arg(format!("repeated target in {targets:?}"));
        }
        let sum = ops
            .iter()
            .fold(DMatrix::<C64>::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        let err = (sum - DMatrix::<C64>::identity(dim, dim)).camax();
        if err > COMPLETENESS_TOL {
            return Err(Error::Validation(format!(
                "Kraus set is incomplete (max |ΣK†K − 1| = {err:e})"
            )));
        }
        Ok(KrausChannel { ops, targets })
    }

    pub fn unitary(u: DMatrix<C64>, targets: Vec<usize>) -> Result<Self> {
        Self::new(vec![u], targets)
    }

    pub fn identity(dim: usize, targets: Vec<usize>) -> Result<Self> {
        Self::unitary(DMatrix::identity(dim, dim), targets)
    }

    /// Qubit channel replacing its input by the maximally mixed state.
    pub fn fully_depolarizing(target: usize) -> Self {
        let c = |re: f64, im: f64| C64::new(re, im);
        let half = |m: [C64; 4]| DMatrix::from_row_slice(2, 2, &m) * c(0.5, 0.0);
        let ops = vec![
            half([c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
            half([c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            half([c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
            half([c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        ];
        KrausChannel { ops, targets: vec![target] }
    }

    /// CNOT with the given control and target qubits.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        let mut u = DMatrix::<C64>::zeros(4, 4);
        for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            u[(row, col)] = C64::new(1.0, 0.0);
        }
        Self::unitary(u, vec![control, target])
    }

    pub fn kraus_ops(&self) -> &[DMatrix<C64>] {
        &self.ops
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn apply(&self, state: &DensityState) -> Result<DensityState> {
        let n = state.n();
        if let Some(&t) = self.targets.iter().find(|&&t| t >= n) {
            return arg(format!("channel target {t} out of range for {n} subsystems"));
        }
        let joint: usize = self.targets.iter().map(|&t| state.dims()[t]).product();
        if joint != self.ops[0].nrows() {
            return arg(format!(
                "channel acts on dimension {} but targets {:?} span {joint}",
                self.ops[0].nrows(),
                self.targets
            ));
        }
        let bp = Bipartition::new(state.dims(), &self.targets);
        let dims = state.dims().to_vec();

        if let (Repr::Pure(v), [u]) = (state.repr(), self.ops.as_slice()) {
            let mut out = DVector::zeros(v.len());
            for r in 0..bp.rest_dim {
                for t in 0..bp.sel_dim {
                    out[bp.index(r, t)] =
                        (0..bp.sel_dim).map(|s| u[(t, s)] * v[bp.index(r, s)]).sum();
                }
            }
            return Ok(DensityState::from_parts_unchecked(dims, Repr::Pure(out)));
        }

        let rho = state.to_matrix()?;
        let mut out = DMatrix::<C64>::zeros(rho.nrows(), rho.ncols());
        for k in &self.ops {
            // K ρ K† = (K (K ρ)†)† for Hermitian ρ
            let left = left_apply(&rho, k, &bp);
            out += left_apply(&left.adjoint(), k, &bp).adjoint();
        }
        Ok(DensityState::from_parts_unchecked(dims, Repr::Dense(out)))
    }
}

/// `(K ⊗ 1) m` with `K` acting on the selected side of `bp`.
fn left_apply(m: &DMatrix<C64>, k: &DMatrix<C64>, bp: &Bipartition) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(m.nrows(), m.ncols());
    for r in 0..bp.rest_dim {
        for t in 0..bp.sel_dim {
            let row = bp.index(r, t);
            for s in 0..bp.sel_dim {
                let coeff = k[(t, s)];
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = bp.index(r, s);
                for col in 0..m.ncols() {
                    out[(row, col)] += coeff * m[(src, col)];
                }
            }
        }
    }
    out
}

pub fn apply_channel(s: &DensityState, ch: &KrausChannel) -> Result<DensityState> {
    ch.apply(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_a_family, make_bell_product};

    #[test]
    fn identity_channel_leaves_state_unchanged() {
        let bell = make_bell_product(2, 2).unwrap();
        let out = KrausChannel::identity(2, vec![1]).unwrap().apply(&bell).unwrap();
        assert!(out.max_abs_diff(&bell).unwrap() < 1e-15);
    }

    #[test]
    fn incomplete_kraus_set_rejected() {
        let half = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(matches!(KrausChannel::new(vec![half], vec![0]), Err(Error::Validation(_))));
    }

    #[test]
    fn depolarizing_destroys_bell_correlations() {
        let bell = make_bell_product(2, 2).unwrap();
        let out = KrausChannel::fully_depolarizing(0).apply(&bell).unwrap();
        let mixed = DMatrix::<C64>::identity(4, 4) * C64::new(0.25, 0.0);
        assert!((out.to_matrix().unwrap() - mixed).camax() < 1e-15);
        assert!(out.validate().is_ok());
    }

    #[test]
    fn cnot_grows_a_family() {
        let a = 0.6;
        let ancilla = DensityState::from_amplitudes(
            vec![2],
            DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
        )
        .unwrap();
        let start = make_a_family(3, a).unwrap().tensor(&ancilla).unwrap();
        let grown = KrausChannel::cnot(0, 3).unwrap().apply(&start).unwrap();
        assert!(grown.is_pure_repr());
        assert!(grown.max_abs_diff(&make_a_family(4, a).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn dense_and_pure_paths_agree() {
        let bell = make_bell_product(2, 2).unwrap();
        let dense = DensityState::from_density_matrix(vec![2, 2], bell.to_matrix().unwrap()).unwrap();
        let ch = KrausChannel::cnot(1, 0).unwrap();
        let a = ch.apply(&bell).unwrap();
        let b = ch.apply(&dense).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let bell = make_bell_product(2, 2).unwrap();
        let ch = KrausChannel::identity(4, vec![0]).unwrap();
        assert!(matches!(ch.apply(&bell), Err(Error::Argument(_))));
    }
}
