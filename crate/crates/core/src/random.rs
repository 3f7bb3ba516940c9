//! Random states and channels for property testing.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::channel::KrausChannel;
use crate::error::Result;
use crate::limits::checked_dim;
use crate::partitions::SetPartition;
use crate::state::{index_to_digits, DensityState, ProbTable, Repr, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<DensityState> {
    let dim = checked_dim(dims)?;
    let v = DVector::from_fn(dim, |_, _| gaussian(rng));
    let norm = v.norm();
    DensityState::from_amplitudes(dims.to_vec(), v / C64::new(norm, 0.0))
}

/// Mixed state `G G† / Tr(G G†)` with a Ginibre matrix `G` of the given rank.
pub fn random_mixed<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> Result<DensityState> {
    let dim = checked_dim(dims)?;
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityState::from_density_matrix(dims.to_vec(), m)
}

/// Flat-Dirichlet probability table over every digit string.
pub fn random_classical<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<DensityState> {
    let dim = checked_dim(dims)?;
    let weights: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    let table: ProbTable =
        weights.iter().enumerate().map(|(i, w)| (index_to_digits(dims, i), w / total)).collect();
    let sum: f64 = table.values().sum();
    let table = table.into_iter().map(|(k, p)| (k, p / sum)).collect();
    DensityState::from_probabilities(dims.to_vec(), table)
}

/// Pure, full-rank mixed, low-rank mixed or classical, chosen at random.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<DensityState> {
    let dim: usize = dims.iter().product();
    match rng.random_range(0..4) {
        0 => random_pure(dims, rng),
        1 => random_mixed(dims, dim, rng),
        2 => random_mixed(dims, rng.random_range(1..=dim.min(3)), rng),
        _ => random_classical(dims, rng),
    }
}

/// Haar-random unitary (QR of a Ginibre matrix with phases fixed).
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let qr = ginibre(dim, dim, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / C64::new(d.norm(), 0.0) } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random channel with `n_kraus` operators on `targets`, from a random
/// isometry `C^d → C^{d·n_kraus}`.
pub fn random_channel<R: Rng + ?Sized>(
    dim: usize,
    n_kraus: usize,
    targets: Vec<usize>,
    rng: &mut R,
) -> Result<KrausChannel> {
    let r = n_kraus.max(1);
    let q = ginibre(dim * r, dim, rng).qr().q();
    let ops = (0..r).map(|i| q.rows(i * dim, dim).into_owned()).collect();
    KrausChannel::new(ops, targets)
}

/// Random state that factorizes over `partition`, each factor drawn by
/// [`random_state`].
pub fn random_product_over<R: Rng + ?Sized>(
    partition: &SetPartition,
    d: usize,
    rng: &mut R,
) -> Result<DensityState> {
    let n = partition.n();
    let mut blocks = partition.blocks().iter();
    let first = blocks.next().expect("nonempty partition");
    let mut prod = random_state(&vec![d; first.len()], rng)?;
    for b in blocks {
        prod = prod.tensor(&random_state(&vec![d; b.len()], rng)?)?;
    }
    let order: Vec<usize> = partition.blocks().concat();
    let mut perm = vec![0; n];
    for (pos, &orig) in order.iter().enumerate() {
        perm[orig] = pos;
    }
    prod.permute(&perm)
}

/// Dense copy of a state, dropping any pure/classical structure.
pub fn as_dense(s: &DensityState) -> Result<DensityState> {
    Ok(DensityState::from_parts_unchecked(s.dims().to_vec(), Repr::Dense(s.to_matrix()?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            random_state(&[2, 3], &mut rng).unwrap().validate().unwrap();
        }
        let u = random_unitary(4, &mut rng);
        assert!((u.adjoint() * &u - DMatrix::<C64>::identity(4, 4)).camax() < 1e-12);
        let ch = random_channel(2, 3, vec![1], &mut rng).unwrap();
        assert_eq!(ch.kraus_ops().len(), 3);
    }

    #[test]
    fn random_product_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = SetPartition::from_blocks(4, vec![vec![0, 2], vec![1], vec![3]]).unwrap();
        let s = random_product_over(&p, 2, &mut rng).unwrap();
        let recon = crate::correlations::product_of_marginals(&s, &p).unwrap();
        assert!(recon.max_abs_diff(&s).unwrap() < 1e-12);
    }
}
