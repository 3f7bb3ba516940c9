//! Multipartite density operators.
//!
//! A [`DensityState`] carries an ordered list of subsystem dimensions and one
//! of three representations: a dense density matrix, a pure amplitude
//! vector, or a sparse classical probability table over digit strings.
//! Marginal entropies are computed on the cheapest representation available,
//! so pure states never need their full density matrix and classical states
//! never need an eigendecomposition.
//!
//! Subsystem indices are 0-based throughout the API. Basis ordering is
//! big-endian: subsystem 0 is the most significant digit.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{arg, Error, Result};
use crate::limits::checked_dim;

pub type C64 = Complex64;

/// Probability table over digit strings, one digit per subsystem.
pub type ProbTable = BTreeMap<Vec<u8>, f64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues below this contribute nothing to entropies.
pub const EIG_CLIP: f64 = 1e-12;
/// Weight of `rho` outside the support of `sigma` that makes the relative
/// entropy infinite.
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Repr {
    Dense(DMatrix<C64>),
    Pure(DVector<C64>),
    Classical(ProbTable),
}

#[derive(Clone, Debug)]
pub struct DensityState {
    dims: Vec<usize>,
    repr: Repr,
    symmetric: bool,
}

/// View of a multipartite index space as (selected subsystems, the rest).
///
/// `global[rest * sel_dim + sel]` is the full basis index whose digits on the
/// selected subsystems (in the given order) encode `sel` and whose remaining
/// digits (in ascending subsystem order) encode `rest`.
pub(crate) struct Bipartition {
    pub sel_dim: usize,
    pub rest_dim: usize,
    pub global: Vec<usize>,
}

impl Bipartition {
    pub fn new(dims: &[usize], selected: &[usize]) -> Self {
        let n = dims.len();
        let mut is_sel = vec![false; n];
        for &s in selected {
            is_sel[s] = true;
        }
        let sel_dim: usize = selected.iter().map(|&s| dims[s]).product();
        let rest: Vec<usize> = (0..n).filter(|&i| !is_sel[i]).collect();
        let rest_dim: usize = rest.iter().map(|&i| dims[i]).product();
        let total = sel_dim * rest_dim;

        let mut global = vec![0usize; total];
        let mut digits = vec![0usize; n];
        for g in 0..total {
            let sel_idx = selected.iter().fold(0, |acc, &s| acc * dims[s] + digits[s]);
            let rest_idx = rest.iter().fold(0, |acc, &r| acc * dims[r] + digits[r]);
            global[rest_idx * sel_dim + sel_idx] = g;
            // odometer, last subsystem fastest
            for pos in (0..n).rev() {
                digits[pos] += 1;
                if digits[pos] < dims[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
        Bipartition { sel_dim, rest_dim, global }
    }

    #[inline]
    pub fn index(&self, rest: usize, sel: usize) -> usize {
        self.global[rest * self.sel_dim + sel]
    }
}

/// Eigenvalues of a Hermitian matrix (the matrix is symmetrized first).
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(herm, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("Hermitian eigendecomposition did not converge".into()))?;
    Ok(eig.eigenvalues.iter().copied().collect())
}

/// Shannon entropy in bits of a list of probabilities / eigenvalues, with
/// values below [`EIG_CLIP`] treated as zero.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values
        .into_iter()
        .filter(|&p| p > EIG_CLIP)
        .map(|p| -p * p.log2())
        .sum()
}

fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Validation("a state needs at least one subsystem".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Validation(format!("subsystem dimension {d} is below 2")));
    }
    Ok(())
}

fn check_index_set(n: usize, idx: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return arg(format!("repeated subsystem index in {idx:?}"));
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
        return arg(format!("subsystem index {bad} out of range for {n} subsystems"));
    }
    Ok(sorted)
}

impl DensityState {
    /// Validated dense state.
    pub fn from_density_matrix(dims: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        validate_dims(&dims)?;
        let dim = checked_dim(&dims)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Validation(format!(
                "matrix is {}x{} but dims {dims:?} require {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let s = DensityState { dims, repr: Repr::Dense(matrix), symmetric: false };
        s.validate()?;
        Ok(s)
    }

    /// Validated pure state from an amplitude vector.
    pub fn from_amplitudes(dims: Vec<usize>, amplitudes: DVector<C64>) -> Result<Self> {
        validate_dims(&dims)?;
        let dim = checked_dim(&dims)?;
        if amplitudes.len() != dim {
            return Err(Error::Validation(format!(
                "{} amplitudes given but dims {dims:?} require {dim}",
                amplitudes.len()
            )));
        }
        let s = DensityState { dims, repr: Repr::Pure(amplitudes), symmetric: false };
        s.validate()?;
        Ok(s)
    }

    /// Validated classical state (diagonal density matrix).
    pub fn from_probabilities(dims: Vec<usize>, table: ProbTable) -> Result<Self> {
        validate_dims(&dims)?;
        if let Some(d) = dims.iter().find(|&&d| d > 256) {
            return Err(Error::Validation(format!(
                "classical subsystems are limited to 256 levels, got {d}"
            )));
        }
        let s = DensityState { dims, repr: Repr::Classical(table), symmetric: false };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, repr: Repr) -> Self {
        DensityState { dims, repr, symmetric: false }
    }

    pub(crate) fn with_symmetric(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of subsystems.
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_pure_repr(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.repr, Repr::Classical(_))
    }

    /// Whether a constructor marked the state as invariant under subsystem
    /// permutations.
    pub fn is_flagged_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Checks every validity invariant of the current representation.
    pub fn validate(&self) -> Result<()> {
        match &self.repr {
            Repr::Dense(m) => {
                let herm_err = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
                if herm_err > HERMITIAN_TOL {
                    return Err(Error::Validation(format!(
                        "matrix is not Hermitian (max |M - M^dag| = {herm_err:e})"
                    )));
                }
                let tr = m.trace();
                if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
                    return Err(Error::Validation(format!("trace is {tr}, expected 1")));
                }
                let min_eig = hermitian_eigenvalues(m)?.into_iter().fold(f64::INFINITY, f64::min);
                if min_eig < -PSD_TOL {
                    return Err(Error::Validation(format!(
                        "matrix is not positive semidefinite (min eigenvalue {min_eig:e})"
                    )));
                }
            }
            Repr::Pure(v) => {
                let norm = v.norm();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(Error::Validation(format!("amplitude vector has norm {norm}")));
                }
            }
            Repr::Classical(table) => {
                let n = self.dims.len();
                let mut sum = 0.0;
                for (key, &p) in table {
                    if key.len() != n {
                        return Err(Error::Validation(format!(
                            "digit string of length {} for {n} subsystems",
                            key.len()
                        )));
                    }
                    if let Some((i, &digit)) =
                        key.iter().enumerate().find(|&(i, &dg)| dg as usize >= self.dims[i])
                    {
                        return Err(Error::Validation(format!(
                            "digit {digit} at position {i} exceeds radix {}",
                            self.dims[i]
                        )));
                    }
                    if !(p >= 0.0) {
                        return Err(Error::Validation(format!("negative probability {p}")));
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > NORM_TOL {
                    return Err(Error::Validation(format!("probabilities sum to {sum}")));
                }
            }
        }
        Ok(())
    }

    /// Dense density matrix, materialized if needed.
    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        match &self.repr {
            Repr::Dense(m) => Ok(m.clone()),
            Repr::Pure(v) => Ok(v * v.adjoint()),
            Repr::Classical(table) => {
                let dim = checked_dim(&self.dims)?;
                let mut m = DMatrix::zeros(dim, dim);
                for (key, &p) in table {
                    let i = digits_to_index(&self.dims, key);
                    m[(i, i)] = C64::new(p, 0.0);
                }
                Ok(m)
            }
        }
    }

    /// Tensor product `self ⊗ other`. Pure and classical representations
    /// are preserved when both factors share them.
    pub fn tensor(&self, other: &DensityState) -> Result<DensityState> {
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Classical(a), Repr::Classical(b)) => {
                let mut table = ProbTable::new();
                for (ka, &pa) in a {
                    for (kb, &pb) in b {
                        let mut key = ka.clone();
                        key.extend_from_slice(kb);
                        table.insert(key, pa * pb);
                    }
                }
                Repr::Classical(table)
            }
            (Repr::Pure(a), Repr::Pure(b)) => {
                checked_dim(&dims)?;
                Repr::Pure(a.kronecker(b))
            }
            _ => {
                checked_dim(&dims)?;
                Repr::Dense(self.to_matrix()?.kronecker(&other.to_matrix()?))
            }
        };
        Ok(DensityState { dims, repr, symmetric: false })
    }

    /// Reduced state on `keep` (any order; the result lists the kept
    /// subsystems in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityState> {
        if keep.is_empty() {
            return arg("partial trace needs a nonempty keep-set");
        }
        let keep = check_index_set(self.n(), keep)?;
        if keep.len() == self.n() {
            return Ok(self.clone());
        }
        let dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        let repr = match &self.repr {
            Repr::Classical(table) => Repr::Classical(marginal_table(table, &keep)),
            Repr::Pure(v) => Repr::Dense(pure_marginal(&self.dims, v, &keep).0),
            Repr::Dense(m) => Repr::Dense(dense_marginal(&self.dims, m, &keep)),
        };
        Ok(DensityState { dims, repr, symmetric: self.symmetric })
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        match &self.repr {
            Repr::Pure(_) => Ok(0.0),
            Repr::Classical(table) => Ok(entropy_bits(table.values().copied())),
            Repr::Dense(m) => Ok(entropy_bits(hermitian_eigenvalues(m)?)),
        }
    }

    /// Entropy of the marginal on `subset` without building more than the
    /// smallest matrix needed.
    pub fn subset_entropy(&self, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() {
            return Ok(0.0);
        }
        let subset = check_index_set(self.n(), subset)?;
        if subset.len() == self.n() {
            return self.entropy();
        }
        match &self.repr {
            Repr::Classical(table) => {
                Ok(entropy_bits(marginal_table(table, &subset).values().copied()))
            }
            Repr::Pure(v) => {
                // the two Schmidt sides share their nonzero spectrum
                let (sub, rest) = (
                    subset.iter().map(|&i| self.dims[i]).product::<usize>(),
                    self.dims.iter().product::<usize>()
                        / subset.iter().map(|&i| self.dims[i]).product::<usize>(),
                );
                let side: Vec<usize> = if sub <= rest {
                    subset
                } else {
                    (0..self.n()).filter(|i| !subset.contains(i)).collect()
                };
                let (m, _) = pure_marginal(&self.dims, v, &side);
                Ok(entropy_bits(hermitian_eigenvalues(&m)?))
            }
            Repr::Dense(m) => {
                let reduced = dense_marginal(&self.dims, m, &subset);
                Ok(entropy_bits(hermitian_eigenvalues(&reduced)?))
            }
        }
    }

    /// Replaces subsystem `index` by a cluster with dimensions `split`
    /// (`Π split == dims[index]`). The operator itself is unchanged.
    pub fn refine_subsystem(&self, index: usize, split: &[usize]) -> Result<DensityState> {
        if index >= self.n() {
            return arg(format!("subsystem index {index} out of range"));
        }
        if split.is_empty() || split.iter().any(|&d| d < 2) {
            return arg(format!("invalid split {split:?}"));
        }
        if split.iter().product::<usize>() != self.dims[index] {
            return arg(format!(
                "split {split:?} does not multiply to dimension {}",
                self.dims[index]
            ));
        }
        let mut dims = self.dims[..index].to_vec();
        dims.extend_from_slice(split);
        dims.extend_from_slice(&self.dims[index + 1..]);
        let repr = match &self.repr {
            Repr::Classical(table) => Repr::Classical(
                table
                    .iter()
                    .map(|(key, &p)| {
                        let mut k = key[..index].to_vec();
                        k.extend(index_to_digits(split, key[index] as usize));
                        k.extend_from_slice(&key[index + 1..]);
                        (k, p)
                    })
                    .collect(),
            ),
            other => other.clone(),
        };
        Ok(DensityState { dims, repr, symmetric: false })
    }

    /// Merges the `count` consecutive subsystems starting at `start` into one.
    /// Inverse of [`refine_subsystem`](Self::refine_subsystem).
    pub fn merge_subsystems(&self, start: usize, count: usize) -> Result<DensityState> {
        if count == 0 || start + count > self.n() {
            return arg(format!("cannot merge {count} subsystems from index {start}"));
        }
        let group = &self.dims[start..start + count];
        let merged: usize = group.iter().product();
        if self.is_classical() && merged > 256 {
            return arg("merged classical subsystem would exceed 256 levels");
        }
        let mut dims = self.dims[..start].to_vec();
        dims.push(merged);
        dims.extend_from_slice(&self.dims[start + count..]);
        let repr = match &self.repr {
            Repr::Classical(table) => Repr::Classical(
                table
                    .iter()
                    .map(|(key, &p)| {
                        let mut k = key[..start].to_vec();
                        k.push(digits_to_index(group, &key[start..start + count]) as u8);
                        k.extend_from_slice(&key[start + count..]);
                        (k, p)
                    })
                    .collect(),
            ),
            other => other.clone(),
        };
        Ok(DensityState { dims, repr, symmetric: false })
    }

    /// Reorders subsystems: position `j` of the result holds subsystem
    /// `perm[j]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<DensityState> {
        let n = self.n();
        if perm.len() != n || check_index_set(n, perm).is_err() {
            return arg(format!("{perm:?} is not a permutation of {n} subsystems"));
        }
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let repr = match &self.repr {
            Repr::Classical(table) => Repr::Classical(
                table
                    .iter()
                    .map(|(key, &p)| (perm.iter().map(|&q| key[q]).collect(), p))
                    .collect(),
            ),
            Repr::Pure(v) => {
                let map = permutation_map(&self.dims, perm);
                let mut out = DVector::zeros(v.len());
                for (old, &new) in map.iter().enumerate() {
                    out[new] = v[old];
                }
                Repr::Pure(out)
            }
            Repr::Dense(m) => {
                let map = permutation_map(&self.dims, perm);
                let dim = m.nrows();
                let mut out = DMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        out[(map[i], map[j])] = m[(i, j)];
                    }
                }
                Repr::Dense(out)
            }
        };
        Ok(DensityState { dims, repr, symmetric: self.symmetric })
    }

    /// True when the state is flagged symmetric, or is unchanged (within
    /// 1e-10) by the transposition (1 2) and the cycle (1 … N), which
    /// together generate the symmetric group.
    pub fn is_permutation_invariant(&self) -> bool {
        if self.symmetric {
            return true;
        }
        let n = self.n();
        if n <= 1 {
            return true;
        }
        if self.dims.iter().any(|&d| d != self.dims[0]) {
            return false;
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
        [swap, cycle].iter().all(|perm| {
            self.permute(perm)
                .and_then(|p| self.raw_diff(&p))
                .map(|d| d <= 1e-10)
                .unwrap_or(false)
        })
    }

    // Representation-level difference; pure vectors are compared as vectors.
    fn raw_diff(&self, other: &DensityState) -> Result<f64> {
        match (&self.repr, &other.repr) {
            (Repr::Pure(a), Repr::Pure(b)) => Ok((a - b).camax()),
            _ => self.max_abs_diff(other),
        }
    }

    /// Largest entrywise modulus of the difference of the density matrices.
    pub fn max_abs_diff(&self, other: &DensityState) -> Result<f64> {
        if self.dims != other.dims {
            return arg(format!("dims {:?} and {:?} differ", self.dims, other.dims));
        }
        if let (Repr::Classical(a), Repr::Classical(b)) = (&self.repr, &other.repr) {
            let mut worst: f64 = 0.0;
            for (k, &p) in a {
                worst = worst.max((p - b.get(k).copied().unwrap_or(0.0)).abs());
            }
            for (k, &q) in b {
                if !a.contains_key(k) {
                    worst = worst.max(q.abs());
                }
            }
            return Ok(worst);
        }
        let diff = self.to_matrix()? - other.to_matrix()?;
        Ok(diff.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

/// Relative entropy `S(rho‖sigma) = −S(rho) − Tr(rho log₂ sigma)` in bits;
/// `+∞` when `rho` carries weight above [`SUPPORT_TOL`] outside the support
/// of `sigma`.
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    if rho.dims != sigma.dims {
        return arg(format!(
            "relative entropy needs equal dims, got {:?} and {:?}",
            rho.dims, sigma.dims
        ));
    }
    let value = if let (Repr::Classical(p), Repr::Classical(q)) = (&rho.repr, &sigma.repr) {
        let mut acc = 0.0;
        for (k, &pk) in p {
            let qk = q.get(k).copied().unwrap_or(0.0);
            if qk <= EIG_CLIP {
                if pk > SUPPORT_TOL {
                    return Ok(f64::INFINITY);
                }
                continue;
            }
            if pk > EIG_CLIP {
                acc += pk * (pk.log2() - qk.log2());
            }
        }
        acc
    } else {
        let r = rho.to_matrix()?;
        let s = sigma.to_matrix()?;
        let herm = (&s + s.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::try_new(herm, f64::EPSILON, 0)
            .ok_or_else(|| Error::Numeric("eigendecomposition of sigma failed".into()))?;
        let mut cross = 0.0;
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(i);
            let weight = (v.adjoint() * &r * v)[(0, 0)].re;
            if lambda <= EIG_CLIP {
                if weight > SUPPORT_TOL {
                    return Ok(f64::INFINITY);
                }
                continue;
            }
            cross += weight * lambda.log2();
        }
        -rho.entropy()? - cross
    };
    // non-negative in exact arithmetic
    Ok(if value < 0.0 && value > -SUPPORT_TOL { 0.0 } else { value })
}

pub fn tensor_product(a: &DensityState, b: &DensityState) -> Result<DensityState> {
    a.tensor(b)
}

pub fn partial_trace(s: &DensityState, keep: &[usize]) -> Result<DensityState> {
    s.partial_trace(keep)
}

pub fn vn_entropy(s: &DensityState) -> Result<f64> {
    s.entropy()
}

pub fn refine_subsystem(s: &DensityState, index: usize, split: &[usize]) -> Result<DensityState> {
    s.refine_subsystem(index, split)
}

/// Big-endian mixed-radix value of `digits`.
pub(crate) fn digits_to_index(dims: &[usize], digits: &[u8]) -> usize {
    dims.iter().zip(digits).fold(0, |acc, (&d, &x)| acc * d + x as usize)
}

pub(crate) fn index_to_digits(dims: &[usize], mut index: usize) -> Vec<u8> {
    let mut digits = vec![0u8; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = (index % d) as u8;
        index /= d;
    }
    digits
}

fn marginal_table(table: &ProbTable, keep: &[usize]) -> ProbTable {
    let mut out = ProbTable::new();
    for (key, &p) in table {
        let sub: Vec<u8> = keep.iter().map(|&i| key[i]).collect();
        *out.entry(sub).or_insert(0.0) += p;
    }
    out
}

/// Reduced matrix on `keep` of a pure state, plus the reshaped amplitudes.
fn pure_marginal(dims: &[usize], v: &DVector<C64>, keep: &[usize]) -> (DMatrix<C64>, DMatrix<C64>) {
    let bp = Bipartition::new(dims, keep);
    let a = DMatrix::from_fn(bp.sel_dim, bp.rest_dim, |t, r| v[bp.index(r, t)]);
    (&a * a.adjoint(), a)
}

fn dense_marginal(dims: &[usize], m: &DMatrix<C64>, keep: &[usize]) -> DMatrix<C64> {
    let bp = Bipartition::new(dims, keep);
    DMatrix::from_fn(bp.sel_dim, bp.sel_dim, |t1, t2| {
        (0..bp.rest_dim).map(|r| m[(bp.index(r, t1), bp.index(r, t2))]).sum()
    })
}

/// Maps each old basis index to its index after permuting subsystems.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    (0..total)
        .map(|old| {
            let digits = index_to_digits(dims, old);
            let new_digits: Vec<u8> = perm.iter().map(|&p| digits[p]).collect();
            digits_to_index(&new_dims, &new_digits)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dims: &[usize], index: usize) -> DensityState {
        let dim = dims.iter().product();
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        DensityState::from_amplitudes(dims.to_vec(), v).unwrap()
    }

    fn bell() -> DensityState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
        ]);
        DensityState::from_amplitudes(vec![2, 2], v).unwrap()
    }

    fn mixed_qubit() -> DensityState {
        DensityState::from_density_matrix(vec![2], DMatrix::identity(2, 2) * C64::new(0.5, 0.0))
            .unwrap()
    }

    #[test]
    fn mixed_times_mixed_is_identity_over_four() {
        let s = mixed_qubit().tensor(&mixed_qubit()).unwrap();
        assert_eq!(s.dims(), &[2, 2]);
        let expected = DMatrix::identity(4, 4) * C64::new(0.25, 0.0);
        assert!((s.to_matrix().unwrap() - expected).camax() < 1e-15);
    }

    #[test]
    fn basis_product() {
        let s = basis(&[2], 0).tensor(&basis(&[2], 1)).unwrap();
        assert!(s.max_abs_diff(&basis(&[2, 2], 1)).unwrap() < 1e-15);
        assert!(s.is_pure_repr());
    }

    #[test]
    fn capacity_error_on_large_product() {
        let big = DensityState::from_density_matrix(
            vec![128],
            DMatrix::identity(128, 128) * C64::new(1.0 / 128.0, 0.0),
        )
        .unwrap();
        assert!(matches!(big.tensor(&big), Err(Error::Capacity(_))));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let m = bell().partial_trace(&[0]).unwrap();
        assert!(m.max_abs_diff(&mixed_qubit()).unwrap() < 1e-15);
        assert!((m.entropy().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_keep_is_an_argument_error() {
        assert!(matches!(bell().partial_trace(&[]), Err(Error::Argument(_))));
    }

    #[test]
    fn entropies() {
        assert_eq!(bell().entropy().unwrap(), 0.0);
        assert!((mixed_qubit().entropy().unwrap() - 1.0).abs() < 1e-12);
        let dense = DensityState::from_density_matrix(vec![2, 2], bell().to_matrix().unwrap()).unwrap();
        assert!(dense.entropy().unwrap().abs() < 1e-10);
        assert!((dense.subset_entropy(&[1]).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn relative_entropy_cases() {
        let b = bell();
        assert!(relative_entropy(&b, &b).unwrap().abs() < 1e-9);
        let prod = b.partial_trace(&[0]).unwrap().tensor(&b.partial_trace(&[1]).unwrap()).unwrap();
        assert!((relative_entropy(&b, &prod).unwrap() - 2.0).abs() < 1e-10);
        let r = relative_entropy(&basis(&[2], 0), &basis(&[2], 1)).unwrap();
        assert!(r.is_infinite() && r > 0.0);
        assert!(matches!(relative_entropy(&b, &mixed_qubit()), Err(Error::Argument(_))));
    }

    #[test]
    fn classical_relative_entropy_disjoint_support() {
        let p: ProbTable = [(vec![0u8], 1.0)].into_iter().collect();
        let q: ProbTable = [(vec![1u8], 1.0)].into_iter().collect();
        let a = DensityState::from_probabilities(vec![2], p).unwrap();
        let b = DensityState::from_probabilities(vec![2], q).unwrap();
        assert_eq!(relative_entropy(&a, &b).unwrap(), f64::INFINITY);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let not_unit = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(DensityState::from_amplitudes(vec![2], not_unit).is_err());
        let mut m = DMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityState::from_density_matrix(vec![2], m).is_err());
        let neg = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(DensityState::from_density_matrix(vec![2], neg).is_err());
        let bad: ProbTable = [(vec![0u8, 2], 1.0)].into_iter().collect();
        assert!(DensityState::from_probabilities(vec![2, 2], bad).is_err());
        assert!(DensityState::from_amplitudes(vec![1], DVector::from_element(1, C64::new(1.0, 0.0))).is_err());
    }

    #[test]
    fn refine_and_merge() {
        let qudit = DensityState::from_amplitudes(vec![4], match bell().repr() {
            Repr::Pure(v) => v.clone(),
            _ => unreachable!(),
        })
        .unwrap();
        let r = qudit.refine_subsystem(0, &[2, 2]).unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert_eq!(r.repr(), bell().repr());

        let s = mixed_qubit()
            .tensor(&DensityState::from_density_matrix(vec![4], DMatrix::identity(4, 4) * C64::new(0.25, 0.0)).unwrap())
            .unwrap();
        assert_eq!(s.refine_subsystem(1, &[2, 2]).unwrap().dims(), &[2, 2, 2]);
        assert!(matches!(s.refine_subsystem(1, &[2, 3]), Err(Error::Argument(_))));
    }

    #[test]
    fn classical_refine_merge_roundtrip() {
        let t: ProbTable = [(vec![3u8, 1], 0.25), (vec![0u8, 0], 0.75)].into_iter().collect();
        let s = DensityState::from_probabilities(vec![4, 2], t).unwrap();
        let r = s.refine_subsystem(0, &[2, 2]).unwrap();
        assert!(r.validate().is_ok());
        assert_eq!(r.to_matrix().unwrap(), s.to_matrix().unwrap());
        let back = r.merge_subsystems(0, 2).unwrap();
        assert_eq!(back.repr(), s.repr());
    }

    #[test]
    fn bipartition_covers_every_index() {
        let bp = Bipartition::new(&[2, 3, 2], &[2, 0]);
        let mut seen = bp.global.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
        // digits (x0, x1, x2) = (1, 2, 0): sel order (2, 0) gives 0*2+1 = 1, rest = 2
        assert_eq!(bp.index(2, 1), 6 + 2 * 2);
    }

    #[test]
    fn permutation_detection() {
        assert!(bell().is_permutation_invariant());
        let asym = basis(&[2, 2], 1);
        assert!(!asym.is_permutation_invariant());
    }
}
