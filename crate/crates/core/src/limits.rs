//! Process-wide capacity limits.
//!
//! Dense (and pure) states are capped by their total Hilbert-space dimension,
//! partition enumeration by the number of subsystems.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 4096;
pub const DEFAULT_MAX_ENUM_N: usize = 14;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);
static MAX_ENUM_N: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_ENUM_N);

pub fn max_dim() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

pub fn set_max_dim(dim: usize) {
    MAX_DIM.store(dim, Ordering::Relaxed);
}

pub fn max_enum_n() -> usize {
    MAX_ENUM_N.load(Ordering::Relaxed)
}

pub fn set_max_enum_n(n: usize) {
    MAX_ENUM_N.store(n, Ordering::Relaxed);
}

/// Product of `dims`, or a capacity error if it exceeds [`max_dim`].
pub(crate) fn checked_dim(dims: &[usize]) -> Result<usize> {
    let cap = max_dim();
    let mut total: usize = 1;
    for &d in dims {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= cap)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "total dimension of {dims:?} exceeds the configured maximum {cap}"
                ))
            })?;
    }
    Ok(total)
}

pub(crate) fn check_enum_n(n: usize) -> Result<()> {
    let cap = max_enum_n();
    if n > cap {
        return Err(Error::Capacity(format!(
            "partition enumeration over {n} subsystems exceeds the cap of {cap}"
        )));
    }
    Ok(())
}
