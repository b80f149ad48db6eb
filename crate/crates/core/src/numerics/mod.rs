//! Dense complex linear algebra on `n`-spin Hilbert spaces.

mod eigen;
mod operator;
mod state;

pub use eigen::{hermitian_eig, propagator, Spectrum};
pub use operator::{kron, kron_capped, DenseOperator};
pub use state::{partial_trace, QuantumState};

use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest spin count any operator may span unless a caller asks otherwise.
pub const DEFAULT_MAX_SPINS: usize = 10;

/// Tolerance on `|h_ij - conj(h_ji)|` for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on the max-abs entry of `U U† - I`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const EIGEN_TOL: f64 = 1e-13;
/// Tolerance on the norm or trace of a normalized state.
pub const NORM_TOL: f64 = 1e-12;

/// Bit mask of `site` (1-based, site 1 is the most significant bit).
#[inline]
pub(crate) fn site_mask(site: usize, n_spins: usize) -> usize {
    1 << (n_spins - site)
}

/// Validates a site list and returns the bit mask of every site, in order.
pub(crate) fn site_masks(sites: &[usize], n_spins: usize) -> Result<Vec<usize>> {
    let mut seen = 0usize;
    sites
        .iter()
        .map(|&site| {
            if site == 0 || site > n_spins {
                return Err(Error::SiteOutOfRange { site, n_spins });
            }
            let mask = site_mask(site, n_spins);
            if seen & mask != 0 {
                return Err(Error::DuplicateSite(site));
            }
            seen |= mask;
            Ok(mask)
        })
        .collect()
}

/// For every local index `r` over the listed sites (first site = most
/// significant bit of `r`), the corresponding global index offset.
pub(crate) fn scatter_offsets(masks: &[usize]) -> Vec<usize> {
    let k = masks.len();
    (0..1usize << k)
        .map(|r| {
            masks
                .iter()
                .enumerate()
                .filter(|(pos, _)| r & (1 << (k - 1 - pos)) != 0)
                .fold(0, |acc, (_, &m)| acc | m)
        })
        .collect()
}

/// Sites of `1..=n_spins` not contained in `sites`, ascending.
pub(crate) fn complement(sites: &[usize], n_spins: usize) -> Vec<usize> {
    (1..=n_spins).filter(|s| !sites.contains(s)).collect()
}
