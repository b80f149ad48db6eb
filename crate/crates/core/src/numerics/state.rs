use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{complement, scatter_offsets, site_masks, DenseOperator, NORM_TOL};
use crate::{Error, Result};

/// A state of `spins` spin-1/2 particles, either as an amplitude vector or
/// as a density operator.
///
/// States are not forced to be normalized: a conditional state produced by
/// a projection carries the probability of that branch as its weight
/// (`Σ|ψ_i|²` or `tr ρ`).
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure {
        spins: usize,
        amplitudes: Vec<Complex64>,
    },
    Mixed(DenseOperator),
}

impl QuantumState {
    pub fn pure(spins: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << spins;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        Ok(QuantumState::Pure { spins, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(spins: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << spins];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        QuantumState::Pure { spins, amplitudes }
    }

    /// Maximally mixed state `I / 2^spins`.
    pub fn maximally_mixed(spins: usize) -> Self {
        let dim = (1usize << spins) as f64;
        QuantumState::Mixed(&DenseOperator::identity(spins) * (1.0 / dim))
    }

    pub fn spins(&self) -> usize {
        match self {
            QuantumState::Pure { spins, .. } => *spins,
            QuantumState::Mixed(rho) => rho.spins(),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.spins()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, QuantumState::Pure { .. })
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match self {
            QuantumState::Pure { amplitudes, .. } => Some(amplitudes),
            QuantumState::Mixed(_) => None,
        }
    }

    /// Probability mass carried by the state.
    pub fn weight(&self) -> f64 {
        match self {
            QuantumState::Pure { amplitudes, .. } => amplitudes.iter().map(|z| z.norm_sqr()).sum(),
            QuantumState::Mixed(rho) => rho.trace().re,
        }
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.weight() - 1.0).abs() <= tol
    }

    /// Density operator of the state (`|ψ⟩⟨ψ|` for pure states).
    pub fn density(&self) -> DenseOperator {
        match self {
            QuantumState::Pure { spins, amplitudes } => {
                DenseOperator::outer(*spins, amplitudes, amplitudes)
                    .expect("amplitude length matches spin count")
            }
            QuantumState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn into_mixed(self) -> Self {
        match self {
            QuantumState::Mixed(_) => self,
            pure => QuantumState::Mixed(pure.density()),
        }
    }

    /// Rescales to unit weight; fails when the weight is (numerically) zero.
    pub fn normalized(&self) -> Result<Self> {
        let w = self.weight();
        if w <= NORM_TOL {
            return Err(Error::Degenerate("state has zero weight"));
        }
        Ok(match self {
            QuantumState::Pure { spins, amplitudes } => {
                let s = 1.0 / w.sqrt();
                QuantumState::Pure {
                    spins: *spins,
                    amplitudes: amplitudes.iter().map(|z| z * s).collect(),
                }
            }
            QuantumState::Mixed(rho) => QuantumState::Mixed(rho * (1.0 / w)),
        })
    }

    /// `self ⊗ other`. Pure stays pure only when both factors are pure.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (
                QuantumState::Pure {
                    spins: sa,
                    amplitudes: a,
                },
                QuantumState::Pure {
                    spins: sb,
                    amplitudes: b,
                },
            ) => {
                let spins = sa + sb;
                if spins > super::DEFAULT_MAX_SPINS {
                    return Err(Error::Capacity {
                        spins,
                        max_spins: super::DEFAULT_MAX_SPINS,
                    });
                }
                let amplitudes = a
                    .iter()
                    .flat_map(|&x| b.iter().map(move |&y| x * y))
                    .collect();
                Ok(QuantumState::Pure { spins, amplitudes })
            }
            _ => Ok(QuantumState::Mixed(super::kron(
                &self.density(),
                &other.density(),
            )?)),
        }
    }

    /// `⟨φ|state|φ⟩` for a vector `φ` of matching dimension.
    pub fn expectation_of_projector(&self, phi: &[Complex64]) -> Result<f64> {
        if phi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: phi.len(),
            });
        }
        Ok(match self {
            QuantumState::Pure { amplitudes, .. } => amplitudes
                .iter()
                .zip(phi)
                .map(|(a, p)| p.conj() * a)
                .sum::<Complex64>()
                .norm_sqr(),
            QuantumState::Mixed(rho) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, pi) in phi.iter().enumerate() {
                    if pi.norm_sqr() == 0.0 {
                        continue;
                    }
                    let row = rho.row(i);
                    let inner: Complex64 = row.iter().zip(phi).map(|(r, pj)| r * pj).sum();
                    acc += pi.conj() * inner;
                }
                acc.re
            }
        })
    }
}

/// Traces out every site not in `keep_sites`.
///
/// The result is a density operator over the kept sites, in the order they
/// are listed (first listed site becomes site 1 of the result). The weight
/// of the input is preserved.
pub fn partial_trace(state: &QuantumState, keep_sites: &[usize]) -> Result<QuantumState> {
    if keep_sites.is_empty() {
        return Err(Error::EmptySiteSet);
    }
    let n = state.spins();
    let keep = scatter_offsets(&site_masks(keep_sites, n)?);
    let traced_sites = complement(keep_sites, n);
    let traced = scatter_offsets(&site_masks(&traced_sites, n)?);

    let k = keep_sites.len();
    let reduced = match state {
        QuantumState::Pure { amplitudes, .. } => DenseOperator::from_fn(k, |r, c| {
            traced
                .iter()
                .map(|&e| amplitudes[keep[r] | e] * amplitudes[keep[c] | e].conj())
                .sum()
        }),
        QuantumState::Mixed(rho) => DenseOperator::from_fn(k, |r, c| {
            traced
                .iter()
                .map(|&e| rho.get(keep[r] | e, keep[c] | e))
                .sum()
        }),
    };
    Ok(QuantumState::Mixed(reduced))
}
