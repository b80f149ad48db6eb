//! Unitary evolution, projective `S_z` measurements and Bell-basis dephasing.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numerics::{
    complement, hermitian_eig, scatter_offsets, site_masks, DenseOperator, QuantumState,
};
use crate::spin::{bell_product_vector, BellLabel};
use crate::{Error, Result};

/// Branches with a Born probability below this are dropped.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

/// One outcome of an `S_z` measurement on `sites`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub sites: Vec<usize>,
    /// `0 = |↓⟩`, `1 = |↑⟩`, aligned with `sites`.
    pub outcomes: Vec<u8>,
    pub probability: f64,
    /// Normalized state of the unmeasured sites, in ascending site order.
    pub post_state: QuantumState,
}

/// `exp(-iht)` applied to `state`.
pub fn evolve(state: &QuantumState, h: &DenseOperator, t: f64) -> Result<QuantumState> {
    if h.spins() != state.spins() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: h.dim(),
        });
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let u = hermitian_eig(h)?.propagator(t);
    apply_unitary(state, &u)
}

/// `U|ψ⟩` or `U ρ U†`.
pub fn apply_unitary(state: &QuantumState, u: &DenseOperator) -> Result<QuantumState> {
    match state {
        QuantumState::Pure { spins, amplitudes } => Ok(QuantumState::Pure {
            spins: *spins,
            amplitudes: u.apply(amplitudes)?,
        }),
        QuantumState::Mixed(rho) => Ok(QuantumState::Mixed(u.conjugate(rho)?)),
    }
}

/// Unnormalized state of the unmeasured sites after projecting `sites` onto
/// `outcome`. Its weight is the Born probability of the outcome.
pub fn project_and_trace(
    state: &QuantumState,
    sites: &[usize],
    outcome: &[u8],
) -> Result<QuantumState> {
    if sites.len() != outcome.len() {
        return Err(Error::DimensionMismatch {
            expected: sites.len(),
            found: outcome.len(),
        });
    }
    let n = state.spins();
    let masks = site_masks(sites, n)?;
    let fixed = masks
        .iter()
        .zip(outcome)
        .filter(|(_, &bit)| bit != 0)
        .fold(0, |acc, (m, _)| acc | m);
    let rest = complement(sites, n);
    let rest_offsets = scatter_offsets(&site_masks(&rest, n)?);
    let k = rest.len();

    Ok(match state {
        QuantumState::Pure { amplitudes, .. } => QuantumState::Pure {
            spins: k,
            amplitudes: rest_offsets
                .iter()
                .map(|&r| amplitudes[r | fixed])
                .collect(),
        },
        QuantumState::Mixed(rho) => QuantumState::Mixed(DenseOperator::from_fn(k, |r, c| {
            rho.get(rest_offsets[r] | fixed, rest_offsets[c] | fixed)
        })),
    })
}

/// Every outcome of measuring `S_z` on `sites` with non-negligible
/// probability, in lexicographic outcome order.
pub fn measure_sz(state: &QuantumState, sites: &[usize]) -> Result<Vec<MeasurementRecord>> {
    site_masks(sites, state.spins())?;
    let total = state.weight();
    let m = sites.len();
    let mut records = Vec::new();
    for pattern in 0..1usize << m {
        let outcomes: Vec<u8> = (0..m)
            .map(|i| ((pattern >> (m - 1 - i)) & 1) as u8)
            .collect();
        let branch = project_and_trace(state, sites, &outcomes)?;
        let probability = branch.weight() / total;
        if probability < MIN_BRANCH_PROBABILITY {
            continue;
        }
        records.push(MeasurementRecord {
            sites: sites.to_vec(),
            outcomes,
            probability,
            post_state: branch.normalized()?,
        });
    }
    Ok(records)
}

/// Result of keeping only some outcome patterns of an `S_z` measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Postselection {
    /// Total probability of the accepted patterns.
    pub probability: f64,
    /// Probability of each accepted pattern, in the order given.
    pub branch_probabilities: Vec<f64>,
    /// Probability-weighted mixture of the accepted branches, normalized.
    pub state: QuantumState,
}

/// Measures `sites` and keeps the branches whose outcome is in `patterns`.
///
/// Returns `None` when the accepted patterns have (numerically) zero probability.
pub fn postselect(
    state: &QuantumState,
    sites: &[usize],
    patterns: &[&[u8]],
) -> Result<Option<Postselection>> {
    let total = state.weight();
    let mut accumulated: Option<DenseOperator> = None;
    let mut branch_probabilities = Vec::with_capacity(patterns.len());
    for pattern in patterns {
        let branch = project_and_trace(state, sites, pattern)?.density();
        branch_probabilities.push(branch.trace().re / total);
        match accumulated.as_mut() {
            Some(acc) => *acc += &branch,
            None => accumulated = Some(branch),
        }
    }
    let Some(acc) = accumulated else {
        return Err(Error::EmptySiteSet);
    };
    let probability = acc.trace().re / total;
    if probability < MIN_BRANCH_PROBABILITY {
        return Ok(None);
    }
    Ok(Some(Postselection {
        probability,
        branch_probabilities,
        state: QuantumState::Mixed(acc).normalized()?,
    }))
}

/// Diagonal of the state in the Bell-product basis of consecutive pairs
/// `(1,2), (3,4), …`.
///
/// Entry `Σ_j b_j 4^(k-j)` belongs to labels `(b_1, …, b_k)` with `b_j` the
/// [`BellLabel::index`] of pair `j`. The weights sum to the state's weight.
pub fn bell_dephase(state: &QuantumState) -> Result<Vec<f64>> {
    let n = state.spins();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::OddSpinCount(n));
    }
    let k = n / 2;
    let mut weights = vec![0.0; 1 << (2 * k)];
    let mut labels = vec![BellLabel::PhiPlus; k];
    for (idx, w) in weights.iter_mut().enumerate() {
        for (j, label) in labels.iter_mut().enumerate() {
            *label = BellLabel::from_index(idx >> (2 * (k - 1 - j)));
        }
        let v = bell_product_vector(&labels);
        *w = sparse_expectation(state, &v);
    }
    Ok(weights)
}

/// Unpacks a Bell-product index produced by [`bell_dephase`].
pub fn bell_product_labels(index: usize, n_pairs: usize) -> Vec<BellLabel> {
    (0..n_pairs)
        .map(|j| BellLabel::from_index(index >> (2 * (n_pairs - 1 - j))))
        .collect()
}

fn sparse_expectation(state: &QuantumState, v: &[Complex64]) -> f64 {
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i].norm_sqr() != 0.0).collect();
    match state {
        QuantumState::Pure { amplitudes, .. } => support
            .iter()
            .map(|&i| v[i].conj() * amplitudes[i])
            .sum::<Complex64>()
            .norm_sqr(),
        QuantumState::Mixed(rho) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for &i in &support {
                for &j in &support {
                    acc += v[i].conj() * rho.get(i, j) * v[j];
                }
            }
            acc.re
        }
    }
}
