//! Spin-1/2 operators, Bell and Werner states, twirling and fidelities.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use num_complex::Complex64;

use crate::numerics::{kron, partial_trace, DenseOperator, QuantumState};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance on the weight of a state handed to [`fidelity_to_bell`].
pub const FIDELITY_NORM_TOL: f64 = 1e-9;

/// `S^x, S^y, S^z` for a single spin-1/2 (half the Pauli matrices), written
/// in the basis `(|0⟩, |1⟩) = (|↓⟩, |↑⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSet {
    pub sx: DenseOperator,
    pub sy: DenseOperator,
    pub sz: DenseOperator,
}

impl SpinOperatorSet {
    pub fn new() -> Self {
        let h = |re: f64, im: f64| Complex64::new(re, im);
        // S^+ |0⟩ = |1⟩, so S^+ has its only entry at (row 1, column 0)
        let sx = DenseOperator::from_entries(1, vec![ZERO, h(0.5, 0.0), h(0.5, 0.0), ZERO]);
        let sy = DenseOperator::from_entries(1, vec![ZERO, h(0.0, 0.5), h(0.0, -0.5), ZERO]);
        let sz = DenseOperator::diagonal(1, &[-0.5, 0.5]);
        Self {
            sx: sx.expect("2x2"),
            sy: sy.expect("2x2"),
            sz: sz.expect("2x2"),
        }
    }

    /// The three operators in `x, y, z` order.
    pub fn components(&self) -> [&DenseOperator; 3] {
        [&self.sx, &self.sy, &self.sz]
    }
}

impl Default for SpinOperatorSet {
    fn default() -> Self {
        Self::new()
    }
}

/// The four Bell states. The bit form `(k, l)` indexes them as
/// `Ψ₀₀ = Φ⁺, Ψ₀₁ = Φ⁻, Ψ₁₀ = Ψ⁺, Ψ₁₁ = Ψ⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    /// `(k, l)`: `k` flags the Ψ family, `l` the relative minus sign.
    pub fn bits(self) -> (u8, u8) {
        match self {
            BellLabel::PhiPlus => (0, 0),
            BellLabel::PhiMinus => (0, 1),
            BellLabel::PsiPlus => (1, 0),
            BellLabel::PsiMinus => (1, 1),
        }
    }

    /// Inverse of [`BellLabel::bits`]; only the lowest bit of each argument is used.
    pub fn from_bits(k: u8, l: u8) -> Self {
        match (k & 1, l & 1) {
            (0, 0) => BellLabel::PhiPlus,
            (0, 1) => BellLabel::PhiMinus,
            (1, 0) => BellLabel::PsiPlus,
            _ => BellLabel::PsiMinus,
        }
    }

    /// Position in [`BellLabel::ALL`], equal to `2k + l`.
    pub fn index(self) -> usize {
        let (k, l) = self.bits();
        2 * k as usize + l as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index & 3]
    }

    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            BellLabel::PhiPlus => [a, ZERO, ZERO, a],
            BellLabel::PhiMinus => [a, ZERO, ZERO, -a],
            BellLabel::PsiPlus => [ZERO, a, a, ZERO],
            BellLabel::PsiMinus => [ZERO, a, -a, ZERO],
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellLabel::PhiPlus => "Φ+",
            BellLabel::PhiMinus => "Φ-",
            BellLabel::PsiPlus => "Ψ+",
            BellLabel::PsiMinus => "Ψ-",
        })
    }
}

/// Places a single-spin operator at `site` (1-based) of an `n_spins` register.
pub fn embed(op: &DenseOperator, site: usize, n_spins: usize) -> Result<DenseOperator> {
    embed_many(&[(op, site)], n_spins)
}

/// Tensor product with the given single-spin operators at their sites and
/// identities everywhere else.
pub fn embed_many(ops: &[(&DenseOperator, usize)], n_spins: usize) -> Result<DenseOperator> {
    for &(op, site) in ops {
        if op.spins() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: op.dim(),
            });
        }
        if site == 0 || site > n_spins {
            return Err(Error::SiteOutOfRange { site, n_spins });
        }
    }
    for (i, &(_, a)) in ops.iter().enumerate() {
        if ops[i + 1..].iter().any(|&(_, b)| a == b) {
            return Err(Error::DuplicateSite(a));
        }
    }
    let identity = DenseOperator::identity(1);
    let mut out = DenseOperator::identity(0);
    for site in 1..=n_spins {
        let factor = ops
            .iter()
            .find(|&&(_, s)| s == site)
            .map_or(&identity, |&(op, _)| op);
        out = kron(&out, factor)?;
    }
    Ok(out)
}

pub fn bell_state(label: BellLabel) -> QuantumState {
    QuantumState::Pure {
        spins: 2,
        amplitudes: label.amplitudes().to_vec(),
    }
}

/// Bell-diagonal two-spin state `Σ_b weights[b] |b⟩⟨b|` (weights indexed as
/// [`BellLabel::ALL`]).
pub fn bell_diagonal(weights: [f64; 4]) -> QuantumState {
    let mut rho = DenseOperator::zeros(2);
    for label in BellLabel::ALL {
        let v = label.amplitudes();
        let w = weights[label.index()];
        for i in 0..4 {
            for j in 0..4 {
                let z = rho.get(i, j) + v[i] * v[j].conj() * w;
                rho.set(i, j, z);
            }
        }
    }
    QuantumState::Mixed(rho)
}

/// `F|Φ⁺⟩⟨Φ⁺| + (1-F)/3 (|Φ⁻⟩⟨Φ⁻| + |Ψ⁺⟩⟨Ψ⁺| + |Ψ⁻⟩⟨Ψ⁻|)`.
pub fn werner_state(fidelity: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::InvalidParameter {
            name: "F",
            value: fidelity,
        });
    }
    let minor = (1.0 - fidelity) / 3.0;
    Ok(bell_diagonal([fidelity, minor, minor, minor]))
}

/// `⟨b|ρ|b⟩` for every Bell state `b` of a two-spin state, without
/// normalization.
pub fn bell_weights(state: &QuantumState) -> Result<[f64; 4]> {
    if state.spins() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    let mut w = [0.0; 4];
    for label in BellLabel::ALL {
        w[label.index()] = state.expectation_of_projector(&label.amplitudes())?;
    }
    Ok(w)
}

/// Deterministic twirl: dephase in the Bell basis, keep the Φ⁺ weight and
/// spread the remaining weight evenly over Φ⁻, Ψ⁺ and Ψ⁻.
///
/// This is the average over random bilateral rotations, so the output is a
/// Werner state (scaled by the input weight) with unchanged Φ⁺ fidelity.
pub fn twirl(state: &QuantumState) -> Result<QuantumState> {
    let w = bell_weights(state)?;
    let minor = (w[1] + w[2] + w[3]) / 3.0;
    Ok(bell_diagonal([w[0], minor, minor, minor]))
}

/// `⟨b|ρ|b⟩` for a normalized two-spin state.
pub fn fidelity_to_bell(state: &QuantumState, label: BellLabel) -> Result<f64> {
    if state.spins() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    let weight = state.weight();
    if (weight - 1.0).abs() > FIDELITY_NORM_TOL {
        return Err(Error::NotNormalized { weight });
    }
    state.expectation_of_projector(&label.amplitudes())
}

/// Like [`fidelity_to_bell`] but rescales unnormalized input first.
pub fn normalized_fidelity_to_bell(state: &QuantumState, label: BellLabel) -> Result<f64> {
    fidelity_to_bell(&state.normalized()?, label)
}

/// True when both single-spin marginals of a pure two-spin state equal `I/2`
/// to within `tol` (max-abs entry).
pub fn is_maximally_entangled(state: &QuantumState, tol: f64) -> Result<bool> {
    if !state.is_pure() {
        return Err(Error::MixedState);
    }
    if state.spins() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    let weight = state.weight();
    if (weight - 1.0).abs() > FIDELITY_NORM_TOL {
        return Err(Error::NotNormalized { weight });
    }
    let half = &DenseOperator::identity(1) * 0.5;
    for site in [1, 2] {
        let marginal = partial_trace(state, &[site])?.density();
        if marginal.max_abs_diff(&half) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kronecker product of the given Bell vectors, pair 1 first.
pub fn bell_product_vector(labels: &[BellLabel]) -> Vec<Complex64> {
    labels
        .iter()
        .fold(vec![Complex64::new(1.0, 0.0)], |acc, l| {
            let v = l.amplitudes();
            acc.iter()
                .flat_map(|&a| v.iter().map(move |&b| a * b))
                .collect()
        })
}
