//! Purification protocols driven by chain dynamics, plus BBPSSW as reference.
//!
//! * [`pure_filter`]: a partially entangled pure pair plus one ancilla spin.
//! * [`three_pair_protocol`]: three Werner pairs, two of them measured.
//! * [`two_pair_protocol`]: two Werner pairs, which never gains fidelity.
//! * [`bbpssw_reference`]: bilateral CNOT, coincidence post-selection, twirl.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{apply_unitary, postselect, project_and_trace, Postselection};
use crate::hamiltonian::{bilateral_hamiltonian, chain_hamiltonian, ChainLayout, CouplingSpec};
use crate::numerics::{hermitian_eig, DenseOperator, QuantumState, Spectrum};
use crate::spin::{fidelity_to_bell, twirl, werner_state, BellLabel};
use crate::{Error, Result};

/// Measurement time at which the three-pair protocol peaks: `Jt = 2π`.
pub const OPTIMAL_THREE_PAIR_TIME: f64 = 2.0 * PI;

/// Outcome patterns that herald a purified pair.
pub const ACCEPTED_PATTERNS: [[u8; 4]; 2] = [[0, 0, 1, 1], [1, 1, 0, 0]];
/// Outcome patterns that also raise the fidelity, but by less.
pub const REJECTED_PATTERNS: [[u8; 4]; 2] = [[0, 0, 0, 0], [1, 1, 1, 1]];
/// Coincident outcomes on the measured pair of a two-pair run.
pub const COINCIDENT_PATTERNS: [[u8; 2]; 2] = [[0, 0], [1, 1]];

/// State of the surviving pair after a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOutcome {
    /// 1-based index of the unmeasured pair.
    pub kept_pair: usize,
    /// Normalized two-spin state of the kept pair.
    pub post_state: QuantumState,
    /// `⟨Φ⁺|post_state|Φ⁺⟩`.
    pub fidelity: f64,
    pub success_probability: f64,
    /// Measured sites and every accepted outcome pattern.
    pub accepted_patterns: Vec<(Vec<usize>, Vec<u8>)>,
    /// Probability of each accepted pattern, aligned with `accepted_patterns`.
    pub branch_probabilities: Vec<f64>,
}

impl ProtocolOutcome {
    fn from_postselection(
        kept_pair: usize,
        sites: &[usize],
        patterns: &[&[u8]],
        selection: Postselection,
    ) -> Result<Self> {
        let fidelity = fidelity_to_bell(&selection.state, BellLabel::PhiPlus)?;
        Ok(Self {
            kept_pair,
            post_state: selection.state,
            fidelity,
            success_probability: selection.probability,
            accepted_patterns: patterns
                .iter()
                .map(|p| (sites.to_vec(), p.to_vec()))
                .collect(),
            branch_probabilities: selection.branch_probabilities,
        })
    }
}

fn check_fidelity(f: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidParameter {
            name: "F",
            value: f,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pure-state filter

/// `α|00⟩ + β|11⟩` with real `0 < α < β`, `α² + β² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureFilterSpec {
    alpha: f64,
    beta: f64,
}

impl PureFilterSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || beta == 0.0 {
            return Err(Error::Degenerate("product state, nothing to distill"));
        }
        if ((alpha * alpha + beta * beta) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "alpha^2 + beta^2",
                value: alpha * alpha + beta * beta,
            });
        }
        if !(alpha > 0.0 && alpha < beta) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(Self { alpha, beta })
    }

    /// Takes `β = √(1 - α²)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
            });
        }
        Self::new(alpha, (1.0 - alpha * alpha).sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `|J| t_max = 2 arccos(α/β)`.
    pub fn optimal_jt(&self) -> f64 {
        2.0 * (self.alpha / self.beta).acos()
    }

    pub fn state(&self) -> QuantumState {
        QuantumState::Pure {
            spins: 2,
            amplitudes: vec![
                Complex64::new(self.alpha, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(self.beta, 0.0),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterTime {
    /// `t = 2 arccos(α/β) / |J|`.
    Optimal,
    At(f64),
}

/// Pure filter with ferromagnetic `J = 1`.
pub fn pure_filter(spec: &PureFilterSpec, time: FilterTime) -> Result<ProtocolOutcome> {
    pure_filter_with_coupling(spec, time, 1.0)
}

/// Attaches an ancilla `|0⟩` as spin 3 next to spin 1 (the chain `1 - 3`),
/// lets it evolve under the isotropic coupling `j`, measures spin 3 and
/// keeps outcome 0.
pub fn pure_filter_with_coupling(
    spec: &PureFilterSpec,
    time: FilterTime,
    j: f64,
) -> Result<ProtocolOutcome> {
    if j == 0.0 {
        return Err(Error::InvalidParameter {
            name: "J",
            value: j,
        });
    }
    let t = match time {
        FilterTime::Optimal => spec.optimal_jt() / j.abs(),
        FilterTime::At(t) => t,
    };
    let initial = spec.state().tensor(&QuantumState::basis(1, 0))?;
    let h = chain_hamiltonian(&[1, 3], &CouplingSpec::isotropic(j), 3)?;
    let evolved = apply_unitary(&initial, &hermitian_eig(&h)?.propagator(t))?;
    let branch = project_and_trace(&evolved, &[3], &[0])?;
    let probability = branch.weight();
    if probability < crate::dynamics::MIN_BRANCH_PROBABILITY {
        return Err(Error::Degenerate("outcome 0 has zero probability"));
    }
    let post_state = branch.normalized()?;
    Ok(ProtocolOutcome {
        kept_pair: 1,
        fidelity: fidelity_to_bell(&post_state, BellLabel::PhiPlus)?,
        post_state,
        success_probability: probability,
        accepted_patterns: vec![(vec![3], vec![0])],
        branch_probabilities: vec![probability],
    })
}

// ---------------------------------------------------------------------------
// three pairs

/// Which two pairs of the three-pair layout are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteSet {
    /// Measure sites ⟨3,4,5,6⟩ and keep pair ⟨1,2⟩.
    Sites3456,
    /// Measure sites ⟨1,2,5,6⟩ and keep pair ⟨3,4⟩.
    Sites1256,
}

impl SiteSet {
    pub const ALL: [SiteSet; 2] = [SiteSet::Sites3456, SiteSet::Sites1256];

    pub fn measured_sites(self) -> [usize; 4] {
        match self {
            SiteSet::Sites3456 => [3, 4, 5, 6],
            SiteSet::Sites1256 => [1, 2, 5, 6],
        }
    }

    pub fn kept_pair(self) -> usize {
        match self {
            SiteSet::Sites3456 => 1,
            SiteSet::Sites1256 => 2,
        }
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SiteSet::Sites3456 => "3456",
            SiteSet::Sites1256 => "1256",
        })
    }
}

/// Three Werner pairs evolving under one bilateral Hamiltonian.
///
/// The Hamiltonian is diagonalized once, so repeated runs at different
/// fidelities or times only cost a propagator evaluation and two products.
#[derive(Debug, Clone)]
pub struct ThreePairSimulator {
    spectrum: Spectrum,
}

impl ThreePairSimulator {
    pub fn new(coupling: &CouplingSpec) -> Result<Self> {
        let layout = ChainLayout::new(3)?;
        let h = bilateral_hamiltonian(&layout, coupling)?;
        Ok(Self {
            spectrum: hermitian_eig(&h)?,
        })
    }

    pub fn isotropic() -> Result<Self> {
        Self::new(&CouplingSpec::isotropic(1.0))
    }

    /// `ρ_W(F)^{⊗3}` evolved for time `t`.
    pub fn evolved_state(&self, f: f64, t: f64) -> Result<QuantumState> {
        check_fidelity(f)?;
        let w = werner_state(f)?;
        let initial = w.tensor(&w)?.tensor(&w)?;
        if t == 0.0 {
            return Ok(initial);
        }
        apply_unitary(&initial, &self.spectrum.propagator(t))
    }

    pub fn run(
        &self,
        f: f64,
        t: f64,
        site_set: SiteSet,
        patterns: &[[u8; 4]],
    ) -> Result<ProtocolOutcome> {
        let state = self.evolved_state(f, t)?;
        let sites = site_set.measured_sites();
        let patterns: Vec<&[u8]> = patterns.iter().map(|p| p.as_slice()).collect();
        let selection = postselect(&state, &sites, &patterns)?
            .ok_or(Error::Degenerate("accepted outcomes have zero probability"))?;
        ProtocolOutcome::from_postselection(site_set.kept_pair(), &sites, &patterns, selection)
    }

    pub fn accepted(&self, f: f64, t: f64, site_set: SiteSet) -> Result<ProtocolOutcome> {
        self.run(f, t, site_set, &ACCEPTED_PATTERNS)
    }
}

/// Three-pair protocol under the isotropic ferromagnetic chain (`J = 1`),
/// accepting `(0,0,1,1)` and `(1,1,0,0)` on `site_set`.
pub fn three_pair_protocol(f: f64, t: f64, site_set: SiteSet) -> Result<ProtocolOutcome> {
    check_fidelity(f)?;
    ThreePairSimulator::isotropic()?.accepted(f, t, site_set)
}

/// Same run as [`three_pair_protocol`] on sites ⟨3,4,5,6⟩ but keeping the
/// `(0,0,0,0)` and `(1,1,1,1)` outcomes instead.
pub fn three_pair_rejected_patterns(f: f64, t: f64) -> Result<ProtocolOutcome> {
    check_fidelity(f)?;
    ThreePairSimulator::isotropic()?.run(f, t, SiteSet::Sites3456, &REJECTED_PATTERNS)
}

// ---------------------------------------------------------------------------
// two pairs

/// Two Werner pairs under `coupling`, measuring ⟨3,4⟩ at time `t` and
/// keeping coincident outcomes.
pub fn two_pair_protocol(f: f64, coupling: &CouplingSpec, t: f64) -> Result<ProtocolOutcome> {
    check_fidelity(f)?;
    let layout = ChainLayout::new(2)?;
    let w = werner_state(f)?;
    let initial = w.tensor(&w)?;
    let h = bilateral_hamiltonian(&layout, coupling)?;
    let state = if t == 0.0 {
        initial
    } else {
        apply_unitary(&initial, &hermitian_eig(&h)?.propagator(t))?
    };
    let sites = [3, 4];
    let patterns: Vec<&[u8]> = COINCIDENT_PATTERNS.iter().map(|p| p.as_slice()).collect();
    let selection = postselect(&state, &sites, &patterns)?.ok_or(Error::Degenerate(
        "coincident outcomes have zero probability",
    ))?;
    ProtocolOutcome::from_postselection(1, &sites, &patterns, selection)
}

// ---------------------------------------------------------------------------
// BBPSSW

/// CNOT 1→3 on Alice's side and 2→4 on Bob's side of pairs ⟨1,2⟩, ⟨3,4⟩.
pub fn bilateral_cnot() -> DenseOperator {
    // site k is bit 4-k of the index
    let image = |x: usize| {
        let b1 = (x >> 3) & 1;
        let b2 = (x >> 2) & 1;
        x ^ (b1 << 1) ^ b2
    };
    DenseOperator::from_fn(4, |i, j| {
        if image(j) == i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// One BBPSSW round by simulation, with no check on the input fidelity.
fn bbpssw_round(f: f64) -> Result<ProtocolOutcome> {
    check_fidelity(f)?;
    let w = werner_state(f)?;
    let state = apply_unitary(&w.tensor(&w)?, &bilateral_cnot())?;
    let sites = [3, 4];
    let patterns: Vec<&[u8]> = COINCIDENT_PATTERNS.iter().map(|p| p.as_slice()).collect();
    let selection = postselect(&state, &sites, &patterns)?.ok_or(Error::Degenerate(
        "coincident outcomes have zero probability",
    ))?;
    let mut outcome = ProtocolOutcome::from_postselection(1, &sites, &patterns, selection)?;
    outcome.post_state = twirl(&outcome.post_state)?;
    outcome.fidelity = fidelity_to_bell(&outcome.post_state, BellLabel::PhiPlus)?;
    Ok(outcome)
}

/// BBPSSW on two Werner pairs: bilateral CNOT, `S_z` on the target pair,
/// keep coincident outcomes, twirl the source pair.
pub fn bbpssw_reference(f: f64) -> Result<ProtocolOutcome> {
    if !(f > 0.5) {
        return Err(Error::NoPurificationRegime { fidelity: f });
    }
    bbpssw_round(f)
}

/// BBPSSW fidelity and success probability for any `F ∈ [0, 1]`, including
/// the non-purifying regime `F ≤ 1/2`.
pub fn bbpssw_map(f: f64) -> Result<(f64, f64)> {
    let o = bbpssw_round(f)?;
    Ok((o.fidelity, o.success_probability))
}

// ---------------------------------------------------------------------------
// iteration

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Three-pair protocol measured at `Jt = 2π` on ⟨3,4,5,6⟩.
    ThreePair,
    Bbpssw,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Round {
    /// Fidelity after the round.
    pub fidelity: f64,
    pub success_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub initial: f64,
    pub rounds: Vec<Round>,
}

impl IterationTrace {
    pub fn final_fidelity(&self) -> f64 {
        self.rounds.last().map_or(self.initial, |r| r.fidelity)
    }

    pub fn fidelities(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.fidelity).collect()
    }
}

/// Feeds the output fidelity of each round into the next one.
pub fn iterate(protocol: Protocol, f0: f64, rounds: usize) -> Result<IterationTrace> {
    if !(f0 > 0.5) {
        return Err(Error::NoPurificationRegime { fidelity: f0 });
    }
    check_fidelity(f0)?;
    let mut map = RoundMap::new(protocol)?;
    let mut f = f0;
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let (next, p) = map.step(f)?;
        out.push(Round {
            fidelity: next,
            success_probability: p,
        });
        f = next;
    }
    Ok(IterationTrace {
        initial: f0,
        rounds: out,
    })
}

/// One-round fidelity map of a protocol, reusing the diagonalization.
pub(crate) enum RoundMap {
    ThreePair(ThreePairSimulator),
    Bbpssw,
}

impl RoundMap {
    pub(crate) fn new(protocol: Protocol) -> Result<Self> {
        Ok(match protocol {
            Protocol::ThreePair => RoundMap::ThreePair(ThreePairSimulator::isotropic()?),
            Protocol::Bbpssw => RoundMap::Bbpssw,
        })
    }

    /// `(F', p)` for input fidelity `f`.
    pub(crate) fn step(&mut self, f: f64) -> Result<(f64, f64)> {
        match self {
            RoundMap::ThreePair(sim) => {
                let o = sim.accepted(f, OPTIMAL_THREE_PAIR_TIME, SiteSet::Sites3456)?;
                Ok((o.fidelity, o.success_probability))
            }
            RoundMap::Bbpssw => bbpssw_map(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_spec_validation() {
        assert!(matches!(
            PureFilterSpec::from_alpha(0.0),
            Err(Error::Degenerate(_))
        ));
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!(PureFilterSpec::new(h, h).is_err());
        assert!(PureFilterSpec::new(0.8, 0.6).is_err());
        assert!(PureFilterSpec::new(0.6, 0.7).is_err());
        assert!(PureFilterSpec::new(0.6, 0.8).is_ok());
    }

    #[test]
    fn optimal_time_for_sixty_eighty() {
        let spec = PureFilterSpec::new(0.6, 0.8).unwrap();
        // 2 arccos(0.75)
        assert!((spec.optimal_jt() - 1.445_468_495_626_831).abs() < 1e-12);
    }

    #[test]
    fn site_sets() {
        assert_eq!(SiteSet::Sites3456.kept_pair(), 1);
        assert_eq!(SiteSet::Sites1256.kept_pair(), 2);
        assert_eq!(SiteSet::Sites1256.measured_sites(), [1, 2, 5, 6]);
    }

    #[test]
    fn cnot_is_a_permutation() {
        let c = bilateral_cnot();
        assert!(c.is_unitary(1e-15));
        assert_eq!(c.matmul(&c).unwrap(), DenseOperator::identity(4));
        // |1000⟩ -> |1010⟩
        assert_eq!(c.get(0b1010, 0b1000).re, 1.0);
        // |0100⟩ -> |0101⟩
        assert_eq!(c.get(0b0101, 0b0100).re, 1.0);
    }

    #[test]
    fn bbpssw_rejects_low_fidelity() {
        assert!(matches!(
            bbpssw_reference(0.5),
            Err(Error::NoPurificationRegime { .. })
        ));
        assert!(bbpssw_map(0.5).is_ok());
    }

    #[test]
    fn iterate_rejects_low_fidelity() {
        assert!(iterate(Protocol::Bbpssw, 0.4, 3).is_err());
    }

    #[test]
    fn zero_rounds_returns_input() {
        for p in [Protocol::ThreePair, Protocol::Bbpssw] {
            let trace = iterate(p, 0.7, 0).unwrap();
            assert_eq!(trace.final_fidelity(), 0.7);
            assert!(trace.rounds.is_empty());
        }
    }

    #[test]
    fn three_pair_rejects_bad_fidelity() {
        assert!(three_pair_protocol(1.2, 1.0, SiteSet::Sites3456).is_err());
        assert!(three_pair_rejected_patterns(-0.1, 1.0).is_err());
    }
}
