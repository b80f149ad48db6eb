//! Closed forms, fidelity curves, timing windows, Bell-basis mutual
//! information and resource estimates.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::bell_dephase;
use crate::hamiltonian::{bilateral_hamiltonian, ChainLayout, CouplingSpec};
use crate::numerics::{hermitian_eig, DenseOperator, QuantumState};
use crate::protocols::{
    bbpssw_map, bilateral_cnot, Protocol, RoundMap, SiteSet, ThreePairSimulator, ACCEPTED_PATTERNS,
    OPTIMAL_THREE_PAIR_TIME,
};
use crate::spin::{bell_product_vector, BellLabel};
use crate::{Error, Result};

/// Peak fidelity of the three-pair protocol:
/// `(16 - 53F + 118F²) / (59 - 106F + 128F²)`.
///
/// The denominator has no real roots, so this is defined for every `F`.
pub fn max_fidelity_formula(f: f64) -> f64 {
    (16.0 - 53.0 * f + 118.0 * f * f) / (59.0 - 106.0 * f + 128.0 * f * f)
}

/// `lo, lo + step, …` up to and including `hi` (with a small slack for
/// rounding in `(hi - lo) / step`).
pub fn time_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::EmptyWindow);
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

// ---------------------------------------------------------------------------
// fidelity curves

/// Conditional fidelity and acceptance probability of the three-pair
/// protocol against measurement time.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityCurve {
    pub t_grid: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub probability: Vec<f64>,
}

impl FidelityCurve {
    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// `(t, fidelity)` at the largest fidelity; the first one on ties.
    pub fn peak(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for (&t, &f) in self.t_grid.iter().zip(&self.fidelity) {
            if best.is_none_or(|(_, b)| f > b) {
                best = Some((t, f));
            }
        }
        best
    }
}

/// Isotropic (`J = 1`) three-pair protocol swept over `t_grid`.
pub fn fidelity_curve(f: f64, t_grid: &[f64], site_set: SiteSet) -> Result<FidelityCurve> {
    curve_with(&ThreePairSimulator::isotropic()?, f, t_grid, site_set)
}

/// Same sweep with an already diagonalized simulator of any coupling.
pub fn curve_with(
    sim: &ThreePairSimulator,
    f: f64,
    t_grid: &[f64],
    site_set: SiteSet,
) -> Result<FidelityCurve> {
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter {
            name: "t_grid (not ascending)",
            value: f64::NAN,
        });
    }
    let mut fidelity = Vec::with_capacity(t_grid.len());
    let mut probability = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let o = sim.accepted(f, t, site_set)?;
        fidelity.push(o.fidelity);
        probability.push(o.success_probability);
    }
    Ok(FidelityCurve {
        t_grid: t_grid.to_vec(),
        fidelity,
        probability,
    })
}

// ---------------------------------------------------------------------------
// timing window

/// Outward scan step used to bracket the window edges.
const WINDOW_SCAN_STEP: f64 = 0.01;
/// Bisection stops once an edge is bracketed this tightly (in `Jt`).
const WINDOW_EDGE_TOL: f64 = 1e-4;

/// Width in `Jt` of the interval around `Jt = 2π` on which the fidelity gain
/// stays at or above half of the peak gain `F'_max - F`.
pub fn fwhm_window(f: f64) -> Result<f64> {
    if !(f > 0.5 && f < 1.0) {
        return Err(Error::Degenerate("no fidelity gain outside 1/2 < F < 1"));
    }
    let sim = ThreePairSimulator::isotropic()?;
    let gain = |t: f64| -> Result<f64> { Ok(sim.accepted(f, t, SiteSet::Sites3456)?.fidelity - f) };
    let center = OPTIMAL_THREE_PAIR_TIME;
    let peak = gain(center)?;
    if !(peak > 0.0) {
        return Err(Error::Degenerate("no fidelity gain at the optimal time"));
    }
    let half = peak / 2.0;

    let mut edges = [0.0; 2];
    for (edge, direction) in edges.iter_mut().zip([-1.0, 1.0]) {
        let mut inside = center;
        let mut outside = center;
        loop {
            outside += direction * WINDOW_SCAN_STEP;
            if (outside - center).abs() > core::f64::consts::PI {
                return Err(Error::Degenerate("half-gain window does not close"));
            }
            if gain(outside)? < half {
                break;
            }
            inside = outside;
        }
        while (outside - inside).abs() > WINDOW_EDGE_TOL {
            let mid = 0.5 * (inside + outside);
            if gain(mid)? >= half {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        *edge = 0.5 * (inside + outside);
    }
    Ok(edges[1] - edges[0])
}

// ---------------------------------------------------------------------------
// mutual information

/// `I(X; Y)` in bits of a joint distribution given row-major as
/// `joint[x * cols + y]`. Terms with zero probability contribute nothing.
pub fn mutual_information_bits(joint: &[f64], cols: usize) -> f64 {
    let rows = joint.len() / cols;
    let total: f64 = joint.iter().sum();
    let px: Vec<f64> = (0..rows)
        .map(|x| joint[x * cols..(x + 1) * cols].iter().sum::<f64>() / total)
        .collect();
    let py: Vec<f64> = (0..cols)
        .map(|y| (0..rows).map(|x| joint[x * cols + y]).sum::<f64>() / total)
        .collect();
    let mut info = 0.0;
    for x in 0..rows {
        for y in 0..cols {
            let p = joint[x * cols + y] / total;
            if p > 0.0 {
                info += p * (p / (px[x] * py[y])).log2();
            }
        }
    }
    info
}

/// Mutual information in bits between the Bell label of an unknown pair
/// before `u` acts and the joint Bell labels of the remaining pairs after it.
///
/// The unknown pair (1-based `unknown_pair`) starts in one of the four Bell
/// states with equal probability; every other pair starts in `Φ⁺`.
pub fn mutual_information_under(
    u: &DenseOperator,
    n_pairs: usize,
    unknown_pair: usize,
) -> Result<f64> {
    if unknown_pair == 0 || unknown_pair > n_pairs {
        return Err(Error::InvalidPairIndex {
            index: unknown_pair,
            n_pairs,
        });
    }
    if u.spins() != 2 * n_pairs {
        return Err(Error::DimensionMismatch {
            expected: 1 << (2 * n_pairs),
            found: u.dim(),
        });
    }
    let others = 1usize << (2 * (n_pairs - 1));
    let mut joint = vec![0.0; 4 * others];
    let shift = 2 * (n_pairs - unknown_pair);
    for x in BellLabel::ALL {
        let mut labels = vec![BellLabel::PhiPlus; n_pairs];
        labels[unknown_pair - 1] = x;
        let evolved = QuantumState::Pure {
            spins: 2 * n_pairs,
            amplitudes: u.apply(&bell_product_vector(&labels))?,
        };
        for (idx, w) in bell_dephase(&evolved)?.into_iter().enumerate() {
            // drop the unknown pair's two label bits
            let high = idx >> (shift + 2);
            let low = idx & ((1 << shift) - 1);
            let y = (high << shift) | low;
            joint[x.index() * others + y] += 0.25 * w;
        }
    }
    Ok(mutual_information_bits(&joint, others))
}

/// Mutual information generated by isotropic (`J = 1`) bilateral evolution
/// of `n_pairs` pairs up to time `t`; see [`mutual_information_under`].
pub fn chain_mutual_information(n_pairs: usize, unknown_pair: usize, t: f64) -> Result<f64> {
    let layout = ChainLayout::new(n_pairs)?;
    let h = bilateral_hamiltonian(&layout, &CouplingSpec::isotropic(1.0))?;
    let u = hermitian_eig(&h)?.propagator(t);
    mutual_information_under(&u, n_pairs, unknown_pair)
}

/// Three-pair Bell-basis mutual information between `unknown_pair` and the
/// other two pairs after evolving for `t`.
pub fn bell_mutual_information(layout: &ChainLayout, unknown_pair: usize, t: f64) -> Result<f64> {
    if layout.n_pairs() != 3 {
        return Err(Error::InvalidParameter {
            name: "n_pairs",
            value: layout.n_pairs() as f64,
        });
    }
    chain_mutual_information(3, unknown_pair, t)
}

/// Two-pair analogue of [`bell_mutual_information`].
pub fn two_pair_mutual_information(unknown_pair: usize, t: f64) -> Result<f64> {
    chain_mutual_information(2, unknown_pair, t)
}

/// Mutual information created by one bilateral CNOT between a random Bell
/// pair (source) and a `Φ⁺` pair (target).
pub fn cnot_mutual_information() -> Result<f64> {
    mutual_information_under(&bilateral_cnot(), 2, 1)
}

// ---------------------------------------------------------------------------
// resources

/// `log(11/27) / log(2/3)`: BBPSSW rounds per three-pair round near `F = 1`.
pub fn asymptotic_round_ratio() -> f64 {
    (11.0f64 / 27.0).ln() / (2.0f64 / 3.0).ln()
}

/// How the BBPSSW success probability enters `l_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbpsswProbability {
    /// Average over the same fidelity grid as the three-pair protocol.
    Averaged,
    /// Product over the rounds actually run, each at its own fidelity.
    PerRound,
}

/// How the number of BBPSSW rounds is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BbpsswRounds {
    /// Iterate the simulated BBPSSW map until the target is reached.
    Recurrence,
    /// `r_B = asymptotic_round_ratio() · r_SC`, valid close to `F = 1`.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceOptions {
    pub bbpssw_probability: BbpsswProbability,
    pub bbpssw_rounds: BbpsswRounds,
    /// A round count is reached once the fidelity is within this much of the
    /// target (targets are quoted to three decimals).
    pub target_slack: f64,
    pub max_rounds: usize,
    /// Uniform fidelity grid for averaging success probabilities.
    pub average_range: (f64, f64),
    pub average_points: usize,
}

impl Default for ResourceOptions {
    fn default() -> Self {
        Self {
            bbpssw_probability: BbpsswProbability::Averaged,
            bbpssw_rounds: BbpsswRounds::Recurrence,
            target_slack: 5e-4,
            max_rounds: 64,
            average_range: (0.505, 0.995),
            average_points: 101,
        }
    }
}

/// Expected number of initial pairs consumed by both protocols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceEstimate {
    pub r_sc: f64,
    pub r_b: f64,
    pub p_sc_avg: f64,
    pub p_b: f64,
    /// `(3 / p_SC)^{r_SC}`.
    pub l_sc: f64,
    /// `(2 / p_B)^{r_B}`.
    pub l_b: f64,
    /// `l_SC / l_B`.
    pub ratio: f64,
}

pub fn resource_estimate(fi: f64, ff: f64) -> Result<ResourceEstimate> {
    resource_estimate_with(fi, ff, &ResourceOptions::default())
}

pub fn resource_estimate_with(
    fi: f64,
    ff: f64,
    opts: &ResourceOptions,
) -> Result<ResourceEstimate> {
    if !(fi > 0.5 && fi < ff && ff < 1.0) {
        return Err(Error::InvalidParameter {
            name: "F_i/F_f (need 1/2 < F_i < F_f < 1)",
            value: fi,
        });
    }
    let (sc_rounds, _) = rounds_to_reach(Protocol::ThreePair, fi, ff, opts)?;
    let r_sc = sc_rounds as f64;

    let grid = averaging_grid(opts);
    let mut sim = RoundMap::new(Protocol::ThreePair)?;
    let p_sc_avg = mean(grid.iter().map(|&f| sim.step(f).map(|(_, p)| p)))?;

    let (r_b, l_b, p_b) = match opts.bbpssw_rounds {
        BbpsswRounds::Recurrence => {
            let (n, probs) = rounds_to_reach(Protocol::Bbpssw, fi, ff, opts)?;
            match opts.bbpssw_probability {
                BbpsswProbability::Averaged => {
                    let p = mean(grid.iter().map(|&f| bbpssw_map(f).map(|(_, p)| p)))?;
                    (n as f64, (2.0 / p).powi(n as i32), p)
                }
                BbpsswProbability::PerRound => {
                    let l: f64 = probs.iter().map(|p| 2.0 / p).product();
                    let geo = if n == 0 {
                        1.0
                    } else {
                        2.0 / l.powf(1.0 / n as f64)
                    };
                    (n as f64, l, geo)
                }
            }
        }
        BbpsswRounds::Asymptotic => {
            let r = asymptotic_round_ratio() * r_sc;
            let p = mean(grid.iter().map(|&f| bbpssw_map(f).map(|(_, p)| p)))?;
            (r, (2.0 / p).powf(r), p)
        }
    };

    let l_sc = (3.0 / p_sc_avg).powf(r_sc);
    Ok(ResourceEstimate {
        r_sc,
        r_b,
        p_sc_avg,
        p_b,
        l_sc,
        l_b,
        ratio: l_sc / l_b,
    })
}

/// Rounds needed to go from `fi` to `ff`, and the success probability of
/// each round.
fn rounds_to_reach(
    protocol: Protocol,
    fi: f64,
    ff: f64,
    opts: &ResourceOptions,
) -> Result<(usize, Vec<f64>)> {
    let mut map = RoundMap::new(protocol)?;
    let mut f = fi;
    let mut probs = Vec::new();
    while f < ff - opts.target_slack {
        if probs.len() == opts.max_rounds {
            return Err(Error::Unreachable {
                target: ff,
                max_rounds: opts.max_rounds,
            });
        }
        let (next, p) = map.step(f)?;
        probs.push(p);
        f = next;
    }
    Ok((probs.len(), probs))
}

fn averaging_grid(opts: &ResourceOptions) -> Vec<f64> {
    let (lo, hi) = opts.average_range;
    let n = opts.average_points.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn mean(values: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v?;
        n += 1;
    }
    Ok(sum / n as f64)
}

/// Three-pair success probability at `Jt = 2π` over BBPSSW's, both simulated.
pub fn success_probability_ratio(f: f64) -> Result<f64> {
    if !(f > 0.5 && f < 1.0) {
        return Err(Error::NoPurificationRegime { fidelity: f });
    }
    let sc = ThreePairSimulator::isotropic()?.accepted(
        f,
        OPTIMAL_THREE_PAIR_TIME,
        SiteSet::Sites3456,
    )?;
    let (_, p_b) = bbpssw_map(f)?;
    Ok(sc.success_probability / p_b)
}

// ---------------------------------------------------------------------------
// DM anisotropy

#[derive(Debug, Clone, PartialEq)]
pub struct DmScan {
    pub t_best: f64,
    pub f_best: f64,
    /// Acceptance probability at `t_best`.
    pub p_best: f64,
    pub curve: FidelityCurve,
}

/// Scans the three-pair protocol under `-J(SxSx + SySy) + d·(S_i × S_j)`
/// over `[t_lo, t_hi]` and reports where the conditional fidelity peaks.
pub fn dm_anisotropy_run(
    f: f64,
    j: f64,
    d: [f64; 3],
    t_window: (f64, f64),
    t_step: f64,
) -> Result<DmScan> {
    let grid = time_grid(t_window.0, t_window.1, t_step)?;
    let sim = ThreePairSimulator::new(&CouplingSpec::xy_with_dm(j, d))?;
    let curve = curve_with(&sim, f, &grid, SiteSet::Sites3456)?;
    let (idx, _) =
        curve
            .fidelity
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bf), (i, &x)| {
                if x > bf {
                    (i, x)
                } else {
                    (bi, bf)
                }
            });
    Ok(DmScan {
        t_best: curve.t_grid[idx],
        f_best: curve.fidelity[idx],
        p_best: curve.probability[idx],
        curve,
    })
}

/// Accepted-pattern outcome of a three-pair run for a general coupling;
/// exposed for sweeps that need both numbers at one time.
pub fn three_pair_point(coupling: &CouplingSpec, f: f64, t: f64) -> Result<(f64, f64)> {
    let o = ThreePairSimulator::new(coupling)?.run(f, t, SiteSet::Sites3456, &ACCEPTED_PATTERNS)?;
    Ok((o.fidelity, o.success_probability))
}
