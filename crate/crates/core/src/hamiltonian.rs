//! Exchange Hamiltonians on one chain and on Alice's and Bob's chains together.
//!
//! For every nearest-neighbour edge `(i, j)` (taken in chain order) a chain
//! contributes
//!
//! ```text
//! -(jx Sx_i Sx_j + jy Sy_i Sy_j + jz Sz_i Sz_j) + d · (S_i × S_j)
//! ```
//!
//! Positive couplings are ferromagnetic. Chains are open.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numerics::{DenseOperator, DEFAULT_MAX_SPINS};
use crate::spin::{bell_product_vector, embed_many, BellLabel, SpinOperatorSet};
use crate::{Error, Result};

/// Exchange couplings of one edge plus the Dzyaloshinskii–Moriya vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub dm: [f64; 3],
}

impl CouplingSpec {
    pub fn new(jx: f64, jy: f64, jz: f64) -> Self {
        Self {
            jx,
            jy,
            jz,
            dm: [0.0; 3],
        }
    }

    pub fn isotropic(j: f64) -> Self {
        Self::new(j, j, j)
    }

    /// `-J (SxSx + SySy) + d · (S_i × S_j)`.
    pub fn xy_with_dm(j: f64, dm: [f64; 3]) -> Self {
        Self {
            jx: j,
            jy: j,
            jz: 0.0,
            dm,
        }
    }

    pub fn with_dm(mut self, dm: [f64; 3]) -> Self {
        self.dm = dm;
        self
    }

    pub fn has_dm(&self) -> bool {
        self.dm.iter().any(|&d| d != 0.0)
    }

    pub fn is_isotropic(&self) -> bool {
        self.jx == self.jy && self.jy == self.jz && !self.has_dm()
    }
}

/// `n_pairs` Bell pairs laid out as two chains: pair `j` (1-based) occupies
/// sites `(2j-1, 2j)`, Alice holds the odd sites and Bob the even ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainLayout {
    n_pairs: usize,
}

impl ChainLayout {
    pub fn new(n_pairs: usize) -> Result<Self> {
        if n_pairs == 0 {
            return Err(Error::InvalidParameter {
                name: "n_pairs",
                value: 0.0,
            });
        }
        let spins = 2 * n_pairs;
        if spins > DEFAULT_MAX_SPINS {
            return Err(Error::Capacity {
                spins,
                max_spins: DEFAULT_MAX_SPINS,
            });
        }
        Ok(Self { n_pairs })
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_spins(&self) -> usize {
        2 * self.n_pairs
    }

    pub fn alice_sites(&self) -> Vec<usize> {
        (1..=self.n_pairs).map(|j| 2 * j - 1).collect()
    }

    pub fn bob_sites(&self) -> Vec<usize> {
        (1..=self.n_pairs).map(|j| 2 * j).collect()
    }

    /// Sites of pair `j`, 1-based.
    pub fn pair(&self, j: usize) -> (usize, usize) {
        (2 * j - 1, 2 * j)
    }
}

/// Sum of the edge terms over consecutive sites of `sites`, embedded in an
/// `n_spins` register. A chain with fewer than two sites gives zero.
pub fn chain_hamiltonian(
    sites: &[usize],
    coupling: &CouplingSpec,
    n_spins: usize,
) -> Result<DenseOperator> {
    crate::numerics::site_masks(sites, n_spins)?;
    let s = SpinOperatorSet::new();
    let ops = s.components();
    let mut h = DenseOperator::zeros(n_spins);
    let exchange = [coupling.jx, coupling.jy, coupling.jz];
    for edge in sites.windows(2) {
        let (i, j) = (edge[0], edge[1]);
        let term = |a: usize, b: usize| embed_many(&[(ops[a], i), (ops[b], j)], n_spins);
        for (k, &jk) in exchange.iter().enumerate() {
            if jk != 0.0 {
                h += &(&term(k, k)? * -jk);
            }
        }
        // (S_i × S_j)_a = S_i^b S_j^c - S_i^c S_j^b for cyclic (a, b, c)
        for (a, &d) in coupling.dm.iter().enumerate() {
            if d != 0.0 {
                let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                h += &(&term(b, c)? * d);
                h += &(&term(c, b)? * -d);
            }
        }
    }
    Ok(h)
}

/// `H_Alice + H_Bob` over the `2 n_pairs` spins of `layout`.
pub fn bilateral_hamiltonian(
    layout: &ChainLayout,
    coupling: &CouplingSpec,
) -> Result<DenseOperator> {
    let n = layout.n_spins();
    let alice = chain_hamiltonian(&layout.alice_sites(), coupling, n)?;
    let bob = chain_hamiltonian(&layout.bob_sites(), coupling, n)?;
    Ok(&alice + &bob)
}

/// Leakage of the two-pair bilateral Hamiltonian out of one Bell-product subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceLeakage {
    pub members: Vec<[BellLabel; 2]>,
    /// Largest `|⟨b|H|c⟩|` with `b` inside and `c` outside the subspace.
    pub leakage: f64,
}

impl SubspaceLeakage {
    pub fn name(&self) -> String {
        use core::fmt::Write;
        let mut s = String::from("(");
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}{}", m[0], m[1]);
        }
        s.push(')');
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSubspaceReport {
    pub subspaces: Vec<SubspaceLeakage>,
}

impl InvariantSubspaceReport {
    pub fn max_leakage(&self) -> f64 {
        self.subspaces.iter().map(|s| s.leakage).fold(0.0, f64::max)
    }
}

/// The seven Bell-product subspaces left invariant by any two-pair exchange
/// Hamiltonian without DM coupling.
pub fn two_pair_invariant_subspaces() -> Vec<Vec<[BellLabel; 2]>> {
    use BellLabel::*;
    alloc::vec![
        alloc::vec![[PhiPlus, PhiMinus], [PhiMinus, PhiPlus]],
        alloc::vec![[PhiPlus, PsiPlus], [PsiPlus, PhiPlus]],
        alloc::vec![[PhiPlus, PsiMinus], [PsiMinus, PhiPlus]],
        alloc::vec![[PsiPlus, PsiMinus], [PsiMinus, PsiPlus]],
        alloc::vec![[PsiPlus, PhiMinus], [PhiMinus, PsiPlus]],
        alloc::vec![[PsiMinus, PhiMinus], [PhiMinus, PsiMinus]],
        alloc::vec![
            [PhiPlus, PhiPlus],
            [PhiMinus, PhiMinus],
            [PsiPlus, PsiPlus],
            [PsiMinus, PsiMinus]
        ],
    ]
}

/// Measures how far the two-pair bilateral Hamiltonian couples each
/// invariant Bell-product subspace to its complement.
pub fn invariant_subspace_check(coupling: &CouplingSpec) -> Result<InvariantSubspaceReport> {
    if coupling.has_dm() {
        return Err(Error::NotApplicable(
            "DM coupling breaks the Bell-product subspaces",
        ));
    }
    let layout = ChainLayout::new(2)?;
    let h = bilateral_hamiltonian(&layout, coupling)?;

    let mut labels = Vec::with_capacity(16);
    let mut vectors = Vec::with_capacity(16);
    for a in BellLabel::ALL {
        for b in BellLabel::ALL {
            labels.push([a, b]);
            vectors.push(bell_product_vector(&[a, b]));
        }
    }
    let h_vectors: Vec<Vec<Complex64>> =
        vectors.iter().map(|v| h.apply(v)).collect::<Result<_>>()?;
    let element = |row: usize, col: usize| -> f64 {
        vectors[row]
            .iter()
            .zip(&h_vectors[col])
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    };

    let subspaces = two_pair_invariant_subspaces()
        .into_iter()
        .map(|members| {
            let inside: Vec<usize> = (0..16).filter(|&k| members.contains(&labels[k])).collect();
            let mut leakage: f64 = 0.0;
            for &i in &inside {
                for o in (0..16).filter(|o| !inside.contains(o)) {
                    leakage = leakage.max(element(i, o));
                }
            }
            SubspaceLeakage { members, leakage }
        })
        .collect();
    Ok(InvariantSubspaceReport { subspaces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::hermitian_eig;

    #[test]
    fn layout_sites() {
        let l = ChainLayout::new(3).unwrap();
        assert_eq!(l.alice_sites(), alloc::vec![1, 3, 5]);
        assert_eq!(l.bob_sites(), alloc::vec![2, 4, 6]);
        assert_eq!(l.pair(2), (3, 4));
        assert!(ChainLayout::new(0).is_err());
        assert!(ChainLayout::new(6).is_err());
    }

    #[test]
    fn isotropic_flag() {
        assert!(CouplingSpec::isotropic(1.0).is_isotropic());
        assert!(!CouplingSpec::isotropic(1.0)
            .with_dm([0.1, 0.0, 0.0])
            .is_isotropic());
        assert!(!CouplingSpec::new(1.0, 1.0, 0.5).is_isotropic());
    }

    #[test]
    fn single_site_chain_is_zero() {
        let h = chain_hamiltonian(&[2], &CouplingSpec::isotropic(1.0), 3).unwrap();
        assert_eq!(h, DenseOperator::zeros(3));
    }

    #[test]
    fn two_site_heisenberg_spectrum() {
        // -S1·S2: triplet at -1/4, singlet at +3/4
        let h = chain_hamiltonian(&[1, 2], &CouplingSpec::isotropic(1.0), 2).unwrap();
        let spec = hermitian_eig(&h).unwrap();
        let expected = [-0.25, -0.25, -0.25, 0.75];
        for (a, b) in spec.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicate_sites_rejected() {
        let r = chain_hamiltonian(&[1, 2, 1], &CouplingSpec::isotropic(1.0), 3);
        assert_eq!(r, Err(Error::DuplicateSite(1)));
    }

    #[test]
    fn single_pair_bilateral_is_zero() {
        let h = bilateral_hamiltonian(&ChainLayout::new(1).unwrap(), &CouplingSpec::isotropic(1.0))
            .unwrap();
        assert_eq!(h, DenseOperator::zeros(2));
    }

    #[test]
    fn three_pair_isotropic_is_traceless_hermitian() {
        let h = bilateral_hamiltonian(&ChainLayout::new(3).unwrap(), &CouplingSpec::isotropic(1.0))
            .unwrap();
        assert_eq!(h.dim(), 64);
        assert!(h.is_hermitian(1e-14));
        assert!(h.trace().norm() < 1e-12);
    }

    #[test]
    fn dm_check_is_not_applicable() {
        let c = CouplingSpec::xy_with_dm(1.0, [0.1, 0.0, 0.0]);
        assert!(matches!(
            invariant_subspace_check(&c),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn subspaces_partition_bell_products() {
        let all: Vec<_> = two_pair_invariant_subspaces()
            .into_iter()
            .flatten()
            .collect();
        assert_eq!(all.len(), 16);
        for (i, a) in all.iter().enumerate() {
            assert!(!all[i + 1..].contains(a));
        }
    }

    #[test]
    fn subspace_names() {
        let report = invariant_subspace_check(&CouplingSpec::isotropic(1.0)).unwrap();
        assert_eq!(report.subspaces[0].name(), "(Φ+Φ-,Φ-Φ+)");
    }
}
