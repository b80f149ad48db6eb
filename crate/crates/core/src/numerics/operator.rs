use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::DEFAULT_MAX_SPINS;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix acting on the Hilbert space of `spins` spin-1/2
/// particles, stored row-major with dimension `2^spins`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    spins: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(spins: usize) -> Self {
        let dim = 1 << spins;
        Self {
            spins,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(spins: usize) -> Self {
        let mut op = Self::zeros(spins);
        let dim = op.dim();
        for i in 0..dim {
            op.entries[i * dim + i] = ONE;
        }
        op
    }

    /// Wraps row-major entries; fails unless there are `4^spins` of them.
    pub fn from_entries(spins: usize, entries: Vec<Complex64>) -> Result<Self> {
        let expected = 1usize << (2 * spins);
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { spins, entries })
    }

    /// Builds the operator entry by entry.
    pub fn from_fn(spins: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let dim = 1 << spins;
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { spins, entries }
    }

    /// Real diagonal operator.
    pub fn diagonal(spins: usize, diag: &[f64]) -> Result<Self> {
        let dim = 1usize << spins;
        if diag.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: diag.len(),
            });
        }
        Ok(Self::from_fn(spins, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// `|a⟩⟨b|`.
    pub fn outer(spins: usize, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let dim = 1usize << spins;
        for v in [a, b] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        Ok(Self::from_fn(spins, |i, j| a[i] * b[j].conj()))
    }

    #[inline]
    pub fn spins(&self) -> usize {
        self.spins
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.spins
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.entries[row * dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        let dim = self.dim();
        &self.entries[row * dim..(row + 1) * dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.spins, |i, j| self.get(j, i).conj())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            spins: self.spins,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let dim = self.dim();
        let mut out = vec![ZERO; dim * dim];
        for i in 0..dim {
            let out_row = &mut out[i * dim..(i + 1) * dim];
            for k in 0..dim {
                let a = self.entries[i * dim + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.entries[k * dim..(k + 1) * dim];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            spins: self.spins,
            entries: out,
        })
    }

    /// `self · v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        Ok((0..dim)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// `self · rhs - rhs · self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Largest `|self_ij - other_ij|`; infinite if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.spins != other.spins {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Largest `|h_ij - conj(h_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Max-abs entry of `U U† - I`.
    pub fn unitary_deviation(&self) -> f64 {
        match self.matmul(&self.adjoint()) {
            Ok(product) => product.max_abs_diff(&Self::identity(self.spins)),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// `self · rho · self†`.
    pub fn conjugate(&self, rho: &Self) -> Result<Self> {
        self.matmul(rho)?.matmul(&self.adjoint())
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<()> {
        if self.spins != rhs.spins {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.spins, rhs.spins, "operator dimensions differ");
        DenseOperator {
            spins: self.spins,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.spins, rhs.spins, "operator dimensions differ");
        DenseOperator {
            spins: self.spins,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl AddAssign<&DenseOperator> for DenseOperator {
    fn add_assign(&mut self, rhs: &DenseOperator) {
        assert_eq!(self.spins, rhs.spins, "operator dimensions differ");
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += b;
        }
    }
}

impl Mul<f64> for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: f64) -> DenseOperator {
        self.scaled(Complex64::new(rhs, 0.0))
    }
}

/// Kronecker product `a ⊗ b`; `a` occupies the leading (more significant)
/// sites of the result.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    kron_capped(a, b, DEFAULT_MAX_SPINS)
}

/// [`kron`] with an explicit cap on the spin count of the result.
pub fn kron_capped(
    a: &DenseOperator,
    b: &DenseOperator,
    max_spins: usize,
) -> Result<DenseOperator> {
    let spins = a.spins + b.spins;
    if spins > max_spins {
        return Err(Error::Capacity { spins, max_spins });
    }
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut entries = vec![ZERO; dim * dim];
    for i in 0..da {
        for j in 0..da {
            let x = a.get(i, j);
            if x == ZERO {
                continue;
            }
            for k in 0..db {
                let row = (i * db + k) * dim + j * db;
                for l in 0..db {
                    entries[row + l] = x * b.get(k, l);
                }
            }
        }
    }
    Ok(DenseOperator { spins, entries })
}
