use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{DenseOperator, EIGEN_TOL, HERMITIAN_TOL};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `h = V · diag(values) · V†` of a Hermitian operator.
///
/// Eigenvalues are ascending; column `k` of `vectors` belongs to
/// `values[k]`. Keeping the decomposition around makes `exp(-iht)` cheap to
/// evaluate for many `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DenseOperator,
}

impl Spectrum {
    /// `V · diag(f(λ)) · V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> DenseOperator {
        let dim = self.vectors.dim();
        let weights: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        // scale columns first, then multiply by V†
        let mut out = DenseOperator::zeros(self.vectors.spins());
        for i in 0..dim {
            let vi = self.vectors.row(i);
            for j in 0..dim {
                let vj = self.vectors.row(j);
                let z: Complex64 = (0..dim).map(|k| vi[k] * weights[k] * vj[k].conj()).sum();
                out.set(i, j, z);
            }
        }
        out
    }

    /// `exp(-i h t)`.
    pub fn propagator(&self, t: f64) -> DenseOperator {
        self.map(|l| Complex64::new(0.0, -l * t).exp())
    }

    pub fn reconstruct(&self) -> DenseOperator {
        self.map(|l| Complex64::new(l, 0.0))
    }
}

/// Diagonalizes a Hermitian operator with cyclic complex Jacobi rotations.
pub fn hermitian_eig(h: &DenseOperator) -> Result<Spectrum> {
    let scale = h.max_abs().max(1.0);
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }

    let n = h.dim();
    // symmetrize so that rounding in the input cannot bias the result
    let mut a = DenseOperator::from_fn(h.spins(), |i, j| 0.5 * (h.get(i, j) + h.get(j, i).conj()));
    let mut v = DenseOperator::identity(h.spins());
    let threshold = EIGEN_TOL * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let values = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = DenseOperator::from_fn(h.spins(), |i, j| v.get(i, order[j]));
    Ok(Spectrum { values, vectors })
}

/// `exp(-i h t)` for Hermitian `h`.
pub fn propagator(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    Ok(hermitian_eig(h)?.propagator(t))
}

fn off_diagonal_norm(a: &DenseOperator) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `J = D R D†`, where `D` removes the
/// phase of `a[p][q]` and `R` is the real Jacobi rotation of the resulting
/// real symmetric 2×2 block. Updates `a ← J† a J` and `v ← v J`.
fn rotate(a: &mut DenseOperator, v: &mut DenseOperator, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J_pp = c, J_pq = s·e^{iφ}, J_qp = -s·e^{-iφ}, J_qq = c
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = a.dim();

    // a ← a J
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c + akq * jqp);
        a.set(k, q, akp * jpq + akq * c);
    }
    // a ← J† a
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c + aqk * jqp.conj());
        a.set(q, k, apk * jpq.conj() + aqk * c);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * c);
    }
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::numerics::UNITARY_TOL;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let h = DenseOperator::diagonal(1, &[1.0, 3.0]).unwrap();
        let s = hermitian_eig(&h).unwrap();
        assert_eq!(s.values, vec![1.0, 3.0]);
        assert_eq!(s.vectors, DenseOperator::identity(1));
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let x = DenseOperator::from_entries(1, vec![re(0.0), re(1.0), re(1.0), re(0.0)]).unwrap();
        let s = hermitian_eig(&x).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-14);
        assert!((s.values[1] - 1.0).abs() < 1e-14);
        assert!(s.reconstruct().max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn complex_offdiagonal_is_handled() {
        // σy has purely imaginary off-diagonals
        let y = DenseOperator::from_entries(
            1,
            vec![
                re(0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                re(0.0),
            ],
        )
        .unwrap();
        let s = hermitian_eig(&y).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-14);
        assert!(s.reconstruct().max_abs_diff(&y) < 1e-12);
        assert!(s.vectors.is_unitary(UNITARY_TOL));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DenseOperator::from_entries(1, vec![re(0.0), re(1.0), re(0.0), re(0.0)]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let h = DenseOperator::from_fn(2, |i, j| {
            Complex64::new((i + j) as f64, i as f64 - j as f64)
        });
        let u = propagator(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&DenseOperator::identity(2)) < 1e-12);
    }
}
