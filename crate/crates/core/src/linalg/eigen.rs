//! Hermitian eigensolvers for the fixed small dimensions used here.
//!
//! 2×2 eigenvalues come from the closed-form quadratic. Everything else goes
//! through cyclic Jacobi: each rotation first removes the phase of the pivot
//! `a_pq` with a diagonal unitary, then applies an ordinary real Givens
//! rotation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::scalar::{lit, tol, Real};

/// Hermiticity tolerance applied to solver inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `M = V diag(values) V†`, values ascending, eigenvectors
/// in the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigh<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigh<T> {
    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn column(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.values.len())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

fn require_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if m.is_hermitian(tol(HERMITIAN_TOL)) {
        Ok(())
    } else {
        Err(Error::domain("eigensolver input is not Hermitian"))
    }
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn eig_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    require_hermitian(m)?;
    if m.dim() == 2 {
        let half = lit::<T>(0.5);
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)];
        let mean = (a + d) * half;
        let gap = ((a - d) * half).hypot(b.norm());
        return Ok(vec![mean - gap, mean + gap]);
    }
    Ok(jacobi(m).values)
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<Eigh<T>> {
    require_hermitian(m)?;
    Ok(jacobi(m))
}

fn jacobi<T: Real>(m: &ComplexMatrix<T>) -> Eigh<T> {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = T::epsilon() * T::epsilon() * scale * scale;

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| {
        diag[i]
            .partial_cmp(&diag[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    Eigh { values, vectors }
}

/// One Jacobi rotation zeroing `a[p][q]`: `A ← U† A U`, `V ← V U` with
/// `U = diag(1, e^{-iα}) · [[c, s], [-s, c]]` on the (p, q) plane.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let phase = Complex::new(apq.re / r, -apq.im / r); // e^{-iα}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (r + r).atan2(aqq - app) * lit(0.5);
    let (s, c) = theta.sin_cos();
    let zero = T::zero();
    let upp = Complex::new(c, zero);
    let upq = Complex::new(s, zero);
    let uqp = phase * (-s);
    let uqq = phase * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(zero, zero);
    a[(q, p)] = Complex::new(zero, zero);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a real
/// symmetric 3×3 matrix, by cyclic Jacobi.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigen3<T: Real>(m: &[[T; 3]; 3]) -> ([T; 3], [[T; 3]; 3]) {
    let mut a = *m;
    let mut v = [[T::zero(); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale: T = a.iter().flatten().map(|&x| x * x).sum::<T>();
    let threshold = T::epsilon() * T::epsilon() * scale;
    for _ in 0..MAX_SWEEPS {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off + off <= threshold {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == T::zero() {
                continue;
            }
            let theta = (apq + apq).atan2(a[q][q] - a[p][p]) * lit(0.5);
            let (s, c) = theta.sin_cos();
            for row in a.iter_mut() {
                let (xp, xq) = (row[p], row[q]);
                row[p] = c * xp - s * xq;
                row[q] = s * xp + c * xq;
            }
            for k in 0..3 {
                let (xp, xq) = (a[p][k], a[q][k]);
                a[p][k] = c * xp - s * xq;
                a[q][k] = s * xp + c * xq;
            }
            a[p][q] = T::zero();
            a[q][p] = T::zero();
            for row in v.iter_mut() {
                let (xp, xq) = (row[p], row[q]);
                row[p] = c * xp - s * xq;
                row[q] = s * xp + c * xq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        a[i][i]
            .partial_cmp(&a[j][j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = [
        a[order[0]][order[0]],
        a[order[1]][order[1]],
        a[order[2]][order[2]],
    ];
    let mut vectors = [[T::zero(); 3]; 3];
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..3 {
            vectors[i][new_col] = v[i][old_col];
        }
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::bloch::BlochVector;
    use crate::linalg::matrix::{bloch_operator, pauli_along};

    type M = ComplexMatrix<f64>;

    fn residual(m: &M, e: &Eigh<f64>) -> f64 {
        let n = m.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let v = e.column(k);
            for i in 0..n {
                let mv: Complex<f64> = (0..n).map(|j| m[(i, j)] * v[j]).sum();
                worst = worst.max((mv - v[i] * e.values[k]).norm());
            }
        }
        worst
    }

    #[test]
    fn diagonal_two_by_two() {
        let m = M::from_diagonal(&[1.0, -1.0]).unwrap();
        assert_eq!(eig_hermitian(&m).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn non_unit_bloch_operator_has_norm_eigenvalues() {
        let a = BlochVector::new(0.3f64, 0.4, 0.0);
        let ev = eig_hermitian(&bloch_operator(&a)).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_pauli_spectrum_is_plus_minus_one() {
        let u = BlochVector::new(1.0f64, -2.0, 0.5).normalized();
        let ev = eig_hermitian(&pauli_along(&u).unwrap()).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::Domain(_))));
        assert!(eigh(&m).is_err());
    }

    #[test]
    fn four_by_four_complex_residual() {
        let mut m = M::zeros(4);
        let entries = [
            (0, 0, 1.0, 0.0),
            (1, 1, -0.3, 0.0),
            (2, 2, 0.7, 0.0),
            (3, 3, 0.1, 0.0),
            (0, 1, 0.2, 0.5),
            (0, 3, -0.4, 0.1),
            (1, 2, 0.3, -0.6),
            (2, 3, 0.05, 0.25),
        ];
        for (i, j, re, im) in entries {
            m[(i, j)] = Complex::new(re, im);
            if i != j {
                m[(j, i)] = Complex::new(re, -im);
            }
        }
        let e = eigh(&m).unwrap();
        assert!(residual(&m, &e) <= 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = e.values.iter().sum();
        assert!((trace - 1.5).abs() < 1e-13);
        let rebuilt = e.map_spectrum(|x| x);
        assert!(rebuilt.max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn symmetric_three_by_three() {
        let m = [[2.0f64, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let (vals, vecs) = symmetric_eigen3(&m);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        assert!((vals[2] - 5.0).abs() < 1e-14);
        for k in 0..3 {
            for i in 0..3 {
                let mv: f64 = (0..3).map(|j| m[i][j] * vecs[j][k]).sum();
                assert!((mv - vals[k] * vecs[i][k]).abs() < 1e-13);
            }
        }
    }
}
