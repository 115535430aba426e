use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::bloch::BlochVector;
use crate::scalar::{lit, tol, Real};

/// Dense row-major complex matrix of dimension 2 (one qubit) or 4 (two qubits).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "matrix dimension must be 2 or 4, got {dim}"
        )))
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real(dim: usize, data: &[T]) -> Result<Self> {
        Self::new(
            dim,
            data.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "matrix dimension must be 2 or 4");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        Ok(m)
    }

    /// `|ψ⟩⟨ψ|` for a ket of length 2 or 4 (not normalized here).
    pub fn outer(ket: &[Complex<T>]) -> Result<Self> {
        let dim = ket.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = ket[i] * ket[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self[(i, i)]
        })
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                acc = acc + self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn is_hermitian(&self, tolerance: T) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tolerance))
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(lit(0.5))
    }
}

impl<T> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix {
        dim: 2,
        data: vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
    }
}

pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix {
        dim: 2,
        data: vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
    }
}

pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix {
        dim: 2,
        data: vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
    }
}

/// Pauli basis `[I, X, Y, Z]` indexed 0..4.
pub fn pauli<T: Real>(index: usize) -> ComplexMatrix<T> {
    match index {
        0 => ComplexMatrix::identity(2),
        1 => pauli_x(),
        2 => pauli_y(),
        3 => pauli_z(),
        _ => panic!("Pauli index out of range: {index}"),
    }
}

/// `a·σ` for any real 3-vector, unit or not.
pub fn bloch_operator<T: Real>(a: &BlochVector<T>) -> ComplexMatrix<T> {
    let zero = T::zero();
    ComplexMatrix {
        dim: 2,
        data: vec![
            Complex::new(a.z, zero),
            Complex::new(a.x, -a.y),
            Complex::new(a.x, a.y),
            Complex::new(-a.z, zero),
        ],
    }
}

/// Pauli observable along a unit axis.
pub fn pauli_along<T: Real>(u: &BlochVector<T>) -> Result<ComplexMatrix<T>> {
    if !u.is_unit(tol(1e-12)) {
        return Err(Error::domain(format!(
            "measurement axis must be a unit vector, |u| = {}",
            u.norm()
        )));
    }
    Ok(bloch_operator(u))
}

/// Tensor product; the first factor acts on qubit 1.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::domain(format!(
            "kron expects two 2x2 factors, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// `σ_a ⊗ σ_b` for unit axes.
pub fn correlation_observable<T: Real>(
    a: &BlochVector<T>,
    b: &BlochVector<T>,
) -> Result<ComplexMatrix<T>> {
    kron(&pauli_along(a)?, &pauli_along(b)?)
}

/// Single-qubit unitary `Rz(alpha) Ry(beta) Rz(gamma)`.
pub fn unitary_from_euler<T: Real>(alpha: T, beta: T, gamma: T) -> ComplexMatrix<T> {
    let half = lit::<T>(0.5);
    let (sb, cb) = (beta * half).sin_cos();
    let e = |phi: T| Complex::from_polar(T::one(), phi * half);
    // Rz(a) = diag(e^{-ia/2}, e^{ia/2}); Ry(b) = [[c, -s], [s, c]]
    let zero = T::zero();
    let ry = ComplexMatrix {
        dim: 2,
        data: vec![
            Complex::new(cb, zero),
            Complex::new(-sb, zero),
            Complex::new(sb, zero),
            Complex::new(cb, zero),
        ],
    };
    let rz = |phi: T| ComplexMatrix {
        dim: 2,
        data: vec![
            e(-phi),
            Complex::new(zero, zero),
            Complex::new(zero, zero),
            e(phi),
        ],
    };
    &(&rz(alpha) * &ry) * &rz(gamma)
}

/// Hadamard gate.
pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
    let h = T::FRAC_1_SQRT_2();
    ComplexMatrix::from_real(2, &[h, h, h, -h]).expect("2x2")
}

/// Rotation `R` with `U (v·σ) U† = (R v)·σ`, row-major.
pub fn rotation_of_unitary<T: Real>(u: &ComplexMatrix<T>) -> [[T; 3]; 3] {
    let ud = u.adjoint();
    let mut r = [[T::zero(); 3]; 3];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let rotated = &(u * &pauli::<T>(j + 1)) * &ud;
            *slot = rotated.trace_product(&pauli(i + 1)).re * lit(0.5);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn pauli_z_along_z_axis() {
        let z = pauli_along(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(z, M::from_diagonal(&[1.0, -1.0]).unwrap());
    }

    #[test]
    fn pauli_x_along_x_axis() {
        let x = pauli_along(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(x, M::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
    }

    #[test]
    fn pauli_along_rejects_non_unit_axis() {
        assert!(matches!(
            pauli_along(&BlochVector::new(0.3, 0.4, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn kron_of_identities_and_z() {
        let i4 = kron(&M::identity(2), &M::identity(2)).unwrap();
        assert_eq!(i4, M::identity(4));
        let zz = kron(&pauli_z::<f64>(), &pauli_z()).unwrap();
        assert_eq!(zz, M::from_diagonal(&[1.0, -1.0, -1.0, 1.0]).unwrap());
    }

    #[test]
    fn kron_rejects_wrong_dims() {
        assert!(kron(&M::identity(4), &M::identity(2)).is_err());
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(M::new(3, vec![Complex::new(0.0, 0.0); 9]).is_err());
        assert!(M::new(2, vec![Complex::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn euler_unitary_is_unitary_and_rotation_is_orthogonal() {
        let u = unitary_from_euler(0.3, 1.1, -0.7);
        let uu = &u.adjoint() * &u;
        assert!(uu.max_abs_diff(&M::identity(2)) < 1e-14);
        let r = rotation_of_unitary(&u);
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13);
            }
        }
        // U (v·σ) U† == (Rv)·σ
        let v = BlochVector::new(0.2, -0.5, 0.7);
        let lhs = bloch_operator(&v).conjugate_by(&u);
        let rhs = bloch_operator(&v.rotated(&r));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let h = hadamard::<f64>();
        assert!((&h * &h).max_abs_diff(&M::identity(2)) < 1e-15);
    }
}
