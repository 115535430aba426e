use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::bloch::BlochVector;
use crate::linalg::eigen::{eig_hermitian, eigh, HERMITIAN_TOL};
use crate::linalg::matrix::{bloch_operator, ComplexMatrix};
use crate::scalar::{lit, tol, Real};

/// Trace tolerance for validated states.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted as numerical noise.
pub const POSITIVITY_TOL: f64 = -1e-9;

/// Which fidelity is reported by [`fidelity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityConvention {
    /// `(Tr √(√ρ σ √ρ))²`
    SquaredUhlmann,
    /// `Tr √(√ρ σ √ρ)`
    RootUhlmann,
}

/// Convention used by [`fidelity`] throughout the crate.
pub const FIDELITY_CONVENTION: FidelityConvention = FidelityConvention::SquaredUhlmann;

/// Qubit label in a two-qubit register; `First` is the left tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    First,
    Second,
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates and symmetrizes `matrix`.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_hermitian(tol(HERMITIAN_TOL)) {
            return Err(Error::domain("density matrix is not Hermitian"));
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > tol(TRACE_TOL) {
            return Err(Error::domain(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        let min = eig_hermitian(&matrix)?[0];
        if min < lit(POSITIVITY_TOL) {
            return Err(Error::domain(format!(
                "density matrix has negative eigenvalue {min}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    /// `|ψ⟩⟨ψ|` from a ket, normalized here.
    pub fn pure(ket: &[Complex<T>]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::domain("zero ket"));
        }
        let scaled: Vec<_> = ket.iter().map(|z| z / norm).collect();
        Ok(Self::from_trusted(ComplexMatrix::outer(&scaled)?))
    }

    /// Qubit state `(I + r·σ)/2`, `|r| ≤ 1`.
    pub fn qubit(r: &BlochVector<T>) -> Result<Self> {
        if r.norm() > T::one() + tol(1e-12) {
            return Err(Error::domain(format!(
                "Bloch vector length {} exceeds 1",
                r.norm()
            )));
        }
        let m = (&ComplexMatrix::identity(2) + &bloch_operator(r)).scale(lit(0.5));
        Ok(Self::from_trusted(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim);
        Self::from_trusted(m.scale(T::one() / T::from_usize(dim).unwrap()))
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Re Tr(ρ O)`.
    pub fn expectation(&self, observable: &ComplexMatrix<T>) -> T {
        self.matrix.trace_product(observable).re
    }

    pub fn purity(&self) -> T {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        eig_hermitian(&self.matrix).expect("density matrices are Hermitian")
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ComplexMatrix<T>) -> Self {
        Self::from_trusted(self.matrix.conjugate_by(u))
    }

    /// Tensor product `self ⊗ other` of two qubit states.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_trusted(crate::linalg::matrix::kron(
            &self.matrix,
            &other.matrix,
        )?))
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self> {
        partial_trace(self, keep)
    }

    pub fn cast<U: Real>(&self) -> DensityMatrix<U> {
        let f = |v: T| U::from_f64(v.to_f64().unwrap_or(f64::NAN)).unwrap();
        let data = self
            .matrix
            .entries()
            .iter()
            .map(|z| Complex::new(f(z.re), f(z.im)))
            .collect();
        DensityMatrix::from_trusted(ComplexMatrix::new(self.dim(), data).expect("same shape"))
    }
}

/// Reduced state of one qubit of a two-qubit state.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: Subsystem) -> Result<DensityMatrix<T>> {
    if rho.dim() != 4 {
        return Err(Error::domain("partial trace needs a two-qubit (4x4) state"));
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..2 {
                acc = acc
                    + match keep {
                        Subsystem::First => m[(2 * i + k, 2 * j + k)],
                        Subsystem::Second => m[(2 * k + i, 2 * k + j)],
                    };
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// `Tr √(√ρ σ √ρ)`.
pub fn root_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::domain(format!(
            "fidelity of states with dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let sqrt_rho = eigh(rho.matrix())?.map_spectrum(|x| x.max(T::zero()).sqrt());
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let spectrum = eig_hermitian(&inner.hermitian_part())?;
    let root: T = spectrum.into_iter().map(|x| x.max(T::zero()).sqrt()).sum();
    Ok(root.min(T::one()))
}

/// Uhlmann fidelity in the crate's [`FIDELITY_CONVENTION`].
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    fidelity_with(rho, sigma, FIDELITY_CONVENTION)
}

pub fn fidelity_with<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    convention: FidelityConvention,
) -> Result<T> {
    let root = root_fidelity(rho, sigma)?;
    Ok(match convention {
        FidelityConvention::SquaredUhlmann => root * root,
        FidelityConvention::RootUhlmann => root,
    })
}
