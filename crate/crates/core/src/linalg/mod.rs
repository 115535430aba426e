//! Dense complex linear algebra for one- and two-qubit operators.

pub mod bloch;
pub mod density;
pub mod eigen;
pub mod matrix;

pub use bloch::{axis_angle_rotation, BlochVector};
pub use density::{
    fidelity, fidelity_with, partial_trace, root_fidelity, DensityMatrix, FidelityConvention,
    Subsystem, FIDELITY_CONVENTION,
};
pub use eigen::{eig_hermitian, eigh, symmetric_eigen3, Eigh};
pub use matrix::{
    bloch_operator, correlation_observable, hadamard, kron, pauli, pauli_along, pauli_x, pauli_y,
    pauli_z, rotation_of_unitary, unitary_from_euler, ComplexMatrix,
};
