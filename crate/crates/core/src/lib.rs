//! EPR-steering toolkit for two-qubit states.
//!
//! Measurement schemes built from Platonic-solid axes, the local-hidden-state
//! bound `C_n` for each scheme, Werner-state models, honest and cheating
//! steering strategies, CHSH values, and a Poisson-count simulation of the
//! photonic experiment with estimators and tomography.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`; `*F32` variants are
//! provided for the few types that are useful in single precision.
//!
//! ```
//! use epr_steering::{scheme_axes, steering_bound, honest_steering, werner, WernerParameter};
//!
//! let scheme = scheme_axes::<f64>(3).unwrap();
//! let bound = steering_bound(&scheme).unwrap();
//! assert!((bound.value - 1.0 / 3f64.sqrt()).abs() < 1e-12);
//!
//! let rho = werner(WernerParameter::new(0.7).unwrap());
//! let report = honest_steering(&rho, &scheme).unwrap();
//! assert!(report.violated);
//! ```

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod linalg;
pub mod optimize;
pub mod protocol;
pub mod scalar;
pub mod seeds;
pub mod states;

pub use bounds::{
    analytic_bound, analytic_steering_bound, eigenvalue_objective, steering_bound,
    verify_tightness, BoundMethod, SignVector, SteeringBound,
};
pub use error::{Error, Result};
pub use geometry::{
    dual_directions, scheme_axes, vertex_directions, DirectionKind, DirectionSet, Figure,
    MeasurementScheme, SUPPORTED_SETTINGS,
};
pub use linalg::{fidelity, partial_trace, BlochVector, ComplexMatrix, DensityMatrix, Subsystem};
pub use protocol::{
    canonical_chsh_settings, cheat_steering, chsh_max, chsh_value, honest_steering, make_ensemble,
    optimal_kind, ChshReport, ChshSettings, LhsEnsemble, ResponseRule, SteeringReport,
};
pub use scalar::Real;
pub use states::{
    characterize, classify, concurrence, depolarize_one_sided, find_local_correction,
    linear_entropy, prepare_via_gate, tangle, werner, Regime, StateCharacter, WernerParameter,
};

pub type Matrix = ComplexMatrix<f64>;
pub type Bloch = BlochVector<f64>;
pub type Density = DensityMatrix<f64>;
pub type Scheme = MeasurementScheme<f64>;
pub type Bound = SteeringBound<f64>;
pub type Ensemble = LhsEnsemble<f64>;
pub type Steering = SteeringReport<f64>;
pub type Chsh = ChshReport<f64>;
pub type Werner = WernerParameter<f64>;

pub type BlochF32 = BlochVector<f32>;
pub type DensityF32 = DensityMatrix<f32>;
pub type SchemeF32 = MeasurementScheme<f32>;
pub type BoundF32 = SteeringBound<f32>;
