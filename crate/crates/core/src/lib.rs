//! Chebyshev sequence preconditioning paired with the Vovk-Azoury-Warmuth
//! forecaster for predicting marginally stable linear dynamical systems.
//!
//! The numerical core (`lds`, `chebyshev`, `precondition`, `forecasters`) is
//! generic over the [`Real`] scalar type; exact Chebyshev arithmetic uses
//! big rationals. The experiment [`harness`] runs in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod error;
pub mod forecasters;
pub mod harness;
pub mod lds;
pub mod linalg;
pub mod precondition;
pub mod rng;
pub mod scalar;

pub use error::{Result, UspError};
pub use scalar::Real;

pub use chebyshev::{ExactPolynomial, MonicChebyshev};
pub use forecasters::{FirstOrderState, OptimizerKind, VawForecaster};
pub use lds::{LdsSystem, SignalTrace, SpectrumBound, SystemRecord};
pub use precondition::{PreconditionConfig, PreconditionMode, Preconditioner, UspBenchmark};

pub type LdsSystem64 = LdsSystem<f64>;
pub type LdsSystem32 = LdsSystem<f32>;
pub type SignalTrace64 = SignalTrace<f64>;
pub type SignalTrace32 = SignalTrace<f32>;
pub type Vaw64 = VawForecaster<f64>;
pub type Vaw32 = VawForecaster<f32>;
pub type FirstOrder64 = FirstOrderState<f64>;
pub type FirstOrder32 = FirstOrderState<f32>;
pub type Preconditioner64 = Preconditioner<f64>;
pub type UspBenchmark64 = UspBenchmark<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
