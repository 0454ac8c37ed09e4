//! Thermistor-memristor oscillator: the three-variable model, its physical
//! parameter mapping, integrators and the analysis toolchain.

pub mod analyze;
pub mod error;
pub mod integrate;
pub mod kv;
pub mod model;
pub mod thermistor;

pub use analyze::{
    analyze_point, classify_attractor, classify_fixed_point, detect_double_spiral, detect_period, kaplan_yorke,
    lyapunov_spectrum, origin_eigenvalues, AnalysisSettings, AttractorClass, AttractorKind, EigenReport,
    FixedPointKind, LyapunovSettings, LyapunovSpectrum, PeriodEstimate, PointAnalysis,
};
pub use error::{AnalysisError, IntegrationError, ParamError};
pub use integrate::{integrate, Flow, IntegrationSettings, Method, Trajectory, DEFAULT_INITIAL};
pub use model::{
    jacobian, memristance, nonlinear_resistor, vector_field, Matrix3, ModelCoefficients, ModelParams, State,
};
pub use thermistor::{
    coefficient_of_determination, fit_thermistor, physical_to_model, taylor_resistance, thermistor_resistance,
    PhysicalParams, ThermistorFit,
};
