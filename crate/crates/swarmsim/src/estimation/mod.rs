//! Distributed state estimation: the observer that localizes every agent
//! from relative measurements plus leader global measurements, and the
//! consensus estimator for the formation scale.

mod observer;
mod scale;

pub use observer::{
    check_observer_stability, default_observer_gains, observer_step, EstimationError,
    MeasurementBundle, ObserverGains, ObserverState,
};
pub use scale::{
    default_scale_weights, desired_trajectory_from_scale, scale_step, ScaleError,
    ScaleEstimatorState,
};

/// Outcome of a positive-definiteness check on a stability-governing matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    pub min_eigenvalue: f64,
}
