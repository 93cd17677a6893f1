//! Classical capacity of lossy and noisy bosonic channels under Gaussian,
//! photon-counting and ideal joint receivers.

pub mod analytic;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod mi;
pub mod output;
pub mod receivers;
pub mod verify;
mod par;

pub use error::{Error, Result};
pub use gaussian::{
    apply_channel, compose_measurement, condition_on_partial_measurement, eliminate_feedforward, euler_decompose,
    overlap_probability_density, ChannelParams, GaussianState, GeneralDyneMeasurement, MeasurementKind,
    ReceivedEnsemble, SymplecticMap,
};
