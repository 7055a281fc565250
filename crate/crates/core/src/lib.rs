//! Reconstruction of effective connectivity in delayed Heaviside firing-rate
//! networks from observed firing intervals.
//!
//! The network model is
//!
//! ```text
//! s_i'(t) + s_i(t) = Φ(Σ_j W_ij s_j(t − τ_d) + B_i(t)),   0 < t ≤ T
//! s_i(t) = s_i⁰ e^{−t},                                    −τ_d < t ≤ 0
//! ```
//!
//! with `Φ` the Heaviside function (`Φ(0) = 1`). Given firing intervals the
//! drives decouple and solve in closed form ([`drive`]); each firing onset
//! then yields one linear equation in the unknown row `W_i·`, and the
//! per-neuron systems are solved with truncated SVD ([`inverse`]).

pub mod config;
pub mod connectivity;
pub mod diagnostics;
pub mod drive;
pub mod error;
pub mod experiment;
pub mod input;
pub mod interval;
pub mod inverse;
pub mod noise;
pub mod schedule;
pub mod sim;

pub use config::NetworkConfig;
pub use connectivity::{
    generate_nonsymmetric_connectivity, generate_symmetric_connectivity, ConnectivityMatrix,
};
pub use drive::{build_drive, evaluate_drive, ClosedFormDrive};
pub use error::{Error, Result};
pub use input::{ExternalInput, Interpolation};
pub use interval::{interval_symmetric_difference_measure, interval_union, Interval, IntervalSet};
pub use schedule::FiringSchedule;
