//! Numerical laboratory for the CHSH form of Bell's inequality on two qubits.
//!
//! * [`algebra`]: states, Pauli observables, Schmidt decomposition, concurrence.
//! * [`quantum`]: quantum correlation coefficients, the CHSH functional and the
//!   optimal polarizer settings for `c1|01⟩ + c2|10⟩`.
//! * [`lhv`]: local hidden-variable models and their Monte Carlo estimates.
//! * [`agr`]: a simulated coincidence-counting experiment.
//! * [`scan`]: two-angle violation regions in the xz, xy and yz planes.
//!
//! All stochastic routines take an explicit seed and produce identical output
//! whatever the number of worker threads.

pub mod agr;
pub mod algebra;
pub mod error;
pub mod lhv;
pub mod linalg;
pub mod quantum;
pub mod sampling;
pub mod scan;

pub use agr::{
    estimate_e, estimate_probabilities, estimate_s, simulate_run, AgrReport, CoincidenceCounts, ExperimentConfig,
    SEstimate,
};
pub use algebra::{
    canonical_state, canonical_state_permissive, concurrence, make_unit_vector, pauli_dot, schmidt_decompose,
    tensor_observable, Observable2, Observable4, SchmidtForm, TwoQubitState, UnitVector3,
};
pub use error::{BellError, Result};
pub use lhv::{
    bell1964_check, chsh_lhv, estimate_correlation, AveragedLinear, BellSign, BuiltinModel, ChshEstimate,
    CorrelationEstimate, LhvModel,
};
pub use quantum::{
    chsh_value, chsh_value_symmetric, correlation_closed, correlation_matrix, gisin_angles, gisin_settings,
    joint_probabilities, max_violation, projector, projector_product, JointProbabilities, MeasurementSettings,
    Projector2,
};
pub use scan::{scan_region, scenario_f, scenario_settings, Plane, ScenarioId, SignCase, ViolationGrid};

/// Version tag embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
