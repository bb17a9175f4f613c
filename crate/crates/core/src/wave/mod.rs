//! Semi-analytic modal evolution in the separated basis `sin(nπθ) R_k(r)`.

pub mod basis;
pub mod modal;
pub mod norms;
pub mod oscillation;

pub use basis::{BasisInfo, RadialBasis};
pub use modal::{
    duhamel_forcing, energy, energy_series, energy_split, evolve, project_initial_data, projection_defect, random_modal_data,
    EnergyReport, InitialData, ModalCoefficients, ModalForcing,
};
pub use norms::{
    boundary_trace_norm, interior_observation_norm, interior_strip_norm, sine_overlap, trace_report, NormOptions, TimeQuadrature,
    TraceReport, TraceSegment,
};
pub use oscillation::{cross_integral, Oscillator};
