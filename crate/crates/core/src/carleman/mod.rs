//! Carleman weight machinery: the weight and its derivatives, the
//! conjugated operator, the conjugation identity as a grid residual, and
//! the weighted integrals of the localized estimate.

pub mod field;
pub mod integrals;
pub mod residual;
pub mod solution;
pub mod weight;

pub use field::{conjugate_field, deconjugate_field, GridField, SpaceTimeGrid, WeightField};
pub use integrals::{carleman_component_integrals, carleman_scan, ComponentIntegrals, QuadratureGrid, ScanRow};
pub use residual::{conjugation_residual, residual_convergence, ConvergenceReport, ResidualLattice, ResidualReport};
pub use solution::{ModalSolution, SolutionJet};
pub use weight::{apply_conjugated, eval_b, eval_xi_sigma, wave_operator_squared_sigma, ConjugatedParts, FieldJet, WeightPoint};
