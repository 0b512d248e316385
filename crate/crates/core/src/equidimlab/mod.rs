//! Finite-field experiments on equi-dimensionality: point counts, dimension
//! estimates, face conditions, pullbacks along subdivision maps and censuses
//! of bad centers.

pub mod census;
pub mod checks;
pub mod count;
pub mod variety;

pub use census::{
    bad_center_census, homotopy_face_condition_check, vanishing_census, CensusConfig, CensusReport,
    HomotopyFaceReport, HomotopyPullbackEntry, SamplePlan, SigmaCensus, VanishingReport,
    VanishingSpec,
};
pub use checks::{
    count_points, equidim_check, equidim_check_with, estimate_dimension, face_condition_check,
    proper_faces, rational_points, EquidimReport, FaceEntry, FaceReport, FiberEntry, Verdict,
    DEFAULT_CAP,
};
pub use count::{estimate_system, CompiledPoly, CompiledSystem, DimensionEstimate, FieldTower};
pub use variety::{pullback_variety, VarietySpec, VarietyText};
