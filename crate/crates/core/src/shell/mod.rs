//! The faces-of-`[n]` shell complex in the constant-coefficient model, its
//! homology, the canonical map, and the map-level telescoping identity for
//! the subdivision homotopy.

pub mod complex;
pub mod snf;
pub mod telescope;

pub use complex::{
    build_shell, build_shell_with, canonical_map, chain_map_failures, constant_target,
    shell_report, verify_d_squared, CanonicalMap, ShellComplex, ShellReport, SignRule,
};
pub use snf::{homology, smith_normal_form, AbelianGroup, ChainComplex, IntMatrix, SnfResult};
pub use telescope::{
    canonical_minus_subdivision, d_h_side, formal_sum_reduce, h_d_side, homotopy_boundary,
    search_conventions, specialization_check, specialize_map, specialize_sum, Convention,
    ConventionSearch, FormalMapSum, ResidualTerm, SpecializationReport, TelescopeReport,
    TelescopeSides,
};
