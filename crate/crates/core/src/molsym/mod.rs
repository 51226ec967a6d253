//! Molecular point-group pipeline: geometry I/O, permutation-group
//! detection, initial operator guesses, and symmetrization.

mod geometry;
pub mod library;
mod ops;
mod perms;
pub mod perturb;

pub use geometry::{load_xyz, save_xyz, Atom, MolecularGeometry};
pub use ops::{
    classify_operation, initial_group_guess, invariance_residual, moment_rank, operation_report,
    real_operator, symmetrize_geometry, vector_pairs_from_permutations, Operation, OperationKind,
    OperationReport,
};
pub use perms::{find_symmetry_permutations, find_symmetry_permutations_with, SearchOptions, SymmetryPermutations};
