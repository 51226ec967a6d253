//! Correction of finite unitary matrix groups that are only known
//! approximately.
//!
//! Given matrices `G'_i` and the group multiplication table they should
//! obey, [`multab`] iteratively corrects them until the table holds to a
//! threshold. The corrected group is still only fixed up to a global
//! unitary rotation; [`fit`] finds the rotation `e^R` that best matches
//! target matrices or vector-mapping pairs. [`molsym`] applies both to
//! molecular point groups.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below cover the common case.

pub mod error;
pub mod fit;
pub mod group;
pub mod io;
pub mod linalg;
pub mod molsym;
pub mod multab;
pub mod scalar;
pub mod trace;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use fit::{
    fit_error, fit_error_ab, lsf_group_correction, q_from_vector_pairs, rhs_p, rotate_group, solve_r_simplified,
    solve_r_supermatrix, supermatrix_l, Algo, FitConfig, FitOutcome, Target, TargetMatrices, VectorPairs,
};
pub use group::{
    group_closure_error, table_from_permutations, validate_table, ApproxGroup, MultiplicationTable, Permutation,
    TableReport,
};
pub use linalg::{AntiHermitian, Unitary};
pub use multab::{
    correction_step, multab_error, multab_group_correction, violation_matrices, DeviationSet, MultabConfig,
    MultabOutcome, ViolationMatrices,
};
pub use scalar::{CMatrix, CVector, Real};
pub use trace::{ConvergenceTrace, FitRow, MultabRow, MultabTrace};

pub type Matrix64 = CMatrix<f64>;
pub type Matrix32 = CMatrix<f32>;
pub type Group64 = ApproxGroup<f64>;
pub type Group32 = ApproxGroup<f32>;
pub type Generator64 = AntiHermitian<f64>;
pub type Geometry64 = molsym::MolecularGeometry<f64>;
pub type Targets64 = TargetMatrices<f64>;
pub type Pairs64 = VectorPairs<f64>;
