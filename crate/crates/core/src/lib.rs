//! Exact solver toolkit for N-fold integer programs.
//!
//! The solver bounds Graver-basis l1-norms through column-independent row
//! partitions of the block matrices and uses that bound to cap augmenting
//! steps. Encoders reduce high-multiplicity scheduling problems and Minimum
//! Sum Coloring to N-fold programs and decode the solutions.

pub mod coloring;
pub mod error;
pub mod graver;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod partition;
pub mod scheduling;
pub mod solver;
pub mod steinitz;

pub use error::{Error, Result};
pub use graver::{
    conformal_decompose, graver_basis, is_indecomposable, lemma2_bound, nfold_graver_bound,
    GraverSet,
};
pub use matrix::IntMatrix;
pub use model::{Brick, NFoldInstance, Objective, Solution, Status};
pub use partition::{
    column_independent_partition, nfold_partition_params, NFoldParams, RowPartition,
};
pub use solver::{solve, Solver, SolverConfig};
pub use steinitz::steinitz_reorder;
