//! Recursive self-similar (0,1)-matrices and the Plücker matrix of the
//! isotropic Grassmannian `IG(k, E)` of a `2n`-dimensional symplectic space.
//!
//! * [`combinat`]: index tuples, ranks, pair sets, row partitions.
//! * [`bitmatrix`]: sparse binary matrices, paste operations, components,
//!   permutation equivalence, file formats.
//! * [`fractal`]: the matrices `A_k^l` by pasting and by block recursion.
//! * [`incidence`]: subset-inclusion configurations over the pair set.
//! * [`plucker`]: the matrix `B_f`, the contraction map, block decomposition.
//! * [`gf`]: exact linear algebra over prime fields.
//! * [`variety`]: Plücker relations and rational point enumeration.

pub mod bitmatrix;
pub mod combinat;
pub mod error;
pub mod fractal;
pub mod gf;
pub mod incidence;
pub mod plucker;
pub mod report;
pub mod variety;

pub use bitmatrix::{BinaryMatrix, Format, PermutationPair};
pub use combinat::{binomial, index_tuples, IndexTuple, PairSet, Sign};
pub use error::{Error, Result};
pub use fractal::{fractal_matrix, fractal_matrix_blockwise, FractalParams};
pub use gf::{FieldMatrix, PrimeField};
pub use plucker::{plucker_matrix, PluckerMatrix};
