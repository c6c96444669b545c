//! Dense complex multilinear algebra.

mod array;
mod hosvd;
mod matrix;
mod products;
mod svd;
mod unfold;

pub use array::{ComplexTensor3, ComplexTensor4};
pub use hosvd::{hosvd_rank1, Rank1Triple};
pub use matrix::ComplexMatrix;
pub use products::{hadamard, khatri_rao, kron_vec};
pub use svd::{rank1_svd, SingularTriple};
pub use unfold::{fold3, parafac4_reconstruct, refold_y1, unfold_y1, unfold_y2};

pub(crate) use unfold::cascade;
