//! Matrix types, off-diagonal norms, cosine similarity and file formats.

mod cosine;
mod dense;
mod factor;
pub mod io;
mod norm;
mod sparse;

pub use cosine::{cosine_similarity, SparseCounts};
pub use dense::DenseSymMatrix;
pub use factor::FactorMatrix;
pub(crate) use factor::dot;
pub use norm::{od_loss_sum, od_norm, Loss, OffDiagonal};
pub use sparse::SparseSymMatrix;
