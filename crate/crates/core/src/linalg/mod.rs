//! Dense linear algebra on small basis-indexed spaces.

mod diff;
mod eigen;
mod mat;
mod matfun;
mod series;
mod split;
mod tensor;

pub use diff::*;
pub use eigen::*;
pub use mat::*;
pub use matfun::*;
pub use series::*;
pub use split::*;
pub use tensor::*;
