//! Exact decomposition of a matrix into a sparse weighted sum of allowed
//! rectangles.
//!
//! Two rectangle families are supported:
//!
//! - **tree x tree**: rectangles are products of a row-hierarchy node and a
//!   column-hierarchy node ([`treextree`], built on the exact 1-D solver in
//!   [`tree1d`]);
//! - **all rectangles**: any contiguous block of rows times any contiguous
//!   block of columns ([`zwp`] for vectors, [`allrects2d`] for matrices).
//!
//! [`oracle`] holds exponential-time exact solvers for small instances, used
//! to certify the approximation algorithms. [`cli`] is the command-line
//! front end.

pub mod allrects2d;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod seeds;
pub mod setpacking;
pub mod tree1d;
pub mod treextree;
pub mod zwp;

pub use error::{Error, Result};
pub use model::{
    canonicalize, int, is_allowed_tree, verify, Explanation, Hierarchy, Matrix, Rational,
    Rectangle, TreeInstance, TreeSpec, VerificationReport, WeightedRectangle,
};
