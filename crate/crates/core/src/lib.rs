//! Words over a graded alphabet, the bijections built on them, and exact
//! verification of the multivariate Rothe/Abel/Gould family of convolution
//! identities.
//!
//! Everything is exact: scalars are arbitrary-precision rationals and
//! polynomial identities are certified by evaluation on degree-bounded grids.

pub mod arith;
pub mod bijections;
pub mod error;
pub mod identities;
pub mod report;
pub mod series;
pub mod sweep;
pub mod words;

pub use arith::{int, multinomial, MultiIndex, Scalar};
pub use bijections::{
    raney_factorize, raney_unfactorize, shift_by, shift_down, shift_down_by, shift_up,
    verify_raney_decomposition, verify_shift_class, BalancedPair, RaneyFactorization,
};
pub use error::{Error, Result};
pub use identities::{verify_identity_on_grid, IdentityId, IdentitySpec, Sides};
pub use report::{Counterexample, EvalReport, Verdict};
pub use series::TruncatedSeries;
pub use words::{count_words, enumerate_words, GradedAlphabet, Letter, Word, WordClassSpec};
