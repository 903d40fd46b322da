//! Orthogonal symmetric realizability of joins of unions of complete graphs.
//!
//! A graph is the zero-nonzero pattern of an orthogonal symmetric matrix
//! exactly when its minimum number of distinct eigenvalues `q` equals two.
//! For a join of two unions of complete graphs, described by tuples of clique
//! orders, `q` is always 2 or 3, and which one is decided by a closed-form
//! test on component counts, totals and isolated-vertex counts.
//!
//! The crate provides:
//!
//! - [`decision`]: the closed-form decision, explicit compatible
//!   multiplicity-matrix witnesses for every `q = 2` case, the minimum
//!   middle mass `mu`, and the achievable `+1`-multiplicity range;
//! - [`combinatorics`]: validity/compatibility predicates and exhaustive
//!   enumeration of multiplicity matrices;
//! - [`oracle`]: an independent brute-force search cross-checking the
//!   decision and `mu` at desk scale;
//! - [`realization`]: seeded randomized construction of explicit numeric
//!   orthogonal symmetric matrices realizing `q = 2`, with a verifier and
//!   exact golden fixtures.
//!
//! ```
//! use qjoin::{decision, SizeTuple};
//!
//! let m = SizeTuple::new(vec![2, 2]).unwrap();
//! let n = SizeTuple::new(vec![1, 1, 1]).unwrap();
//! assert_eq!(decision::decide_q(&m, &n).q, 3);
//!
//! let n = SizeTuple::new(vec![1, 1]).unwrap();
//! let report = decision::decide_q(&m, &n);
//! assert_eq!(report.q, 2);
//! assert!(report.witness.is_some());
//! ```

pub mod combinatorics;
pub mod decision;
pub mod model;
pub mod oracle;
pub mod realization;

pub use model::{
    DecisionReport, DenseSymMatrix, EigenvalueList, IntMatrix, ModelError, MultiplicityMatrix,
    Rule, SizeTuple, WitnessPair,
};
