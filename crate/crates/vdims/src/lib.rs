//! Computation engine for the dimension tables of spaces of finite type
//! invariants (`V`) and weight systems (`W`) of virtual knots.
//!
//! The engine enumerates arrow-diagram bases on round, long and descending
//! skeletons, assembles the relation matrices that define each of the 18
//! theory variants (skeleton x R2/R3 treatment x R1 treatment), and computes
//! quotient dimensions through exact sparse rank over several prime fields.
//!
//! Two independent pipelines produce the same numbers:
//!
//! * [`relations`] builds the weight-system spaces from the 6T, XII and FI
//!   relations and yields `dim W_n`,
//! * [`polyak`] builds the truncated algebra of signed arrow diagrams modulo
//!   Reidemeister-move relations and yields `dim V_{n/n-1}`.
//!
//! Agreement between the two (and with the built-in reference tables in
//! [`golden`]) is checked by [`report::verify_reports`] and by the
//! `acceptance` integration test suite.
//!
//! ```
//! use vdims::case::{CaseSpec, R1Mode, R23Mode};
//! use vdims::diagram::SkeletonKind;
//! use vdims::linalg::DEFAULT_PRIMES;
//! use vdims::polyak::{dim_v_quotient, SignMode};
//!
//! let case = CaseSpec::new(SkeletonKind::Long, R23Mode::BraidLike, R1Mode::NoR1);
//! let w = vdims::relations::dim_weight_systems(&case, 2, &DEFAULT_PRIMES, None).unwrap();
//! let v = dim_v_quotient(&case, 2, SignMode::PositiveOnly, &DEFAULT_PRIMES, None).unwrap();
//! assert_eq!((w.dim, v), (7, 7));
//! ```

pub mod cache;
pub mod case;
pub mod diagram;
pub mod embed;
pub mod golden;
pub mod linalg;
mod par;
pub mod polyak;
pub mod relations;
pub mod report;

/// Version tag for all convention tables (relation templates, canonical
/// forms). Part of every cache key, so convention changes invalidate
/// previously cached results.
pub const CONVENTIONS_VERSION: &str = "1";
