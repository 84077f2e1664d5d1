//! Binary images from row and column projections.
//!
//! Given row sums and column sums, this crate measures how far the data is from
//! determining a unique image (the parameter alpha), and constructs two images
//! with those projections that differ in at least `2 alpha + 2` cells. A
//! brute-force enumerator checks the construction and the known bounds on
//! small instances.
//!
//! ```
//! use tomo_core::{canonicalize, diverge};
//!
//! let p = canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3]);
//! let pair = diverge(&p).unwrap();
//! assert_eq!(pair.alpha, 4);
//! assert!(pair.diff.size >= pair.guarantee);
//! ```

pub mod cli;
pub mod construct;
pub mod error;
pub mod image;
pub mod neighbour;
pub mod oracle;
pub mod pairs;
pub mod profile;

pub use construct::{
    apply_move, certify, construct_f2, construct_f3, diverge, diverge_with, BatchCase,
    BatchContext, BatchRowOrder, ColumnAccount, ColumnRole, DivergeOptions, DivergentPair,
    MoveRecord, RowChoicePolicy,
};
pub use error::{Result, TomoError};
pub use image::{symmetric_difference, BinaryImage, DiffSide, SymmetricDifference};
pub use neighbour::{build_neighbour, neighbour_column_sums, NeighbourAnalysis};
pub use oracle::{
    audit, audit_bounds, enumerate_solutions, make_family, max_pairwise_symdiff, EnumerationReport,
    FamilyTag, InstanceFamily,
};
pub use pairs::{
    analyze_pairs, column_pairs, designate_final_columns, group_pairs, ColumnPair, Condition,
    PairAnalysis, PairGroup, PairSide,
};
pub use profile::{canonicalize, is_consistent, ProfileSpec, ProjectionProfile};
