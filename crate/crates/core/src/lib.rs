//! Exact chromatic polynomials and DP color functions of small graphs.
//!
//! The crate is `no_std` (with `alloc`) and contains only the algorithmic
//! core: graphs and their structural queries, integer polynomials,
//! m-fold covers with full matchings, transversal counting, and the exact
//! minimization that yields `P_DP(G, m)`. File formats, the command line
//! front end and the worker pool live in the `dpchroma` crate.
//!
//! Every count produced here is exact. Operations whose cost grows
//! exponentially are guarded by named limits and fail with
//! [`Error::Capacity`] instead of running unbounded.

#![no_std]

extern crate alloc;

pub mod chrompoly;
pub mod counter;
pub mod cover;
pub mod dpfunction;
mod error;
pub mod generators;
pub mod graph;
pub mod perm;
pub mod poly;
pub mod report;

pub use chrompoly::{
    classify_spanning_subgraphs, coefficient_report, deletion_contraction, whitney_expansion,
    SubgraphClassification, MAX_SUBSET_EDGES,
};
pub use counter::{
    bad_intersection_count, brute_force_count, count_colorings, count_full_transversals,
    inclusion_exclusion_count, verify_lemma_formulas2, verify_lemma_three,
};
pub use cover::{canonical_cover, normalize, twist_stats, CoverSpace, DPCover, TwistStats};
pub use dpfunction::{cone_scan, dp_color_function, gap_table, ConeReport, DPValue, GapReport};
pub use error::{Error, Result};
pub use graph::{EdgeSubset, Graph};
pub use perm::Perm;
pub use poly::IntPolynomial;
pub use report::{Check, Report, Status};
