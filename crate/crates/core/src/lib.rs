//! Infinitary action logic with multiplexing (!^m ACTω): syntax, calculus,
//! ordinal ranks, the reduction from computable infinitary arithmetic into
//! derivability, the bottom-top decision procedure for encoded sequents and
//! the reverse arithmetization of derivability.

pub mod calculus;
pub mod computability;
pub mod decider;
pub mod der;
pub mod encoding;
pub mod ordinals;
pub mod rewriting;
pub mod search;
pub mod suites;
pub mod syntax;
