//! Exact-arithmetic calculus of cyclic quotient and cusp surface singularities.
//!
//! The crate works with four combinatorial gadgets:
//!
//! * **Chains** `[b_1,...,b_r]` of rational curves (entry = minus self-intersection)
//!   and their Hirzebruch-Jung continued fractions, T-chain recognition, log
//!   discrepancies and cores ([`chain`]).
//! * **Dual graphs** of resolutions, with exact negative-definiteness checks and
//!   log discrepancy solves, including the four strictly-lc fork shapes ([`graph`]).
//! * **T-trains** over chains: blow-up moves, the ample condition, P-admissibility
//!   search, P-resolution enumeration and the lambda invariant ([`trains`], [`presol`]).
//! * **Cusp cycles**: canonical forms, the Steenbrink bound, cycle duality, the
//!   closed-form smoothability deciders, and a brute-force anticanonical realizer
//!   ([`cusp`], [`anticanon`]).
//!
//! All scalar arithmetic is exact rational; there is no floating point anywhere.

pub mod anticanon;
pub mod chain;
pub mod cusp;
pub mod graph;
pub mod presol;
pub mod rat;
pub mod trains;
pub mod verify;

pub use chain::{Chain, ChainError, CyclicType, TClass};
pub use cusp::{Cycle, CuspDecision, CuspError, Rule};
pub use graph::{DualGraph, GraphError, LcStatus, LogDiscProfile};
pub use rat::Rat;
pub use trains::{TTrain, TrainError, TrainState, Verdict};
