//! Lucas-property (LP) machinery for Fibonacci, Lucas and general
//! second-order linear recurrences modulo a prime.
//!
//! A sequence `S` is LP with the prime `p` when
//! `S(n) ≡ S(n_0)·S(n_1)···S(n_r) (mod p)` for the base-`p` digits of `n`.
//! The [`lp`] module checks that congruence by brute force and compares it
//! against closed-form conditions on the index map `n ↦ a·n + b`.

pub mod error;
pub mod identities;
pub mod lp;
pub mod modmath;
pub mod sequences;
pub mod special;

pub use error::{Error, Result};
pub use lp::{
    AffineIndexMap, Counterexample, Family, GridCell, GridSummary, Lemma1Outcome, LpScan,
    LpVerdict, Reading, SequenceSpec, TheoremTarget,
};
pub use modmath::{DigitExpansion, Prime};
pub use sequences::{LinearRecurrence, PeriodInfo};
