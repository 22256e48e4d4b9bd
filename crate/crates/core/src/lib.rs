//! Constraint-based type inference for a small Haskell-like language, with
//! type-error slicing: every type error is reported with all the locations
//! that contribute to it, the conflicting types an expression can take, and
//! a step-by-step explanation.

pub mod check;
pub mod constrain;
pub mod diagnose;
pub mod json;
pub mod par;
pub mod render;
pub mod solve;
pub mod span;
pub mod syntax;
pub mod types;

pub use check::{analyze, check, check_with, Analysis, CheckResult, Options};
pub use json::to_json;
pub use par::Strategy;
pub use render::{render, Mode};
