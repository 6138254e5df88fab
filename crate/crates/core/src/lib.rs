//! Turns Java-like source trees into ML-ready datasets.
//!
//! Stages, each usable on its own: [`cst`] (lossless parsing), [`ast`]
//! (simplification), [`types`] (identifier types), [`granularity`],
//! [`filters`], [`label`], [`paths`] (path contexts), [`storage`], and
//! [`pipeline`], which runs them all from a JSON config.

pub mod ast;
pub mod cst;
pub mod error;
pub mod filters;
pub mod granularity;
pub mod label;
pub mod paths;
pub mod pipeline;
pub mod storage;
pub mod subtokens;
pub mod types;
