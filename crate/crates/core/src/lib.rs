//! Analysis core for `shardsym`: a compositional symbolic-execution
//! vulnerability analyzer for the MinC toy language.
//!
//! The pipeline is split into phases, each usable on its own:
//!
//! - [`frontend`]: lexing, parsing and type checking of MinC sources.
//! - [`graphs`]: per-function control-flow graphs, the call graph and the
//!   bottom-up summarization order.
//! - [`symcore`]: symbolic values, path constraints, the integer constraint
//!   solver and the abstract heap shared by all engines.
//! - [`interp`]: an instrumented concrete interpreter, used as the ground
//!   truth when replaying synthesized witness inputs.
//! - [`divide`]: per-function symbolic execution producing summaries and
//!   security features.
//! - [`conquer`]: recombination of features over the call structure and
//!   weakness state-machine matching.
//! - [`verify`]: guided-backward verification of candidates, synthesizing a
//!   concrete triggering input for each confirmed finding.
//! - [`baseline`]: a whole-program forward executor without summaries, kept
//!   for performance comparisons.
//!
//! The crate is `no_std` (with `alloc`) so the analysis kernel stays free of
//! IO and timing concerns; the companion `shardsym` crate carries the CLI,
//! report files and the benchmark harness.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baseline;
pub mod config;
pub mod conquer;
pub mod divide;
pub mod frontend;
pub mod graphs;
pub mod interp;
pub mod symcore;
pub mod verify;

pub use config::AnalysisConfig;
