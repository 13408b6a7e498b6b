//! A workbench for trace protocols over an emit-instrumented lambda
//! calculus.
//!
//! The pieces fit together like this: [`lang`] interprets an untyped
//! call-by-value calculus whose `emit` primitive labels reduction steps with
//! values, producing traces. [`wrappers`] provides reference libraries
//! (file, collection-with-iterators, bracketing, stacks, string
//! sanitisation) together with source-level instrumentation that emits an
//! event around every crossing of the client/library boundary. [`monitors`]
//! decides membership of the six trace languages those wrappers target,
//! both declaratively and as incremental online monitors with matching
//! verdicts. [`model`] is a finite, executable model of the heap × trace
//! resource monoid that the accompanying separation logic is interpreted
//! into, with exhaustive checks of its axioms. [`harness`] holds the
//! good/bad client catalogue, a seeded program generator and the
//! erasure differential test, and [`cli`] exposes everything as a command
//! line tool.

pub mod cli;
pub mod harness;
pub mod jsonl;
pub mod lang;
pub mod model;
pub mod monitors;
pub mod wrappers;
