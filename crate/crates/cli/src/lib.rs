//! Library half of the command-line frontend: expression and word grammars,
//! JSON encodings, and command dispatch. The `amalg` binary is a thin shim
//! over [`commands::run`].

pub mod commands;
pub mod expr;
pub mod json;
pub mod ringspec;
pub mod words;

pub use commands::run;
