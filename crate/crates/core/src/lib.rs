//! Toolkit for the tml2 modeling language: things with statecharts and
//! data-analytics blocks, wired into configurations.
//!
//! The pipeline is [`parse`] → [`validate`] → either [`simulate`] (the
//! deterministic interpreter, with the native [`ml`] engine behind the DA
//! statements) or [`generate`] (standalone Python DA scripts).

pub mod ast;
pub mod codegen;
pub mod diagnostic;
pub mod interp;
pub mod ml;
pub mod parser;
pub mod validate;

pub use ast::{equals_structural, Model};
pub use codegen::{generate, write_artifacts, CodegenError, GeneratedArtifact};
pub use diagnostic::{Code, Diagnostic, Severity};
pub use interp::{simulate, SimError, SimResult, Simulator};
pub use parser::{parse, pretty_print};
pub use validate::{validate, ValidationReport};
