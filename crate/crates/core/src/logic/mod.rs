//! First-order formulas over sets: parsing, stratification, and evaluation
//! over finite universes.

mod ast;
mod eval;
mod parse;
mod stratify;

pub use ast::Formula;
pub use eval::{evaluate, EvalError};
pub use parse::parse_formula;
pub use stratify::{stratify, AtomKind, StratResult, WitnessStep};
