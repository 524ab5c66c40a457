//! Text formats: the problem syntax, DOT export and JSON reports.

mod dot;
mod parse;
mod print;
pub mod report;

pub use dot::to_dot;
pub use parse::{parse_document, parse_dlts, parse_formula, parse_problem, Document, ProblemFile};
pub use print::{print_dlts, print_problem};
