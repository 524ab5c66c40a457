//! Shared test support: random instance generators and reference oracles that
//! re-derive fluent values, formula truth and RTC realizability from first
//! principles, without going through the tracker, monitor or game pipeline.
#![allow(dead_code)]

pub mod direct;
pub mod fltl;
pub mod gen;

use std::path::PathBuf;

use rtc_core::io::{parse_problem, ProblemFile};

pub fn fixture(name: &str) -> ProblemFile {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_problem(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
