//! JSON reports written by the command-line tool.

use serde_json::{json, Value};

use crate::dlts::Dlts;
use crate::pipeline::{SynthesisResult, VerificationReport};

pub const SCHEMA: u32 = 1;

fn machine_summary(d: &Dlts) -> Value {
    json!({ "name": d.name(), "states": d.num_states(), "transitions": d.num_transitions() })
}

pub fn synthesis_report(input: &str, r: &SynthesisResult) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "synthesize",
        "input": input,
        "mode": r.mode,
        "realizable": r.realizable,
        "stats": r.stats,
        "controller": r.controller.as_ref().map(machine_summary),
        "mplus": r.mplus.as_ref().map(machine_summary),
        "counterexample": r.counterexample.as_ref().map(machine_summary),
    })
}

pub fn verification_report(env_file: &str, controller_file: &str, r: &VerificationReport) -> Value {
    json!({
        "schema": SCHEMA,
        "command": "verify",
        "environment": env_file,
        "controller": controller_file,
        "passed": r.passed(),
        "result": r,
    })
}
