//! Synthesis of run-to-completion controllers for discrete event systems.

pub mod dlts;
pub mod error;
pub mod extract;
pub mod fluent;
pub mod formula;
pub mod game;
pub mod io;
pub mod monitor;
pub mod par;
pub mod pipeline;
pub mod problem;
pub mod scc;
pub mod symbol;
pub mod transform;
pub mod verify;

pub use dlts::{Alphabet, Dlts, DltsBuilder, Execution, Side};
pub use error::{Error, Result};
pub use fluent::{Fluent, FluentKind, FluentSet, FluentValuation};
pub use formula::{asap, urg_rsp, Atom, BoolCombo, Formula, Position};
pub use monitor::Monitor;
pub use symbol::{ActionId, PropId};
pub use problem::{ControlProblem, Goal, Mode, Sgr1Spec};
pub use par::Exec;
pub use pipeline::{synthesize, verify_controller, SynthesisResult, VerificationReport};
