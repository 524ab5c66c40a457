//! End-to-end synthesis: problem in, controller (or counterexample) out.

use serde::Serialize;

use crate::dlts::Dlts;
use crate::error::Result;
use crate::extract::extract_rtc_controller;
use crate::par::Exec;
use crate::verify::{
    check_deadlock_free, check_rtc_goal, check_rtc_legality, check_standard_goal, check_standard_legality,
    LegalityReport, Verdict,
};
use crate::game::{build_arena, package_controller, package_counterexample, solve, SolveStats};
use crate::problem::{ControlProblem, Mode};
use crate::transform::build_modified_problem;

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub mode: Mode,
    pub realizable: bool,
    /// The standard problem handed to the game solver: the input itself in
    /// standard mode, its yield reduction in RTC mode.
    pub solved: ControlProblem,
    /// Strategy of the solved problem (over `A ∪ {yieldC, yieldE}` in RTC mode).
    pub mplus: Option<Dlts>,
    /// The controller for the input problem.
    pub controller: Option<Dlts>,
    /// Environment strategy witnessing unrealizability.
    pub counterexample: Option<Dlts>,
    pub stats: SynthesisStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SynthesisStats {
    pub env_states: usize,
    pub solved_env_states: usize,
    #[serde(flatten)]
    pub solve: SolveStats,
    pub mplus_states: Option<usize>,
    pub controller_states: Option<usize>,
}

/// The problem with its environment alphabet partitioned by `controllable`.
pub fn normalize(p: &ControlProblem) -> Result<ControlProblem> {
    let mut out = p.clone();
    out.env = p.env.repartition(&p.controllable)?;
    Ok(out)
}

/// Solves `p` under `mode`.
pub fn synthesize(p: &ControlProblem, mode: Mode) -> Result<SynthesisResult> {
    let p = normalize(p)?;
    p.validate(mode)?;
    let solved = match mode {
        Mode::Rtc => build_modified_problem(&p)?,
        Mode::Standard => p.clone(),
    };
    let arena = build_arena(&solved)?;
    let sol = solve(&arena);
    let realizable = sol.wins_from(arena.initial());
    let mut stats = SynthesisStats {
        env_states: p.env.num_states(),
        solved_env_states: solved.env.num_states(),
        solve: sol.stats.clone(),
        ..SynthesisStats::default()
    };
    if !realizable {
        let cex = package_counterexample(&arena, &sol, &solved)?;
        return Ok(SynthesisResult {
            mode,
            realizable,
            solved,
            mplus: None,
            controller: None,
            counterexample: Some(cex),
            stats,
        });
    }
    let mplus = package_controller(&arena, &sol, &solved)?;
    let controller = match mode {
        Mode::Rtc => extract_rtc_controller(&mplus)?.with_name(format!("M({})", p.env.name())),
        Mode::Standard => mplus.clone().with_name(format!("M({})", p.env.name())),
    };
    stats.mplus_states = Some(mplus.num_states());
    stats.controller_states = Some(controller.num_states());
    Ok(SynthesisResult {
        mode,
        realizable,
        solved,
        mplus: Some(mplus),
        controller: Some(controller),
        counterexample: None,
        stats,
    })
}

/// The three checks a controller must pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub legality: LegalityReport,
    pub deadlock_free: Verdict,
    pub goal: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.legality.verdict && self.deadlock_free.holds && self.goal.holds
    }
}

/// Checks legality, deadlock freedom and goal satisfaction of `m` for `p` under `mode`.
pub fn verify_controller(p: &ControlProblem, m: &Dlts, mode: Mode, exec: Exec) -> Result<VerificationReport> {
    let p = normalize(p)?;
    let (legality, goal) = match mode {
        Mode::Rtc => (
            check_rtc_legality(&p.env, m)?,
            check_rtc_goal(&p.env, m, &p.fluents, &p.goal, exec)?,
        ),
        Mode::Standard => (
            check_standard_legality(&p.env, m)?,
            check_standard_goal(&p.env, m, &p.fluents, &p.goal, exec)?,
        ),
    };
    Ok(VerificationReport { mode, legality, deadlock_free: check_deadlock_free(&p.env, m)?, goal })
}
