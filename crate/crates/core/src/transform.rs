//! Reduction of run-to-completion control to standard control.
//!
//! The environment is composed with a two-state yield machine that hands the
//! turn back and forth through `yieldE` (environment gives up the turn) and
//! `yieldC` (controller gives it back). Goal atoms are adjusted so that the
//! inserted yield positions are invisible to the user's goal.

use indexmap::IndexSet;

use crate::dlts::{enabledness_prop, Alphabet, Dlts, DltsBuilder, Side};
use crate::error::{model, spec, Result};
use crate::fluent::{Fluent, FluentSet};
use crate::formula::Formula;
use crate::problem::{ControlProblem, Goal, Mode};
use crate::symbol::{is_yield, yield_c, yield_e, ActionId};

/// Tag of the environment's enabledness propositions (`pE.ℓ`).
pub const ENV_TAG: &str = "E";
/// Tag of the controller's enabledness propositions (`pM.ℓ`).
pub const CTRL_TAG: &str = "M";
/// Fluent that holds while the environment has the turn.
pub const EN_E: &str = "en_e";
/// Fluent that holds while the controller has the turn.
pub const EN_M: &str = "en_m";

/// Atoms shared by the reduction and by the verifier.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedAtoms {
    /// Some controllable action is taken.
    pub c: Formula,
    /// Some uncontrollable action is taken.
    pub u: Formula,
    /// The environment has no uncontrollable action available.
    pub pass_e: Formula,
    /// The controller enables no controllable action.
    pub pass_m: Formula,
    /// No controllable action is available in the environment.
    pub pass_c_env: Formula,
    pub en_e: Formula,
    pub en_m: Formula,
    /// Some action of the original alphabet is taken.
    pub all_a: Formula,
}

impl DerivedAtoms {
    pub fn new(uncontrollable: &[ActionId], controllable: &[ActionId]) -> Self {
        let none_enabled = |tag: &str, set: &[ActionId]| {
            Formula::conj(set.iter().map(|a| Formula::Prop(enabledness_prop(tag, a)).not()))
        };
        DerivedAtoms {
            c: Formula::any_action(controllable),
            u: Formula::any_action(uncontrollable),
            pass_e: none_enabled(ENV_TAG, uncontrollable),
            pass_m: none_enabled(CTRL_TAG, controllable),
            pass_c_env: none_enabled(ENV_TAG, controllable),
            en_e: Formula::fluent(EN_E),
            en_m: Formula::fluent(EN_M),
            all_a: Formula::any_action(controllable.iter().chain(uncontrollable)),
        }
    }
}

/// The yield machine over `U` and `C`: state `e` (initial) loops on `U` and
/// moves to `c` on `yieldE`; state `c` loops on `C` and returns on `yieldC`.
pub fn build_yield(uncontrollable: &[ActionId], controllable: &[ActionId]) -> Result<Dlts> {
    if let Some(a) = uncontrollable.iter().chain(controllable).find(|a| is_yield(a)) {
        return model(format!("`{a}` is reserved for the yield machine"));
    }
    let alphabet = Alphabet::new(
        controllable.iter().cloned().chain([yield_c()]),
        uncontrollable.iter().cloned().chain([yield_e()]),
    )?;
    let mut b = DltsBuilder::new("Y", alphabet);
    let e = b.state("e");
    let c = b.state("c");
    b.side(e, Side::Env).side(c, Side::Ctrl).initial(e);
    b.transition(c, yield_c(), e).transition(e, yield_e(), c);
    for a in uncontrollable {
        b.transition(e, a.clone(), e);
    }
    for a in controllable {
        b.transition(c, a.clone(), c);
    }
    b.build()
}

/// Drops yield transitions into states where the other side can only yield back,
/// then restricts to reachable states.
pub fn remove_livelock(n: &Dlts) -> Dlts {
    let busy: Vec<bool> = n.states().map(|s| n.out(s).iter().any(|(a, _)| !is_yield(a))).collect();
    n.filter_transitions(|_, a, t| !is_yield(a) || busy[t]).reachable()
}

/// Relativises a safety formula to the positions carrying an action of `A`.
fn relativize(f: &Formula, all_a: &Formula) -> Formula {
    match f {
        Formula::Always(x) => all_a.clone().not().or(relativize(x, all_a)).always(),
        Formula::WeakUntil(x, y) => all_a
            .clone()
            .not()
            .or(relativize(x, all_a))
            .weak_until(all_a.clone().and(relativize(y, all_a))),
        Formula::And(x, y) => relativize(x, all_a).and(relativize(y, all_a)),
        Formula::Or(x, y) => relativize(x, all_a).or(relativize(y, all_a)),
        Formula::Implies(x, y) => x.as_ref().clone().implies(relativize(y, all_a)),
        other => other.clone(),
    }
}

/// A safety formula evaluated from the first non-yield position on, with every
/// nested obligation checked on non-yield positions only.
pub fn relativize_safety(f: &Formula, all_a: &Formula) -> Formula {
    match f {
        Formula::Always(_) => relativize(f, all_a),
        _ => all_a.clone().not().weak_until(all_a.clone().and(relativize(f, all_a))),
    }
}

/// Builds the standard control problem whose solutions yield RTC controllers.
///
/// Environment: `live(annot_E(E) ∥ Y)`. The enabledness propositions are added
/// before composing with `Y`, so `pE.ℓ` reports availability in the original
/// environment at both turn copies of a state.
///
/// Goal: safety relativised to non-yield positions; required `en_e ∨ pass_E`;
/// assumptions `en_m ∨ ⋀_C ¬pE.ℓ`, each `a_i ∧ A` and `A`; guarantees `g_j ∧ A`.
/// Controllable: `C ∪ {yieldC}`.
pub fn build_modified_problem(p: &ControlProblem) -> Result<ControlProblem> {
    p.validate(Mode::Rtc)?;
    if !p.goal.require.is_empty() {
        return spec("unconditional recurrence atoms are reserved for the yield reduction");
    }
    let u = p.uncontrollable();
    let c = p.controllable_vec();
    let y = build_yield(&u, &c)?;
    let annotated = p.env.annotate_enabledness(ENV_TAG)?;
    let env = remove_livelock(&Dlts::parallel_compose(&annotated, &y)?).with_name(format!("live({}||Y)", p.env.name()));

    let mut fluents = FluentSet::new(p.fluents.iter().cloned())?;
    for name in [EN_E, EN_M] {
        if fluents.index_of(name).is_some() {
            return model(format!("fluent name `{name}` is reserved for the yield reduction"));
        }
    }
    fluents.push(Fluent::transition(EN_E, [yield_c()], [yield_e()], true)?)?;
    fluents.push(Fluent::transition(EN_M, [yield_e()], [yield_c()], false)?)?;

    let atoms = DerivedAtoms::new(&u, &c);
    let all_a = &atoms.all_a;
    let only_real = |f: &Formula| f.clone().and(all_a.clone());
    let goal = Goal {
        safety: p.goal.safety.iter().map(|f| relativize_safety(f, all_a)).collect(),
        require: vec![atoms.en_e.clone().or(atoms.pass_e.clone())],
        assumptions: std::iter::once(atoms.en_m.clone().or(atoms.pass_c_env.clone()))
            .chain(p.goal.assumptions.iter().map(only_real))
            .chain([all_a.clone()])
            .collect(),
        guarantees: p.goal.guarantees.iter().map(only_real).collect(),
    };
    let mut controllable: IndexSet<ActionId> = p.controllable.clone();
    controllable.insert(yield_c());
    let out = ControlProblem { env, fluents, goal, controllable };
    out.validate(Mode::Standard)?;
    Ok(out)
}
