//! Control problems: an environment, fluents, a goal and the controllable actions.

use std::collections::BTreeSet;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::dlts::Dlts;
use crate::error::{spec, Result};
use crate::fluent::FluentSet;
use crate::formula::{BoolCombo, Formula};
use crate::symbol::{is_yield, ActionId};

/// Which controller semantics a problem is solved under.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Run-to-completion control: solved through the yield reduction.
    #[default]
    Rtc,
    /// Classic supervisory control: the controller never blocks the environment.
    Standard,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rtc => "rtc",
            Mode::Standard => "standard",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rtc" => Ok(Mode::Rtc),
            "standard" => Ok(Mode::Standard),
            other => Err(format!("unknown mode `{other}` (expected rtc or standard)")),
        }
    }
}

/// `G ρ ∧ ⋀ GF r_k ∧ (⋀ GF a_i -> ⋀ GF g_j)`.
///
/// `require` holds unconditional recurrence atoms; user goals leave it empty
/// and the yield reduction fills it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Goal {
    pub safety: Vec<Formula>,
    pub require: Vec<BoolCombo>,
    pub assumptions: Vec<BoolCombo>,
    pub guarantees: Vec<BoolCombo>,
}

/// The goal shape accepted from users: safety plus assumption/guarantee atoms.
pub type Sgr1Spec = Goal;

impl Goal {
    pub fn is_empty(&self) -> bool {
        self.safety.is_empty() && self.require.is_empty() && self.guarantees.is_empty() && self.assumptions.is_empty()
    }

    /// Conjunction of the safety formulas (`true` when there are none).
    pub fn safety_conjunction(&self) -> Formula {
        Formula::conj(self.safety.iter().cloned())
    }

    fn all_formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.safety
            .iter()
            .chain(&self.require)
            .chain(&self.assumptions)
            .chain(&self.guarantees)
    }

    /// Checks the goal shape and that every name it mentions is known.
    pub fn validate(&self, fluents: &FluentSet, env: &Dlts) -> Result<()> {
        if self.safety.is_empty() && self.guarantees.is_empty() && self.require.is_empty() {
            return spec("goal has neither a safety formula nor a guarantee");
        }
        for f in &self.safety {
            f.check_safety()?;
        }
        for (kind, list) in [("require", &self.require), ("assume", &self.assumptions), ("guarantee", &self.guarantees)] {
            for f in list {
                if !f.is_propositional() {
                    return spec(format!("{kind} GF atom `{f}` must be a Boolean combination of fluents"));
                }
            }
        }
        let mut result = Ok(());
        for f in self.all_formulas() {
            f.walk(&mut |n| {
                if result.is_err() {
                    return;
                }
                match n {
                    Formula::Fluent(name) if fluents.index_of(name).is_none() => {
                        result = spec(format!("undeclared fluent `{name}`"));
                    }
                    Formula::Action(a) if !env.alphabet().contains(a) => {
                        result = spec(format!("action `{a}` is not in the environment alphabet"));
                    }
                    Formula::Prop(p) if !env.props().contains(p) => {
                        result = spec(format!("proposition `{p}` is not carried by the environment"));
                    }
                    _ => {}
                }
            });
        }
        result
    }
}

/// `⟨E, φ, C⟩` together with the fluents `φ` is written over.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlProblem {
    pub env: Dlts,
    pub fluents: FluentSet,
    pub goal: Goal,
    /// Controllable actions in declaration order; the order breaks ties in synthesis.
    pub controllable: IndexSet<ActionId>,
}

impl ControlProblem {
    /// Uncontrollable actions: the environment alphabet minus the controllable ones.
    pub fn uncontrollable(&self) -> Vec<ActionId> {
        self.env
            .alphabet()
            .iter()
            .filter(|a| !self.controllable.contains(*a))
            .cloned()
            .collect()
    }

    pub fn controllable_vec(&self) -> Vec<ActionId> {
        self.controllable.iter().cloned().collect()
    }

    pub fn controllable_set(&self) -> BTreeSet<ActionId> {
        self.controllable.iter().cloned().collect()
    }

    /// Checks the problem is well formed for synthesis under `mode`.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        for a in &self.controllable {
            if !self.env.alphabet().contains(a) {
                return spec(format!("controllable action `{a}` is not in the environment alphabet"));
            }
        }
        if !self.env.is_deterministic() {
            return spec(format!("environment `{}` is not deterministic", self.env.name()));
        }
        if mode == Mode::Rtc {
            if let Some(a) = self.env.alphabet().iter().find(|a| is_yield(a)) {
                return spec(format!("`{a}` is reserved for the yield reduction"));
            }
            let yields = [crate::symbol::yield_c(), crate::symbol::yield_e()];
            if let Some(f) = self.fluents.iter().find(|f| f.mentions_any(&yields)) {
                return spec(format!("fluent `{}` mentions a reserved yield action", f.name));
            }
        }
        self.goal.validate(&self.fluents, &self.env)
    }
}
