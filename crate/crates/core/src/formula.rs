//! Goal formulas: Boolean combinations of fluents and the safety fragment of
//! FLTL built from `G` and `W`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{spec, usage, Result};
use crate::fluent::{FluentSet, FluentValuation};
use crate::symbol::{ActionId, PropId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(bool),
    /// A declared fluent, by name.
    Fluent(String),
    /// The action fluent `ℓ̇`: true exactly at positions whose action is `ℓ`.
    Action(ActionId),
    /// A state proposition of the state entered at the position.
    Prop(PropId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Always(Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    /// Accepted by the parser so that it can be rejected with a proper error.
    Until(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
}

/// A formula without temporal operators.
pub type BoolCombo = Formula;

impl Formula {
    pub fn fluent(name: impl Into<String>) -> Formula {
        Formula::Fluent(name.into())
    }

    pub fn action(a: impl Into<ActionId>) -> Formula {
        Formula::Action(a.into())
    }

    pub fn prop(p: impl Into<PropId>) -> Formula {
        Formula::Prop(p.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn always(self) -> Formula {
        Formula::Always(Box::new(self))
    }

    pub fn weak_until(self, other: Formula) -> Formula {
        Formula::WeakUntil(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Const(false))
    }

    /// `⋁_{ℓ∈set} ℓ̇`.
    pub fn any_action<'a>(set: impl IntoIterator<Item = &'a ActionId>) -> Formula {
        Formula::disj(set.into_iter().cloned().map(Formula::Action))
    }

    /// `⋀_{ℓ∈set} ¬ℓ̇`.
    pub fn no_action<'a>(set: impl IntoIterator<Item = &'a ActionId>) -> Formula {
        Formula::conj(set.into_iter().cloned().map(|a| Formula::Action(a).not()))
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Fluent(_) | Formula::Action(_) | Formula::Prop(_) => true,
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Always(_) | Formula::WeakUntil(..) | Formula::Until(..) | Formula::Eventually(_) => false,
        }
    }

    /// Checks membership in the safety fragment: temporal operators are `G` and `W`
    /// and occur only positively.
    pub fn check_safety(&self) -> Result<()> {
        match self {
            Formula::Const(_) | Formula::Fluent(_) | Formula::Action(_) | Formula::Prop(_) => Ok(()),
            Formula::Until(..) | Formula::Eventually(_) => spec(format!(
                "`{self}` is not a safety formula: goals combine a safety part with GF atoms, \
                 use `assume GF`/`guarantee GF` for liveness"
            )),
            Formula::Not(a) if a.is_propositional() => Ok(()),
            Formula::Not(_) => spec(format!("temporal operator under negation in `{self}`")),
            Formula::Implies(a, b) if a.is_propositional() => b.check_safety(),
            Formula::Implies(..) => spec(format!("temporal operator on the left of `->` in `{self}`")),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::WeakUntil(a, b) => {
                a.check_safety()?;
                b.check_safety()
            }
            Formula::Always(a) => a.check_safety(),
        }
    }

    /// Visits every node, parents before children.
    pub fn walk(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Const(_) | Formula::Fluent(_) | Formula::Action(_) | Formula::Prop(_) => {}
            Formula::Not(a) | Formula::Always(a) | Formula::Eventually(a) => a.walk(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Until(a, b) => {
                a.walk(f);
                b.walk(f);
            }
        }
    }

    pub fn actions(&self) -> BTreeSet<ActionId> {
        let mut out = BTreeSet::new();
        self.walk(&mut |n| {
            if let Formula::Action(a) = n {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn fluent_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |n| {
            if let Formula::Fluent(a) = n {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Resolves a propositional formula against `fluents`.
    pub fn compile(&self, fluents: &FluentSet) -> Result<Atom> {
        Ok(match self {
            Formula::Const(b) => Atom::Const(*b),
            Formula::Fluent(name) => match fluents.index_of(name) {
                Some(i) => Atom::Fluent(i),
                None => return usage(format!("undeclared fluent `{name}`")),
            },
            Formula::Action(a) => Atom::Action(a.clone()),
            Formula::Prop(p) => Atom::Prop(p.clone()),
            Formula::Not(a) => Atom::Not(Box::new(a.compile(fluents)?)),
            Formula::And(a, b) => Atom::And(vec![a.compile(fluents)?, b.compile(fluents)?]),
            Formula::Or(a, b) => Atom::Or(vec![a.compile(fluents)?, b.compile(fluents)?]),
            Formula::Implies(a, b) => {
                Atom::Or(vec![Atom::Not(Box::new(a.compile(fluents)?)), b.compile(fluents)?])
            }
            _ => return spec(format!("`{self}` is not a Boolean combination of fluents")),
        })
    }

    /// Evaluates a propositional formula at a position.
    pub fn eval(&self, fluents: &FluentSet, pos: &Position<'_>) -> Result<bool> {
        Ok(self.compile(fluents)?.eval(pos))
    }
}

/// `Asap(ψ) = (⋀_{ℓ∈C} ¬ℓ̇) W ((⋁_{ℓ∈C} ℓ̇) W ψ)`.
pub fn asap(psi: Formula, controllable: &[ActionId]) -> Formula {
    Formula::no_action(controllable).weak_until(Formula::any_action(controllable).weak_until(psi))
}

/// `urgRsp(φ, ψ) = G(φ -> Asap(ψ))`.
pub fn urg_rsp(phi: Formula, psi: Formula, controllable: &[ActionId]) -> Formula {
    phi.implies(asap(psi, controllable)).always()
}

/// What a propositional formula can observe at one position of a run.
#[derive(Clone, Copy, Debug)]
pub struct Position<'a> {
    pub valuation: FluentValuation,
    /// The action taken at this position.
    pub action: Option<&'a ActionId>,
    /// Labels of the state entered by that action.
    pub labels: &'a BTreeSet<PropId>,
}

/// A propositional formula with fluent names resolved to indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Const(bool),
    Fluent(usize),
    Action(ActionId),
    Prop(PropId),
    Not(Box<Atom>),
    And(Vec<Atom>),
    Or(Vec<Atom>),
}

impl Atom {
    pub fn eval(&self, pos: &Position<'_>) -> bool {
        match self {
            Atom::Const(b) => *b,
            Atom::Fluent(i) => pos.valuation.get(*i),
            Atom::Action(a) => pos.action == Some(a),
            Atom::Prop(p) => pos.labels.contains(p),
            Atom::Not(a) => !a.eval(pos),
            Atom::And(xs) => xs.iter().all(|x| x.eval(pos)),
            Atom::Or(xs) => xs.iter().any(|x| x.eval(pos)),
        }
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::WeakUntil(..) | Formula::Until(..) => 3,
        Formula::Not(_) | Formula::Always(_) | Formula::Eventually(_) => 4,
        _ => 5,
    }
}

/// Prints in the concrete goal syntax, parenthesizing every compound operand.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, x: &Formula| {
            if prec(x) < 5 {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        };
        match self {
            Formula::Const(b) => write!(f, "{b}"),
            Formula::Fluent(n) => write!(f, "{n}"),
            Formula::Action(a) => write!(f, "'{a}"),
            Formula::Prop(p) => write!(f, "@{p}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                sub(f, a)
            }
            Formula::Always(a) => {
                f.write_str("G ")?;
                sub(f, a)
            }
            Formula::Eventually(a) => {
                f.write_str("F ")?;
                sub(f, a)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::WeakUntil(a, b) | Formula::Until(a, b) => {
                let op = match self {
                    Formula::And(..) => "&&",
                    Formula::Or(..) => "||",
                    Formula::Implies(..) => "->",
                    Formula::WeakUntil(..) => "W",
                    _ => "U",
                };
                sub(f, a)?;
                write!(f, " {op} ")?;
                sub(f, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluent::Fluent;

    fn a(s: &str) -> ActionId {
        ActionId::new(s)
    }

    #[test]
    fn safety_fragment() {
        let f = Formula::fluent("f");
        assert!(f.clone().always().check_safety().is_ok());
        assert!(f.clone().implies(f.clone().always()).check_safety().is_ok());
        assert!(f.clone().always().not().check_safety().is_err());
        assert!(f.clone().always().implies(f.clone()).check_safety().is_err());
        let until = Formula::Until(Box::new(f.clone()), Box::new(f.clone()));
        assert!(matches!(until.check_safety(), Err(crate::Error::Spec(_))));
        assert!(Formula::Eventually(Box::new(f)).check_safety().is_err());
    }

    #[test]
    fn asap_shape() {
        let c = [a("land"), a("go")];
        let f = asap(Formula::action("land"), &c);
        assert_eq!(f.to_string(), "((!'land) && (!'go)) W (('land || 'go) W 'land)");
        let empty = asap(Formula::action("x"), &[]);
        assert_eq!(empty.to_string(), "true W (false W 'x)");
        let u = urg_rsp(Formula::action("lowBat"), Formula::action("econoMode"), &[a("econoMode")]);
        assert_eq!(u.to_string(), "G ('lowBat -> ((!'econoMode) W ('econoMode W 'econoMode)))");
    }

    #[test]
    fn evaluation_of_combos() {
        let set = FluentSet::new([
            Fluent::transition("f", [a("x")], [], true).unwrap(),
            Fluent::transition("g", [a("y")], [], false).unwrap(),
        ])
        .unwrap();
        let labels = BTreeSet::new();
        let v = set.initial_valuation(&labels);
        let pos = Position { valuation: v, action: Some(&a("z")), labels: &labels };
        assert!(!Formula::fluent("f").not().eval(&set, &pos).unwrap());
        assert!(!Formula::fluent("f").and(Formula::fluent("g")).eval(&set, &pos).unwrap());
        let v = set.step_valuation(v, &a("y"), &labels);
        let pos = Position { valuation: v, action: Some(&a("y")), labels: &labels };
        assert!(Formula::fluent("g").or(Formula::fluent("q")).compile(&set).is_err());
        assert!(Formula::fluent("f").not().or(Formula::fluent("g")).eval(&set, &pos).unwrap());
        assert!(Formula::action("y").eval(&set, &pos).unwrap());
        // a deadlocked state carries no enabledness props
        let pass = Formula::conj([Formula::prop("pE.lowBat").not(), Formula::prop("pE.arrive").not()]);
        assert!(pass.eval(&set, &pos).unwrap());
    }
}
