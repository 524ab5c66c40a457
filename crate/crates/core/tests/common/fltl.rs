//! Direct FLTL semantics over explicit words.
//!
//! Fluent values come from the closed-form definition (the most recent
//! initiating action is not followed by a terminating one), and temporal
//! operators are evaluated as fixpoints over the positions of a finite or
//! lasso-shaped word.

use std::collections::BTreeSet;

use rtc_core::{ActionId, Dlts, Execution, Fluent, FluentKind, FluentSet, Formula, Goal, PropId};

/// A word of positions: `actions[i]` is taken at position `i` and enters a
/// state labelled `labels[i]`. For a lasso, position `len - 1` is followed by
/// `loop_start`.
#[derive(Clone, Debug)]
pub struct Word {
    pub actions: Vec<ActionId>,
    pub labels: Vec<BTreeSet<PropId>>,
    pub loop_start: Option<usize>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    fn next(&self, i: usize) -> Option<usize> {
        if i + 1 < self.len() {
            Some(i + 1)
        } else {
            self.loop_start
        }
    }

    /// Finite word of a run of `d` (the initial configuration is not a position).
    pub fn of_run(d: &Dlts, states: &[usize], actions: &[ActionId]) -> Word {
        Word {
            actions: actions.to_vec(),
            labels: states[1..].iter().map(|&s| d.labels(s).clone()).collect(),
            loop_start: None,
        }
    }

    /// Word of a lasso with the cycle unrolled once more, so that every fluent
    /// is periodic on the looping part.
    pub fn of_lasso(d: &Dlts, run: &Execution) -> Word {
        let k = run.cycle_start.expect("lasso");
        let (mut states, mut actions) = (run.states.clone(), run.actions.clone());
        let first = actions.len();
        states.extend_from_slice(&run.states[k + 1..]);
        actions.extend_from_slice(&run.actions[k..]);
        let mut w = Word::of_run(d, &states, &actions);
        w.loop_start = Some(first);
        w
    }

    /// Positions visited infinitely often.
    pub fn recurring(&self) -> std::ops::Range<usize> {
        match self.loop_start {
            Some(k) => k..self.len(),
            None => 0..0,
        }
    }
}

/// Closed-form fluent value at position `i`.
pub fn fluent_holds(f: &Fluent, w: &Word, i: usize) -> bool {
    match &f.kind {
        FluentKind::Prop(p) => w.labels[i].contains(p),
        FluentKind::Transition { initiating, terminating, initially } => {
            let untouched = |from: usize| (from..=i).all(|k| !terminating.contains(&w.actions[k]));
            (*initially && untouched(0))
                || (0..=i).any(|j| initiating.contains(&w.actions[j]) && untouched(j + 1))
        }
    }
}

/// Truth of a temporal-operator-free formula at position `i`.
pub fn atom_holds(f: &Formula, fluents: &FluentSet, w: &Word, i: usize) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Fluent(name) => fluent_holds(fluents.by_name(name).expect("declared fluent"), w, i),
        Formula::Action(a) => &w.actions[i] == a,
        Formula::Prop(p) => w.labels[i].contains(p),
        Formula::Not(x) => !atom_holds(x, fluents, w, i),
        Formula::And(x, y) => atom_holds(x, fluents, w, i) && atom_holds(y, fluents, w, i),
        Formula::Or(x, y) => atom_holds(x, fluents, w, i) || atom_holds(y, fluents, w, i),
        Formula::Implies(x, y) => !atom_holds(x, fluents, w, i) || atom_holds(y, fluents, w, i),
        other => panic!("`{other}` is not propositional"),
    }
}

/// Truth of `f` at every position. Past the end of a finite word `G` and `W`
/// hold and `U`, `F` fail, so a finite word is rejected exactly when it is a
/// bad prefix of a safety formula.
pub fn holds_everywhere(f: &Formula, fluents: &FluentSet, w: &Word) -> Vec<bool> {
    let n = w.len();
    let fixpoint = |a: Vec<bool>, b: Vec<bool>, greatest: bool| {
        let mut x = vec![greatest; n];
        for _ in 0..=n {
            let next: Vec<bool> = (0..n)
                .map(|i| b[i] || (a[i] && w.next(i).map_or(greatest, |j| x[j])))
                .collect();
            if next == x {
                break;
            }
            x = next;
        }
        x
    };
    match f {
        Formula::Always(x) => fixpoint(holds_everywhere(x, fluents, w), vec![false; n], true),
        Formula::Eventually(x) => fixpoint(vec![true; n], holds_everywhere(x, fluents, w), false),
        Formula::WeakUntil(x, y) => fixpoint(holds_everywhere(x, fluents, w), holds_everywhere(y, fluents, w), true),
        Formula::Until(x, y) => fixpoint(holds_everywhere(x, fluents, w), holds_everywhere(y, fluents, w), false),
        Formula::Not(x) => holds_everywhere(x, fluents, w).into_iter().map(|v| !v).collect(),
        Formula::And(x, y) | Formula::Or(x, y) | Formula::Implies(x, y) => {
            let (a, b) = (holds_everywhere(x, fluents, w), holds_everywhere(y, fluents, w));
            (0..n)
                .map(|i| match f {
                    Formula::And(..) => a[i] && b[i],
                    Formula::Or(..) => a[i] || b[i],
                    _ => !a[i] || b[i],
                })
                .collect()
        }
        atom => (0..n).map(|i| atom_holds(atom, fluents, w, i)).collect(),
    }
}

/// Truth of `f` on the whole word (at its first position; the empty word satisfies everything).
pub fn holds(f: &Formula, fluents: &FluentSet, w: &Word) -> bool {
    w.len() == 0 || holds_everywhere(f, fluents, w)[0]
}

fn recurs(f: &Formula, fluents: &FluentSet, w: &Word) -> bool {
    w.recurring().any(|i| atom_holds(f, fluents, w, i))
}

/// Whether a word satisfies `G ρ ∧ ⋀ GF r ∧ (⋀ GF a -> ⋀ GF g)`. Finite words
/// are judged on safety only.
pub fn goal_holds(goal: &Goal, fluents: &FluentSet, w: &Word) -> bool {
    if !goal.safety.iter().all(|f| holds(f, fluents, w)) {
        return false;
    }
    if w.loop_start.is_none() {
        return true;
    }
    goal.require.iter().all(|f| recurs(f, fluents, w))
        && (!goal.assumptions.iter().all(|f| recurs(f, fluents, w))
            || goal.guarantees.iter().all(|f| recurs(f, fluents, w)))
}

/// Every run of `d` ending in a deadlock, with at most `max_len` steps.
pub fn deadlocking_runs(d: &Dlts, max_len: usize) -> Vec<(Vec<usize>, Vec<ActionId>)> {
    fn go(d: &Dlts, max_len: usize, states: &mut Vec<usize>, actions: &mut Vec<ActionId>, out: &mut Vec<(Vec<usize>, Vec<ActionId>)>) {
        let s = *states.last().unwrap();
        if d.is_deadlock(s) {
            out.push((states.clone(), actions.clone()));
            return;
        }
        if actions.len() == max_len {
            return;
        }
        for (a, t) in d.out(s) {
            states.push(*t);
            actions.push(a.clone());
            go(d, max_len, states, actions, out);
            states.pop();
            actions.pop();
        }
    }
    let mut out = Vec::new();
    go(d, max_len, &mut vec![d.initial()], &mut Vec::new(), &mut out);
    out
}
