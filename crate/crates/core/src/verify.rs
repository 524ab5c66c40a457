//! Independent certification of a controller against its environment:
//! legality, deadlock freedom and goal satisfaction on the closed loop.
//!
//! Goal checking explores the product of the closed loop with the fluent
//! tracker and the safety monitor. Safety fails when the monitor's sink is
//! reachable. Recurrence fails when some reachable cycle avoids a required
//! atom, or visits every assumption while avoiding some guarantee; both are
//! found as cyclic SCCs of a restricted subgraph, one pass per atom.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::dlts::{Dlts, Execution};
use crate::error::{spec, usage, Result};
use crate::fluent::{FluentSet, FluentValuation};
use crate::formula::{Atom, Formula, Position};
use crate::monitor::Monitor;
use crate::par::Exec;
use crate::problem::Goal;
use crate::scc::tarjan;
use crate::symbol::ActionId;
use crate::transform::{DerivedAtoms, CTRL_TAG, ENV_TAG};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegalityViolation {
    pub controller_state: String,
    pub env_state: String,
    pub bullet: u8,
    pub action: ActionId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LegalityReport {
    /// True iff `violations` is empty.
    pub verdict: bool,
    pub violations: Vec<LegalityViolation>,
}

/// Truth of the goal atoms at one position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct AtomBits {
    pub require: u64,
    pub assume: u64,
    pub guarantee: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum ViolationKind {
    Deadlock,
    Safety,
    /// The required atom with this index never holds on the cycle.
    Require(usize),
    /// Every assumption recurs but this guarantee never holds on the cycle.
    Guarantee(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: ViolationKind,
    /// A run of the checked system: finite for deadlocks and safety, a lasso otherwise.
    pub run: Execution,
    pub state_names: Vec<String>,
    /// Atom truth at each state of `run`; entry 0 is the initial configuration.
    pub atoms: Vec<AtomBits>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn holds() -> Verdict {
        Verdict { holds: true, counterexample: None }
    }

    fn fails(cex: Counterexample) -> Verdict {
        Verdict { holds: false, counterexample: Some(cex) }
    }
}

fn check_alphabets(e: &Dlts, m: &Dlts) -> Result<()> {
    let set = |s: &indexmap::IndexSet<ActionId>| s.iter().cloned().collect::<BTreeSet<_>>();
    if set(e.alphabet().controlled()) != set(m.alphabet().controlled())
        || set(e.alphabet().monitored()) != set(m.alphabet().monitored())
    {
        return usage(format!(
            "`{}` and `{}` do not share the same controllable/uncontrollable alphabet",
            e.name(),
            m.name()
        ));
    }
    Ok(())
}

/// Reachable `(controller, environment)` state pairs of the closed loop.
fn reachable_pairs(e: &Dlts, m: &Dlts) -> Result<(Dlts, Vec<(usize, usize)>)> {
    check_alphabets(e, m)?;
    Dlts::compose_with_origins(&m.without_props(), &e.without_props())
}

fn report(violations: Vec<LegalityViolation>) -> LegalityReport {
    LegalityReport { verdict: violations.is_empty(), violations }
}

/// Classic legality: the controller never blocks an uncontrollable action and
/// never enables a controllable one the environment cannot take.
pub fn check_standard_legality(e: &Dlts, m: &Dlts) -> Result<LegalityReport> {
    let (_, pairs) = reachable_pairs(e, m)?;
    let mut out = Vec::new();
    for &(sm, se) in &pairs {
        let mut flag = |bullet: u8, a: &ActionId| {
            out.push(LegalityViolation {
                controller_state: m.state_name(sm).into(),
                env_state: e.state_name(se).into(),
                bullet,
                action: a.clone(),
            })
        };
        for a in e.alphabet().iter() {
            let (in_e, in_m) = (e.is_enabled(se, a), m.is_enabled(sm, a));
            if m.alphabet().is_controlled(a) {
                if in_m && !in_e {
                    flag(2, a);
                }
            } else if in_e && !in_m {
                flag(1, a);
            }
        }
    }
    Ok(report(out))
}

/// Run-to-completion legality: the controller may block the environment
/// entirely, but once it lets the environment move (or the environment just
/// moved) every enabled uncontrollable action must be allowed.
pub fn check_rtc_legality(e: &Dlts, m: &Dlts) -> Result<LegalityReport> {
    let (_, pairs) = reachable_pairs(e, m)?;
    let is_u = |a: &ActionId| !m.alphabet().is_controlled(a);
    let mut after_u = vec![false; m.num_states()];
    for (_, a, t) in m.transitions() {
        if is_u(a) {
            after_u[t] = true;
        }
    }
    let mut out = Vec::new();
    for &(sm, se) in &pairs {
        let lets_env_move = m.out(sm).iter().any(|(a, _)| is_u(a));
        for a in e.alphabet().iter() {
            let (in_e, in_m) = (e.is_enabled(se, a), m.is_enabled(sm, a));
            let mut flag = |bullet: u8| {
                out.push(LegalityViolation {
                    controller_state: m.state_name(sm).into(),
                    env_state: e.state_name(se).into(),
                    bullet,
                    action: a.clone(),
                })
            };
            if is_u(a) {
                if in_e && !in_m {
                    if lets_env_move {
                        flag(1);
                    }
                    if after_u[sm] {
                        flag(2);
                    }
                }
            } else if in_m && !in_e {
                flag(3);
            }
        }
    }
    Ok(report(out))
}

fn names(d: &Dlts, run: &Execution) -> Vec<String> {
    run.states.iter().map(|&s| d.state_name(s).to_string()).collect()
}

/// Every reachable state of the closed loop has a successor.
pub fn check_deadlock_free(e: &Dlts, m: &Dlts) -> Result<Verdict> {
    let (d, _) = reachable_pairs(e, m)?;
    let mut parent: Vec<Option<(usize, ActionId)>> = vec![None; d.num_states()];
    let mut seen = vec![false; d.num_states()];
    seen[d.initial()] = true;
    let mut queue = VecDeque::from([d.initial()]);
    while let Some(s) = queue.pop_front() {
        if d.is_deadlock(s) {
            let mut states = vec![s];
            let mut actions = Vec::new();
            let mut cur = s;
            while let Some((p, a)) = parent[cur].clone() {
                states.push(p);
                actions.push(a);
                cur = p;
            }
            states.reverse();
            actions.reverse();
            let run = Execution { states, actions, cycle_start: None };
            let atoms = vec![AtomBits::default(); run.states.len()];
            return Ok(Verdict::fails(Counterexample {
                kind: ViolationKind::Deadlock,
                state_names: names(&d, &run),
                run,
                atoms,
            }));
        }
        for (a, t) in d.out(s) {
            if !seen[*t] {
                seen[*t] = true;
                parent[*t] = Some((s, a.clone()));
                queue.push_back(*t);
            }
        }
    }
    Ok(Verdict::holds())
}

/// The closed loop `E(pE) ∥ M(pM)` on which run-to-completion goals are read.
pub fn rtc_product(e: &Dlts, m: &Dlts) -> Result<Dlts> {
    check_alphabets(e, m)?;
    let m = m.without_props().annotate_enabledness(CTRL_TAG)?;
    let e = e.annotate_enabledness(ENV_TAG)?;
    Dlts::parallel_compose(&m, &e)
}

/// `ψ_c ∧ (ψ_e -> φ)` as a goal over [`rtc_product`]: `u ∨ pass_E` is
/// required, and `c ∨ pass_M` joins the assumptions.
pub fn rtc_goal(goal: &Goal, uncontrollable: &[ActionId], controllable: &[ActionId]) -> Goal {
    let atoms = DerivedAtoms::new(uncontrollable, controllable);
    Goal {
        safety: goal.safety.clone(),
        require: goal.require.iter().cloned().chain([atoms.u.or(atoms.pass_e)]).collect(),
        assumptions: std::iter::once(atoms.c.or(atoms.pass_m)).chain(goal.assumptions.iter().cloned()).collect(),
        guarantees: goal.guarantees.clone(),
    }
}

/// Checks every execution of `E ∥ M` against `ψ_c ∧ (ψ_e -> φ)`.
pub fn check_rtc_goal(e: &Dlts, m: &Dlts, fluents: &FluentSet, goal: &Goal, exec: Exec) -> Result<Verdict> {
    goal.validate(fluents, e)?;
    let d = rtc_product(e, m)?;
    let u: Vec<ActionId> = e.alphabet().monitored().iter().cloned().collect();
    let c: Vec<ActionId> = e.alphabet().controlled().iter().cloned().collect();
    check_goal(&d, fluents, &rtc_goal(goal, &u, &c), exec)
}

/// Checks every execution of `E ∥ M` against the goal as written.
pub fn check_standard_goal(e: &Dlts, m: &Dlts, fluents: &FluentSet, goal: &Goal, exec: Exec) -> Result<Verdict> {
    goal.validate(fluents, e)?;
    check_alphabets(e, m)?;
    let d = Dlts::parallel_compose(&m.without_props(), e)?;
    check_goal(&d, fluents, goal, exec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    state: usize,
    valuation: FluentValuation,
    monitor: usize,
    bits: AtomBits,
}

/// Explored product of a system with the fluent tracker and the safety monitor.
struct Product {
    nodes: Vec<Node>,
    succ: Vec<Vec<(ActionId, usize)>>,
    parent: Vec<Option<(usize, ActionId)>>,
}

impl Product {
    fn path_to(&self, mut v: usize) -> (Vec<usize>, Vec<ActionId>) {
        let mut nodes = vec![v];
        let mut actions = Vec::new();
        while let Some((p, a)) = self.parent[v].clone() {
            nodes.push(p);
            actions.push(a);
            v = p;
        }
        nodes.reverse();
        actions.reverse();
        (nodes, actions)
    }

    /// Shortest non-empty path from `from` to `to` through `member` nodes.
    fn segment(&self, from: usize, to: usize, member: &[bool]) -> Vec<(ActionId, usize)> {
        let mut parent: HashMap<usize, (usize, ActionId)> = HashMap::new();
        let mut queue = VecDeque::new();
        for (a, t) in &self.succ[from] {
            if member[*t] && !parent.contains_key(t) {
                parent.insert(*t, (from, a.clone()));
                queue.push_back(*t);
            }
        }
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for (a, t) in &self.succ[v] {
                if member[*t] && !parent.contains_key(t) {
                    parent.insert(*t, (v, a.clone()));
                    queue.push_back(*t);
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = to;
        loop {
            let (p, a) = parent[&cur].clone();
            steps.push((a, cur));
            if p == from {
                break;
            }
            cur = p;
        }
        steps.reverse();
        steps
    }
}

#[derive(Clone, Copy, Debug)]
enum Pass {
    Require(usize),
    Guarantee(usize),
}

fn compile_list(list: &[Formula], fluents: &FluentSet, kind: &str) -> Result<Vec<Atom>> {
    if list.len() > 64 {
        return spec(format!("at most 64 {kind} atoms are supported"));
    }
    list.iter()
        .map(|f| {
            if !f.is_propositional() {
                return spec(format!("{kind} atom `{f}` must be a Boolean combination of fluents"));
            }
            f.compile(fluents)
        })
        .collect()
}

fn bits(atoms: &[Atom], pos: &Position<'_>) -> u64 {
    atoms
        .iter()
        .enumerate()
        .fold(0, |acc, (k, a)| if a.eval(pos) { acc | 1 << k } else { acc })
}

/// Checks every execution of `d` against `goal`. Finite (deadlocking)
/// executions are only subject to safety.
pub fn check_goal(d: &Dlts, fluents: &FluentSet, goal: &Goal, exec: Exec) -> Result<Verdict> {
    for f in &goal.safety {
        f.check_safety()?;
    }
    let mut monitor = Monitor::new(&goal.safety_conjunction(), fluents)?;
    let req = compile_list(&goal.require, fluents, "require")?;
    let asm = compile_list(&goal.assumptions, fluents, "assume")?;
    let gar = compile_list(&goal.guarantees, fluents, "guarantee")?;

    let s0 = d.initial();
    let mut product = Product {
        nodes: vec![Node {
            state: s0,
            valuation: fluents.initial_valuation(d.labels(s0)),
            monitor: monitor.initial(),
            bits: AtomBits::default(),
        }],
        succ: Vec::new(),
        parent: vec![None],
    };
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut i = 0;
    while i < product.nodes.len() {
        let n = product.nodes[i];
        let mut out = Vec::new();
        for (a, t) in d.out(n.state) {
            let valuation = fluents.step_valuation(n.valuation, a, d.labels(*t));
            let pos = Position { valuation, action: Some(a), labels: d.labels(*t) };
            let q = monitor.step(n.monitor, &pos);
            let bits = AtomBits { require: bits(&req, &pos), assume: bits(&asm, &pos), guarantee: bits(&gar, &pos) };
            if monitor.is_violation(q) {
                let (path, mut actions) = product.path_to(i);
                actions.push(a.clone());
                let mut states: Vec<usize> = path.iter().map(|&v| product.nodes[v].state).collect();
                states.push(*t);
                let mut atoms: Vec<AtomBits> = path.iter().map(|&v| product.nodes[v].bits).collect();
                atoms.push(bits);
                let run = Execution { states, actions, cycle_start: None };
                return Ok(Verdict::fails(Counterexample {
                    kind: ViolationKind::Safety,
                    state_names: names(d, &run),
                    run,
                    atoms,
                }));
            }
            let node = Node { state: *t, valuation, monitor: q, bits };
            let j = *index.entry(node).or_insert_with(|| {
                product.nodes.push(node);
                product.parent.push(Some((i, a.clone())));
                product.nodes.len() - 1
            });
            out.push((a.clone(), j));
        }
        product.succ.push(out);
        i += 1;
    }

    let passes: Vec<Pass> = (0..req.len())
        .map(Pass::Require)
        .chain((0..gar.len()).map(Pass::Guarantee))
        .collect();
    let found = exec.find_first(&passes, |&pass| bad_cycle(&product, pass, asm.len()));
    let Some((kind, x, cycle)) = found else {
        return Ok(Verdict::holds());
    };
    let (path, mut actions) = product.path_to(x);
    let cycle_start = actions.len();
    let mut visited = path;
    for (a, v) in cycle {
        actions.push(a);
        visited.push(v);
    }
    let run = Execution {
        states: visited.iter().map(|&v| product.nodes[v].state).collect(),
        actions,
        cycle_start: Some(cycle_start),
    };
    Ok(Verdict::fails(Counterexample {
        kind,
        state_names: names(d, &run),
        atoms: visited.iter().map(|&v| product.nodes[v].bits).collect(),
        run,
    }))
}

type Cycle = (ViolationKind, usize, Vec<(ActionId, usize)>);

/// A reachable cycle violating `pass`: its entry node and steps back to it.
fn bad_cycle(product: &Product, pass: Pass, num_assume: usize) -> Option<Cycle> {
    let n = product.nodes.len();
    let active: Vec<bool> = (0..n)
        .map(|v| {
            let b = product.nodes[v].bits;
            v != 0
                && match pass {
                    Pass::Require(k) => b.require >> k & 1 == 0,
                    Pass::Guarantee(j) => b.guarantee >> j & 1 == 0,
                }
        })
        .collect();
    let adj: Vec<Vec<usize>> = product
        .succ
        .iter()
        .map(|out| out.iter().map(|&(_, t)| t).filter(|&t| active[t]).collect())
        .collect();
    for scc in tarjan(&adj, &active) {
        if !scc.cyclic {
            continue;
        }
        let mut waypoints = Vec::new();
        if let Pass::Guarantee(_) = pass {
            let holder = |k: usize| scc.vertices.iter().copied().find(|&v| product.nodes[v].bits.assume >> k & 1 == 1);
            let found: Option<Vec<usize>> = (0..num_assume).map(holder).collect();
            match found {
                Some(w) => waypoints = w,
                None => continue,
            }
        }
        let mut member = vec![false; n];
        for &v in &scc.vertices {
            member[v] = true;
        }
        let x = scc.vertices[0];
        let mut steps = Vec::new();
        let mut cur = x;
        for w in waypoints {
            if w != cur {
                steps.extend(product.segment(cur, w, &member));
                cur = w;
            }
        }
        if cur != x || steps.is_empty() {
            steps.extend(product.segment(cur, x, &member));
        }
        let kind = match pass {
            Pass::Require(k) => ViolationKind::Require(k),
            Pass::Guarantee(j) => ViolationKind::Guarantee(j),
        };
        return Some((kind, x, steps));
    }
    None
}

/// Largest system [`enumerate_lassos`] accepts.
pub const LASSO_STATE_BOUND: usize = 10;
const LASSO_COUNT_BOUND: usize = 1_000_000;

/// Every lasso `p·cᵚ` from the initial state with `|p| + |c| <= max_len`, each
/// ultimately periodic run once: `c` is primitive and `p` cannot be shortened
/// by rotating `c`.
pub fn enumerate_lassos(d: &Dlts, max_len: usize) -> Result<Vec<Execution>> {
    if d.num_states() > LASSO_STATE_BOUND {
        return usage(format!(
            "lasso enumeration is limited to {LASSO_STATE_BOUND} states, got {}",
            d.num_states()
        ));
    }
    let mut out = Vec::new();
    let mut states = vec![d.initial()];
    let mut actions: Vec<ActionId> = Vec::new();
    walk(d, max_len, &mut states, &mut actions, &mut out)?;
    Ok(out)
}

fn walk(
    d: &Dlts,
    max_len: usize,
    states: &mut Vec<usize>,
    actions: &mut Vec<ActionId>,
    out: &mut Vec<Execution>,
) -> Result<()> {
    let n = actions.len();
    for j in 0..n {
        if states[j] == states[n] && is_canonical(states, actions, j) {
            if out.len() == LASSO_COUNT_BOUND {
                return usage("too many lassos; lower max_len");
            }
            out.push(Execution { states: states.clone(), actions: actions.clone(), cycle_start: Some(j) });
        }
    }
    if n == max_len {
        return Ok(());
    }
    for (a, t) in d.out(states[n]) {
        states.push(*t);
        actions.push(a.clone());
        walk(d, max_len, states, actions, out)?;
        states.pop();
        actions.pop();
    }
    Ok(())
}

fn is_canonical(states: &[usize], actions: &[ActionId], j: usize) -> bool {
    let n = actions.len();
    if j > 0 && states[j - 1] == states[n - 1] && actions[j - 1] == actions[n - 1] {
        return false;
    }
    let len = n - j;
    let step = |k: usize| (states[j + k], &actions[j + k]);
    (1..len).filter(|p| len % p == 0).all(|p| (0..len).any(|k| step(k) != step((k + p) % len)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlts::{Alphabet, DltsBuilder};

    fn a(s: &str) -> ActionId {
        ActionId::new(s)
    }

    fn build(name: &str, c: &[&str], u: &[&str], trans: &[(&str, &str, &str)]) -> Dlts {
        let mut b = DltsBuilder::new(name, Alphabet::new(c.iter().map(|x| a(x)), u.iter().map(|x| a(x))).unwrap());
        if let Some((s, _, _)) = trans.first() {
            b.state(*s);
        }
        for (s, x, t) in trans {
            let s = b.state(*s);
            let t = b.state(*t);
            b.transition(s, a(x), t);
        }
        b.build().unwrap()
    }

    #[test]
    fn copy_of_environment_is_legal() {
        let e = build("E", &["c"], &["u", "w"], &[("0", "u", "1"), ("0", "w", "0"), ("1", "c", "0")]);
        assert!(check_standard_legality(&e, &e).unwrap().verdict);
        assert!(check_rtc_legality(&e, &e).unwrap().verdict);
    }

    #[test]
    fn missing_uncontrollable_edge() {
        let e = build("E", &["c"], &["u", "w"], &[("0", "u", "1"), ("0", "w", "0"), ("1", "c", "0")]);
        let m = build("M", &["c"], &["u", "w"], &[("0", "u", "1"), ("1", "c", "0")]);
        let r = check_standard_legality(&e, &m).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.violations.len(), 1);
        assert_eq!((r.violations[0].bullet, r.violations[0].action.clone()), (1, a("w")));
        let r = check_rtc_legality(&e, &m).unwrap();
        assert!(r.violations.iter().any(|v| v.bullet == 1 && v.action == a("w")));
    }

    #[test]
    fn blocking_is_rtc_legal() {
        // the controller keeps the turn at 0 and takes c
        let e = build("E", &["c"], &["u"], &[("0", "u", "0"), ("0", "c", "0")]);
        let m = build("M", &["c"], &["u"], &[("0", "c", "0")]);
        assert!(check_rtc_legality(&e, &m).unwrap().verdict);
        assert!(!check_standard_legality(&e, &m).unwrap().verdict);
        // but it starves the environment forever
        let goal = Goal { safety: vec![Formula::Const(true)], ..Goal::default() };
        let v = check_rtc_goal(&e, &m, &FluentSet::default(), &goal, Exec::Sequential).unwrap();
        assert!(!v.holds);
        let cex = v.counterexample.unwrap();
        assert_eq!(cex.kind, ViolationKind::Require(0));
        assert_eq!(cex.run.cycle_start, Some(1));
    }

    #[test]
    fn alphabet_mismatch_is_a_usage_error() {
        let e = build("E", &["c"], &["u"], &[("0", "u", "0")]);
        let m = build("M", &[], &["u", "c"], &[("0", "u", "0")]);
        assert!(matches!(check_standard_legality(&e, &m), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn deadlock_path() {
        let e = build("E", &["c"], &["u"], &[("0", "u", "1"), ("1", "c", "0")]);
        assert!(check_deadlock_free(&e, &e).unwrap().holds);
        let m = build("M", &["c"], &["u"], &[("0", "u", "1")]);
        let v = check_deadlock_free(&e, &m).unwrap();
        let cex = v.counterexample.unwrap();
        assert_eq!(cex.kind, ViolationKind::Deadlock);
        assert_eq!(cex.run.actions, vec![a("u")]);
    }

    #[test]
    fn safety_prefix_is_reported() {
        let e = build("E", &["c"], &["u"], &[("0", "u", "1"), ("1", "c", "0")]);
        let goal = Goal { safety: vec![Formula::action("c").not().always()], ..Goal::default() };
        let v = check_standard_goal(&e, &e, &FluentSet::default(), &goal, Exec::Sequential).unwrap();
        let cex = v.counterexample.unwrap();
        assert_eq!(cex.kind, ViolationKind::Safety);
        assert_eq!(cex.run.actions, vec![a("u"), a("c")]);
        assert!(cex.run.is_run_of(&Dlts::parallel_compose(&e, &e).unwrap()));
    }

    #[test]
    fn guarantee_cycle_needs_every_assumption() {
        // 0 -x-> 0, 0 -y-> 1 -z-> 0 ; assume GF x, guarantee GF z
        let e = build("E", &[], &["x", "y", "z"], &[("0", "x", "0"), ("0", "y", "1"), ("1", "z", "0")]);
        let goal = Goal {
            assumptions: vec![Formula::action("x")],
            guarantees: vec![Formula::action("z")],
            ..Goal::default()
        };
        let v = check_standard_goal(&e, &e, &FluentSet::default(), &goal, Exec::Parallel).unwrap();
        let cex = v.counterexample.unwrap();
        assert_eq!(cex.kind, ViolationKind::Guarantee(0));
        let k = cex.run.cycle_start.unwrap();
        assert_eq!(cex.run.actions[k..], [a("x")]);
        // without the x loop the only cycle visits z
        let e = build("E", &[], &["x", "y", "z"], &[("0", "y", "1"), ("1", "z", "0")]);
        assert!(check_standard_goal(&e, &e, &FluentSet::default(), &goal, Exec::Sequential).unwrap().holds);
    }

    #[test]
    fn lasso_canonical_forms() {
        let one = build("D", &[], &["a"], &[("0", "a", "0")]);
        assert_eq!(enumerate_lassos(&one, 4).unwrap().len(), 1);
        let two = build("D", &[], &["a", "b"], &[("0", "a", "1"), ("1", "b", "0")]);
        let lassos = enumerate_lassos(&two, 6).unwrap();
        assert_eq!(lassos.len(), 1);
        assert_eq!(lassos[0].cycle_start, Some(0));
        // lasso with a proper prefix: 0 -a-> 1 -b-> 1
        let pre = build("D", &[], &["a", "b"], &[("0", "a", "1"), ("1", "b", "1")]);
        let lassos = enumerate_lassos(&pre, 5).unwrap();
        assert_eq!(lassos.len(), 1);
        assert_eq!(lassos[0].cycle_start, Some(1));
    }

    #[test]
    fn lasso_bound() {
        let names: Vec<String> = (0..=LASSO_STATE_BOUND).map(|i| i.to_string()).collect();
        let trans: Vec<(&str, &str, &str)> = names.windows(2).map(|w| (w[0].as_str(), "a", w[1].as_str())).collect();
        let d = build("D", &[], &["a"], &trans);
        assert!(matches!(enumerate_lassos(&d, 3), Err(crate::Error::Usage(_))));
    }
}
