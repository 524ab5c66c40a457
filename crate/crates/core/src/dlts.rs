//! Doubly-labelled transition systems: actions on transitions, propositions on
//! states, and an alphabet partitioned into controlled and monitored actions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{model, usage, Result};
use crate::symbol::{ActionId, PropId};

/// Which side of a turn-based machine a state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// Environment turn: only uncontrollable (and environment-yield) moves.
    Env,
    /// Controller turn: only controllable (and controller-yield) moves.
    Ctrl,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Env => "e",
            Side::Ctrl => "c",
        }
    }
}

/// Alphabet partition `A = controlled ⊎ monitored`, kept in declaration order.
///
/// Declaration order is the tie-breaking order used by synthesis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    controlled: IndexSet<ActionId>,
    monitored: IndexSet<ActionId>,
}

impl Alphabet {
    pub fn new(
        controlled: impl IntoIterator<Item = ActionId>,
        monitored: impl IntoIterator<Item = ActionId>,
    ) -> Result<Self> {
        let controlled: IndexSet<ActionId> = controlled.into_iter().collect();
        let monitored: IndexSet<ActionId> = monitored.into_iter().collect();
        if let Some(a) = controlled.iter().find(|a| monitored.contains(*a)) {
            return model(format!("action `{a}` is both controlled and monitored"));
        }
        Ok(Self { controlled, monitored })
    }

    pub fn controlled(&self) -> &IndexSet<ActionId> {
        &self.controlled
    }

    pub fn monitored(&self) -> &IndexSet<ActionId> {
        &self.monitored
    }

    pub fn contains(&self, a: &ActionId) -> bool {
        self.controlled.contains(a) || self.monitored.contains(a)
    }

    pub fn is_controlled(&self, a: &ActionId) -> bool {
        self.controlled.contains(a)
    }

    /// All actions, controlled first, each part in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = &ActionId> + '_ {
        self.controlled.iter().chain(self.monitored.iter())
    }

    pub fn len(&self) -> usize {
        self.controlled.len() + self.monitored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `a` in [`Alphabet::iter`] order.
    pub fn rank(&self, a: &ActionId) -> Option<usize> {
        self.controlled
            .get_index_of(a)
            .or_else(|| self.monitored.get_index_of(a).map(|i| i + self.controlled.len()))
    }

    pub fn to_set(&self) -> BTreeSet<ActionId> {
        self.iter().cloned().collect()
    }

    /// Union of two alphabets; an action controlled by either side is controlled.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let controlled: IndexSet<ActionId> =
            self.controlled.iter().chain(other.controlled.iter()).cloned().collect();
        let monitored = self
            .monitored
            .iter()
            .chain(other.monitored.iter())
            .filter(|a| !controlled.contains(*a))
            .cloned()
            .collect();
        Alphabet { controlled, monitored }
    }
}

/// A doubly-labelled transition system with integer-indexed states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dlts {
    name: String,
    state_names: Vec<String>,
    props: BTreeSet<PropId>,
    alphabet: Alphabet,
    succ: Vec<Vec<(ActionId, usize)>>,
    labels: Vec<BTreeSet<PropId>>,
    initial: usize,
    sides: Vec<Option<Side>>,
    enabledness: BTreeSet<PropId>,
}

/// Incremental constructor for [`Dlts`].
#[derive(Clone, Debug)]
pub struct DltsBuilder {
    name: String,
    alphabet: Alphabet,
    index: HashMap<String, usize>,
    state_names: Vec<String>,
    props: BTreeSet<PropId>,
    succ: Vec<BTreeSet<(ActionId, usize)>>,
    labels: Vec<BTreeSet<PropId>>,
    sides: Vec<Option<Side>>,
    initial: Option<usize>,
    enabledness: BTreeSet<PropId>,
}

impl DltsBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        Self {
            name: name.into(),
            alphabet,
            index: HashMap::new(),
            state_names: Vec::new(),
            props: BTreeSet::new(),
            succ: Vec::new(),
            labels: Vec::new(),
            sides: Vec::new(),
            initial: None,
            enabledness: BTreeSet::new(),
        }
    }

    /// Returns the index of the named state, creating it if needed.
    pub fn state(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.state_names.len();
        self.index.insert(name.clone(), i);
        self.state_names.push(name);
        self.succ.push(BTreeSet::new());
        self.labels.push(BTreeSet::new());
        self.sides.push(None);
        i
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn prop(&mut self, p: PropId) -> &mut Self {
        self.props.insert(p);
        self
    }

    /// Declares `p` as an enabledness proposition (see [`Dlts::annotate_enabledness`]).
    pub fn enabledness(&mut self, p: PropId) -> &mut Self {
        self.props.insert(p.clone());
        self.enabledness.insert(p);
        self
    }

    pub fn label(&mut self, s: usize, p: PropId) -> &mut Self {
        self.props.insert(p.clone());
        self.labels[s].insert(p);
        self
    }

    pub fn side(&mut self, s: usize, side: Side) -> &mut Self {
        self.sides[s] = Some(side);
        self
    }

    pub fn transition(&mut self, s: usize, a: ActionId, t: usize) -> &mut Self {
        self.succ[s].insert((a, t));
        self
    }

    pub fn initial(&mut self, s: usize) -> &mut Self {
        self.initial = Some(s);
        self
    }

    pub fn build(self) -> Result<Dlts> {
        let initial = match self.initial {
            Some(i) => i,
            None if !self.state_names.is_empty() => 0,
            None => return model(format!("DLTS `{}` has no states", self.name)),
        };
        for (s, out) in self.succ.iter().enumerate() {
            for (a, _) in out {
                if !self.alphabet.contains(a) {
                    return model(format!(
                        "DLTS `{}`: transition from `{}` uses `{a}` outside the alphabet",
                        self.name, self.state_names[s]
                    ));
                }
            }
        }
        Ok(Dlts {
            name: self.name,
            state_names: self.state_names,
            props: self.props,
            alphabet: self.alphabet,
            succ: self.succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            labels: self.labels,
            initial,
            sides: self.sides,
            enabledness: self.enabledness,
        })
    }
}

/// Name of the proposition recording that `action` is enabled, for a given tag.
pub fn enabledness_prop(tag: &str, action: &ActionId) -> PropId {
    PropId::new(format!("p{tag}.{action}"))
}

impl Dlts {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.state_names.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn props(&self) -> &BTreeSet<PropId> {
        &self.props
    }

    pub fn labels(&self, s: usize) -> &BTreeSet<PropId> {
        &self.labels[s]
    }

    pub fn side(&self, s: usize) -> Option<Side> {
        self.sides[s]
    }

    /// Propositions introduced by [`Dlts::annotate_enabledness`].
    pub fn enabledness_props(&self) -> &BTreeSet<PropId> {
        &self.enabledness
    }

    /// Outgoing transitions of `s`, sorted by (action, target).
    pub fn out(&self, s: usize) -> &[(ActionId, usize)] {
        &self.succ[s]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, &ActionId, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |(a, t)| (s, a, *t)))
    }

    pub fn successors<'a>(&'a self, s: usize, a: &'a ActionId) -> impl Iterator<Item = usize> + 'a {
        self.succ[s].iter().filter(move |(b, _)| b == a).map(|(_, t)| *t)
    }

    pub fn is_enabled(&self, s: usize, a: &ActionId) -> bool {
        self.succ[s].iter().any(|(b, _)| b == a)
    }

    /// `{ ℓ | Δ_ℓ(s) ≠ ∅ }`, optionally intersected with `restrict`.
    pub fn enabled_actions(
        &self,
        s: usize,
        restrict: Option<&BTreeSet<ActionId>>,
    ) -> Result<BTreeSet<ActionId>> {
        if s >= self.num_states() {
            return usage(format!("state {s} is not a state of `{}`", self.name));
        }
        Ok(self.succ[s]
            .iter()
            .map(|(a, _)| a)
            .filter(|a| restrict.is_none_or(|r| r.contains(*a)))
            .cloned()
            .collect())
    }

    /// True when some action of `set` is enabled at `s`.
    pub fn any_enabled(&self, s: usize, set: &BTreeSet<ActionId>) -> bool {
        self.succ[s].iter().any(|(a, _)| set.contains(a))
    }

    pub fn is_deterministic(&self) -> bool {
        self.succ.iter().all(|out| out.windows(2).all(|w| w[0].0 != w[1].0))
    }

    pub fn is_deadlock(&self, s: usize) -> bool {
        self.succ[s].is_empty()
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &(_, t) in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Restriction to the states reachable from the initial state.
    ///
    /// Surviving states keep their relative order, so the operation is idempotent.
    pub fn reachable(&self) -> Dlts {
        let mut keep = vec![false; self.num_states()];
        for s in self.reachable_states() {
            keep[s] = true;
        }
        self.retain_states(&keep)
    }

    fn retain_states(&self, keep: &[bool]) -> Dlts {
        let mut remap = vec![usize::MAX; self.num_states()];
        let mut next = 0;
        for s in self.states() {
            if keep[s] {
                remap[s] = next;
                next += 1;
            }
        }
        let pick = |s: usize| keep[s];
        Dlts {
            name: self.name.clone(),
            state_names: self.states().filter(|&s| pick(s)).map(|s| self.state_names[s].clone()).collect(),
            props: self.props.clone(),
            alphabet: self.alphabet.clone(),
            succ: self
                .states()
                .filter(|&s| pick(s))
                .map(|s| {
                    self.succ[s]
                        .iter()
                        .filter(|(_, t)| keep[*t])
                        .map(|(a, t)| (a.clone(), remap[*t]))
                        .collect()
                })
                .collect(),
            labels: self.states().filter(|&s| pick(s)).map(|s| self.labels[s].clone()).collect(),
            initial: remap[self.initial],
            sides: self.states().filter(|&s| pick(s)).map(|s| self.sides[s]).collect(),
            enabledness: self.enabledness.clone(),
        }
    }

    /// Keeps only the transitions accepted by `keep`; states are untouched.
    pub fn filter_transitions(&self, mut keep: impl FnMut(usize, &ActionId, usize) -> bool) -> Dlts {
        let mut out = self.clone();
        for (s, succ) in out.succ.iter_mut().enumerate() {
            succ.retain(|(a, t)| keep(s, a, *t));
        }
        out
    }

    /// The same system with `controlled` (in that order) as its controllable
    /// actions and the rest of the alphabet as monitored ones.
    pub fn repartition<'a>(&self, controlled: impl IntoIterator<Item = &'a ActionId>) -> Result<Dlts> {
        let controlled: Vec<ActionId> = controlled.into_iter().cloned().collect();
        if let Some(a) = controlled.iter().find(|a| !self.alphabet.contains(a)) {
            return model(format!("`{a}` is not in the alphabet of `{}`", self.name));
        }
        let monitored: Vec<ActionId> = self.alphabet.iter().filter(|a| !controlled.contains(a)).cloned().collect();
        let mut out = self.clone();
        out.alphabet = Alphabet::new(controlled, monitored)?;
        Ok(out)
    }

    /// The same system with every proposition removed.
    pub fn without_props(&self) -> Dlts {
        let mut out = self.clone();
        out.props.clear();
        out.enabledness.clear();
        out.labels.iter_mut().for_each(BTreeSet::clear);
        out
    }

    /// Adds `p<tag>.ℓ` to every state where `ℓ` is enabled, for each `ℓ` of the alphabet.
    pub fn annotate_enabledness(&self, tag: &str) -> Result<Dlts> {
        let mut out = self.clone();
        for a in self.alphabet.iter() {
            let p = enabledness_prop(tag, a);
            if self.props.contains(&p) {
                return model(format!("`{}` already carries proposition `{p}`", self.name));
            }
            out.props.insert(p.clone());
            out.enabledness.insert(p);
        }
        for s in self.states() {
            for (a, _) in &self.succ[s] {
                out.labels[s].insert(enabledness_prop(tag, a));
            }
        }
        Ok(out)
    }

    /// Parallel composition restricted to reachable state pairs.
    pub fn parallel_compose(m: &Dlts, e: &Dlts) -> Result<Dlts> {
        Ok(Self::compose_with_origins(m, e)?.0)
    }

    /// Like [`Dlts::parallel_compose`], also returning the `(m, e)` pair behind each state.
    pub fn compose_with_origins(m: &Dlts, e: &Dlts) -> Result<(Dlts, Vec<(usize, usize)>)> {
        let (rename_m, rename_e) = namespace_props(m, e)?;
        let alphabet = m.alphabet.union(&e.alphabet);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut origins = vec![(m.initial, e.initial)];
        index.insert((m.initial, e.initial), 0);
        let mut succ: Vec<Vec<(ActionId, usize)>> = Vec::new();
        let mut i = 0;
        while i < origins.len() {
            let (sm, se) = origins[i];
            let mut out = BTreeSet::new();
            let mut push = |pair: (usize, usize), a: &ActionId, out: &mut BTreeSet<(ActionId, usize)>| {
                let next = *index.entry(pair).or_insert_with(|| {
                    origins.push(pair);
                    origins.len() - 1
                });
                out.insert((a.clone(), next));
            };
            for (a, tm) in m.out(sm) {
                if !e.alphabet.contains(a) {
                    push((*tm, se), a, &mut out);
                } else {
                    for te in e.successors(se, a) {
                        push((*tm, te), a, &mut out);
                    }
                }
            }
            for (a, te) in e.out(se) {
                if !m.alphabet.contains(a) {
                    push((sm, *te), a, &mut out);
                }
            }
            succ.push(out.into_iter().collect());
            i += 1;
        }
        let props = m
            .props
            .iter()
            .map(|p| rename_m.get(p).cloned().unwrap_or_else(|| p.clone()))
            .chain(e.props.iter().map(|p| rename_e.get(p).cloned().unwrap_or_else(|| p.clone())))
            .collect();
        let labels = origins
            .iter()
            .map(|&(sm, se)| {
                m.labels[sm]
                    .iter()
                    .map(|p| rename_m.get(p).cloned().unwrap_or_else(|| p.clone()))
                    .chain(e.labels[se].iter().map(|p| rename_e.get(p).cloned().unwrap_or_else(|| p.clone())))
                    .collect()
            })
            .collect();
        let dlts = Dlts {
            name: format!("{}||{}", m.name, e.name),
            state_names: origins
                .iter()
                .map(|&(sm, se)| format!("({},{})", m.state_names[sm], e.state_names[se]))
                .collect(),
            props,
            alphabet,
            succ,
            labels,
            initial: 0,
            sides: origins.iter().map(|&(sm, se)| m.sides[sm].or(e.sides[se])).collect(),
            enabledness: m.enabledness.union(&e.enabledness).cloned().collect(),
        };
        Ok((dlts, origins))
    }
}

/// Renaming tables for propositions shared by both operands of a composition.
fn namespace_props(
    m: &Dlts,
    e: &Dlts,
) -> Result<(BTreeMap<PropId, PropId>, BTreeMap<PropId, PropId>)> {
    let mut rename_m = BTreeMap::new();
    let mut rename_e = BTreeMap::new();
    for p in m.props.intersection(&e.props) {
        if m.enabledness.contains(p) || e.enabledness.contains(p) {
            return model(format!("enabledness proposition `{p}` occurs in both `{}` and `{}`", m.name, e.name));
        }
        rename_m.insert(p.clone(), PropId::new(format!("{}.{p}", m.name)));
        rename_e.insert(p.clone(), PropId::new(format!("{}.{p}", e.name)));
    }
    let mut all: BTreeSet<PropId> = BTreeSet::new();
    for p in m.props.iter().map(|p| rename_m.get(p).unwrap_or(p)) {
        all.insert(p.clone());
    }
    for p in e.props.iter().map(|p| rename_e.get(p).unwrap_or(p)) {
        if !all.insert(p.clone()) {
            return model(format!("proposition `{p}` collides after namespacing `{}` and `{}`", m.name, e.name));
        }
    }
    Ok((rename_m, rename_e))
}

/// A finite run, or a lasso when `cycle_start` is set.
///
/// `states.len() == actions.len() + 1`. For a lasso the last state equals
/// `states[cycle_start]` and the run repeats `actions[cycle_start..]` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Execution {
    pub states: Vec<usize>,
    pub actions: Vec<ActionId>,
    pub cycle_start: Option<usize>,
}

impl Execution {
    /// Checks that every step is a transition of `d` starting at its initial state.
    pub fn is_run_of(&self, d: &Dlts) -> bool {
        if self.states.len() != self.actions.len() + 1 || self.states.first() != Some(&d.initial()) {
            return false;
        }
        let steps_ok = self
            .actions
            .iter()
            .enumerate()
            .all(|(i, a)| d.successors(self.states[i], a).any(|t| t == self.states[i + 1]));
        let loop_ok = match self.cycle_start {
            Some(k) => k < self.actions.len() && self.states[k] == *self.states.last().unwrap(),
            None => true,
        };
        steps_ok && loop_ok
    }
}
