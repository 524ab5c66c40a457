//! Fluents and their deterministic valuation along executions.
//!
//! Position convention: the valuation at position `i` is the one obtained after
//! applying `ℓ_0 … ℓ_i`, with proposition fluents read from the state entered by
//! `ℓ_i`. The initial valuation is not itself a position of the trace.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{spec, usage, Result};
use crate::symbol::{ActionId, PropId};

/// Upper bound on the number of fluents a [`FluentSet`] can track.
pub const MAX_FLUENTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FluentKind {
    /// `⟨I, T, Init⟩`: set by `I`, cleared by `T`.
    Transition {
        initiating: BTreeSet<ActionId>,
        terminating: BTreeSet<ActionId>,
        initially: bool,
    },
    /// True exactly in states labelled with the proposition.
    Prop(PropId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fluent {
    pub name: String,
    pub kind: FluentKind,
}

impl Fluent {
    pub fn transition(
        name: impl Into<String>,
        initiating: impl IntoIterator<Item = ActionId>,
        terminating: impl IntoIterator<Item = ActionId>,
        initially: bool,
    ) -> Result<Fluent> {
        let name = name.into();
        let initiating: BTreeSet<ActionId> = initiating.into_iter().collect();
        let terminating: BTreeSet<ActionId> = terminating.into_iter().collect();
        if let Some(a) = initiating.intersection(&terminating).next() {
            return spec(format!("fluent `{name}`: `{a}` both initiates and terminates it"));
        }
        Ok(Fluent { name, kind: FluentKind::Transition { initiating, terminating, initially } })
    }

    pub fn prop(name: impl Into<String>, p: PropId) -> Fluent {
        Fluent { name: name.into(), kind: FluentKind::Prop(p) }
    }

    /// `ℓ̇ = ⟨{ℓ}, Act \ {ℓ}, false⟩`, named `'ℓ`.
    pub fn action_fluent(action: &ActionId, act: &BTreeSet<ActionId>) -> Result<Fluent> {
        if !act.contains(action) {
            return usage(format!("action `{action}` is not in the given alphabet"));
        }
        Fluent::transition(
            format!("'{action}"),
            [action.clone()],
            act.iter().filter(|a| *a != action).cloned(),
            false,
        )
    }

    /// Whether any of `actions` occurs in the initiating or terminating set.
    pub fn mentions_any(&self, actions: &[ActionId]) -> bool {
        match &self.kind {
            FluentKind::Transition { initiating, terminating, .. } => {
                actions.iter().any(|a| initiating.contains(a) || terminating.contains(a))
            }
            FluentKind::Prop(_) => false,
        }
    }
}

/// Truth values of every fluent of a [`FluentSet`], one bit per fluent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FluentValuation(u64);

impl FluentValuation {
    pub fn get(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

/// Which earlier actions count towards the value at position `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PositionConvention {
    /// `ℓ_j` for `j ≤ i`: the action taken at `i` already counts.
    #[default]
    Inclusive,
    /// `ℓ_j` for `j < i`: the value at `i` reflects the state before `ℓ_i`.
    Strict,
}

/// An ordered, name-indexed set of fluents with a compiled step function.
#[derive(Clone, Debug, Default)]
pub struct FluentSet {
    fluents: Vec<Fluent>,
    index: HashMap<String, usize>,
    init_mask: u64,
    initiating: HashMap<ActionId, u64>,
    terminating: HashMap<ActionId, u64>,
    props: Vec<(usize, PropId)>,
}

impl PartialEq for FluentSet {
    fn eq(&self, other: &Self) -> bool {
        self.fluents == other.fluents
    }
}

impl FluentSet {
    pub fn new(fluents: impl IntoIterator<Item = Fluent>) -> Result<FluentSet> {
        let mut set = FluentSet::default();
        for f in fluents {
            set.push(f)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, f: Fluent) -> Result<usize> {
        if self.index.contains_key(&f.name) {
            return spec(format!("fluent `{}` declared twice", f.name));
        }
        let i = self.fluents.len();
        if i >= MAX_FLUENTS {
            return spec(format!("at most {MAX_FLUENTS} fluents are supported"));
        }
        let bit = 1u64 << i;
        match &f.kind {
            FluentKind::Transition { initiating, terminating, initially } => {
                if *initially {
                    self.init_mask |= bit;
                }
                for a in initiating {
                    *self.initiating.entry(a.clone()).or_default() |= bit;
                }
                for a in terminating {
                    *self.terminating.entry(a.clone()).or_default() |= bit;
                }
            }
            FluentKind::Prop(p) => self.props.push((i, p.clone())),
        }
        self.index.insert(f.name.clone(), i);
        self.fluents.push(f);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.fluents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fluents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fluent> + '_ {
        self.fluents.iter()
    }

    pub fn get(&self, i: usize) -> &Fluent {
        &self.fluents[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn by_name(&self, name: &str) -> Option<&Fluent> {
        self.index_of(name).map(|i| &self.fluents[i])
    }

    fn with_props(&self, bits: u64, labels: &BTreeSet<PropId>) -> u64 {
        let mut bits = bits;
        for (i, p) in &self.props {
            if labels.contains(p) {
                bits |= 1 << i;
            } else {
                bits &= !(1 << i);
            }
        }
        bits
    }

    /// Transition fluents take `Init_f`; proposition fluents read `labels`.
    pub fn initial_valuation(&self, labels: &BTreeSet<PropId>) -> FluentValuation {
        FluentValuation(self.with_props(self.init_mask, labels))
    }

    /// Applies one action; `next_labels` are the labels of the state it enters.
    pub fn step_valuation(
        &self,
        v: FluentValuation,
        action: &ActionId,
        next_labels: &BTreeSet<PropId>,
    ) -> FluentValuation {
        let mut bits = v.0;
        if let Some(t) = self.terminating.get(action) {
            bits &= !t;
        }
        if let Some(i) = self.initiating.get(action) {
            bits |= i;
        }
        FluentValuation(self.with_props(bits, next_labels))
    }

    /// Valuations at positions `0..actions.len()` of a run.
    ///
    /// `labels[k]` are the labels of state `s_k`, so `labels.len() == actions.len() + 1`.
    pub fn valuations(
        &self,
        actions: &[ActionId],
        labels: &[&BTreeSet<PropId>],
        convention: PositionConvention,
    ) -> Result<Vec<FluentValuation>> {
        if labels.len() != actions.len() + 1 {
            return usage("a run needs one label set per state");
        }
        let mut v = self.initial_valuation(labels[0]);
        let mut out = Vec::with_capacity(actions.len());
        for (k, a) in actions.iter().enumerate() {
            let next = self.step_valuation(v, a, labels[k + 1]);
            out.push(match convention {
                PositionConvention::Inclusive => next,
                PositionConvention::Strict => v,
            });
            v = next;
        }
        Ok(out)
    }
}
