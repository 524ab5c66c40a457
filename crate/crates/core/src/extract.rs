//! Moving between controllers of the yield-composed problem and
//! run-to-completion controllers of the original one.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::dlts::{Alphabet, Dlts, DltsBuilder, Side};
use crate::error::{usage, Result};
use crate::symbol::{is_yield, yield_c, yield_e, ActionId};
use crate::verify::check_rtc_legality;

fn side_name(side: Side) -> &'static str {
    side.tag()
}

/// Builds the RTC controller over `{e, c} × T` from a controller `M⁺` of the
/// yield-composed problem; unreachable states are dropped.
///
/// On the environment side, uncontrollable moves are taken from the state
/// reached by a `yieldE·yieldC` detour when one exists, and directly otherwise;
/// controllable moves go through `yieldE` and switch to the controller side.
/// On the controller side, controllable moves are direct and uncontrollable
/// ones go through `yieldC`, switching back.
pub fn extract_rtc_controller(mplus: &Dlts) -> Result<Dlts> {
    let (gc, ge) = (yield_c(), yield_e());
    if !mplus.alphabet().contains(&gc) || !mplus.alphabet().contains(&ge) {
        return usage("controller alphabet lacks the yield actions");
    }
    let controlled: Vec<ActionId> = mplus.alphabet().controlled().iter().filter(|a| !is_yield(a)).cloned().collect();
    let monitored: Vec<ActionId> = mplus.alphabet().monitored().iter().filter(|a| !is_yield(a)).cloned().collect();
    let is_c: BTreeSet<&ActionId> = controlled.iter().collect();
    let alphabet = Alphabet::new(controlled.iter().cloned(), monitored.iter().cloned())?;

    let succ = |t: usize, a: &ActionId| mplus.successors(t, a).collect::<Vec<_>>();
    let moves = |t: usize, want_c: bool| -> Vec<(ActionId, usize)> {
        mplus
            .out(t)
            .iter()
            .filter(|(a, _)| !is_yield(a) && is_c.contains(a) == want_c)
            .cloned()
            .collect()
    };

    let mut out: Vec<Vec<(ActionId, (Side, usize))>> = vec![Vec::new(); 2 * mplus.num_states()];
    let key = |side: Side, t: usize| match side {
        Side::Env => t,
        Side::Ctrl => mplus.num_states() + t,
    };
    for t in mplus.states() {
        let e = key(Side::Env, t);
        let c = key(Side::Ctrl, t);
        let yield_e_succ = succ(t, &ge);
        let mut detour = false;
        for &t1 in &yield_e_succ {
            for t2 in succ(t1, &gc) {
                detour = true;
                for (a, t3) in moves(t2, false) {
                    out[e].push((a, (Side::Env, t3)));
                }
            }
            for (a, t3) in moves(t1, true) {
                out[e].push((a, (Side::Ctrl, t3)));
            }
        }
        if !detour {
            for (a, t3) in moves(t, false) {
                out[e].push((a, (Side::Env, t3)));
            }
        }
        for (a, t3) in moves(t, true) {
            out[c].push((a, (Side::Ctrl, t3)));
        }
        for t1 in succ(t, &gc) {
            for (a, t3) in moves(t1, false) {
                out[c].push((a, (Side::Env, t3)));
            }
        }
    }

    let mut b = DltsBuilder::new(format!("rtc({})", mplus.name()), alphabet);
    let mut ids: HashMap<(Side, usize), usize> = HashMap::new();
    let start = (Side::Env, mplus.initial());
    let name = |(side, t): (Side, usize)| format!("{}:{}", side_name(side), mplus.state_name(t));
    let s0 = b.state(name(start));
    b.side(s0, Side::Env).initial(s0);
    ids.insert(start, s0);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let src = ids[&n];
        for (a, m) in &out[key(n.0, n.1)] {
            let dst = match ids.get(m) {
                Some(&d) => d,
                None => {
                    let d = b.state(name(*m));
                    b.side(d, m.0);
                    ids.insert(*m, d);
                    queue.push_back(*m);
                    d
                }
            };
            b.transition(src, a.clone(), dst);
        }
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum EmbedState {
    Env(usize),
    Ctrl(usize, u8),
}

/// Builds a controller of the yield-composed problem from an RTC controller
/// `m` of `env`. States are `(s, e, t)` and two copies `(s, c, t, 1|2)` over the
/// reachable pairs `(s, t)` of `env ∥ m`: copy 1 yields back only when `m` has
/// no controllable move, copy 2 yields as soon as `m` lets the environment move.
pub fn embed_rtc_controller(m: &Dlts, env: &Dlts) -> Result<Dlts> {
    let report = check_rtc_legality(env, m)?;
    if !report.verdict {
        return usage("controller is not run-to-completion legal for the environment");
    }
    let (product, origins) = Dlts::compose_with_origins(m, env)?;
    let is_c: BTreeSet<ActionId> = m.alphabet().controlled().iter().cloned().collect();
    let (gc, ge) = (yield_c(), yield_e());
    let alphabet = Alphabet::new(
        m.alphabet().controlled().iter().cloned().chain([gc.clone()]),
        m.alphabet().monitored().iter().cloned().chain([ge.clone()]),
    )?;
    let env_has_c: Vec<bool> = origins.iter().map(|&(_, s)| env.any_enabled(s, &is_c)).collect();
    let moves = |p: usize, want_c: bool| -> Vec<(ActionId, usize)> {
        product.out(p).iter().filter(|(a, _)| is_c.contains(a) == want_c).cloned().collect()
    };

    let mut b = DltsBuilder::new(format!("embed({})", m.name()), alphabet);
    let mut ids: HashMap<EmbedState, usize> = HashMap::new();
    let name = |n: EmbedState| {
        let p = match n {
            EmbedState::Env(p) | EmbedState::Ctrl(p, _) => p,
        };
        let (t, s) = origins[p];
        match n {
            EmbedState::Env(_) => format!("({},e,{})", env.state_name(s), m.state_name(t)),
            EmbedState::Ctrl(_, k) => format!("({},c,{},{k})", env.state_name(s), m.state_name(t)),
        }
    };
    let start = EmbedState::Env(product.initial());
    let s0 = b.state(name(start));
    b.side(s0, Side::Env).initial(s0);
    ids.insert(start, s0);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let src = ids[&n];
        let mut next: Vec<(ActionId, EmbedState)> = Vec::new();
        match n {
            EmbedState::Env(p) => {
                next.extend(moves(p, false).into_iter().map(|(a, q)| (a, EmbedState::Env(q))));
                if env_has_c[p] {
                    next.push((ge.clone(), EmbedState::Ctrl(p, 1)));
                }
            }
            EmbedState::Ctrl(p, 1) => {
                let c = moves(p, true);
                if c.is_empty() {
                    next.push((gc.clone(), EmbedState::Env(p)));
                }
                next.extend(c.into_iter().map(|(a, q)| (a, EmbedState::Ctrl(q, 2))));
            }
            EmbedState::Ctrl(p, _) => {
                if moves(p, false).is_empty() {
                    next.extend(moves(p, true).into_iter().map(|(a, q)| (a, EmbedState::Ctrl(q, 2))));
                } else {
                    next.push((gc.clone(), EmbedState::Env(p)));
                }
            }
        }
        for (a, t) in next {
            let dst = match ids.get(&t) {
                Some(&d) => d,
                None => {
                    let d = b.state(name(t));
                    b.side(d, if matches!(t, EmbedState::Env(_)) { Side::Env } else { Side::Ctrl });
                    ids.insert(t, d);
                    queue.push_back(t);
                    d
                }
            };
            b.transition(src, a, dst);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> ActionId {
        ActionId::new(s)
    }

    #[test]
    fn lone_uncontrollable_loop_stays_on_environment_side() {
        let mut b = DltsBuilder::new("M+", Alphabet::new([a("yieldC")], [a("u"), a("yieldE")]).unwrap());
        let t = b.state("t");
        b.transition(t, a("u"), t);
        let m = extract_rtc_controller(&b.build().unwrap()).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.out(0), &[(a("u"), 0)]);
        assert_eq!(m.side(0), Some(Side::Env));
    }

    #[test]
    fn detour_replaces_direct_uncontrollable_moves() {
        // t0 -u-> t1 ; t0 -yieldE-> t2 -yieldC-> t3 -w-> t0 ; t2 -c-> t0
        let mut b = DltsBuilder::new(
            "M+",
            Alphabet::new([a("c"), a("yieldC")], [a("u"), a("w"), a("yieldE")]).unwrap(),
        );
        let t0 = b.state("t0");
        let t1 = b.state("t1");
        let t2 = b.state("t2");
        let t3 = b.state("t3");
        b.transition(t0, a("u"), t1)
            .transition(t0, a("yieldE"), t2)
            .transition(t2, a("yieldC"), t3)
            .transition(t3, a("w"), t0)
            .transition(t2, a("c"), t0);
        let mplus = b.build().unwrap();
        let m = extract_rtc_controller(&mplus).unwrap();
        let init: Vec<_> = m.out(m.initial()).iter().map(|(x, t)| (x.clone(), m.state_name(*t).to_string())).collect();
        assert_eq!(init, vec![(a("c"), "c:t0".to_string()), (a("w"), "e:t0".to_string())]);
        assert!(m.num_states() <= 2 * mplus.num_states());
        assert!(m.is_deterministic());
    }

    #[test]
    fn missing_yields_rejected() {
        let mut b = DltsBuilder::new("M", Alphabet::new([a("c")], []).unwrap());
        b.state("t");
        assert!(matches!(extract_rtc_controller(&b.build().unwrap()), Err(crate::Error::Usage(_))));
    }
}
