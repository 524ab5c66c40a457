//! Parser for the line-oriented problem syntax.
//!
//! ```text
//! mode: rtc
//! controllable: takeoff land go[1][1..2]
//!
//! dlts UAV
//!   states: ground air
//!   init: ground
//!   controlled: takeoff land go[1][1..2]
//!   monitored: arrive[1][1..2]
//!   label ground: onGround
//!   trans ground takeoff air
//!   trans air go[1][1..2] air
//! end
//! compose Env = UAV || Arrival
//! environment Env
//!
//! fluent At[1][1..2] = <{arrive[1][1..2]},{go[*][*], land},false>
//! goal safety: G('land -> all(Sensed[*][*]))
//! assume GF !PendingArrival
//! guarantee GF 'land
//! ```
//!
//! `[a..b]` ranges expand the whole line, all ranges of a line in lockstep;
//! `name[i][j]` is the flat name `name.i.j`. A `*` segment matches any one
//! segment of a declared name and is allowed wherever a set is expected.

use std::collections::BTreeSet;

use indexmap::{IndexMap, IndexSet};

use crate::dlts::{Alphabet, Dlts, DltsBuilder, Side};
use crate::error::{Error, Result};
use crate::fluent::{Fluent, FluentSet};
use crate::formula::{asap, urg_rsp, Formula};
use crate::problem::{ControlProblem, Goal, Mode};
use crate::symbol::{is_yield, ActionId, PropId};

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        Error::Usage(m) | Error::Model(m) | Error::Spec(m) => Error::Parse { line, col: 1, msg: m },
    })
}

/// A parsed file: machines, fluents, goal and options.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub machines: IndexMap<String, Dlts>,
    pub environment: Option<String>,
    pub mode: Option<Mode>,
    pub controllable: IndexSet<ActionId>,
    pub fluents: FluentSet,
    pub goal: Goal,
}

/// A problem file: the control problem and the mode it asks for, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub problem: ControlProblem,
    pub mode: Option<Mode>,
}

impl Document {
    /// The machine named by `environment`, or the last one defined.
    pub fn env(&self) -> Result<&Dlts> {
        match &self.environment {
            Some(n) => self.machines.get(n).ok_or_else(|| Error::Model(format!("unknown machine `{n}`"))),
            None => self.machines.values().last().ok_or_else(|| Error::Model("no machine defined".into())),
        }
    }

    pub fn into_problem(self) -> Result<ProblemFile> {
        let env = self.env()?.clone();
        let problem = ControlProblem { env, fluents: self.fluents, goal: self.goal, controllable: self.controllable };
        problem.goal.validate(&problem.fluents, &problem.env)?;
        Ok(ProblemFile { problem, mode: self.mode })
    }
}

/// Parses a problem file; the goal must not be empty.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    parse_document(text)?.into_problem()
}

/// Parses a file holding a machine (a controller, say) and returns its environment machine.
pub fn parse_dlts(text: &str) -> Result<Dlts> {
    parse_document(text)?.env().cloned()
}

/// Expands `[a..b]` ranges in lockstep and flattens `x[i]` into `x.i`.
fn expand_line(no: usize, text: &str) -> Result<Vec<String>> {
    let mut ranges: Vec<(usize, usize, Vec<i64>)> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'[' {
            if let Some(close) = text[i..].find(']') {
                let inner = &text[i + 1..i + close];
                if let Some((a, b)) = inner.split_once("..") {
                    let (Ok(a), Ok(b)) = (a.trim().parse::<i64>(), b.trim().parse::<i64>()) else {
                        return err(no, i + 1, format!("bad range `[{inner}]`"));
                    };
                    if b < a {
                        return err(no, i + 1, format!("empty range `[{inner}]`"));
                    }
                    ranges.push((i, i + close + 1, (a..=b).collect()));
                }
                i += close;
            }
        }
        i += 1;
    }
    let width = ranges.iter().map(|r| r.2.len()).filter(|&n| n > 1).collect::<BTreeSet<_>>();
    if width.len() > 1 {
        return err(no, ranges[0].0 + 1, "ranges on one line must have the same length");
    }
    let n = width.into_iter().next().unwrap_or(1);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut line = String::new();
        let mut last = 0;
        for (start, end, values) in &ranges {
            line.push_str(&text[last..*start]);
            let v = if values.len() == 1 { values[0] } else { values[k] };
            line.push_str(&format!("[{v}]"));
            last = *end;
        }
        line.push_str(&text[last..]);
        out.push(line.replace("][", ".").replace('[', ".").replace(']', ""));
    }
    Ok(out)
}

/// Whitespace-separated words with their 1-based columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

/// Text after the first `k` words.
fn rest_after(text: &str, k: usize) -> (usize, &str) {
    let w = words(text);
    match w.get(k) {
        Some(&(col, _)) => (col, &text[col - 1..]),
        None => (text.len() + 1, ""),
    }
}

#[derive(Default)]
struct Block {
    name: String,
    line: usize,
    states: Vec<String>,
    init: Option<(usize, String)>,
    controlled: Vec<String>,
    monitored: Vec<String>,
    props: Vec<String>,
    enabledness: Vec<String>,
    labels: Vec<(String, Vec<String>)>,
    sides: Vec<(usize, String, String)>,
    trans: Vec<(usize, usize, String, String, String)>,
}

impl Block {
    fn build(self) -> Result<Dlts> {
        let line = self.line;
        let ids = |v: &[String]| v.iter().map(ActionId::new).collect::<Vec<_>>();
        let alphabet = at_line(line, Alphabet::new(ids(&self.controlled), ids(&self.monitored)))?;
        let mut b = DltsBuilder::new(self.name.clone(), alphabet.clone());
        for s in &self.states {
            b.state(s.clone());
        }
        if let Some((_, s)) = &self.init {
            let i = b.state(s.clone());
            b.initial(i);
        }
        for p in &self.props {
            b.prop(PropId::new(p));
        }
        for p in &self.enabledness {
            b.enabledness(PropId::new(p));
        }
        for (s, ps) in &self.labels {
            let i = b.state(s.clone());
            for p in ps {
                b.label(i, PropId::new(p));
            }
        }
        for (no, s, side) in &self.sides {
            let i = b.state(s.clone());
            let side = match side.as_str() {
                "e" => Side::Env,
                "c" => Side::Ctrl,
                other => return err(*no, 1, format!("side must be `e` or `c`, got `{other}`")),
            };
            b.side(i, side);
        }
        for (no, col, s, a, t) in &self.trans {
            let a = ActionId::new(a);
            if !alphabet.contains(&a) {
                return err(*no, *col, format!("action `{a}` is not declared in `{}`", self.name));
            }
            let (s, t) = (b.state(s.clone()), b.state(t.clone()));
            b.transition(s, a, t);
        }
        at_line(line, b.build())
    }
}

/// Deferred statements, resolved once the environment is known.
enum Deferred {
    Controllable(Vec<(usize, String)>),
    Fluent { name: String, body: String },
    Goal { kind: GoalKind, col: usize, text: String },
}

#[derive(Clone, Copy)]
enum GoalKind {
    Safety,
    Assume,
    Guarantee,
    Require,
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut doc = Document::default();
    let mut block: Option<Block> = None;
    let mut deferred: Vec<(usize, Deferred)> = Vec::new();
    let mut env_line = 0;
    let close = |block: &mut Option<Block>, doc: &mut Document| -> Result<()> {
        if let Some(b) = block.take() {
            let (name, line) = (b.name.clone(), b.line);
            if doc.machines.contains_key(&name) {
                return err(line, 1, format!("machine `{name}` defined twice"));
            }
            doc.machines.insert(name, b.build()?);
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let raw = raw.split('#').next().unwrap_or("");
        if raw.trim().is_empty() {
            continue;
        }
        for line in expand_line(no, raw)? {
            let w = words(&line);
            let (col0, head) = w[0];
            let args: Vec<&str> = w[1..].iter().map(|&(_, s)| s).collect();
            let need_block = |block: &mut Option<Block>| -> Result<()> {
                if block.is_none() {
                    return err(no, col0, format!("`{head}` outside a dlts block"));
                }
                Ok(())
            };
            match head {
                "mode:" => {
                    let [m] = args[..] else {
                        return err(no, col0, "expected `mode: rtc|standard`");
                    };
                    doc.mode = Some(m.parse().map_err(|e: String| Error::Parse { line: no, col: w[1].0, msg: e })?);
                }
                "controllable:" => {
                    deferred.push((no, Deferred::Controllable(w[1..].iter().map(|&(c, s)| (c, s.to_string())).collect())));
                }
                "dlts" => {
                    close(&mut block, &mut doc)?;
                    let [name] = args[..] else {
                        return err(no, col0, "expected `dlts <name>`");
                    };
                    block = Some(Block { name: name.into(), line: no, ..Block::default() });
                }
                "end" => {
                    need_block(&mut block)?;
                    close(&mut block, &mut doc)?;
                }
                "states:" | "controlled:" | "monitored:" | "props:" | "enabledness:" => {
                    need_block(&mut block)?;
                    let b = block.as_mut().unwrap();
                    let list = match head {
                        "states:" => &mut b.states,
                        "controlled:" => &mut b.controlled,
                        "monitored:" => &mut b.monitored,
                        "props:" => &mut b.props,
                        _ => &mut b.enabledness,
                    };
                    list.extend(args.iter().map(|s| s.to_string()));
                }
                "init:" => {
                    need_block(&mut block)?;
                    let [s] = args[..] else {
                        return err(no, col0, "expected `init: <state>`");
                    };
                    block.as_mut().unwrap().init = Some((no, s.into()));
                }
                "label" => {
                    need_block(&mut block)?;
                    let Some(s) = args.first().and_then(|s| s.strip_suffix(':')) else {
                        return err(no, col0, "expected `label <state>: <prop> ...`");
                    };
                    let props = args[1..].iter().map(|p| p.to_string()).collect();
                    block.as_mut().unwrap().labels.push((s.into(), props));
                }
                "side" => {
                    need_block(&mut block)?;
                    let [s, side] = args[..] else {
                        return err(no, col0, "expected `side <state> e|c`");
                    };
                    block.as_mut().unwrap().sides.push((no, s.into(), side.into()));
                }
                "trans" => {
                    need_block(&mut block)?;
                    let [s, a, t] = args[..] else {
                        return err(no, col0, "expected `trans <state> <action> <state>`");
                    };
                    block.as_mut().unwrap().trans.push((no, w[2].0, s.into(), a.into(), t.into()));
                }
                "compose" => {
                    close(&mut block, &mut doc)?;
                    if args.len() < 4 || args[1] != "=" {
                        return err(no, col0, "expected `compose <name> = <a> || <b>`");
                    }
                    let mut parts = Vec::new();
                    for (k, &(col, s)) in w[3..].iter().enumerate() {
                        if k % 2 == 1 {
                            if s != "||" {
                                return err(no, col, "expected `||`");
                            }
                        } else {
                            match doc.machines.get(s) {
                                Some(d) => parts.push(d.clone()),
                                None => return err(no, col, format!("unknown machine `{s}`")),
                            }
                        }
                    }
                    if parts.len() < 2 || w.len() % 2 != 0 {
                        return err(no, col0, "composition needs at least two machines");
                    }
                    let mut it = parts.into_iter();
                    let mut acc = it.next().unwrap();
                    for d in it {
                        acc = at_line(no, Dlts::parallel_compose(&acc, &d))?;
                    }
                    let name = args[0].to_string();
                    if doc.machines.contains_key(&name) {
                        return err(no, w[1].0, format!("machine `{name}` defined twice"));
                    }
                    doc.machines.insert(name.clone(), acc.with_name(name));
                }
                "environment" => {
                    close(&mut block, &mut doc)?;
                    let [name] = args[..] else {
                        return err(no, col0, "expected `environment <name>`");
                    };
                    doc.environment = Some(name.into());
                    env_line = no;
                }
                "fluent" => {
                    close(&mut block, &mut doc)?;
                    if args.len() < 3 || args[1] != "=" {
                        return err(no, col0, "expected `fluent <name> = <{...},{...},init>` or `fluent <name> = @prop`");
                    }
                    let (_, body) = rest_after(&line, 3);
                    deferred.push((no, Deferred::Fluent { name: args[0].into(), body: body.into() }));
                }
                "goal" | "assume" | "guarantee" | "require" => {
                    close(&mut block, &mut doc)?;
                    let (kind, marker) = match head {
                        "goal" => (GoalKind::Safety, "safety:"),
                        "assume" => (GoalKind::Assume, "GF"),
                        "guarantee" => (GoalKind::Guarantee, "GF"),
                        _ => (GoalKind::Require, "GF"),
                    };
                    if args.first() != Some(&marker) {
                        return err(no, col0, format!("expected `{head} {marker} <formula>`"));
                    }
                    let (col, text) = rest_after(&line, 2);
                    deferred.push((no, Deferred::Goal { kind, col, text: text.into() }));
                }
                other => return err(no, col0, format!("unknown statement `{other}`")),
            }
        }
    }
    close(&mut block, &mut doc)?;
    if deferred.is_empty() && doc.machines.is_empty() {
        return Ok(doc);
    }
    if let Some(n) = &doc.environment {
        if !doc.machines.contains_key(n) {
            return err(env_line, 1, format!("unknown machine `{n}`"));
        }
    }
    if deferred.is_empty() {
        doc.controllable = doc.env()?.alphabet().controlled().clone();
        return Ok(doc);
    }
    let env = doc.env().map_err(|_| Error::Parse { line: deferred[0].0, col: 1, msg: "no machine defined".into() })?.clone();
    resolve(&mut doc, &env, deferred)?;
    Ok(doc)
}

fn resolve(doc: &mut Document, env: &Dlts, deferred: Vec<(usize, Deferred)>) -> Result<()> {
    let actions: Vec<ActionId> = env.alphabet().iter().cloned().collect();
    let names: Vec<&str> = actions.iter().map(|a| a.name()).collect();
    let mut controllable: Option<IndexSet<ActionId>> = None;
    for (no, d) in &deferred {
        if let Deferred::Controllable(items) = d {
            let set = controllable.get_or_insert_with(IndexSet::new);
            for (col, pat) in items {
                for a in expand(&names, pat).map_err(|m| Error::Parse { line: *no, col: *col, msg: m })? {
                    if !env.alphabet().contains(&ActionId::new(a)) {
                        return err(*no, *col, format!("controllable action `{a}` is not in the environment alphabet"));
                    }
                    set.insert(ActionId::new(a));
                }
            }
        }
    }
    doc.controllable = controllable.unwrap_or_else(|| env.alphabet().controlled().clone());
    let strict = doc.mode != Some(Mode::Standard);
    if strict {
        if let Some(a) = actions.iter().find(|a| is_yield(a)) {
            return err(1, 1, format!("`{a}` is reserved for the yield reduction (allowed only with `mode: standard`)"));
        }
    }

    for (no, d) in &deferred {
        if let Deferred::Fluent { name, body } = d {
            let f = parse_fluent(*no, name, body, &names)?;
            if strict && f.mentions_any(&[crate::symbol::yield_c(), crate::symbol::yield_e()]) {
                return err(*no, 1, format!("fluent `{name}` mentions a reserved yield action"));
            }
            at_line(*no, doc.fluents.push(f).map(|_| ()))?;
        }
    }

    let ctx = Ctx {
        actions: &actions,
        controllable: doc.controllable.iter().cloned().collect(),
        uncontrollable: actions.iter().filter(|a| !doc.controllable.contains(*a)).cloned().collect(),
        fluents: doc.fluents.iter().map(|f| f.name.clone()).collect(),
        props: env.props().iter().map(|p| p.name().to_string()).collect(),
    };
    for (no, d) in &deferred {
        if let Deferred::Goal { kind, col, text } = d {
            let f = parse_formula_in(*no, *col, text, &ctx)?;
            ctx.check_names(*no, *col, &f)?;
            let list = match kind {
                GoalKind::Safety => &mut doc.goal.safety,
                GoalKind::Assume => &mut doc.goal.assumptions,
                GoalKind::Guarantee => &mut doc.goal.guarantees,
                GoalKind::Require => &mut doc.goal.require,
            };
            list.push(f);
        }
    }
    Ok(())
}

/// Whether `name` matches `pat`, where a `*` segment matches any one segment.
fn matches(pat: &str, name: &str) -> bool {
    let (p, n): (Vec<&str>, Vec<&str>) = (pat.split('.').collect(), name.split('.').collect());
    p.len() == n.len() && p.iter().zip(&n).all(|(a, b)| *a == "*" || a == b)
}

/// Names matched by `pat`, in declaration order; a pattern without `*` is itself.
fn expand<'a>(candidates: &[&'a str], pat: &'a str) -> std::result::Result<Vec<&'a str>, String> {
    if !pat.contains('*') {
        return Ok(vec![pat]);
    }
    let out: Vec<&str> = candidates.iter().copied().filter(|c| matches(pat, c)).collect();
    if out.is_empty() {
        return Err(format!("`{pat}` matches nothing"));
    }
    Ok(out)
}

fn parse_fluent(no: usize, name: &str, body: &str, actions: &[&str]) -> Result<Fluent> {
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(p) = compact.strip_prefix('@') {
        return Ok(Fluent::prop(name, PropId::new(p)));
    }
    let bad = || err(no, 1, format!("fluent `{name}`: expected `<{{...}},{{...}},true|false>`"));
    let Some(inner) = compact.strip_prefix("<{").and_then(|s| s.strip_suffix('>')) else {
        return bad();
    };
    let Some((init, rest)) = inner.split_once("},{") else {
        return bad();
    };
    let Some((term, initially)) = rest.split_once("},") else {
        return bad();
    };
    let initially = match initially {
        "true" => true,
        "false" => false,
        _ => return bad(),
    };
    let set = |s: &str| -> Result<Vec<ActionId>> {
        let mut out = Vec::new();
        for pat in s.split(',').filter(|p| !p.is_empty()) {
            for a in expand(actions, pat).map_err(|m| Error::Parse { line: no, col: 1, msg: m })? {
                if !actions.contains(&a) {
                    return err(no, 1, format!("fluent `{name}`: unknown action `{a}`"));
                }
                out.push(ActionId::new(a));
            }
        }
        Ok(out)
    };
    at_line(no, Fluent::transition(name, set(init)?, set(term)?, initially))
}

struct Ctx<'a> {
    actions: &'a [ActionId],
    controllable: Vec<ActionId>,
    uncontrollable: Vec<ActionId>,
    fluents: Vec<String>,
    props: Vec<String>,
}

impl Ctx<'_> {
    fn check_names(&self, no: usize, col: usize, f: &Formula) -> Result<()> {
        let mut bad = None;
        f.walk(&mut |n| match n {
            Formula::Fluent(x) if !self.fluents.contains(x) => {
                bad.get_or_insert(format!("undeclared fluent `{x}`"));
            }
            Formula::Action(a) if !self.actions.contains(a) => {
                bad.get_or_insert(format!("action `{a}` is not in the environment alphabet"));
            }
            Formula::Prop(p) if !self.props.iter().any(|q| q == p.name()) => {
                bad.get_or_insert(format!("proposition `{p}` is not carried by the environment"));
            }
            _ => {}
        });
        match bad {
            Some(m) => err(no, col, m),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Arrow,
    Minus,
    Act(String),
    Prop(String),
    Var(String),
    Ident(String),
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '*')
}

fn lex(no: usize, col0: usize, text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = col0 + pos;
        let next = chars.get(i + 1).map(|x| x.1);
        let two = |t: Tok, out: &mut Vec<(usize, Tok)>| out.push((col, t));
        match c {
            _ if c.is_whitespace() => {}
            '(' => two(Tok::LParen, &mut out),
            ')' => two(Tok::RParen, &mut out),
            ',' => two(Tok::Comma, &mut out),
            '!' => two(Tok::Not, &mut out),
            '&' if next == Some('&') => {
                two(Tok::And, &mut out);
                i += 1;
            }
            '|' if next == Some('|') => {
                two(Tok::Or, &mut out);
                i += 1;
            }
            '-' if next == Some('>') => {
                two(Tok::Arrow, &mut out);
                i += 1;
            }
            '-' => two(Tok::Minus, &mut out),
            '\'' | '@' | '$' => {
                let mut j = i + 1;
                while j < chars.len() && is_name_char(chars[j].1) {
                    j += 1;
                }
                if j == i + 1 {
                    return err(no, col, format!("expected a name after `{c}`"));
                }
                let end = chars.get(j).map_or(text.len(), |x| x.0);
                let name = text[chars[i + 1].0..end].to_string();
                out.push((
                    col,
                    match c {
                        '\'' => Tok::Act(name),
                        '@' => Tok::Prop(name),
                        _ => Tok::Var(name),
                    },
                ));
                i = j - 1;
            }
            _ if is_name_char(c) => {
                let mut j = i;
                while j < chars.len() && is_name_char(chars[j].1) {
                    j += 1;
                }
                let end = chars.get(j).map_or(text.len(), |x| x.0);
                out.push((col, Tok::Ident(text[pos..end].to_string())));
                i = j - 1;
            }
            _ => return err(no, col, format!("unexpected character `{c}`")),
        }
        i += 1;
    }
    Ok(out)
}

struct FormulaParser<'a> {
    no: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    ctx: &'a Ctx<'a>,
}

impl FormulaParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        err(self.no, self.col(), msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            return Ok(lhs.implies(self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.until()?;
        while self.eat(&Tok::And) {
            f = f.and(self.until()?);
        }
        Ok(f)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.is_ident("W") {
            self.pos += 1;
            return Ok(lhs.weak_until(self.until()?));
        }
        if self.is_ident("U") {
            self.pos += 1;
            return Ok(Formula::Until(Box::new(lhs), Box::new(self.until()?)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Not) {
            return Ok(self.unary()?.not());
        }
        if self.is_ident("G") {
            self.pos += 1;
            return Ok(self.unary()?.always());
        }
        if self.is_ident("F") {
            self.pos += 1;
            return Ok(Formula::Eventually(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn call_open(&mut self) -> Result<()> {
        self.pos += 1;
        self.expect(Tok::LParen, "`(`")
    }

    fn atom(&mut self) -> Result<Formula> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("unexpected end of formula");
        };
        let followed_by_paren = self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::LParen);
        match tok {
            Tok::LParen => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Act(a) if !a.contains('*') => {
                self.pos += 1;
                Ok(Formula::action(a.as_str()))
            }
            Tok::Prop(p) if !p.contains('*') => {
                self.pos += 1;
                Ok(Formula::prop(p.as_str()))
            }
            Tok::Ident(x) if followed_by_paren && x == "asap" => {
                self.call_open()?;
                let f = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(asap(f, &self.ctx.controllable))
            }
            Tok::Ident(x) if followed_by_paren && x == "urgRsp" => {
                self.call_open()?;
                let phi = self.implication()?;
                self.expect(Tok::Comma, "`,`")?;
                let psi = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(urg_rsp(phi, psi, &self.ctx.controllable))
            }
            Tok::Ident(x) if followed_by_paren && x == "act" => {
                self.call_open()?;
                let set = self.action_set()?;
                Ok(Formula::any_action(&set))
            }
            Tok::Ident(x) if followed_by_paren && (x == "all" || x == "any") => {
                self.call_open()?;
                let items = self.pattern_list()?;
                Ok(if x == "all" { Formula::conj(items) } else { Formula::disj(items) })
            }
            Tok::Ident(x) if x == "true" => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Tok::Ident(x) if x == "false" => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Tok::Ident(x) if !x.contains('*') && !["G", "F", "W", "U"].contains(&x.as_str()) => {
                self.pos += 1;
                Ok(Formula::fluent(x))
            }
            Tok::Act(_) | Tok::Prop(_) | Tok::Ident(_) => self.fail("patterns with `*` are only allowed inside all(), any() and act()"),
            _ => self.fail("expected a formula"),
        }
    }

    fn expand_here(&self, candidates: &[&str], pat: &str) -> Result<Vec<String>> {
        expand(candidates, pat)
            .map(|v| v.into_iter().map(String::from).collect())
            .map_err(|m| Error::Parse { line: self.no, col: self.col(), msg: m })
    }

    /// `act(...)` body: actions, `$C`, `$U`, each optionally preceded by `-`.
    fn action_set(&mut self) -> Result<Vec<ActionId>> {
        let names: Vec<&str> = self.ctx.actions.iter().map(|a| a.name()).collect();
        let mut set: IndexSet<ActionId> = IndexSet::new();
        loop {
            if self.eat(&Tok::RParen) {
                return Ok(set.into_iter().collect());
            }
            if self.eat(&Tok::Comma) {
                continue;
            }
            let remove = self.eat(&Tok::Minus);
            let items: Vec<ActionId> = match self.peek().cloned() {
                Some(Tok::Var(v)) if v == "C" => self.ctx.controllable.clone(),
                Some(Tok::Var(v)) if v == "U" => self.ctx.uncontrollable.clone(),
                Some(Tok::Act(p)) | Some(Tok::Ident(p)) => {
                    self.expand_here(&names, &p)?.into_iter().map(ActionId::new).collect()
                }
                _ => return self.fail("expected an action, `$C` or `$U`"),
            };
            self.pos += 1;
            for a in items {
                if remove {
                    set.shift_remove(&a);
                } else {
                    set.insert(a);
                }
            }
        }
    }

    /// `all(...)`/`any(...)` body: fluent, `'action` and `@prop` patterns.
    fn pattern_list(&mut self) -> Result<Vec<Formula>> {
        let actions: Vec<&str> = self.ctx.actions.iter().map(|a| a.name()).collect();
        let fluents: Vec<&str> = self.ctx.fluents.iter().map(|s| s.as_str()).collect();
        let props: Vec<&str> = self.ctx.props.iter().map(|s| s.as_str()).collect();
        let mut out = Vec::new();
        loop {
            if self.eat(&Tok::RParen) {
                return Ok(out);
            }
            if self.eat(&Tok::Comma) {
                continue;
            }
            match self.peek().cloned() {
                Some(Tok::Act(p)) => out.extend(self.expand_here(&actions, &p)?.into_iter().map(|a| Formula::action(a.as_str()))),
                Some(Tok::Prop(p)) => out.extend(self.expand_here(&props, &p)?.into_iter().map(|a| Formula::prop(a.as_str()))),
                Some(Tok::Ident(p)) => out.extend(self.expand_here(&fluents, &p)?.into_iter().map(Formula::fluent)),
                _ => return self.fail("expected a fluent, `'action` or `@prop` pattern"),
            }
            self.pos += 1;
        }
    }
}

fn parse_formula_in(no: usize, col: usize, text: &str, ctx: &Ctx<'_>) -> Result<Formula> {
    let toks = lex(no, col, text)?;
    let mut p = FormulaParser { no, toks, pos: 0, end_col: col + text.len(), ctx };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}

/// Parses a standalone formula over the given alphabet and fluents.
pub fn parse_formula(text: &str, env: &Dlts, controllable: &[ActionId], fluents: &FluentSet) -> Result<Formula> {
    let actions: Vec<ActionId> = env.alphabet().iter().cloned().collect();
    let ctx = Ctx {
        actions: &actions,
        controllable: controllable.to_vec(),
        uncontrollable: actions.iter().filter(|a| !controllable.contains(a)).cloned().collect(),
        fluents: fluents.iter().map(|f| f.name.clone()).collect(),
        props: env.props().iter().map(|p| p.name().to_string()).collect(),
    };
    let (no, col) = (1, 1);
    let f = parse_formula_in(no, col, &expand_line(no, text)?.join(" "), &ctx)?;
    ctx.check_names(no, col, &f)?;
    Ok(f)
}
