//! A small constraint language: totality, uniqueness, conjunction and a
//! temporal ordering constraint, with evaluation over histories and a
//! three-valued implication check.
//!
//! ```text
//! expr   := atom (AND atom)*
//! atom   := TOTAL '{' ref (',' ref)* '}'
//!         | UNIQUE '{' ref (',' ref)* '}'
//!         | '(' T BEFORE T ')' EQUALS T
//!         | '(' expr ')'
//! ref    := T '.' role
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::amu::{ActionRule, InstanceValue, Literal, TaskBody};
use crate::error::{KernelError, Result};
use crate::history::History;
use crate::isu::{InformationStructureUniverse, ObjectTypeId};
use crate::timeline::{Tick, TickRange};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

/// `otype.role`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleRef {
    pub otype: ObjectTypeId,
    pub role: String,
}

impl RoleRef {
    pub fn new(otype: impl Into<ObjectTypeId>, role: impl Into<String>) -> Self {
        Self {
            otype: otype.into(),
            role: role.into(),
        }
    }
}

impl fmt::Display for RoleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.otype, self.role)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintAst {
    /// Every instance of a referenced type plays at least one referenced role.
    Total(BTreeSet<RoleRef>),
    /// No value fills a referenced role in two distinct tuples.
    Unique(BTreeSet<RoleRef>),
    And(Vec<ConstraintAst>),
    /// Instances that entered `earlier` before `later` are exactly the
    /// instances of `target`.
    BeforeEquals {
        earlier: ObjectTypeId,
        later: ObjectTypeId,
        target: ObjectTypeId,
    },
}

impl ConstraintAst {
    pub fn total(refs: impl IntoIterator<Item = RoleRef>) -> Self {
        ConstraintAst::Total(refs.into_iter().collect())
    }

    pub fn unique(refs: impl IntoIterator<Item = RoleRef>) -> Self {
        ConstraintAst::Unique(refs.into_iter().collect())
    }

    pub fn role_refs(&self) -> BTreeSet<&RoleRef> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut BTreeSet<&'a RoleRef>) {
        match self {
            ConstraintAst::Total(r) | ConstraintAst::Unique(r) => out.extend(r),
            ConstraintAst::And(cs) => cs.iter().for_each(|c| c.collect_refs(out)),
            ConstraintAst::BeforeEquals { .. } => {}
        }
    }

    /// Types named outside role references.
    pub fn plain_types(&self) -> BTreeSet<&ObjectTypeId> {
        match self {
            ConstraintAst::BeforeEquals {
                earlier,
                later,
                target,
            } => [earlier, later, target].into(),
            ConstraintAst::And(cs) => cs.iter().flat_map(|c| c.plain_types()).collect(),
            _ => BTreeSet::new(),
        }
    }

    /// Non-conjunctive leaves.
    pub fn conjuncts(&self) -> Vec<&ConstraintAst> {
        match self {
            ConstraintAst::And(cs) => cs.iter().flat_map(|c| c.conjuncts()).collect(),
            other => vec![other],
        }
    }

    fn has_temporal(&self) -> bool {
        self.conjuncts()
            .iter()
            .any(|c| matches!(c, ConstraintAst::BeforeEquals { .. }))
    }
}

impl fmt::Display for ConstraintAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let refs = |f: &mut fmt::Formatter<'_>, kw: &str, r: &BTreeSet<RoleRef>| {
            let items: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "{kw} {{ {} }}", items.join(", "))
        };
        match self {
            ConstraintAst::Total(r) => refs(f, "TOTAL", r),
            ConstraintAst::Unique(r) => refs(f, "UNIQUE", r),
            ConstraintAst::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" AND ")?;
                    }
                    if matches!(c, ConstraintAst::And(_)) {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "{c}")?;
                    }
                }
                Ok(())
            }
            ConstraintAst::BeforeEquals {
                earlier,
                later,
                target,
            } => write!(f, "({earlier} BEFORE {later}) EQUALS {target}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_'
}

fn lex(text: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if "{}(),.:".contains(c) {
            chars.next();
            out.push(Token {
                tok: Tok::Punct(c),
                pos,
            });
        } else if c == '\'' || c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some((_, q)) if q == c => break,
                    Some((_, ch)) => s.push(ch),
                    None => {
                        return Err(ParseError {
                            position: pos,
                            message: "unterminated string".into(),
                        })
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                pos,
            });
        } else if is_word_char(c) {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if !is_word_char(ch) {
                    break;
                }
                s.push(ch);
                chars.next();
            }
            out.push(Token {
                tok: Tok::Word(s),
                pos,
            });
        } else {
            return Err(ParseError {
                position: pos,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> std::result::Result<Self, ParseError> {
        Ok(Self {
            toks: lex(text)?,
            idx: 0,
            end: text.len(),
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |t| t.pos)
    }

    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.idx + k).map(|t| &t.tok)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w == kw)
    }

    fn keyword(&mut self, kw: &str) -> std::result::Result<(), ParseError> {
        if self.at_keyword(kw) {
            self.idx += 1;
            Ok(())
        } else {
            self.err(format!("expected `{kw}`"))
        }
    }

    fn punct(&mut self, p: char) -> std::result::Result<(), ParseError> {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.idx += 1;
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn word(&mut self) -> std::result::Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.idx += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn done(&self) -> std::result::Result<(), ParseError> {
        if self.idx == self.toks.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn expr(&mut self) -> std::result::Result<ConstraintAst, ParseError> {
        let mut items = vec![self.atom()?];
        while self.at_keyword("AND") {
            self.idx += 1;
            items.push(self.atom()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            ConstraintAst::And(items)
        })
    }

    fn atom(&mut self) -> std::result::Result<ConstraintAst, ParseError> {
        if self.at_keyword("TOTAL") {
            self.idx += 1;
            return Ok(ConstraintAst::Total(self.refs()?));
        }
        if self.at_keyword("UNIQUE") {
            self.idx += 1;
            return Ok(ConstraintAst::Unique(self.refs()?));
        }
        if self.peek() == Some(&Tok::Punct('(')) {
            let temporal = matches!(self.peek_at(1), Some(Tok::Word(_)))
                && matches!(self.peek_at(2), Some(Tok::Word(w)) if w == "BEFORE");
            if temporal {
                return self.before_equals();
            }
            self.idx += 1;
            let inner = self.expr()?;
            self.punct(')')?;
            return Ok(inner);
        }
        self.err("expected TOTAL, UNIQUE or `(`")
    }

    fn refs(&mut self) -> std::result::Result<BTreeSet<RoleRef>, ParseError> {
        self.punct('{')?;
        let mut out = BTreeSet::new();
        if self.peek() == Some(&Tok::Punct('}')) {
            return self.err("empty role reference set");
        }
        loop {
            let otype = self.word()?;
            self.punct('.')?;
            let role = self.word()?;
            out.insert(RoleRef::new(otype, role));
            if self.peek() == Some(&Tok::Punct(',')) {
                self.idx += 1;
                continue;
            }
            self.punct('}')?;
            return Ok(out);
        }
    }

    fn before_equals(&mut self) -> std::result::Result<ConstraintAst, ParseError> {
        let start = self.pos();
        self.punct('(')?;
        let earlier = self.word()?;
        self.keyword("BEFORE")?;
        let later = self.word()?;
        self.punct(')')?;
        self.keyword("EQUALS")?;
        let target = self.word()?;
        if earlier == later || earlier == target || later == target {
            return Err(ParseError {
                position: start,
                message: "BEFORE/EQUALS types must be pairwise distinct".into(),
            });
        }
        Ok(ConstraintAst::BeforeEquals {
            earlier: earlier.into(),
            later: later.into(),
            target: target.into(),
        })
    }

    /// `T:var`
    fn typed_var(&mut self) -> std::result::Result<(ObjectTypeId, String), ParseError> {
        let t = self.word()?;
        self.punct(':')?;
        let v = self.word()?;
        Ok((t.into(), v))
    }

    fn action(&mut self) -> std::result::Result<ActionRule, ParseError> {
        self.keyword("WHEN")?;
        self.keyword("ADD")?;
        let (trigger, var) = self.typed_var()?;
        self.keyword("DO")?;
        let mut guard = None;
        if self.at_keyword("IF") {
            self.idx += 1;
            let at = self.pos();
            let (g, v) = self.typed_var()?;
            if v != var {
                return Err(ParseError {
                    position: at,
                    message: format!("unbound variable `{v}`"),
                });
            }
            guard = Some(g);
            self.keyword("THEN")?;
        }
        self.keyword("ADD")?;
        let at = self.pos();
        let (subject, v) = self.typed_var()?;
        if v != var {
            return Err(ParseError {
                position: at,
                message: format!("unbound variable `{v}`"),
            });
        }
        self.keyword("has")?;
        let fact = self.word()?.into();
        self.keyword("of")?;
        let object = self.word()?.into();
        self.punct(':')?;
        let literal = match self.peek().cloned() {
            Some(Tok::Str(s)) => Literal::Str(s),
            Some(Tok::Word(w)) => match w.parse::<i64>() {
                Ok(n) => Literal::Int(n),
                Err(_) => return self.err("expected a literal"),
            },
            _ => return self.err("expected a literal"),
        };
        self.idx += 1;
        Ok(ActionRule {
            trigger,
            var,
            guard,
            subject,
            fact,
            object,
            literal,
        })
    }
}

pub fn parse_constraint(text: &str) -> std::result::Result<ConstraintAst, ParseError> {
    let mut p = Parser::new(text)?;
    let ast = p.expr()?;
    p.done()?;
    Ok(ast)
}

/// Task bodies: empty, a constraint, or an action rule
/// `WHEN ADD T:x DO [IF G:x THEN] ADD S:x has F of L:lit`.
pub fn parse_task(text: &str) -> std::result::Result<TaskBody, ParseError> {
    let mut p = Parser::new(text)?;
    if p.toks.is_empty() {
        return Ok(TaskBody::Empty);
    }
    let body = if p.at_keyword("WHEN") {
        TaskBody::Action(p.action()?)
    } else {
        TaskBody::Constraint(p.expr()?)
    };
    p.done()?;
    Ok(body)
}

/// Fact types in which `r.otype` plays `r.role`.
pub fn resolve_role<'u>(
    u: &'u InformationStructureUniverse,
    r: &RoleRef,
) -> Result<Vec<&'u ObjectTypeId>> {
    u.require(&r.otype)?;
    let facts = u.fact_types_with_role(&r.otype, &r.role);
    if facts.is_empty() {
        return Err(KernelError::UnknownRole {
            otype: r.otype.to_string(),
            role: r.role.clone(),
        });
    }
    Ok(facts)
}

/// Populations at one tick, with tuple fillers per role.
struct TickIndex<'h> {
    pop: BTreeMap<&'h ObjectTypeId, BTreeSet<&'h InstanceValue>>,
}

impl<'h> TickIndex<'h> {
    fn build(h: &'h History, t: Tick) -> Self {
        let mut pop: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
        for g in h.typings_at(t) {
            for x in &g.types {
                pop.entry(x).or_default().insert(&g.value);
            }
        }
        Self { pop }
    }

    fn pop(&self, x: &ObjectTypeId) -> impl Iterator<Item = &'h InstanceValue> + '_ {
        self.pop.get(x).into_iter().flatten().copied()
    }

    /// Value in `role` to the distinct tuples carrying it.
    fn fillers(
        &self,
        facts: &[&ObjectTypeId],
        role: &str,
    ) -> BTreeMap<&'h InstanceValue, BTreeSet<&'h InstanceValue>> {
        let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
        for f in facts {
            for w in self.pop(f) {
                if let InstanceValue::Tuple(m) = w {
                    if let Some(v) = m.get(role) {
                        out.entry(v).or_default().insert(w);
                    }
                }
            }
        }
        out
    }
}

/// Resolved role references, shared by all ticks of one evaluation.
struct Resolved<'u> {
    facts: BTreeMap<RoleRef, Vec<&'u ObjectTypeId>>,
}

impl<'u> Resolved<'u> {
    fn new(u: &'u InformationStructureUniverse, ast: &ConstraintAst) -> Result<Self> {
        let mut facts = BTreeMap::new();
        for r in ast.role_refs() {
            facts.insert(r.clone(), resolve_role(u, r)?);
        }
        for x in ast.plain_types() {
            u.require(x)?;
        }
        Ok(Self { facts })
    }
}

fn holds_at(idx: &TickIndex<'_>, res: &Resolved<'_>, ast: &ConstraintAst) -> bool {
    match ast {
        ConstraintAst::Total(refs) => {
            let fillers: Vec<_> = refs
                .iter()
                .map(|r| idx.fillers(&res.facts[r], &r.role))
                .collect();
            refs.iter()
                .flat_map(|r| idx.pop(&r.otype))
                .all(|v| fillers.iter().any(|f| f.contains_key(v)))
        }
        ConstraintAst::Unique(refs) => refs.iter().all(|r| {
            idx.fillers(&res.facts[r], &r.role)
                .values()
                .all(|tuples| tuples.len() <= 1)
        }),
        ConstraintAst::And(cs) => cs.iter().all(|c| holds_at(idx, res, c)),
        ConstraintAst::BeforeEquals { .. } => true,
    }
}

fn before_equals_holds(
    h: &History,
    ticks: &[Tick],
    earlier: &ObjectTypeId,
    later: &ObjectTypeId,
    target: &ObjectTypeId,
) -> bool {
    let mut first_e: BTreeMap<InstanceValue, Tick> = BTreeMap::new();
    let mut first_l: BTreeMap<InstanceValue, Tick> = BTreeMap::new();
    let mut target_pop: BTreeSet<InstanceValue> = BTreeSet::new();
    for &t in ticks {
        for g in h.typings_at(t) {
            if g.types.contains(earlier) {
                first_e.entry(g.value.clone()).or_insert(t);
            }
            if g.types.contains(later) {
                first_l.entry(g.value.clone()).or_insert(t);
            }
            if g.types.contains(target) {
                target_pop.insert(g.value.clone());
            }
        }
    }
    let entered_first: BTreeSet<InstanceValue> = first_e
        .into_iter()
        .filter(|(v, te)| first_l.get(v).is_none_or(|tl| te < tl))
        .map(|(v, _)| v)
        .collect();
    entered_first == target_pop
}

fn bounded_ticks(h: &History, interval: TickRange) -> Vec<Tick> {
    let end = interval.end.unwrap_or_else(|| {
        h.last_breakpoint()
            .unwrap_or(interval.start)
            .max(interval.start)
    });
    (interval.start.0..=end.0).map(Tick).collect()
}

/// Whether `ast` holds on `h` over `interval`. Per-tick constraints are
/// checked at every tick; BEFORE/EQUALS is checked once over the interval.
/// An unbounded interval is cut at the last tick where `h` changes.
pub fn eval_constraint(h: &History, interval: TickRange, ast: &ConstraintAst) -> Result<bool> {
    Ok(first_failure(h, interval, ast)?.is_none())
}

/// Earliest tick at which `ast` is found to fail; temporal conjuncts fail at
/// the end of the interval.
pub fn first_failure(
    h: &History,
    interval: TickRange,
    ast: &ConstraintAst,
) -> Result<Option<Tick>> {
    let res = Resolved::new(h.universe(), ast)?;
    let ticks = bounded_ticks(h, interval);
    for &t in &ticks {
        if !holds_at(&TickIndex::build(h, t), &res, ast) {
            return Ok(Some(t));
        }
    }
    for c in ast.conjuncts() {
        if let ConstraintAst::BeforeEquals {
            earlier,
            later,
            target,
        } = c
        {
            if !before_equals_holds(h, &ticks, earlier, later, target) {
                return Ok(ticks.last().copied());
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImplicationVerdict {
    /// Carries the reason.
    Implied(String),
    /// Carries a counterexample.
    NotImplied(String),
    Unknown,
}

impl ImplicationVerdict {
    pub fn is_implied(&self) -> bool {
        matches!(self, ImplicationVerdict::Implied(_))
    }

    pub fn is_not_implied(&self) -> bool {
        matches!(self, ImplicationVerdict::NotImplied(_))
    }
}

fn ref_types(refs: &BTreeSet<RoleRef>) -> BTreeSet<&ObjectTypeId> {
    refs.iter().map(|r| &r.otype).collect()
}

/// Whether atom `a` alone guarantees atom `b`.
fn subsumes(a: &ConstraintAst, b: &ConstraintAst) -> bool {
    match (a, b) {
        // fewer alternatives over a domain at least as large
        (ConstraintAst::Total(s1), ConstraintAst::Total(s2)) => {
            s1.is_subset(s2) && ref_types(s2).is_subset(&ref_types(s1))
        }
        (ConstraintAst::Unique(s1), ConstraintAst::Unique(s2)) => s2.is_subset(s1),
        _ => a == b,
    }
}

/// Does `d1` imply `d2` on every history? Sound syntactic subsumption first,
/// then a bounded counterexample search; anything else is `Unknown`.
pub fn constr_implies(d1: &ConstraintAst, d2: &ConstraintAst) -> ImplicationVerdict {
    let c1 = d1.conjuncts();
    let c2 = d2.conjuncts();
    let mut reasons = Vec::new();
    let all_subsumed = c2.iter().all(|b| match c1.iter().find(|a| subsumes(a, b)) {
        Some(a) => {
            reasons.push(format!("{a} => {b}"));
            true
        }
        None => false,
    });
    if all_subsumed {
        return ImplicationVerdict::Implied(reasons.join("; "));
    }
    if d1.has_temporal() || d2.has_temporal() {
        return ImplicationVerdict::Unknown;
    }
    match bounded_counterexample(d1, d2) {
        Some(w) => ImplicationVerdict::NotImplied(w),
        None => ImplicationVerdict::Unknown,
    }
}

const SEARCH_VALUES: usize = 2;
const SEARCH_LIMIT: u64 = 5_000_000;

/// Single-tick worlds over two values. Each role reference gets its own fact
/// type; a world fixes each referenced type's population and how many tuples
/// each value fills per role (0, 1 or 2). Fillers must be instances of the
/// role's player.
fn bounded_counterexample(d1: &ConstraintAst, d2: &ConstraintAst) -> Option<String> {
    let refs: Vec<RoleRef> = d1
        .role_refs()
        .union(&d2.role_refs())
        .map(|r| (*r).clone())
        .collect();
    let types: Vec<ObjectTypeId> = refs
        .iter()
        .map(|r| r.otype.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pop_worlds = 1u64 << (SEARCH_VALUES * types.len());
    let fill_worlds = 3u64.checked_pow((SEARCH_VALUES * refs.len()) as u32)?;
    if pop_worlds.checked_mul(fill_worlds)? > SEARCH_LIMIT {
        return None;
    }
    let type_idx = |x: &ObjectTypeId| types.iter().position(|t| t == x).expect("collected");
    let ref_idx = |r: &RoleRef| refs.iter().position(|q| q == r).expect("collected");

    struct World {
        pop: Vec<u8>,
        fill: Vec<[u8; SEARCH_VALUES]>,
    }
    let eval = |w: &World, ast: &ConstraintAst| -> bool {
        fn go(
            w: &World,
            ast: &ConstraintAst,
            ti: &dyn Fn(&ObjectTypeId) -> usize,
            ri: &dyn Fn(&RoleRef) -> usize,
        ) -> bool {
            match ast {
                ConstraintAst::Total(s) => (0..SEARCH_VALUES).all(|v| {
                    let in_domain = s.iter().any(|r| w.pop[ti(&r.otype)] & (1 << v) != 0);
                    !in_domain || s.iter().any(|r| w.fill[ri(r)][v] > 0)
                }),
                ConstraintAst::Unique(s) => s.iter().all(|r| w.fill[ri(r)].iter().all(|&n| n <= 1)),
                ConstraintAst::And(cs) => cs.iter().all(|c| go(w, c, ti, ri)),
                ConstraintAst::BeforeEquals { .. } => true,
            }
        }
        go(w, ast, &type_idx, &ref_idx)
    };

    let slots = SEARCH_VALUES * refs.len();
    for pop_code in 0..pop_worlds {
        let pop: Vec<u8> = (0..types.len())
            .map(|i| ((pop_code >> (SEARCH_VALUES * i)) & 0b11) as u8)
            .collect();
        let mut digits = vec![0u8; slots];
        loop {
            let consistent = (0..slots).all(|s| {
                let (r, v) = (s / SEARCH_VALUES, s % SEARCH_VALUES);
                digits[s] == 0 || pop[type_idx(&refs[r].otype)] & (1 << v) != 0
            });
            if consistent {
                let w = World {
                    pop: pop.clone(),
                    fill: digits.chunks(SEARCH_VALUES).map(|c| [c[0], c[1]]).collect(),
                };
                if eval(&w, d1) && !eval(&w, d2) {
                    return Some(describe_world(&types, &refs, &w.pop, &w.fill));
                }
            }
            if !advance(&mut digits) {
                break;
            }
        }
    }
    None
}

fn advance(digits: &mut [u8]) -> bool {
    for d in digits.iter_mut() {
        if *d < 2 {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn describe_world(
    types: &[ObjectTypeId],
    refs: &[RoleRef],
    pop: &[u8],
    fill: &[[u8; SEARCH_VALUES]],
) -> String {
    let vals = |mask: u8| -> Vec<String> {
        (0..SEARCH_VALUES)
            .filter(|v| mask & (1 << v) != 0)
            .map(|v| format!("v{}", v + 1))
            .collect()
    };
    let mut parts: Vec<String> = types
        .iter()
        .zip(pop)
        .map(|(t, m)| format!("Pop({t}) = {{{}}}", vals(*m).join(", ")))
        .collect();
    for (r, counts) in refs.iter().zip(fill) {
        for (v, n) in counts.iter().enumerate() {
            if *n > 0 {
                parts.push(format!("v{} fills {r} in {n} tuple(s)", v + 1));
            }
        }
    }
    if parts.len() == types.len() {
        parts.push("no tuples".into());
    }
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(refs: &[(&str, &str)]) -> ConstraintAst {
        ConstraintAst::total(refs.iter().map(|(t, r)| RoleRef::new(*t, *r)))
    }

    fn unique(refs: &[(&str, &str)]) -> ConstraintAst {
        ConstraintAst::unique(refs.iter().map(|(t, r)| RoleRef::new(*t, *r)))
    }

    #[test]
    fn parse_total() {
        assert_eq!(
            parse_constraint("TOTAL { Manufacturer.builds }").unwrap(),
            total(&[("Manufacturer", "builds")])
        );
    }

    #[test]
    fn parse_conjunction() {
        let ast =
            parse_constraint("TOTAL { Airplane.build-by } AND TOTAL { Airplane.has-as }").unwrap();
        assert_eq!(
            ast,
            ConstraintAst::And(vec![
                total(&[("Airplane", "build-by")]),
                total(&[("Airplane", "has-as")])
            ])
        );
    }

    #[test]
    fn parse_before_equals() {
        let ast =
            parse_constraint("(Unregistered-airplane BEFORE Registered-airplane) EQUALS Airplane")
                .unwrap();
        assert_eq!(
            ast,
            ConstraintAst::BeforeEquals {
                earlier: "Unregistered-airplane".into(),
                later: "Registered-airplane".into(),
                target: "Airplane".into(),
            }
        );
        assert!(parse_constraint("(A BEFORE A) EQUALS B").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_constraint("TOTAL { }").unwrap_err();
        assert_eq!(e.position, 8);
        let e = parse_constraint("TOTAL { A.r } OR TOTAL { B.s }").unwrap_err();
        assert_eq!(e.position, 14);
        assert!(parse_constraint("").is_err());
        assert!(parse_constraint("UNIQUE { A }").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "TOTAL { A.r, B.s }",
            "UNIQUE { A.r } AND (TOTAL { A.r } AND TOTAL { B.s })",
            "(A BEFORE B) EQUALS C AND UNIQUE { C.x }",
        ] {
            let ast = parse_constraint(text).unwrap();
            assert_eq!(parse_constraint(&ast.to_string()).unwrap(), ast);
        }
    }

    #[test]
    fn parse_action_rule() {
        let body = parse_task(
            "WHEN ADD Medium:x DO IF LP:x THEN ADD LP:x has Lending-frequency of Frequency:0",
        )
        .unwrap();
        let TaskBody::Action(rule) = body else {
            panic!("expected an action rule");
        };
        assert_eq!(rule.trigger, "Medium".into());
        assert_eq!(rule.guard, Some("LP".into()));
        assert_eq!(rule.literal, Literal::Int(0));
        assert!(parse_task("WHEN ADD A:x DO ADD A:y has F of L:0").is_err());
        assert_eq!(parse_task("  ").unwrap(), TaskBody::Empty);
    }

    #[test]
    fn implies_reflexive() {
        let d = parse_constraint("TOTAL { A.r } AND UNIQUE { B.s }").unwrap();
        assert!(constr_implies(&d, &d).is_implied());
        let t = parse_constraint("(A BEFORE B) EQUALS C").unwrap();
        assert!(constr_implies(&t, &t).is_implied());
    }

    #[test]
    fn conjunction_strengthens_disjunction() {
        let unreg =
            parse_constraint("TOTAL { Airplane.build-by } AND TOTAL { Airplane.has-as }").unwrap();
        let plane = parse_constraint("TOTAL { Airplane.build-by, Airplane.has-as }").unwrap();
        assert!(constr_implies(&unreg, &plane).is_implied());
        assert!(constr_implies(&plane, &unreg).is_not_implied());
    }

    #[test]
    fn unique_does_not_imply_total() {
        let v = constr_implies(&unique(&[("T", "r")]), &total(&[("T", "r")]));
        let ImplicationVerdict::NotImplied(w) = v else {
            panic!("expected a counterexample, got {v:?}");
        };
        assert!(w.contains("Pop(T)"));
    }

    #[test]
    fn total_over_wider_domain_is_not_implied() {
        let a = total(&[("A", "r")]);
        let b = total(&[("A", "r"), ("B", "s")]);
        assert!(constr_implies(&a, &b).is_not_implied());
        assert!(
            constr_implies(&unique(&[("A", "r"), ("B", "s")]), &unique(&[("A", "r")])).is_implied()
        );
    }

    #[test]
    fn temporal_mismatch_is_unknown() {
        let a = parse_constraint("(A BEFORE B) EQUALS C").unwrap();
        let b = parse_constraint("(B BEFORE A) EQUALS C").unwrap();
        assert_eq!(constr_implies(&a, &b), ImplicationVerdict::Unknown);
    }
}
