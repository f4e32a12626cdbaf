//! The inference rules for keys and independence atoms, proof trees, and
//! saturation.
//!
//! | rule | premises                 | conclusion |
//! |------|--------------------------|------------|
//! | R1   |                          | `∅ ⊥ X`    |
//! | R2   | `X ⊥ Y`                  | `Y ⊥ X`    |
//! | R3   | `X ⊥ X`, `Y ⊥ Z`         | `XY ⊥ Z`   |
//! | R4   | `X ⊥ YZ`                 | `X ⊥ Y`    |
//! | R5   | `X ⊥ Y`, `XY ⊥ Z`        | `X ⊥ YZ`   |
//! | R6   |                          | `k(R)`     |
//! | R7   | `k(X)`                   | `k(XY)`    |
//! | R8   | `X ⊥ X`, `k(XY)`         | `k(Y)`     |
//! | R9   | `X ⊥ Y`, `k(X)`          | `Y ⊥ Y`    |

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::attrs::{AttrSet, Schema};
use crate::constraint::{Constraint, ConstraintSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// trivial independence
    R1,
    /// symmetry
    R2,
    /// constancy
    R3,
    /// decomposition
    R4,
    /// exchange
    R5,
    /// trivial key
    R6,
    /// upward closure
    R7,
    /// first composition
    R8,
    /// second composition
    R9,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
    ];

    pub fn arity(self) -> usize {
        match self {
            RuleId::R1 | RuleId::R6 => 0,
            RuleId::R2 | RuleId::R4 | RuleId::R7 => 1,
            RuleId::R3 | RuleId::R5 | RuleId::R8 | RuleId::R9 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "trivial independence",
            RuleId::R2 => "symmetry",
            RuleId::R3 => "constancy",
            RuleId::R4 => "decomposition",
            RuleId::R5 => "exchange",
            RuleId::R6 => "trivial key",
            RuleId::R7 => "upward closure",
            RuleId::R8 => "1st composition",
            RuleId::R9 => "2nd composition",
        }
    }

    /// Metavariables the rule binds, as (X, Y, Z).
    fn binds(self) -> (bool, bool, bool) {
        match self {
            RuleId::R1 => (true, false, false),
            RuleId::R6 => (false, false, false),
            RuleId::R2 | RuleId::R7 | RuleId::R8 | RuleId::R9 => (true, true, false),
            RuleId::R3 | RuleId::R4 | RuleId::R5 => (true, true, true),
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::RuleMismatch {
                rule: s.into(),
                reason: "no such rule".into(),
            })
    }
}

/// Attribute sets bound to a rule's metavariables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Instantiation {
    pub x: Option<AttrSet>,
    pub y: Option<AttrSet>,
    pub z: Option<AttrSet>,
}

impl Instantiation {
    pub fn x(x: AttrSet) -> Self {
        Instantiation {
            x: Some(x),
            ..Default::default()
        }
    }

    pub fn xy(x: AttrSet, y: AttrSet) -> Self {
        Instantiation {
            x: Some(x),
            y: Some(y),
            z: None,
        }
    }

    pub fn xyz(x: AttrSet, y: AttrSet, z: AttrSet) -> Self {
        Instantiation {
            x: Some(x),
            y: Some(y),
            z: Some(z),
        }
    }
}

fn mismatch(rule: RuleId, reason: impl Into<String>) -> Error {
    Error::RuleMismatch {
        rule: rule.to_string(),
        reason: reason.into(),
    }
}

/// Applies one rule to premises under an instantiation and returns its
/// conclusion. Premises must match the rule template literally.
pub fn apply_rule(
    rule: RuleId,
    inst: &Instantiation,
    premises: &[Constraint],
    schema: &Schema,
) -> Result<Constraint> {
    if premises.len() != rule.arity() {
        return Err(mismatch(
            rule,
            format!("expects {} premises, got {}", rule.arity(), premises.len()),
        ));
    }
    let (bx, by, bz) = rule.binds();
    let need = |v: Option<AttrSet>, used: bool, name: &str| -> Result<AttrSet> {
        match (v, used) {
            (Some(s), true) => {
                schema.check(s)?;
                Ok(s)
            }
            (None, true) => Err(mismatch(rule, format!("metavariable {name} is unbound"))),
            (Some(_), false) => Err(mismatch(rule, format!("rule does not bind {name}"))),
            (None, false) => Ok(AttrSet::EMPTY),
        }
    };
    let x = need(inst.x, bx, "X")?;
    let y = need(inst.y, by, "Y")?;
    let z = need(inst.z, bz, "Z")?;
    for p in premises {
        p.check(schema)?;
    }
    let expect = |i: usize, want: Constraint| -> Result<()> {
        if premises[i] == want {
            Ok(())
        } else {
            Err(mismatch(
                rule,
                format!(
                    "premise {} is {}, template requires {}",
                    i + 1,
                    premises[i].display(schema),
                    want.display(schema)
                ),
            ))
        }
    };
    let conclusion = match rule {
        RuleId::R1 => Constraint::Ind(AttrSet::EMPTY, x),
        RuleId::R2 => {
            expect(0, Constraint::Ind(x, y))?;
            Constraint::Ind(y, x)
        }
        RuleId::R3 => {
            expect(0, Constraint::Ind(x, x))?;
            expect(1, Constraint::Ind(y, z))?;
            Constraint::Ind(x.union(y), z)
        }
        RuleId::R4 => {
            expect(0, Constraint::Ind(x, y.union(z)))?;
            Constraint::Ind(x, y)
        }
        RuleId::R5 => {
            expect(0, Constraint::Ind(x, y))?;
            expect(1, Constraint::Ind(x.union(y), z))?;
            Constraint::Ind(x, y.union(z))
        }
        RuleId::R6 => Constraint::Key(schema.full()),
        RuleId::R7 => {
            expect(0, Constraint::Key(x))?;
            Constraint::Key(x.union(y))
        }
        RuleId::R8 => {
            expect(0, Constraint::Ind(x, x))?;
            expect(1, Constraint::Key(x.union(y)))?;
            Constraint::Key(y)
        }
        RuleId::R9 => {
            expect(0, Constraint::Ind(x, y))?;
            expect(1, Constraint::Key(x))?;
            Constraint::Ind(y, y)
        }
    };
    Ok(conclusion)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Hypothesis,
    Rule(RuleId),
}

/// A derivation certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Constraint,
    pub step: Step,
    pub instantiation: Instantiation,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn hypothesis(c: Constraint) -> Self {
        ProofTree {
            conclusion: c,
            step: Step::Hypothesis,
            instantiation: Instantiation::default(),
            premises: Vec::new(),
        }
    }

    /// Builds a rule node, computing its conclusion with [`apply_rule`].
    pub fn rule(
        rule: RuleId,
        inst: Instantiation,
        premises: Vec<ProofTree>,
        schema: &Schema,
    ) -> Result<Self> {
        let ps: Vec<Constraint> = premises.iter().map(|p| p.conclusion).collect();
        let conclusion = apply_rule(rule, &inst, &ps, schema)?;
        Ok(ProofTree {
            conclusion,
            step: Step::Rule(rule),
            instantiation: inst,
            premises,
        })
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::depth).max().unwrap_or(0)
    }

    /// Every rule used, with multiplicity, in pre-order.
    pub fn rules(&self) -> Vec<RuleId> {
        let mut out = Vec::new();
        self.visit(&mut |n| {
            if let Step::Rule(r) = n.step {
                out.push(r);
            }
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ProofTree)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    /// `{conclusion, rule, instantiation: {X, Y, Z}, premises: [...]}`
    pub fn to_json(&self, schema: &Schema) -> serde_json::Value {
        serde_json::to_value(ProofJson::new(self, schema)).expect("serializable proof")
    }
}

#[derive(Serialize)]
struct InstJson {
    #[serde(rename = "X", skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    #[serde(rename = "Y", skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    #[serde(rename = "Z", skip_serializing_if = "Option::is_none")]
    z: Option<String>,
}

#[derive(Serialize)]
struct ProofJson {
    conclusion: String,
    rule: String,
    instantiation: InstJson,
    premises: Vec<ProofJson>,
}

impl ProofJson {
    fn new(p: &ProofTree, schema: &Schema) -> Self {
        let r = |s: Option<AttrSet>| s.map(|s| schema.render(s));
        ProofJson {
            conclusion: p.conclusion.display(schema).to_string(),
            rule: match p.step {
                Step::Hypothesis => "hypothesis".into(),
                Step::Rule(r) => r.to_string(),
            },
            instantiation: InstJson {
                x: r(p.instantiation.x),
                y: r(p.instantiation.y),
                z: r(p.instantiation.z),
            },
            premises: p.premises.iter().map(|q| ProofJson::new(q, schema)).collect(),
        }
    }
}

/// Outcome of [`check_proof`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofCheck {
    Accepted,
    /// `path` lists premise indices from the root to the failing node.
    Rejected { path: Vec<usize>, reason: String },
}

impl ProofCheck {
    pub fn accepted(&self) -> bool {
        matches!(self, ProofCheck::Accepted)
    }
}

/// Checks a proof tree against `sigma`. Hypotheses must be members of
/// `sigma` in exactly the stored orientation; symmetry must be applied
/// explicitly with R2.
pub fn check_proof(p: &ProofTree, sigma: &ConstraintSet, schema: &Schema) -> ProofCheck {
    fn go(p: &ProofTree, sigma: &ConstraintSet, schema: &Schema, path: &mut Vec<usize>) -> Option<String> {
        match p.step {
            Step::Hypothesis => {
                if !p.premises.is_empty() {
                    return Some("hypothesis node has premises".into());
                }
                if !sigma.contains_literal(&p.conclusion) {
                    return Some(format!(
                        "hypothesis {} is not in the constraint set",
                        p.conclusion.display(schema)
                    ));
                }
            }
            Step::Rule(rule) => {
                let ps: Vec<Constraint> = p.premises.iter().map(|q| q.conclusion).collect();
                match apply_rule(rule, &p.instantiation, &ps, schema) {
                    Err(e) => return Some(e.to_string()),
                    Ok(c) if c != p.conclusion => {
                        return Some(format!(
                            "rule {rule} yields {}, node claims {}",
                            c.display(schema),
                            p.conclusion.display(schema)
                        ))
                    }
                    Ok(_) => {}
                }
            }
        }
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            if let Some(r) = go(q, sigma, schema, path) {
                return Some(r);
            }
            path.pop();
        }
        None
    }
    let mut path = Vec::new();
    match go(p, sigma, schema, &mut path) {
        None => ProofCheck::Accepted,
        Some(reason) => ProofCheck::Rejected { path, reason },
    }
}

pub const DEFAULT_SCHEMA_CAP: usize = 6;

#[derive(Debug, Clone)]
struct Fact {
    constraint: Constraint,
    step: Step,
    inst: Instantiation,
    premises: Vec<usize>,
}

/// The least fixpoint of the rules over all keys and atoms of a schema.
///
/// Every rule maps that universe into itself, so membership in the
/// fixpoint coincides with derivability.
#[derive(Debug, Clone)]
pub struct Saturation {
    schema: Schema,
    facts: Vec<Fact>,
    index: HashMap<Constraint, usize>,
}

pub fn saturate(sigma: &ConstraintSet, schema: &Schema) -> Result<Saturation> {
    saturate_with_cap(sigma, schema, DEFAULT_SCHEMA_CAP)
}

pub fn saturate_with_cap(sigma: &ConstraintSet, schema: &Schema, cap: usize) -> Result<Saturation> {
    if schema.len() > cap {
        return Err(Error::SchemaCapExceeded {
            size: schema.len(),
            cap,
        });
    }
    sigma.check(schema)?;
    let mut sat = Saturator::new(schema.len());
    for c in sigma {
        sat.add(*c, Step::Hypothesis, Instantiation::default(), Vec::new());
    }
    sat.run();
    let Saturator { facts, .. } = sat;
    let index = facts
        .iter()
        .enumerate()
        .map(|(i, f)| (f.constraint, i))
        .collect();
    Ok(Saturation {
        schema: schema.clone(),
        facts,
        index,
    })
}

struct Saturator {
    size: usize,
    facts: Vec<Fact>,
    keys: Vec<Option<usize>>,
    inds: Vec<Option<usize>>,
    changed: bool,
}

impl Saturator {
    fn new(n: usize) -> Self {
        let size = 1usize << n;
        Saturator {
            size,
            facts: Vec::new(),
            keys: vec![None; size],
            inds: vec![None; size * size],
            changed: false,
        }
    }

    fn slot(&mut self, c: Constraint) -> &mut Option<usize> {
        match c {
            Constraint::Key(x) => &mut self.keys[x.bits() as usize],
            Constraint::Ind(x, y) => &mut self.inds[x.bits() as usize * self.size + y.bits() as usize],
        }
    }

    fn add(&mut self, c: Constraint, step: Step, inst: Instantiation, premises: Vec<usize>) {
        let id = self.facts.len();
        let slot = self.slot(c);
        if slot.is_none() {
            *slot = Some(id);
            self.facts.push(Fact {
                constraint: c,
                step,
                inst,
                premises,
            });
            self.changed = true;
        }
    }

    fn key(&self, x: u64) -> Option<usize> {
        self.keys[x as usize]
    }

    fn ind(&self, x: u64, y: u64) -> Option<usize> {
        self.inds[x as usize * self.size + y as usize]
    }

    fn run(&mut self) {
        let size = self.size as u64;
        let full = size - 1;
        let s = AttrSet::from_bits;
        let r = Step::Rule;
        loop {
            self.changed = false;
            for x in 0..size {
                self.add(Constraint::Ind(s(0), s(x)), r(RuleId::R1), Instantiation::x(s(x)), vec![]);
            }
            self.add(Constraint::Key(s(full)), r(RuleId::R6), Instantiation::default(), vec![]);
            for x in 0..size {
                for y in 0..size {
                    if let Some(p) = self.ind(x, y) {
                        self.add(Constraint::Ind(s(y), s(x)), r(RuleId::R2), Instantiation::xy(s(x), s(y)), vec![p]);
                    }
                }
            }
            for x in 0..size {
                let Some(px) = self.ind(x, x) else { continue };
                for y in 0..size {
                    for z in 0..size {
                        if let Some(pyz) = self.ind(y, z) {
                            self.add(
                                Constraint::Ind(s(x | y), s(z)),
                                r(RuleId::R3),
                                Instantiation::xyz(s(x), s(y), s(z)),
                                vec![px, pyz],
                            );
                        }
                    }
                }
            }
            for x in 0..size {
                for w in 0..size {
                    let Some(p) = self.ind(x, w) else { continue };
                    for y in s(w).subsets() {
                        let z = w & !y.bits();
                        self.add(Constraint::Ind(s(x), y), r(RuleId::R4), Instantiation::xyz(s(x), y, s(z)), vec![p]);
                    }
                }
            }
            for x in 0..size {
                for y in 0..size {
                    let Some(p1) = self.ind(x, y) else { continue };
                    for z in 0..size {
                        if let Some(p2) = self.ind(x | y, z) {
                            self.add(
                                Constraint::Ind(s(x), s(y | z)),
                                r(RuleId::R5),
                                Instantiation::xyz(s(x), s(y), s(z)),
                                vec![p1, p2],
                            );
                        }
                    }
                }
            }
            for x in 0..size {
                let Some(p) = self.key(x) else { continue };
                for t in 0..size {
                    if x & !t == 0 {
                        let y = t & !x;
                        self.add(Constraint::Key(s(t)), r(RuleId::R7), Instantiation::xy(s(x), s(y)), vec![p]);
                    }
                }
            }
            for x in 0..size {
                let Some(px) = self.ind(x, x) else { continue };
                for k in 0..size {
                    if x & !k != 0 {
                        continue;
                    }
                    let Some(pk) = self.key(k) else { continue };
                    for extra in s(x).subsets() {
                        let y = (k & !x) | extra.bits();
                        self.add(Constraint::Key(s(y)), r(RuleId::R8), Instantiation::xy(s(x), s(y)), vec![px, pk]);
                    }
                }
            }
            for x in 0..size {
                let Some(pk) = self.key(x) else { continue };
                for y in 0..size {
                    if let Some(p) = self.ind(x, y) {
                        self.add(Constraint::Ind(s(y), s(y)), r(RuleId::R9), Instantiation::xy(s(x), s(y)), vec![p, pk]);
                    }
                }
            }
            if !self.changed {
                break;
            }
        }
    }
}

impl Saturation {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Whether `c` is derivable. Atoms are matched in either orientation.
    pub fn derives(&self, c: &Constraint) -> bool {
        self.index.contains_key(c)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// All derivable constraints, normalized.
    pub fn constraints(&self) -> ConstraintSet {
        self.facts.iter().map(|f| f.constraint).collect()
    }

    /// Derivable constraints in derivation order, atoms in both orientations.
    pub fn derived(&self) -> impl Iterator<Item = &Constraint> {
        self.facts.iter().map(|f| &f.constraint)
    }

    /// The first derivation found for `c`.
    pub fn proof(&self, c: &Constraint) -> Option<ProofTree> {
        self.index.get(c).map(|&i| self.tree(i))
    }

    fn tree(&self, i: usize) -> ProofTree {
        let f = &self.facts[i];
        ProofTree {
            conclusion: f.constraint,
            step: f.step,
            instantiation: f.inst,
            premises: f.premises.iter().map(|&p| self.tree(p)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_constraint_file;

    fn schema(attrs: &[&str]) -> Schema {
        Schema::new("R", attrs.iter().copied()).unwrap()
    }

    fn set(s: &Schema, names: &str) -> AttrSet {
        s.parse_attr_set(names).unwrap()
    }

    #[test]
    fn table_examples() {
        let s = schema(&["A", "B", "C"]);
        let (a, b, c) = (set(&s, "A"), set(&s, "B"), set(&s, "C"));
        let ind = Constraint::ind;
        assert_eq!(
            apply_rule(RuleId::R2, &Instantiation::xy(a, b), &[ind(a, b)], &s).unwrap(),
            ind(b, a)
        );
        assert_eq!(
            apply_rule(RuleId::R3, &Instantiation::xyz(a, b, c), &[ind(a, a), ind(b, c)], &s).unwrap(),
            ind(a.union(b), c)
        );
        assert_eq!(
            apply_rule(RuleId::R5, &Instantiation::xyz(a, b, c), &[ind(a, b), ind(a.union(b), c)], &s)
                .unwrap(),
            ind(a, b.union(c))
        );
        assert_eq!(
            apply_rule(RuleId::R8, &Instantiation::xy(a, b), &[ind(a, a), Constraint::key(a.union(b))], &s)
                .unwrap(),
            Constraint::key(b)
        );
        assert_eq!(
            apply_rule(RuleId::R6, &Instantiation::default(), &[], &s).unwrap(),
            Constraint::key(s.full())
        );
        assert_eq!(
            apply_rule(RuleId::R1, &Instantiation::x(a), &[], &s).unwrap(),
            ind(AttrSet::EMPTY, a)
        );
    }

    #[test]
    fn rule_errors() {
        let s = schema(&["A", "B"]);
        let (a, b) = (set(&s, "A"), set(&s, "B"));
        let r = apply_rule(RuleId::R2, &Instantiation::xy(a, b), &[], &s);
        assert!(matches!(r, Err(Error::RuleMismatch { .. })));
        let r = apply_rule(RuleId::R8, &Instantiation::xy(a, b), &[Constraint::ind(a, b), Constraint::key(s.full())], &s);
        assert!(matches!(r, Err(Error::RuleMismatch { .. })));
        let r = apply_rule(RuleId::R1, &Instantiation::x(AttrSet::singleton(7)), &[], &s);
        assert!(matches!(r, Err(Error::OutOfSchema(_))));
        let r = apply_rule(RuleId::R1, &Instantiation::xy(a, b), &[], &s);
        assert!(r.is_err());
        assert_eq!("r7".parse::<RuleId>().unwrap(), RuleId::R7);
        assert!(RuleId::ALL.iter().all(|r| r.arity() <= 2));
    }

    #[test]
    fn check_proof_examples() {
        let s = schema(&["A", "B"]);
        let (a, b) = (set(&s, "A"), set(&s, "B"));
        let p = ProofTree::rule(
            RuleId::R2,
            Instantiation::xy(a, b),
            vec![ProofTree::hypothesis(Constraint::ind(a, b))],
            &s,
        )
        .unwrap();
        let sigma: ConstraintSet = [Constraint::ind(a, b)].into_iter().collect();
        assert!(check_proof(&p, &sigma, &s).accepted());
        match check_proof(&p, &ConstraintSet::new(), &s) {
            ProofCheck::Rejected { path, .. } => assert_eq!(path, vec![0]),
            ProofCheck::Accepted => panic!("hypothesis outside sigma accepted"),
        }
        let bad = ProofTree {
            conclusion: Constraint::key(b),
            step: Step::Rule(RuleId::R8),
            instantiation: Instantiation::xy(a, b),
            premises: vec![
                ProofTree::hypothesis(Constraint::ind(a, b)),
                ProofTree::hypothesis(Constraint::key(s.full())),
            ],
        };
        let sigma: ConstraintSet = [Constraint::ind(a, b), Constraint::key(s.full())].into_iter().collect();
        match check_proof(&bad, &sigma, &s) {
            ProofCheck::Rejected { path, reason } => {
                assert!(path.is_empty());
                assert!(reason.contains("template"), "{reason}");
            }
            ProofCheck::Accepted => panic!("template mismatch accepted"),
        }
    }

    #[test]
    fn hypotheses_match_stored_orientation() {
        let s = schema(&["A", "B"]);
        let (a, b) = (set(&s, "A"), set(&s, "B"));
        let sigma: ConstraintSet = [Constraint::ind(b, a)].into_iter().collect();
        assert!(check_proof(&ProofTree::hypothesis(Constraint::ind(a, b)), &sigma, &s).accepted());
        assert!(!check_proof(&ProofTree::hypothesis(Constraint::ind(b, a)), &sigma, &s).accepted());
    }

    #[test]
    fn saturation_examples() {
        let (s, sigma) = parse_constraint_file("schema R: A B; ind(A;A); key(A B);").unwrap();
        let sat = saturate(&sigma, &s).unwrap();
        let kb = Constraint::key(set(&s, "B"));
        assert!(sat.derives(&kb));
        assert!(check_proof(&sat.proof(&kb).unwrap(), &sigma, &s).accepted());

        let (s, sigma) = parse_constraint_file("schema R: A B; ind(A;B); key(A);").unwrap();
        let sat = saturate(&sigma, &s).unwrap();
        let b = set(&s, "B");
        assert!(sat.derives(&Constraint::ind(b, b)));

        let (s, sigma) = parse_constraint_file("schema R: A B;").unwrap();
        let sat = saturate(&sigma, &s).unwrap();
        for x in s.full().subsets() {
            assert!(sat.derives(&Constraint::ind(AttrSet::EMPTY, x)));
        }
        assert!(sat.derives(&Constraint::key(s.full())));
        assert!(!sat.derives(&Constraint::key(set(&s, "A"))));
    }

    #[test]
    fn schema_cap() {
        let s = Schema::new("R", ["A", "B", "C", "D", "E", "F", "G"]).unwrap();
        assert!(matches!(
            saturate(&ConstraintSet::new(), &s),
            Err(Error::SchemaCapExceeded { size: 7, cap: 6 })
        ));
        assert!(saturate_with_cap(&ConstraintSet::new(), &s, 7).is_ok());
    }

    #[test]
    fn proof_json_shape() {
        let (s, sigma) = parse_constraint_file("schema R: A B; ind(A;B);").unwrap();
        let sat = saturate(&sigma, &s).unwrap();
        let c = Constraint::ind(set(&s, "B"), set(&s, "A"));
        let j = sat.proof(&c).unwrap().to_json(&s);
        assert_eq!(j["conclusion"], "ind(B ; A)");
        assert_eq!(j["rule"], "R2");
        assert_eq!(j["instantiation"]["X"], "A");
        assert_eq!(j["premises"][0]["rule"], "hypothesis");
    }
}
