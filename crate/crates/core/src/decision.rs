//! Polynomial-time decision of general implication for keys and unary
//! independence atoms.
//!
//! Everything hinges on the constant set `R' = {A : Σ ⊢ A ⊥ A}`:
//!
//! * `k(D)` is implied iff some `k(B) ∈ Σ ∪ {k(R)}` has `B ∖ R' ⊆ D`;
//! * `A ⊥ B` is implied iff it is in `Σ` up to symmetry, or `A ∈ R'`, or
//!   `B ∈ R'`.
//!
//! Positive answers carry proof trees; negative answers carry the parameters
//! of the chase construction in [`crate::countermodel`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::attrs::{AttrSet, Schema};
use crate::constraint::{Constraint, ConstraintSet};
use crate::derivation::{Instantiation, ProofTree, RuleId};
use crate::error::{Error, Result};

/// `R'` together with a proof of `A ⊥ A` for each member.
#[derive(Debug, Clone)]
pub struct ConstantSet {
    pub attrs: AttrSet,
    proofs: BTreeMap<usize, ProofTree>,
}

impl ConstantSet {
    pub fn contains(&self, pos: usize) -> bool {
        self.attrs.contains(pos)
    }

    /// Proof of `A ⊥ A` for a constant attribute.
    pub fn proof(&self, pos: usize) -> Option<&ProofTree> {
        self.proofs.get(&pos)
    }
}

fn validate_sigma(sigma: &ConstraintSet, schema: &Schema) -> Result<()> {
    sigma.check(schema)?;
    if let Some(c) = sigma
        .iter()
        .find(|c| c.is_ind() && !c.is_unary_ind() && !c.is_trivial_ind())
    {
        return Err(Error::Unsupported(format!(
            "{} is not unary; use saturation for atoms of higher arity",
            c.display(schema)
        )));
    }
    Ok(())
}

/// Builds proofs relative to a fixed `Σ` and a (growing) constant set.
struct Prover<'a> {
    sigma: &'a ConstraintSet,
    schema: &'a Schema,
    constants: AttrSet,
    proofs: BTreeMap<usize, ProofTree>,
}

impl<'a> Prover<'a> {
    fn rule(&self, rule: RuleId, inst: Instantiation, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree::rule(rule, inst, premises, self.schema)
            .expect("decision procedure builds template-conforming steps")
    }

    /// `S ⊥ S` for `S ⊆ R'`, assembled from the unit proofs with R1, R2, R3.
    fn constant_set_proof(&self, s: AttrSet) -> ProofTree {
        let mut members = s.iter();
        let Some(first) = members.next() else {
            return self.rule(RuleId::R1, Instantiation::x(AttrSet::EMPTY), vec![]);
        };
        let mut acc = self.proofs[&first].clone();
        let mut cur = AttrSet::singleton(first);
        for c in members {
            let cs = AttrSet::singleton(c);
            let unit = self.proofs[&c].clone();
            let grown = cur.union(cs);
            // cS' ⊥ S'
            let a = self.rule(RuleId::R3, Instantiation::xyz(cs, cur, cur), vec![unit.clone(), acc]);
            // S' ⊥ cS'
            let b = self.rule(RuleId::R2, Instantiation::xy(grown, cur), vec![a]);
            // cS' ⊥ cS'
            acc = self.rule(RuleId::R3, Instantiation::xyz(cs, cur, grown), vec![unit, b]);
            cur = grown;
        }
        acc
    }

    /// A key of `Σ ∪ {k(R)}` whose non-constant part lies inside `d`.
    fn key_source(&self, d: AttrSet) -> Option<AttrSet> {
        let full = self.schema.full();
        self.sigma
            .keys()
            .chain(std::iter::once(full))
            .find(|c| c.difference(self.constants).is_subset(d))
    }

    /// Proof of `k(d)` from `k(c)` with `c ∖ R' ⊆ d`: strip the constant
    /// part with R8, then pad with R7.
    fn key_proof(&self, c: AttrSet, d: AttrSet) -> ProofTree {
        let base = if self.sigma.contains_literal(&Constraint::Key(c)) {
            ProofTree::hypothesis(Constraint::Key(c))
        } else {
            debug_assert_eq!(c, self.schema.full());
            self.rule(RuleId::R6, Instantiation::default(), vec![])
        };
        let stripped_set = c.difference(self.constants);
        let constant_part = c.intersection(self.constants);
        let stripped = if constant_part.is_empty() {
            base
        } else {
            let cp = self.constant_set_proof(constant_part);
            self.rule(RuleId::R8, Instantiation::xy(constant_part, stripped_set), vec![cp, base])
        };
        if stripped_set == d {
            stripped
        } else {
            self.rule(RuleId::R7, Instantiation::xy(stripped_set, d), vec![stripped])
        }
    }

    /// `a ⊥ b` from `Σ`, using R2 when only `b ⊥ a` is stored.
    fn stored_ind_proof(&self, a: AttrSet, b: AttrSet) -> Option<ProofTree> {
        if self.sigma.contains_literal(&Constraint::Ind(a, b)) {
            Some(ProofTree::hypothesis(Constraint::Ind(a, b)))
        } else if self.sigma.contains_literal(&Constraint::Ind(b, a)) {
            Some(self.rule(
                RuleId::R2,
                Instantiation::xy(b, a),
                vec![ProofTree::hypothesis(Constraint::Ind(b, a))],
            ))
        } else {
            None
        }
    }

    /// `a ⊥ y` for a constant attribute `a`: R1 gives `∅ ⊥ y`, R3 adds `a`.
    fn constant_ind_proof(&self, a: usize, y: AttrSet) -> ProofTree {
        let unit = self.proofs[&a].clone();
        let triv = self.rule(RuleId::R1, Instantiation::x(y), vec![]);
        self.rule(
            RuleId::R3,
            Instantiation::xyz(AttrSet::singleton(a), AttrSet::EMPTY, y),
            vec![unit, triv],
        )
    }

    fn add_constant(&mut self, pos: usize, proof: ProofTree) {
        debug_assert_eq!(
            proof.conclusion,
            Constraint::Ind(AttrSet::singleton(pos), AttrSet::singleton(pos))
        );
        self.constants.insert(pos);
        self.proofs.insert(pos, proof);
    }

    fn fixpoint(&mut self) {
        let full = self.schema.full();
        loop {
            let before = self.constants;
            // (a) A ⊥ A ∈ Σ
            for (x, y) in self.sigma.inds() {
                if x == y && x.len() == 1 && !x.is_subset(self.constants) {
                    self.add_constant(x.iter().next().unwrap(), ProofTree::hypothesis(Constraint::Ind(x, x)));
                }
            }
            // (c) k(∅) derivable: every attribute is constant
            if let Some(c) = self.key_source(AttrSet::EMPTY) {
                if self.constants != full {
                    let k0 = self.key_proof(c, AttrSet::EMPTY);
                    for pos in full.difference(self.constants).iter() {
                        let a = AttrSet::singleton(pos);
                        let triv = self.rule(RuleId::R1, Instantiation::x(a), vec![]);
                        let p = self.rule(RuleId::R9, Instantiation::xy(AttrSet::EMPTY, a), vec![triv, k0.clone()]);
                        self.add_constant(pos, p);
                    }
                }
            }
            // (b) A ⊥ B with k(A) derivable makes B constant
            let pairs: Vec<(AttrSet, AttrSet)> = self
                .sigma
                .inds()
                .filter(|(x, y)| x.len() == 1 && y.len() == 1)
                .flat_map(|(x, y)| [(x, y), (y, x)])
                .collect();
            for (a, b) in pairs {
                if b.is_subset(self.constants) {
                    continue;
                }
                if let Some(c) = self.key_source(a) {
                    let ka = self.key_proof(c, a);
                    let ab = self.stored_ind_proof(a, b).expect("pair drawn from sigma");
                    let p = self.rule(RuleId::R9, Instantiation::xy(a, b), vec![ab, ka]);
                    self.add_constant(b.iter().next().unwrap(), p);
                }
            }
            if self.constants == before {
                break;
            }
        }
    }
}

fn prover<'a>(sigma: &'a ConstraintSet, schema: &'a Schema) -> Result<Prover<'a>> {
    validate_sigma(sigma, schema)?;
    let mut p = Prover {
        sigma,
        schema,
        constants: AttrSet::EMPTY,
        proofs: BTreeMap::new(),
    };
    p.fixpoint();
    Ok(p)
}

/// `R' = {A : Σ ⊢ A ⊥ A}` for keys and unary atoms.
pub fn constant_attributes(sigma: &ConstraintSet, schema: &Schema) -> Result<ConstantSet> {
    let p = prover(sigma, schema)?;
    Ok(ConstantSet {
        attrs: p.constants,
        proofs: p.proofs,
    })
}

/// Which branch of the chase construction refutes the query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecipeCase {
    Key,
    Independence,
}

/// Parameters for [`crate::countermodel::theorem2_prefix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountermodelRecipe {
    pub case: RecipeCase,
    pub constant_set: AttrSet,
    /// Number of scheduled atoms `N`.
    pub atoms: usize,
    /// Suggested prefix length, `3·N`.
    pub rounds: usize,
}

#[derive(Debug, Clone)]
pub enum Answer {
    Implied(ProofTree),
    NotImplied(CountermodelRecipe),
}

#[derive(Debug, Clone)]
pub struct ImplicationAnswer {
    pub query: Constraint,
    pub answer: Answer,
}

impl ImplicationAnswer {
    pub fn implied(&self) -> bool {
        matches!(self.answer, Answer::Implied(_))
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match &self.answer {
            Answer::Implied(p) => Some(p),
            Answer::NotImplied(_) => None,
        }
    }

    pub fn recipe(&self) -> Option<&CountermodelRecipe> {
        match &self.answer {
            Answer::Implied(_) => None,
            Answer::NotImplied(r) => Some(r),
        }
    }

    /// `{verdict, proof?, recipe?}`
    pub fn to_json(&self, schema: &Schema) -> serde_json::Value {
        match &self.answer {
            Answer::Implied(p) => serde_json::json!({
                "query": self.query.display(schema).to_string(),
                "verdict": "implied",
                "proof": p.to_json(schema),
            }),
            Answer::NotImplied(r) => serde_json::json!({
                "query": self.query.display(schema).to_string(),
                "verdict": "not-implied",
                "recipe": {
                    "generator": "theorem2_prefix",
                    "case": r.case,
                    "constant_set": schema.names(r.constant_set),
                    "atoms": r.atoms,
                    "rounds": r.rounds,
                },
            }),
        }
    }
}

/// Independence atoms of `Σ` that the chase has to repair, in canonical order.
pub(crate) fn scheduled_atoms(sigma: &ConstraintSet) -> Vec<(usize, usize)> {
    sigma
        .inds()
        .filter(|(x, y)| x.len() == 1 && y.len() == 1)
        .map(|(x, y)| (x.iter().next().unwrap(), y.iter().next().unwrap()))
        .collect()
}

fn not_implied(query: Constraint, case: RecipeCase, p: &Prover) -> ImplicationAnswer {
    let atoms = scheduled_atoms(p.sigma).len();
    ImplicationAnswer {
        query,
        answer: Answer::NotImplied(CountermodelRecipe {
            case,
            constant_set: p.constants,
            atoms,
            rounds: 3 * atoms,
        }),
    }
}

fn decide_key(p: &Prover, d: AttrSet) -> ImplicationAnswer {
    let query = Constraint::Key(d);
    match p.key_source(d) {
        Some(c) => ImplicationAnswer {
            query,
            answer: Answer::Implied(p.key_proof(c, d)),
        },
        None => not_implied(query, RecipeCase::Key, p),
    }
}

fn decide_ind(p: &Prover, x: AttrSet, y: AttrSet) -> ImplicationAnswer {
    let query = Constraint::Ind(x, y);
    let implied = |proof| ImplicationAnswer {
        query,
        answer: Answer::Implied(proof),
    };
    if x.is_empty() {
        return implied(p.rule(RuleId::R1, Instantiation::x(y), vec![]));
    }
    if y.is_empty() {
        let triv = p.rule(RuleId::R1, Instantiation::x(x), vec![]);
        return implied(p.rule(RuleId::R2, Instantiation::xy(AttrSet::EMPTY, x), vec![triv]));
    }
    let (a, b) = (x.iter().next().unwrap(), y.iter().next().unwrap());
    if let Some(proof) = p.stored_ind_proof(x, y) {
        implied(proof)
    } else if p.constants.contains(a) {
        implied(p.constant_ind_proof(a, y))
    } else if p.constants.contains(b) {
        let rev = p.constant_ind_proof(b, x);
        implied(p.rule(RuleId::R2, Instantiation::xy(y, x), vec![rev]))
    } else {
        not_implied(query, RecipeCase::Independence, p)
    }
}

/// Decides `Σ ⊨ k(D)`.
pub fn key_implied(sigma: &ConstraintSet, d: AttrSet, schema: &Schema) -> Result<ImplicationAnswer> {
    schema.check(d)?;
    Ok(decide_key(&prover(sigma, schema)?, d))
}

/// Decides `Σ ⊨ A ⊥ B` for single attributes.
pub fn ia_implied(
    sigma: &ConstraintSet,
    a: AttrSet,
    b: AttrSet,
    schema: &Schema,
) -> Result<ImplicationAnswer> {
    schema.check(a.union(b))?;
    if a.len() != 1 || b.len() != 1 {
        return Err(Error::Unsupported("query atom is not unary".into()));
    }
    Ok(decide_ind(&prover(sigma, schema)?, a, b))
}

/// Decides `Σ ⊨ φ` for keys and unary atoms. Atoms with an empty side are
/// answered by R1; other non-unary atoms are rejected, and
/// [`crate::derivation::saturate`] is the fallback for them.
pub fn implies_general(
    sigma: &ConstraintSet,
    phi: &Constraint,
    schema: &Schema,
) -> Result<ImplicationAnswer> {
    phi.check(schema)?;
    match *phi {
        Constraint::Key(d) => key_implied(sigma, d, schema),
        Constraint::Ind(x, y) if phi.is_unary_ind() => ia_implied(sigma, x, y, schema),
        Constraint::Ind(x, y) if phi.is_trivial_ind() => Ok(decide_ind(&prover(sigma, schema)?, x, y)),
        _ => Err(Error::Unsupported(format!(
            "{} is not unary; use saturation for atoms of higher arity",
            phi.display(schema)
        ))),
    }
}
