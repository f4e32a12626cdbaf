//! The cyclic family `Σ_n` over `A1 B1 … An Bn`, whose finite consequences
//! are not captured by any bounded-arity rule system.
//!
//! `Σ_n` holds `A_i ⊥ B_i` and `k(B_i A_{i+1})` (indices mod `n`). Every
//! finite model satisfies `k(A1 B1)`, yet dropping any single constraint
//! leaves only the upward closure `C↑(Σ_n)` finitely implied.

mod counting;
mod kary;
mod lemmas;
mod schedule;
mod search;
mod theorem3;

use std::sync::Arc;

use crate::attrs::{AttrSet, Schema};
use crate::constraint::{Constraint, ConstraintSet};
use crate::error::{Error, Result};

pub use counting::{counting_chain, ChainStep, CountingChain};
pub use kary::{kary_demo, targets_outside_closure, KaryReport};
pub use lemmas::{lemma3_model, lemma4_model, lemma5_models, lemma6_models, Lemma6Models};
pub use schedule::{cardinality_schedule, CardinalitySchedule};
pub use search::{bounded_search, enumerate_models, search_estimate, SEARCH_LIMIT};
pub use theorem3::{symmetries, theorem3_countermodel, Lemma, Symmetry, Theorem3Countermodel};

/// `Σ_n` together with its schema.
#[derive(Debug, Clone)]
pub struct SigmaN {
    n: usize,
    schema: Arc<Schema>,
    constraints: ConstraintSet,
}

/// Position of `A_i` (1-based `i`).
pub fn a_pos(i: usize) -> usize {
    2 * (i - 1)
}

/// Position of `B_i` (1-based `i`).
pub fn b_pos(i: usize) -> usize {
    2 * (i - 1) + 1
}

pub fn sigma_n(n: usize) -> Result<SigmaN> {
    if n < 2 {
        return Err(Error::Precondition(format!("Σ_n needs n ≥ 2, got {n}")));
    }
    if 2 * n > crate::attrs::MAX_ATTRIBUTES {
        return Err(Error::Precondition(format!("n = {n} exceeds the attribute limit")));
    }
    let names = (1..=n).flat_map(|i| [format!("A{i}"), format!("B{i}")]);
    let schema = Arc::new(Schema::new(format!("R{n}"), names)?);
    let mut constraints = ConstraintSet::new();
    for i in 1..=n {
        constraints.insert(Constraint::Ind(
            AttrSet::singleton(a_pos(i)),
            AttrSet::singleton(b_pos(i)),
        ));
        constraints.insert(Constraint::Key(AttrSet::from_positions([
            b_pos(i),
            a_pos(i % n + 1),
        ])));
    }
    Ok(SigmaN {
        n,
        schema,
        constraints,
    })
}

impl SigmaN {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    /// `k(A1 B1)`, finitely implied but outside the upward closure.
    pub fn gap_atom(&self) -> Constraint {
        Constraint::Key(AttrSet::from_positions([a_pos(1), b_pos(1)]))
    }

    /// `Σ_n ∖ {ψ}`.
    pub fn without(&self, psi: &Constraint) -> Result<ConstraintSet> {
        let mut s = self.constraints.clone();
        if !s.remove(psi) {
            return Err(Error::Precondition(format!(
                "{} is not in Σ_{}",
                psi.display(&self.schema),
                self.n
            )));
        }
        Ok(s)
    }

    pub fn upward_closure(&self) -> UpwardClosure {
        UpwardClosure { base: self.clone() }
    }
}

/// `C↑(Σ_n)`: `Σ_n` plus every superset of its keys.
#[derive(Debug, Clone)]
pub struct UpwardClosure {
    base: SigmaN,
}

pub fn upward_closure(s: &SigmaN) -> UpwardClosure {
    s.upward_closure()
}

impl UpwardClosure {
    pub fn base(&self) -> &SigmaN {
        &self.base
    }

    pub fn contains(&self, phi: &Constraint) -> bool {
        match phi {
            Constraint::Key(d) => self.base.constraints.keys().any(|c| c.is_subset(*d)),
            Constraint::Ind(..) => self.base.constraints.contains(phi),
        }
    }

    /// Every member, keys enumerated over all subsets of the schema.
    pub fn constraints(&self) -> ConstraintSet {
        let full = self.base.schema.full();
        let mut out = self.base.constraints.clone();
        out.extend(
            full.subsets()
                .map(Constraint::Key)
                .filter(|k| self.contains(k)),
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_constraint;

    #[test]
    fn sigma_2_shape() {
        let s = sigma_n(2).unwrap();
        let text: Vec<String> = s
            .constraints()
            .iter()
            .map(|c| c.display(s.schema()).to_string())
            .collect();
        for want in ["ind(A1 ; B1)", "ind(A2 ; B2)", "key(B1 A2)", "key(A1 B2)"] {
            assert!(text.contains(&want.to_string()), "{want} missing from {text:?}");
        }
        assert_eq!(s.constraints().len(), 4);
        assert!(sigma_n(1).is_err());
    }

    #[test]
    fn sigma_7_size() {
        let s = sigma_n(7).unwrap();
        assert_eq!(s.constraints().len(), 14);
        assert_eq!(s.constraints().keys().count(), 7);
        let closing = Constraint::Key(AttrSet::from_positions([b_pos(7), a_pos(1)]));
        assert!(s.constraints().contains(&closing));
    }

    #[test]
    fn closure_membership() {
        for n in 2..=5 {
            let s = sigma_n(n).unwrap();
            let c = s.upward_closure();
            assert!(!c.contains(&s.gap_atom()));
            assert!(s.constraints().iter().all(|x| c.contains(x)));
        }
        let s = sigma_n(2).unwrap();
        let c = s.upward_closure();
        assert_eq!(c.constraints().len(), 9);
        let q = parse_constraint("key(B1 A2 B2)", s.schema()).unwrap();
        assert!(c.contains(&q));
        let q = parse_constraint("ind(B1 ; A1)", s.schema()).unwrap();
        assert!(c.contains(&q));
        let q = parse_constraint("ind(A1 ; A2)", s.schema()).unwrap();
        assert!(!c.contains(&q));
    }
}
