use serde::Serialize;

use super::{a_pos, b_pos, SigmaN};
use crate::attrs::AttrSet;
use crate::constraint::Constraint;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::semantics;

/// One verified inequality `lhs ≤ rhs` with its cardinalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub claim: String,
    pub lhs: usize,
    pub rhs: usize,
}

/// The cardinality argument showing that a finite model of `Σ_n`
/// satisfies `k(A1 B1)`.
#[derive(Debug, Clone, Serialize)]
pub struct CountingChain {
    pub n: usize,
    pub size: usize,
    /// `|r(B_i)| ≤ |r(B_{i-1})|` for `2 ≤ i ≤ n`.
    pub b_chain: Vec<ChainStep>,
    /// Each `A_i` value occurs at least `|r(B_i)|` times.
    pub a_multiplicity: Vec<ChainStep>,
    /// `|r| ≤ |r(B_n)|·|r(A_1)| ≤ |r(B_1)|·|r(A_1)| = |r(A_1 B_1)|`.
    pub closing: Vec<ChainStep>,
    pub key_a1b1: bool,
}

fn step(claim: String, lhs: usize, rhs: usize) -> Result<ChainStep> {
    if lhs > rhs {
        return Err(Error::Invariant(format!("{claim} fails: {lhs} > {rhs}")));
    }
    Ok(ChainStep { claim, lhs, rhs })
}

pub fn counting_chain(r: &Relation, sigma: &SigmaN) -> Result<CountingChain> {
    let n = sigma.n();
    if r.schema().attributes() != sigma.schema().attributes() {
        return Err(Error::SchemaMismatch(format!("relation is not over R{n}")));
    }
    let report = semantics::satisfies_all(r, sigma.constraints())?;
    if let Some(bad) = report.violations().next() {
        return Err(Error::Precondition(format!(
            "relation violates {}",
            bad.constraint.display(sigma.schema())
        )));
    }
    let card = |x: AttrSet| r.distinct(x);
    let a = |i| card(AttrSet::singleton(a_pos(i)));
    let b = |i| card(AttrSet::singleton(b_pos(i)));
    let mut b_chain = Vec::new();
    for i in 2..=n {
        b_chain.push(step(format!("|r(B{i})| ≤ |r(B{})|", i - 1), b(i), b(i - 1))?);
    }
    let mut a_multiplicity = Vec::new();
    for i in 1..=n {
        let least = r.column_counts(a_pos(i)).into_values().min().unwrap_or(0);
        let claim = format!("min multiplicity in A{i} ≥ |r(B{i})|");
        if !r.is_empty() {
            a_multiplicity.push(step(claim, b(i), least)?);
        }
    }
    let a1b1 = card(AttrSet::from_positions([a_pos(1), b_pos(1)]));
    let closing = vec![
        step(
            format!("|r| = |r(B{n} A1)| ≤ |r(B{n})|·|r(A1)|"),
            r.len(),
            b(n) * a(1),
        )?,
        step(format!("|r(B{n})|·|r(A1)| ≤ |r(B1)|·|r(A1)|"), b(n) * a(1), b(1) * a(1))?,
        step("|r(B1)|·|r(A1)| ≤ |r(A1 B1)|".into(), b(1) * a(1), a1b1)?,
    ];
    let key_a1b1 = r.len() == a1b1;
    if !key_a1b1 || !semantics::satisfies(r, &Constraint::Key(AttrSet::from_positions([0, 1])))?.holds() {
        return Err(Error::Invariant("counting argument does not conclude k(A1 B1)".into()));
    }
    Ok(CountingChain {
        n,
        size: r.len(),
        b_chain,
        a_multiplicity,
        closing,
        key_a1b1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::sigma_n;

    #[test]
    fn two_tuple_model() {
        let s = sigma_n(2).unwrap();
        let r = Relation::from_ints(s.schema().clone(), [[0, 0, 0, 0], [1, 0, 1, 0]]).unwrap();
        let c = counting_chain(&r, &s).unwrap();
        assert_eq!((c.b_chain[0].lhs, c.b_chain[0].rhs), (1, 1));
        assert_eq!(c.size, 2);
        assert!(c.key_a1b1);
    }

    #[test]
    fn single_tuple() {
        let s = sigma_n(3).unwrap();
        let r = Relation::from_ints(s.schema().clone(), [[0; 6]]).unwrap();
        let c = counting_chain(&r, &s).unwrap();
        assert!(c.b_chain.iter().all(|x| x.lhs == 1 && x.rhs == 1));
    }

    #[test]
    fn rejects_non_models() {
        let s = sigma_n(2).unwrap();
        let r = Relation::from_ints(s.schema().clone(), [[0, 0, 0, 0], [0, 1, 0, 0]]).unwrap();
        assert!(matches!(counting_chain(&r, &s), Err(Error::Precondition(_))));
    }
}
