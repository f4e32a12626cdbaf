//! Satisfaction of keys and independence atoms on concrete relations.
//!
//! The row-level checkers are generic over the row representation so the
//! exhaustive model enumerators can run them on compact integer rows.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use crate::attrs::{AttrSet, Schema};
use crate::constraint::{Constraint, ConstraintSet};
use crate::error::{Error, Result};
use crate::relation::{Relation, Tuple};

fn proj<V>(row: &[V], x: AttrSet) -> Vec<&V> {
    x.iter().map(|i| &row[i]).collect()
}

/// First pair of distinct rows agreeing on `x`, if any.
pub fn key_violation<T, V>(rows: &[T], x: AttrSet) -> Option<(usize, usize)>
where
    T: AsRef<[V]>,
    V: Eq + Hash,
{
    let mut seen: HashMap<Vec<&V>, usize> = HashMap::with_capacity(rows.len());
    for (j, row) in rows.iter().enumerate() {
        if let Some(&i) = seen.get(&proj(row.as_ref(), x)) {
            return Some((i, j));
        }
        seen.insert(proj(row.as_ref(), x), j);
    }
    None
}

/// First pair `(t, t')` of rows for which no row agrees with `t` on `x` and
/// with `t'` on `y`.
///
/// Only distinct projections are compared, so the cost is
/// `|r(x)|·|r(y)|` lookups. Overlapping sides are handled literally: a
/// combining row exists only if `t` and `t'` agree on `x ∩ y`.
pub fn ind_violation<T, V>(rows: &[T], x: AttrSet, y: AttrSet) -> Option<(usize, usize)>
where
    T: AsRef<[V]>,
    V: Eq + Hash,
{
    let xy = x.union(y);
    let overlap = x.intersection(y);
    let reps = |s: AttrSet| {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if seen.insert(proj(r.as_ref(), s)) {
                out.push(i);
            }
        }
        out
    };
    let xs = reps(x);
    let ys = reps(y);
    let present: HashSet<Vec<&V>> = rows.iter().map(|r| proj(r.as_ref(), xy)).collect();
    for &i in &xs {
        let t = rows[i].as_ref();
        for &j in &ys {
            let u = rows[j].as_ref();
            if overlap.iter().any(|p| t[p] != u[p]) {
                return Some((i, j));
            }
            let merged: Vec<&V> = xy
                .iter()
                .map(|p| if x.contains(p) { &t[p] } else { &u[p] })
                .collect();
            if !present.contains(&merged) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether the rows satisfy `c`.
pub fn holds<T, V>(rows: &[T], c: &Constraint) -> bool
where
    T: AsRef<[V]>,
    V: Eq + Hash,
{
    match *c {
        Constraint::Key(x) => key_violation(rows, x).is_none(),
        Constraint::Ind(x, y) => ind_violation(rows, x, y).is_none(),
    }
}

/// A pair of tuples demonstrating a violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub t: Tuple,
    pub t_prime: Tuple,
}

impl Witness {
    /// Re-checks the witness against the definitions by brute force.
    pub fn confirms(&self, r: &Relation, c: &Constraint) -> bool {
        if !r.contains(&self.t) || !r.contains(&self.t_prime) {
            return false;
        }
        match *c {
            Constraint::Key(x) => {
                self.t != self.t_prime && x.iter().all(|i| self.t[i] == self.t_prime[i])
            }
            Constraint::Ind(x, y) => !r.tuples().iter().any(|s| {
                x.iter().all(|i| s[i] == self.t[i]) && y.iter().all(|i| s[i] == self.t_prime[i])
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

fn witness(r: &Relation, pair: Option<(usize, usize)>) -> Verdict {
    match pair {
        None => Verdict::Holds,
        Some((i, j)) => Verdict::Violated(Witness {
            t: r.tuples()[i].clone(),
            t_prime: r.tuples()[j].clone(),
        }),
    }
}

/// Rule S-K.
pub fn satisfies_key(r: &Relation, x: AttrSet) -> Result<Verdict> {
    r.schema().check(x)?;
    Ok(witness(r, key_violation(r.tuples(), x)))
}

/// Rule S-I.
pub fn satisfies_ind(r: &Relation, x: AttrSet, y: AttrSet) -> Result<Verdict> {
    r.schema().check(x.union(y))?;
    Ok(witness(r, ind_violation(r.tuples(), x, y)))
}

pub fn satisfies(r: &Relation, c: &Constraint) -> Result<Verdict> {
    match *c {
        Constraint::Key(x) => satisfies_key(r, x),
        Constraint::Ind(x, y) => satisfies_ind(r, x, y),
    }
}

#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub constraint: Constraint,
    pub verdict: Verdict,
}

/// Per-constraint verdicts for one relation.
#[derive(Debug, Clone)]
pub struct SatisfactionReport {
    pub entries: Vec<ReportEntry>,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    constraint: String,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a Witness>,
}

impl SatisfactionReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.holds())
    }

    pub fn violations(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.verdict.holds())
    }

    /// `[{constraint, verdict, witness?}, ...]`
    pub fn to_json(&self, schema: &Schema) -> serde_json::Value {
        let entries: Vec<EntryJson> = self
            .entries
            .iter()
            .map(|e| EntryJson {
                constraint: e.constraint.display(schema).to_string(),
                verdict: if e.verdict.holds() { "holds" } else { "violated" },
                witness: e.verdict.witness(),
            })
            .collect();
        serde_json::to_value(entries).expect("serializable report")
    }
}

/// Checks every constraint of `sigma` on `r`.
pub fn satisfies_all(r: &Relation, sigma: &ConstraintSet) -> Result<SatisfactionReport> {
    sigma.check(r.schema()).map_err(|_| {
        Error::SchemaMismatch("constraint mentions attributes outside the relation schema".into())
    })?;
    let entries = sigma
        .iter()
        .map(|c| {
            Ok(ReportEntry {
                constraint: *c,
                verdict: satisfies(r, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SatisfactionReport { entries })
}

/// `Σ↾R'`: the constraints all of whose attributes lie in `sub`.
pub fn restrict_constraints(
    sigma: &ConstraintSet,
    sub: AttrSet,
    schema: &Schema,
) -> Result<ConstraintSet> {
    schema.check(sub)?;
    Ok(sigma
        .iter()
        .filter(|c| c.attrs().is_subset(sub))
        .copied()
        .collect())
}
