//! Chase prefixes: finite stages of the infinite countermodels that refute
//! non-implied keys and unary atoms.
//!
//! A prefix starts from two seed tuples that already violate the target.
//! Each round repairs one scheduled independence atom (round-robin) by adding
//! a tuple for every missing value combination, with fresh values in all
//! columns outside the repaired atom and the constant set. Only the union of
//! all rounds satisfies every atom at once; a finite prefix satisfies the
//! keys, keeps the constant columns at `0`, and satisfies the atom repaired
//! in its last round.
//!
//! Prefixes grow quickly (the number of missing pairs is roughly the square
//! of the current size), so rows are stored flat and checked by sorting
//! projections rather than through [`Relation`].

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::attrs::{AttrSet, Schema};
use crate::constraint::{Constraint, ConstraintSet};
use crate::decision::{implies_general, scheduled_atoms, Answer, RecipeCase};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::semantics::{self, SatisfactionReport, Verdict};

/// Largest number of cells (rows × columns) a prefix may reach.
pub const MAX_PREFIX_CELLS: u128 = 1 << 26;

/// Integer rows of equal width, stored contiguously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowTable {
    width: usize,
    cells: Vec<u64>,
}

impl RowTable {
    pub fn new(width: usize) -> Self {
        RowTable {
            width,
            cells: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.cells.len() / self.width.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.cells[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u64> {
        self.cells.chunks_exact(self.width)
    }

    pub fn push(&mut self, row: &[u64]) {
        debug_assert_eq!(row.len(), self.width);
        self.cells.extend_from_slice(row);
    }

    /// The first `len` rows.
    pub fn head(&self, len: usize) -> RowsView<'_> {
        RowsView {
            width: self.width,
            cells: &self.cells[..len * self.width],
        }
    }

    pub fn view(&self) -> RowsView<'_> {
        self.head(self.len())
    }

    pub fn to_relation(&self, schema: Arc<Schema>) -> Result<Relation> {
        Relation::from_ints(schema, self.rows())
    }
}

/// Borrowed rows with checks that sort projections instead of hashing
/// them, so they stay cheap on millions of rows.
#[derive(Debug, Clone, Copy)]
pub struct RowsView<'a> {
    width: usize,
    cells: &'a [u64],
}

impl<'a> RowsView<'a> {
    pub fn len(&self) -> usize {
        self.cells.len() / self.width.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn row(&self, i: usize) -> &'a [u64] {
        &self.cells[i * self.width..(i + 1) * self.width]
    }

    pub fn max_value(&self) -> u64 {
        self.cells.iter().copied().max().unwrap_or(0)
    }

    /// Row indices ordered by their projection on `x`.
    fn sorted_by(&self, x: AttrSet) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let cols: Vec<usize> = x.iter().collect();
        idx.sort_unstable_by(|&a, &b| {
            let (ra, rb) = (self.row(a), self.row(b));
            cols.iter().map(|&c| ra[c].cmp(&rb[c])).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        idx
    }

    fn packed(&self, x: AttrSet) -> Option<Vec<u128>> {
        let cols: Vec<usize> = x.iter().collect();
        match cols[..] {
            [a] => Some(self.rows().map(|r| u128::from(r[a])).collect()),
            [a, b] => Some(self.rows().map(|r| (u128::from(r[a]) << 64) | u128::from(r[b])).collect()),
            _ => None,
        }
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'a, u64> {
        self.cells.chunks_exact(self.width)
    }

    /// `|r(x)|`.
    pub fn distinct(&self, x: AttrSet) -> usize {
        if self.is_empty() {
            return 0;
        }
        if x.is_empty() {
            return 1;
        }
        if let Some(mut keys) = self.packed(x) {
            keys.sort_unstable();
            keys.dedup();
            return keys.len();
        }
        let idx = self.sorted_by(x);
        let same = |a: usize, b: usize| x.iter().all(|c| self.row(a)[c] == self.row(b)[c]);
        1 + idx.windows(2).filter(|w| !same(w[0], w[1])).count()
    }

    /// Rule S-K; duplicate rows count as one tuple.
    pub fn key_holds(&self, x: AttrSet) -> bool {
        let idx = self.sorted_by(x);
        let same = |a: usize, b: usize| x.iter().all(|c| self.row(a)[c] == self.row(b)[c]);
        let mut start = 0;
        while start < idx.len() {
            let mut end = start + 1;
            while end < idx.len() && same(idx[start], idx[end]) {
                end += 1;
            }
            let first = self.row(idx[start]);
            if idx[start + 1..end].iter().any(|&j| self.row(j) != first) {
                return false;
            }
            start = end;
        }
        true
    }

    /// Rule S-I. Disjoint sides reduce to `|r(xy)| = |r(x)|·|r(y)|`.
    pub fn ind_holds(&self, x: AttrSet, y: AttrSet) -> bool {
        if self.is_empty() {
            return true;
        }
        if x.intersection(y).is_empty() {
            return self.distinct(x.union(y)) == self.distinct(x) * self.distinct(y);
        }
        let rows: Vec<&[u64]> = self.rows().collect();
        semantics::ind_violation(&rows, x, y).is_none()
    }

    pub fn holds(&self, c: &Constraint) -> bool {
        match *c {
            Constraint::Key(x) => self.key_holds(x),
            Constraint::Ind(x, y) => self.ind_holds(x, y),
        }
    }
}

/// One stage of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    /// Number of rows in this stage.
    pub size: usize,
    /// The atom repaired by the round that produced this stage.
    pub repaired: Option<Constraint>,
}

#[derive(Debug, Clone)]
pub struct ChasePrefix {
    schema: Arc<Schema>,
    sigma: ConstraintSet,
    target: Constraint,
    constant_set: AttrSet,
    schedule: Vec<Constraint>,
    table: RowTable,
    snapshots: Vec<Snapshot>,
}

impl ChasePrefix {
    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn target(&self) -> &Constraint {
        &self.target
    }

    pub fn sigma(&self) -> &ConstraintSet {
        &self.sigma
    }

    pub fn constant_set(&self) -> AttrSet {
        self.constant_set
    }

    pub fn schedule(&self) -> &[Constraint] {
        &self.schedule
    }

    /// Rows in insertion order; rows 0 and 1 are the seed.
    pub fn table(&self) -> &RowTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn rounds_done(&self) -> usize {
        self.snapshots.len() - 1
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    /// One more than the largest value present.
    pub fn fresh_counter(&self) -> u64 {
        self.table.view().max_value() + 1
    }

    /// The rows of stage `k` (`k = 0` is the seed).
    pub fn stage_rows(&self, k: usize) -> RowsView<'_> {
        self.table.head(self.snapshots[k].size)
    }

    pub fn relation(&self) -> Relation {
        self.stage(self.rounds_done())
    }

    /// The relation after `k` rounds.
    pub fn stage(&self, k: usize) -> Relation {
        Relation::from_ints(self.schema.clone(), self.stage_rows(k).rows())
            .expect("rows match schema width")
    }

    /// Whether the seed still refutes the target within `rows`.
    fn target_refuted(&self, rows: RowsView<'_>) -> bool {
        let (t0, t1) = (rows.row(0), rows.row(1));
        match self.target {
            Constraint::Key(d) => t0 != t1 && d.iter().all(|i| t0[i] == t1[i]),
            Constraint::Ind(x, y) => !rows.rows().any(|t| {
                x.iter().all(|i| t[i] == t0[i]) && y.iter().all(|i| t[i] == t1[i])
            }),
        }
    }

    /// Re-checks every per-stage guarantee; returns the first failure.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |k: usize, what: &str| Err(Error::Invariant(format!("stage {k}: {what}")));
        let keys: Vec<Constraint> = self.sigma.iter().filter(|c| c.is_key()).copied().collect();
        let mut prev: Option<(usize, u64)> = None;
        for (k, snap) in self.snapshots.iter().enumerate() {
            let rows = self.table.head(snap.size);
            if let Some((prev_size, _)) = prev {
                if snap.size < prev_size {
                    return fail(k, "stage shrinks");
                }
            }
            if rows.rows().any(|t| self.constant_set.iter().any(|i| t[i] != 0)) {
                return fail(k, "constant columns are not all zero");
            }
            if let Some(c) = keys.iter().find(|c| !rows.holds(c)) {
                return fail(k, &format!("key {} violated", c.display(&self.schema)));
            }
            if let Some(c) = &snap.repaired {
                if !rows.holds(c) {
                    return fail(k, &format!("repaired atom {} violated", c.display(&self.schema)));
                }
            }
            if !self.target_refuted(rows) {
                return fail(k, "target no longer refuted by the seed");
            }
            if let Some((prev_size, prev_max)) = prev {
                let old: HashSet<u64> = self.table.head(prev_size).rows().flatten().copied().collect();
                let stale = rows.cells[prev_size * self.table.width..]
                    .iter()
                    .any(|v| *v <= prev_max && !old.contains(v));
                if stale {
                    return fail(k, "introduced value is not fresh");
                }
            }
            prev = Some((snap.size, rows.max_value()));
        }
        Ok(())
    }

    /// `{seed, schedule, rounds, guarantees}`
    pub fn manifest(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Stage {
            round: usize,
            size: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            satisfies: Option<String>,
        }
        let s = &self.schema;
        let stages: Vec<Stage> = self
            .snapshots
            .iter()
            .enumerate()
            .map(|(round, snap)| Stage {
                round,
                size: snap.size,
                satisfies: snap.repaired.map(|c| c.display(s).to_string()),
            })
            .collect();
        serde_json::json!({
            "schema": s.attributes(),
            "target": self.target.display(s).to_string(),
            "constant_set": s.names(self.constant_set),
            "seed": [self.table.row(0), self.table.row(1)],
            "schedule": self.schedule.iter().map(|c| c.display(s).to_string()).collect::<Vec<_>>(),
            "rounds": self.rounds_done(),
            "fresh_counter": self.fresh_counter(),
            "guarantees": {
                "keys": "every key of the constraint set holds at every stage",
                "constant_set": "every constant column is 0 at every stage",
                "target": "the two seed rows refute the target at every stage",
                "atoms": "each stage satisfies the atom repaired by its round",
                "stages": stages,
            },
        })
    }
}

/// Value pairs of `r(x) × r(y)` missing from `r(xy)`, in increasing order,
/// after checking that adding them keeps the table within budget.
fn missing_pairs(table: &RowTable, x: usize, y: usize, round: usize) -> Result<Vec<(u64, u64)>> {
    let xs: BTreeSet<u64> = table.rows().map(|t| t[x]).collect();
    let ys: BTreeSet<u64> = table.rows().map(|t| t[y]).collect();
    let present: HashSet<(u64, u64)> = table.rows().map(|t| (t[x], t[y])).collect();
    let missing = xs.len() as u128 * ys.len() as u128 - present.len() as u128;
    let cells = (table.len() as u128 + missing) * table.width() as u128;
    if cells > MAX_PREFIX_CELLS {
        return Err(Error::PrefixTooLarge {
            round,
            cells,
            limit: MAX_PREFIX_CELLS,
        });
    }
    Ok(xs
        .iter()
        .flat_map(|&a| ys.iter().map(move |&b| (a, b)))
        .filter(|p| !present.contains(p))
        .collect())
}

/// Builds the chase prefix refuting `Σ ⊨ φ` after `rounds` repair rounds.
///
/// Attributes are numbered `1..=M` in schema order. The seed rows are
/// `t0(A_i) = 0` / `t1(A_i) = 0` on the zero set (the constant set, plus `D`
/// for a key target) and `t0(A_i) = i` / `t1(A_i) = M + i` elsewhere. Round
/// `n` repairs atom `((n - 1) mod N) + 1`; the `i`-th missing pair `(a, b)`
/// becomes a row with `a`, `b` in the atom's columns, `0` on constants and
/// `m + i·M + j` in any other column `j`, where `m` is the current maximum.
pub fn theorem2_prefix(
    sigma: &ConstraintSet,
    phi: &Constraint,
    schema: &Arc<Schema>,
    rounds: usize,
) -> Result<ChasePrefix> {
    let ans = implies_general(sigma, phi, schema)?;
    let recipe = match ans.answer {
        Answer::Implied(_) => {
            return Err(Error::Precondition(format!(
                "{} is implied, there is no countermodel",
                phi.display(schema)
            )))
        }
        Answer::NotImplied(r) => r,
    };
    let width = schema.len();
    let m_attrs = width as u64;
    let constants = recipe.constant_set;
    let zero = match (*phi, recipe.case) {
        (Constraint::Key(d), RecipeCase::Key) => constants.union(d),
        _ => constants,
    };
    let seed_row = |offset: u64| -> Vec<u64> {
        (0..width)
            .map(|i| if zero.contains(i) { 0 } else { offset + i as u64 + 1 })
            .collect()
    };
    let mut table = RowTable::new(width);
    table.push(&seed_row(0));
    table.push(&seed_row(m_attrs));
    let mut snapshots = vec![Snapshot {
        size: 2,
        repaired: None,
    }];
    let atoms = scheduled_atoms(sigma);
    let schedule: Vec<Constraint> = atoms
        .iter()
        .map(|&(x, y)| Constraint::Ind(AttrSet::singleton(x), AttrSet::singleton(y)))
        .collect();
    let mut row = vec![0u64; width];
    for n in 1..=rounds {
        let repaired = if atoms.is_empty() {
            None
        } else {
            let l = (n - 1) % atoms.len();
            let (x, y) = atoms[l];
            let m = table.view().max_value();
            for (i, (a, b)) in missing_pairs(&table, x, y, n)?.into_iter().enumerate() {
                let i = i as u64 + 1;
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = if constants.contains(j) {
                        0
                    } else if j == x {
                        a
                    } else if j == y {
                        b
                    } else {
                        m + i * m_attrs + j as u64 + 1
                    };
                }
                table.push(&row);
            }
            Some(schedule[l])
        };
        snapshots.push(Snapshot {
            size: table.len(),
            repaired,
        });
    }
    let prefix = ChasePrefix {
        schema: schema.clone(),
        sigma: sigma.clone(),
        target: *phi,
        constant_set: constants,
        schedule,
        table,
        snapshots,
    };
    prefix.check_invariants()?;
    Ok(prefix)
}

/// The chain refuting `Σ_2 ⊨ k(A1 B1)`, up to stage `depth`.
///
/// Stage 1 is `{(0,0,1,2), (0,0,3,4)}`; even stages complete the missing
/// `A2 B2` pairs and odd stages the missing `A1 B1` pairs. A completed pair is
/// placed in the columns of the atom being repaired and the other two columns
/// get `m + 2i − 1`, `m + 2i`.
pub fn lemma2_chain(depth: usize) -> Result<ChasePrefix> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let sigma2 = crate::separation::sigma_n(2)?;
    let schema = sigma2.schema().clone();
    let (a1, b1, a2, b2) = (0usize, 1, 2, 3);
    let ind = |x: usize, y: usize| Constraint::Ind(AttrSet::singleton(x), AttrSet::singleton(y));
    let mut table = RowTable::new(4);
    table.push(&[0, 0, 1, 2]);
    table.push(&[0, 0, 3, 4]);
    let mut snapshots = vec![Snapshot {
        size: 2,
        repaired: Some(ind(a1, b1)),
    }];
    for stage in 2..=depth {
        let ((x, y), (u, v)) = if stage % 2 == 0 {
            ((a2, b2), (a1, b1))
        } else {
            ((a1, b1), (a2, b2))
        };
        let m = table.view().max_value();
        for (i, (a, b)) in missing_pairs(&table, x, y, stage)?.into_iter().enumerate() {
            let i = i as u64 + 1;
            let mut row = [0u64; 4];
            row[x] = a;
            row[y] = b;
            row[u] = m + 2 * i - 1;
            row[v] = m + 2 * i;
            table.push(&row);
        }
        snapshots.push(Snapshot {
            size: table.len(),
            repaired: Some(ind(x, y)),
        });
    }
    let prefix = ChasePrefix {
        schema,
        sigma: sigma2.constraints().clone(),
        target: Constraint::Key(AttrSet::from_positions([a1, b1])),
        constant_set: AttrSet::EMPTY,
        schedule: vec![ind(a1, b1), ind(a2, b2)],
        table,
        snapshots,
    };
    prefix.check_invariants()?;
    Ok(prefix)
}

/// Outcome of [`verify_countermodel`].
#[derive(Debug, Clone)]
pub struct CountermodelCheck {
    pub model: SatisfactionReport,
    pub target: Verdict,
}

impl CountermodelCheck {
    /// `r ⊨ Σ'` and `r ⊭ φ`.
    pub fn verified(&self) -> bool {
        self.model.all_hold() && !self.target.holds()
    }
}

pub fn verify_countermodel(
    r: &Relation,
    sigma: &ConstraintSet,
    phi: &Constraint,
) -> Result<CountermodelCheck> {
    Ok(CountermodelCheck {
        model: semantics::satisfies_all(r, sigma)?,
        target: semantics::satisfies(r, phi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_constraint, parse_constraint_file};
    use proptest::prelude::*;

    fn setup(file: &str, query: &str) -> (Arc<Schema>, ConstraintSet, Constraint) {
        let (s, sigma) = parse_constraint_file(file).unwrap();
        let q = parse_constraint(query, &s).unwrap();
        (Arc::new(s), sigma, q)
    }

    fn rows(p: &ChasePrefix) -> Vec<Vec<u64>> {
        p.table().rows().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn key_target_seed() {
        let (s, sigma, q) = setup("schema R: A B C; ind(A;B);", "key(A B)");
        let p = theorem2_prefix(&sigma, &q, &s, 1).unwrap();
        assert_eq!(rows(&p), vec![vec![0, 0, 3], vec![0, 0, 6]]);
        assert!(verify_countermodel(&p.relation(), &sigma, &q).unwrap().verified());
    }

    #[test]
    fn ind_target_seed_and_round() {
        let (s, sigma, q) = setup("schema R: A B C; ind(A;B);", "ind(A;C)");
        let p = theorem2_prefix(&sigma, &q, &s, 1).unwrap();
        let r = rows(&p);
        assert_eq!(&r[..2], &[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(r.len(), 4);
        let added: Vec<(u64, u64)> = r[2..].iter().map(|t| (t[0], t[1])).collect();
        assert_eq!(added, vec![(1, 5), (4, 2)]);
        assert!(!r.iter().any(|t| t[0] == 1 && t[2] == 6));
        assert!(verify_countermodel(&p.relation(), &sigma, &q).unwrap().verified());
    }

    #[test]
    fn no_atoms_zero_rounds() {
        let (s, sigma, q) = setup("schema R: A B;", "key(A)");
        let p = theorem2_prefix(&sigma, &q, &s, 0).unwrap();
        assert_eq!(rows(&p), vec![vec![0, 2], vec![0, 4]]);
        assert_eq!(p.fresh_counter(), 5);
    }

    #[test]
    fn implied_target_is_rejected() {
        let (s, sigma, q) = setup("schema R: A B; ind(A;A); key(A B);", "key(B)");
        assert!(matches!(theorem2_prefix(&sigma, &q, &s, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn constant_columns_stay_zero() {
        let (s, sigma, q) = setup("schema R: A B C D; ind(A;B); key(A C); ind(C;C); ind(C;D);", "ind(A;D)");
        let p = theorem2_prefix(&sigma, &q, &s, 9).unwrap();
        assert!(p.constant_set().contains(2));
        assert!(p.table().rows().all(|t| t[2] == 0));
    }

    #[test]
    fn stages_form_a_chain() {
        let (s, sigma, q) = setup("schema R: A B C; ind(A;B); ind(B;C);", "key(A)");
        let short = theorem2_prefix(&sigma, &q, &s, 2).unwrap();
        let long = theorem2_prefix(&sigma, &q, &s, 4).unwrap();
        assert_eq!(rows(&short), rows(&long)[..short.len()].to_vec());
    }

    #[test]
    fn growth_is_bounded() {
        let (s, sigma, q) = setup("schema R: A B C; ind(A;B); ind(A;C); ind(B;C);", "key(C)");
        assert_eq!(theorem2_prefix(&sigma, &q, &s, 7).unwrap().len(), 532_272);
        assert!(matches!(
            theorem2_prefix(&sigma, &q, &s, 9),
            Err(Error::PrefixTooLarge { .. })
        ));
    }

    #[test]
    fn lemma2_first_stages() {
        let p = lemma2_chain(1).unwrap();
        assert_eq!(rows(&p), vec![vec![0, 0, 1, 2], vec![0, 0, 3, 4]]);
        let p = lemma2_chain(2).unwrap();
        let r = rows(&p);
        assert_eq!(r.len(), 4);
        let pairs: Vec<(u64, u64)> = r[2..].iter().map(|t| (t[2], t[3])).collect();
        assert_eq!(pairs, vec![(1, 4), (3, 2)]);
        assert_eq!(r[2], vec![5, 6, 1, 4]);
        let rel = p.relation();
        for c in p.sigma().iter().filter(|c| c.is_key()) {
            assert!(semantics::satisfies(&rel, c).unwrap().holds());
        }
        let sizes: Vec<usize> = lemma2_chain(5).unwrap().snapshots().iter().map(|s| s.size).collect();
        assert_eq!(sizes, vec![2, 4, 10, 64, 3250]);
    }

    #[test]
    fn verify_rejects_product() {
        let (s, sigma, q) = setup("schema R: A B; ind(A;B);", "key(A B)");
        let r = Relation::from_ints(s, [[0, 0], [0, 1], [1, 0], [1, 1]]).unwrap();
        let check = verify_countermodel(&r, &sigma, &q).unwrap();
        assert!(check.model.all_hold());
        assert!(!check.verified());
    }

    #[test]
    fn manifest_shape() {
        let (s, sigma, q) = setup("schema R: A B C; ind(A;B);", "ind(A;C)");
        let p = theorem2_prefix(&sigma, &q, &s, 2).unwrap();
        let m = p.manifest();
        assert_eq!(m["rounds"], 2);
        assert_eq!(m["schedule"][0], "ind(A ; B)");
        assert_eq!(m["guarantees"]["stages"][1]["satisfies"], "ind(A ; B)");
    }

    fn small_rows() -> impl Strategy<Value = Vec<Vec<u64>>> {
        prop::collection::vec(prop::collection::vec(0u64..3, 3), 0..7)
    }

    fn set3() -> impl Strategy<Value = AttrSet> {
        (0u64..8).prop_map(AttrSet::from_bits)
    }

    proptest! {
        #[test]
        fn row_checks_agree_with_semantics(rows in small_rows(), x in set3(), y in set3()) {
            let mut t = RowTable::new(3);
            for r in &rows {
                t.push(r);
            }
            let v = t.view();
            let mut dedup = rows.clone();
            dedup.sort();
            dedup.dedup();
            prop_assert_eq!(v.key_holds(x), semantics::holds(&dedup, &Constraint::Key(x)));
            prop_assert_eq!(v.ind_holds(x, y), semantics::holds(&dedup, &Constraint::Ind(x, y)));
            let proj: BTreeSet<Vec<u64>> = dedup.iter().map(|r| x.iter().map(|i| r[i]).collect()).collect();
            prop_assert_eq!(v.distinct(x), proj.len());
        }
    }
}
