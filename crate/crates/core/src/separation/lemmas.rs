//! Finite models of `Σ_n` minus one constraint that refute a given key or
//! unary atom outside the upward closure.
//!
//! Models for a dropped closing key `k(Bn A1)` and for a dropped first atom
//! `A1 ⊥ B1`; other dropped constraints are reached by symmetry in
//! [`theorem3`](super::theorem3).

use std::collections::BTreeMap;

use super::schedule::pair_in;
use super::{a_pos, b_pos, sigma_n, CardinalitySchedule, SigmaN};
use crate::attrs::AttrSet;
use crate::constraint::Constraint;
use crate::countermodel::verify_countermodel;
use crate::error::{Error, Result};
use crate::relation::Relation;

const STAR: u64 = u64::MAX;

fn closing_key(n: usize) -> Constraint {
    Constraint::Key(AttrSet::from_positions([b_pos(n), a_pos(1)]))
}

fn first_atom() -> Constraint {
    Constraint::Ind(AttrSet::singleton(a_pos(1)), AttrSet::singleton(b_pos(1)))
}

fn check_target_key(s: &SigmaN, d: AttrSet) -> Result<()> {
    s.schema().check(d)?;
    if s.upward_closure().contains(&Constraint::Key(d)) {
        return Err(Error::Precondition(format!(
            "key({}) is in the upward closure of Σ_{}",
            s.schema().render(d),
            s.n()
        )));
    }
    Ok(())
}

fn verified(r: Relation, s: &SigmaN, dropped: &Constraint, phi: &Constraint) -> Result<Relation> {
    let sigma = s.without(dropped)?;
    let check = verify_countermodel(&r, &sigma, phi)?;
    if !check.verified() {
        return Err(Error::Invariant(format!(
            "construction for {} does not refute it",
            phi.display(s.schema())
        )));
    }
    Ok(r)
}

/// Fills column `new_col` so that inside every group of equal `group_col`
/// values the new values are `0..count` once each, then swaps values within
/// a group so row 0 gets `v0` and row 1 gets `v1`.
fn fill_within_groups(
    rows: &mut [Vec<u64>],
    group_col: usize,
    new_col: usize,
    count: u64,
    v0: u64,
    v1: u64,
) -> Result<()> {
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (idx, row) in rows.iter().enumerate() {
        groups.entry(row[group_col]).or_default().push(idx);
    }
    for members in groups.values() {
        if members.len() as u64 != count {
            return Err(Error::Invariant(format!(
                "group of size {} where {count} was scheduled",
                members.len()
            )));
        }
        for (v, &idx) in members.iter().enumerate() {
            rows[idx][new_col] = v as u64;
        }
    }
    for (row, want) in [(0usize, v0), (1, v1)] {
        let g = rows[row][group_col];
        let holder = groups[&g]
            .iter()
            .copied()
            .find(|&idx| rows[idx][new_col] == want)
            .ok_or_else(|| Error::Invariant(format!("value {want} not scheduled")))?;
        if row == 1 && holder == 0 {
            return Err(Error::Invariant("rows 0 and 1 collide on a scheduled key".into()));
        }
        let tmp = rows[row][new_col];
        rows[row][new_col] = want;
        rows[holder][new_col] = tmp;
    }
    Ok(())
}

/// Rows `t_0, …, t_{M-1}` in construction order; `t_0` is all zeros and
/// `t_1` is `0` on `D` and `1` elsewhere.
pub(crate) fn lemma3_rows(n: usize, d: AttrSet) -> Result<(CardinalitySchedule, Vec<Vec<u64>>)> {
    let s = sigma_n(n)?;
    check_target_key(&s, d)?;
    let sch = s.schedule(d)?;
    sch.check()?;
    let width = 2 * n;
    let big_m = sch.big_m as usize;
    let t1 = |pos: usize| u64::from(!d.contains(pos));

    // First pair: B1-major enumeration, with the sentinel when A1 B1 ⊆ D.
    let a_values: Vec<u64> = if pair_in(d, 1) { vec![0, STAR, 1] } else { vec![0, 1] };
    let mut pairs: Vec<(u64, u64)> = (0..sch.b[0])
        .flat_map(|bv| a_values.iter().map(move |&av| (av, bv)))
        .collect();
    let first = if pair_in(d, 1) { (STAR, 0) } else { (t1(a_pos(1)), t1(b_pos(1))) };
    for (row, want) in [(0usize, (0, 0)), (1, first)] {
        let at = pairs[row..]
            .iter()
            .position(|&p| p == want)
            .ok_or_else(|| Error::Invariant("seed pair missing from enumeration".into()))?;
        pairs.swap(row, row + at);
    }
    if pairs.len() != big_m {
        return Err(Error::Invariant(format!("{} rows where M = {big_m}", pairs.len())));
    }
    let mut rows: Vec<Vec<u64>> = pairs
        .into_iter()
        .map(|(av, bv)| {
            let mut row = vec![0; width];
            row[0] = av;
            row[1] = bv;
            row
        })
        .collect();

    for i in 1..n {
        let (prev_b, a, b) = (b_pos(i), a_pos(i + 1), b_pos(i + 1));
        let a_count = sch.a[i];
        fill_within_groups(&mut rows, prev_b, a, a_count, 0, t1(a))?;
        if !pair_in(d, i + 1) {
            fill_within_groups(&mut rows, a, b, sch.b[i], 0, t1(b))?;
            continue;
        }
        let (b_old, b_new) = (sch.b[i - 1], sch.b[i]);
        let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (idx, row) in rows.iter().enumerate() {
            groups.entry(row[a]).or_default().push(idx);
        }
        for (&k, members) in &groups {
            let mut order: Vec<usize> = members.clone();
            if k == 0 {
                order.retain(|&x| x > 1);
                order.insert(0, 0);
                order.insert(b_new as usize, 1);
            }
            if order.len() as u64 != b_old {
                return Err(Error::Invariant(format!("A{} group has {} rows", i + 1, order.len())));
            }
            for (l, &idx) in order.iter().enumerate() {
                let l = l as u64;
                rows[idx][b] = if l < b_new { l } else { k * (b_old - b_new) + (l - b_new) };
            }
        }
    }
    for row in &mut rows {
        if row[0] == STAR {
            row[0] = 0;
        }
    }
    Ok((sch, rows))
}

/// Model of `Σ_n ∖ {k(Bn A1)}` of size `M` violating `k(D)`, with
/// `|r(A_i)| = a_i` and `|r(B_i)| = b_i`.
pub fn lemma3_model(n: usize, d: AttrSet) -> Result<Relation> {
    let (_, rows) = lemma3_rows(n, d)?;
    let s = sigma_n(n)?;
    let r = Relation::from_ints(s.schema().clone(), &rows)?;
    verified(r, &s, &closing_key(n), &Constraint::Key(d))
}

/// Model of `Σ_n ∖ {A1 ⊥ B1}` violating `k(D)`: the previous model with
/// column `A1` made almost injective so that `k(Bn A1)` holds.
pub fn lemma4_model(n: usize, d: AttrSet) -> Result<Relation> {
    let (_, mut rows) = lemma3_rows(n, d)?;
    let s = sigma_n(n)?;
    for (i, row) in rows.iter_mut().enumerate() {
        row[0] = match i {
            1 => u64::from(d.contains(b_pos(n))),
            i => i as u64,
        };
    }
    let r = Relation::from_ints(s.schema().clone(), &rows)?;
    verified(r, &s, &first_atom(), &Constraint::Key(d))
}

fn row_from(n: usize, zero: impl Fn(bool, usize) -> bool) -> Vec<u64> {
    (1..=n)
        .flat_map(|j| [u64::from(!zero(true, j)), u64::from(!zero(false, j))])
        .collect()
}

fn check_index(n: usize, i: usize) -> Result<SigmaN> {
    let s = sigma_n(n)?;
    if i == 0 || i > n {
        return Err(Error::Precondition(format!("index {i} outside 1..={n}")));
    }
    Ok(s)
}

fn satisfying(s: &SigmaN, dropped: &Constraint, rows: &[Vec<u64>]) -> Result<Relation> {
    let r = Relation::from_ints(s.schema().clone(), rows)?;
    let report = crate::semantics::satisfies_all(&r, &s.without(dropped)?)?;
    if !report.all_hold() {
        return Err(Error::Invariant("0/1 model violates the remaining constraints".into()));
    }
    Ok(r)
}

/// Two 0/1 models of `Σ_n ∖ {k(Bn A1)}` covering the atoms `A_i ⊥ Y`:
/// `r` refutes `A_i ⊥ A_j` (`j ≤ i`) and `A_i ⊥ B_j` (`j > i`), `r'` refutes
/// `A_i ⊥ A_j` (`j > i`) and `A_i ⊥ B_j` (`j < i`).
pub fn lemma5_models(n: usize, i: usize) -> Result<(Relation, Relation)> {
    let s = check_index(n, i)?;
    let t0 = vec![0; 2 * n];
    let t1 = row_from(n, |is_a, j| if is_a { j <= i } else { j > i });
    let t2 = row_from(n, |is_a, j| !is_a && j == i);
    let t3 = row_from(n, |is_a, j| if is_a { j > i } else { j < i });
    let t4 = row_from(n, |is_a, j| if is_a { j < i } else { j >= i });
    let dropped = closing_key(n);
    let r = satisfying(&s, &dropped, &[t0.clone(), t1, t2, t3])?;
    let r_prime = satisfying(&s, &dropped, &[t0, t4])?;
    Ok((r, r_prime))
}

/// 0/1 models of `Σ_n ∖ {A1 ⊥ B1}` covering the atoms `A_i ⊥ Y`.
#[derive(Debug, Clone)]
pub struct Lemma6Models {
    /// Refutes `A_i ⊥ A_j` for every `j`.
    pub r0: Relation,
    /// Refutes `A1 ⊥ B_j` for `j > 1`.
    pub r1: Relation,
    /// Refutes `A_i ⊥ B_j` for `j < i`; only for `i > 1`.
    pub r2: Option<Relation>,
    /// Refutes `A_i ⊥ B_j` for `j > i`; only for `i < n`.
    pub r3: Option<Relation>,
}

impl Lemma6Models {
    /// Model `k` (0 to 3), or an error when it is undefined for this index.
    pub fn get(&self, k: usize) -> Result<&Relation> {
        let missing = |what: &str| Error::Precondition(format!("r{k} is undefined {what}"));
        match k {
            0 => Ok(&self.r0),
            1 => Ok(&self.r1),
            2 => self.r2.as_ref().ok_or_else(|| missing("for i = 1")),
            3 => self.r3.as_ref().ok_or_else(|| missing("for i = n")),
            _ => Err(Error::Precondition(format!("no model r{k}"))),
        }
    }
}

pub fn lemma6_models(n: usize, i: usize) -> Result<Lemma6Models> {
    let s = check_index(n, i)?;
    let dropped = first_atom();
    let t0 = vec![0; 2 * n];
    let t1 = row_from(n, |is_a, j| !is_a && j > 1);
    let t2 = row_from(n, |is_a, j| is_a && j > 1);
    let r0 = satisfying(&s, &dropped, &[t0.clone(), t1])?;
    let r1 = satisfying(&s, &dropped, &[t0.clone(), t2])?;
    let r2 = if i > 1 {
        let t3 = row_from(n, |is_a, j| if is_a { 1 < j && j < i } else { j >= i });
        Some(satisfying(&s, &dropped, &[t0.clone(), t3])?)
    } else {
        None
    };
    let r3 = if i < n {
        let t4 = row_from(n, |is_a, j| if is_a { j == 1 } else { j <= i });
        let t5 = row_from(n, |is_a, j| if is_a { 1 < j && j <= i } else { j > i });
        let t6 = row_from(n, |is_a, j| is_a && j > i);
        Some(satisfying(&s, &dropped, &[t0, t4, t5, t6])?)
    } else {
        None
    };
    Ok(Lemma6Models { r0, r1, r2, r3 })
}
