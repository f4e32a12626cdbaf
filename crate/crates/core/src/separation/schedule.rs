use serde::Serialize;

use super::{a_pos, b_pos, SigmaN};
use crate::attrs::{AttrSet, Schema};
use crate::error::{Error, Result};

/// Column cardinalities for the finite model refuting `k(D)` once the
/// closing key `k(Bn A1)` is dropped.
///
/// With `m` the number of pairs `A_i B_i ⊆ D` and `M = (m + 3)!`:
/// `a_1 = 2`, `b_i = M / a_i` (or `M / (a_i + 1)` when `A_i B_i ⊆ D`), and
/// `a_{i+1} = M / b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalitySchedule {
    pub n: usize,
    pub d: AttrSet,
    pub m: usize,
    pub big_m: u64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

pub(crate) fn pair_in(d: AttrSet, i: usize) -> bool {
    d.contains(a_pos(i)) && d.contains(b_pos(i))
}

pub fn cardinality_schedule(n: usize, d: AttrSet) -> Result<CardinalitySchedule> {
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    if !d.is_subset(AttrSet::full(2 * n)) {
        return Err(Error::OutOfSchema(format!("R{n}")));
    }
    let m = (1..=n).filter(|&i| pair_in(d, i)).count();
    let big_m = (1..=(m as u64 + 3))
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .ok_or_else(|| Error::Precondition(format!("({m} + 3)! overflows 64 bits")))?;
    let div = |num: u64, den: u64| -> Result<u64> {
        if den == 0 || !num.is_multiple_of(den) {
            return Err(Error::Invariant(format!("{num} / {den} is not integral")));
        }
        Ok(num / den)
    };
    let mut a = vec![2u64];
    let mut b = Vec::with_capacity(n);
    for i in 1..=n {
        let ai = a[i - 1];
        let bi = div(big_m, if pair_in(d, i) { ai + 1 } else { ai })?;
        b.push(bi);
        if i < n {
            a.push(div(big_m, bi)?);
        }
    }
    if a.iter().chain(&b).any(|&v| v < 2) {
        return Err(Error::Invariant("schedule value below 2".into()));
    }
    Ok(CardinalitySchedule {
        n,
        d,
        m,
        big_m,
        a,
        b,
    })
}

#[derive(Serialize)]
struct ScheduleJson<'a> {
    n: usize,
    #[serde(rename = "D")]
    d: Vec<&'a str>,
    m: usize,
    #[serde(rename = "M")]
    big_m: u64,
    a: &'a [u64],
    b: &'a [u64],
}

impl CardinalitySchedule {
    /// `{n, D, m, M, a, b}`
    pub fn to_json(&self, schema: &Schema) -> serde_json::Value {
        serde_json::to_value(ScheduleJson {
            n: self.n,
            d: schema.names(self.d),
            m: self.m,
            big_m: self.big_m,
            a: &self.a,
            b: &self.b,
        })
        .expect("serializable schedule")
    }

    /// Re-checks the product identities the construction relies on.
    pub fn check(&self) -> Result<()> {
        for i in 1..=self.n {
            let (ai, bi) = (self.a[i - 1], self.b[i - 1]);
            let own = if pair_in(self.d, i) { (ai + 1) * bi } else { ai * bi };
            if own != self.big_m {
                return Err(Error::Invariant(format!("pair {i}: product {own} ≠ M")));
            }
            if i < self.n && bi * self.a[i] != self.big_m {
                return Err(Error::Invariant(format!("b_{i} · a_{} ≠ M", i + 1)));
            }
        }
        Ok(())
    }
}

impl SigmaN {
    pub fn schedule(&self, d: AttrSet) -> Result<CardinalitySchedule> {
        cardinality_schedule(self.n(), d)
    }
}
