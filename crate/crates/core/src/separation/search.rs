//! Exhaustive finite-model search up to per-column value renaming.
//!
//! Candidates are row sets in canonical form: rows strictly increasing in
//! lexicographic order, and in each column the values appear in first-use
//! order (each new value is at most one more than the largest seen so far).
//! Every relation over a bounded domain is isomorphic to exactly one
//! relation in this form, which the lexicographically least renaming
//! attains.

use rayon::prelude::*;

use crate::constraint::{Constraint, ConstraintSet};
use crate::error::{Error, Result};
use crate::semantics;

/// Largest number of candidate relations [`bounded_search`] will visit.
pub const SEARCH_LIMIT: f64 = 5.0e9;

/// Upper bound on the number of canonical candidates with up to
/// `max_tuples` rows over `width` columns of `max_values` values.
pub fn search_estimate(width: usize, max_tuples: usize, max_values: usize) -> f64 {
    let rows = (max_values as f64).powi(width as i32);
    let mut total = 0.0;
    let mut choose = 1.0;
    for t in 1..=max_tuples {
        // The first row is forced to zeros, so choose t − 1 of the rest.
        if t > 1 {
            choose *= (rows - (t - 1) as f64) / (t - 1) as f64;
        }
        total += choose.max(0.0);
    }
    total
}

struct Space {
    width: usize,
    values: u64,
    max_tuples: usize,
}

impl Space {
    fn decode(&self, mut code: u64, row: &mut [u64]) {
        for slot in row.iter_mut().rev() {
            *slot = code % self.values;
            code /= self.values;
        }
    }

    fn row_count(&self) -> u64 {
        self.values.pow(self.width as u32)
    }

    /// Whether `row` respects first-use order given per-column maxima.
    fn admissible(&self, row: &[u64], maxima: &[u64]) -> bool {
        row.iter().zip(maxima).all(|(&v, &m)| v <= m + 1)
    }
}

/// Depth-first extension of `rows`, visiting each canonical relation once
/// in lexicographic order of its row list; stops when `visit` returns
/// `Some`.
fn extend<T>(
    space: &Space,
    rows: &mut Vec<Vec<u64>>,
    codes: &mut Vec<u64>,
    maxima: &[u64],
    prune: &dyn Fn(&[Vec<u64>]) -> bool,
    visit: &mut dyn FnMut(&[Vec<u64>]) -> Option<T>,
) -> Option<T> {
    if let Some(found) = visit(rows) {
        return Some(found);
    }
    if rows.len() == space.max_tuples {
        return None;
    }
    let start = codes.last().map_or(0, |c| c + 1);
    let mut row = vec![0; space.width];
    for code in start..space.row_count() {
        space.decode(code, &mut row);
        if !space.admissible(&row, maxima) {
            continue;
        }
        rows.push(row.clone());
        codes.push(code);
        if !prune(rows) {
            let next: Vec<u64> = maxima.iter().zip(&row).map(|(&m, &v)| m.max(v)).collect();
            if let Some(found) = extend(space, rows, codes, &next, prune, visit) {
                return Some(found);
            }
        }
        rows.pop();
        codes.pop();
    }
    None
}

fn check_bounds(width: usize, max_tuples: usize, max_values: usize) -> Result<Space> {
    if max_tuples == 0 || max_values == 0 {
        return Err(Error::Precondition("bounds must be positive".into()));
    }
    let estimate = search_estimate(width, max_tuples, max_values);
    let rows = (max_values as f64).powi(width as i32);
    if estimate > SEARCH_LIMIT || rows > u32::MAX as f64 {
        return Err(Error::SearchTooLarge {
            estimate,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(Space {
        width,
        values: max_values as u64,
        max_tuples,
    })
}

/// Calls `visit` on every canonical relation with between 1 and
/// `max_tuples` rows whose values lie in `0..max_values`.
pub fn enumerate_models(
    width: usize,
    max_tuples: usize,
    max_values: usize,
    mut visit: impl FnMut(&[Vec<u64>]),
) -> Result<()> {
    let space = check_bounds(width, max_tuples, max_values)?;
    let mut rows = vec![vec![0; width]];
    let mut codes = vec![0];
    let maxima = vec![0; width];
    extend::<()>(&space, &mut rows, &mut codes, &maxima, &|_| false, &mut |r| {
        visit(r);
        None
    });
    Ok(())
}

/// First canonical relation with at most `max_tuples` rows over
/// `max_values` values per column that satisfies `sigma` and violates
/// `phi`. `None` only means no counterexample exists within the bounds.
pub fn bounded_search(
    sigma: &ConstraintSet,
    phi: &Constraint,
    width: usize,
    max_tuples: usize,
    max_values: usize,
) -> Result<Option<Vec<Vec<u64>>>> {
    let space = check_bounds(width, max_tuples, max_values)?;
    if sigma.contains(phi) {
        return Ok(None);
    }
    let keys: Vec<Constraint> = sigma.iter().filter(|c| c.is_key()).copied().collect();
    let prune = |rows: &[Vec<u64>]| keys.iter().any(|k| !semantics::holds(rows, k));
    let found = |rows: &[Vec<u64>]| {
        (!semantics::holds(rows, phi) && sigma.iter().all(|c| semantics::holds(rows, c)))
            .then(|| rows.to_vec())
    };
    let zero = vec![0; width];
    if let Some(w) = found(std::slice::from_ref(&zero)) {
        return Ok(Some(w));
    }
    if max_tuples == 1 {
        return Ok(None);
    }
    let branches: Vec<u64> = (1..space.row_count()).collect();
    let maxima = vec![0; width];
    Ok(branches.par_iter().find_map_first(|&code| {
        let mut second = vec![0; width];
        space.decode(code, &mut second);
        if !space.admissible(&second, &maxima) {
            return None;
        }
        let mut rows = vec![zero.clone(), second.clone()];
        if prune(&rows) {
            return None;
        }
        let mut codes = vec![0, code];
        let next: Vec<u64> = second.clone();
        extend(&space, &mut rows, &mut codes, &next, &prune, &mut |r| found(r))
    }))
}
