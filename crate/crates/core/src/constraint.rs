//! Keys and independence atoms.

use std::collections::BTreeSet;
use std::fmt;

use crate::attrs::{AttrSet, Schema};
use crate::error::Result;

/// A key `k(X)` or an independence atom `X ⊥ Y`.
///
/// Independence atoms keep the orientation they were built with; a
/// [`ConstraintSet`] normalizes them on insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Key(AttrSet),
    Ind(AttrSet, AttrSet),
}

impl Constraint {
    pub fn key(attrs: AttrSet) -> Self {
        Constraint::Key(attrs)
    }

    pub fn ind(left: AttrSet, right: AttrSet) -> Self {
        Constraint::Ind(left, right)
    }

    /// Independence atom with the lexicographically smaller side first.
    pub fn normalized(self) -> Self {
        match self {
            Constraint::Ind(x, y) if y < x => Constraint::Ind(y, x),
            c => c,
        }
    }

    pub fn is_key(&self) -> bool {
        matches!(self, Constraint::Key(_))
    }

    pub fn is_ind(&self) -> bool {
        matches!(self, Constraint::Ind(..))
    }

    /// `A ⊥ B` with single attributes on both sides.
    pub fn is_unary_ind(&self) -> bool {
        matches!(self, Constraint::Ind(x, y) if x.len() == 1 && y.len() == 1)
    }

    /// `∅ ⊥ X` or `X ⊥ ∅`, which every non-empty relation satisfies.
    pub fn is_trivial_ind(&self) -> bool {
        matches!(self, Constraint::Ind(x, y) if x.is_empty() || y.is_empty())
    }

    /// All attributes mentioned.
    pub fn attrs(&self) -> AttrSet {
        match *self {
            Constraint::Key(x) => x,
            Constraint::Ind(x, y) => x.union(y),
        }
    }

    pub fn check(&self, schema: &Schema) -> Result<()> {
        schema.check(self.attrs())
    }

    /// Applies an attribute renaming given as `map[old] = new`.
    pub fn map_attrs(&self, map: &[usize]) -> Constraint {
        let m = |s: AttrSet| AttrSet::from_positions(s.iter().map(|i| map[i]));
        match *self {
            Constraint::Key(x) => Constraint::Key(m(x)),
            Constraint::Ind(x, y) => Constraint::Ind(m(x), m(y)),
        }
    }

    pub fn display<'a>(&'a self, schema: &'a Schema) -> DisplayConstraint<'a> {
        DisplayConstraint {
            constraint: self,
            schema,
        }
    }
}

/// DSL rendering of a constraint, without the trailing `;`.
pub struct DisplayConstraint<'a> {
    constraint: &'a Constraint,
    schema: &'a Schema,
}

impl fmt::Display for DisplayConstraint<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.constraint {
            Constraint::Key(x) => write!(f, "key({})", self.schema.render(x)),
            Constraint::Ind(x, y) => {
                let l = self.schema.render(x);
                let r = self.schema.render(y);
                match (l.is_empty(), r.is_empty()) {
                    (true, true) => write!(f, "ind(;)"),
                    (true, false) => write!(f, "ind(; {r})"),
                    (false, true) => write!(f, "ind({l} ;)"),
                    (false, false) => write!(f, "ind({l} ; {r})"),
                }
            }
        }
    }
}

/// A finite set of constraints over one schema, with independence atoms
/// stored in normalized orientation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ConstraintSet {
    items: BTreeSet<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Constraint) -> bool {
        self.items.insert(c.normalized())
    }

    /// Membership up to independence-atom symmetry.
    pub fn contains(&self, c: &Constraint) -> bool {
        self.items.contains(&c.normalized())
    }

    /// Membership of exactly this orientation.
    pub fn contains_literal(&self, c: &Constraint) -> bool {
        self.items.contains(c)
    }

    pub fn remove(&mut self, c: &Constraint) -> bool {
        self.items.remove(&c.normalized())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Constraints in canonical order (keys first, then atoms).
    pub fn iter(&self) -> impl Iterator<Item = &Constraint> + '_ {
        self.items.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = AttrSet> + '_ {
        self.items.iter().filter_map(|c| match c {
            Constraint::Key(x) => Some(*x),
            _ => None,
        })
    }

    pub fn inds(&self) -> impl Iterator<Item = (AttrSet, AttrSet)> + '_ {
        self.items.iter().filter_map(|c| match c {
            Constraint::Ind(x, y) => Some((*x, *y)),
            _ => None,
        })
    }

    /// Splits into (independence atoms, keys).
    pub fn partition(&self) -> (ConstraintSet, ConstraintSet) {
        let (i, k): (BTreeSet<_>, BTreeSet<_>) = self.items.iter().partition(|c| c.is_ind());
        (ConstraintSet { items: i }, ConstraintSet { items: k })
    }

    pub fn is_subset(&self, other: &ConstraintSet) -> bool {
        self.items.is_subset(&other.items)
    }

    pub fn check(&self, schema: &Schema) -> Result<()> {
        self.items.iter().try_for_each(|c| c.check(schema))
    }

    pub fn map_attrs(&self, map: &[usize]) -> ConstraintSet {
        self.items.iter().map(|c| c.map_attrs(map)).collect()
    }
}

impl FromIterator<Constraint> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = Constraint>>(iter: I) -> Self {
        let mut s = ConstraintSet::new();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl Extend<Constraint> for ConstraintSet {
    fn extend<I: IntoIterator<Item = Constraint>>(&mut self, iter: I) {
        for c in iter {
            self.insert(c);
        }
    }
}

impl<'a> IntoIterator for &'a ConstraintSet {
    type Item = &'a Constraint;
    type IntoIter = std::collections::btree_set::Iter<'a, Constraint>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
