//! Relation schemas and attribute sets.
//!
//! An [`AttrSet`] is a bitmask over the attribute positions of a [`Schema`];
//! bit `i` stands for the `i`-th declared attribute. Schemas are therefore
//! limited to 64 attributes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ATTRIBUTES: usize = 64;

/// A named relation schema with attributes in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    name: String,
    attributes: Vec<String>,
    index: HashMap<String, usize>,
}

impl Schema {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        attributes: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let name = name.into();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        if attributes.is_empty() {
            return Err(Error::Schema("schema declares no attributes".into()));
        }
        if attributes.len() > MAX_ATTRIBUTES {
            return Err(Error::Schema(format!(
                "{} attributes, at most {MAX_ATTRIBUTES} are supported",
                attributes.len()
            )));
        }
        let mut index = HashMap::with_capacity(attributes.len());
        for (i, a) in attributes.iter().enumerate() {
            if !is_identifier(a) {
                return Err(Error::Schema(format!("invalid attribute identifier {a:?}")));
            }
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate attribute {a}")));
            }
        }
        Ok(Schema {
            name,
            attributes,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn position(&self, attr: &str) -> Option<usize> {
        self.index.get(attr).copied()
    }

    pub fn attribute(&self, pos: usize) -> &str {
        &self.attributes[pos]
    }

    /// The set of all attributes, `R` itself.
    pub fn full(&self) -> AttrSet {
        AttrSet::full(self.len())
    }

    /// Resolves attribute names into a set.
    pub fn attr_set<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<AttrSet> {
        let mut set = AttrSet::EMPTY;
        for n in names {
            let p = self
                .position(n)
                .ok_or_else(|| Error::UnknownAttribute(n.to_string()))?;
            set.insert(p);
        }
        Ok(set)
    }

    /// Parses a whitespace-separated list of attribute names.
    pub fn parse_attr_set(&self, text: &str) -> Result<AttrSet> {
        self.attr_set(text.split_whitespace())
    }

    pub fn contains(&self, set: AttrSet) -> bool {
        set.is_subset(self.full())
    }

    pub fn check(&self, set: AttrSet) -> Result<()> {
        if self.contains(set) {
            Ok(())
        } else {
            Err(Error::OutOfSchema(self.name.clone()))
        }
    }

    /// Attribute names of `set` in schema order.
    pub fn names(&self, set: AttrSet) -> Vec<&str> {
        set.iter().map(|i| self.attribute(i)).collect()
    }

    /// Space-separated attribute names, as written in the constraint DSL.
    pub fn render(&self, set: AttrSet) -> String {
        self.names(set).join(" ")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A set of attribute positions of some schema.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AttrSet(u64);

impl AttrSet {
    pub const EMPTY: AttrSet = AttrSet(0);

    pub fn from_bits(bits: u64) -> Self {
        AttrSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The first `n` attribute positions.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            AttrSet(u64::MAX)
        } else {
            AttrSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(pos: usize) -> Self {
        AttrSet(1u64 << pos)
    }

    pub fn from_positions(positions: impl IntoIterator<Item = usize>) -> Self {
        let mut s = AttrSet::EMPTY;
        for p in positions {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, pos: usize) {
        self.0 |= 1u64 << pos;
    }

    pub fn contains(self, pos: usize) -> bool {
        pos < 64 && self.0 & (1u64 << pos) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & other.0)
    }

    pub fn difference(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Positions in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// The single member, if this is a singleton.
    pub fn as_single(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    /// All subsets, smallest bitmask first.
    pub fn subsets(self) -> impl Iterator<Item = AttrSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(AttrSet(cur))
        })
    }
}

/// Lexicographic order on the sorted position lists: `{} < {0} < {0,1} < {1}`.
impl Ord for AttrSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for AttrSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
