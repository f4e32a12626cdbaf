//! Finite relations with set semantics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::attrs::{AttrSet, Schema};
use crate::error::{Error, Result};

/// An opaque atom compared by exact string equality.
///
/// Canonical decimal strings (no sign, no leading zeros) are stored as
/// integers so generated models stay compact; `"7"` and `"07"` remain
/// distinct values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(u64),
    Text(Arc<str>),
}

impl Value {
    pub fn parse(s: &str) -> Value {
        let canonical = !s.is_empty()
            && s.bytes().all(|b| b.is_ascii_digit())
            && (s == "0" || !s.starts_with('0'));
        match canonical.then(|| s.parse::<u64>().ok()).flatten() {
            Some(n) => Value::Int(n),
            None => Value::Text(Arc::from(s)),
        }
    }

    pub fn as_int(&self) -> Option<u64> {
        match self {
            Value::Int(n) => Some(*n),
            Value::Text(_) => None,
        }
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::parse(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Text(s) => write!(f, "{s:?}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type Tuple = Vec<Value>;

/// A finite set of total tuples over a schema. Tuples are stored sorted and
/// deduplicated, values in schema order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    schema: Arc<Schema>,
    tuples: Vec<Tuple>,
}

impl Relation {
    pub fn new(schema: Arc<Schema>, tuples: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let width = schema.len();
        let mut tuples: Vec<Tuple> = tuples.into_iter().collect();
        if let Some(t) = tuples.iter().find(|t| t.len() != width) {
            return Err(Error::SchemaMismatch(format!(
                "tuple of width {} over a schema of width {width}",
                t.len()
            )));
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Relation { schema, tuples })
    }

    /// Builds a relation of integer-valued rows.
    pub fn from_ints<R: AsRef<[u64]>>(
        schema: Arc<Schema>,
        rows: impl IntoIterator<Item = R>,
    ) -> Result<Self> {
        Relation::new(
            schema,
            rows.into_iter()
                .map(|r| r.as_ref().iter().map(|&v| Value::Int(v)).collect()),
        )
    }

    pub fn empty(schema: Arc<Schema>) -> Self {
        Relation {
            schema,
            tuples: Vec::new(),
        }
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Value]) -> bool {
        self.tuples.binary_search_by(|x| x.as_slice().cmp(t)).is_ok()
    }

    /// `r(X)`: the set of restrictions of tuples to `X`, values in schema order.
    pub fn project(&self, x: AttrSet) -> Result<BTreeSet<Tuple>> {
        self.schema.check(x)?;
        Ok(self
            .tuples
            .iter()
            .map(|t| x.iter().map(|i| t[i].clone()).collect())
            .collect())
    }

    /// `r(A = a)`.
    pub fn select_eq(&self, attr: &str, value: &Value) -> Result<Relation> {
        let pos = self
            .schema
            .position(attr)
            .ok_or_else(|| Error::UnknownAttribute(attr.to_string()))?;
        Ok(Relation {
            schema: self.schema.clone(),
            tuples: self
                .tuples
                .iter()
                .filter(|t| &t[pos] == value)
                .cloned()
                .collect(),
        })
    }

    /// Number of distinct values per column position in `x`, i.e. `|r(x)|`.
    pub fn distinct(&self, x: AttrSet) -> usize {
        let mut seen: Vec<Vec<&Value>> = self
            .tuples
            .iter()
            .map(|t| x.iter().map(|i| &t[i]).collect())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Renames every column through `map` where column `i` of the result is
    /// column `map[i]` of `self`.
    pub fn permute_columns(&self, map: &[usize]) -> Relation {
        Relation {
            schema: self.schema.clone(),
            tuples: {
                let mut v: Vec<Tuple> = self
                    .tuples
                    .iter()
                    .map(|t| map.iter().map(|&j| t[j].clone()).collect())
                    .collect();
                v.sort_unstable();
                v
            },
        }
    }

    /// Reads an RFC-4180 CSV whose header names exactly the schema's
    /// attributes, in any order.
    pub fn from_csv(schema: Arc<Schema>, text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Csv("empty input: a header row is required".into()));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(text.as_bytes());
        let header = rdr.headers()?.clone();
        let mut columns = Vec::with_capacity(header.len());
        for h in header.iter() {
            let pos = schema
                .position(h)
                .ok_or_else(|| Error::Csv(format!("header names unknown attribute {h:?}")))?;
            if columns.contains(&pos) {
                return Err(Error::Csv(format!("header repeats attribute {h:?}")));
            }
            columns.push(pos);
        }
        if columns.len() != schema.len() {
            let missing: Vec<&str> = (0..schema.len())
                .filter(|p| !columns.contains(p))
                .map(|p| schema.attribute(p))
                .collect();
            return Err(Error::Csv(format!(
                "header is missing attributes {}",
                missing.join(", ")
            )));
        }
        let mut tuples = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let mut t = vec![Value::Int(0); schema.len()];
            for (field, &pos) in rec.iter().zip(&columns) {
                t[pos] = Value::parse(field);
            }
            tuples.push(t);
        }
        Relation::new(schema, tuples)
    }

    /// CSV with a header in schema order and rows in sorted order.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(self.schema.attributes())
            .expect("in-memory write");
        for t in &self.tuples {
            w.write_record(t.iter().map(|v| v.to_string()))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 csv")
    }

    /// Value multiplicities of one column.
    pub fn column_counts(&self, pos: usize) -> BTreeMap<&Value, usize> {
        let mut m = BTreeMap::new();
        for t in &self.tuples {
            *m.entry(&t[pos]).or_insert(0) += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Schema> {
        Arc::new(Schema::new("R", ["A", "B"]).unwrap())
    }

    #[test]
    fn csv_loading() {
        let r = Relation::from_csv(ab(), "A,B\n0,0\n0,1\n").unwrap();
        assert_eq!(r.len(), 2);
        let r = Relation::from_csv(ab(), "A,B\n0,0\n0,0\n").unwrap();
        assert_eq!(r.len(), 1);
        let r = Relation::from_csv(ab(), "B,A\n1,0\n").unwrap();
        assert_eq!(r.tuples()[0], vec![Value::Int(0), Value::Int(1)]);
        assert!(Relation::from_csv(ab(), "A,C\n0,0\n").is_err());
        assert!(Relation::from_csv(ab(), "A,B\n0\n").is_err());
        assert!(Relation::from_csv(ab(), "").is_err());
        assert!(Relation::from_csv(ab(), "A,B\n").unwrap().is_empty());
    }

    #[test]
    fn values_compare_as_strings() {
        assert_ne!(Value::parse("07"), Value::parse("7"));
        assert_eq!(Value::parse("7"), Value::Int(7));
        assert_eq!(Value::parse("x").to_string(), "x");
        assert_eq!(Value::parse("18446744073709551616").to_string(), "18446744073709551616");
    }

    #[test]
    fn projection_cases() {
        let s = ab();
        let r = Relation::from_ints(s.clone(), [[0, 0], [0, 1]]).unwrap();
        assert_eq!(r.project(AttrSet::singleton(0)).unwrap().len(), 1);
        assert_eq!(r.project(s.full()).unwrap().len(), 2);
        let r = Relation::from_ints(s.clone(), [[0, 0], [1, 1]]).unwrap();
        let e = r.project(AttrSet::EMPTY).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.iter().next().unwrap().is_empty());
        assert!(Relation::empty(s.clone()).project(AttrSet::EMPTY).unwrap().is_empty());
        assert!(r.project(AttrSet::singleton(5)).is_err());
    }

    #[test]
    fn selection_cases() {
        let r = Relation::from_ints(ab(), [[0, 0], [0, 1], [1, 1]]).unwrap();
        let s = r.select_eq("A", &Value::Int(0)).unwrap();
        assert_eq!(s.len(), 2);
        assert!(r.select_eq("A", &Value::Int(9)).unwrap().is_empty());
        assert!(r.select_eq("C", &Value::Int(0)).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let r = Relation::from_csv(ab(), "A,B\n\"x,y\",1\n0,z\n").unwrap();
        let back = Relation::from_csv(ab(), &r.to_csv()).unwrap();
        assert_eq!(r, back);
    }
}
