use serde::Serialize;

use super::lemmas::{lemma3_model, lemma4_model, lemma5_models, lemma6_models};
use super::{a_pos, b_pos, SigmaN};
use crate::attrs::AttrSet;
use crate::constraint::Constraint;
use crate::countermodel::verify_countermodel;
use crate::error::{Error, Result};
use crate::relation::Relation;

/// An automorphism of `Σ_n`, as a position map `map[old] = new`.
///
/// Positions `0..2n` run around the cycle `A1 B1 A2 B2 … Bn`; atoms join
/// `2k, 2k+1` and keys join `2k+1, 2k+2`. The automorphisms are the even
/// rotations and the reflections `p ↦ c − p` for odd `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Symmetry {
    pub kind: &'static str,
    pub offset: usize,
    pub map: Vec<usize>,
}

pub fn symmetries(n: usize) -> Vec<Symmetry> {
    let w = 2 * n;
    let rotations = (0..n).map(|c| Symmetry {
        kind: "rotation",
        offset: c,
        map: (0..w).map(|p| (p + 2 * c) % w).collect(),
    });
    let reflections = (0..n).map(|c| {
        let c = 2 * c + 1;
        Symmetry {
            kind: "reflection",
            offset: c,
            map: (0..w).map(|p| (c + w - p) % w).collect(),
        }
    });
    rotations.chain(reflections).collect()
}

/// Which construction produced a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// Dropped key, target key.
    KeyKey,
    /// Dropped atom, target key.
    AtomKey,
    /// Dropped key, target atom; `first` selects `r` over `r'`.
    KeyAtom { index: usize, first: bool },
    /// Dropped atom, target atom; `model` is 0 to 3.
    AtomAtom { index: usize, model: usize },
}

#[derive(Debug, Clone)]
pub struct Theorem3Countermodel {
    pub relation: Relation,
    pub dropped: Constraint,
    pub target: Constraint,
    pub symmetry: Symmetry,
    /// The target after applying the symmetry.
    pub canonical_target: Constraint,
    pub lemma: Lemma,
}

impl Theorem3Countermodel {
    pub fn to_json(&self, s: &SigmaN) -> serde_json::Value {
        let schema = s.schema();
        let rename: Vec<String> = self
            .symmetry
            .map
            .iter()
            .enumerate()
            .map(|(p, &q)| format!("{}->{}", schema.attribute(p), schema.attribute(q)))
            .collect();
        serde_json::json!({
            "dropped": self.dropped.display(schema).to_string(),
            "target": self.target.display(schema).to_string(),
            "symmetry": { "kind": self.symmetry.kind, "offset": self.symmetry.offset, "map": rename },
            "canonical_target": self.canonical_target.display(schema).to_string(),
            "construction": self.lemma,
            "size": self.relation.len(),
        })
    }
}

fn pair_of(pos: usize) -> (bool, usize) {
    (pos.is_multiple_of(2), pos / 2 + 1)
}

/// Builds a model of `Σ_n ∖ {ψ}` violating `φ ∉ C↑(Σ_n)`.
pub fn theorem3_countermodel(
    s: &SigmaN,
    psi: &Constraint,
    phi: &Constraint,
) -> Result<Theorem3Countermodel> {
    let n = s.n();
    let sigma_rest = s.without(psi)?;
    phi.check(s.schema())?;
    if s.upward_closure().contains(phi) {
        return Err(Error::Precondition(format!(
            "{} is in the upward closure of Σ_{n}",
            phi.display(s.schema())
        )));
    }
    let canonical_psi = match psi {
        Constraint::Key(_) => Constraint::Key(AttrSet::from_positions([b_pos(n), a_pos(1)])),
        Constraint::Ind(..) => Constraint::Ind(AttrSet::singleton(a_pos(1)), AttrSet::singleton(b_pos(1))),
    };
    let candidates: Vec<Symmetry> = symmetries(n)
        .into_iter()
        .filter(|g| psi.map_attrs(&g.map).normalized() == canonical_psi.normalized())
        .collect();
    let (g, target) = match phi {
        Constraint::Key(_) => (&candidates[0], phi.map_attrs(&candidates[0].map)),
        Constraint::Ind(x, y) if phi.is_unary_ind() => {
            let (px, py) = (single(*x)?, single(*y)?);
            let found = candidates.iter().find_map(|g| {
                let (gx, gy) = (g.map[px], g.map[py]);
                let (ax, ay) = (pair_of(gx).0, pair_of(gy).0);
                match (ax, ay) {
                    (true, _) => Some((g, Constraint::Ind(AttrSet::singleton(gx), AttrSet::singleton(gy)))),
                    (false, true) => Some((g, Constraint::Ind(AttrSet::singleton(gy), AttrSet::singleton(gx)))),
                    _ => None,
                }
            });
            found.ok_or_else(|| Error::Invariant("no symmetry puts an A attribute first".into()))?
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "{} is not a key or unary atom",
                phi.display(s.schema())
            )))
        }
    };
    let (model, lemma) = match (psi, target) {
        (Constraint::Key(_), Constraint::Key(d)) => (lemma3_model(n, d)?, Lemma::KeyKey),
        (Constraint::Ind(..), Constraint::Key(d)) => (lemma4_model(n, d)?, Lemma::AtomKey),
        (Constraint::Key(_), Constraint::Ind(x, y)) => {
            let (_, i) = pair_of(single(x)?);
            let (y_is_a, j) = pair_of(single(y)?);
            let first = if y_is_a { j <= i } else { j > i };
            let (r, r_prime) = lemma5_models(n, i)?;
            (if first { r } else { r_prime }, Lemma::KeyAtom { index: i, first })
        }
        (Constraint::Ind(..), Constraint::Ind(x, y)) => {
            let (_, i) = pair_of(single(x)?);
            let (y_is_a, j) = pair_of(single(y)?);
            let k = match (y_is_a, i) {
                (true, _) => 0,
                (false, 1) => 1,
                (false, _) if j < i => 2,
                _ => 3,
            };
            let models = lemma6_models(n, i)?;
            (models.get(k)?.clone(), Lemma::AtomAtom { index: i, model: k })
        }
    };
    let relation = model.permute_columns(&g.map);
    let check = verify_countermodel(&relation, &sigma_rest, phi)?;
    if !check.verified() {
        return Err(Error::Invariant(format!(
            "model for dropping {} does not refute {}",
            psi.display(s.schema()),
            phi.display(s.schema())
        )));
    }
    Ok(Theorem3Countermodel {
        relation,
        dropped: *psi,
        target: *phi,
        symmetry: g.clone(),
        canonical_target: target,
        lemma,
    })
}

fn single(x: AttrSet) -> Result<usize> {
    x.as_single().ok_or_else(|| Error::Unsupported("expected a single attribute".into()))
}
