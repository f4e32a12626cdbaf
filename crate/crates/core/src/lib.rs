//! Reasoning about keys and independence atoms over relational schemas.
//!
//! * [`semantics`] decides satisfaction on concrete relations.
//! * [`derivation`] implements the nine inference rules, proof checking and
//!   saturation.
//! * [`decision`] decides general implication for keys and unary atoms.
//! * [`countermodel`] builds chase prefixes refuting non-implied constraints.
//! * [`separation`] covers the cyclic family `Σ_n` that separates finite
//!   from general implication.

pub mod attrs;
pub mod constraint;
pub mod countermodel;
pub mod decision;
pub mod derivation;
pub mod error;
pub mod parse;
pub mod relation;
pub mod semantics;
pub mod separation;

pub use attrs::{AttrSet, Schema};
pub use constraint::{Constraint, ConstraintSet};
pub use countermodel::{lemma2_chain, theorem2_prefix, verify_countermodel, ChasePrefix};
pub use decision::{constant_attributes, implies_general, ImplicationAnswer};
pub use derivation::{apply_rule, check_proof, saturate, ProofCheck, ProofTree, RuleId, Saturation};
pub use error::{Error, ParseError, Result};
pub use parse::{parse_constraint, parse_constraint_file, print_constraint_file};
pub use relation::{Relation, Tuple, Value};
pub use semantics::{satisfies, satisfies_all, SatisfactionReport, Verdict};
pub use separation::{sigma_n, SigmaN};
