use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use iakr_core::countermodel::theorem2_prefix;
use iakr_core::derivation::{saturate_with_cap, DEFAULT_SCHEMA_CAP};
use iakr_core::separation::{
    bounded_search, counting_chain, kary_demo, lemma3_model, lemma4_model, lemma5_models,
    lemma6_models, search_estimate, sigma_n,
};
use iakr_core::{
    check_proof, implies_general, parse_constraint, parse_constraint_file, print_constraint_file,
    satisfies_all, verify_countermodel, Constraint, ConstraintSet, Relation, Schema,
};

/// Keys and unary independence atoms: satisfaction, implication, proofs
/// and countermodels.
#[derive(Parser)]
#[command(name = "iakr", version)]
struct Cli {
    /// Print the structured result as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for compatibility; nothing here is randomized.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a CSV relation against a constraint file.
    Check {
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Decide whether the constraints imply a query.
    Imply {
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        /// Attach a checked proof or countermodel.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Saturate the constraints under the inference rules and dump proofs.
    Derive {
        #[arg(long)]
        constraints: PathBuf,
        /// Only report this constraint.
        #[arg(long)]
        query: Option<String>,
        #[arg(long, env = "IAKR_SCHEMA_CAP", default_value_t = DEFAULT_SCHEMA_CAP)]
        schema_cap: usize,
    },
    /// Build a chase prefix refuting a non-implied query.
    Countermodel {
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long)]
        query: String,
        /// Repair rounds; defaults to three per scheduled atom.
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Reproduce the constructions around the cyclic family Σ_n.
    Paper(PaperArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    General,
    FiniteBounded,
}

#[derive(Args)]
struct Bounds {
    /// Largest relation tried by bounded search.
    #[arg(long, default_value_t = 3)]
    max_tuples: usize,
    /// Values per column tried by bounded search.
    #[arg(long, default_value_t = 3)]
    max_values: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).multiple(false)))]
struct PaperArgs {
    /// Construction to run (1 to 6).
    #[arg(long, group = "what", value_parser = clap::value_parser!(u8).range(1..=6))]
    lemma: Option<u8>,
    /// Print Σ_N as a constraint file.
    #[arg(long, group = "what", value_name = "N")]
    sigma_n: Option<usize>,
    /// Verify every single-removal countermodel for Σ_N.
    #[arg(long, group = "what", value_name = "N")]
    kary_demo: Option<usize>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Target key attributes, space separated.
    #[arg(long)]
    d: Option<String>,
    /// Pair index for the atom constructions.
    #[arg(long)]
    i: Option<usize>,
    /// Chain depth for construction 2.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Relation to run the counting argument on (construction 1).
    #[arg(long)]
    data: Option<PathBuf>,
}

struct Outcome {
    json: Json,
    text: String,
    summary: String,
    code: u8,
}

impl Outcome {
    fn ok(json: Json, text: String, summary: String) -> Self {
        Outcome {
            json,
            text,
            summary,
            code: 0,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_constraints(path: &Path) -> Result<(Arc<Schema>, ConstraintSet)> {
    let (schema, sigma) =
        parse_constraint_file(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok((Arc::new(schema), sigma))
}

fn query(text: &str, schema: &Schema) -> Result<Constraint> {
    parse_constraint(text, schema).with_context(|| format!("parsing query {text:?}"))
}

fn relation_json(r: &Relation) -> Json {
    json!({ "header": r.schema().attributes(), "rows": r.tuples() })
}

fn int_relation(schema: &Arc<Schema>, rows: &[Vec<u64>]) -> Result<Relation> {
    Ok(Relation::from_ints(schema.clone(), rows)?)
}

fn check(constraints: &Path, data: &Path) -> Result<Outcome> {
    let (schema, sigma) = load_constraints(constraints)?;
    let r = Relation::from_csv(schema.clone(), &read(data)?)
        .with_context(|| format!("loading {}", data.display()))?;
    let report = satisfies_all(&r, &sigma)?;
    let mut text = String::new();
    for e in &report.entries {
        let c = e.constraint.display(&schema);
        match e.verdict.witness() {
            None => text.push_str(&format!("holds     {c}\n")),
            Some(w) => text.push_str(&format!(
                "violated  {c}  t = ({})  t' = ({})\n",
                join(&w.t),
                join(&w.t_prime)
            )),
        }
    }
    let bad = report.violations().count();
    Ok(Outcome {
        json: json!({ "tuples": r.len(), "all_hold": bad == 0, "constraints": report.to_json(&schema) }),
        text,
        summary: format!("{} constraints, {bad} violated, {} tuples", report.entries.len(), r.len()),
        code: u8::from(bad > 0),
    })
}

fn join(t: &[iakr_core::Value]) -> String {
    t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

const CERTIFY_SEARCH_LIMIT: f64 = 1.0e7;

/// A small finite countermodel satisfying all of `sigma`, when one exists
/// within the default bounds.
fn small_countermodel(
    sigma: &ConstraintSet,
    phi: &Constraint,
    schema: &Arc<Schema>,
    bounds: &Bounds,
) -> Result<Option<Relation>> {
    if search_estimate(schema.len(), bounds.max_tuples, bounds.max_values) > CERTIFY_SEARCH_LIMIT {
        return Ok(None);
    }
    let found = bounded_search(sigma, phi, schema.len(), bounds.max_tuples, bounds.max_values)?;
    found.map(|rows| int_relation(schema, &rows)).transpose()
}

fn imply(path: &Path, q: &str, mode: Mode, certify: bool, bounds: &Bounds) -> Result<Outcome> {
    let (schema, sigma) = load_constraints(path)?;
    let phi = query(q, &schema)?;
    let shown = phi.display(&schema).to_string();
    if let Mode::FiniteBounded = mode {
        let found = bounded_search(&sigma, &phi, schema.len(), bounds.max_tuples, bounds.max_values)?;
        return Ok(match found {
            Some(rows) => {
                let r = int_relation(&schema, &rows)?;
                if !verify_countermodel(&r, &sigma, &phi)?.verified() {
                    bail!(iakr_core::Error::Invariant("bounded search returned a non-countermodel".into()));
                }
                Outcome::ok(
                    json!({ "query": shown, "mode": "finite-bounded", "verdict": "not-finitely-implied",
                            "countermodel": relation_json(&r) }),
                    format!("not finitely implied: {shown}\n{}", r.to_csv()),
                    format!("finite countermodel with {} tuples", r.len()),
                )
            }
            None => Outcome::ok(
                json!({ "query": shown, "mode": "finite-bounded", "verdict": "inconclusive",
                        "bounds": { "max_tuples": bounds.max_tuples, "max_values": bounds.max_values },
                        "note": "no counterexample within bounds; this does not establish implication" }),
                format!(
                    "inconclusive: no counterexample within {} tuples and {} values per column\n",
                    bounds.max_tuples, bounds.max_values
                ),
                "no counterexample within bounds".into(),
            ),
        });
    }
    let ans = implies_general(&sigma, &phi, &schema)?;
    let mut payload = ans.to_json(&schema);
    let verdict = if ans.implied() { "implied" } else { "not implied" };
    let mut text = format!("{verdict}: {shown}\n");
    if certify {
        let cert = if let Some(p) = ans.proof() {
            let verdict = check_proof(p, &sigma, &schema);
            if !verdict.accepted() {
                bail!(iakr_core::Error::Invariant(format!("emitted proof rejected: {verdict:?}")));
            }
            text.push_str(&format!("proof checked: {} steps, rules {:?}\n", p.size(), p.rules()));
            json!({ "kind": "proof", "checked": true })
        } else if let Some(r) = small_countermodel(&sigma, &phi, &schema, bounds)? {
            if !verify_countermodel(&r, &sigma, &phi)?.verified() {
                bail!(iakr_core::Error::Invariant("finite countermodel failed verification".into()));
            }
            text.push_str(&format!("finite countermodel, verified:\n{}", r.to_csv()));
            json!({ "kind": "finite-countermodel", "verified_against": "all constraints",
                    "relation": relation_json(&r) })
        } else {
            let recipe = ans.recipe().expect("not implied has a recipe");
            let prefix = theorem2_prefix(&sigma, &phi, &schema, recipe.atoms)?;
            let r = prefix.relation();
            let mut partial: ConstraintSet = sigma.iter().filter(|c| c.is_key()).copied().collect();
            partial.extend(prefix.snapshots().last().and_then(|s| s.repaired));
            if !verify_countermodel(&r, &partial, &phi)?.verified() {
                bail!(iakr_core::Error::Invariant("chase prefix failed verification".into()));
            }
            text.push_str(&format!(
                "no finite countermodel within bounds; chase prefix of {} tuples after {} rounds \
                 satisfies the keys and the last repaired atom and refutes the query\n{}",
                r.len(),
                prefix.rounds_done(),
                r.to_csv()
            ));
            json!({ "kind": "chase-prefix", "verified_against": print_set(&schema, &partial),
                    "manifest": prefix.manifest(), "relation": relation_json(&r) })
        };
        payload["certificate"] = cert;
    }
    Ok(Outcome::ok(payload, text, format!("{verdict}: {shown}")))
}

fn print_set(schema: &Schema, s: &ConstraintSet) -> Vec<String> {
    s.iter().map(|c| c.display(schema).to_string()).collect()
}

fn derive(path: &Path, q: Option<&str>, cap: usize) -> Result<Outcome> {
    let (schema, sigma) = load_constraints(path)?;
    let sat = saturate_with_cap(&sigma, &schema, cap)?;
    let targets: Vec<Constraint> = match q {
        Some(q) => vec![query(q, &schema)?],
        None => sat.constraints().iter().copied().collect(),
    };
    let mut entries = Vec::new();
    let mut text = String::new();
    for c in &targets {
        let shown = c.display(&schema).to_string();
        match sat.proof(c) {
            Some(p) => {
                if !check_proof(&p, &sigma, &schema).accepted() {
                    bail!(iakr_core::Error::Invariant(format!("proof of {shown} rejected")));
                }
                let how = if sigma.contains(c) { "given" } else { "derived" };
                text.push_str(&format!("{how:8} {shown}  ({} steps)\n", p.size()));
                entries.push(json!({ "constraint": shown, "derivable": true, "proof": p.to_json(&schema) }));
            }
            None => {
                text.push_str(&format!("underivable {shown}\n"));
                entries.push(json!({ "constraint": shown, "derivable": false }));
            }
        }
    }
    Ok(Outcome::ok(
        json!({ "schema": schema.attributes(), "closure_size": sat.len(), "constraints": entries }),
        text,
        format!("closure has {} constraints", sat.len()),
    ))
}

fn countermodel(path: &Path, q: &str, rounds: Option<usize>) -> Result<Outcome> {
    let (schema, sigma) = load_constraints(path)?;
    let phi = query(q, &schema)?;
    let ans = implies_general(&sigma, &phi, &schema)?;
    let Some(recipe) = ans.recipe() else {
        bail!(iakr_core::Error::Precondition(format!(
            "{} is implied; no countermodel exists",
            phi.display(&schema)
        )));
    };
    let prefix = theorem2_prefix(&sigma, &phi, &schema, rounds.unwrap_or(recipe.rounds))?;
    let r = prefix.relation();
    Ok(Outcome::ok(
        json!({ "manifest": prefix.manifest(), "relation": relation_json(&r) }),
        r.to_csv(),
        format!("chase prefix: {} tuples after {} rounds", r.len(), prefix.rounds_done()),
    ))
}

fn paper(a: &PaperArgs) -> Result<Outcome> {
    if let Some(n) = a.sigma_n {
        let s = sigma_n(n)?;
        let up = s.upward_closure().constraints();
        let text = print_constraint_file(s.schema(), s.constraints());
        return Ok(Outcome::ok(
            json!({ "n": n, "constraints": print_set(s.schema(), s.constraints()),
                    "upward_closure_size": up.len(),
                    "gap_atom": s.gap_atom().display(s.schema()).to_string() }),
            text,
            format!("Σ_{n}: {} constraints, upward closure {}", s.constraints().len(), up.len()),
        ));
    }
    if let Some(n) = a.kary_demo {
        let report = kary_demo(n)?;
        let text = format!(
            "n = {}: {} dropped × {} targets, {} countermodels verified, largest {} tuples\n\
             gap atom {}: {}\n{}\n",
            report.n,
            report.dropped,
            report.targets,
            report.pairs_verified,
            report.max_model_size,
            report.gap_atom,
            report.gap_search,
            report.conclusion
        );
        let summary = format!("{} countermodels verified", report.pairs_verified);
        return Ok(Outcome::ok(serde_json::to_value(&report)?, text, summary));
    }
    let lemma = a.lemma.expect("clap enforces one of the group");
    let n = a.n;
    let need_d = || -> Result<iakr_core::AttrSet> {
        let s = sigma_n(n)?;
        let d = a.d.as_deref().context("--d is required for this construction")?;
        Ok(s.schema().parse_attr_set(d)?)
    };
    let need_i = || a.i.context("--i is required for this construction");
    match lemma {
        1 => {
            let s = sigma_n(n)?;
            let data = a.data.as_deref().context("--data is required for construction 1")?;
            let r = Relation::from_csv(s.schema().clone(), &read(data)?)?;
            let chain = counting_chain(&r, &s)?;
            let text = chain
                .b_chain
                .iter()
                .chain(&chain.closing)
                .map(|c| format!("{}: {} ≤ {}\n", c.claim, c.lhs, c.rhs))
                .collect::<String>()
                + "key(A1 B1) holds\n";
            Ok(Outcome::ok(serde_json::to_value(&chain)?, text, "counting chain verified".into()))
        }
        2 => {
            let p = iakr_core::lemma2_chain(a.depth)?;
            let r = p.relation();
            Ok(Outcome::ok(
                json!({ "manifest": p.manifest(), "relation": relation_json(&r) }),
                r.to_csv(),
                format!("depth {}: {} tuples", a.depth, r.len()),
            ))
        }
        3 | 4 => {
            let d = need_d()?;
            let s = sigma_n(n)?;
            let schedule = s.schedule(d)?.to_json(s.schema());
            let r = if lemma == 3 { lemma3_model(n, d)? } else { lemma4_model(n, d)? };
            let summary = format!("{} tuples; schedule {}", r.len(), schedule);
            Ok(Outcome::ok(
                json!({ "schedule": schedule, "relation": relation_json(&r) }),
                r.to_csv(),
                summary,
            ))
        }
        5 => {
            let (r, r_prime) = lemma5_models(n, need_i()?)?;
            Ok(Outcome::ok(
                json!({ "r": relation_json(&r), "r_prime": relation_json(&r_prime) }),
                format!("r\n{}\nr'\n{}", r.to_csv(), r_prime.to_csv()),
                "both models satisfy Σ_n without its closing key".into(),
            ))
        }
        6 => {
            let m = lemma6_models(n, need_i()?)?;
            let all = [Some(&m.r0), Some(&m.r1), m.r2.as_ref(), m.r3.as_ref()];
            let mut text = String::new();
            for (k, r) in all.iter().enumerate() {
                match r {
                    Some(r) => text.push_str(&format!("r{k}\n{}\n", r.to_csv())),
                    None => text.push_str(&format!("r{k}: undefined for this index\n\n")),
                }
            }
            Ok(Outcome::ok(
                json!({ "r0": relation_json(&m.r0), "r1": relation_json(&m.r1),
                        "r2": m.r2.as_ref().map(relation_json), "r3": m.r3.as_ref().map(relation_json) }),
                text,
                "models satisfy Σ_n without its first atom".into(),
            ))
        }
        _ => unreachable!("clap restricts the range"),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { constraints, data } => check(constraints, data),
        Command::Imply {
            constraints,
            query,
            mode,
            certify,
            bounds,
        } => imply(constraints, query, *mode, *certify, bounds),
        Command::Derive {
            constraints,
            query,
            schema_cap,
        } => derive(constraints, query.as_deref(), *schema_cap),
        Command::Countermodel {
            constraints,
            query,
            rounds,
        } => countermodel(constraints, query, *rounds),
        Command::Paper(a) => paper(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let invariant = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<iakr_core::Error>(), Some(iakr_core::Error::Invariant(_))));
            ExitCode::from(if invariant { 3 } else { 2 })
        }
    }
}
