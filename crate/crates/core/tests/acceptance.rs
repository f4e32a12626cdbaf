//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails. The checks below use their own satisfaction
//! oracles, written straight from the definitions, rather than the library's
//! checkers.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use iakr_core::countermodel::RowsView;
use iakr_core::separation::{
    bounded_search, counting_chain, enumerate_models, lemma3_model, theorem3_countermodel, SigmaN,
};
use iakr_core::{
    check_proof, implies_general, lemma2_chain, parse_constraint_file, print_constraint_file, saturate,
    semantics, sigma_n, theorem2_prefix, verify_countermodel, AttrSet, Constraint, ConstraintSet, Relation,
    Schema,
};
use rand::seq::IndexedRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// Oracles on small integer relations, straight from the definitions.

fn agree(t: &[u64], u: &[u64], x: AttrSet) -> bool {
    x.iter().all(|i| t[i] == u[i])
}

fn naive_key(rows: &[Vec<u64>], x: AttrSet) -> bool {
    rows.iter()
        .all(|t| rows.iter().all(|u| t == u || !agree(t, u, x)))
}

fn naive_ind(rows: &[Vec<u64>], x: AttrSet, y: AttrSet) -> bool {
    rows.iter().all(|t| {
        rows.iter()
            .all(|u| rows.iter().any(|v| agree(v, t, x) && agree(v, u, y)))
    })
}

fn naive_holds(rows: &[Vec<u64>], c: &Constraint) -> bool {
    match *c {
        Constraint::Key(x) => naive_key(rows, x),
        Constraint::Ind(x, y) => naive_ind(rows, x, y),
    }
}

// Oracles for large relations: sort projections of distinct rows.

fn distinct_rows(rows: impl Iterator<Item = Vec<u64>>) -> Vec<Vec<u64>> {
    let mut v: Vec<Vec<u64>> = rows.collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn projection(rows: &[Vec<u64>], x: AttrSet) -> Vec<Vec<u64>> {
    let mut p: Vec<Vec<u64>> = rows.iter().map(|t| x.iter().map(|i| t[i]).collect()).collect();
    p.sort_unstable();
    p
}

/// `k(x)` holds on distinct rows iff no projection repeats.
fn sorted_key(rows: &[Vec<u64>], x: AttrSet) -> bool {
    projection(rows, x).windows(2).all(|w| w[0] != w[1])
}

fn count_distinct(rows: &[Vec<u64>], x: AttrSet) -> usize {
    let mut p = projection(rows, x);
    p.dedup();
    p.len()
}

/// Disjoint `x ⊥ y` holds iff `|r(xy)| = |r(x)|·|r(y)|`.
fn counted_ind(rows: &[Vec<u64>], x: AttrSet, y: AttrSet) -> bool {
    assert!(x.intersection(y).is_empty());
    count_distinct(rows, x.union(y)) == count_distinct(rows, x) * count_distinct(rows, y)
}

fn sorted_holds(rows: &[Vec<u64>], c: &Constraint) -> bool {
    match *c {
        Constraint::Key(x) => sorted_key(rows, x),
        Constraint::Ind(x, y) if x.intersection(y).is_empty() => counted_ind(rows, x, y),
        Constraint::Ind(x, y) => naive_ind(rows, x, y),
    }
}

fn int_rows(r: &Relation) -> Vec<Vec<u64>> {
    r.tuples()
        .iter()
        .map(|t| t.iter().map(|v| v.as_int().expect("integer value")).collect())
        .collect()
}

fn view_rows(v: RowsView<'_>) -> Vec<Vec<u64>> {
    v.rows().map(|r| r.to_vec()).collect()
}

fn letters(n: usize) -> Arc<Schema> {
    let names = ["A", "B", "C", "D", "E", "F"];
    Arc::new(Schema::new("R", names[..n].iter().copied()).unwrap())
}

fn unary(x: usize, y: usize) -> Constraint {
    Constraint::Ind(AttrSet::singleton(x), AttrSet::singleton(y))
}

/// All keys and all unary atoms `x ⊥ y` with `x ≤ y` over `width` attributes.
fn key_and_unary_pool(width: usize) -> Vec<Constraint> {
    let keys = AttrSet::full(width).subsets().map(Constraint::Key);
    let atoms = (0..width).flat_map(|x| (x..width).map(move |y| unary(x, y)));
    keys.chain(atoms).collect()
}

/// Every `Σ` of at most three constraints from the three-attribute pool,
/// in lexicographic order of pool indices.
fn small_sigmas() -> Vec<ConstraintSet> {
    let pool = key_and_unary_pool(3);
    let mut out = vec![ConstraintSet::new()];
    for i in 0..pool.len() {
        out.push([pool[i]].into_iter().collect());
        for j in i + 1..pool.len() {
            out.push([pool[i], pool[j]].into_iter().collect());
            for k in j + 1..pool.len() {
                out.push([pool[i], pool[j], pool[k]].into_iter().collect());
            }
        }
    }
    out
}

fn models(width: usize, tuples: usize, values: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    enumerate_models(width, tuples, values, |r| out.push(r.to_vec())).unwrap();
    out
}

fn oracle_equivalence() -> Outcome {
    let schema = letters(3);
    let pool = key_and_unary_pool(3);
    let sigmas = small_sigmas();
    let mut pairs = 0;
    for sigma in &sigmas {
        let sat = saturate(sigma, &schema).map_err(|e| e.to_string())?;
        for phi in &pool {
            let ans = implies_general(sigma, phi, &schema).map_err(|e| e.to_string())?;
            ensure(ans.implied() == sat.derives(phi), || {
                format!(
                    "Σ = {}, φ = {}: decision says {}, saturation says {}",
                    print_set(&schema, sigma),
                    phi.display(&schema),
                    ans.implied(),
                    sat.derives(phi)
                )
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{} constraint sets × {} targets = {pairs} pairs agree", sigmas.len(), pool.len()))
}

fn print_set(schema: &Schema, s: &ConstraintSet) -> String {
    let v: Vec<String> = s.iter().map(|c| c.display(schema).to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn random_set(rng: &mut impl Rng, width: usize) -> AttrSet {
    AttrSet::from_bits(rng.random_range(0..1u64 << width))
}

fn random_constraint(rng: &mut impl Rng, width: usize) -> Constraint {
    if rng.random_bool(0.4) {
        Constraint::Key(random_set(rng, width))
    } else {
        let x = AttrSet::from_bits(rng.random_range(1..1u64 << width));
        let y = AttrSet::from_bits(rng.random_range(1..1u64 << width));
        Constraint::Ind(x, y)
    }
}

fn soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let universe: Vec<Vec<Vec<Vec<u64>>>> = (0..=4).map(|w| if w == 0 { vec![] } else { models(w, 3, 3) }).collect();
    let (mut checks, mut satisfying) = (0usize, 0usize);
    for _ in 0..200 {
        let width = rng.random_range(1..=4);
        let size = rng.random_range(1..=4);
        let sigma: ConstraintSet = (0..size).map(|_| random_constraint(&mut rng, width)).collect();
        let schema = letters(width);
        let sat = saturate(&sigma, &schema).map_err(|e| e.to_string())?;
        let derived: Vec<Constraint> = sat.derived().copied().collect();
        for r in &universe[width] {
            if !sigma.iter().all(|c| naive_holds(r, c)) {
                continue;
            }
            satisfying += 1;
            for phi in &derived {
                ensure(naive_holds(r, phi), || {
                    format!(
                        "Σ = {} derives {} but {:?} violates it",
                        print_set(&schema, &sigma),
                        phi.display(&schema),
                        r
                    )
                })?;
                checks += 1;
            }
        }
    }
    let sizes: Vec<usize> = universe[1..].iter().map(Vec::len).collect();
    Ok(format!(
        "200 sampled Σ over {sizes:?} canonical relations per width, {satisfying} satisfying, \
         {checks} derived-constraint checks, 0 violations"
    ))
}

fn separation_chain() -> Outcome {
    let s = sigma_n(2).map_err(|e| e.to_string())?;
    let keys: Vec<Constraint> = s.constraints().iter().filter(|c| c.is_key()).copied().collect();
    let gap = s.gap_atom();
    let mut sizes = Vec::new();
    for d in 1..=6 {
        let chain = lemma2_chain(d).map_err(|e| e.to_string())?;
        let rows = distinct_rows(chain.table().rows().map(|r| r.to_vec()));
        ensure(rows.len() == chain.len(), || format!("depth {d}: duplicate rows"))?;
        for k in &keys {
            ensure(sorted_holds(&rows, k), || format!("depth {d}: {} violated", k.display(s.schema())))?;
        }
        let scheduled = if d % 2 == 1 { unary(0, 1) } else { unary(2, 3) };
        ensure(sorted_holds(&rows, &scheduled), || {
            format!("depth {d}: {} violated", scheduled.display(s.schema()))
        })?;
        ensure(!sorted_holds(&rows, &gap), || format!("depth {d}: key(A1 B1) holds"))?;
        sizes.push(rows.len());
    }
    let found = bounded_search(s.constraints(), &gap, 4, 3, 4).map_err(|e| e.to_string())?;
    ensure(found.is_none(), || format!("finite countermodel found: {found:?}"))?;
    Ok(format!("stage sizes {sizes:?}; no model with ≤3 tuples, ≤4 values violates key(A1 B1)"))
}

fn counting_verifier() -> Outcome {
    let s = sigma_n(2).map_err(|e| e.to_string())?;
    let gap = AttrSet::from_positions([0, 1]);
    let mut found = 0;
    for r in models(4, 3, 3) {
        if !s.constraints().iter().all(|c| naive_holds(&r, c)) {
            continue;
        }
        let rel = Relation::from_ints(s.schema().clone(), &r).map_err(|e| e.to_string())?;
        let chain = counting_chain(&rel, &s).map_err(|e| format!("{r:?}: {e}"))?;
        let direct = semantics::satisfies_key(&rel, gap).map_err(|e| e.to_string())?.holds();
        ensure(chain.key_a1b1 && direct && naive_key(&r, gap), || {
            format!("{r:?}: chain {} direct {direct}", chain.key_a1b1)
        })?;
        found += 1;
    }
    ensure(found > 0, || "no models enumerated".into())?;
    Ok(format!("{found} canonical models of Σ_2, every chain concludes key(A1 B1)"))
}

fn lemma3_reproduction() -> Outcome {
    let n = 7;
    let s = sigma_n(n).map_err(|e| e.to_string())?;
    let pos = |name: &str| s.schema().position(name).unwrap();
    let d = AttrSet::from_positions(["A1", "B1", "A3", "B3", "A5", "B5", "A7"].map(pos));
    let r = lemma3_model(n, d).map_err(|e| e.to_string())?;
    let rows = distinct_rows(int_rows(&r).into_iter());
    ensure(rows.len() == 720 && r.len() == 720, || format!("|r| = {}", r.len()))?;
    let a: Vec<usize> = (1..=n).map(|i| count_distinct(&rows, AttrSet::singleton(pos(&format!("A{i}"))))).collect();
    let b: Vec<usize> = (1..=n).map(|i| count_distinct(&rows, AttrSet::singleton(pos(&format!("B{i}"))))).collect();
    ensure(a == [2, 3, 3, 4, 4, 5, 5], || format!("a = {a:?}"))?;
    ensure(b == [240, 240, 180, 180, 144, 144, 144], || format!("b = {b:?}"))?;
    let dropped = Constraint::Key(AttrSet::from_positions([pos("B7"), pos("A1")]));
    let rest = s.without(&dropped).map_err(|e| e.to_string())?;
    for c in rest.iter() {
        ensure(sorted_holds(&rows, c), || format!("{} violated", c.display(s.schema())))?;
    }
    ensure(!sorted_key(&rows, d), || "key(D) holds".into())?;
    let check = verify_countermodel(&r, &rest, &Constraint::Key(d)).map_err(|e| e.to_string())?;
    ensure(check.verified(), || "library verification rejects the model".into())?;
    Ok(format!("|r| = 720, a = {a:?}, b = {b:?}"))
}

/// Keys and unary atoms outside `C↑(Σ_n)`, from the closure's definition.
fn outside_closure(s: &SigmaN) -> Vec<Constraint> {
    let width = s.schema().len();
    let keys: Vec<AttrSet> = s.constraints().keys().collect();
    key_and_unary_pool(width)
        .into_iter()
        .filter(|c| match *c {
            Constraint::Key(d) => !keys.iter().any(|k| k.is_subset(d)),
            Constraint::Ind(x, y) => {
                !s.constraints().iter().any(|m| *m == Constraint::Ind(x, y) || *m == Constraint::Ind(y, x))
            }
        })
        .collect()
}

fn theorem3_exhaustive() -> Outcome {
    let mut summary = Vec::new();
    for n in [2, 3] {
        let s = sigma_n(n).map_err(|e| e.to_string())?;
        let targets = outside_closure(&s);
        let mut count = 0;
        for psi in s.constraints().iter() {
            let rest = s.without(psi).map_err(|e| e.to_string())?;
            for phi in &targets {
                let what = || format!("n = {n}, ψ = {}, φ = {}", psi.display(s.schema()), phi.display(s.schema()));
                let cm = theorem3_countermodel(&s, psi, phi).map_err(|e| format!("{}: {e}", what()))?;
                let check = verify_countermodel(&cm.relation, &rest, phi).map_err(|e| e.to_string())?;
                ensure(check.verified(), || format!("{}: verification failed", what()))?;
                let rows = distinct_rows(int_rows(&cm.relation).into_iter());
                ensure(rest.iter().all(|c| sorted_holds(&rows, c)) && !sorted_holds(&rows, phi), || {
                    format!("{}: oracle disagrees", what())
                })?;
                count += 1;
            }
        }
        summary.push(format!("n = {n}: {count} pairs"));
    }
    Ok(summary.join(", "))
}

fn theorem2_recipes() -> Outcome {
    let schema = letters(3);
    let pool = key_and_unary_pool(3);
    let mut open = Vec::new();
    for sigma in small_sigmas() {
        for phi in &pool {
            if !implies_general(&sigma, phi, &schema).map_err(|e| e.to_string())?.implied() {
                open.push((sigma.clone(), *phi));
            }
        }
    }
    let picks: Vec<usize> = (0..50).map(|i| i * open.len() / 50).collect();
    let mut largest = 0;
    for &i in &picks {
        let (sigma, phi) = &open[i];
        let what = || format!("Σ = {}, φ = {}", print_set(&schema, sigma), phi.display(&schema));
        let atoms: Vec<Constraint> = sigma.iter().filter(|c| c.is_unary_ind()).copied().collect();
        let rounds = 3 * atoms.len();
        let p = theorem2_prefix(sigma, phi, &schema, rounds).map_err(|e| format!("{}: {e}", what()))?;
        ensure(p.rounds_done() == rounds, || format!("{}: {} rounds", what(), p.rounds_done()))?;
        let sat = saturate(sigma, &schema).map_err(|e| e.to_string())?;
        let constants: Vec<usize> = (0..3).filter(|&a| sat.derives(&unary(a, a))).collect();
        for (k, snap) in p.snapshots().iter().enumerate() {
            let rows = view_rows(p.stage_rows(k));
            let distinct = distinct_rows(rows.iter().cloned());
            for key in sigma.iter().filter(|c| c.is_key()) {
                ensure(sorted_holds(&distinct, key), || format!("{}: stage {k} violates a key", what()))?;
            }
            ensure(rows.iter().all(|t| constants.iter().all(|&a| t[a] == 0)), || {
                format!("{}: stage {k} has a non-zero constant", what())
            })?;
            ensure(!sorted_holds(&distinct, phi), || format!("{}: stage {k} satisfies φ", what()))?;
            if k > 0 && !atoms.is_empty() {
                let due = atoms[(k - 1) % atoms.len()];
                ensure(snap.repaired == Some(due), || format!("{}: round {k} repairs the wrong atom", what()))?;
                ensure(sorted_holds(&distinct, &due), || format!("{}: round {k} leaves its atom violated", what()))?;
            }
        }
        largest = largest.max(p.len());
    }
    Ok(format!(
        "50 evenly spaced of {} non-implied pairs, largest prefix {largest} rows",
        open.len()
    ))
}

fn identifier(rng: &mut impl Rng, i: usize) -> String {
    const HEAD: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    const TAIL: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789_";
    let mut s = String::new();
    s.push(*HEAD.choose(rng).unwrap() as char);
    for _ in 0..rng.random_range(0..6) {
        s.push(*TAIL.choose(rng).unwrap() as char);
    }
    format!("{s}{i}")
}

fn certificates() -> Outcome {
    let mut proofs = 0;
    let schema = letters(3);
    let pool = key_and_unary_pool(3);
    let mut check = |p: &iakr_core::ProofTree, sigma: &ConstraintSet, schema: &Schema| -> Result<(), String> {
        let v = check_proof(p, sigma, schema);
        proofs += 1;
        ensure(v.accepted(), || format!("proof of {} rejected: {v:?}", p.conclusion.display(schema)))
    };
    for sigma in small_sigmas() {
        let sat = saturate(&sigma, &schema).map_err(|e| e.to_string())?;
        for c in sat.derived() {
            check(&sat.proof(c).unwrap(), &sigma, &schema)?;
        }
        for phi in &pool {
            if let Some(p) = implies_general(&sigma, phi, &schema).map_err(|e| e.to_string())?.proof() {
                check(p, &sigma, &schema)?;
            }
        }
    }
    for n in [2, 3] {
        let s = sigma_n(n).map_err(|e| e.to_string())?;
        let sat = saturate(s.constraints(), s.schema()).map_err(|e| e.to_string())?;
        for c in sat.derived() {
            check(&sat.proof(c).unwrap(), s.constraints(), s.schema())?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for _ in 0..100 {
        let width = rng.random_range(1..=6);
        let names: Vec<String> = (0..width).map(|i| identifier(&mut rng, i)).collect();
        let schema = Schema::new(identifier(&mut rng, 0), names).map_err(|e| e.to_string())?;
        let size = rng.random_range(0..=8);
        let set: ConstraintSet = (0..size).map(|_| random_constraint(&mut rng, width)).collect();
        let text = print_constraint_file(&schema, &set);
        let (schema2, set2) = parse_constraint_file(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(schema2 == schema && set2 == set, || format!("round trip changed\n{text}"))?;
        ensure(print_constraint_file(&schema2, &set2) == text, || format!("reprint differs\n{text}"))?;
    }
    Ok(format!("{proofs} proofs accepted, 100 files round-trip"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("decision agrees with saturation", Some(60), oracle_equivalence),
        ("derived constraints hold on small models", Some(300), soundness),
        ("chain stages refute key(A1 B1), no small finite countermodel", Some(60), separation_chain),
        ("counting argument on finite models of Σ_2", None, counting_verifier),
        ("seven-pair cardinality model", Some(5), lemma3_reproduction),
        ("countermodels for every dropped constraint", Some(300), theorem3_exhaustive),
        ("chase prefixes for non-implied pairs", None, theorem2_recipes),
        ("proof certificates and parser round trip", None, certificates),
    ];
    let quiet: fn(&panic::PanicHookInfo<'_>) = |_| {};
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let hook = panic::take_hook();
        panic::set_hook(Box::new(quiet));
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        panic::set_hook(hook);
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > Duration::from_secs(*l) => {
                Err(format!("took {:.1} s, limit {l} s", elapsed.as_secs_f64()))
            }
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.clone())
            }
        };
        println!("[{tag}] criterion {}: {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
