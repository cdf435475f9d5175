//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use exprtrie::bench::{
    corpus_for, run_suite, run_suite_on, BenchParams, HashBaseline, Impl, OrdBaseline, Outcome,
    Rng, Suite,
};
use exprtrie::expr::alpha_eq;
use exprtrie::exprmap::ExprListMap;
use exprtrie::matching::{canon_pat_keys, match_expr, PatExpr};
use exprtrie::oracle::{oracle_match_all, AssocMap, NaivePatStore};
use exprtrie::selftest::{instantiate, random_expr, random_pattern, rename_binders, PatternVocab};
use exprtrie::triemap::Shape;
use exprtrie::{AlphaExpr, Expr, ExprMap, PatMap, TrieMap, VarName};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn name(s: &str) -> VarName {
    VarName::new(s).unwrap()
}

fn names(ns: &[&str]) -> Vec<VarName> {
    ns.iter().map(|n| name(n)).collect()
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Verdict {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{detail}, {:.1}s", took.as_secs_f64()))
    } else {
        Err(format!(
            "{detail}, but took {:.1}s (limit {}s)",
            took.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn tf(tag: u64, old: Option<i64>) -> Option<i64> {
    match tag % 4 {
        0 => None,
        1 => Some(1000),
        2 => old,
        _ => old.map(|v| v + 1),
    }
}

fn key_pool(rng: &mut Rng, n: usize, max_size: usize) -> Vec<Expr> {
    let free = names(&["p", "q", "r"]);
    let binders = names(&["x", "y", "z"]);
    (0..n)
        .map(|_| random_expr(rng, max_size, &free, &binders))
        .collect()
}

fn laws() -> Verdict {
    let start = Instant::now();
    let mut rng = Rng::new(1);
    let mut shapes = BTreeMap::new();
    let trials = 10_000;
    for t in 0..trials {
        let pool = key_pool(&mut rng, 6, 10);
        let n_entries = rng.below(5) as usize;
        let pick = |rng: &mut Rng| {
            let i = rng.below(6) as usize;
            AlphaExpr::closed(rename_binders(rng, &pool[i]))
        };
        let k = pick(&mut rng);
        let k2 = pick(&mut rng);
        let tag = rng.below(4);
        match t % 2 {
            0 => {
                let mut m: ExprMap<i64> = ExprMap::new();
                for i in 0..n_entries {
                    let key = pick(&mut rng);
                    m.insert_in_place(&key, i as i64);
                }
                *shapes.entry(format!("{:?}", m.shape())).or_insert(0) += 1;
                check(ExprMap::<i64>::new().lookup(&k).is_none(), || {
                    format!("lookup in empty found {:?}", k)
                })?;
                let before = m.lookup(&k).copied();
                let after = m.alter(&k, &mut |o| tf(tag, o));
                check(after.lookup(&k).copied() == tf(tag, before), || {
                    format!("alter/lookup same key {:?} tf#{tag}", k)
                })?;
                if !alpha_eq(&k, &k2) {
                    check(after.lookup(&k2) == m.lookup(&k2), || {
                        format!("alter {:?} disturbed {:?}", k, k2)
                    })?;
                }
            }
            _ => {
                let list = |rng: &mut Rng| -> Vec<AlphaExpr> {
                    (0..rng.below(3)).map(|_| pick(rng)).collect()
                };
                let mut m: ExprListMap<i64> = ExprListMap::empty();
                for i in 0..n_entries {
                    let key = list(&mut rng);
                    m.insert_in_place(&key, i as i64);
                }
                let lk = list(&mut rng);
                let lk2 = list(&mut rng);
                check(ExprListMap::<i64>::empty().lookup(&lk).is_none(), || {
                    "list lookup in empty".into()
                })?;
                let before = m.lookup(&lk).copied();
                let after = m.alter(&lk, &mut |o| tf(tag, o));
                check(after.lookup(&lk).copied() == tf(tag, before), || {
                    "list alter/lookup".into()
                })?;
                let same =
                    lk.len() == lk2.len() && lk.iter().zip(&lk2).all(|(a, b)| alpha_eq(a, b));
                if !same {
                    check(after.lookup(&lk2) == m.lookup(&lk2), || {
                        "list alter disturbed other key".into()
                    })?;
                }
            }
        }
    }
    within(
        Duration::from_secs(30),
        start,
        format!("{trials} trials, exact-map shapes {shapes:?}"),
    )
}

fn exact_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = Rng::new(2);
    let mut lookups = 0;
    for seq in 0..1000 {
        let pool = key_pool(&mut rng, 12, 15);
        let mut tm: ExprMap<i64> = ExprMap::new();
        let mut om: AssocMap<i64> = AssocMap::new();
        for op in 0..100 {
            let i = rng.below(12) as usize;
            let k = AlphaExpr::closed(rename_binders(&mut rng, &pool[i]));
            match rng.below(3) {
                0 => {
                    let tag = rng.below(4);
                    tm.alter_in_place(&k, &mut |o| tf(tag, o));
                    om.alter(&k, |o| tf(tag, o));
                }
                1 => {
                    tm.delete_in_place(&k);
                    om.delete(&k);
                }
                _ => {
                    lookups += 1;
                    check(tm.lookup(&k) == om.lookup(&k), || {
                        format!("sequence {seq} op {op}: lookup {:?}", k)
                    })?;
                }
            }
        }
        check(tm.size() == om.len(), || {
            format!("sequence {seq}: sizes differ")
        })?;
        for (k, v) in om.entries() {
            check(tm.lookup(k) == Some(v), || {
                format!("sequence {seq}: final contents differ")
            })?;
        }
    }
    within(
        Duration::from_secs(60),
        start,
        format!("1000 sequences x 100 ops, {lookups} lookups compared"),
    )
}

fn alpha_invariance() -> Verdict {
    let mut rng = Rng::new(3);
    let mut hits = 0;
    for i in 0..1000 {
        let pool = key_pool(&mut rng, 20, 15);
        let mut m: ExprMap<i64> = ExprMap::new();
        for (j, k) in pool.iter().enumerate() {
            m.insert_closed_in_place(k, j as i64);
        }
        let key = &pool[rng.below(20) as usize];
        let renamed = rename_binders(&mut rng, key);
        let a = m.lookup_closed(key);
        let b = m.lookup_closed(&renamed);
        check(a == b && a.is_some(), || {
            format!("pair {i}: {key} vs {renamed}")
        })?;
        hits += 1;
    }
    Ok(format!("{hits} renamed keys found with identical results"))
}

fn matching_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = Rng::new(4);
    let vocab = PatternVocab::default();
    let mut pm = PatMap::new();
    let mut store = NaivePatStore::new();
    let mut pats = Vec::new();
    for i in 0..500u32 {
        let (vs, body) = random_pattern(&mut rng, &vocab, 12);
        pm.insert_in_place(&vs, &body, i);
        store.insert(&vs, &body, i);
        pats.push((vs, body));
    }
    let mut nonempty = 0;
    let mut total = 0;
    for t in 0..500 {
        // Half the targets are instances of stored patterns, so that
        // matches (and repeated-variable checks) actually happen.
        let target = if t % 2 == 0 {
            let (vs, b) = &pats[rng.below(pats.len() as u64) as usize];
            instantiate(&mut rng, &vocab, vs, b)
        } else {
            random_expr(&mut rng, 12, &vocab.constants, &vocab.binders)
        };
        let mut got: Vec<_> = pm
            .lookup(&target)
            .into_iter()
            .map(|(s, v)| (s, *v))
            .collect();
        got.sort();
        let want = oracle_match_all(&store, &target);
        check(got == want, || {
            format!("target {target}: trie {got:?} oracle {want:?}")
        })?;
        nonempty += usize::from(!got.is_empty());
        total += got.len();
    }
    within(
        Duration::from_secs(120),
        start,
        format!(
            "{} distinct patterns, 500 targets, {nonempty} with matches, {total} matches",
            store.len()
        ),
    )
}

fn worked_examples() -> Verdict {
    let keys = |pk: &exprtrie::PatKeys| -> Vec<(String, u32)> {
        pk.iter().map(|(k, v)| (k.to_string(), v.get())).collect()
    };
    let f = |args: Vec<Expr>| Expr::apps(Expr::var("f"), args);
    let v = Expr::var;

    let t1 = canon_pat_keys(&names(&["a", "b"]), &f(vec![v("a"), v("b"), v("a")]));
    check(keys(&t1) == vec![("a".into(), 1), ("b".into(), 2)], || {
        format!("canon f a b a: {t1:?}")
    })?;
    let t2 = canon_pat_keys(&names(&["x", "g"]), &f(vec![Expr::app(v("g"), v("x"))]));
    check(keys(&t2) == vec![("g".into(), 1), ("x".into(), 2)], || {
        format!("canon f (g x): {t2:?}")
    })?;

    let gv = Expr::app(v("g"), v("v"));
    let pat = PatExpr::new(&names(&["x"]), f(vec![v("x"), v("x")]));
    let yes = match_expr(&pat, &AlphaExpr::closed(f(vec![gv.clone(), gv.clone()]))).run();
    let no = match_expr(&pat, &AlphaExpr::closed(f(vec![gv.clone(), v("v")]))).run();
    check(yes.len() == 1 && no.is_empty(), || {
        "repeated variable pair".into()
    })?;

    let map = |a: Expr, b: Expr| Expr::apps(v("map"), [a, b]);
    let rule = map(v("f"), map(v("g"), v("xs")));
    let pm = PatMap::new().insert(&names(&["f", "g", "xs"]), &rule, "fusion");
    let hits = pm.lookup(&map(v("double"), map(v("square"), v("nums"))));
    let want = vec![(
        vec![
            (name("f"), v("double")),
            (name("g"), v("square")),
            (name("xs"), v("nums")),
        ],
        &"fusion",
    )];
    check(hits == want, || format!("map/map: {hits:?}"))?;

    let lam = |b: &str, e: Expr| Expr::lam(b, e);
    let pm = PatMap::new().insert(&names(&["p"]), &lam("x", v("p")), "k");
    let ok = pm.lookup(&lam("y", v("three")));
    let bad = pm.lookup(&lam("y", v("y")));
    check(
        ok == vec![(vec![(name("p"), v("three"))], &"k")] && bad.is_empty(),
        || format!("capture pair: {ok:?} / {bad:?}"),
    )?;

    let pm = PatMap::new()
        .insert(&names(&["p"]), &f(vec![v("p"), v("T")]), "v1")
        .insert(&names(&["q"]), &f(vec![v("q"), v("F")]), "v2");
    let r = pm.lookup(&f(vec![v("e"), v("T")]));
    check(r == vec![(vec![(name("p"), v("e"))], &"v1")], || {
        format!("two patterns: {r:?}")
    })?;

    let pm = PatMap::new().insert(&names(&["p", "q"]), &f(vec![v("p")]), "v");
    let r = pm.lookup(&f(vec![v("a")]));
    check(r == vec![(vec![(name("p"), v("a"))], &"v")], || {
        format!("unbound q: {r:?}")
    })?;

    Ok("canonicalisation (2 rows), repeated variable, map/map, capture, two-pattern and unbound-variable cases".into())
}

#[derive(Debug, Clone, Copy)]
enum Start {
    Empty,
    Single,
    Multi,
}

#[derive(Debug, Clone, Copy)]
enum Rel {
    Same,
    Different,
}

/// Expected shape and contents, as (key index, value) pairs. Key 0 and 1
/// are the pre-existing entries, key 2 the fresh one.
fn expected(start: Start, tag: u64, rel: Rel) -> (Shape, Vec<(usize, i64)>) {
    let existing: Vec<(usize, i64)> = match start {
        Start::Empty => vec![],
        Start::Single => vec![(0, 10)],
        Start::Multi => vec![(0, 10), (1, 11)],
    };
    let target = match (start, rel) {
        (Start::Empty, _) | (_, Rel::Different) => 2,
        (_, Rel::Same) => 0,
    };
    let old = existing.iter().find(|(k, _)| *k == target).map(|(_, v)| *v);
    let mut contents: Vec<(usize, i64)> = existing
        .iter()
        .copied()
        .filter(|(k, _)| *k != target)
        .collect();
    if let Some(new) = tf(tag, old) {
        contents.push((target, new));
    }
    contents.sort();
    let shape = match start {
        Start::Multi => Shape::Multi,
        _ => match contents.len() {
            0 => Shape::Empty,
            1 => Shape::Single,
            _ => Shape::Multi,
        },
    };
    (shape, contents)
}

fn transition_tables() -> Verdict {
    let starts = [Start::Empty, Start::Single, Start::Multi];
    let rels = [Rel::Same, Rel::Different];
    let mut cells = 0;

    // Exact maps: keys are closed expressions, "same" means alpha-equivalent.
    let ekeys = [
        Expr::lam("x", Expr::app(Expr::var("x"), Expr::var("c"))),
        Expr::app(Expr::var("g"), Expr::var("d")),
        Expr::lam("x", Expr::app(Expr::var("c"), Expr::var("x"))),
    ];
    let same0 = Expr::lam("w", Expr::app(Expr::var("w"), Expr::var("c")));
    for start in starts {
        for tag in 0..4 {
            for rel in rels {
                let mut m: ExprMap<i64> = ExprMap::new();
                let n = match start {
                    Start::Empty => 0,
                    Start::Single => 1,
                    Start::Multi => 2,
                };
                for (i, k) in ekeys.iter().take(n).enumerate() {
                    m.insert_closed_in_place(k, 10 + i as i64);
                }
                let key = match (start, rel) {
                    (Start::Empty, _) | (_, Rel::Different) => &ekeys[2],
                    (_, Rel::Same) => &same0,
                };
                let after = m.alter(&AlphaExpr::closed(key.clone()), &mut |o| tf(tag, o));
                let (shape, contents) = expected(start, tag, rel);
                let got: Vec<(usize, i64)> = (0..3)
                    .filter_map(|i| after.lookup_closed(&ekeys[i]).map(|v| (i, *v)))
                    .collect();
                check(
                    after.shape() == shape && got == contents && after.size() == contents.len(),
                    || {
                        format!("exact {start:?} tf#{tag} {rel:?}: {:?} {got:?}, want {shape:?} {contents:?}", after.shape())
                    },
                )?;
                cells += 1;
            }
        }
    }

    // Matching maps: "same" means equal up to renaming of pattern and
    // bound variables.
    let pkeys: [(Vec<VarName>, Expr); 3] = [
        (
            names(&["a"]),
            Expr::apps(Expr::var("f"), [Expr::var("a"), Expr::var("T")]),
        ),
        (names(&[]), Expr::app(Expr::var("g"), Expr::var("d"))),
        (
            names(&["a"]),
            Expr::lam("x", Expr::app(Expr::var("a"), Expr::var("x"))),
        ),
    ];
    let psame0 = (
        names(&["b"]),
        Expr::apps(Expr::var("f"), [Expr::var("b"), Expr::var("T")]),
    );
    let probes = [
        Expr::apps(Expr::var("f"), [Expr::var("e"), Expr::var("T")]),
        Expr::app(Expr::var("g"), Expr::var("d")),
        Expr::lam("y", Expr::app(Expr::var("e"), Expr::var("y"))),
    ];
    for start in starts {
        for tag in 0..4 {
            for rel in rels {
                let mut m: PatMap<i64> = PatMap::new();
                let n = match start {
                    Start::Empty => 0,
                    Start::Single => 1,
                    Start::Multi => 2,
                };
                for (i, (vs, b)) in pkeys.iter().take(n).enumerate() {
                    m.insert_in_place(vs, b, 10 + i as i64);
                }
                let (vs, b) = match (start, rel) {
                    (Start::Empty, _) | (_, Rel::Different) => (&pkeys[2].0, &pkeys[2].1),
                    (_, Rel::Same) => (&psame0.0, &psame0.1),
                };
                let after = m.alter(vs, b, |o| tf(tag, o));
                let (shape, contents) = expected(start, tag, rel);
                let got: Vec<(usize, i64)> = (0..3)
                    .filter_map(|i| after.lookup(&probes[i]).first().map(|(_, v)| (i, **v)))
                    .collect();
                check(
                    after.shape() == shape && got == contents && after.len() == contents.len(),
                    || {
                        format!("matching {start:?} tf#{tag} {rel:?}: {:?} {got:?}, want {shape:?} {contents:?}", after.shape())
                    },
                )?;
                cells += 1;
            }
        }
    }
    Ok(format!(
        "{cells} cells (3 shapes x 4 transformers x 2 key relations, exact and matching)"
    ))
}

fn lookup_lam_trend() -> Verdict {
    let params = BenchParams {
        map_size: 10_000,
        expr_size: 100,
        seed: 42,
        reps: 5,
        prefix_len: 100,
    };
    let corpus = corpus_for(Suite::LookupLam, &params).map_err(|e| e.to_string())?;
    let tm = run_suite_on(Suite::LookupLam, Impl::Tm, &corpus, params.reps)
        .map_err(|e| e.to_string())?;
    let om = run_suite_on(Suite::LookupLam, Impl::Om, &corpus, params.reps)
        .map_err(|e| e.to_string())?;
    check(tm.outcome == om.outcome, || {
        "TM and OM disagree on lookups".into()
    })?;
    let ratio = tm.total_ns as f64 / om.total_ns as f64;
    let detail = format!(
        "TM {:.1} ms vs OM {:.1} ms, ratio {ratio:.3} (limit 0.5)",
        tm.total_ns as f64 / 1e6,
        om.total_ns as f64 / 1e6
    );
    if ratio <= 0.5 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scaling_trend() -> Verdict {
    let per_op = |m: usize| -> Result<f64, String> {
        let params = BenchParams {
            map_size: m,
            expr_size: 100,
            seed: 42,
            reps: 5,
            prefix_len: 100,
        };
        Ok(run_suite(Suite::Lookup, Impl::Tm, &params)
            .map_err(|e| e.to_string())?
            .per_op_ns)
    };
    let small = per_op(1_000)?;
    let large = per_op(10_000)?;
    let ratio = large / small;
    let detail = format!("per lookup {small:.0} ns at M=1000, {large:.0} ns at M=10000, ratio {ratio:.2} (limit 2.0)");
    if ratio <= 2.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn space_ratio(expr_size: usize) -> Result<(usize, usize), String> {
    let params = BenchParams {
        map_size: 1_000,
        expr_size,
        seed: 42,
        reps: 1,
        prefix_len: 100,
    };
    let corpus = corpus_for(Suite::SpaceApp1, &params).map_err(|e| e.to_string())?;
    let r = run_suite_on(Suite::SpaceApp1, Impl::Tm, &corpus, 1).map_err(|e| e.to_string())?;
    Ok((r.node_count.unwrap_or(usize::MAX), corpus.total_key_size()))
}

fn space_sharing() -> Verdict {
    let (census, keys) = space_ratio(10)?;
    let ratio = census as f64 / keys as f64;
    let (c100, k100) = space_ratio(100)?;
    let detail = format!(
        "E=10: census {census} / key constructors {keys} = {ratio:.3} (limit 0.20); \
         for reference E=100 gives {:.3}",
        c100 as f64 / k100 as f64
    );
    if ratio <= 0.20 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fold_sum_of<M: exprtrie::bench::BenchMap>(suite: Suite, entries: &[(Expr, i64)]) -> i64 {
    match suite {
        Suite::Union => {
            let half = entries.len() / 2;
            M::from_list(&entries[..half])
                .union_add(&M::from_list(&entries[half..]))
                .fold_sum()
        }
        _ => M::from_list(entries).fold_sum(),
    }
}

fn fold_correctness() -> Verdict {
    let params = BenchParams {
        map_size: 500,
        expr_size: 30,
        seed: 7,
        reps: 1,
        prefix_len: 20,
    };
    let mut checked = 0;
    for suite in Suite::ALL {
        let corpus = corpus_for(suite, &params).map_err(|e| e.to_string())?;
        let entries = corpus.entries();
        let mut oracle = AssocMap::new();
        for (k, v) in &entries {
            let k = AlphaExpr::closed(k.clone());
            oracle.alter(&k, |old| Some(old.unwrap_or(0) + v));
        }
        let want: i64 = oracle.entries().iter().map(|(_, v)| v).sum();
        let sums = [
            fold_sum_of::<ExprMap<i64>>(suite, &entries),
            fold_sum_of::<OrdBaseline>(suite, &entries),
            fold_sum_of::<HashBaseline>(suite, &entries),
        ];
        check(sums.iter().all(|s| *s == want), || {
            format!("{suite}: sums {sums:?}, oracle {want}")
        })?;
        let outcomes: Vec<Outcome> = Impl::ALL
            .iter()
            .map(|&imp| run_suite_on(suite, imp, &corpus, 1).map(|r| r.outcome))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        check(outcomes.iter().all(|o| *o == outcomes[0]), || {
            format!("{suite}: outcomes {outcomes:?}")
        })?;
        checked += 3;
    }
    Ok(format!(
        "{checked} suite/implementation maps sum to the oracle total"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("finite-map laws", laws),
        ("exact maps match the association-list oracle", exact_oracle),
        (
            "lookup is invariant under binder renaming",
            alpha_invariance,
        ),
        (
            "matching lookup matches the brute-force oracle",
            matching_oracle,
        ),
        ("worked examples", worked_examples),
        ("singleton/empty transition tables", transition_tables),
        ("lookup_lam: TM at most half of OM", lookup_lam_trend),
        ("lookup: TM per-op cost flat in map size", scaling_trend),
        ("space_app1: shared prefix stored once", space_sharing),
        ("fold sums agree with the oracle", fold_correctness),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
