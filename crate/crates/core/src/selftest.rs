//! Randomised differential checks of the tries against the naive oracles,
//! plus the generators they use. The same generators back the acceptance
//! tests.

use std::fmt::Write as _;

use crate::bench::Rng;
use crate::expr::{eq_expr, AlphaExpr, Expr, VarName};
use crate::exprmap::ExprMap;
use crate::matching::EqFn;
use crate::oracle::{oracle_match_all, AssocMap, NaivePatStore};
use crate::patmap::{PatMap, PatSubst};
use crate::triemap::TrieMap;

fn name(s: &str) -> VarName {
    VarName::new(s).expect("valid name")
}

/// Random expression of at most `max_size` constructors over `free`.
/// Binders are drawn from `binders`, so shadowing is common.
pub fn random_expr(rng: &mut Rng, max_size: usize, free: &[VarName], binders: &[VarName]) -> Expr {
    fn go(
        rng: &mut Rng,
        size: usize,
        free: &[VarName],
        binders: &[VarName],
        scope: &mut Vec<VarName>,
    ) -> Expr {
        if size <= 1 {
            let v = if !scope.is_empty() && rng.chance(1, 2) {
                scope[rng.below(scope.len() as u64) as usize].clone()
            } else {
                free[rng.below(free.len() as u64) as usize].clone()
            };
            return Expr::Var(v);
        }
        if size >= 3 && rng.chance(1, 2) {
            let left = rng.between(1, size as u64 - 2) as usize;
            let f = go(rng, left, free, binders, scope);
            let a = go(rng, size - 1 - left, free, binders, scope);
            return Expr::app(f, a);
        }
        let b = binders[rng.below(binders.len() as u64) as usize].clone();
        scope.push(b.clone());
        let body = go(rng, size - 1, free, binders, scope);
        scope.pop();
        Expr::Lam(b, body.into())
    }
    let size = rng.between(1, max_size.max(1) as u64) as usize;
    go(rng, size, free, binders, &mut Vec::new())
}

/// Consistently renames every binder (and its bound occurrences) to a
/// fresh name, giving an alpha-equivalent expression.
pub fn rename_binders(rng: &mut Rng, e: &Expr) -> Expr {
    fn go(rng: &mut Rng, e: &Expr, ren: &mut Vec<(VarName, VarName)>, counter: &mut u32) -> Expr {
        match e {
            Expr::Var(v) => match ren.iter().rev().find(|(old, _)| old == v) {
                Some((_, new)) => Expr::Var(new.clone()),
                None => e.clone(),
            },
            Expr::App(f, a) => Expr::app(go(rng, f, ren, counter), go(rng, a, ren, counter)),
            Expr::Lam(v, b) => {
                *counter += 1;
                let fresh = name(&format!("r{}_{}", rng.below(1000), counter));
                ren.push((v.clone(), fresh.clone()));
                let body = go(rng, b, ren, counter);
                ren.pop();
                Expr::Lam(fresh, body.into())
            }
        }
    }
    go(rng, e, &mut Vec::new(), &mut 0)
}

/// Names used by the matching generators.
pub struct PatternVocab {
    pub pat_vars: Vec<VarName>,
    pub constants: Vec<VarName>,
    pub binders: Vec<VarName>,
}

impl Default for PatternVocab {
    fn default() -> Self {
        PatternVocab {
            pat_vars: ["a", "b", "c"].map(name).to_vec(),
            constants: ["f", "g", "k"].map(name).to_vec(),
            binders: ["x", "y", "a"].map(name).to_vec(),
        }
    }
}

/// A random pattern: up to three quantified variables, body of at most
/// `max_size` constructors.
pub fn random_pattern(
    rng: &mut Rng,
    vocab: &PatternVocab,
    max_size: usize,
) -> (Vec<VarName>, Expr) {
    let n = rng.below(vocab.pat_vars.len() as u64 + 1) as usize;
    let mut pvars = vocab.pat_vars.clone();
    // Fisher-Yates so the quantification order varies too.
    for i in (1..pvars.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        pvars.swap(i, j);
    }
    pvars.truncate(n);
    let mut pool = vocab.constants.clone();
    pool.extend(pvars.iter().cloned());
    pool.extend(pvars.iter().cloned());
    let body = random_expr(rng, max_size, &pool, &vocab.binders);
    (pvars, body)
}

/// A target likely to match `pat`: each pattern variable is replaced by a
/// small random term (the same term at every occurrence), and binders are
/// renamed. Occurrences under a lambda that rebinds the name are left alone.
pub fn instantiate(rng: &mut Rng, vocab: &PatternVocab, pvars: &[VarName], body: &Expr) -> Expr {
    let terms: Vec<(VarName, Expr)> = pvars
        .iter()
        .map(|v| {
            (
                v.clone(),
                random_expr(rng, 4, &vocab.constants, &vocab.binders),
            )
        })
        .collect();
    fn go(e: &Expr, terms: &[(VarName, Expr)], shadow: &mut Vec<VarName>) -> Expr {
        match e {
            Expr::Var(v) if !shadow.contains(v) => terms
                .iter()
                .find(|(p, _)| p == v)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| e.clone()),
            Expr::Var(_) => e.clone(),
            Expr::App(f, a) => Expr::app(go(f, terms, shadow), go(a, terms, shadow)),
            Expr::Lam(v, b) => {
                shadow.push(v.clone());
                let body = go(b, terms, shadow);
                shadow.pop();
                Expr::Lam(v.clone(), body.into())
            }
        }
    }
    let t = go(body, &terms, &mut Vec::new());
    rename_binders(rng, &t)
}

/// Sorted matching-lookup output, for comparison with the oracle.
pub fn sorted_lookup(pm: &PatMap<u32>, target: &Expr, eq: EqFn) -> Vec<(PatSubst, u32)> {
    let mut r: Vec<(PatSubst, u32)> = pm
        .lookup_with_eq(target, eq)
        .into_iter()
        .map(|(s, v)| (s, *v))
        .collect();
    r.sort();
    r
}

/// Outcome of a self-test run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub trials: usize,
    /// Description of the first disagreement, if any.
    pub counterexample: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn show_subst(s: &[(PatSubst, u32)]) -> String {
    let items: Vec<String> = s
        .iter()
        .map(|(sub, v)| {
            let binds: Vec<String> = sub.iter().map(|(n, e)| format!("{n}={e}")).collect();
            format!("#{v} {{{}}}", binds.join(", "))
        })
        .collect();
    format!("[{}]", items.join("; "))
}

/// One exact-map trial: a random sequence of inserts, deletes and lookups
/// against both the trie and the association list.
fn exprmap_trial(rng: &mut Rng) -> Option<String> {
    let free = ["p", "q", "r"].map(name);
    let binders = ["x", "y", "z"].map(name);
    let keys: Vec<Expr> = (0..6)
        .map(|_| random_expr(rng, 15, &free, &binders))
        .collect();
    let mut tm: ExprMap<u32> = ExprMap::new();
    let mut om: AssocMap<u32> = AssocMap::new();
    let mut log = String::new();
    for step in 0..30u32 {
        let base = &keys[rng.below(keys.len() as u64) as usize];
        let k = rename_binders(rng, base);
        let ak = AlphaExpr::closed(k.clone());
        match rng.below(3) {
            0 => {
                tm.insert_in_place(&ak, step);
                om.insert(&ak, step);
                let _ = writeln!(log, "insert {k} {step}");
            }
            1 => {
                tm.delete_in_place(&ak);
                om.delete(&ak);
                let _ = writeln!(log, "delete {k}");
            }
            _ => {
                let _ = writeln!(log, "lookup {k}");
            }
        }
        let got = tm.lookup(&ak).copied();
        let want = om.lookup(&ak).copied();
        if got != want || tm.size() != om.len() {
            return Some(format!(
                "exact map disagrees after:\n{log}trie: {got:?} (size {}), oracle: {want:?} (size {})",
                tm.size(),
                om.len()
            ));
        }
    }
    None
}

/// One matching trial: a small pattern store and a few targets.
fn matching_trial(rng: &mut Rng, eq: EqFn) -> Option<String> {
    let vocab = PatternVocab::default();
    let mut pm = PatMap::new();
    let mut store = NaivePatStore::new();
    let mut pats = Vec::new();
    for i in 0..8u32 {
        let (pvars, body) = random_pattern(rng, &vocab, 8);
        pm.insert_in_place(&pvars, &body, i);
        store.insert(&pvars, &body, i);
        pats.push((pvars, body));
    }
    for _ in 0..6 {
        let target = if rng.chance(2, 3) {
            let (pv, b) = &pats[rng.below(pats.len() as u64) as usize];
            instantiate(rng, &vocab, pv, b)
        } else {
            random_expr(rng, 8, &vocab.constants, &vocab.binders)
        };
        let got = sorted_lookup(&pm, &target, eq);
        let want = oracle_match_all(&store, &target);
        if got != want {
            let mut msg = String::from("matching disagrees\npatterns:\n");
            for (i, (pv, b)) in pats.iter().enumerate() {
                let vs: Vec<&str> = pv.iter().map(VarName::as_str).collect();
                let _ = writeln!(msg, "  #{i}: {} ; {b}", vs.join(" "));
            }
            let _ = write!(
                msg,
                "target: {target}\ntrie:   {}\noracle: {}",
                show_subst(&got),
                show_subst(&want)
            );
            return Some(msg);
        }
    }
    None
}

/// Runs `trials` rounds of both differential checks.
pub fn run(trials: usize, seed: u64) -> Report {
    run_with_eq(trials, seed, eq_expr)
}

/// [`run`] with the matcher's repeated-variable equality replaced.
pub fn run_with_eq(trials: usize, seed: u64, eq: EqFn) -> Report {
    let mut rng = Rng::new(seed);
    for t in 0..trials {
        if let Some(c) = exprmap_trial(&mut rng).or_else(|| matching_trial(&mut rng, eq)) {
            return Report {
                trials: t + 1,
                counterexample: Some(c),
            };
        }
    }
    Report {
        trials,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::alpha_eq;
    use crate::oracle::oracle_match_one;

    #[test]
    fn renaming_preserves_alpha_class() {
        let mut rng = Rng::new(1);
        let free = ["p", "q"].map(name);
        let binders = ["x", "y"].map(name);
        for _ in 0..200 {
            let e = random_expr(&mut rng, 12, &free, &binders);
            let r = rename_binders(&mut rng, &e);
            assert!(alpha_eq(&AlphaExpr::closed(e), &AlphaExpr::closed(r)));
        }
    }

    #[test]
    fn instances_usually_match() {
        let mut rng = Rng::new(2);
        let vocab = PatternVocab::default();
        let mut hits = 0;
        for _ in 0..200 {
            let (pv, b) = random_pattern(&mut rng, &vocab, 10);
            let t = instantiate(&mut rng, &vocab, &pv, &b);
            hits += usize::from(oracle_match_one(&pv, &b, &t).is_some());
        }
        assert!(hits > 100, "{hits}");
    }

    #[test]
    fn short_run_passes() {
        assert!(run(30, 7).passed());
    }

    #[test]
    fn broken_equality_is_caught() {
        let r = run_with_eq(500, 42, |a, b| !eq_expr(a, b));
        assert!(!r.passed());
    }
}
