//! Patterns, their canonical form, and matching a pattern against a target.
//!
//! A client pattern is a list of quantified variables plus a body. Before it
//! goes anywhere near a trie, the quantified variables are renumbered
//! 1, 2, 3, ... in order of first occurrence in a left-to-right scan of the
//! body ([`canon_pat_keys`]), which makes the pattern insensitive both to the
//! names chosen for its variables and to the order they were quantified in.
//!
//! Matching runs in [`Match`], a computation from the current substitution
//! to a list of results, each with an extended substitution. Failure is the
//! empty list and alternation concatenates, left first.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::expr::{eq_expr, no_captured, AlphaExpr, DbEnv, DbLevel, Expr, VarName};

/// Canonical number of a pattern variable, starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatKey(u32);

impl PatKey {
    pub fn new(key: u32) -> Option<PatKey> {
        (key >= 1).then_some(PatKey(key))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Quantified variable name to canonical key.
pub type PatKeys = BTreeMap<VarName, PatKey>;

/// Equality on candidate bindings of a repeated pattern variable.
pub type EqFn = fn(&Expr, &Expr) -> bool;

/// Numbers the variables of `pvars` in order of first occurrence in a
/// pre-order walk of `e`. Occurrences under a lambda that rebinds the name
/// are not pattern-variable occurrences; variables that never occur are
/// left out.
pub fn canon_pat_keys(pvars: &[VarName], e: &Expr) -> PatKeys {
    fn go<'a>(e: &'a Expr, pvars: &[VarName], shadowed: &mut Vec<&'a VarName>, keys: &mut PatKeys) {
        match e {
            Expr::Var(v) => {
                if pvars.contains(v) && !shadowed.contains(&v) && !keys.contains_key(v) {
                    let next = PatKey(keys.len() as u32 + 1);
                    keys.insert(v.clone(), next);
                }
            }
            Expr::App(f, a) => {
                go(f, pvars, shadowed, keys);
                go(a, pvars, shadowed, keys);
            }
            Expr::Lam(v, b) => {
                shadowed.push(v);
                go(b, pvars, shadowed, keys);
                shadowed.pop();
            }
        }
    }
    let mut keys = PatKeys::new();
    go(e, pvars, &mut Vec::new(), &mut keys);
    keys
}

/// A canonicalised pattern: the numbering of its variables and its body,
/// read under the environment of the lambdas enclosing it.
#[derive(Clone)]
pub struct PatExpr {
    pub keys: Arc<PatKeys>,
    pub body: AlphaExpr,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PatOcc<'a> {
    Bound(DbLevel),
    PatVar(PatKey),
    Free(&'a VarName),
}

impl PatExpr {
    /// Canonicalises the client pattern `(pvars, body)`, read closed.
    pub fn new(pvars: &[VarName], body: Expr) -> PatExpr {
        PatExpr {
            keys: Arc::new(canon_pat_keys(pvars, &body)),
            body: AlphaExpr::closed(body),
        }
    }

    /// Same numbering and environment, different body.
    pub fn with(&self, e: &Expr) -> PatExpr {
        PatExpr {
            keys: Arc::clone(&self.keys),
            body: self.body.with(e),
        }
    }

    /// Same numbering, body under a new environment.
    pub fn with_env(&self, env: DbEnv, e: &Expr) -> PatExpr {
        PatExpr {
            keys: Arc::clone(&self.keys),
            body: AlphaExpr::new(env, e.clone()),
        }
    }

    /// Lambda-bound names win over pattern variables of the same name.
    fn classify_in<'a>(keys: &PatKeys, env: &DbEnv, v: &'a VarName) -> PatOcc<'a> {
        if let Some(l) = env.lookup(v) {
            PatOcc::Bound(l)
        } else if let Some(&pk) = keys.get(v) {
            PatOcc::PatVar(pk)
        } else {
            PatOcc::Free(v)
        }
    }

    /// The canonical key of `v` if this occurrence is a pattern variable.
    pub fn pat_key(&self, v: &VarName) -> Option<PatKey> {
        match Self::classify_in(&self.keys, &self.body.env, v) {
            PatOcc::PatVar(pk) => Some(pk),
            _ => None,
        }
    }
}

/// Alpha-equivalence of bodies, with pattern-variable occurrences compared
/// by canonical key.
impl PartialEq for PatExpr {
    fn eq(&self, other: &Self) -> bool {
        fn go(ka: &PatKeys, ea: &DbEnv, a: &Expr, kb: &PatKeys, eb: &DbEnv, b: &Expr) -> bool {
            match (a, b) {
                (Expr::Var(x), Expr::Var(y)) => {
                    PatExpr::classify_in(ka, ea, x) == PatExpr::classify_in(kb, eb, y)
                }
                (Expr::App(f1, a1), Expr::App(f2, a2)) => {
                    go(ka, ea, f1, kb, eb, f2) && go(ka, ea, a1, kb, eb, a2)
                }
                (Expr::Lam(x, b1), Expr::Lam(y, b2)) => {
                    go(ka, &ea.extend(x), b1, kb, &eb.extend(y), b2)
                }
                _ => false,
            }
        }
        go(
            &self.keys,
            &self.body.env,
            &self.body.expr,
            &other.keys,
            &other.body.env,
            &other.body.expr,
        )
    }
}

impl Eq for PatExpr {}

impl fmt::Debug for PatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({:?}, {:?})", self.keys, self.body)
    }
}

/// Bindings of canonical pattern keys to target sub-expressions.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subst(BTreeMap<PatKey, Expr>);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn get(&self, pk: PatKey) -> Option<&Expr> {
        self.0.get(&pk)
    }

    pub fn insert(&mut self, pk: PatKey, e: Expr) {
        self.0.insert(pk, e);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PatKey, &Expr)> {
        self.0.iter().map(|(k, e)| (*k, e))
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.0.iter().map(|(k, e)| (k.0, e)))
            .finish()
    }
}

impl FromIterator<(PatKey, Expr)> for Subst {
    fn from_iter<I: IntoIterator<Item = (PatKey, Expr)>>(iter: I) -> Self {
        Subst(iter.into_iter().collect())
    }
}

type MatchFn<'a, T> = dyn Fn(&Subst) -> Vec<(T, Subst)> + 'a;

/// A matching computation: given the substitution so far, every way of
/// succeeding, each with its result and refined substitution.
pub struct Match<'a, T> {
    run: Box<MatchFn<'a, T>>,
}

impl<'a, T: 'a> Match<'a, T> {
    pub fn new(f: impl Fn(&Subst) -> Vec<(T, Subst)> + 'a) -> Self {
        Match { run: Box::new(f) }
    }

    pub fn pure(v: T) -> Self
    where
        T: Clone,
    {
        Match::new(move |s| vec![(v.clone(), s.clone())])
    }

    pub fn fail() -> Self {
        Match::new(|_| Vec::new())
    }

    /// All results of `self`, then all results of `other`.
    pub fn or(self, other: Match<'a, T>) -> Self {
        Match::new(move |s| {
            let mut out = (self.run)(s);
            out.extend((other.run)(s));
            out
        })
    }

    pub fn and_then<U: 'a>(self, f: impl Fn(T) -> Match<'a, U> + 'a) -> Match<'a, U> {
        Match::new(move |s| {
            (self.run)(s)
                .into_iter()
                .flat_map(|(v, s2)| (f(v).run)(&s2))
                .collect()
        })
    }

    /// Runs `self` for its effect on the substitution, then `next`.
    pub fn then<U: 'a>(self, next: Match<'a, U>) -> Match<'a, U> {
        Match::new(move |s| {
            (self.run)(s)
                .into_iter()
                .flat_map(|(_, s2)| (next.run)(&s2))
                .collect()
        })
    }

    pub fn map<U: 'a>(self, f: impl Fn(T) -> U + 'a) -> Match<'a, U> {
        Match::new(move |s| {
            (self.run)(s)
                .into_iter()
                .map(|(v, s2)| (f(v), s2))
                .collect()
        })
    }

    pub fn run_from(&self, s: &Subst) -> Vec<(T, Subst)> {
        (self.run)(s)
    }

    /// Runs from the empty substitution.
    pub fn run(&self) -> Vec<(Subst, T)> {
        (self.run)(&Subst::new())
            .into_iter()
            .map(|(v, s)| (s, v))
            .collect()
    }
}

/// Concatenation of every computation's results, in order.
pub fn msum<'a, T: 'a>(ms: impl IntoIterator<Item = Match<'a, T>>) -> Match<'a, T> {
    let ms: Vec<Match<'a, T>> = ms.into_iter().collect();
    Match::new(move |s| ms.iter().flat_map(|m| (m.run)(s)).collect())
}

pub fn lift_optional<'a, T: Clone + 'a>(o: Option<T>) -> Match<'a, T> {
    match o {
        Some(v) => Match::pure(v),
        None => Match::fail(),
    }
}

/// Replaces the substitution with `f`'s result, failing on `None`.
pub fn refine_match<'a>(f: impl Fn(&Subst) -> Option<Subst> + 'a) -> Match<'a, ()> {
    Match::new(move |s| f(s).map(|s2| ((), s2)).into_iter().collect())
}

/// Binds (or re-checks) pattern key `pk` against `target`. The target may
/// not mention a variable bound by a lambda enclosing it in the target.
pub fn match_pat_var<'a>(pk: PatKey, target: AlphaExpr) -> Match<'a, ()> {
    match_pat_var_with(pk, target, eq_expr)
}

pub(crate) fn match_pat_var_with<'a>(pk: PatKey, target: AlphaExpr, eq: EqFn) -> Match<'a, ()> {
    refine_match(move |s| {
        let mut s = s.clone();
        bind_pat_var(pk, &target.env, &target.expr, &mut s, eq).then_some(s)
    })
}

fn bind_pat_var(pk: PatKey, env: &DbEnv, e: &Expr, s: &mut Subst, eq: EqFn) -> bool {
    if !no_captured(env, e) {
        return false;
    }
    match s.get(pk) {
        None => {
            s.insert(pk, e.clone());
            true
        }
        Some(sol) => eq(e, sol),
    }
}

/// Matches `pat` against `target` by simultaneous descent, each side under
/// its own binder environment. Yields at most one result.
pub fn match_expr<'a>(pat: &PatExpr, target: &AlphaExpr) -> Match<'a, ()> {
    match_expr_with(pat, target, eq_expr)
}

pub(crate) fn match_expr_with<'a>(pat: &PatExpr, target: &AlphaExpr, eq: EqFn) -> Match<'a, ()> {
    let pat = pat.clone();
    let target = target.clone();
    refine_match(move |s| {
        let mut s = s.clone();
        descend(
            &pat.keys,
            &pat.body.env,
            &pat.body.expr,
            &target.env,
            &target.expr,
            &mut s,
            eq,
        )
        .then_some(s)
    })
}

fn descend(
    keys: &PatKeys,
    penv: &DbEnv,
    p: &Expr,
    tenv: &DbEnv,
    t: &Expr,
    s: &mut Subst,
    eq: EqFn,
) -> bool {
    match p {
        Expr::Var(v) => match PatExpr::classify_in(keys, penv, v) {
            PatOcc::Bound(l) => matches!(t, Expr::Var(w) if tenv.lookup(w) == Some(l)),
            PatOcc::PatVar(pk) => bind_pat_var(pk, tenv, t, s, eq),
            PatOcc::Free(c) => matches!(t, Expr::Var(w) if w == c && tenv.lookup(w).is_none()),
        },
        Expr::App(pf, pa) => match t {
            Expr::App(tf, ta) => {
                descend(keys, penv, pf, tenv, tf, s, eq) && descend(keys, penv, pa, tenv, ta, s, eq)
            }
            _ => false,
        },
        Expr::Lam(pv, pb) => match t {
            Expr::Lam(tv, tb) => descend(keys, &penv.extend(pv), pb, &tenv.extend(tv), tb, s, eq),
            _ => false,
        },
    }
}

/// Replaces every pattern-variable occurrence of `pat`'s body by its
/// binding in `s`. Unbound pattern variables are left as they are.
pub fn apply_subst(pat: &PatExpr, s: &Subst) -> Expr {
    fn go(keys: &PatKeys, env: &DbEnv, e: &Expr, s: &Subst) -> Expr {
        match e {
            Expr::Var(v) => match PatExpr::classify_in(keys, env, v) {
                PatOcc::PatVar(pk) => s.get(pk).cloned().unwrap_or_else(|| e.clone()),
                _ => e.clone(),
            },
            Expr::App(f, a) => Expr::app(go(keys, env, f, s), go(keys, env, a, s)),
            Expr::Lam(v, b) => Expr::Lam(v.clone(), Arc::new(go(keys, &env.extend(v), b, s))),
        }
    }
    go(&pat.keys, &pat.body.env, &pat.body.expr, s)
}
