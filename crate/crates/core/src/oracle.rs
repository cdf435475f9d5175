//! Slow, obviously-correct reference implementations for differential
//! testing. Nothing here shares code with the tries or the matcher: alpha
//! equivalence is decided by converting to a nameless form, and matching is
//! a separate name-based descent.

use std::collections::BTreeMap;

use crate::expr::{AlphaExpr, DbEnv, Expr, VarName};
use crate::patmap::PatSubst;

/// Nameless form. Variables bound inside the term are De Bruijn indices,
/// variables bound by the surrounding environment are kept as levels, and
/// free variables by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Nameless {
    Index(usize),
    Env(u32),
    Free(VarName),
    PatVar(usize),
    App(Box<Nameless>, Box<Nameless>),
    Lam(Box<Nameless>),
}

fn nameless(env: &DbEnv, pvars: &[VarName], e: &Expr) -> Nameless {
    fn go(
        env: &DbEnv,
        pvars: &[VarName],
        seen: &mut Vec<VarName>,
        scope: &mut Vec<VarName>,
        e: &Expr,
    ) -> Nameless {
        match e {
            Expr::Var(v) => {
                if let Some(i) = scope.iter().rev().position(|b| b == v) {
                    Nameless::Index(i)
                } else if let Some(l) = env.lookup(v) {
                    Nameless::Env(l.get())
                } else if pvars.contains(v) {
                    let i = match seen.iter().position(|s| s == v) {
                        Some(i) => i,
                        None => {
                            seen.push(v.clone());
                            seen.len() - 1
                        }
                    };
                    Nameless::PatVar(i)
                } else {
                    Nameless::Free(v.clone())
                }
            }
            Expr::App(f, a) => {
                let f = go(env, pvars, seen, scope, f);
                let a = go(env, pvars, seen, scope, a);
                Nameless::App(Box::new(f), Box::new(a))
            }
            Expr::Lam(v, b) => {
                scope.push(v.clone());
                let b = go(env, pvars, seen, scope, b);
                scope.pop();
                Nameless::Lam(Box::new(b))
            }
        }
    }
    go(env, pvars, &mut Vec::new(), &mut Vec::new(), e)
}

fn same_class(a: &AlphaExpr, b: &AlphaExpr) -> bool {
    nameless(&a.env, &[], &a.expr) == nameless(&b.env, &[], &b.expr)
}

/// Association list keyed by expressions modulo alpha, most recent first.
#[derive(Debug, Clone)]
pub struct AssocMap<V> {
    entries: Vec<(AlphaExpr, V)>,
}

impl<V> Default for AssocMap<V> {
    fn default() -> Self {
        AssocMap {
            entries: Vec::new(),
        }
    }
}

impl<V: Clone> AssocMap<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, k: &AlphaExpr) -> Option<&V> {
        self.entries
            .iter()
            .find(|(k2, _)| same_class(k, k2))
            .map(|(_, v)| v)
    }

    pub fn alter(&mut self, k: &AlphaExpr, tf: impl FnOnce(Option<V>) -> Option<V>) {
        let old = self.entries.iter().position(|(k2, _)| same_class(k, k2));
        let old = old.map(|i| self.entries.remove(i).1);
        if let Some(v) = tf(old) {
            self.entries.insert(0, (k.clone(), v));
        }
    }

    pub fn insert(&mut self, k: &AlphaExpr, v: V) {
        self.alter(k, |_| Some(v));
    }

    pub fn delete(&mut self, k: &AlphaExpr) {
        self.alter(k, |_| None);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(AlphaExpr, V)] {
        &self.entries
    }
}

/// Matches the pattern `(pvars, pat)` against closed `target`. Returns the
/// binding of every pattern variable that occurs in the pattern.
pub fn oracle_match_one(
    pvars: &[VarName],
    pat: &Expr,
    target: &Expr,
) -> Option<BTreeMap<VarName, Expr>> {
    struct St<'a> {
        pvars: &'a [VarName],
        pscope: Vec<VarName>,
        tscope: Vec<VarName>,
        out: BTreeMap<VarName, Expr>,
    }

    fn depth_of(scope: &[VarName], v: &VarName) -> Option<usize> {
        scope.iter().rev().position(|b| b == v)
    }

    fn free_vars(e: &Expr, bound: &mut Vec<VarName>, out: &mut Vec<VarName>) {
        match e {
            Expr::Var(v) => {
                if !bound.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::App(f, a) => {
                free_vars(f, bound, out);
                free_vars(a, bound, out);
            }
            Expr::Lam(v, b) => {
                bound.push(v.clone());
                free_vars(b, bound, out);
                bound.pop();
            }
        }
    }

    fn go(st: &mut St<'_>, p: &Expr, t: &Expr) -> bool {
        match p {
            Expr::Var(v) => {
                if let Some(d) = depth_of(&st.pscope, v) {
                    return matches!(t, Expr::Var(w) if depth_of(&st.tscope, w) == Some(d));
                }
                if st.pvars.contains(v) {
                    let mut fv = Vec::new();
                    free_vars(t, &mut Vec::new(), &mut fv);
                    if fv.iter().any(|w| st.tscope.contains(w)) {
                        return false;
                    }
                    return match st.out.get(v) {
                        Some(prev) => {
                            let empty = DbEnv::empty();
                            nameless(&empty, &[], prev) == nameless(&empty, &[], t)
                        }
                        None => {
                            st.out.insert(v.clone(), t.clone());
                            true
                        }
                    };
                }
                matches!(t, Expr::Var(w) if w == v && !st.tscope.contains(w))
            }
            Expr::App(pf, pa) => match t {
                Expr::App(tf, ta) => go(st, pf, tf) && go(st, pa, ta),
                _ => false,
            },
            Expr::Lam(pv, pb) => match t {
                Expr::Lam(tv, tb) => {
                    st.pscope.push(pv.clone());
                    st.tscope.push(tv.clone());
                    let ok = go(st, pb, tb);
                    st.pscope.pop();
                    st.tscope.pop();
                    ok
                }
                _ => false,
            },
        }
    }

    let mut st = St {
        pvars,
        pscope: Vec::new(),
        tscope: Vec::new(),
        out: BTreeMap::new(),
    };
    go(&mut st, pat, target).then_some(st.out)
}

/// A plain list of patterns, scanned one by one.
#[derive(Debug, Clone)]
pub struct NaivePatStore<V> {
    entries: Vec<(Vec<VarName>, Expr, V)>,
}

impl<V> Default for NaivePatStore<V> {
    fn default() -> Self {
        NaivePatStore {
            entries: Vec::new(),
        }
    }
}

impl<V: Clone + Ord> NaivePatStore<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces any pattern equal to `(pvars, body)` up to renaming.
    pub fn insert(&mut self, pvars: &[VarName], body: &Expr, v: V) {
        let key = nameless(&DbEnv::empty(), pvars, body);
        self.entries
            .retain(|(vs, b, _)| nameless(&DbEnv::empty(), vs, b) != key);
        self.entries.insert(0, (pvars.to_vec(), body.clone(), v));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Every stored pattern matching `target`, sorted.
pub fn oracle_match_all<V: Clone + Ord>(
    store: &NaivePatStore<V>,
    target: &Expr,
) -> Vec<(PatSubst, V)> {
    let mut out: Vec<(PatSubst, V)> = store
        .entries
        .iter()
        .filter_map(|(vs, body, v)| {
            oracle_match_one(vs, body, target).map(|s| (s.into_iter().collect(), v.clone()))
        })
        .collect();
    out.sort();
    out
}
