//! The matching triemap: keys are patterns, lookups take a target
//! expression and return every stored pattern that matches it.
//!
//! The trie mirrors [`ExprMap`](crate::ExprMap) with one extra field per
//! node, holding entries whose pattern has a pattern variable at that
//! position. A lookup follows the target's constructor (the rigid part) and
//! additionally tries every pattern variable stored at the node (the flexi
//! part), so one lookup may branch into several partial matches.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::expr::{eq_expr, AlphaExpr, DbLevel, Expr, VarName};
use crate::matching::{
    lift_optional, match_expr_with, match_pat_var_with, msum, EqFn, Match, PatExpr, PatKey, PatKeys,
};
use crate::triemap::{alter_btree, Shape, Tf};

/// A trie whose keys are patterns and whose lookups run a matching
/// computation against a target key.
pub trait MTrieMap: Clone {
    type Key: Clone + 'static;
    type Pattern: Clone + PartialEq;
    type Value: Clone;

    fn empty() -> Self;

    /// Every stored value whose pattern matches `key`, each paired with
    /// the substitution that made it match.
    fn lookup_match<'a>(&'a self, key: &Self::Key, eq: EqFn) -> Match<'a, &'a Self::Value>;

    fn alter_pattern(&mut self, pat: &Self::Pattern, tf: Tf<'_, Self::Value>);

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a Self::Value));

    /// Matching one whole stored pattern against one whole key.
    fn match_single<'a>(pat: &Self::Pattern, key: &Self::Key, eq: EqFn) -> Match<'a, ()>;
}

/// Singleton-or-empty wrapper for matching tries. A lone entry keeps its
/// whole pattern and is matched directly; like [`SEMap`](crate::triemap::SEMap),
/// a `Multi` is never shrunk back.
pub enum MSEMap<M: MTrieMap> {
    Empty,
    Single(M::Pattern, M::Value),
    Multi(Arc<M>),
}

impl<M: MTrieMap> MSEMap<M> {
    pub fn shape(&self) -> Shape {
        match self {
            MSEMap::Empty => Shape::Empty,
            MSEMap::Single(..) => Shape::Single,
            MSEMap::Multi(_) => Shape::Multi,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, MSEMap::Empty)
    }
}

impl<M: MTrieMap> Clone for MSEMap<M> {
    fn clone(&self) -> Self {
        match self {
            MSEMap::Empty => MSEMap::Empty,
            MSEMap::Single(p, v) => MSEMap::Single(p.clone(), v.clone()),
            MSEMap::Multi(m) => MSEMap::Multi(Arc::clone(m)),
        }
    }
}

// Derived Default would demand `M: Default`.
#[allow(clippy::derivable_impls)]
impl<M: MTrieMap> Default for MSEMap<M> {
    fn default() -> Self {
        MSEMap::Empty
    }
}

impl<M> fmt::Debug for MSEMap<M>
where
    M: MTrieMap + fmt::Debug,
    M::Pattern: fmt::Debug,
    M::Value: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSEMap::Empty => f.write_str("Empty"),
            MSEMap::Single(p, v) => f.debug_tuple("Single").field(p).field(v).finish(),
            MSEMap::Multi(m) => f.debug_tuple("Multi").field(m).finish(),
        }
    }
}

impl<M: MTrieMap> MTrieMap for MSEMap<M> {
    type Key = M::Key;
    type Pattern = M::Pattern;
    type Value = M::Value;

    fn empty() -> Self {
        MSEMap::Empty
    }

    fn lookup_match<'a>(&'a self, key: &M::Key, eq: EqFn) -> Match<'a, &'a M::Value> {
        match self {
            MSEMap::Empty => Match::fail(),
            MSEMap::Single(pat, v) => M::match_single(pat, key, eq).then(Match::pure(v)),
            MSEMap::Multi(m) => m.lookup_match(key, eq),
        }
    }

    fn alter_pattern(&mut self, pat: &M::Pattern, tf: Tf<'_, M::Value>) {
        *self = match std::mem::take(self) {
            MSEMap::Empty => match tf(None) {
                None => MSEMap::Empty,
                Some(v) => MSEMap::Single(pat.clone(), v),
            },
            MSEMap::Single(p2, v2) => {
                if *pat == p2 {
                    match tf(Some(v2)) {
                        None => MSEMap::Empty,
                        Some(v) => MSEMap::Single(p2, v),
                    }
                } else {
                    match tf(None) {
                        None => MSEMap::Single(p2, v2),
                        Some(v1) => {
                            let mut m = M::empty();
                            m.alter_pattern(&p2, &mut |_| Some(v2.clone()));
                            m.alter_pattern(pat, &mut |_| Some(v1.clone()));
                            MSEMap::Multi(Arc::new(m))
                        }
                    }
                }
            }
            MSEMap::Multi(mut m) => {
                Arc::make_mut(&mut m).alter_pattern(pat, tf);
                MSEMap::Multi(m)
            }
        };
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a M::Value)) {
        match self {
            MSEMap::Empty => {}
            MSEMap::Single(_, v) => f(v),
            MSEMap::Multi(m) => m.for_each_value(f),
        }
    }

    fn match_single<'a>(pat: &M::Pattern, key: &M::Key, eq: EqFn) -> Match<'a, ()> {
        M::match_single(pat, key, eq)
    }
}

pub(crate) type MTrie<V> = MSEMap<MNode<V>>;

/// Same erasure as the exact trie: slots reached through an application's
/// function position hold the nested trie for the argument.
pub(crate) enum MSlot<V: Clone> {
    Val(V),
    Sub(Arc<MTrie<V>>),
}

impl<V: Clone> Clone for MSlot<V> {
    fn clone(&self) -> Self {
        match self {
            MSlot::Val(v) => MSlot::Val(v.clone()),
            MSlot::Sub(t) => MSlot::Sub(t.clone()),
        }
    }
}

impl<V: Clone> MSlot<V> {
    fn sub(&self) -> &MTrie<V> {
        match self {
            MSlot::Sub(t) => t,
            MSlot::Val(_) => unreachable!("application slots hold nested tries"),
        }
    }

    fn val(&self) -> &V {
        match self {
            MSlot::Val(v) => v,
            MSlot::Sub(_) => unreachable!("top-level slots hold values"),
        }
    }
}

impl<V: Clone + fmt::Debug> fmt::Debug for MSlot<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSlot::Val(v) => v.fmt(f),
            MSlot::Sub(t) => t.fmt(f),
        }
    }
}

pub(crate) struct MNode<V: Clone> {
    fvar: BTreeMap<VarName, MSlot<V>>,
    bvar: BTreeMap<DbLevel, MSlot<V>>,
    pvar: BTreeMap<PatKey, MSlot<V>>,
    app: MTrie<V>,
    lam: MTrie<V>,
}

impl<V: Clone> Clone for MNode<V> {
    fn clone(&self) -> Self {
        MNode {
            fvar: self.fvar.clone(),
            bvar: self.bvar.clone(),
            pvar: self.pvar.clone(),
            app: self.app.clone(),
            lam: self.lam.clone(),
        }
    }
}

impl<V: Clone + fmt::Debug> fmt::Debug for MNode<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MNode")
            .field("fvar", &self.fvar)
            .field("bvar", &self.bvar)
            .field("pvar", &self.pvar)
            .field("app", &self.app)
            .field("lam", &self.lam)
            .finish()
    }
}

impl<V: Clone> MTrieMap for MNode<V> {
    type Key = AlphaExpr;
    type Pattern = PatExpr;
    type Value = MSlot<V>;

    fn empty() -> Self {
        MNode {
            fvar: BTreeMap::new(),
            bvar: BTreeMap::new(),
            pvar: BTreeMap::new(),
            app: MSEMap::Empty,
            lam: MSEMap::Empty,
        }
    }

    fn lookup_match<'a>(&'a self, key: &AlphaExpr, eq: EqFn) -> Match<'a, &'a MSlot<V>> {
        let rigid = match &key.expr {
            Expr::Var(x) => match key.env.lookup(x) {
                Some(level) => lift_optional(self.bvar.get(&level)),
                None => lift_optional(self.fvar.get(x)),
            },
            Expr::App(fun, arg) => {
                let arg_key = key.with(arg);
                self.app
                    .lookup_match(&key.with(fun), eq)
                    .and_then(move |inner: &'a MSlot<V>| inner.sub().lookup_match(&arg_key, eq))
            }
            Expr::Lam(v, body) => self
                .lam
                .lookup_match(&AlphaExpr::new(key.env.extend(v), (**body).clone()), eq),
        };
        if self.pvar.is_empty() {
            return rigid;
        }
        let flexi =
            msum(self.pvar.iter().map(|(pk, slot)| {
                match_pat_var_with(*pk, key.clone(), eq).then(Match::pure(slot))
            }));
        rigid.or(flexi)
    }

    fn alter_pattern(&mut self, pat: &PatExpr, tf: Tf<'_, MSlot<V>>) {
        match &pat.body.expr {
            Expr::Var(x) => {
                if let Some(level) = pat.body.env.lookup(x) {
                    alter_btree(&mut self.bvar, &level, tf)
                } else if let Some(pk) = pat.pat_key(x) {
                    alter_btree(&mut self.pvar, &pk, tf)
                } else {
                    alter_btree(&mut self.fvar, x, tf)
                }
            }
            Expr::App(fun, arg) => {
                let arg_pat = pat.with(arg);
                self.app.alter_pattern(&pat.with(fun), &mut |inner| {
                    let mut inner = match inner {
                        None => Arc::new(MSEMap::Empty),
                        Some(MSlot::Sub(t)) => t,
                        Some(MSlot::Val(_)) => unreachable!("application slots hold nested tries"),
                    };
                    Arc::make_mut(&mut inner).alter_pattern(&arg_pat, tf);
                    Some(MSlot::Sub(inner))
                });
            }
            Expr::Lam(v, body) => self
                .lam
                .alter_pattern(&pat.with_env(pat.body.env.extend(v), body), tf),
        }
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a MSlot<V>)) {
        self.fvar.values().for_each(&mut *f);
        self.bvar.values().for_each(&mut *f);
        self.pvar.values().for_each(&mut *f);
        self.app
            .for_each_value(&mut |inner| inner.sub().for_each_value(f));
        self.lam.for_each_value(f);
    }

    fn match_single<'a>(pat: &PatExpr, key: &AlphaExpr, eq: EqFn) -> Match<'a, ()> {
        match_expr_with(pat, key, eq)
    }
}

fn census_trie<V: Clone>(t: &MTrie<V>) -> usize {
    match t {
        MSEMap::Empty => 1,
        MSEMap::Single(p, s) => 1 + p.body.expr.size() + census_slot(s),
        MSEMap::Multi(n) => {
            let leaves = |m: &mut dyn Iterator<Item = &MSlot<V>>| -> usize {
                m.map(|s| 1 + census_slot(s)).sum()
            };
            1 + leaves(&mut n.fvar.values())
                + leaves(&mut n.bvar.values())
                + leaves(&mut n.pvar.values())
                + census_field(&n.app)
                + census_field(&n.lam)
        }
    }
}

fn census_field<V: Clone>(t: &MTrie<V>) -> usize {
    if t.is_empty() {
        0
    } else {
        census_trie(t)
    }
}

fn census_slot<V: Clone>(s: &MSlot<V>) -> usize {
    match s {
        MSlot::Val(_) => 0,
        MSlot::Sub(t) => census_trie(t),
    }
}

/// Bindings of a match, by the pattern's own variable names, ascending.
pub type PatSubst = Vec<(VarName, Expr)>;

/// Map from patterns `(quantified vars, body)` to `V`, looked up by
/// matching. Each stored value carries the numbering of its pattern's
/// variables so that results can be reported by name.
///
/// ```
/// use exprtrie::{parse_expr, Expr, PatMap, VarName};
///
/// let p = VarName::new("p").unwrap();
/// let pat = parse_expr("(app (var f) (var p))").unwrap();
/// let pm = PatMap::new().insert(&[p.clone()], &pat, "rule");
///
/// let target = parse_expr("(app (var f) (var a))").unwrap();
/// let hits = pm.lookup(&target);
/// assert_eq!(hits, vec![(vec![(p, Expr::var("a"))], &"rule")]);
/// ```
pub struct PatMap<V: Clone> {
    trie: MTrie<(Arc<PatKeys>, V)>,
}

impl<V: Clone> Clone for PatMap<V> {
    fn clone(&self) -> Self {
        PatMap {
            trie: self.trie.clone(),
        }
    }
}

impl<V: Clone> Default for PatMap<V> {
    fn default() -> Self {
        PatMap::new()
    }
}

impl<V: Clone + fmt::Debug> fmt::Debug for PatMap<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatMap").field("trie", &self.trie).finish()
    }
}

impl<V: Clone> PatMap<V> {
    pub fn new() -> Self {
        PatMap {
            trie: MSEMap::Empty,
        }
    }

    /// Applies `tf` to the entry for pattern `(pvars, body)`. Patterns equal
    /// up to renaming of their quantified or lambda-bound variables share
    /// one entry.
    pub fn alter_in_place(
        &mut self,
        pvars: &[VarName],
        body: &Expr,
        mut tf: impl FnMut(Option<V>) -> Option<V>,
    ) {
        let pat = PatExpr::new(pvars, body.clone());
        let keys = Arc::clone(&pat.keys);
        self.trie.alter_pattern(&pat, &mut |slot| {
            let old = slot.map(|s| match s {
                MSlot::Val((_, v)) => v,
                MSlot::Sub(_) => unreachable!("top-level slots hold values"),
            });
            tf(old).map(|v| MSlot::Val((Arc::clone(&keys), v)))
        });
    }

    pub fn alter(
        &self,
        pvars: &[VarName],
        body: &Expr,
        tf: impl FnMut(Option<V>) -> Option<V>,
    ) -> Self {
        let mut m = self.clone();
        m.alter_in_place(pvars, body, tf);
        m
    }

    pub fn insert(&self, pvars: &[VarName], body: &Expr, v: V) -> Self {
        self.alter(pvars, body, move |_| Some(v.clone()))
    }

    pub fn insert_in_place(&mut self, pvars: &[VarName], body: &Expr, v: V) {
        self.alter_in_place(pvars, body, move |_| Some(v.clone()))
    }

    pub fn delete(&self, pvars: &[VarName], body: &Expr) -> Self {
        self.alter(pvars, body, |_| None)
    }

    /// Every stored pattern matching the closed expression `target`, with
    /// its bindings. Order: at each trie node, entries reached by following
    /// the target's constructor come before those reached through a
    /// pattern variable, and pattern variables are tried in canonical
    /// order. Variables that occur nowhere in the pattern get no binding.
    pub fn lookup(&self, target: &Expr) -> Vec<(PatSubst, &V)> {
        self.lookup_with_eq(target, eq_expr)
    }

    /// [`lookup`](Self::lookup) with a caller-supplied equality for repeated
    /// pattern variables. Used to check that test harnesses notice a broken
    /// equality.
    #[doc(hidden)]
    pub fn lookup_with_eq(&self, target: &Expr, eq: EqFn) -> Vec<(PatSubst, &V)> {
        self.trie
            .lookup_match(&AlphaExpr::closed(target.clone()), eq)
            .run()
            .into_iter()
            .map(|(subst, slot)| {
                let (keys, v) = slot.val();
                let named = keys
                    .iter()
                    .filter_map(|(name, pk)| subst.get(*pk).map(|e| (name.clone(), e.clone())))
                    .collect();
                (named, v)
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        self.trie.for_each_value(&mut |_| n += 1);
        n
    }

    /// Stored values in trie order.
    pub fn values(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.trie.for_each_value(&mut |s| out.push(&s.val().1));
        out
    }

    pub fn shape(&self) -> Shape {
        self.trie.shape()
    }

    /// Number of trie nodes, leaf-map entries and stored pattern
    /// constructors reachable from the root.
    pub fn census(&self) -> usize {
        census_trie(&self.trie)
    }
}
