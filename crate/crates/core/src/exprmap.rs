//! The exact, alpha-insensitive triemap keyed by [`AlphaExpr`].
//!
//! A node has one field per expression constructor: free variables are
//! keyed by name, bound variables by De Bruijn level, lambdas by their body
//! (read under the extended environment), and applications by a trie over
//! the function whose values are tries over the argument.
//!
//! That last field is polymorphically recursive (a trie of tries of `V`),
//! which Rust cannot monomorphise. Values are therefore stored as [`Slot`]s:
//! a slot at the outermost level holds a `V`, while every slot reached
//! through an application's function position holds the nested trie for the
//! argument. The shape of a key decides which kind a slot is, so the two
//! never mix at any one level.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::expr::{AlphaExpr, DbLevel, Expr, VarName};
use crate::triemap::{
    alter_btree, union_btree, unwrap_or_clone, SEMap, Shape, Tf, TrieFamily, TrieMap,
};

pub(crate) type Trie<V> = SEMap<ExprNode<V>>;

pub(crate) enum Slot<V: Clone> {
    Val(V),
    Sub(Arc<Trie<V>>),
}

impl<V: Clone> Clone for Slot<V> {
    fn clone(&self) -> Self {
        match self {
            Slot::Val(v) => Slot::Val(v.clone()),
            Slot::Sub(t) => Slot::Sub(t.clone()),
        }
    }
}

impl<V: Clone> Slot<V> {
    fn sub(&self) -> &Trie<V> {
        match self {
            Slot::Sub(t) => t,
            Slot::Val(_) => unreachable!("application slots hold nested tries"),
        }
    }

    fn into_sub(self) -> Trie<V> {
        match self {
            Slot::Sub(t) => unwrap_or_clone(t),
            Slot::Val(_) => unreachable!("application slots hold nested tries"),
        }
    }

    fn val(&self) -> &V {
        match self {
            Slot::Val(v) => v,
            Slot::Sub(_) => unreachable!("top-level slots hold values"),
        }
    }

    fn into_val(self) -> V {
        match self {
            Slot::Val(v) => v,
            Slot::Sub(_) => unreachable!("top-level slots hold values"),
        }
    }
}

impl<V: Clone + fmt::Debug> fmt::Debug for Slot<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Val(v) => v.fmt(f),
            Slot::Sub(t) => t.fmt(f),
        }
    }
}

pub(crate) struct ExprNode<V: Clone> {
    fvar: BTreeMap<VarName, Slot<V>>,
    bvar: BTreeMap<DbLevel, Slot<V>>,
    app: Trie<V>,
    lam: Trie<V>,
}

impl<V: Clone> Clone for ExprNode<V> {
    fn clone(&self) -> Self {
        ExprNode {
            fvar: self.fvar.clone(),
            bvar: self.bvar.clone(),
            app: self.app.clone(),
            lam: self.lam.clone(),
        }
    }
}

impl<V: Clone + fmt::Debug> fmt::Debug for ExprNode<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExprNode")
            .field("fvar", &self.fvar)
            .field("bvar", &self.bvar)
            .field("app", &self.app)
            .field("lam", &self.lam)
            .finish()
    }
}

impl<V: Clone> TrieMap for ExprNode<V> {
    type Key = AlphaExpr;
    type Value = Slot<V>;

    fn empty() -> Self {
        ExprNode {
            fvar: BTreeMap::new(),
            bvar: BTreeMap::new(),
            app: SEMap::Empty,
            lam: SEMap::Empty,
        }
    }

    fn lookup(&self, key: &AlphaExpr) -> Option<&Slot<V>> {
        match &key.expr {
            Expr::Var(x) => match key.env.lookup(x) {
                Some(level) => self.bvar.get(&level),
                None => self.fvar.get(x),
            },
            Expr::App(fun, arg) => self
                .app
                .lookup(&key.with(fun))?
                .sub()
                .lookup(&key.with(arg)),
            Expr::Lam(v, body) => self
                .lam
                .lookup(&AlphaExpr::new(key.env.extend(v), (**body).clone())),
        }
    }

    fn alter_in_place(&mut self, key: &AlphaExpr, tf: Tf<'_, Slot<V>>) {
        match &key.expr {
            Expr::Var(x) => match key.env.lookup(x) {
                Some(level) => alter_btree(&mut self.bvar, &level, tf),
                None => alter_btree(&mut self.fvar, x, tf),
            },
            Expr::App(fun, arg) => {
                let arg_key = key.with(arg);
                self.app.alter_in_place(&key.with(fun), &mut |inner| {
                    let mut inner = match inner {
                        None => Arc::new(SEMap::Empty),
                        Some(Slot::Sub(t)) => t,
                        Some(Slot::Val(_)) => unreachable!("application slots hold nested tries"),
                    };
                    Arc::make_mut(&mut inner).alter_in_place(&arg_key, tf);
                    Some(Slot::Sub(inner))
                });
            }
            Expr::Lam(v, body) => self
                .lam
                .alter_in_place(&AlphaExpr::new(key.env.extend(v), (**body).clone()), tf),
        }
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a Slot<V>)) {
        self.fvar.values().for_each(&mut *f);
        self.bvar.values().for_each(&mut *f);
        self.app
            .for_each_value(&mut |inner| inner.sub().for_each_value(f));
        self.lam.for_each_value(f);
    }

    fn union_with(mut self, other: Self, f: &mut dyn FnMut(Slot<V>, Slot<V>) -> Slot<V>) -> Self {
        union_btree(&mut self.fvar, other.fvar, f);
        union_btree(&mut self.bvar, other.bvar, f);
        let app = self.app.union_with(other.app, &mut |a, b| {
            Slot::Sub(Arc::new(a.into_sub().union_with(b.into_sub(), f)))
        });
        let lam = self.lam.union_with(other.lam, f);
        ExprNode {
            fvar: self.fvar,
            bvar: self.bvar,
            app,
            lam,
        }
    }

    fn map_values(&self, f: &mut dyn FnMut(&Slot<V>) -> Slot<V>) -> Self {
        ExprNode {
            fvar: self.fvar.map_values(f),
            bvar: self.bvar.map_values(f),
            app: self
                .app
                .map_values(&mut |inner| Slot::Sub(Arc::new(inner.sub().map_values(f)))),
            lam: self.lam.map_values(f),
        }
    }

    fn filter_values(&self, keep: &mut dyn FnMut(&Slot<V>) -> bool) -> Self {
        ExprNode {
            fvar: self.fvar.filter_values(keep),
            bvar: self.bvar.filter_values(keep),
            app: self
                .app
                .map_values(&mut |inner| Slot::Sub(Arc::new(inner.sub().filter_values(keep)))),
            lam: self.lam.filter_values(keep),
        }
    }
}

fn map_trie<V: Clone, W: Clone>(t: &Trie<V>, f: &mut dyn FnMut(&V) -> W) -> Trie<W> {
    match t {
        SEMap::Empty => SEMap::Empty,
        SEMap::Single(k, s) => SEMap::Single(k.clone(), map_slot(s, f)),
        SEMap::Multi(n) => SEMap::Multi(Arc::new(ExprNode {
            fvar: n
                .fvar
                .iter()
                .map(|(k, s)| (k.clone(), map_slot(s, f)))
                .collect(),
            bvar: n.bvar.iter().map(|(k, s)| (*k, map_slot(s, f))).collect(),
            app: map_trie(&n.app, f),
            lam: map_trie(&n.lam, f),
        })),
    }
}

fn map_slot<V: Clone, W: Clone>(s: &Slot<V>, f: &mut dyn FnMut(&V) -> W) -> Slot<W> {
    match s {
        Slot::Val(v) => Slot::Val(f(v)),
        Slot::Sub(t) => Slot::Sub(Arc::new(map_trie(t, f))),
    }
}

fn census_trie<V: Clone>(t: &Trie<V>) -> usize {
    match t {
        SEMap::Empty => 1,
        SEMap::Single(k, s) => 1 + k.expr.size() + census_slot(s),
        SEMap::Multi(n) => {
            let leaves = |m: &mut dyn Iterator<Item = &Slot<V>>| -> usize {
                m.map(|s| 1 + census_slot(s)).sum()
            };
            1 + leaves(&mut n.fvar.values())
                + leaves(&mut n.bvar.values())
                + census_field(&n.app)
                + census_field(&n.lam)
        }
    }
}

// An empty field inside a node is an absent child, not a node.
fn census_field<V: Clone>(t: &Trie<V>) -> usize {
    if t.is_empty() {
        0
    } else {
        census_trie(t)
    }
}

fn census_slot<V: Clone>(s: &Slot<V>) -> usize {
    match s {
        Slot::Val(_) => 0,
        Slot::Sub(t) => census_trie(t),
    }
}

/// Finite map from expressions, modulo alpha-renaming, to `V`.
///
/// ```
/// use exprtrie::{parse_expr, ExprMap};
///
/// let id_x = parse_expr("(lam x (var x))").unwrap();
/// let id_y = parse_expr("(lam y (var y))").unwrap();
/// let m = ExprMap::new().insert_closed(&id_x, 7);
/// assert_eq!(m.lookup_closed(&id_y), Some(&7));
/// ```
pub struct ExprMap<V: Clone> {
    trie: Trie<V>,
}

impl<V: Clone> Clone for ExprMap<V> {
    fn clone(&self) -> Self {
        ExprMap {
            trie: self.trie.clone(),
        }
    }
}

impl<V: Clone> Default for ExprMap<V> {
    fn default() -> Self {
        ExprMap::new()
    }
}

impl<V: Clone + fmt::Debug> fmt::Debug for ExprMap<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.trie.fmt(f)
    }
}

impl<V: Clone> ExprMap<V> {
    pub fn new() -> Self {
        ExprMap { trie: SEMap::Empty }
    }

    pub fn lookup_closed(&self, e: &Expr) -> Option<&V> {
        self.lookup(&AlphaExpr::closed(e.clone()))
    }

    pub fn insert_closed(&self, e: &Expr, v: V) -> Self {
        self.insert(&AlphaExpr::closed(e.clone()), v)
    }

    pub fn insert_closed_in_place(&mut self, e: &Expr, v: V) {
        self.insert_in_place(&AlphaExpr::closed(e.clone()), v)
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Applies `f` to every value, possibly changing the value type.
    pub fn map<W: Clone>(&self, mut f: impl FnMut(&V) -> W) -> ExprMap<W> {
        ExprMap {
            trie: map_trie(&self.trie, &mut f),
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(&V) -> bool) -> Self {
        self.filter_values(&mut keep)
    }

    /// Representation of the root.
    pub fn shape(&self) -> Shape {
        self.trie.shape()
    }

    /// Counts trie nodes, leaf-map entries and the constructors of keys
    /// stored in singleton nodes. The empty map counts 1.
    pub fn census(&self) -> usize {
        census_trie(&self.trie)
    }
}

impl<V: Clone> TrieMap for ExprMap<V> {
    type Key = AlphaExpr;
    type Value = V;

    fn empty() -> Self {
        ExprMap::new()
    }

    fn lookup(&self, key: &AlphaExpr) -> Option<&V> {
        self.trie.lookup(key).map(Slot::val)
    }

    fn alter_in_place(&mut self, key: &AlphaExpr, tf: Tf<'_, V>) {
        self.trie
            .alter_in_place(key, &mut |old| tf(old.map(Slot::into_val)).map(Slot::Val));
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a V)) {
        self.trie.for_each_value(&mut |s| f(s.val()));
    }

    fn union_with(self, other: Self, f: &mut dyn FnMut(V, V) -> V) -> Self {
        ExprMap {
            trie: self.trie.union_with(other.trie, &mut |a, b| {
                Slot::Val(f(a.into_val(), b.into_val()))
            }),
        }
    }

    fn map_values(&self, f: &mut dyn FnMut(&V) -> V) -> Self {
        ExprMap {
            trie: map_trie(&self.trie, f),
        }
    }

    fn filter_values(&self, keep: &mut dyn FnMut(&V) -> bool) -> Self {
        ExprMap {
            trie: self.trie.filter_values(&mut |s| keep(s.val())),
        }
    }
}

/// [`ExprMap`] as a [`TrieFamily`], for use as the element trie of a
/// [`ListMap`](crate::triemap::ListMap).
pub struct ExprFamily;

impl TrieFamily for ExprFamily {
    type Key = AlphaExpr;
    type Map<V: Clone> = ExprMap<V>;
}

/// Trie keyed by lists of expressions.
pub type ExprListMap<V> = crate::triemap::ListMap<ExprFamily, V>;
