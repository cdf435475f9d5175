//! The generic finite-map interface shared by every trie in the crate, the
//! singleton-or-empty wrapper [`SEMap`], and the list-keyed trie
//! [`ListMap`].
//!
//! All tries are persistent: nodes live behind `Arc`s and are copied on
//! write, so the `&self` operations (`alter`, `insert`, `delete`, ...) leave
//! the receiver untouched and share every unchanged subtree with the result.
//! The `*_in_place` variants mutate the receiver, copying only nodes that are
//! shared with some other map.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A value transformer: the single primitive from which insertion and
/// deletion are derived.
pub type Tf<'f, V> = &'f mut dyn FnMut(Option<V>) -> Option<V>;

/// A finite map whose structure follows its key type.
///
/// Implementations must satisfy, for every key `k`, transformer `tf` and
/// map `m`:
///
/// * `empty().lookup(k) == None`
/// * `m.alter(k, tf).lookup(k) == tf(m.lookup(k))`
/// * `k1 != k2` implies `m.alter(k2, tf).lookup(k1) == m.lookup(k1)`
pub trait TrieMap: Clone {
    type Key: Clone;
    type Value: Clone;

    fn empty() -> Self;

    fn lookup(&self, key: &Self::Key) -> Option<&Self::Value>;

    fn alter_in_place(&mut self, key: &Self::Key, tf: Tf<'_, Self::Value>);

    /// Visits every value once, in the trie's deterministic order.
    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a Self::Value));

    /// Left-biased merge: on collision `f(left, right)`.
    fn union_with(
        self,
        other: Self,
        f: &mut dyn FnMut(Self::Value, Self::Value) -> Self::Value,
    ) -> Self;

    fn map_values(&self, f: &mut dyn FnMut(&Self::Value) -> Self::Value) -> Self;

    fn filter_values(&self, keep: &mut dyn FnMut(&Self::Value) -> bool) -> Self;

    fn alter(&self, key: &Self::Key, tf: Tf<'_, Self::Value>) -> Self {
        let mut m = self.clone();
        m.alter_in_place(key, tf);
        m
    }

    fn insert(&self, key: &Self::Key, value: Self::Value) -> Self {
        let mut m = self.clone();
        m.insert_in_place(key, value);
        m
    }

    fn insert_in_place(&mut self, key: &Self::Key, value: Self::Value) {
        let mut value = Some(value);
        self.alter_in_place(key, &mut |_| value.take());
    }

    fn delete(&self, key: &Self::Key) -> Self {
        self.alter(key, &mut |_| None)
    }

    fn delete_in_place(&mut self, key: &Self::Key) {
        self.alter_in_place(key, &mut |_| None);
    }

    /// Right fold over the values in visiting order:
    /// `f(v1, f(v2, ... f(vn, init)))`.
    fn foldr<R>(&self, mut f: impl FnMut(&Self::Value, R) -> R, init: R) -> R
    where
        Self: Sized,
    {
        self.elems()
            .into_iter()
            .rev()
            .fold(init, |acc, v| f(v, acc))
    }

    fn elems(&self) -> Vec<&Self::Value> {
        let mut out = Vec::new();
        self.for_each_value(&mut |v| out.push(v));
        out
    }

    fn size(&self) -> usize {
        let mut n = 0;
        self.for_each_value(&mut |_| n += 1);
        n
    }
}

/// Leaf maps are tries too.
impl<K: Ord + Clone, V: Clone> TrieMap for BTreeMap<K, V> {
    type Key = K;
    type Value = V;

    fn empty() -> Self {
        BTreeMap::new()
    }

    fn lookup(&self, key: &K) -> Option<&V> {
        self.get(key)
    }

    fn alter_in_place(&mut self, key: &K, tf: Tf<'_, V>) {
        alter_btree(self, key, tf);
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a V)) {
        self.values().for_each(f);
    }

    fn union_with(mut self, other: Self, f: &mut dyn FnMut(V, V) -> V) -> Self {
        union_btree(&mut self, other, f);
        self
    }

    fn map_values(&self, f: &mut dyn FnMut(&V) -> V) -> Self {
        self.iter().map(|(k, v)| (k.clone(), f(v))).collect()
    }

    fn filter_values(&self, keep: &mut dyn FnMut(&V) -> bool) -> Self {
        self.iter()
            .filter(|(_, v)| keep(v))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

pub(crate) fn alter_btree<K: Ord + Clone, V>(
    map: &mut BTreeMap<K, V>,
    key: &K,
    tf: &mut dyn FnMut(Option<V>) -> Option<V>,
) {
    let old = map.remove(key);
    if let Some(new) = tf(old) {
        map.insert(key.clone(), new);
    }
}

pub(crate) fn union_btree<K: Ord, V>(
    left: &mut BTreeMap<K, V>,
    right: BTreeMap<K, V>,
    f: &mut dyn FnMut(V, V) -> V,
) {
    for (k, r) in right {
        let merged = match left.remove(&k) {
            Some(l) => f(l, r),
            None => r,
        };
        left.insert(k, merged);
    }
}

/// Singleton-or-empty wrapper. Empty and one-entry maps are represented
/// directly, so a lookup that reaches a lone entry compares the remaining
/// key once instead of walking a chain of one-child nodes.
///
/// A `Multi` is never shrunk back to `Single` or `Empty`, even once its
/// entries have all been deleted.
pub enum SEMap<M: TrieMap> {
    Empty,
    Single(M::Key, M::Value),
    Multi(Arc<M>),
}

/// Which of the three representations a [`SEMap`] currently uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Empty,
    Single,
    Multi,
}

impl<M: TrieMap> SEMap<M> {
    pub fn shape(&self) -> Shape {
        match self {
            SEMap::Empty => Shape::Empty,
            SEMap::Single(..) => Shape::Single,
            SEMap::Multi(_) => Shape::Multi,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SEMap::Empty)
    }
}

impl<M: TrieMap> Clone for SEMap<M> {
    fn clone(&self) -> Self {
        match self {
            SEMap::Empty => SEMap::Empty,
            SEMap::Single(k, v) => SEMap::Single(k.clone(), v.clone()),
            SEMap::Multi(m) => SEMap::Multi(Arc::clone(m)),
        }
    }
}

// Derived Default would demand `M: Default`.
#[allow(clippy::derivable_impls)]
impl<M: TrieMap> Default for SEMap<M> {
    fn default() -> Self {
        SEMap::Empty
    }
}

impl<M> fmt::Debug for SEMap<M>
where
    M: TrieMap + fmt::Debug,
    M::Key: fmt::Debug,
    M::Value: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SEMap::Empty => f.write_str("Empty"),
            SEMap::Single(k, v) => f.debug_tuple("Single").field(k).field(v).finish(),
            SEMap::Multi(m) => f.debug_tuple("Multi").field(m).finish(),
        }
    }
}

impl<M> TrieMap for SEMap<M>
where
    M: TrieMap,
    M::Key: PartialEq,
{
    type Key = M::Key;
    type Value = M::Value;

    fn empty() -> Self {
        SEMap::Empty
    }

    fn lookup(&self, key: &M::Key) -> Option<&M::Value> {
        match self {
            SEMap::Empty => None,
            SEMap::Single(pk, v) => (key == pk).then_some(v),
            SEMap::Multi(m) => m.lookup(key),
        }
    }

    fn alter_in_place(&mut self, key: &M::Key, tf: Tf<'_, M::Value>) {
        *self = match std::mem::take(self) {
            SEMap::Empty => match tf(None) {
                None => SEMap::Empty,
                Some(v) => SEMap::Single(key.clone(), v),
            },
            SEMap::Single(k2, v2) => {
                if *key == k2 {
                    match tf(Some(v2)) {
                        None => SEMap::Empty,
                        Some(v) => SEMap::Single(k2, v),
                    }
                } else {
                    match tf(None) {
                        None => SEMap::Single(k2, v2),
                        Some(v1) => {
                            let mut m = M::empty();
                            m.insert_in_place(&k2, v2);
                            m.insert_in_place(key, v1);
                            SEMap::Multi(Arc::new(m))
                        }
                    }
                }
            }
            SEMap::Multi(mut m) => {
                Arc::make_mut(&mut m).alter_in_place(key, tf);
                SEMap::Multi(m)
            }
        };
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a M::Value)) {
        match self {
            SEMap::Empty => {}
            SEMap::Single(_, v) => f(v),
            SEMap::Multi(m) => m.for_each_value(f),
        }
    }

    fn union_with(self, other: Self, f: &mut dyn FnMut(M::Value, M::Value) -> M::Value) -> Self {
        match (self, other) {
            (SEMap::Empty, m) | (m, SEMap::Empty) => m,
            (SEMap::Single(k, v), mut m) => {
                let mut v = Some(v);
                m.alter_in_place(&k, &mut |old| {
                    let v = v.take().expect("transformer applied once");
                    Some(match old {
                        None => v,
                        Some(r) => f(v, r),
                    })
                });
                m
            }
            (mut m, SEMap::Single(k, v)) => {
                let mut v = Some(v);
                m.alter_in_place(&k, &mut |old| {
                    let v = v.take().expect("transformer applied once");
                    Some(match old {
                        None => v,
                        Some(l) => f(l, v),
                    })
                });
                m
            }
            (SEMap::Multi(a), SEMap::Multi(b)) => SEMap::Multi(Arc::new(
                unwrap_or_clone(a).union_with(unwrap_or_clone(b), f),
            )),
        }
    }

    fn map_values(&self, f: &mut dyn FnMut(&M::Value) -> M::Value) -> Self {
        match self {
            SEMap::Empty => SEMap::Empty,
            SEMap::Single(k, v) => SEMap::Single(k.clone(), f(v)),
            SEMap::Multi(m) => SEMap::Multi(Arc::new(m.map_values(f))),
        }
    }

    fn filter_values(&self, keep: &mut dyn FnMut(&M::Value) -> bool) -> Self {
        match self {
            SEMap::Empty => SEMap::Empty,
            SEMap::Single(k, v) if keep(v) => SEMap::Single(k.clone(), v.clone()),
            SEMap::Single(..) => SEMap::Empty,
            SEMap::Multi(m) => SEMap::Multi(Arc::new(m.filter_values(keep))),
        }
    }
}

pub(crate) fn unwrap_or_clone<T: Clone>(a: Arc<T>) -> T {
    Arc::try_unwrap(a).unwrap_or_else(|a| (*a).clone())
}

/// A family of tries indexed by value type, so that [`ListMap`] can nest
/// the element trie at its own value type.
pub trait TrieFamily {
    type Key: Clone + PartialEq;
    type Map<V: Clone>: TrieMap<Key = Self::Key, Value = V>;
}

/// Family of ordered leaf maps.
pub struct BTreeFamily<K>(std::marker::PhantomData<K>);

impl<K: Ord + Clone> TrieFamily for BTreeFamily<K> {
    type Key = K;
    type Map<V: Clone> = BTreeMap<K, V>;
}

/// Inner node of a list-keyed trie: the value for the empty list, and a trie
/// from the head element to the trie for the tail.
pub struct ListNode<F: TrieFamily, V: Clone> {
    nil: Option<V>,
    // The tail trie sits behind an `Arc` so that `Clone` on the element trie
    // does not have to be proven recursively through the family.
    cons: F::Map<Arc<ListMap<F, V>>>,
}

/// Trie keyed by lists of `F::Key`.
pub type ListMap<F, V> = SEMap<ListNode<F, V>>;

impl<F: TrieFamily, V: Clone> Clone for ListNode<F, V> {
    fn clone(&self) -> Self {
        ListNode {
            nil: self.nil.clone(),
            cons: self.cons.clone(),
        }
    }
}

impl<F: TrieFamily, V: Clone> TrieMap for ListNode<F, V> {
    type Key = Vec<F::Key>;
    type Value = V;

    fn empty() -> Self {
        ListNode {
            nil: None,
            cons: F::Map::empty(),
        }
    }

    fn lookup(&self, key: &Vec<F::Key>) -> Option<&V> {
        match key.split_first() {
            None => self.nil.as_ref(),
            Some((k, ks)) => self.cons.lookup(k)?.lookup(&ks.to_vec()),
        }
    }

    fn alter_in_place(&mut self, key: &Vec<F::Key>, tf: Tf<'_, V>) {
        match key.split_first() {
            None => self.nil = tf(self.nil.take()),
            Some((k, ks)) => {
                let rest = ks.to_vec();
                self.cons.alter_in_place(k, &mut |inner| {
                    let mut inner = inner.unwrap_or_default();
                    Arc::make_mut(&mut inner).alter_in_place(&rest, tf);
                    Some(inner)
                });
            }
        }
    }

    fn for_each_value<'a>(&'a self, f: &mut dyn FnMut(&'a V)) {
        if let Some(v) = &self.nil {
            f(v);
        }
        self.cons
            .for_each_value(&mut |inner| inner.for_each_value(f));
    }

    fn union_with(self, other: Self, f: &mut dyn FnMut(V, V) -> V) -> Self {
        let nil = match (self.nil, other.nil) {
            (Some(a), Some(b)) => Some(f(a, b)),
            (a, b) => a.or(b),
        };
        let cons = self.cons.union_with(other.cons, &mut |a, b| {
            Arc::new(unwrap_or_clone(a).union_with(unwrap_or_clone(b), f))
        });
        ListNode { nil, cons }
    }

    fn map_values(&self, f: &mut dyn FnMut(&V) -> V) -> Self {
        ListNode {
            nil: self.nil.as_ref().map(&mut *f),
            cons: self
                .cons
                .map_values(&mut |inner| Arc::new(inner.map_values(f))),
        }
    }

    fn filter_values(&self, keep: &mut dyn FnMut(&V) -> bool) -> Self {
        ListNode {
            nil: self.nil.clone().filter(|v| keep(v)),
            cons: self
                .cons
                .map_values(&mut |inner| Arc::new(inner.filter_values(keep))),
        }
    }
}
