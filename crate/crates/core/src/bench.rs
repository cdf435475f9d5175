//! Benchmark harness: deterministic random corpora, two baseline maps, and
//! timed suites comparing them against [`ExprMap`].
//!
//! * `TM` is [`ExprMap`].
//! * `OM` is a persistent ordered map keyed by [`alpha_compare`].
//! * `HM` is a persistent hash map keyed by [`alpha_hash`], with
//!   [`alpha_eq`] resolving collisions.
//!
//! Every suite also produces a functional [`Outcome`] (lookup hits, sums)
//! which must agree across the three implementations.

use std::collections::HashSet;
use std::fmt;
use std::hash::{BuildHasherDefault, Hash, Hasher};
use std::hint::black_box;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng as _, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::expr::{alpha_compare, alpha_eq, alpha_hash, AlphaExpr, Expr, VarName};
use crate::exprmap::ExprMap;
use crate::triemap::TrieMap;

/// splitmix64 stream; the same seed gives the same numbers everywhere.
#[derive(Debug, Clone)]
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        rand::RngCore::next_u64(&mut self.0)
    }

    /// Uniform in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        self.0.gen_range(0..n)
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: u64, hi: u64) -> u64 {
        self.0.gen_range(lo..=hi)
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }
}

/// Random expression of exactly `size` constructors. Leaves pick a bound
/// variable half the time when one is in scope, otherwise a name from
/// `free_pool`; inner nodes are applications two times out of three
/// (splitting the remaining size uniformly) and lambdas otherwise, binding
/// `b<depth>`.
pub fn gen_expr(
    rng: &mut Rng,
    size: usize,
    free_pool: &[VarName],
    bound_stack: &mut Vec<VarName>,
) -> Expr {
    assert!(size >= 1, "expression size must be positive");
    if size == 1 {
        let v = if !bound_stack.is_empty() && rng.chance(1, 2) {
            rng.pick(bound_stack).clone()
        } else {
            rng.pick(free_pool).clone()
        };
        return Expr::Var(v);
    }
    if size >= 3 && rng.chance(2, 3) {
        let left = rng.between(1, size as u64 - 2) as usize;
        let f = gen_expr(rng, left, free_pool, bound_stack);
        let a = gen_expr(rng, size - 1 - left, free_pool, bound_stack);
        return Expr::app(f, a);
    }
    let binder = VarName::new(&format!("b{}", bound_stack.len())).expect("valid binder name");
    bound_stack.push(binder.clone());
    let body = gen_expr(rng, size - 1, free_pool, bound_stack);
    bound_stack.pop();
    Expr::Lam(binder, body.into())
}

/// Names used for free variables in generated expressions.
pub fn default_free_pool() -> Vec<VarName> {
    (0..16)
        .map(|i| VarName::new(&format!("x{i}")).expect("valid name"))
        .collect()
}

/// Shared structure wrapped around every corpus expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrefixKind {
    None,
    /// `\$. e`
    Lam,
    /// `$ e`
    App1,
    /// `e $`
    App2,
}

const PREFIX_VAR: &str = "$";

/// Wraps `layers` layers of `kind` around `e`.
pub fn wrap_prefix(kind: PrefixKind, layers: usize, e: Expr) -> Expr {
    let dollar = || Expr::var(PREFIX_VAR);
    (0..layers).fold(e, |e, _| match kind {
        PrefixKind::None => e,
        PrefixKind::Lam => Expr::lam(PREFIX_VAR, e),
        PrefixKind::App1 => Expr::app(dollar(), e),
        PrefixKind::App2 => Expr::app(e, dollar()),
    })
}

/// Closed key compared and hashed modulo alpha.
#[derive(Clone)]
pub struct ClosedKey(AlphaExpr);

impl ClosedKey {
    pub fn new(e: &Expr) -> ClosedKey {
        ClosedKey(AlphaExpr::closed(e.clone()))
    }
}

impl PartialEq for ClosedKey {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(&self.0, &other.0)
    }
}

impl Eq for ClosedKey {}

impl PartialOrd for ClosedKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClosedKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        alpha_compare(&self.0, &other.0)
    }
}

impl Hash for ClosedKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(alpha_hash(&self.0));
    }
}

/// Passes the precomputed alpha hash through unchanged.
#[derive(Default)]
pub struct PassThroughHasher(u64);

impl Hasher for PassThroughHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ u64::from(b);
        }
    }

    fn write_u64(&mut self, n: u64) {
        self.0 = n;
    }
}

/// M distinct (modulo alpha) random expressions, each wrapped in the same
/// prefix. Sizes are uniform in `[E/2, 3E/2]`.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub exprs: Vec<Expr>,
    pub map_size: usize,
    pub expr_size: usize,
    pub seed: u64,
    pub prefix: PrefixKind,
    pub prefix_len: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("unknown implementation {0:?}")]
    UnknownImpl(String),
    #[error("expression size must be at least 1")]
    EmptyExprSize,
    #[error("cannot find {wanted} distinct expressions of size about {size}")]
    CorpusExhausted { wanted: usize, size: usize },
    #[error("reps must be at least 1")]
    NoReps,
    #[error("{suite}: implementations disagree: {detail}")]
    Disagreement { suite: String, detail: String },
}

fn size_range(expr_size: usize) -> (u64, u64) {
    let lo = (expr_size / 2).max(1) as u64;
    let hi = (expr_size + expr_size / 2).max(1) as u64;
    (lo, hi)
}

impl Corpus {
    pub fn generate(
        map_size: usize,
        expr_size: usize,
        seed: u64,
        prefix: PrefixKind,
        prefix_len: usize,
    ) -> Result<Corpus, BenchError> {
        if expr_size == 0 {
            return Err(BenchError::EmptyExprSize);
        }
        let mut rng = Rng::new(seed);
        let pool = default_free_pool();
        let (lo, hi) = size_range(expr_size);
        let mut seen = HashSet::<ClosedKey, BuildHasherDefault<PassThroughHasher>>::default();
        let mut exprs = Vec::with_capacity(map_size);
        // Duplicates are regenerated; give up once they dominate.
        let mut budget = 20 * map_size + 1000;
        while exprs.len() < map_size {
            if budget == 0 {
                return Err(BenchError::CorpusExhausted {
                    wanted: map_size,
                    size: expr_size,
                });
            }
            budget -= 1;
            let size = rng.between(lo, hi) as usize;
            let e = gen_expr(&mut rng, size, &pool, &mut Vec::new());
            if seen.insert(ClosedKey::new(&e)) {
                exprs.push(e);
            }
        }
        let exprs = exprs
            .into_iter()
            .map(|e| wrap_prefix(prefix, prefix_len, e))
            .collect();
        Ok(Corpus {
            exprs,
            map_size,
            expr_size,
            seed,
            prefix,
            prefix_len,
        })
    }

    /// A fresh expression, not alpha-equivalent to any corpus member, with
    /// the corpus's prefix.
    pub fn fresh_key(&self) -> Expr {
        let mut rng = Rng::new(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        let pool = default_free_pool();
        let (lo, hi) = size_range(self.expr_size);
        let members: HashSet<ClosedKey, BuildHasherDefault<PassThroughHasher>> =
            self.exprs.iter().map(ClosedKey::new).collect();
        loop {
            let size = rng.between(lo, hi) as usize;
            let e = gen_expr(&mut rng, size, &pool, &mut Vec::new());
            let e = wrap_prefix(self.prefix, self.prefix_len, e);
            if !members.contains(&ClosedKey::new(&e)) {
                return e;
            }
        }
    }

    /// Entries with their position as value.
    pub fn entries(&self) -> Vec<(Expr, i64)> {
        self.exprs
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as i64))
            .collect()
    }

    pub fn total_key_size(&self) -> usize {
        self.exprs.iter().map(Expr::size).sum()
    }
}

/// A finite map from closed expressions to `i64` as seen by the suites.
pub trait BenchMap: Clone {
    const NAME: &'static str;
    fn empty() -> Self;
    fn insert(&mut self, k: &Expr, v: i64);
    fn lookup(&self, k: &Expr) -> Option<i64>;
    /// Union, adding the values of keys present in both.
    fn union_add(&self, other: &Self) -> Self;
    fn fold_sum(&self) -> i64;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Bulk construction; the baselines use their library's own.
    fn from_list(entries: &[(Expr, i64)]) -> Self;
    /// Representation size in the same units as [`ExprMap::census`].
    fn node_count(&self) -> usize;
}

impl BenchMap for ExprMap<i64> {
    const NAME: &'static str = "TM";

    fn empty() -> Self {
        ExprMap::new()
    }

    fn insert(&mut self, k: &Expr, v: i64) {
        self.insert_closed_in_place(k, v);
    }

    fn lookup(&self, k: &Expr) -> Option<i64> {
        self.lookup_closed(k).copied()
    }

    fn union_add(&self, other: &Self) -> Self {
        self.clone().union_with(other.clone(), &mut |a, b| a + b)
    }

    fn fold_sum(&self) -> i64 {
        let mut sum = 0;
        self.for_each_value(&mut |v| sum += v);
        sum
    }

    fn len(&self) -> usize {
        self.size()
    }

    // Deliberately naive: a fold of single insertions.
    fn from_list(entries: &[(Expr, i64)]) -> Self {
        let mut m = ExprMap::new();
        for (k, v) in entries {
            m.insert_closed_in_place(k, *v);
        }
        m
    }

    fn node_count(&self) -> usize {
        self.census()
    }
}

/// Ordered-map baseline.
pub type OrdBaseline = im::OrdMap<ClosedKey, i64>;

/// Hash-map baseline.
pub type HashBaseline = im::HashMap<ClosedKey, i64, BuildHasherDefault<PassThroughHasher>>;

// One node per entry, plus the key's constructors.
fn entry_census<'a>(keys: impl Iterator<Item = &'a ClosedKey>) -> usize {
    1 + keys.map(|k| 1 + k.0.expr.size()).sum::<usize>()
}

impl BenchMap for OrdBaseline {
    const NAME: &'static str = "OM";

    fn empty() -> Self {
        im::OrdMap::new()
    }

    fn insert(&mut self, k: &Expr, v: i64) {
        im::OrdMap::insert(self, ClosedKey::new(k), v);
    }

    fn lookup(&self, k: &Expr) -> Option<i64> {
        self.get(&ClosedKey::new(k)).copied()
    }

    fn union_add(&self, other: &Self) -> Self {
        self.clone().union_with(other.clone(), |a, b| a + b)
    }

    fn fold_sum(&self) -> i64 {
        self.values().sum()
    }

    fn len(&self) -> usize {
        im::OrdMap::len(self)
    }

    fn from_list(entries: &[(Expr, i64)]) -> Self {
        entries
            .iter()
            .map(|(k, v)| (ClosedKey::new(k), *v))
            .collect()
    }

    fn node_count(&self) -> usize {
        entry_census(self.keys())
    }
}

impl BenchMap for HashBaseline {
    const NAME: &'static str = "HM";

    fn empty() -> Self {
        im::HashMap::default()
    }

    fn insert(&mut self, k: &Expr, v: i64) {
        im::HashMap::insert(self, ClosedKey::new(k), v);
    }

    fn lookup(&self, k: &Expr) -> Option<i64> {
        self.get(&ClosedKey::new(k)).copied()
    }

    fn union_add(&self, other: &Self) -> Self {
        self.clone().union_with(other.clone(), |a, b| a + b)
    }

    fn fold_sum(&self) -> i64 {
        self.values().sum()
    }

    fn len(&self) -> usize {
        im::HashMap::len(self)
    }

    fn from_list(entries: &[(Expr, i64)]) -> Self {
        entries
            .iter()
            .map(|(k, v)| (ClosedKey::new(k), *v))
            .collect()
    }

    fn node_count(&self) -> usize {
        entry_census(self.keys())
    }
}

/// Which map implementation a suite runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Impl {
    Tm,
    Om,
    Hm,
}

impl Impl {
    pub const ALL: [Impl; 3] = [Impl::Tm, Impl::Om, Impl::Hm];

    pub fn name(self) -> &'static str {
        match self {
            Impl::Tm => "TM",
            Impl::Om => "OM",
            Impl::Hm => "HM",
        }
    }
}

impl fmt::Display for Impl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Impl {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Impl, BenchError> {
        match s.to_ascii_lowercase().as_str() {
            "tm" => Ok(Impl::Tm),
            "om" => Ok(Impl::Om),
            "hm" => Ok(Impl::Hm),
            _ => Err(BenchError::UnknownImpl(s.to_string())),
        }
    }
}

/// The benchmark suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Lookup,
    LookupLam,
    LookupApp1,
    LookupApp2,
    LookupOne,
    InsertLookupOne,
    FromList,
    FromListApp1,
    Union,
    Fold,
    Space,
    SpaceLam,
    SpaceApp1,
    SpaceApp2,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Lookup,
        Suite::LookupLam,
        Suite::LookupApp1,
        Suite::LookupApp2,
        Suite::LookupOne,
        Suite::InsertLookupOne,
        Suite::FromList,
        Suite::FromListApp1,
        Suite::Union,
        Suite::Fold,
        Suite::Space,
        Suite::SpaceLam,
        Suite::SpaceApp1,
        Suite::SpaceApp2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lookup => "lookup",
            Suite::LookupLam => "lookup_lam",
            Suite::LookupApp1 => "lookup_app1",
            Suite::LookupApp2 => "lookup_app2",
            Suite::LookupOne => "lookup_one",
            Suite::InsertLookupOne => "insert_lookup_one",
            Suite::FromList => "fromList",
            Suite::FromListApp1 => "fromList_app1",
            Suite::Union => "union",
            Suite::Fold => "fold",
            Suite::Space => "space",
            Suite::SpaceLam => "space_lam",
            Suite::SpaceApp1 => "space_app1",
            Suite::SpaceApp2 => "space_app2",
        }
    }

    pub fn prefix(self) -> PrefixKind {
        match self {
            Suite::LookupLam | Suite::SpaceLam => PrefixKind::Lam,
            Suite::LookupApp1 | Suite::FromListApp1 | Suite::SpaceApp1 => PrefixKind::App1,
            Suite::LookupApp2 | Suite::SpaceApp2 => PrefixKind::App2,
            _ => PrefixKind::None,
        }
    }

    /// Space suites report a node census instead of a timing.
    pub fn is_space(self) -> bool {
        matches!(
            self,
            Suite::Space | Suite::SpaceLam | Suite::SpaceApp1 | Suite::SpaceApp2
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Suite, BenchError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| BenchError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchParams {
    pub map_size: usize,
    pub expr_size: usize,
    pub seed: u64,
    pub reps: usize,
    pub prefix_len: usize,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            map_size: 10_000,
            expr_size: 100,
            seed: 42,
            reps: 5,
            prefix_len: 100,
        }
    }
}

/// Functional result of a suite run, compared across implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    /// Successful lookups, or entries in the resulting map.
    pub count: usize,
    /// Sum of the values found or stored.
    pub sum: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub suite: Suite,
    pub imp: Impl,
    pub map_size: usize,
    pub expr_size: usize,
    pub seed: u64,
    pub reps: usize,
    pub op_count: usize,
    /// Minimum over the repetitions.
    pub total_ns: u128,
    pub per_op_ns: f64,
    pub node_count: Option<usize>,
    pub outcome: Outcome,
}

pub const CSV_HEADER: [&str; 9] = [
    "suite",
    "impl",
    "M",
    "E",
    "seed",
    "reps",
    "total_ns",
    "per_op_ns",
    "node_count",
];

impl BenchResult {
    pub fn csv_record(&self) -> [String; 9] {
        [
            self.suite.name().to_string(),
            self.imp.name().to_string(),
            self.map_size.to_string(),
            self.expr_size.to_string(),
            self.seed.to_string(),
            self.reps.to_string(),
            self.total_ns.to_string(),
            format!("{:.1}", self.per_op_ns),
            self.node_count.map(|n| n.to_string()).unwrap_or_default(),
        ]
    }
}

/// Writes the header and one row per result.
pub fn write_csv<W: io::Write>(out: W, results: &[BenchResult]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

/// One warmup run, then `reps` timed runs; returns the fastest time and
/// the outcome, which must not vary between runs.
fn time_min(reps: usize, mut run: impl FnMut() -> Outcome) -> (u128, Outcome) {
    let first = run();
    let mut best = u128::MAX;
    for _ in 0..reps {
        let start = Instant::now();
        let out = run();
        let ns = start.elapsed().as_nanos();
        assert_eq!(out, first, "suite outcome changed between runs");
        best = best.min(ns);
    }
    (best, first)
}

fn lookup_all<M: BenchMap>(m: &M, keys: &[Expr]) -> Outcome {
    let mut count = 0;
    let mut sum = 0;
    for k in keys {
        if let Some(v) = black_box(m.lookup(black_box(k))) {
            count += 1;
            sum += v;
        }
    }
    Outcome { count, sum }
}

fn map_outcome<M: BenchMap>(m: &M) -> Outcome {
    Outcome {
        count: m.len(),
        sum: m.fold_sum(),
    }
}

fn run_on<M: BenchMap>(
    suite: Suite,
    corpus: &Corpus,
    reps: usize,
) -> (usize, u128, Outcome, Option<usize>) {
    let entries = corpus.entries();
    let m = corpus.map_size;
    let built = || M::from_list(&entries);
    match suite {
        Suite::Lookup | Suite::LookupLam | Suite::LookupApp1 | Suite::LookupApp2 => {
            let map = built();
            let (ns, out) = time_min(reps, || lookup_all(&map, &corpus.exprs));
            (m, ns, out, None)
        }
        Suite::LookupOne => {
            let map = built();
            let key = &corpus.exprs[..1.min(corpus.exprs.len())];
            let (ns, out) = time_min(reps, || lookup_all(&map, key));
            (1, ns, out, None)
        }
        Suite::InsertLookupOne => {
            let map = built();
            let key = corpus.fresh_key();
            let v = m as i64;
            let (ns, out) = time_min(reps, || {
                let mut m2 = map.clone();
                m2.insert(&key, v);
                lookup_all(&m2, std::slice::from_ref(&key))
            });
            (1, ns, out, None)
        }
        Suite::FromList | Suite::FromListApp1 => {
            let (ns, out) = time_min(reps, || map_outcome(&black_box(M::from_list(&entries))));
            (m, ns, out, None)
        }
        Suite::Union => {
            let half = entries.len() / 2;
            let left = M::from_list(&entries[..half]);
            let right = M::from_list(&entries[half..]);
            let mut merged = None;
            let (ns, _) = time_min(reps, || {
                let u = black_box(left.union_add(&right));
                let out = Outcome {
                    count: u.len(),
                    sum: 0,
                };
                merged = Some(u);
                out
            });
            let out = map_outcome(&merged.expect("at least one run"));
            (m, ns, out, None)
        }
        Suite::Fold => {
            let map = built();
            let (ns, out) = time_min(reps, || Outcome {
                count: map.len(),
                sum: black_box(map.fold_sum()),
            });
            (m, ns, out, None)
        }
        Suite::Space | Suite::SpaceLam | Suite::SpaceApp1 | Suite::SpaceApp2 => {
            let map = built();
            let nodes = map.node_count();
            (m, 0, map_outcome(&map), Some(nodes))
        }
    }
}

/// Corpus for `suite` under `params`.
pub fn corpus_for(suite: Suite, params: &BenchParams) -> Result<Corpus, BenchError> {
    Corpus::generate(
        params.map_size,
        params.expr_size,
        params.seed,
        suite.prefix(),
        params.prefix_len,
    )
}

/// Runs `suite` on a prebuilt corpus.
pub fn run_suite_on(
    suite: Suite,
    imp: Impl,
    corpus: &Corpus,
    reps: usize,
) -> Result<BenchResult, BenchError> {
    if reps == 0 {
        return Err(BenchError::NoReps);
    }
    let (op_count, total_ns, outcome, node_count) = match imp {
        Impl::Tm => run_on::<ExprMap<i64>>(suite, corpus, reps),
        Impl::Om => run_on::<OrdBaseline>(suite, corpus, reps),
        Impl::Hm => run_on::<HashBaseline>(suite, corpus, reps),
    };
    Ok(BenchResult {
        suite,
        imp,
        map_size: corpus.map_size,
        expr_size: corpus.expr_size,
        seed: corpus.seed,
        reps,
        op_count,
        total_ns,
        per_op_ns: if op_count == 0 {
            0.0
        } else {
            total_ns as f64 / op_count as f64
        },
        node_count,
        outcome,
    })
}

pub fn run_suite(suite: Suite, imp: Impl, params: &BenchParams) -> Result<BenchResult, BenchError> {
    run_suite_on(suite, imp, &corpus_for(suite, params)?, params.reps)
}

/// Runs every (suite, impl) cell and checks that the implementations
/// agree on each suite's outcome.
pub fn run_cells(
    suites: &[Suite],
    impls: &[Impl],
    params: &BenchParams,
) -> Result<Vec<BenchResult>, BenchError> {
    let mut results = Vec::new();
    for &suite in suites {
        let corpus = corpus_for(suite, params)?;
        let cells = impls
            .iter()
            .map(|&imp| run_suite_on(suite, imp, &corpus, params.reps))
            .collect::<Result<Vec<_>, _>>()?;
        check_agreement(&cells)?;
        results.extend(cells);
    }
    Ok(results)
}

/// All results for one suite must report the same outcome.
pub fn check_agreement(cells: &[BenchResult]) -> Result<(), BenchError> {
    if let Some(first) = cells.first() {
        for c in &cells[1..] {
            if c.outcome != first.outcome {
                return Err(BenchError::Disagreement {
                    suite: first.suite.name().to_string(),
                    detail: format!(
                        "{} {:?} vs {} {:?}",
                        first.imp, first.outcome, c.imp, c.outcome
                    ),
                });
            }
        }
    }
    Ok(())
}
