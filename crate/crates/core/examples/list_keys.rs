//! Lists of expressions as keys, e.g. argument vectors of a call site.

use exprtrie::exprmap::ExprListMap;
use exprtrie::{parse_expr, AlphaExpr, TrieMap};

fn key(srcs: &[&str]) -> Vec<AlphaExpr> {
    srcs.iter()
        .map(|s| AlphaExpr::closed(parse_expr(s).unwrap()))
        .collect()
}

fn main() {
    let calls = [
        (vec!["(var a)", "(var b)"], 1),
        (vec!["(var a)"], 2),
        (vec![], 3),
        (vec!["(lam x (var x))", "(var b)"], 4),
    ];
    let mut m = ExprListMap::empty();
    for (k, v) in &calls {
        m.insert_in_place(&key(k), *v);
    }
    for probe in [
        vec!["(var a)", "(var b)"],
        vec!["(lam z (var z))", "(var b)"],
        vec![],
        vec!["(var b)"],
    ] {
        println!("{probe:?} -> {:?}", m.lookup(&key(&probe)));
    }
    let total = m.foldr(|v, acc| v + acc, 0);
    println!("{} entries, values sum to {total}", m.size());
}
