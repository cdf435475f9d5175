//! A small rewrite-rule database: find every rule whose left-hand side
//! matches a term, then instantiate its right-hand side.

use exprtrie::matching::{apply_subst, PatExpr};
use exprtrie::{parse_expr, PatMap, Subst, VarName};

struct Rule {
    name: &'static str,
    vars: &'static [&'static str],
    lhs: &'static str,
    rhs: &'static str,
}

const RULES: &[Rule] = &[
    Rule {
        name: "map/map",
        vars: &["f", "g", "xs"],
        lhs: "(app (app (var map) (var f)) (app (app (var map) (var g)) (var xs)))",
        rhs: "(app (app (var map) (lam v (app (var f) (app (var g) (var v))))) (var xs))",
    },
    Rule {
        name: "map/id",
        vars: &["xs"],
        lhs: "(app (app (var map) (lam x (var x))) (var xs))",
        rhs: "(var xs)",
    },
    Rule {
        name: "beta/const",
        vars: &["b", "a"],
        lhs: "(app (lam x (var b)) (var a))",
        rhs: "(var b)",
    },
];

fn names(vs: &[&str]) -> Vec<VarName> {
    vs.iter().map(|v| VarName::new(v).unwrap()).collect()
}

fn main() {
    let mut db = PatMap::new();
    for (i, r) in RULES.iter().enumerate() {
        db.insert_in_place(&names(r.vars), &parse_expr(r.lhs).unwrap(), i);
    }
    let terms = [
        "(app (app (var map) (var double)) (app (app (var map) (var square)) (var nums)))",
        "(app (app (var map) (lam y (var y))) (var nums))",
        "(app (lam x (var c)) (var d))",
        // The body mentions the bound variable, so "beta/const" must not fire.
        "(app (lam x (var x)) (var d))",
    ];
    for src in terms {
        let t = parse_expr(src).unwrap();
        println!("{t}");
        let hits = db.lookup(&t);
        if hits.is_empty() {
            println!("  no rule applies");
        }
        for (binds, &i) in hits {
            // Re-key the bindings by the right-hand side's own numbering.
            let rhs = PatExpr::new(&names(RULES[i].vars), parse_expr(RULES[i].rhs).unwrap());
            let s: Subst = binds
                .into_iter()
                .filter_map(|(v, e)| rhs.keys.get(&v).map(|&k| (k, e)))
                .collect();
            let rhs = apply_subst(&rhs, &s);
            println!("  {} => {rhs}", RULES[i].name);
        }
    }
}
