#![allow(dead_code)]

use exprtrie::{AlphaExpr, Expr, VarName};
use proptest::prelude::*;
use proptest::sample::select;

pub const FREE: &[&str] = &["p", "q", "r"];
pub const BINDERS: &[&str] = &["x", "y", "z"];

pub fn name(s: &str) -> VarName {
    VarName::new(s).unwrap()
}

/// Expressions over a few free names, with binders that shadow each other.
pub fn expr() -> BoxedStrategy<Expr> {
    let names: Vec<&'static str> = FREE.iter().chain(BINDERS).copied().collect();
    let leaf = select(names).prop_map(Expr::var);
    leaf.prop_recursive(5, 15, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            (select(BINDERS), inner).prop_map(|(b, e)| Expr::lam(b, e)),
        ]
    })
    .boxed()
}

pub fn closed() -> BoxedStrategy<AlphaExpr> {
    expr().prop_map(AlphaExpr::closed).boxed()
}

/// Consistently renames binders to primed versions of themselves.
pub fn prime_binders(e: &Expr) -> Expr {
    fn go(e: &Expr, ren: &mut Vec<VarName>) -> Expr {
        match e {
            Expr::Var(v) if ren.contains(v) => Expr::var(&format!("{v}'")),
            Expr::Var(_) => e.clone(),
            Expr::App(f, a) => Expr::app(go(f, ren), go(a, ren)),
            Expr::Lam(v, b) => {
                ren.push(v.clone());
                let body = go(b, ren);
                ren.pop();
                Expr::lam(&format!("{v}'"), body)
            }
        }
    }
    go(e, &mut Vec::new())
}

/// A value transformer picked by tag: delete, insert a constant,
/// identity, or modify an existing value.
pub fn apply_tf(tag: u8, old: Option<i32>) -> Option<i32> {
    match tag % 4 {
        0 => None,
        1 => Some(100),
        2 => old,
        _ => old.map(|v| v.wrapping_mul(2).wrapping_add(1)),
    }
}
