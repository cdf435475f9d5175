pub mod bench;
pub mod cli;
pub mod expr;
pub mod exprmap;
pub mod matching;
pub mod oracle;
pub mod patmap;
pub mod selftest;
pub mod triemap;

pub use expr::{parse_expr, AlphaExpr, DbEnv, Expr, VarName};
pub use exprmap::ExprMap;
pub use matching::{PatExpr, PatKey, PatKeys, Subst};
pub use patmap::{PatMap, PatSubst};
pub use triemap::TrieMap;
