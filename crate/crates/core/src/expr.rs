//! Lambda-calculus expressions and the machinery for treating them modulo
//! alpha-renaming.
//!
//! Bound variables are numbered by De Bruijn *levels*: the first lambda
//! passed on the way down from the root binds level 1, the next one level 2,
//! and so on. A [`DbEnv`] records the level of every binder in scope, and an
//! [`AlphaExpr`] pairs an expression with the environment it should be read
//! in. Two alpha-expressions are equal when they agree structurally, with
//! variables found in the respective environments compared by level and all
//! other variables compared by name.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use im::OrdMap;
use thiserror::Error;

/// A variable name: `[A-Za-z_$][A-Za-z0-9_$']*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid variable name {0:?}")]
pub struct InvalidName(pub String);

impl VarName {
    pub fn new(name: &str) -> Result<Self, InvalidName> {
        if is_valid_name(name) {
            Ok(VarName(Arc::from(name)))
        } else {
            Err(InvalidName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '\''
}

fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if is_name_start(c) => chars.all(is_name_char),
        _ => false,
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for VarName {
    type Err = InvalidName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarName::new(s)
    }
}

/// Expression syntax tree. Children are reference counted so that
/// sub-expressions can be shared cheaply between keys, tries and threads.
///
/// The derived `Eq`/`Ord`/`Hash` are *structural* (binder names matter);
/// use [`alpha_eq`], [`alpha_compare`] and [`alpha_hash`] for the
/// alpha-insensitive versions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Var(VarName),
    App(Arc<Expr>, Arc<Expr>),
    Lam(VarName, Arc<Expr>),
}

impl Expr {
    /// Variable occurrence. Panics if `name` is not a valid [`VarName`].
    pub fn var(name: &str) -> Expr {
        Expr::Var(VarName::new(name).expect("valid variable name"))
    }

    pub fn app(fun: Expr, arg: Expr) -> Expr {
        Expr::App(Arc::new(fun), Arc::new(arg))
    }

    /// Left-nested application `((f a1) a2) ...`.
    pub fn apps(fun: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(fun, Expr::app)
    }

    /// Lambda abstraction. Panics if `binder` is not a valid [`VarName`].
    pub fn lam(binder: &str, body: Expr) -> Expr {
        Expr::Lam(
            VarName::new(binder).expect("valid binder name"),
            Arc::new(body),
        )
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::App(f, a) => 1 + f.size() + a.size(),
            Expr::Lam(_, b) => 1 + b.size(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "(var {v})"),
            Expr::App(fun, arg) => write!(f, "(app {fun} {arg})"),
            Expr::Lam(v, body) => write!(f, "(lam {v} {body})"),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A 1-based De Bruijn level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DbLevel(u32);

impl DbLevel {
    pub const FIRST: DbLevel = DbLevel(1);

    /// Returns `None` for 0.
    pub fn new(level: u32) -> Option<DbLevel> {
        (level >= 1).then_some(DbLevel(level))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Binder environment: maps every lambda-bound name in scope to the level
/// of its binder. Persistent, so extending is cheap and never disturbs the
/// original.
#[derive(Clone, PartialEq, Eq)]
pub struct DbEnv {
    next: DbLevel,
    env: OrdMap<VarName, DbLevel>,
}

impl DbEnv {
    pub fn empty() -> DbEnv {
        DbEnv {
            next: DbLevel::FIRST,
            env: OrdMap::new(),
        }
    }

    /// Binds `v` to the next level. An existing binding of `v` is shadowed.
    pub fn extend(&self, v: &VarName) -> DbEnv {
        DbEnv {
            next: DbLevel(self.next.0 + 1),
            env: self.env.update(v.clone(), self.next),
        }
    }

    pub fn lookup(&self, v: &VarName) -> Option<DbLevel> {
        self.env.get(v).copied()
    }

    /// The level the next binder will receive.
    pub fn next_level(&self) -> DbLevel {
        self.next
    }

    /// Number of distinct names currently bound.
    pub fn bound_names(&self) -> usize {
        self.env.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, DbLevel)> {
        self.env.iter().map(|(k, v)| (k, *v))
    }
}

impl Default for DbEnv {
    fn default() -> Self {
        DbEnv::empty()
    }
}

impl fmt::Debug for DbEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DbEnv")
            .field("next", &self.next.0)
            .field(
                "env",
                &self
                    .iter()
                    .map(|(k, l)| (k.clone(), l.0))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// An expression read under a binder environment. This is the key type of
/// the exact triemap; its `PartialEq` is alpha-equivalence.
#[derive(Clone)]
pub struct AlphaExpr {
    pub env: DbEnv,
    pub expr: Expr,
}

impl AlphaExpr {
    pub fn new(env: DbEnv, expr: Expr) -> AlphaExpr {
        AlphaExpr { env, expr }
    }

    /// Pairs `expr` with the empty environment.
    pub fn closed(expr: Expr) -> AlphaExpr {
        AlphaExpr {
            env: DbEnv::empty(),
            expr,
        }
    }

    /// Same environment, different expression.
    pub fn with(&self, expr: &Expr) -> AlphaExpr {
        AlphaExpr {
            env: self.env.clone(),
            expr: expr.clone(),
        }
    }

    /// Is `v` bound by the environment, and at which level?
    pub fn bound_level(&self, v: &VarName) -> Option<DbLevel> {
        self.env.lookup(v)
    }
}

impl PartialEq for AlphaExpr {
    fn eq(&self, other: &Self) -> bool {
        #[cfg(test)]
        instrument::record_eq(self.expr.size().max(other.expr.size()));
        alpha_eq(self, other)
    }
}

impl Eq for AlphaExpr {}

impl fmt::Debug for AlphaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({:?}, {})", self.env, self.expr)
    }
}

/// How a variable occurrence reads under an environment.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Occ<'a> {
    Bound(DbLevel),
    Free(&'a VarName),
}

fn classify<'a>(env: &DbEnv, v: &'a VarName) -> Occ<'a> {
    match env.lookup(v) {
        Some(l) => Occ::Bound(l),
        None => Occ::Free(v),
    }
}

/// Alpha-equivalence of two expressions under their own environments.
pub fn alpha_eq(a: &AlphaExpr, b: &AlphaExpr) -> bool {
    fn go(ea: &DbEnv, a: &Expr, eb: &DbEnv, b: &Expr) -> bool {
        match (a, b) {
            (Expr::Var(x), Expr::Var(y)) => classify(ea, x) == classify(eb, y),
            (Expr::App(f1, a1), Expr::App(f2, a2)) => go(ea, f1, eb, f2) && go(ea, a1, eb, a2),
            (Expr::Lam(x, b1), Expr::Lam(y, b2)) => go(&ea.extend(x), b1, &eb.extend(y), b2),
            _ => false,
        }
    }
    go(&a.env, &a.expr, &b.env, &b.expr)
}

const TAG_BOUND: u8 = 0;
const TAG_FREE: u8 = 1;
const TAG_APP: u8 = 2;
const TAG_LAM: u8 = 3;

fn tag(env: &DbEnv, e: &Expr) -> u8 {
    match e {
        Expr::Var(v) if env.lookup(v).is_some() => TAG_BOUND,
        Expr::Var(_) => TAG_FREE,
        Expr::App(..) => TAG_APP,
        Expr::Lam(..) => TAG_LAM,
    }
}

/// A total order consistent with [`alpha_eq`]. Node tags compare first
/// (bound variable < free variable < application < lambda), then bound
/// levels numerically and free names lexicographically; children are
/// compared left to right.
pub fn alpha_compare(a: &AlphaExpr, b: &AlphaExpr) -> Ordering {
    fn go(ea: &DbEnv, a: &Expr, eb: &DbEnv, b: &Expr) -> Ordering {
        match (a, b) {
            (Expr::Var(x), Expr::Var(y)) => classify(ea, x).cmp(&classify(eb, y)),
            (Expr::App(f1, a1), Expr::App(f2, a2)) => {
                go(ea, f1, eb, f2).then_with(|| go(ea, a1, eb, a2))
            }
            (Expr::Lam(x, b1), Expr::Lam(y, b2)) => go(&ea.extend(x), b1, &eb.extend(y), b2),
            _ => tag(ea, a).cmp(&tag(eb, b)),
        }
    }
    go(&a.env, &a.expr, &b.env, &b.expr)
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

struct Fnv1a(u64);

impl Fnv1a {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }
}

/// FNV-1a-64 over a pre-order serialisation: each node writes its tag byte,
/// followed by the level (8 bytes, little endian) for bound variables or the
/// name's bytes for free ones. Binder names are not written.
pub fn alpha_hash(a: &AlphaExpr) -> u64 {
    fn go(h: &mut Fnv1a, env: &DbEnv, e: &Expr) {
        match e {
            Expr::Var(v) => match env.lookup(v) {
                Some(l) => {
                    h.write(&[TAG_BOUND]);
                    h.write(&u64::from(l.0).to_le_bytes());
                }
                None => {
                    h.write(&[TAG_FREE]);
                    h.write(v.as_str().as_bytes());
                }
            },
            Expr::App(f, x) => {
                h.write(&[TAG_APP]);
                go(h, env, f);
                go(h, env, x);
            }
            Expr::Lam(v, b) => {
                h.write(&[TAG_LAM]);
                go(h, &env.extend(v), b);
            }
        }
    }
    let mut h = Fnv1a(FNV_OFFSET);
    go(&mut h, &a.env, &a.expr);
    h.0
}

/// True iff no variable occurring free in `e` is bound by `env`.
pub fn no_captured(env: &DbEnv, e: &Expr) -> bool {
    fn go<'a>(env: &DbEnv, e: &'a Expr, inner: &mut Vec<&'a VarName>) -> bool {
        match e {
            Expr::Var(v) => inner.contains(&v) || env.lookup(v).is_none(),
            Expr::App(f, a) => go(env, f, inner) && go(env, a, inner),
            Expr::Lam(v, b) => {
                inner.push(v);
                let ok = go(env, b, inner);
                inner.pop();
                ok
            }
        }
    }
    env.bound_names() == 0 || go(env, e, &mut Vec::new())
}

/// Equality used when a pattern variable is bound twice: alpha-equivalence
/// of two closed readings.
pub fn eq_expr(a: &Expr, b: &Expr) -> bool {
    let empty = DbEnv::empty();
    alpha_eq(
        &AlphaExpr::new(empty.clone(), a.clone()),
        &AlphaExpr::new(empty, b.clone()),
    )
}

/// Parse failure, 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.bump(c);
        }
    }

    /// Next token and the position it starts at.
    fn next(&mut self) -> Result<Option<(Tok<'a>, usize, usize)>, ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump(c);
                Ok(Some((Tok::Open, line, col)))
            }
            ')' => {
                self.bump(c);
                Ok(Some((Tok::Close, line, col)))
            }
            c if is_name_char(c) => {
                let len = rest
                    .find(|ch: char| !is_name_char(ch))
                    .unwrap_or(rest.len());
                let atom = &rest[..len];
                for ch in atom.chars() {
                    self.bump(ch);
                }
                Ok(Some((Tok::Atom(atom), line, col)))
            }
            other => Err(ParseError {
                line,
                column: col,
                message: format!("unexpected character {other:?}"),
            }),
        }
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

impl<'a> Parser<'a> {
    fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn eof(&self) -> ParseError {
        Self::err(self.lex.line, self.lex.col, "unexpected end of input")
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.lex.next()? {
            Some((Tok::Close, _, _)) => Ok(()),
            Some((t, l, c)) => Err(Self::err(
                l,
                c,
                format!("expected ')', found {}", describe(&t)),
            )),
            None => Err(self.eof()),
        }
    }

    fn name(&mut self) -> Result<VarName, ParseError> {
        match self.lex.next()? {
            Some((Tok::Atom(a), l, c)) => {
                VarName::new(a).map_err(|_| Self::err(l, c, format!("invalid name {a:?}")))
            }
            Some((t, l, c)) => Err(Self::err(
                l,
                c,
                format!("expected a name, found {}", describe(&t)),
            )),
            None => Err(self.eof()),
        }
    }

    /// Parses one expression, or returns `None` at end of input.
    fn expr_opt(&mut self) -> Result<Option<Expr>, ParseError> {
        let (l, c) = match self.lex.next()? {
            None => return Ok(None),
            Some((Tok::Open, l, c)) => (l, c),
            Some((t, l, c)) => {
                return Err(Self::err(
                    l,
                    c,
                    format!("expected '(', found {}", describe(&t)),
                ))
            }
        };
        let head = match self.lex.next()? {
            Some((Tok::Atom(a), _, _)) => a,
            Some((t, l, c)) => {
                return Err(Self::err(
                    l,
                    c,
                    format!("expected var/app/lam, found {}", describe(&t)),
                ))
            }
            None => return Err(self.eof()),
        };
        let e = match head {
            "var" => Expr::Var(self.name()?),
            "app" => {
                let f = self.expr()?;
                let a = self.expr()?;
                Expr::App(Arc::new(f), Arc::new(a))
            }
            "lam" => {
                let v = self.name()?;
                let b = self.expr()?;
                Expr::Lam(v, Arc::new(b))
            }
            other => return Err(Self::err(l, c + 1, format!("unknown form {other:?}"))),
        };
        self.expect_close()?;
        Ok(Some(e))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.expr_opt()? {
            Some(e) => Ok(e),
            None => Err(self.eof()),
        }
    }
}

fn describe(t: &Tok<'_>) -> String {
    match t {
        Tok::Open => "'('".to_string(),
        Tok::Close => "')'".to_string(),
        Tok::Atom(a) => format!("{a:?}"),
    }
}

/// Parses exactly one expression (surrounding whitespace allowed).
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lex: Lexer::new(text),
    };
    let e = p.expr()?;
    match p.lex.next()? {
        None => Ok(e),
        Some((t, l, c)) => Err(Parser::err(
            l,
            c,
            format!("trailing input {}", describe(&t)),
        )),
    }
}

/// Parses a whitespace-separated sequence of expressions.
pub fn parse_exprs(text: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser {
        lex: Lexer::new(text),
    };
    let mut out = Vec::new();
    while let Some(e) = p.expr_opt()? {
        out.push(e);
    }
    Ok(out)
}

/// Inverse of [`parse_expr`]; identical to the `Display` impl.
pub fn print_expr(e: &Expr) -> String {
    e.to_string()
}
