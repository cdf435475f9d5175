//! The `exprtrie` command line: `bench`, `selftest` and `match`.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 for usage and parse
//! errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use thiserror::Error;

use crate::bench::{self, BenchParams, Impl, Suite};
use crate::expr::{eq_expr, parse_expr, Expr, VarName};
use crate::patmap::PatMap;
use crate::selftest;

#[derive(Debug, Parser)]
#[command(
    name = "exprtrie",
    version,
    about = "Alpha-insensitive expression triemaps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time the trie against ordered- and hash-map baselines; CSV on stdout.
    Bench(BenchArgs),
    /// Randomised differential checks against naive reference maps.
    Selftest(SelftestArgs),
    /// Match target expressions against a file of patterns.
    Match(MatchArgs),
}

#[derive(Debug, Clone)]
struct Suites(Vec<Suite>);

#[derive(Debug, Clone)]
struct Impls(Vec<Impl>);

fn parse_suites(s: &str) -> Result<Suites, String> {
    if s == "all" {
        return Ok(Suites(Suite::ALL.to_vec()));
    }
    s.parse::<Suite>().map(|x| Suites(vec![x])).map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
        format!("expected one of: all, {}", names.join(", "))
    })
}

fn parse_impls(s: &str) -> Result<Impls, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Impls(Impl::ALL.to_vec()));
    }
    s.parse::<Impl>()
        .map(|x| Impls(vec![x]))
        .map_err(|_| "expected one of: tm, om, hm, all".to_string())
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_suites)]
    suite: Suites,
    /// `tm`, `om`, `hm`, or `all`.
    #[arg(long = "impl", default_value = "all", value_parser = parse_impls)]
    imp: Impls,
    /// Number of expressions in the map.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    map_size: u64,
    /// Approximate size of each expression.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    expr_size: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Timed repetitions; the minimum is reported.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..))]
    reps: u64,
    /// Layers of shared prefix for the *_lam/_app1/_app2 suites.
    #[arg(long, default_value_t = 100)]
    prefix_len: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Negate the repeated-variable equality, to check the checks.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct MatchArgs {
    /// Lines of the form `VARS ; EXPR => LABEL`.
    patterns: PathBuf,
    /// Target expressions; read one per line from stdin when absent.
    targets: Vec<String>,
}

/// A parsed line of a pattern file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEntry {
    pub vars: Vec<VarName>,
    pub body: Expr,
    pub label: String,
}

/// A pattern-file or target problem, with 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{source_name}:{line}:{column}: {message}")]
pub struct InputError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn input_error(
    source_name: &str,
    line: usize,
    column: usize,
    message: impl Into<String>,
) -> InputError {
    InputError {
        source_name: source_name.to_string(),
        line,
        column,
        message: message.into(),
    }
}

/// Parses a pattern file. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_pattern_file(source_name: &str, text: &str) -> Result<Vec<PatternEntry>, InputError> {
    let mut entries: Vec<PatternEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |col: usize, msg: String| input_error(source_name, line_no, col, msg);
        let semi = raw
            .find(';')
            .ok_or_else(|| err(1, "expected `;` after the pattern variables".into()))?;
        let arrow = raw[semi..]
            .rfind("=>")
            .map(|a| a + semi)
            .ok_or_else(|| err(raw.len() + 1, "expected `=> LABEL`".into()))?;

        let mut vars: Vec<VarName> = Vec::new();
        let mut offset = 0;
        for word in raw[..semi].split_whitespace() {
            let col = raw[offset..].find(word).map(|p| p + offset).unwrap_or(0) + 1;
            offset = col - 1 + word.len();
            let v = VarName::new(word)
                .map_err(|_| err(col, format!("invalid variable name {word:?}")))?;
            if vars.contains(&v) {
                return Err(err(col, format!("pattern variable {word} listed twice")));
            }
            vars.push(v);
        }

        let expr_src = &raw[semi + 1..arrow];
        let body = parse_expr(expr_src).map_err(|e| {
            let col = if e.line == 1 {
                semi + 1 + e.column
            } else {
                e.column
            };
            err(col, e.message.clone())
        })?;

        let label = raw[arrow + 2..].trim();
        if label.is_empty() {
            return Err(err(arrow + 3, "empty label".into()));
        }
        if entries.iter().any(|e| e.label == label) {
            return Err(err(arrow + 3, format!("duplicate label {label:?}")));
        }
        entries.push(PatternEntry {
            vars,
            body,
            label: label.to_string(),
        });
    }
    Ok(entries)
}

/// Builds the pattern map for a parsed file. Also returns `(earlier,
/// later)` label pairs where a later pattern, equal up to renaming,
/// replaced an earlier one.
pub fn build_pattern_map(entries: &[PatternEntry]) -> (PatMap<String>, Vec<(String, String)>) {
    let mut pm = PatMap::new();
    let mut replaced = Vec::new();
    for e in entries {
        pm.alter_in_place(&e.vars, &e.body, |old| {
            if let Some(old) = old {
                replaced.push((old, e.label.clone()));
            }
            Some(e.label.clone())
        });
    }
    (pm, replaced)
}

/// Output lines for one target: one per match, or `no match`.
pub fn format_matches(pm: &PatMap<String>, target: &Expr) -> Vec<String> {
    let hits = pm.lookup(target);
    if hits.is_empty() {
        return vec!["no match".to_string()];
    }
    hits.into_iter()
        .map(|(subst, label)| {
            if subst.is_empty() {
                format!("{label} {{ }}")
            } else {
                let binds: Vec<String> = subst.iter().map(|(v, e)| format!("{v}={e}")).collect();
                format!("{label} {{ {} }}", binds.join(", "))
            }
        })
        .collect()
}

/// Runs the command line `args` (including the program name), writing to
/// `out` and `err`. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let mut text = e.render().to_string();
            if code == 2 && !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", usage_for(&args)));
            }
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Selftest(a) => cmd_selftest(a, out),
        Command::Match(a) => cmd_match(a, stdin, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

// Usage of the subcommand named in `args`, or of the whole program.
fn usage_for(args: &[OsString]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = args
        .iter()
        .skip(1)
        .find_map(|a| a.to_str().and_then(|a| cmd.find_subcommand(a)).cloned());
    match sub {
        Some(mut s) => s.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{path}: {source}")]
    Read { path: String, source: io::Error },
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
    #[error("writing output: {0}")]
    Write(#[from] io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Read { .. } => 2,
            CliError::Bench(bench::BenchError::CorpusExhausted { .. }) => 2,
            _ => 1,
        }
    }
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let params = BenchParams {
        map_size: a.map_size as usize,
        expr_size: a.expr_size as usize,
        seed: a.seed,
        reps: a.reps as usize,
        prefix_len: a.prefix_len as usize,
    };
    let results = bench::run_cells(&a.suite.0, &a.imp.0, &params)?;
    for suite in &a.suite.0 {
        if let Some(r) = results.iter().find(|r| r.suite == *suite) {
            writeln!(
                err,
                "{}: {} impl(s) agree: count={} sum={}",
                suite,
                a.imp.0.len(),
                r.outcome.count,
                r.outcome.sum
            )?;
        }
    }
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|source| CliError::Read {
                path: path.display().to_string(),
                source,
            })?;
            bench::write_csv(file, &results)?
        }
        None => bench::write_csv(&mut *out, &results)?,
    }
    Ok(0)
}

fn cmd_selftest(a: SelftestArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = if a.inject_fault {
        selftest::run_with_eq(a.trials, a.seed, |x, y| !eq_expr(x, y))
    } else {
        selftest::run(a.trials, a.seed)
    };
    match &report.counterexample {
        None => {
            writeln!(out, "selftest: {} trials passed", report.trials)?;
            Ok(0)
        }
        Some(c) => {
            writeln!(out, "selftest: FAILED at trial {}", report.trials)?;
            writeln!(out, "{c}")?;
            Ok(1)
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_match(
    a: MatchArgs,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let name = a.patterns.display().to_string();
    let entries = parse_pattern_file(&name, &read_file(&a.patterns)?)?;
    let (pm, replaced) = build_pattern_map(&entries);
    for (old, new) in replaced {
        writeln!(
            err,
            "warning: {name}: pattern {new} is a renaming of {old} and replaces it"
        )?;
    }

    let mut targets = Vec::new();
    if a.targets.is_empty() {
        for (i, line) in stdin.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let e =
                parse_expr(t).map_err(|e| input_error("<stdin>", i + 1, e.column, e.message))?;
            targets.push(e);
        }
    } else {
        for (i, t) in a.targets.iter().enumerate() {
            let e = parse_expr(t).map_err(|e| {
                input_error(&format!("<target {}>", i + 1), e.line, e.column, e.message)
            })?;
            targets.push(e);
        }
    }

    for t in &targets {
        for line in format_matches(&pm, t) {
            writeln!(out, "{line}")?;
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = io::Cursor::new(stdin.as_bytes().to_vec());
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn pattern_file_parsing() {
        let text = "# rules\n\np ; (app (app (var f) (var p)) (var T)) => r1\n ; (var c) => r2\n";
        let es = parse_pattern_file("f", text).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[0].label, "r1");
        assert_eq!(es[0].vars, vec![VarName::new("p").unwrap()]);
        assert!(es[1].vars.is_empty());
    }

    #[test]
    fn pattern_file_errors_name_position() {
        let e = parse_pattern_file("rules.txt", "p ; (app (var f) => r\n").unwrap_err();
        assert_eq!((e.source_name.as_str(), e.line), ("rules.txt", 1));
        assert!(e.to_string().starts_with("rules.txt:1:"));
        let e = parse_pattern_file("r", "p (var p) => x\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_pattern_file("r", "; (var a) => x\n; (var b) => x\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_pattern_file("r", "p p ; (var p) => x\n").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_pattern_file("r", "p ; (var p) =>   \n").unwrap_err();
        assert!(e.message.contains("label"));
        let e = parse_pattern_file("r", "p ; (var p) (var q) => l\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn bad_suite_is_usage_error() {
        let (code, _, err) = run_str(&["exprtrie", "bench", "--suite", "nosuch"], "");
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn selftest_zero_trials() {
        let (code, out, _) = run_str(&["exprtrie", "selftest", "--trials", "0"], "");
        assert_eq!(code, 0);
        assert!(out.contains("0 trials"));
    }
}
