//! Loads a rule file in the `match` subcommand's format and reports the
//! matches for a few targets, as `exprtrie match` would.

use exprtrie::cli::{build_pattern_map, format_matches, parse_pattern_file};
use exprtrie::parse_expr;

const RULES: &str = "\
# vars ; pattern => label
p ; (app (app (var f) (var p)) (var T)) => f_true
q ; (app (app (var f) (var q)) (var F)) => f_false
x ; (app (app (var f) (var x)) (var x)) => f_diag
; (app (app (var f) (var T)) (var T)) => f_tt
y ; (app (app (var f) (var y)) (var T)) => f_true_again
";

fn main() {
    let entries = parse_pattern_file("rules.txt", RULES).unwrap();
    let (pm, replaced) = build_pattern_map(&entries);
    for (old, new) in &replaced {
        println!("warning: {new} replaces alpha-equivalent pattern {old}");
    }
    for src in [
        "(app (app (var f) (var e)) (var T))",
        "(app (app (var f) (var T)) (var T))",
        "(app (app (var f) (var e)) (var G))",
    ] {
        println!("{src}");
        for line in format_matches(&pm, &parse_expr(src).unwrap()) {
            println!("  {line}");
        }
    }
    match parse_pattern_file("bad.txt", "p ; (app (var f) => oops\n") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("error: {e}"),
    }
}
