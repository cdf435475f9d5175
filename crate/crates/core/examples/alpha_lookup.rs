//! Keys that differ only in bound-variable names find the same entry.

use exprtrie::{parse_expr, ExprMap, TrieMap};

fn main() {
    let id_x = parse_expr("(lam x (var x))").unwrap();
    let id_y = parse_expr("(lam y (var y))").unwrap();
    let konst = parse_expr("(lam x (lam y (var x)))").unwrap();
    let flip = parse_expr("(lam x (lam y (var y)))").unwrap();

    let m = ExprMap::new()
        .insert_closed(&id_x, "identity")
        .insert_closed(&konst, "const");

    println!("{id_y} -> {:?}", m.lookup_closed(&id_y));
    println!("{flip} -> {:?}", m.lookup_closed(&flip));

    // Re-inserting an alpha-equivalent key overwrites, it does not add.
    let m = m.insert_closed(&id_y, "id");
    println!(
        "size {} after re-insert; {id_x} -> {:?}",
        m.size(),
        m.lookup_closed(&id_x)
    );
    println!("shape {:?}, census {}", m.shape(), m.census());
}
