//! The index set of the correction expansion: closure of (2,2,1) under the
//! two composition rules, with the containment bound.
//!
//! Run with `cargo run --release --example index_set`.

use bathtub::quantization::index_set_generate;

fn main() -> bathtub::Result<()> {
    let set = index_set_generate(10)?;
    println!("{} triples (j, k, l) with j <= 10:", set.len());
    for t in &set {
        println!("  {t:<12} bound ok: {}", t.satisfies_containment_bound());
    }
    Ok(())
}
