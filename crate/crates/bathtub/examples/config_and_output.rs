//! Configuration parsing and deterministic CSV / JSON output, the same
//! machinery the `bathtub` command-line tool uses.
//!
//! Run with `cargo run --release --example config_and_output`.

use bathtub::cli_app::config::parse_config;
use bathtub::cli_app::output::{Format, Table};
use bathtub::quantization::eigen_batch;

fn main() -> bathtub::Result<()> {
    let p = parse_config("# asymmetric oscillator\nomega_minus = 1\nomega_plus = 3\nell = 0\n")?
        .resolve()?;
    let mut table = Table::new(&["n", "E_exact", "E_asymptotic"]);
    for r in eigen_batch(0..4, &p, 6)? {
        table.push(vec![r.n.into(), r.e_exact.into(), r.e_asymptotic.into()]);
    }
    let mut out = std::io::stdout();
    table.write(Format::Csv, &mut out)?;
    table.write(Format::Json, &mut out)?;
    println!("{}", parse_config("mass = 1").unwrap_err());
    Ok(())
}
