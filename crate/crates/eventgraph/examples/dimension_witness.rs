//! `h_n` as a dimension witness: seesaw lower and Frank-Wolfe upper bounds.

use eventgraph::optimize::{self, SeesawConfig};

fn main() -> Result<(), eventgraph::Error> {
    let cfg = SeesawConfig { restarts: 8, ..SeesawConfig::default() };
    let rows = optimize::dimension_witness_scan("hn", &[4, 5, 6], &[2, 3, 4, 5], &cfg)?;
    println!("{:>2} {:>2} {:>9} {:>9} {:>5} witness", "n", "d", "seesaw", "fw", "bound");
    for r in rows.iter().filter(|r| r.d < r.n) {
        let up = r.upper.map(|u| format!("{u:.6}")).unwrap_or_else(|| "-".into());
        println!("{:>2} {:>2} {:>9.6} {:>9} {:>5} {}", r.n, r.d, r.lower, up, r.bound, r.witness);
    }
    let (g, h4) = optimize::hn_problem(4)?;
    let m = optimize::random_qubit_max(&g, &h4, 100_000, 1)?;
    println!("max of h4 over 1e5 random qubit tuples: {m:.6}");
    Ok(())
}
