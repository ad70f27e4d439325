//! Vertex counts of the complete-graph polytopes against the Bell numbers.

use eventgraph::graphs;

fn main() -> Result<(), eventgraph::Error> {
    let bell = graphs::bell_numbers(8);
    println!("{:>3} {:>8} {:>8}", "n", "vertices", "bell");
    for n in 2..=8 {
        let labs = graphs::enumerate_extreme_labelings(&graphs::complete(n)?)?;
        println!("{n:>3} {:>8} {:>8}", labs.len(), bell[n]);
    }
    let c5 = graphs::cycle(5)?;
    let two = graphs::d_restricted_extremes(&c5, 2)?;
    println!("C5: {} vertices, {} with 2-colorable quotient", graphs::enumerate_extreme_labelings(&c5)?.len(), two.len());
    Ok(())
}
