//! Pure-state realizability of triplets and imaginarity from four overlaps.

use eventgraph::invariants::{self, Triplet};
use eventgraph::linalg::{self, c};

fn main() -> Result<(), eventgraph::Error> {
    let psi: Vec<_> = (0..3).map(|k| linalg::random_pure_state(3, 40 + k)).collect();
    let t = Triplet::from_states(&psi)?;
    let (ok, states) = invariants::pure_realizable_triplet(&t)?;
    println!("random triplet {t:?}\n  realizable = {ok}");
    if let Some(st) = states {
        let back = Triplet::from_states(&st)?;
        println!("  reconstruction error = {:.2e}", (back.delta - t.delta).norm());
    }
    let bad = Triplet { r12: 0.0, r13: 0.25, r23: 0.25, delta: c(1.0, 0.0) };
    println!("(0, 1/4, 1/4, 1) realizable = {}", invariants::pure_realizable_triplet(&bad)?.0);
    let (lo, hi) = invariants::bound_unknown_overlap(0.8, 0.6)?;
    println!("r23 given r12 = 0.8, r13 = 0.6: [{lo:.4}, {hi:.4}]");

    let s6 = 6f64.sqrt();
    let real = [0.5, 0.5, 0.5, 0.5, 0.5, 0.5];
    let complex = [0.5, 0.5, 0.75, 0.5, (4.0 + s6) / 8.0, (4.0 - s6) / 8.0];
    for overlaps in [real, complex] {
        let rep = invariants::imaginarity_from_overlaps(&overlaps)?;
        println!("overlaps {overlaps:.4?}: imaginarity witnessed = {}", rep.witnessed);
        println!("  lambda_min = {:.6?}", rep.min_eigenvalues);
    }
    Ok(())
}
