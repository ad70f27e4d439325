//! Boundary of the set of third-order Bargmann invariants.

use eventgraph::invariants;
use eventgraph::optimize::{self, SeesawConfig};

fn main() -> Result<(), eventgraph::Error> {
    for k in 0..=8 {
        let theta = std::f64::consts::PI * k as f64 / 8.0;
        let z = invariants::obg_delta(3, theta)?;
        println!("theta = {theta:.3}: D3 = {:+.5} {:+.5}i, defect = {:.1e}", z.re, z.im, invariants::b3_boundary_defect(z));
    }
    let cfg = SeesawConfig { restarts: 4, sweeps: 60, seed: 3, ..SeesawConfig::default() };
    let samples = optimize::bn_boundary(3, &optimize::uniform_directions(72), 2, &cfg)?;
    let min_re = samples.iter().map(|s| s.re).fold(f64::INFINITY, f64::min);
    println!("traced: min Re = {min_re:.5}, max Im at Re = 0: {:.5?}", optimize::hull_max_imag_at(&samples, 0.0));
    Ok(())
}
