//! Interrogation efficiencies, noise thresholds and robust cycle bounds.

use std::f64::consts::PI;

use eventgraph::witnesses;

fn main() -> Result<(), eventgraph::Error> {
    for p in witnesses::interrogation_curve(&[0.0, 0.25, 0.5, 0.75, 1.0])? {
        println!("r = {:.2}: eta = {:.4}, eta_nc = {:.4}, gap = {:+.4}", p.r, p.eta_q, p.eta_nc, p.gap());
    }
    let (r, g) = witnesses::interrogation_gap_max();
    println!("max gap {g:.7} at r = {r:.7}");
    let p = witnesses::noisy_interrogation(5.0 * PI / 6.0, 0.0)?;
    println!("eta(5pi/6, 0) = {:.4}", p.eta_q);
    let (t, nu) = witnesses::max_noise_threshold(&witnesses::theta_grid(200), witnesses::THRESHOLD_TOL)?;
    println!("largest noise threshold {nu:.4} at theta = {:.4} pi", t / PI);
    let rb = witnesses::robust_cycle_bound(3, &[0.01; 3])?;
    println!("robust c3 bound with eps = 0.01: {:.2}", rb.bound);
    Ok(())
}
