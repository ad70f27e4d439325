//! Seesaw lower bounds, Frank-Wolfe upper bounds and boundary tracing.
//!
//! Every seesaw inner step is solved exactly: the maximum of `Tr(X M)` over
//! density matrices is the top eigenvalue of `M`, attained at its eigenprojector.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::{self, EventGraph};
use crate::invariants::{overlaps, VertexAssignment};
use crate::linalg::{self, c, top_eigvec, CMat, PureState, C64};
use crate::polytope::{cycle_inequality, inequality_family, FamilyTag, LinearInequality};
use crate::Error;

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeesawConfig {
    pub d: usize,
    pub restarts: usize,
    pub sweeps: usize,
    pub tol: f64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { d: 2, restarts: 20, sweeps: 40, tol: 1e-10, seed: 0, jobs: None }
    }
}

impl SeesawConfig {
    pub fn with_d(d: usize) -> Self {
        Self { d, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.d == 0 {
            return Err(Error::Param("dimension must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Param("restarts must be >= 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Param("tolerance must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn restart_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add((r as u64).wrapping_mul(SEED_STRIDE))
    }

    fn run<T: Send>(&self, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>, Error> {
        let go = || (0..self.restarts).into_par_iter().map(&f).collect::<Vec<T>>();
        match self.jobs {
            Some(j) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(j.max(1))
                    .build()
                    .map_err(|e| Error::Param(format!("thread pool: {e}")))?;
                Ok(pool.install(go))
            }
            None => Ok(go()),
        }
    }
}

/// One seesaw run from one seed.
#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub value: f64,
    pub states: Vec<PureState>,
    /// Objective after the random start and after every sweep.
    pub history: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct OptResult {
    pub best: f64,
    pub assignment: Vec<PureState>,
    pub per_restart: Vec<f64>,
    pub best_restart: usize,
    pub converged: bool,
}

impl OptResult {
    pub fn vertex_assignment(&self) -> Result<VertexAssignment, Error> {
        VertexAssignment::from_pure(&self.assignment)
    }
}

fn objective(edges: &[(usize, usize, f64)], psi: &[Vec<C64>]) -> f64 {
    edges.iter().map(|&(i, j, g)| g * linalg::vdot(&psi[i], &psi[j]).norm_sqr()).sum()
}

fn weighted_edges(g: &EventGraph, ineq: &LinearInequality) -> Result<Vec<(usize, usize, f64)>, Error> {
    if ineq.dim() != g.num_edges() {
        return Err(Error::Dimension { expected: g.num_edges(), got: ineq.dim() });
    }
    Ok(g.edges()
        .iter()
        .zip(&ineq.coeffs)
        .filter(|(_, &c)| c != 0)
        .map(|(&(u, v), &c)| (u - 1, v - 1, c as f64))
        .collect())
}

/// Cyclic coordinate ascent from one random pure start.
pub fn seesaw_restart(
    g: &EventGraph,
    ineq: &LinearInequality,
    d: usize,
    sweeps: usize,
    tol: f64,
    seed: u64,
) -> Result<RestartOutcome, Error> {
    if d == 0 {
        return Err(Error::Param("dimension must be >= 1".into()));
    }
    let edges = weighted_edges(g, ineq)?;
    let n = g.n();
    let mut nbrs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, w) in &edges {
        nbrs[i].push((j, w));
        nbrs[j].push((i, w));
    }
    let mut rng = linalg::rng(seed);
    let mut psi: Vec<Vec<C64>> =
        (0..n).map(|_| linalg::random_pure_state_rng(d, &mut rng).amps().to_vec()).collect();
    let mut val = objective(&edges, &psi);
    let mut history = vec![val];
    let mut converged = false;
    for _ in 0..sweeps {
        let start = val;
        for i in 0..n {
            if nbrs[i].is_empty() {
                continue;
            }
            let mut m = CMat::zeros(d, d);
            for &(j, w) in &nbrs[i] {
                m = &m + &CMat::outer(&psi[j]).scale_re(w);
            }
            let (_, v) = top_eigvec(&m)?;
            let old = std::mem::replace(&mut psi[i], v);
            let new_val = objective(&edges, &psi);
            if !new_val.is_finite() {
                return Err(Error::Numeric(format!("non-finite objective (seed {seed})")));
            }
            if new_val < val - MONOTONE_SLACK * val.abs().max(1.0) {
                psi[i] = old;
                return Err(Error::Numeric(format!("seesaw step decreased objective {val} -> {new_val}")));
            }
            val = new_val;
        }
        history.push(val);
        if (val - start).abs() <= tol {
            converged = true;
            break;
        }
    }
    let states = psi.into_iter().map(PureState::normalized).collect::<Result<Vec<_>, _>>()?;
    Ok(RestartOutcome { value: val, states, history, converged })
}

/// Best seesaw value over restarts (a lower bound on the dimension-`d` optimum).
pub fn seesaw_linear(g: &EventGraph, ineq: &LinearInequality, cfg: &SeesawConfig) -> Result<OptResult, Error> {
    cfg.validate()?;
    weighted_edges(g, ineq)?;
    let outcomes = cfg.run(|r| seesaw_restart(g, ineq, cfg.d, cfg.sweeps, cfg.tol, cfg.restart_seed(r)))?;
    let mut best: Option<(usize, RestartOutcome)> = None;
    let mut per_restart = Vec::with_capacity(outcomes.len());
    let mut last_err = None;
    for (r, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(o) => {
                per_restart.push(o.value);
                if best.as_ref().is_none_or(|(_, b)| o.value > b.value) {
                    best = Some((r, o));
                }
            }
            Err(e) => {
                per_restart.push(f64::NAN);
                last_err = Some(e);
            }
        }
    }
    let (best_restart, o) = best.ok_or_else(|| last_err.unwrap_or(Error::Numeric("no restart succeeded".into())))?;
    let rho = VertexAssignment::from_pure(&o.states)?;
    let check = ineq.evaluate_f64(&overlaps(g, &rho)?)?;
    if (check - o.value).abs() > 1e-9 * o.value.abs().max(1.0) {
        return Err(Error::Numeric(format!("reported value {} differs from re-evaluation {check}", o.value)));
    }
    Ok(OptResult { best: o.value, assignment: o.states, per_restart, best_restart, converged: o.converged })
}

/// Analytic `c_n` value `(n-1)cos^2(pi/2n) - cos^2((1-1/n) pi/2)`.
pub fn cn_closed_form(n: usize) -> f64 {
    let nf = n as f64;
    (nf - 1.0) * (PI / (2.0 * nf)).cos().powi(2) - ((1.0 - 1.0 / nf) * PI / 2.0).cos().powi(2)
}

#[derive(Clone, Debug)]
pub struct CnReference {
    pub states: Vec<PureState>,
    /// Matrix evaluation of the cycle functional on `states`.
    pub value: f64,
    pub closed_form: f64,
    pub graph: EventGraph,
    pub inequality: LinearInequality,
}

/// Real qubit family `cos(t_x)|0> + sin(t_x)|1>`, negated edge `(1, n)`.
pub fn cn_reference(n: usize) -> Result<CnReference, Error> {
    if n < 3 {
        return Err(Error::Param(format!("n = {n} < 3")));
    }
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let states = (1..=n)
        .map(|x| {
            let t = PI / 2.0 + sign * (x as f64 - 1.0) * PI / (2.0 * n as f64);
            PureState::new(vec![c(t.cos(), 0.0), c(t.sin(), 0.0)])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (g, ineq) = cycle_inequality(n, (1, n))?;
    let rho = VertexAssignment::from_pure(&states)?;
    let value = ineq.evaluate_f64(&overlaps(&g, &rho)?)?;
    Ok(CnReference { states, value, closed_form: cn_closed_form(n), graph: g, inequality: ineq })
}

#[derive(Clone, Debug, Serialize)]
pub struct FwResult {
    /// Certified upper bound `f(X) + gap`.
    pub upper: f64,
    /// Objective at the final iterate.
    pub value: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Frank-Wolfe on `max A Tr X^2 + B X_00 + C` over `d x d` density matrices,
/// with `A = -(n-1)^2/2`, `B = n-1`, `C = (n-1)/2`.
pub fn fw_quadratic_hn(n: usize, d: usize, iters: usize) -> Result<FwResult, Error> {
    if n < 3 || d < 2 || d >= n {
        return Err(Error::Param(format!("need n >= 3 and 2 <= d <= n-1, got n={n}, d={d}")));
    }
    let nf = (n - 1) as f64;
    let (a, b, c0) = (-nf * nf / 2.0, nf, nf / 2.0);
    let f = |x: &CMat| a * x.trace_mul(x).re + b * x[(0, 0)].re + c0;
    let mut x = CMat::identity(d).scale_re(1.0 / d as f64);
    let mut cmat = CMat::zeros(d, d);
    cmat[(0, 0)] = c(1.0, 0.0);
    let mut gap = f64::INFINITY;
    let mut it = 0;
    while it < iters.max(1) {
        it += 1;
        let grad = &x.scale_re(2.0 * a) + &cmat.scale_re(b);
        let (_, v) = top_eigvec(&grad)?;
        let s = CMat::outer(&v);
        let dir = &s - &x;
        gap = grad.inner(&dir).re;
        if gap < 1e-7 {
            break;
        }
        let dd = dir.inner(&dir).re;
        let t = (gap / (-2.0 * a * dd)).clamp(0.0, 1.0);
        x = &x + &dir.scale_re(t);
    }
    let value = f(&x);
    if !value.is_finite() {
        return Err(Error::Numeric("Frank-Wolfe diverged".into()));
    }
    Ok(FwResult { upper: value + gap.max(0.0), value, gap: gap.max(0.0), iterations: it })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySample {
    pub theta: f64,
    pub re: f64,
    pub im: f64,
    /// Support value `Re[e^{-i theta} D]`.
    pub support: f64,
}

fn cyclic_product(psi: &[Vec<C64>]) -> C64 {
    let n = psi.len();
    (0..n).map(|k| linalg::vdot(&psi[k], &psi[(k + 1) % n])).product()
}

/// Support-function seesaw for `max Re[e^{-i theta} D_n]` over pure states.
pub fn bn_support(n: usize, theta: f64, d: usize, sweeps: usize, tol: f64, seed: u64) -> Result<(f64, C64), Error> {
    let rot = C64::from_polar(1.0, -theta);
    let mut rng = linalg::rng(seed);
    let mut psi: Vec<Vec<C64>> =
        (0..n).map(|_| linalg::random_pure_state_rng(d, &mut rng).amps().to_vec()).collect();
    let mut val = (rot * cyclic_product(&psi)).re;
    for _ in 0..sweeps {
        let start = val;
        for k in 0..n {
            // P_k = |k+1><k+1|k+2>...<k-1|, so D = <psi_k|P_k|psi_k>
            let mut scalar = c(1.0, 0.0);
            for s in 1..n - 1 {
                let a = (k + s) % n;
                scalar *= linalg::vdot(&psi[a], &psi[(a + 1) % n]);
            }
            let first = &psi[(k + 1) % n];
            let last = &psi[(k + n - 1) % n];
            let mut p = CMat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    p[(i, j)] = first[i] * last[j].conj() * scalar * rot;
                }
            }
            let (_, v) = top_eigvec(&p.hermitian_part())?;
            psi[k] = v;
            let new_val = (rot * cyclic_product(&psi)).re;
            if new_val < val - MONOTONE_SLACK {
                return Err(Error::Numeric(format!("boundary seesaw decreased {val} -> {new_val}")));
            }
            val = new_val;
        }
        if (val - start).abs() <= tol {
            break;
        }
    }
    Ok((val, cyclic_product(&psi)))
}

/// Inner approximation of the boundary of `B_n` along the given directions.
pub fn bn_boundary(n: usize, thetas: &[f64], d: usize, cfg: &SeesawConfig) -> Result<Vec<BoundarySample>, Error> {
    if n < 2 || d < 2 {
        return Err(Error::Param(format!("need n >= 2 and d >= 2, got n={n}, d={d}")));
    }
    cfg.validate()?;
    let mut out = Vec::with_capacity(thetas.len());
    for (k, &theta) in thetas.iter().enumerate() {
        let base = cfg.seed.wrapping_add((k as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
        let sub = SeesawConfig { seed: base, ..cfg.clone() };
        let runs = sub.run(|r| {
            if n == 2 {
                // D_2 is a real overlap in [0, 1]
                let x = if theta.cos() >= 0.0 { 1.0 } else { 0.0 };
                return Ok((theta.cos() * x, c(x, 0.0)));
            }
            bn_support(n, theta, d, cfg.sweeps, cfg.tol, sub.restart_seed(r))
        })?;
        let mut best: Option<(f64, C64)> = None;
        for r in runs {
            let (v, z) = r?;
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, z));
            }
        }
        let (support, z) = best.unwrap();
        out.push(BoundarySample { theta, re: z.re, im: z.im, support });
    }
    Ok(out)
}

/// Largest `y` on the upper convex hull of the samples at `x = x0`.
pub fn hull_max_imag_at(samples: &[BoundarySample], x0: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.re, s.im)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2).find_map(|w| {
        let ((x1, y1), (x2, y2)) = (w[0], w[1]);
        if x1 <= x0 && x0 <= x2 {
            if x2 == x1 {
                Some(y1.max(y2))
            } else {
                Some(y1 + (y2 - y1) * (x0 - x1) / (x2 - x1))
            }
        } else {
            None
        }
    })
}

/// `theta_k = 2 pi k / m`, `k = 0..m`.
pub fn uniform_directions(m: usize) -> Vec<f64> {
    (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub lower: f64,
    pub upper: Option<f64>,
    pub bound: f64,
    pub sweeps: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Bound holds at `d` but is violated at `d + 1`.
    pub witness: bool,
}

/// Family name plus size, e.g. `("hn", 5)`, resolved to a tag.
pub fn family_tag(name: &str, n: usize) -> Result<FamilyTag, Error> {
    Ok(match name {
        "hn" => FamilyTag::Hn(n),
        "cn" => FamilyTag::Cn(n),
        _ if name.starts_with("hnm:") => {
            let m = name[4..].parse().map_err(|_| Error::Param(format!("bad family '{name}'")))?;
            FamilyTag::Hnm(n, m)
        }
        _ => FamilyTag::parse(name)?,
    })
}

/// Seesaw lower bounds (and Frank-Wolfe upper bounds for `h_n`) over `(n, d)`.
pub fn dimension_witness_scan(
    family: &str,
    ns: &[usize],
    ds: &[usize],
    cfg: &SeesawConfig,
) -> Result<Vec<ScanRow>, Error> {
    let sized = matches!(family, "hn" | "cn") || family.starts_with("hnm:");
    let ns: Vec<usize> = if sized { ns.to_vec() } else { vec![0] };
    let mut rows = Vec::new();
    for &n in &ns {
        let tag = family_tag(family, n)?;
        let (g, ineq) = inequality_family(&tag)?;
        let bound = ineq.bound_f64();
        let mut block: Vec<ScanRow> = Vec::new();
        for &d in ds {
            let res = seesaw_linear(&g, &ineq, &SeesawConfig { d, ..cfg.clone() })?;
            let upper = match tag {
                FamilyTag::Hn(n) if d >= 2 && d < n => Some(fw_quadratic_hn(n, d, 20_000)?.upper),
                _ => None,
            };
            block.push(ScanRow {
                family: family.to_string(),
                n: g.n(),
                d,
                lower: res.best,
                upper,
                bound,
                sweeps: cfg.sweeps,
                restarts: cfg.restarts,
                seed: cfg.seed,
                witness: false,
            });
        }
        for k in 0..block.len().saturating_sub(1) {
            let holds = block[k].upper.unwrap_or(block[k].lower) <= bound + 1e-6;
            block[k].witness = holds && block[k + 1].d == block[k].d + 1 && block[k + 1].lower > bound + 1e-6;
        }
        rows.extend(block);
    }
    Ok(rows)
}

/// Highest value of `h_n` over `samples` Haar-random qubit tuples.
pub fn random_qubit_max(g: &EventGraph, ineq: &LinearInequality, samples: usize, seed: u64) -> Result<f64, Error> {
    let edges = weighted_edges(g, ineq)?;
    let mut rng = linalg::rng(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let psi: Vec<Vec<C64>> =
            (0..g.n()).map(|_| linalg::random_pure_state_rng(2, &mut rng).amps().to_vec()).collect();
        best = best.max(objective(&edges, &psi));
    }
    Ok(best)
}

/// `K_n` with `h_n`.
pub fn hn_problem(n: usize) -> Result<(EventGraph, LinearInequality), Error> {
    let g = graphs::complete(n)?;
    let (_, ineq) = inequality_family(&FamilyTag::Hn(n))?;
    Ok((g, ineq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(d: usize) -> SeesawConfig {
        SeesawConfig { d, restarts: 6, sweeps: 60, seed: 11, ..SeesawConfig::default() }
    }

    #[test]
    fn c3_value() {
        let (g, i) = inequality_family(&FamilyTag::Cn(3)).unwrap();
        let r = seesaw_linear(&g, &i, &quick(2)).unwrap();
        assert!((r.best - 1.25).abs() < 1e-4, "{}", r.best);
        assert!(r.per_restart.iter().all(|v| *v <= 1.25 + 1e-9));
    }

    #[test]
    fn h4_values() {
        let (g, i) = hn_problem(4).unwrap();
        assert!((seesaw_linear(&g, &i, &quick(2)).unwrap().best - 1.0).abs() < 1e-4);
        assert!((seesaw_linear(&g, &i, &quick(3)).unwrap().best - 4.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn monotone_history() {
        let (g, i) = inequality_family(&FamilyTag::KcbsW6).unwrap();
        for seed in 0..5 {
            let o = seesaw_restart(&g, &i, 3, 30, 0.0, seed).unwrap();
            assert!(o.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        }
    }

    #[test]
    fn deterministic_across_jobs() {
        let (g, i) = hn_problem(5).unwrap();
        let a = seesaw_linear(&g, &i, &SeesawConfig { jobs: Some(1), ..quick(3) }).unwrap();
        let b = seesaw_linear(&g, &i, &SeesawConfig { jobs: Some(4), ..quick(3) }).unwrap();
        assert_eq!(a.per_restart, b.per_restart);
        assert_eq!(a.best_restart, b.best_restart);
    }

    #[test]
    fn cn_reference_values() {
        let r = cn_reference(3).unwrap();
        assert!((r.value - 1.25).abs() < 1e-12);
        for n in 3..=20 {
            let r = cn_reference(n).unwrap();
            assert!((r.value - r.closed_form).abs() < 1e-10);
        }
        let r = cn_reference(200).unwrap();
        assert!(((198.0 / r.value) - 1.0).abs() < 1e-2);
        assert!(cn_reference(2).is_err());
    }

    #[test]
    fn fw_values() {
        assert!((fw_quadratic_hn(4, 3, 10_000).unwrap().upper - 4.0 / 3.0).abs() < 1e-3);
        assert!(fw_quadratic_hn(4, 2, 10_000).unwrap().upper <= 1.0 + 1e-3);
        assert!((fw_quadratic_hn(5, 4, 10_000).unwrap().upper - 1.375).abs() < 1e-3);
        assert!(fw_quadratic_hn(4, 4, 10).is_err());
    }

    #[test]
    fn b3_extremes() {
        let cfg = SeesawConfig { restarts: 4, sweeps: 80, seed: 3, ..SeesawConfig::default() };
        let s = bn_boundary(3, &[PI], 2, &cfg).unwrap();
        assert!((s[0].re + 0.125).abs() < 1e-4);
        let s = bn_boundary(3, &uniform_directions(72), 2, &cfg).unwrap();
        for p in &s {
            let z = c(p.re, p.im);
            assert!(z.norm() <= 1.0 + 1e-9);
            assert!(crate::invariants::b3_boundary_defect(z).abs() <= 1e-3);
        }
        let top = hull_max_imag_at(&s, 0.0).unwrap();
        assert!((top - 3f64.powf(-1.5)).abs() < 1e-3, "{top}");
    }
}
