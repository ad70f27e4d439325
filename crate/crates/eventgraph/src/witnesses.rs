//! Interrogation efficiencies, robust cycle bounds and correlator forms.

use std::f64::consts::PI;

use num_rational::BigRational;
use serde::Serialize;

use crate::graphs::{self, EventGraph};
use crate::linalg::{c, CMat, PureState};
use crate::polytope::{rat, InequalityJson, LinearInequality};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterrogationPoint {
    pub r: f64,
    pub eta_q: f64,
    pub eta_nc: f64,
}

impl InterrogationPoint {
    pub fn new(r: f64) -> Self {
        Self { r, eta_q: eta_q(r), eta_nc: eta_nc(r) }
    }

    pub fn gap(&self) -> f64 {
        self.eta_q - self.eta_nc
    }
}

pub fn eta_q(r: f64) -> f64 {
    r / (1.0 + r)
}

/// `(1 + (2r-1)^2) / (2(r+1))`.
pub fn eta_nc(r: f64) -> f64 {
    (1.0 + (2.0 * r - 1.0).powi(2)) / (2.0 * (r + 1.0))
}

/// `(-2r^2 + 3r - 1) / (r + 1)`.
pub fn gap(r: f64) -> f64 {
    (-2.0 * r * r + 3.0 * r - 1.0) / (r + 1.0)
}

pub fn interrogation_curve(rs: &[f64]) -> Result<Vec<InterrogationPoint>, Error> {
    rs.iter()
        .map(|&r| {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Param(format!("r = {r} not in [0,1]")));
            }
            Ok(InterrogationPoint::new(r))
        })
        .collect()
}

/// `r* = sqrt(3) - 1`, `gap* = 7 - 4 sqrt(3)`.
pub fn interrogation_gap_max() -> (f64, f64) {
    let s = 3f64.sqrt();
    (s - 1.0, 7.0 - 4.0 * s)
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    (a + b) / 2.0
}

/// Numeric cross-check of the gap maximum.
pub fn interrogation_gap_max_numeric() -> (f64, f64) {
    let r = golden_max(gap, 0.5, 1.0, 1e-12);
    (r, gap(r))
}

/// `D_nu(X) = (1-nu) X + nu Tr(X) I/d`.
pub fn depolarize(x: &CMat, nu: f64) -> CMat {
    let d = x.dim();
    &x.scale_re(1.0 - nu) + &CMat::identity(d).scale(x.trace() * (nu / d as f64))
}

/// `|theta> = cos t|0> + i sin t|1>` and its conjugate.
pub fn interrogation_states(theta: f64) -> [PureState; 4] {
    let (ct, st) = (theta.cos(), theta.sin());
    [
        PureState::basis(2, 0),
        PureState::basis(2, 1),
        PureState::normalized(vec![c(ct, 0.0), c(0.0, st)]).unwrap(),
        PureState::normalized(vec![c(ct, 0.0), c(0.0, -st)]).unwrap(),
    ]
}

/// `1 - Tr(D_nu(P)^2)` for a pure qubit projector.
pub fn epsilon(nu: f64) -> f64 {
    nu - nu * nu / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoisyPoint {
    pub theta: f64,
    pub nu: f64,
    pub eta_q: f64,
    pub eta_nc: f64,
}

/// Quantum efficiency and robust noncontextual bound from depolarized states.
///
/// `eta_nc = (1 + Tr(rho_t rho_t') + e_0 + e_t + e_t') / (2 (Tr(rho_0 rho_t) + 1))`,
/// with each `e_i = 1 - Tr(rho_i^2)` read off the states.
pub fn noisy_interrogation(theta: f64, nu: f64) -> Result<NoisyPoint, Error> {
    if !(0.0..=PI).contains(&theta) || !(0.0..=1.0).contains(&nu) {
        return Err(Error::Param(format!("need theta in [0,pi], nu in [0,1]; got ({theta}, {nu})")));
    }
    let [s0, _s1, st, sd] = interrogation_states(theta);
    let rho = |s: &PureState| depolarize(s.density().matrix(), nu);
    let (r0, rt, rd) = (rho(&s0), rho(&st), rho(&sd));
    let t0t = r0.trace_mul(&rt).re;
    let ttd = rt.trace_mul(&rd).re;
    let eps: f64 = [&r0, &rt, &rd].iter().map(|m| 1.0 - m.trace_mul(m).re).sum();
    Ok(NoisyPoint {
        theta,
        nu,
        eta_q: t0t / (t0t + 1.0),
        eta_nc: (1.0 + ttd + eps) / (2.0 * (t0t + 1.0)),
    })
}

/// Smallest `nu` at which the advantage vanishes; `0` when there is none at `nu = 0`.
pub fn noise_threshold(theta: f64, tol: f64) -> Result<f64, Error> {
    let adv = |nu: f64| noisy_interrogation(theta, nu).map(|p| p.eta_q - p.eta_nc);
    if adv(0.0)? <= 1e-12 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    if adv(hi)? > 0.0 {
        return Err(Error::Numeric(format!("no crossing in [0,1] at theta = {theta}")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if adv(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub const DEFAULT_THETA_GRID: usize = 400;
pub const THRESHOLD_TOL: f64 = 1e-6;

/// `theta_k = pi k / (m+1)`, `k = 1..=m`, strictly inside `(0, pi)`.
pub fn theta_grid(m: usize) -> Vec<f64> {
    (1..=m).map(|k| PI * k as f64 / (m + 1) as f64).collect()
}

/// Largest threshold over a grid, then golden-section refinement around it.
pub fn max_noise_threshold(grid: &[f64], tol: f64) -> Result<(f64, f64), Error> {
    let mut best = (0.0, 0.0);
    for &t in grid {
        let v = noise_threshold(t, tol)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    if grid.len() >= 2 {
        let h = PI / grid.len() as f64;
        let (a, b) = ((best.0 - h).max(0.0), (best.0 + h).min(PI));
        let t = golden_max(|t| noise_threshold(t, tol).unwrap_or(0.0), a, b, 1e-8);
        let v = noise_threshold(t, tol)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

/// Cycle functional with bound `n - 2 + sum(eps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RobustCycleBound {
    pub inequality: LinearInequality,
    pub bound: f64,
}

pub fn robust_cycle_bound(n: usize, eps: &[f64]) -> Result<RobustCycleBound, Error> {
    if eps.len() != n {
        return Err(Error::Dimension { expected: n, got: eps.len() });
    }
    if eps.iter().any(|&e| !(e >= 0.0)) {
        return Err(Error::Param("epsilons must be nonnegative".into()));
    }
    let (_, ineq) = crate::polytope::cycle_inequality(n, (1, n))?;
    Ok(RobustCycleBound { bound: n as f64 - 2.0 + eps.iter().sum::<f64>(), inequality: ineq })
}

/// `sum g_e <x_i x_j> <= bound` over the edges of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatorInequality {
    pub coeffs: Vec<i64>,
    pub bound: BigRational,
}

impl CorrelatorInequality {
    pub fn evaluate(&self, corr: &[f64]) -> Result<f64, Error> {
        if corr.len() != self.coeffs.len() {
            return Err(Error::Dimension { expected: self.coeffs.len(), got: corr.len() });
        }
        Ok(self.coeffs.iter().zip(corr).map(|(&c, x)| c as f64 * x).sum())
    }

    pub fn to_json(&self, graph: &str, label: &str) -> InequalityJson {
        InequalityJson {
            graph: graph.to_string(),
            coeffs: self.coeffs.clone(),
            bound: self.bound.to_string(),
            label: label.to_string(),
            correlator: Some(true),
        }
    }

    pub fn display(&self, g: &EventGraph) -> String {
        let mut s = String::new();
        for (k, &cf) in self.coeffs.iter().enumerate() {
            if cf == 0 {
                continue;
            }
            let (u, v) = g.edges()[k];
            let mag = cf.unsigned_abs();
            let term = if mag == 1 { format!("<x{u}x{v}>") } else { format!("{mag}<x{u}x{v}>") };
            match (s.is_empty(), cf < 0) {
                (true, true) => s.push('-'),
                (true, false) => {}
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
            }
            s.push_str(&term);
        }
        format!("{s} <= {}", self.bound)
    }
}

/// Substitutes `r = (<xy> + 1)/2`: bound becomes `2b - sum(g)`.
pub fn to_correlator(ineq: &LinearInequality) -> CorrelatorInequality {
    let h1: i64 = ineq.coeffs.iter().sum();
    CorrelatorInequality { coeffs: ineq.coeffs.clone(), bound: &ineq.bound * rat(2) - rat(h1) }
}

/// Inverse substitution `<xy> = 2r - 1`.
pub fn from_correlator(ci: &CorrelatorInequality) -> LinearInequality {
    let h1: i64 = ci.coeffs.iter().sum();
    LinearInequality::new(ci.coeffs.clone(), (&ci.bound + rat(h1)) / rat(2))
}

/// Maximum of the correlator functional over all `+-1` vertex assignments.
pub fn correlator_max_pm1(ci: &CorrelatorInequality, g: &EventGraph) -> Result<i64, Error> {
    if ci.coeffs.len() != g.num_edges() {
        return Err(Error::Dimension { expected: g.num_edges(), got: ci.coeffs.len() });
    }
    if g.n() > 20 {
        return Err(Error::Size(format!("{} vertices exceed the brute-force limit 20", g.n())));
    }
    let mut best = i64::MIN;
    for mask in 0u32..(1u32 << g.n()) {
        let x = |v: usize| if mask >> (v - 1) & 1 == 1 { -1i64 } else { 1 };
        let val: i64 = g.edges().iter().zip(&ci.coeffs).map(|(&(u, v), &cf)| cf * x(u) * x(v)).sum();
        best = best.max(val);
    }
    Ok(best)
}

/// Valid on every `+-1` assignment and on every deterministic partition labeling.
pub fn correlator_valid(ci: &CorrelatorInequality, g: &EventGraph) -> Result<bool, Error> {
    if BigRational::from_integer(correlator_max_pm1(ci, g)?.into()) > ci.bound {
        return Ok(false);
    }
    for lab in graphs::enumerate_extreme_labelings(g)? {
        let val: i64 = lab.bits.iter().zip(&ci.coeffs).map(|(&b, &cf)| cf * (2 * b as i64 - 1)).sum();
        if BigRational::from_integer(val.into()) > ci.bound {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cycle_inequality, inequality_family, FamilyTag};

    #[test]
    fn curve_points() {
        let p = InterrogationPoint::new(0.5);
        assert!((p.eta_q - 1.0 / 3.0).abs() < 1e-15 && (p.eta_nc - 1.0 / 3.0).abs() < 1e-15);
        let p = InterrogationPoint::new(1.0);
        assert!((p.eta_q - 0.5).abs() < 1e-15 && (p.eta_nc - 0.5).abs() < 1e-15);
        let (r, g) = interrogation_gap_max();
        assert!((gap(r) - g).abs() < 1e-15);
        assert!((g - 0.0717968).abs() < 1e-7);
        assert_eq!(gap(0.0), -1.0);
        assert!(gap(0.5).abs() < 1e-15);
        assert!(interrogation_curve(&[1.5]).is_err());
        for k in 0..=100 {
            let p = InterrogationPoint::new(k as f64 / 100.0);
            assert!((p.gap() - gap(p.r)).abs() < 1e-14);
        }
    }

    #[test]
    fn numeric_gap_max() {
        let (r, g) = interrogation_gap_max_numeric();
        let (r0, g0) = interrogation_gap_max();
        assert!((r - r0).abs() < 1e-6 && (g - g0).abs() < 1e-10);
    }

    #[test]
    fn depolarizing_channel() {
        let s = &interrogation_states(0.7)[2];
        for nu in [0.0, 0.1, 0.5, 1.0] {
            let m = depolarize(s.density().matrix(), nu);
            assert!((m.trace().re - 1.0).abs() < 1e-15);
            assert!((m.trace_mul(&m).re - (1.0 + nu * nu / 2.0 - nu)).abs() < 1e-14);
            assert!((1.0 - m.trace_mul(&m).re - epsilon(nu)).abs() < 1e-14);
        }
    }

    #[test]
    fn noisy_reduces_to_ideal() {
        for k in 0..50 {
            let t = PI * k as f64 / 49.0;
            let p = noisy_interrogation(t, 0.0).unwrap();
            let q = InterrogationPoint::new(t.cos().powi(2));
            assert!((p.eta_q - q.eta_q).abs() < 1e-12 && (p.eta_nc - q.eta_nc).abs() < 1e-12);
        }
        let p = noisy_interrogation(5.0 * PI / 6.0, 0.0).unwrap();
        assert!((p.eta_q - 0.428).abs() < 1e-3);
    }

    #[test]
    fn thresholds() {
        assert_eq!(noise_threshold(PI / 4.0, 1e-9).unwrap(), 0.0);
        let t = noise_threshold(5.0 * PI / 6.0, 1e-9).unwrap();
        assert!((t - 0.057).abs() < 0.002, "{t}");
        let (_, m) = max_noise_threshold(&theta_grid(200), 1e-9).unwrap();
        assert!((m - 0.057).abs() < 0.002, "{m}");
    }

    #[test]
    fn robust_bounds() {
        assert_eq!(robust_cycle_bound(3, &[0.0; 3]).unwrap().bound, 1.0);
        assert!((robust_cycle_bound(3, &[0.01; 3]).unwrap().bound - 1.03).abs() < 1e-12);
        assert!((robust_cycle_bound(5, &[0.02; 5]).unwrap().bound - 3.10).abs() < 1e-12);
        assert!(robust_cycle_bound(3, &[0.0, -0.1, 0.0]).is_err());
        assert!(robust_cycle_bound(3, &[0.0; 2]).is_err());
    }

    #[test]
    fn correlators() {
        let (g4, c4) = cycle_inequality(4, (1, 4)).unwrap();
        let chsh = to_correlator(&c4);
        assert_eq!(chsh.bound, rat(2));
        assert_eq!(chsh.display(&g4), "<x1x2> - <x1x4> + <x2x3> + <x3x4> <= 2");
        assert!(correlator_valid(&chsh, &g4).unwrap());
        let (g3, c3) = cycle_inequality(3, (1, 3)).unwrap();
        assert_eq!(to_correlator(&c3).bound, rat(1));
        let (g, h4) = inequality_family(&FamilyTag::Hn(4)).unwrap();
        let ch = to_correlator(&h4);
        assert_eq!(ch.bound, rat(2));
        assert!(correlator_valid(&ch, &g).unwrap());
        assert_eq!(from_correlator(&to_correlator(&c3)).coeffs, c3.coeffs);
        assert_eq!(from_correlator(&to_correlator(&c3)).bound, c3.bound);
        assert!(correlator_valid(&to_correlator(&c3), &g3).unwrap());
    }
}
