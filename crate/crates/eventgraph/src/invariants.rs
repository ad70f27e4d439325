//! Two-state overlaps, Bargmann invariants and candidate Gram matrices.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::graphs::EventGraph;
use crate::linalg::{self, c, cholesky_psd, is_psd, min_eigenvalue, CMat, DensityMatrix, PureState, C64};
use crate::Error;

/// Edge threshold for frame graphs.
pub const FRAME_TOL: f64 = 1e-10;
/// Entrywise tolerance for comparing frame Gram matrices.
pub const PU_TOL: f64 = 1e-8;

/// Cyclic word stored as its lexicographically minimal rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(labels: &[usize]) -> Result<Self, Error> {
        if labels.is_empty() {
            return Err(Error::Param("empty word".into()));
        }
        let n = labels.len();
        let best = (0..n)
            .map(|s| labels[s..].iter().chain(&labels[..s]).copied().collect::<Vec<_>>())
            .min()
            .unwrap();
        Ok(Self(best))
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w*`, the reversed word.
    pub fn reversed(&self) -> Self {
        let r: Vec<usize> = self.0.iter().rev().copied().collect();
        Self::new(&r).unwrap()
    }

    /// `w` and `w*` are cyclically equivalent.
    pub fn is_self_reverse(&self) -> bool {
        *self == self.reversed()
    }
}

/// States indexed by vertex label `1..=n`.
#[derive(Clone, Debug)]
pub struct VertexAssignment {
    states: Vec<DensityMatrix>,
}

impl VertexAssignment {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self, Error> {
        let d = states.first().map(|s| s.dim()).ok_or_else(|| Error::Param("empty assignment".into()))?;
        for s in &states {
            if s.dim() != d {
                return Err(Error::Dimension { expected: d, got: s.dim() });
            }
        }
        Ok(Self { states })
    }

    pub fn from_pure(psi: &[PureState]) -> Result<Self, Error> {
        Self::new(psi.iter().map(|p| p.density()).collect())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn get(&self, label: usize) -> Result<&DensityMatrix, Error> {
        label
            .checked_sub(1)
            .and_then(|i| self.states.get(i))
            .ok_or_else(|| Error::Param(format!("label {label} is not assigned")))
    }

    /// Assignment JSON: one matrix of `[re, im]` pairs per vertex.
    pub fn to_json(&self) -> Vec<Vec<Vec<[f64; 2]>>> {
        self.states.iter().map(|s| s.matrix().to_json()).collect()
    }

    pub fn from_json(data: &[Vec<Vec<[f64; 2]>>]) -> Result<Self, Error> {
        let states = data
            .iter()
            .map(|m| DensityMatrix::new(CMat::from_json(m)?))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(states)
    }
}

/// `r_ij = Tr(rho_i rho_j)` in canonical edge order, clamped to `[0, 1]`.
pub fn overlaps(g: &EventGraph, rho: &VertexAssignment) -> Result<Vec<f64>, Error> {
    if rho.len() < g.n() {
        return Err(Error::Param(format!("assignment covers {} of {} vertices", rho.len(), g.n())));
    }
    g.edges()
        .iter()
        .map(|&(i, j)| {
            let r = rho.get(i)?.matrix().trace_mul(rho.get(j)?.matrix()).re;
            if r < -1e-12 || r > 1.0 + 1e-12 {
                return Err(Error::Numeric(format!("overlap {r} outside [0,1]")));
            }
            Ok(r.clamp(0.0, 1.0))
        })
        .collect()
}

/// `Tr(rho_{w1} ... rho_{wm})` for a label sequence in the given order.
pub fn bargmann_seq(rho: &VertexAssignment, w: &[usize]) -> Result<C64, Error> {
    let (first, rest) = w.split_first().ok_or_else(|| Error::Param("empty word".into()))?;
    let mut acc = rho.get(*first)?.matrix().clone();
    for &l in rest {
        acc = &acc * rho.get(l)?.matrix();
    }
    Ok(acc.trace())
}

pub fn bargmann(rho: &VertexAssignment, w: &Word) -> Result<C64, Error> {
    bargmann_seq(rho, w.labels())
}

/// Map from canonical words to invariant values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BargmannTuple {
    pub values: BTreeMap<Word, C64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BargmannTupleJson {
    pub words: Vec<Vec<usize>>,
    pub values: Vec<[f64; 2]>,
}

impl BargmannTuple {
    pub fn from_assignment(rho: &VertexAssignment, words: &[Word]) -> Result<Self, Error> {
        let mut values = BTreeMap::new();
        for w in words {
            values.insert(w.clone(), bargmann(rho, w)?);
        }
        Ok(Self { values })
    }

    pub fn get(&self, w: &[usize]) -> Option<C64> {
        self.values.get(&Word::new(w).ok()?).copied()
    }

    /// Checks conjugate symmetry and that length-2 values are real in `[0,1]`.
    pub fn validate(&self, tol: f64) -> Result<(), Error> {
        for (w, v) in &self.values {
            if let Some(u) = self.values.get(&w.reversed()) {
                if (u - v.conj()).norm() > tol {
                    return Err(Error::Param(format!("value of reversed {:?} is not the conjugate", w.labels())));
                }
            }
            if w.len() == 2 && (v.im.abs() > tol || v.re < -tol || v.re > 1.0 + tol) {
                return Err(Error::Param(format!("overlap {:?} = {v} not in [0,1]", w.labels())));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> BargmannTupleJson {
        BargmannTupleJson {
            words: self.values.keys().map(|w| w.labels().to_vec()).collect(),
            values: self.values.values().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn from_json(j: &BargmannTupleJson) -> Result<Self, Error> {
        if j.words.len() != j.values.len() {
            return Err(Error::Dimension { expected: j.words.len(), got: j.values.len() });
        }
        let mut values = BTreeMap::new();
        for (w, v) in j.words.iter().zip(&j.values) {
            values.insert(Word::new(w)?, c(v[0], v[1]));
        }
        Ok(Self { values })
    }
}

/// `f(D) = 1 - 3|D|^{2/3} + 2|D| cos(arg D)`.
pub fn b3_boundary_defect(delta: C64) -> f64 {
    1.0 - 3.0 * delta.norm().powf(2.0 / 3.0) + 2.0 * delta.re
}

/// Membership in the set of third-order invariants.
pub fn b3_contains(delta: C64, tol: f64) -> bool {
    delta.norm() <= 1.0 + tol && b3_boundary_defect(delta) >= -tol
}

/// Upper boundary `Im D` of the third-order set at real part `x`.
pub fn b3_upper_imag(x: f64) -> Option<f64> {
    if !(-0.125..=1.0).contains(&x) {
        return None;
    }
    Some((8.0 / 27.0 * (x - 1.0).powi(2) * (x + 0.125)).max(0.0).sqrt())
}

/// `|psi_k> = cos(t/2)|0> + sin(t/2) e^{2 pi i k/n}|1>`, `k = 1..=n`.
pub fn obg_states(n: usize, theta: f64) -> Result<Vec<PureState>, Error> {
    if n < 3 {
        return Err(Error::Param(format!("n = {n} < 3")));
    }
    (1..=n)
        .map(|k| {
            let ph = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            PureState::new(vec![c((theta / 2.0).cos(), 0.0), ph * (theta / 2.0).sin()])
        })
        .collect()
}

/// Closed form `[1 + sin^2(t/2)(e^{2 pi i/n} - 1)]^n`.
pub fn obg_delta(n: usize, theta: f64) -> Result<C64, Error> {
    if n < 3 {
        return Err(Error::Param(format!("n = {n} < 3")));
    }
    let s2 = (theta / 2.0).sin().powi(2);
    let base = c(1.0, 0.0) + (C64::from_polar(1.0, 2.0 * PI / n as f64) - 1.0) * s2;
    Ok(base.powu(n as u32))
}

/// `e^{i arg D}`, with `1` for `D = 0`.
pub fn unit_phase(delta: C64) -> C64 {
    let m = delta.norm();
    if m == 0.0 {
        c(1.0, 0.0)
    } else {
        delta / m
    }
}

fn sqrt_clamped(r: f64) -> f64 {
    r.clamp(0.0, 1.0).sqrt()
}

/// Candidate Gram matrix of a triple: `sqrt(r)` off-diagonals, phase of `D123` on `(2,3)`.
pub fn candidate_h(r12: f64, r13: f64, r23: f64, delta123: C64) -> CMat {
    let ph = unit_phase(delta123);
    let (a, b, d) = (sqrt_clamped(r12), sqrt_clamped(r13), sqrt_clamped(r23));
    CMat::from_rows(&[
        vec![c(1.0, 0.0), c(a, 0.0), c(b, 0.0)],
        vec![c(a, 0.0), c(1.0, 0.0), ph * d],
        vec![c(b, 0.0), ph.conj() * d, c(1.0, 0.0)],
    ])
}

/// `r12, r13, r23` and `D123`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triplet {
    pub r12: f64,
    pub r13: f64,
    pub r23: f64,
    pub delta: C64,
}

impl Triplet {
    pub fn from_states(psi: &[PureState]) -> Result<Self, Error> {
        if psi.len() != 3 {
            return Err(Error::Dimension { expected: 3, got: psi.len() });
        }
        let rho = VertexAssignment::from_pure(psi)?;
        let o = |i, j| bargmann_seq(&rho, &[i, j]).map(|v| v.re);
        Ok(Self { r12: o(1, 2)?, r13: o(1, 3)?, r23: o(2, 3)?, delta: bargmann_seq(&rho, &[1, 2, 3])? })
    }

    pub fn from_tuple(t: &BargmannTuple) -> Result<Self, Error> {
        let get = |w: &[usize]| t.get(w).ok_or_else(|| Error::Param(format!("tuple lacks word {w:?}")));
        Ok(Self { r12: get(&[1, 2])?.re, r13: get(&[1, 3])?.re, r23: get(&[2, 3])?.re, delta: get(&[1, 2, 3])? })
    }
}

/// Pure-state realizability of a triplet, with a realization on success.
pub fn pure_realizable_triplet(t: &Triplet) -> Result<(bool, Option<Vec<PureState>>), Error> {
    let modulus = (t.r12 * t.r13 * t.r23).max(0.0).sqrt();
    if (t.delta.norm() - modulus).abs() > 1e-9 {
        return Ok((false, None));
    }
    let h = candidate_h(t.r12, t.r13, t.r23, t.delta);
    if !is_psd(&h, linalg::TOL_PSD)? {
        return Ok((false, None));
    }
    let chol = cholesky_psd(&h, linalg::TOL_PSD)?;
    let psi = chol.vectors().into_iter().map(PureState::normalized).collect::<Result<Vec<_>, _>>()?;
    let back = Triplet::from_states(&psi)?;
    let ok = (back.r12 - t.r12).abs() <= 1e-8
        && (back.r13 - t.r13).abs() <= 1e-8
        && (back.r23 - t.r23).abs() <= 1e-8
        && (back.delta - t.delta).norm() <= 1e-8;
    if !ok {
        return Err(Error::Numeric("reconstructed triplet does not match".into()));
    }
    Ok((true, Some(psi)))
}

/// `1 - r12 - r13 - r23 + 2 sqrt(r12 r13 r23) >= 0`.
pub fn triplet_overlap_realizable(r12: f64, r13: f64, r23: f64) -> bool {
    let tol = 1e-12;
    [r12, r13, r23].iter().all(|r| (-tol..=1.0 + tol).contains(r))
        && 1.0 - r12 - r13 - r23 + 2.0 * (r12 * r13 * r23).max(0.0).sqrt() >= -tol
}

/// Bounds on `r23` given `r12` and `r13`.
pub fn bound_unknown_overlap(r12: f64, r13: f64) -> Result<(f64, f64), Error> {
    for r in [r12, r13] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Param(format!("overlap {r} not in [0,1]")));
        }
    }
    let a = (r12 * r13).sqrt();
    let b = ((1.0 - r12) * (1.0 - r13)).sqrt();
    let lower = if r12 + r13 > 1.0 { (a - b).powi(2) } else { 0.0 };
    Ok((lower, (a + b).powi(2).min(1.0)))
}

/// Phase patterns `(phi123, phi124, phi134)` in reporting order.
pub const PHASE_PATTERNS: [[f64; 3]; 8] = [
    [0.0, 0.0, 0.0],
    [PI, 0.0, 0.0],
    [0.0, PI, 0.0],
    [0.0, 0.0, PI],
    [PI, PI, 0.0],
    [0.0, PI, PI],
    [PI, 0.0, PI],
    [PI, PI, PI],
];

/// Four-state candidate matrix; overlaps ordered `r12, r13, r14, r23, r24, r34`.
pub fn candidate_r(r: &[f64; 6], phases: &[f64; 3]) -> CMat {
    let s: Vec<f64> = r.iter().map(|&x| sqrt_clamped(x)).collect();
    let e = |p: f64| C64::from_polar(1.0, p);
    let one = c(1.0, 0.0);
    let re = |x: f64| c(x, 0.0);
    let (p123, p124, p134) = (e(phases[0]), e(phases[1]), e(phases[2]));
    CMat::from_rows(&[
        vec![one, re(s[0]), re(s[1]), re(s[2])],
        vec![re(s[0]), one, p123 * s[3], p124 * s[4]],
        vec![re(s[1]), p123.conj() * s[3], one, p134 * s[5]],
        vec![re(s[2]), p124.conj() * s[4], p134.conj() * s[5], one],
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImaginarityReport {
    pub witnessed: bool,
    pub min_eigenvalues: [f64; 8],
}

/// Relational imaginarity from the six overlaps of `K4`: no real sign pattern is PSD.
pub fn imaginarity_from_overlaps(r: &[f64; 6]) -> Result<ImaginarityReport, Error> {
    if r.iter().any(|&x| x.abs() < 1e-12) {
        return Err(Error::Scope("all six overlaps must be nonzero".into()));
    }
    if r.iter().any(|&x| !(0.0..=1.0 + 1e-12).contains(&x)) {
        return Err(Error::Param("overlaps must lie in [0,1]".into()));
    }
    let mut mins = [0.0; 8];
    for (k, ph) in PHASE_PATTERNS.iter().enumerate() {
        mins[k] = min_eigenvalue(&candidate_r(r, ph))?;
    }
    Ok(ImaginarityReport { witnessed: mins.iter().all(|&m| m < -linalg::TOL_PSD), min_eigenvalues: mins })
}

/// `(D_w - D_{w*}) / 2i`.
pub fn imaginary_part_witness(rho: &VertexAssignment, w: &[usize]) -> Result<f64, Error> {
    let word = Word::new(w)?;
    if word.is_self_reverse() {
        return Err(Error::Param(format!("word {w:?} equals its reversal; the witness vanishes identically")));
    }
    let rev: Vec<usize> = w.iter().rev().copied().collect();
    let d = bargmann_seq(rho, w)? - bargmann_seq(rho, &rev)?;
    Ok((d / c(0.0, 2.0)).re)
}

/// `|D_w - D_{pi(w)}|` where `pi` permutes positions.
pub fn equality_defect(rho: &VertexAssignment, w: &[usize], pi: &[usize]) -> Result<f64, Error> {
    let mut seen = vec![false; w.len()];
    if pi.len() != w.len() || pi.iter().any(|&p| p >= w.len() || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Param("pi is not a permutation of word positions".into()));
    }
    let pw: Vec<usize> = pi.iter().map(|&p| w[p]).collect();
    Ok((bargmann_seq(rho, w)? - bargmann_seq(rho, &pw)?).norm())
}

/// Edges `(i, j)` (1-based) with `|<psi_i|psi_j>| > FRAME_TOL`.
pub fn frame_graph_edges(psi: &[PureState]) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for i in 0..psi.len() {
        for j in i + 1..psi.len() {
            if psi[i].inner(&psi[j]).norm() > FRAME_TOL {
                e.push((i + 1, j + 1));
            }
        }
    }
    e
}

/// Gram matrix after gauge-fixing tree inner products to be real positive.
pub fn frame_gram(psi: &[PureState], tree: &[(usize, usize)]) -> Result<CMat, Error> {
    let n = psi.len();
    if n == 0 {
        return Err(Error::Param("empty tuple".into()));
    }
    if tree.len() + 1 != n {
        return Err(Error::Param(format!("tree has {} edges, expected {}", tree.len(), n - 1)));
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in tree {
        let (i, j) = (a.wrapping_sub(1), b.wrapping_sub(1));
        if i >= n || j >= n || i == j {
            return Err(Error::Param(format!("bad tree edge ({a},{b})")));
        }
        if psi[i].inner(&psi[j]).norm() <= FRAME_TOL {
            return Err(Error::Param(format!("tree edge ({a},{b}) is not a frame-graph edge")));
        }
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut phase = vec![None; n];
    phase[0] = Some(c(1.0, 0.0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if phase[v].is_none() {
                // <u'|v'> = conj(p_u) p_v <u|v> must be real positive
                let pu: C64 = phase[u].unwrap();
                let ip = pu.conj() * psi[u].inner(&psi[v]);
                phase[v] = Some(unit_phase(ip).conj());
                queue.push_back(v);
            }
        }
    }
    if phase.iter().any(|p| p.is_none()) {
        return Err(Error::Param("tree does not span the tuple".into()));
    }
    let vs: Vec<Vec<C64>> =
        psi.iter().zip(&phase).map(|(p, ph)| p.amps().iter().map(|a| a * ph.unwrap()).collect()).collect();
    Ok(linalg::gram(&vs))
}

/// Projective-unitary equivalence via frame Gram matrices.
pub fn pu_equivalent(a: &[PureState], b: &[PureState], tree: &[(usize, usize)]) -> Result<bool, Error> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let (ga, gb) = (frame_gram(a, tree)?, frame_gram(b, tree)?);
    Ok((&ga - &gb).max_abs() <= PU_TOL)
}

/// Direct-sum mixture realizing `p D1 + (1-p) D2` on words of length `m`.
#[derive(Clone, Debug)]
pub struct DirectSumMix {
    pub matrices: Vec<CMat>,
    /// Weight of the padding block, `1 - p^{1/m} - (1-p)^{1/m}`.
    pub padding_weight: f64,
    /// Whether every block matrix is a valid state.
    pub is_state: bool,
}

impl DirectSumMix {
    pub fn bargmann_seq(&self, w: &[usize]) -> Result<C64, Error> {
        let (first, rest) = w.split_first().ok_or_else(|| Error::Param("empty word".into()))?;
        let get = |l: usize| {
            l.checked_sub(1)
                .and_then(|i| self.matrices.get(i))
                .ok_or_else(|| Error::Param(format!("label {l} is not assigned")))
        };
        let mut acc = get(*first)?.clone();
        for &l in rest {
            acc = &acc * get(l)?;
        }
        Ok(acc.trace())
    }
}

/// `rho(i) = a rho1(i) (+) b rho2(i) (+) c |i><i|` with `a = p^{1/m}`, `b = (1-p)^{1/m}`.
pub fn direct_sum_mix(rho1: &VertexAssignment, rho2: &VertexAssignment, p: f64, m: usize) -> Result<DirectSumMix, Error> {
    if !(0.0..=1.0).contains(&p) || m == 0 {
        return Err(Error::Param("need p in [0,1] and m >= 1".into()));
    }
    if rho1.len() != rho2.len() {
        return Err(Error::Dimension { expected: rho1.len(), got: rho2.len() });
    }
    let a = p.powf(1.0 / m as f64);
    let b = (1.0 - p).powf(1.0 / m as f64);
    let cw = 1.0 - a - b;
    let n = rho1.len();
    let mut matrices = Vec::with_capacity(n);
    let mut is_state = true;
    for i in 0..n {
        let mut flag = vec![0.0; n];
        flag[i] = cw;
        let m = rho1.states[i]
            .matrix()
            .scale_re(a)
            .direct_sum(&rho2.states[i].matrix().scale_re(b))
            .direct_sum(&CMat::diag(&flag));
        is_state &= is_psd(&m, linalg::TOL_PSD)?;
        matrices.push(m);
    }
    Ok(DirectSumMix { matrices, padding_weight: cw, is_state })
}

/// `rho(i) = rho1(i) (x) rho2(i)`, realizing the Hadamard product of tuples.
pub fn tensor_assignment(rho1: &VertexAssignment, rho2: &VertexAssignment) -> Result<VertexAssignment, Error> {
    if rho1.len() != rho2.len() {
        return Err(Error::Dimension { expected: rho1.len(), got: rho2.len() });
    }
    let states = rho1
        .states
        .iter()
        .zip(&rho2.states)
        .map(|(x, y)| DensityMatrix::new(x.matrix().kron(y.matrix())))
        .collect::<Result<Vec<_>, _>>()?;
    VertexAssignment::new(states)
}

pub fn random_pure_assignment(n: usize, d: usize, seed: u64) -> Result<VertexAssignment, Error> {
    let mut r = linalg::rng(seed);
    VertexAssignment::new((0..n).map(|_| linalg::random_pure_state_rng(d, &mut r).density()).collect())
}

pub fn random_mixed_assignment(n: usize, d: usize, seed: u64) -> Result<VertexAssignment, Error> {
    let mut r = linalg::rng(seed);
    VertexAssignment::new((0..n).map(|_| linalg::random_density_rng(d, &mut r)).collect())
}

/// Diagonal states with Dirichlet-distributed spectra.
pub fn random_diagonal_assignment(n: usize, d: usize, seed: u64) -> Result<VertexAssignment, Error> {
    use rand::Rng;
    let mut r = linalg::rng(seed);
    let states = (0..n)
        .map(|_| {
            let w: Vec<f64> = (0..d).map(|_| -r.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
            let s: f64 = w.iter().sum();
            DensityMatrix::new(CMat::diag(&w.iter().map(|x| x / s).collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    VertexAssignment::new(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    fn ket(a: C64, b: C64) -> PureState {
        PureState::normalized(vec![a, b]).unwrap()
    }

    fn zero_plus_plusi() -> Vec<PureState> {
        let s = 1.0 / 2f64.sqrt();
        vec![ket(c(1.0, 0.0), c(0.0, 0.0)), ket(c(s, 0.0), c(s, 0.0)), ket(c(s, 0.0), c(0.0, s))]
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn words() {
        let w = Word::new(&[3, 1, 2]).unwrap();
        assert_eq!(w.labels(), &[1, 2, 3]);
        assert_eq!(w.reversed().labels(), &[1, 3, 2]);
        assert!(!w.is_self_reverse());
        assert!(Word::new(&[1, 2, 1, 2]).unwrap().is_self_reverse());
        assert!(Word::new(&[1, 2]).unwrap().is_self_reverse());
        assert!(Word::new(&[]).is_err());
    }

    #[test]
    fn overlap_examples() {
        let c3 = graphs::cycle(3).unwrap();
        let rho = VertexAssignment::from_pure(&zero_plus_plusi()).unwrap();
        for r in overlaps(&c3, &rho).unwrap() {
            assert!((r - 0.5).abs() < 1e-12);
        }
        let mixed = VertexAssignment::new(vec![DensityMatrix::maximally_mixed(2); 3]).unwrap();
        assert!(overlaps(&c3, &mixed).unwrap().iter().all(|r| (r - 0.5).abs() < 1e-12));
        let same = VertexAssignment::from_pure(&vec![PureState::basis(2, 1); 3]).unwrap();
        assert!(overlaps(&c3, &same).unwrap().iter().all(|r| (r - 1.0).abs() < 1e-12));
        let bad = VertexAssignment::new(vec![DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(3)]);
        assert!(bad.is_err());
    }

    #[test]
    fn bargmann_examples() {
        let s = 1.0 / 2f64.sqrt();
        let psi = vec![
            ket(c(1.0, 0.0), c(0.0, 0.0)),
            ket(c(s, 0.0), c(-s, 0.0)),
            ket(c(1.0, 0.0), c(1.0, -1.0)),
        ];
        let rho = VertexAssignment::from_pure(&psi).unwrap();
        let d = bargmann_seq(&rho, &[1, 2, 3]).unwrap();
        assert!(close(d, c(0.0, 1.0 / 6.0), 1e-12));
        let h = 3f64.sqrt() / 2.0;
        let psi = vec![ket(c(1.0, 0.0), c(0.0, 0.0)), ket(c(0.5, 0.0), c(h, 0.0)), ket(c(0.5, 0.0), c(-h, 0.0))];
        let rho = VertexAssignment::from_pure(&psi).unwrap();
        let d = bargmann_seq(&rho, &[1, 2, 3]).unwrap();
        assert!(close(d, c(-0.125, 0.0), 1e-12));
        assert!(close(bargmann_seq(&rho, &[2]).unwrap(), c(1.0, 0.0), 1e-12));
        assert!(bargmann_seq(&rho, &[4]).is_err());
    }

    #[test]
    fn boundary_defect() {
        assert!(b3_boundary_defect(c(1.0, 0.0)).abs() < 1e-12);
        assert!(b3_boundary_defect(c(-0.125, 0.0)).abs() < 1e-12);
        for k in 0..50 {
            let t = PI * k as f64 / 49.0;
            assert!(b3_boundary_defect(obg_delta(3, t).unwrap()).abs() < 1e-10);
        }
        assert!(b3_contains(c(0.0, 0.0), 1e-12));
        assert!(!b3_contains(c(-0.2, 0.0), 1e-12));
        assert!((b3_upper_imag(0.0).unwrap() - 3f64.powf(-1.5)).abs() < 1e-12);
    }

    #[test]
    fn obg_closed_form() {
        for n in 3..8 {
            for k in 0..10 {
                let t = 0.3 * k as f64;
                let rho = VertexAssignment::from_pure(&obg_states(n, t).unwrap()).unwrap();
                let w: Vec<usize> = (1..=n).collect();
                let d = bargmann_seq(&rho, &w).unwrap();
                assert!(close(d, obg_delta(n, t).unwrap(), 1e-10), "n={n} t={t}");
            }
        }
        assert!(close(obg_delta(3, 0.0).unwrap(), c(1.0, 0.0), 1e-12));
        assert!(close(obg_delta(3, PI).unwrap(), c(1.0, 0.0), 1e-12));
        assert!(obg_states(2, 0.0).is_err());
        let d = obg_delta(400, 2.0 * (0.25f64).sqrt().asin()).unwrap();
        assert!(close(d, C64::from_polar(1.0, 2.0 * PI * 0.25), 0.01));
    }

    #[test]
    fn candidate_h_examples() {
        let psi = zero_plus_plusi();
        let t = Triplet::from_states(&psi).unwrap();
        let h = candidate_h(t.r12, t.r13, t.r23, t.delta);
        assert!(close(unit_phase(h[(1, 2)]), C64::from_polar(1.0, PI / 4.0), 1e-12));
        assert!(is_psd(&h, 1e-9).unwrap());
        assert!(close(linalg::det(&candidate_h(1.0, 1.0, 0.0, c(0.0, 0.0))), c(-1.0, 0.0), 1e-12));
        let h = candidate_h(0.0, 0.25, 0.25, c(1.0, 0.0));
        let ev = linalg::eigenvalues(&h).unwrap();
        let s = 2f64.sqrt();
        for (a, b) in ev.iter().zip([(2.0 - s) / 2.0, 1.0, (2.0 + s) / 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(close(linalg::det(&h), c(0.5, 0.0), 1e-12));
    }

    #[test]
    fn realizability() {
        let bad = Triplet { r12: 0.0, r13: 0.25, r23: 0.25, delta: c(1.0, 0.0) };
        assert!(!pure_realizable_triplet(&bad).unwrap().0);
        let good = Triplet { r12: 0.5, r13: 0.5, r23: 0.5, delta: C64::from_polar(1.0 / (2.0 * 2f64.sqrt()), -PI / 4.0) };
        let (ok, psi) = pure_realizable_triplet(&good).unwrap();
        assert!(ok);
        let back = Triplet::from_states(&psi.unwrap()).unwrap();
        assert!(close(back.delta, good.delta, 1e-8));
        for seed in 0..20 {
            let mut r = linalg::rng(seed);
            let psi: Vec<_> = (0..3).map(|_| linalg::random_pure_state_rng(2, &mut r)).collect();
            let t = Triplet::from_states(&psi).unwrap();
            assert!(pure_realizable_triplet(&t).unwrap().0);
            assert!(triplet_overlap_realizable(t.r12, t.r13, t.r23));
        }
        assert!(triplet_overlap_realizable(0.5, 0.5, 0.5));
        assert!(!triplet_overlap_realizable(1.0, 1.0, 0.0));
        assert!(triplet_overlap_realizable(1.0, 1.0, 1.0));
    }

    #[test]
    fn unknown_overlap() {
        let (lo, _) = bound_unknown_overlap(0.98, 0.98).unwrap();
        assert!(lo >= 0.9216 - 1e-12);
        assert_eq!(bound_unknown_overlap(1.0, 1.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = bound_unknown_overlap(0.5, 0.5).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 1.0).abs() < 1e-12);
        assert!(bound_unknown_overlap(1.5, 0.5).is_err());
    }

    #[test]
    fn imaginarity_listing() {
        let s6 = 6f64.sqrt();
        let r = [0.5, 0.5, 0.75, 0.5, (4.0 + s6) / 8.0, (4.0 - s6) / 8.0];
        let rep = imaginarity_from_overlaps(&r).unwrap();
        assert!(rep.witnessed);
        let want = [-0.044984, -0.512315, -0.709002, -0.561292, -0.837603, -0.704281, -0.491359, -1.17472];
        for (a, b) in rep.min_eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        assert!(!imaginarity_from_overlaps(&[1.0; 6]).unwrap().witnessed);
        assert!(matches!(imaginarity_from_overlaps(&[0.0, 0.5, 0.5, 0.5, 0.5, 0.5]), Err(Error::Scope(_))));
        for seed in 0..10 {
            let mut rg = linalg::rng(seed);
            let psi: Vec<PureState> = (0..4)
                .map(|_| {
                    let v = linalg::random_pure_state_rng(3, &mut rg);
                    PureState::from_real(&v.amps().iter().map(|a| a.re).collect::<Vec<_>>()).unwrap()
                })
                .collect();
            let rho = VertexAssignment::from_pure(&psi).unwrap();
            let ov = overlaps(&graphs::complete(4).unwrap(), &rho).unwrap();
            let arr: [f64; 6] = ov.try_into().unwrap();
            assert!(!imaginarity_from_overlaps(&arr).unwrap().witnessed);
        }
    }

    #[test]
    fn imaginary_witness() {
        let s = 1.0 / 2f64.sqrt();
        let psi = vec![
            ket(c(1.0, 0.0), c(0.0, 0.0)),
            ket(c(s, 0.0), c(-s, 0.0)),
            ket(c(1.0, 0.0), c(1.0, -1.0)),
        ];
        let rho = VertexAssignment::from_pure(&psi).unwrap();
        assert!((imaginary_part_witness(&rho, &[1, 2, 3]).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        let rho = VertexAssignment::from_pure(&zero_plus_plusi()).unwrap();
        let im = bargmann_seq(&rho, &[1, 2, 3]).unwrap().im;
        assert!((imaginary_part_witness(&rho, &[1, 2, 3]).unwrap() - im).abs() < 1e-12);
        assert!(imaginary_part_witness(&rho, &[1, 2]).is_err());
    }

    #[test]
    fn equality_defect_example() {
        for &w in &[0.2, 0.5, 0.7] {
            let rho1 = CMat::from_real(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
            let rho2 = CMat::diag(&[1.0 / 3.0, 2.0 / 3.0]);
            let sig1 = CMat::from_real(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
            let sig2 = CMat::from_real(&[vec![0.5, -0.25], vec![-0.25, 0.5]]);
            let xi1 = &rho1.scale_re(w) + &sig1.scale_re(1.0 - w);
            let xi2 = &rho2.scale_re(w) + &sig2.scale_re(1.0 - w);
            let rho = VertexAssignment::new(vec![DensityMatrix::new(xi1).unwrap(), DensityMatrix::new(xi2).unwrap()]).unwrap();
            let d = equality_defect(&rho, &[1, 1, 2, 2], &[0, 2, 1, 3]).unwrap();
            let want = w * w * (1.0 - w) * (1.0 - w) / 144.0;
            assert!((d - want).abs() < 1e-12, "{d} vs {want}");
        }
        let diag = random_diagonal_assignment(2, 3, 1).unwrap();
        assert!(equality_defect(&diag, &[1, 2, 1, 2], &[0, 2, 1, 3]).unwrap() < 1e-14);
        let rnd = random_mixed_assignment(2, 2, 5).unwrap();
        assert!(equality_defect(&rnd, &[1, 2, 1, 2], &[0, 2, 1, 3]).unwrap() > 0.0);
        assert!(equality_defect(&rnd, &[1, 2], &[0, 0]).is_err());
    }

    #[test]
    fn frame_gram_examples() {
        let psi = zero_plus_plusi();
        let g = frame_gram(&psi, &[(1, 2), (2, 3)]).unwrap();
        assert!(close(g[(0, 2)], C64::from_polar(0.5f64.sqrt(), -PI / 4.0), 1e-12));
        assert!(g[(0, 1)].im.abs() < 1e-12 && g[(1, 2)].im.abs() < 1e-12);
        let g2 = frame_gram(&psi, &[(1, 2), (1, 3)]).unwrap();
        assert!(close(unit_phase(g2[(1, 2)]), C64::from_polar(1.0, PI / 4.0), 1e-12));
        let t = Triplet::from_states(&psi).unwrap();
        let h = candidate_h(t.r12, t.r13, t.r23, t.delta);
        assert!((&h - &g2).max_abs() < 1e-12);
        let u = linalg::random_unitary_rng(2, &mut linalg::rng(3));
        let moved: Vec<PureState> = psi
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let v: Vec<C64> = u.mul_vec(p.amps()).iter().map(|a| a * C64::from_polar(1.0, k as f64)).collect();
                PureState::normalized(v).unwrap()
            })
            .collect();
        assert!(pu_equivalent(&psi, &moved, &[(1, 2), (2, 3)]).unwrap());
        let conj: Vec<PureState> =
            psi.iter().map(|p| PureState::normalized(p.amps().iter().map(|a| a.conj()).collect()).unwrap()).collect();
        assert!(!pu_equivalent(&psi, &conj, &[(1, 2), (2, 3)]).unwrap());
        assert!(frame_gram(&psi, &[(1, 2)]).is_err());
        let orth = vec![PureState::basis(2, 0), PureState::basis(2, 1), zero_plus_plusi()[1].clone()];
        assert!(frame_gram(&orth, &[(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn direct_sum_identity() {
        let r1 = random_pure_assignment(3, 2, 1).unwrap();
        let r2 = random_pure_assignment(3, 2, 2).unwrap();
        for p in [0.25, 0.5, 0.75] {
            let mix = direct_sum_mix(&r1, &r2, p, 3).unwrap();
            assert!(mix.padding_weight < 0.0);
            assert!(!mix.is_state);
            for w in [[1, 2, 3], [1, 3, 2], [1, 1, 2]] {
                let want = bargmann_seq(&r1, &w).unwrap() * p + bargmann_seq(&r2, &w).unwrap() * (1.0 - p);
                assert!(close(mix.bargmann_seq(&w).unwrap(), want, 1e-9));
            }
        }
        let m1 = direct_sum_mix(&r1, &r2, 0.3, 1).unwrap();
        assert!(m1.is_state && m1.padding_weight.abs() < 1e-15);
    }

    #[test]
    fn hadamard_closure() {
        let r1 = random_mixed_assignment(3, 2, 7).unwrap();
        let r2 = random_pure_assignment(3, 2, 8).unwrap();
        let t = tensor_assignment(&r1, &r2).unwrap();
        for w in [vec![1, 2], vec![1, 2, 3], vec![2, 3, 1, 1]] {
            let want = bargmann_seq(&r1, &w).unwrap() * bargmann_seq(&r2, &w).unwrap();
            assert!(close(bargmann_seq(&t, &w).unwrap(), want, 1e-9));
        }
    }

    #[test]
    fn tuple_json() {
        let rho = VertexAssignment::from_pure(&zero_plus_plusi()).unwrap();
        let words: Vec<Word> = [vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3], vec![1, 3, 2]]
            .iter()
            .map(|w| Word::new(w).unwrap())
            .collect();
        let t = BargmannTuple::from_assignment(&rho, &words).unwrap();
        t.validate(1e-12).unwrap();
        let j = serde_json::to_string(&t.to_json()).unwrap();
        let back = BargmannTuple::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, t);
        let tr = Triplet::from_tuple(&t).unwrap();
        assert!(pure_realizable_triplet(&tr).unwrap().0);
    }
}
