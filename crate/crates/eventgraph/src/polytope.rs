//! Exact V/H representations of event-graph polytopes.
//!
//! Facets are computed by a Motzkin double-description pass with the
//! combinatorial adjacency test, over arbitrary-precision integers and
//! rationals. No floating point is used for polytope data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::graphs::{self, EventGraph};
use crate::Error;

pub type Rational = BigRational;
pub type RationalVector = Vec<BigRational>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Param(format!("bad rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact rational from a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational, Error> {
    BigRational::from_float(x).ok_or_else(|| Error::Numeric(format!("non-finite coordinate {x}")))
}

/// Finite point set in `Q^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<RationalVector>,
    pub ambient_dim: usize,
}

impl VRep {
    pub fn from_labelings(labs: &[graphs::DeterministicLabeling], dim: usize) -> Self {
        let vertices = labs.iter().map(|l| l.bits.iter().map(|&b| rat(b as i64)).collect()).collect();
        Self { vertices, ambient_dim: dim }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<RationalVector> {
        self.vertices.iter().cloned().collect()
    }

    /// Dimension of the affine hull; `None` when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        let first = self.vertices.first()?;
        let diffs: Vec<RationalVector> =
            self.vertices[1..].iter().map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
        Some(rank(&diffs))
    }

    /// Vertices whose coordinates cannot be written as convex combinations
    /// of the others are kept; for 0/1 points this is every point.
    pub fn is_zero_one(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_zero() || x.is_one()))
    }
}

/// `<coeffs, r> <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearInequality {
    pub coeffs: Vec<i64>,
    pub bound: BigRational,
    pub label: Option<String>,
}

impl LinearInequality {
    /// Builds and GCD-normalizes.
    pub fn new(coeffs: Vec<i64>, bound: BigRational) -> Self {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_big(&big, &bound).expect("normalized coefficients fit in i64")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn from_big(coeffs: &[BigInt], bound: &BigRational) -> Result<Self, Error> {
        let den = bound.denom().clone();
        let mut c: Vec<BigInt> = coeffs.iter().map(|x| x * &den).collect();
        let mut b = bound.numer().clone();
        let mut g = b.abs();
        for x in &c {
            g = g.gcd(x);
        }
        if !g.is_zero() && !g.is_one() {
            for x in c.iter_mut() {
                *x /= &g;
            }
            b /= &g;
        }
        let coeffs = c
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Numeric("coefficient overflow".into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { coeffs, bound: BigRational::from_integer(b), label: None })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, r: &[BigRational]) -> Result<BigRational, Error> {
        if r.len() != self.coeffs.len() {
            return Err(Error::Dimension { expected: self.coeffs.len(), got: r.len() });
        }
        Ok(self.coeffs.iter().zip(r).fold(BigRational::zero(), |acc, (&c, x)| acc + x * rat(c)))
    }

    pub fn evaluate_f64(&self, r: &[f64]) -> Result<f64, Error> {
        if r.len() != self.coeffs.len() {
            return Err(Error::Dimension { expected: self.coeffs.len(), got: r.len() });
        }
        Ok(self.coeffs.iter().zip(r).map(|(&c, x)| c as f64 * x).sum())
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_satisfied(&self, r: &[BigRational]) -> Result<bool, Error> {
        Ok(self.evaluate(r)? <= self.bound)
    }

    /// `0 <= r_e` or `r_e <= 1`.
    pub fn is_trivial(&self) -> bool {
        let nz: Vec<i64> = self.coeffs.iter().copied().filter(|&c| c != 0).collect();
        nz.len() == 1
            && ((nz[0] == -1 && self.bound.is_zero()) || (nz[0] == 1 && self.bound.is_one()))
    }

    /// Coefficients permuted so that coordinate `k` moves to `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut c = vec![0; self.coeffs.len()];
        for (k, &p) in perm.iter().enumerate() {
            c[p] = self.coeffs[k];
        }
        Self { coeffs: c, bound: self.bound.clone(), label: self.label.clone() }
    }

    /// Re-expresses the inequality over a supergraph with the same vertex labels.
    pub fn embed(&self, from: &EventGraph, to: &EventGraph) -> Result<Self, Error> {
        if self.coeffs.len() != from.num_edges() {
            return Err(Error::Dimension { expected: from.num_edges(), got: self.coeffs.len() });
        }
        let mut c = vec![0; to.num_edges()];
        for (k, &(u, v)) in from.edges().iter().enumerate() {
            let j = to
                .edge_index(u, v)
                .ok_or_else(|| Error::Param(format!("edge ({u},{v}) missing from target graph")))?;
            c[j] = self.coeffs[k];
        }
        Ok(Self { coeffs: c, bound: self.bound.clone(), label: self.label.clone() })
    }

    pub fn to_json(&self, graph: &str) -> InequalityJson {
        InequalityJson {
            graph: graph.to_string(),
            coeffs: self.coeffs.clone(),
            bound: self.bound.to_string(),
            label: self.label.clone().unwrap_or_default(),
            correlator: None,
        }
    }

    /// Renders as `-r12 + r13 + r23 <= 1`.
    pub fn display(&self, g: &EventGraph) -> String {
        let mut s = String::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (u, v) = g.edges()[k];
            let mag = c.unsigned_abs();
            let term = if mag == 1 { format!("r{u}{v}") } else { format!("{mag}r{u}{v}") };
            match (s.is_empty(), c < 0) {
                (true, true) => s.push('-'),
                (true, false) => {}
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
            }
            s.push_str(&term);
        }
        if s.is_empty() {
            s.push('0');
        }
        format!("{s} <= {}", self.bound)
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} <= {}", self.coeffs, self.bound)
    }
}

/// JSON form `{"graph", "coeffs", "bound": "p/q", "label"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InequalityJson {
    pub graph: String,
    pub coeffs: Vec<i64>,
    pub bound: String,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub correlator: Option<bool>,
}

impl InequalityJson {
    pub fn to_inequality(&self) -> Result<LinearInequality, Error> {
        let mut ineq = LinearInequality::new(self.coeffs.clone(), parse_rational(&self.bound)?);
        if !self.label.is_empty() {
            ineq.label = Some(self.label.clone());
        }
        Ok(ineq)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub inequalities: Vec<LinearInequality>,
}

impl HRep {
    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &LinearInequality> {
        self.inequalities.iter().filter(|i| !i.is_trivial())
    }

    pub fn contains(&self, r: &[BigRational]) -> Result<bool, Error> {
        for ineq in &self.inequalities {
            if !ineq.is_satisfied(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_f64(&self, r: &[f64], tol: f64) -> Result<bool, Error> {
        for ineq in &self.inequalities {
            if ineq.evaluate_f64(r)? > ineq.bound_f64() + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Rank over the rationals by Gaussian elimination.
pub fn rank(rows: &[RationalVector]) -> usize {
    let mut m: Vec<RationalVector> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][col].clone();
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &piv;
            for j in col..ncols {
                let t = &m[r][j] * &f;
                m[i][j] -= t;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize_int(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn bit_set(z: &mut [u64], i: usize) {
    z[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

/// Extreme rays of the pointed cone `{y : A y >= 0}`. Rows are processed in
/// input order; the first linearly independent rows seed the cone.
pub fn extreme_rays(a: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, Error> {
    let m = a.len();
    let d = a.first().map_or(0, |r| r.len());
    if d == 0 {
        return Err(Error::Degenerate("empty constraint system".into()));
    }
    let words = m.div_ceil(64).max(1);
    // greedy independent basis
    let mut basis: Vec<usize> = Vec::new();
    let mut echelon: Vec<RationalVector> = Vec::new();
    for (i, row) in a.iter().enumerate() {
        let mut cand: Vec<RationalVector> = echelon.clone();
        cand.push(row.iter().map(|x| BigRational::from_integer(x.clone())).collect());
        if rank(&cand) > echelon.len() {
            echelon = cand;
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return Err(Error::Degenerate(format!("constraint rank {} < {d}: cone is not pointed", basis.len())));
    }
    // inverse of the basis matrix: its columns are the initial rays
    let mut aug: Vec<Vec<BigRational>> = basis
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut row: Vec<BigRational> = a[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..d).map(|j| if j == k { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..d {
        let p = (col..d).find(|&i| !aug[i][col].is_zero()).expect("basis is invertible");
        aug.swap(col, p);
        let piv = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x /= &piv;
        }
        for i in 0..d {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..2 * d {
                    let t = &aug[col][j] * &f;
                    aug[i][j] -= t;
                }
            }
        }
    }
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for k in 0..d {
        let col: Vec<BigRational> = (0..d).map(|i| aug[i][d + k].clone()).collect();
        let mut lcm = BigInt::one();
        for x in &col {
            lcm = lcm.lcm(x.denom());
        }
        let mut v: Vec<BigInt> = col.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        normalize_int(&mut v);
        let mut zeros = vec![0u64; words];
        for &i in &basis {
            if dot(&a[i], &v).is_zero() {
                bit_set(&mut zeros, i);
            }
        }
        rays.push(Ray { v, zeros });
    }
    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for (i, row) in a.iter().enumerate() {
        if in_basis.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    bit_set(&mut r.zeros, i);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[n].zeros).map(|(x, y)| x & y).collect();
                if (popcount(&common) as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let sp = &vals[p];
                let sn = -&vals[n];
                let mut v: Vec<BigInt> = rays[n].v.iter().zip(&rays[p].v).map(|(x, y)| sp * x + &sn * y).collect();
                normalize_int(&mut v);
                let mut zeros = common;
                bit_set(&mut zeros, i);
                next.push(Ray { v, zeros });
            }
        }
        let old = std::mem::take(&mut rays);
        for (k, mut r) in old.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                bit_set(&mut r.zeros, i);
            }
            rays.push(r);
        }
        rays.extend(next);
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}

fn to_int_rows(rows: &[RationalVector]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in row {
                lcm = lcm.lcm(x.denom());
            }
            let l = BigRational::from_integer(lcm);
            let mut v: Vec<BigInt> = row.iter().map(|x| (x * &l).to_integer()).collect();
            normalize_int(&mut v);
            v
        })
        .collect()
}

/// Minimal H-representation of a full-dimensional polytope.
pub fn facets(v: &VRep) -> Result<HRep, Error> {
    if v.is_empty() {
        return Err(Error::Degenerate("empty vertex set".into()));
    }
    let dim = v.ambient_dim;
    if v.affine_dim() != Some(dim) {
        return Err(Error::Degenerate(format!("polytope is not full-dimensional in Q^{dim}")));
    }
    let mut verts = v.vertices.clone();
    verts.sort();
    // y = (b, a): b - <a, x> >= 0 for every vertex x
    let rows: Vec<RationalVector> = verts
        .iter()
        .map(|x| std::iter::once(BigRational::one()).chain(x.iter().map(|c| -c.clone())).collect())
        .collect();
    let rays = extreme_rays(&to_int_rows(&rows))?;
    let mut out = Vec::with_capacity(rays.len());
    for y in rays {
        let bound = BigRational::from_integer(y[0].clone());
        let ineq = LinearInequality::from_big(&y[1..], &bound)?;
        if ineq.coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        out.push(ineq);
    }
    out.sort();
    out.dedup();
    Ok(HRep { inequalities: out })
}

/// Vertices of a bounded H-polytope.
pub fn vertices_from_hrep(h: &HRep, dim: usize) -> Result<VRep, Error> {
    // y = (t, x): t*b - <a, x> >= 0, t >= 0
    let mut rows: Vec<RationalVector> = vec![std::iter::once(BigRational::one())
        .chain(std::iter::repeat_n(BigRational::zero(), dim))
        .collect()];
    for ineq in &h.inequalities {
        if ineq.dim() != dim {
            return Err(Error::Dimension { expected: dim, got: ineq.dim() });
        }
        rows.push(std::iter::once(ineq.bound.clone()).chain(ineq.coeffs.iter().map(|&c| rat(-c))).collect());
    }
    let rays = extreme_rays(&to_int_rows(&rows))?;
    let mut verts = Vec::new();
    for y in rays {
        if !y[0].is_positive() {
            return Err(Error::Degenerate("H-representation is unbounded".into()));
        }
        let t = BigRational::from_integer(y[0].clone());
        verts.push(y[1..].iter().map(|x| BigRational::from_integer(x.clone()) / &t).collect());
    }
    verts.sort();
    Ok(VRep { vertices: verts, ambient_dim: dim })
}

pub fn vrep_event_polytope(g: &EventGraph) -> Result<VRep, Error> {
    let labs = graphs::enumerate_extreme_labelings(g)?;
    Ok(VRep::from_labelings(&labs, g.num_edges()))
}

/// Affine rank of the saturating vertices equals `ambient_dim - 1`.
pub fn is_facet(ineq: &LinearInequality, v: &VRep) -> Result<bool, Error> {
    let sat = saturating(ineq, v)?;
    if sat.is_empty() {
        return Ok(false);
    }
    let base = &v.vertices[sat[0]];
    let diffs: Vec<RationalVector> =
        sat[1..].iter().map(|&k| v.vertices[k].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    Ok(rank(&diffs) + 1 == v.ambient_dim)
}

/// Indices of vertices attaining the bound; errors on a violating vertex.
pub fn saturating(ineq: &LinearInequality, v: &VRep) -> Result<Vec<usize>, Error> {
    let mut sat = Vec::new();
    for (k, x) in v.vertices.iter().enumerate() {
        let val = ineq.evaluate(x)?;
        if val > ineq.bound {
            return Err(Error::Violated { vertex: k, value: val.to_string(), bound: ineq.bound.to_string() });
        }
        if val == ineq.bound {
            sat.push(k);
        }
    }
    Ok(sat)
}

/// Maximum of the functional over the vertex set.
pub fn max_over(ineq: &LinearInequality, v: &VRep) -> Result<BigRational, Error> {
    let mut best: Option<BigRational> = None;
    for x in &v.vertices {
        let val = ineq.evaluate(x)?;
        if best.as_ref().is_none_or(|b| val > *b) {
            best = Some(val);
        }
    }
    best.ok_or_else(|| Error::Degenerate("empty vertex set".into()))
}

/// One orbit of inequalities under the edge action of `Aut(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    /// Lexicographically largest coefficient vector in the orbit.
    pub representative: LinearInequality,
    /// Indices into the classified H-representation.
    pub members: Vec<usize>,
    pub trivial: bool,
}

/// Edge permutations induced by the automorphism group.
pub fn edge_automorphisms(g: &EventGraph) -> Result<Vec<Vec<usize>>, Error> {
    Ok(g.automorphisms()?
        .iter()
        .map(|p| g.edge_permutation(p).expect("automorphisms preserve edges"))
        .collect())
}

/// Canonical orbit representative.
pub fn canonical_form(ineq: &LinearInequality, edge_perms: &[Vec<usize>]) -> LinearInequality {
    let mut best = ineq.clone();
    best.label = None;
    for p in edge_perms {
        let q = ineq.permuted(p);
        if q.coeffs > best.coeffs {
            best.coeffs = q.coeffs;
        }
    }
    best
}

pub fn classify_facets(h: &HRep, g: &EventGraph) -> Result<Vec<OrbitClass>, Error> {
    let perms = edge_automorphisms(g)?;
    let mut classes: BTreeMap<(BigRational, Vec<i64>), OrbitClass> = BTreeMap::new();
    for (k, ineq) in h.inequalities.iter().enumerate() {
        if ineq.dim() != g.num_edges() {
            return Err(Error::Dimension { expected: g.num_edges(), got: ineq.dim() });
        }
        let rep = canonical_form(ineq, &perms);
        classes
            .entry((rep.bound.clone(), rep.coeffs.iter().map(|c| -c).collect()))
            .or_insert_with(|| OrbitClass { trivial: rep.is_trivial(), representative: rep, members: Vec::new() })
            .members
            .push(k);
    }
    let mut out: Vec<OrbitClass> = classes.into_values().collect();
    out.sort_by_key(|c| !c.trivial);
    Ok(out)
}

/// Vertices of `V` with the chosen coordinates fixed to `value`.
pub fn cross_section(g: &EventGraph, fixed_edges: &[(usize, usize)], value: u8) -> Result<VRep, Error> {
    if value > 1 {
        return Err(Error::Param("cross-section value must be 0 or 1".into()));
    }
    let idx = fixed_edges
        .iter()
        .map(|&(u, v)| g.edge_index(u, v).ok_or_else(|| Error::Param(format!("({u},{v}) is not an edge"))))
        .collect::<Result<Vec<_>, _>>()?;
    let labs = graphs::enumerate_extreme_labelings(g)?;
    let kept: Vec<_> = labs.into_iter().filter(|l| idx.iter().all(|&k| l.bits[k] == value)).collect();
    Ok(VRep::from_labelings(&kept, g.num_edges()))
}

/// All stable sets of `h` by backtracking, as characteristic vectors over `1..=n`.
pub fn stable_sets(h: &EventGraph) -> Vec<Vec<u8>> {
    let adj = h.adjacency();
    let mut out = Vec::new();
    let mut chi = vec![0u8; h.n()];
    stable_rec(0, &adj, &mut chi, &mut out);
    out.sort();
    out
}

fn stable_rec(v: usize, adj: &[Vec<usize>], chi: &mut [u8], out: &mut Vec<Vec<u8>>) {
    if v == chi.len() {
        out.push(chi.to_vec());
        return;
    }
    stable_rec(v + 1, adj, chi, out);
    if adj[v].iter().all(|&w| chi[w] == 0) {
        chi[v] = 1;
        stable_rec(v + 1, adj, chi, out);
        chi[v] = 0;
    }
}

pub fn stab_polytope(h: &EventGraph) -> VRep {
    let sets = stable_sets(h);
    VRep {
        vertices: sets.iter().map(|s| s.iter().map(|&b| rat(b as i64)).collect()).collect(),
        ambient_dim: h.n(),
    }
}

pub fn independence_number(h: &EventGraph) -> usize {
    stable_sets(h).iter().map(|s| s.iter().filter(|&&b| b == 1).count()).max().unwrap_or(0)
}

/// The all-zeros cross-section of the suspension over `E(H)` equals
/// `{0} x STAB(H)` after reading off the handle coordinates.
pub fn verify_stab_isomorphism(h: &EventGraph) -> Result<bool, Error> {
    let g = graphs::suspension(h)?;
    let handle = h.n() + 1;
    let cs = cross_section(&g, h.edges(), 0)?;
    let h_idx: Vec<usize> = h.edges().iter().map(|&(u, v)| g.edge_index(u, v).unwrap()).collect();
    let handle_idx: Vec<usize> = (1..=h.n()).map(|v| g.edge_index(v, handle).unwrap()).collect();
    let mut got = BTreeSet::new();
    for x in &cs.vertices {
        if h_idx.iter().any(|&k| !x[k].is_zero()) {
            return Ok(false);
        }
        got.insert(handle_idx.iter().map(|&k| x[k].clone()).collect::<RationalVector>());
    }
    let want = stab_polytope(h).vertex_set();
    Ok(got == want && cs.len() == want.len())
}

/// Event polytope with a lazily computed H-representation.
pub struct EventPolytope {
    pub graph: EventGraph,
    pub vrep: VRep,
    hrep: OnceLock<HRep>,
}

impl EventPolytope {
    pub fn new(g: &EventGraph) -> Result<Self, Error> {
        Ok(Self { graph: g.clone(), vrep: vrep_event_polytope(g)?, hrep: OnceLock::new() })
    }

    pub fn hrep(&self) -> Result<&HRep, Error> {
        if let Some(h) = self.hrep.get() {
            return Ok(h);
        }
        let h = facets(&self.vrep)?;
        Ok(self.hrep.get_or_init(|| h))
    }

    pub fn contains(&self, r: &[BigRational]) -> Result<bool, Error> {
        self.hrep()?.contains(r)
    }

    /// Float membership with slack `tol` on every facet.
    pub fn contains_f64(&self, r: &[f64], tol: f64) -> Result<bool, Error> {
        self.hrep()?.contains_f64(r, tol)
    }
}

/// Exact membership `r ∈ c(G)`.
pub fn membership(r: &[BigRational], g: &EventGraph) -> Result<bool, Error> {
    if r.len() != g.num_edges() {
        return Err(Error::Dimension { expected: g.num_edges(), got: r.len() });
    }
    EventPolytope::new(g)?.contains(r)
}

/// Named inequality families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    Cn(usize),
    Hn(usize),
    Hnm(usize, usize),
    KcbsW6,
    KappaK7,
    K5Class(usize),
    K33Class(usize),
}

impl FamilyTag {
    /// Parses `cn:5`, `hn:4`, `hnm:5,2`, `kcbs_w6`, `kappa_k7`, `k5_class:3`, `k33_class:1`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::Param(format!("unknown inequality tag '{s}'"));
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            vec![]
        } else {
            args.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        let one = || nums.first().copied().ok_or_else(bad);
        Ok(match name.trim() {
            "cn" => Self::Cn(one()?),
            "hn" => Self::Hn(one()?),
            "hnm" => Self::Hnm(one()?, nums.get(1).copied().ok_or_else(bad)?),
            "kcbs_w6" | "kcbs" => Self::KcbsW6,
            "kappa_k7" | "kappa" => Self::KappaK7,
            "k5_class" => Self::K5Class(one()?),
            "k33_class" => Self::K33Class(one()?),
            _ => return Err(bad()),
        })
    }

    pub fn graph(&self) -> Result<EventGraph, Error> {
        match *self {
            Self::Cn(n) => graphs::cycle(n),
            Self::Hn(n) | Self::Hnm(n, _) => graphs::complete(n),
            Self::KcbsW6 => graphs::wheel(6),
            Self::KappaK7 => graphs::complete(7),
            Self::K5Class(_) => graphs::complete(5),
            Self::K33Class(_) => graphs::complete_bipartite(3, 3),
        }
    }

    pub fn graph_code(&self) -> String {
        match *self {
            Self::Cn(n) => format!("C{n}"),
            Self::Hn(n) | Self::Hnm(n, _) => format!("K{n}"),
            Self::KcbsW6 => "W6".into(),
            Self::KappaK7 => "K7".into(),
            Self::K5Class(_) => "K5".into(),
            Self::K33Class(_) => "K3,3".into(),
        }
    }
}

fn from_terms(g: &EventGraph, terms: &[(usize, usize, i64)], bound: i64, label: &str) -> Result<LinearInequality, Error> {
    let mut c = vec![0i64; g.num_edges()];
    for &(u, v, w) in terms {
        let k = g.edge_index(u, v).ok_or_else(|| Error::Param(format!("({u},{v}) not an edge")))?;
        c[k] += w;
    }
    Ok(LinearInequality::new(c, rat(bound)).with_label(label))
}

/// Cycle inequality on `C_n` with `-1` on `negated` and `+1` elsewhere, bound `n-2`.
pub fn cycle_inequality(n: usize, negated: (usize, usize)) -> Result<(EventGraph, LinearInequality), Error> {
    let g = graphs::cycle(n)?;
    let k = g.edge_index(negated.0, negated.1).ok_or_else(|| Error::Param("negated edge not in cycle".into()))?;
    let mut c = vec![1i64; g.num_edges()];
    c[k] = -1;
    let ineq = LinearInequality::new(c, rat(n as i64 - 2)).with_label(format!("c{n}"));
    Ok((g, ineq))
}

/// `m * (edges at vertex 1) - (other edges) <= m(m+1)/2` on `K_n`.
fn hnm(n: usize, m: usize) -> Result<LinearInequality, Error> {
    let g = graphs::complete(n)?;
    let c = g.edges().iter().map(|&(u, _)| if u == 1 { m as i64 } else { -1 }).collect();
    let label = if m == 1 { format!("h{n}") } else { format!("h{n}^({m})") };
    Ok(LinearInequality::new(c, rat((m * (m + 1) / 2) as i64)).with_label(label))
}

pub fn inequality_family(tag: &FamilyTag) -> Result<(EventGraph, LinearInequality), Error> {
    let g = tag.graph()?;
    let ineq = match *tag {
        FamilyTag::Cn(n) => cycle_inequality(n, (1, 2))?.1,
        FamilyTag::Hn(n) => {
            if n < 3 {
                return Err(Error::Param("h_n needs n >= 3".into()));
            }
            hnm(n, 1)?
        }
        FamilyTag::Hnm(n, m) => {
            if m == 0 || n < 3 || m + 2 > n {
                return Err(Error::Param(format!("h_n^(m) needs 1 <= m <= n-2, got n={n}, m={m}")));
            }
            hnm(n, m)?
        }
        FamilyTag::KcbsW6 => {
            let mut t: Vec<(usize, usize, i64)> = vec![(1, 2, -1), (2, 3, -1), (3, 4, -1), (4, 5, -1), (1, 5, -1)];
            t.extend((1..=5).map(|i| (i, 6, 1)));
            from_terms(&g, &t, 2, "kcbs_w6")?
        }
        FamilyTag::KappaK7 => from_terms(
            &g,
            &[
                (1, 2, -2),
                (1, 4, 1),
                (1, 6, 1),
                (2, 3, -2),
                (2, 7, 2),
                (3, 4, 2),
                (3, 5, -2),
                (3, 6, -2),
                (3, 7, 2),
                (4, 5, 1),
                (4, 6, 1),
                (4, 7, 1),
                (5, 7, 1),
            ],
            6,
            "kappa_k7",
        )?,
        FamilyTag::K5Class(i) => k5_class(&g, i)?,
        FamilyTag::K33Class(i) => k33_class(&g, i)?,
    };
    Ok((g, ineq))
}

fn k5_class(g: &EventGraph, i: usize) -> Result<LinearInequality, Error> {
    let (terms, bound): (Vec<(usize, usize, i64)>, i64) = match i {
        1 => (vec![(1, 2, -1), (1, 5, 1), (2, 5, 1)], 1),
        2 => (vec![(1, 5, 1), (2, 5, 1), (3, 5, 1), (1, 2, -1), (1, 3, -1), (2, 3, -1)], 1),
        3 => (
            vec![
                (1, 2, 1),
                (1, 3, 1),
                (1, 4, 1),
                (1, 5, 1),
                (2, 3, -1),
                (2, 4, -1),
                (2, 5, -1),
                (3, 4, -1),
                (3, 5, -1),
                (4, 5, -1),
            ],
            1,
        ),
        4 => (
            vec![
                (1, 2, 1),
                (1, 4, 1),
                (1, 5, 1),
                (2, 3, 1),
                (3, 4, 1),
                (3, 5, 1),
                (1, 3, -1),
                (2, 4, -1),
                (2, 5, -1),
                (4, 5, -1),
            ],
            2,
        ),
        5 => (
            vec![
                (1, 2, 1),
                (1, 5, 1),
                (2, 3, 1),
                (3, 4, 1),
                (4, 5, 1),
                (1, 3, -1),
                (1, 4, -1),
                (2, 4, -1),
                (2, 5, -1),
                (3, 5, -1),
            ],
            2,
        ),
        6 => (
            vec![
                (1, 2, 2),
                (2, 3, 2),
                (2, 4, 2),
                (2, 5, 2),
                (1, 3, -1),
                (1, 4, -1),
                (1, 5, -1),
                (3, 4, -1),
                (3, 5, -1),
                (4, 5, -1),
            ],
            3,
        ),
        7 => (
            vec![(1, 3, 1), (1, 4, 1), (2, 4, 2), (3, 4, 1), (4, 5, 2), (1, 2, -2), (2, 5, -2), (3, 5, -2)],
            3,
        ),
        8 => (
            vec![(1, 2, 2), (1, 4, 2), (1, 5, 2), (2, 3, 1), (3, 5, 1), (1, 3, -2), (2, 4, -2), (2, 5, -1), (4, 5, -2)],
            3,
        ),
        9 => (
            vec![
                (1, 3, 2),
                (1, 4, 2),
                (2, 3, 2),
                (2, 4, 2),
                (3, 5, 3),
                (4, 5, 3),
                (1, 2, -2),
                (1, 5, -4),
                (2, 5, -4),
                (3, 4, -1),
            ],
            5,
        ),
        _ => return Err(Error::Param(format!("K5 class index {i} not in 1..=9"))),
    };
    from_terms(g, &terms, bound, &format!("k5_class_{i}"))
}

fn k33_class(g: &EventGraph, i: usize) -> Result<LinearInequality, Error> {
    // parts {1,2,3} and {4,5,6}
    let (terms, bound): (Vec<(usize, usize, i64)>, i64) = match i {
        1 => (vec![(1, 4, 1), (1, 5, 1), (1, 6, 1), (2, 4, 1), (2, 6, -1), (3, 4, -1), (3, 5, 1), (3, 6, -1)], 3),
        2 => (
            vec![(1, 4, 3), (1, 5, 2), (1, 6, 1), (2, 4, 2), (2, 5, -2), (2, 6, -2), (3, 4, 1), (3, 5, -2), (3, 6, 1)],
            6,
        ),
        _ => return Err(Error::Param(format!("K3,3 class index {i} not in 1..=2"))),
    };
    from_terms(g, &terms, bound, &format!("k33_class_{i}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, cycle, path, wheel};

    fn q(v: &[i64]) -> RationalVector {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn normalization() {
        let i = LinearInequality::new(vec![2, -4, 6], rat(4));
        assert_eq!(i.coeffs, vec![1, -2, 3]);
        assert_eq!(i.bound, rat(2));
        let j = LinearInequality::new(vec![1, 1], ratio(1, 2));
        assert_eq!(j.coeffs, vec![2, 2]);
        assert_eq!(j.bound, rat(1));
    }

    #[test]
    fn vreps() {
        assert_eq!(vrep_event_polytope(&cycle(3).unwrap()).unwrap().len(), 5);
        assert_eq!(vrep_event_polytope(&complete(4).unwrap()).unwrap().len(), 15);
        let k2 = vrep_event_polytope(&complete(2).unwrap()).unwrap();
        assert_eq!(k2.vertices, vec![q(&[0]), q(&[1])]);
    }

    #[test]
    fn c3_facets() {
        let h = facets(&vrep_event_polytope(&cycle(3).unwrap()).unwrap()).unwrap();
        assert_eq!(h.len(), 6);
        assert_eq!(h.inequalities.iter().filter(|i| i.is_trivial()).count(), 3);
        let (_, c3) = inequality_family(&FamilyTag::Cn(3)).unwrap();
        assert_eq!(c3.coeffs, vec![-1, 1, 1]);
        assert!(h.inequalities.iter().any(|i| i.coeffs == c3.coeffs && i.bound == c3.bound));
    }

    #[test]
    fn tree_facets_are_cube() {
        let h = facets(&vrep_event_polytope(&path(4).unwrap()).unwrap()).unwrap();
        assert_eq!(h.len(), 6);
        assert!(h.inequalities.iter().all(|i| i.is_trivial()));
    }

    #[test]
    fn degenerate_rejected() {
        let g = cycle(3).unwrap();
        let cs = cross_section(&g, &[(1, 2)], 1).unwrap();
        assert!(matches!(facets(&cs), Err(Error::Degenerate(_))));
        assert!(facets(&VRep { vertices: vec![], ambient_dim: 2 }).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let (_, c3) = inequality_family(&FamilyTag::Cn(3)).unwrap();
        assert_eq!(c3.evaluate(&[ratio(1, 2), ratio(1, 2), ratio(1, 2)]).unwrap(), ratio(1, 2));
        let (_, h4) = inequality_family(&FamilyTag::Hn(4)).unwrap();
        assert_eq!(h4.coeffs, vec![1, 1, 1, -1, -1, -1]);
        assert!(h4.evaluate(&q(&[1; 6])).unwrap().is_zero());
        assert!(c3.evaluate(&q(&[1, 1])).is_err());
        let (g4, c4) = cycle_inequality(4, (1, 2)).unwrap();
        // C4 edges (12,14,23,34); point r12=0, others 1
        let p = q(&[0, 1, 1, 1]);
        assert_eq!(c4.evaluate(&p).unwrap(), rat(3));
        let lab = graphs::DeterministicLabeling::new(vec![0, 1, 1, 1]);
        assert!(!graphs::is_extreme(&lab, &g4));
    }

    #[test]
    fn facet_tests() {
        let k5 = vrep_event_polytope(&complete(5).unwrap()).unwrap();
        let (_, h5) = inequality_family(&FamilyTag::Hn(5)).unwrap();
        assert!(is_facet(&h5, &k5).unwrap());
        let k4g = complete(4).unwrap();
        let k4 = vrep_event_polytope(&k4g).unwrap();
        let (c4g, c4) = cycle_inequality(4, (1, 4)).unwrap();
        let padded = c4.embed(&c4g, &k4g).unwrap();
        assert!(!is_facet(&padded, &k4).unwrap());
        let c3 = vrep_event_polytope(&cycle(3).unwrap()).unwrap();
        let nonneg = LinearInequality::new(vec![-1, 0, 0], rat(0));
        assert!(is_facet(&nonneg, &c3).unwrap());
        let bad = LinearInequality::new(vec![1, 1, 1], rat(2));
        assert!(matches!(is_facet(&bad, &c3), Err(Error::Violated { .. })));
    }

    #[test]
    fn classification_small() {
        let c3g = cycle(3).unwrap();
        let h = facets(&vrep_event_polytope(&c3g).unwrap()).unwrap();
        let cl = classify_facets(&h, &c3g).unwrap();
        let nontrivial: Vec<_> = cl.iter().filter(|c| !c.trivial).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].members.len(), 3);
        let k4g = complete(4).unwrap();
        let h = facets(&vrep_event_polytope(&k4g).unwrap()).unwrap();
        let cl = classify_facets(&h, &k4g).unwrap();
        let nontrivial: Vec<_> = cl.iter().filter(|c| !c.trivial).collect();
        assert_eq!(nontrivial.len(), 2);
        let sizes: BTreeSet<usize> = nontrivial.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes, BTreeSet::from([4, 12]));
    }

    #[test]
    fn round_trip() {
        for g in [cycle(4).unwrap(), complete(4).unwrap()] {
            let v = vrep_event_polytope(&g).unwrap();
            let h = facets(&v).unwrap();
            let back = vertices_from_hrep(&h, g.num_edges()).unwrap();
            assert_eq!(back.vertex_set(), v.vertex_set());
        }
    }

    #[test]
    fn cross_sections() {
        let c3 = cycle(3).unwrap();
        let cs = cross_section(&c3, &[(1, 2)], 1).unwrap();
        assert_eq!(cs.vertex_set(), BTreeSet::from([q(&[1, 0, 0]), q(&[1, 1, 1])]));
        let w6 = wheel(6).unwrap();
        let cs = cross_section(&w6, cycle(5).unwrap().edges(), 0).unwrap();
        assert_eq!(cs.len(), 11);
    }

    #[test]
    fn stab() {
        assert_eq!(stab_polytope(&cycle(5).unwrap()).len(), 11);
        assert_eq!(stab_polytope(&complete(3).unwrap()).len(), 4);
        assert_eq!(stab_polytope(&graphs::edgeless(4).unwrap()).len(), 16);
        for h in [complete(3).unwrap(), cycle(4).unwrap(), cycle(5).unwrap()] {
            assert!(verify_stab_isomorphism(&h).unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let k5 = complete(5).unwrap();
        assert!(membership(&vec![ratio(1, 2); 10], &k5).unwrap());
        assert!(!membership(&q(&[1, 0, 1]), &cycle(3).unwrap()).unwrap());
        let c4 = cycle(4).unwrap();
        let p = EventPolytope::new(&c4).unwrap();
        for v in &p.vrep.vertices {
            assert!(p.contains(v).unwrap());
        }
    }

    #[test]
    fn family_errors() {
        assert!(inequality_family(&FamilyTag::K5Class(10)).is_err());
        assert!(inequality_family(&FamilyTag::Hnm(5, 4)).is_err());
        assert!(FamilyTag::parse("zz:3").is_err());
        assert_eq!(FamilyTag::parse("hnm:5,2").unwrap(), FamilyTag::Hnm(5, 2));
        let (_, h52) = inequality_family(&FamilyTag::Hnm(5, 2)).unwrap();
        assert_eq!(h52.bound, rat(3));
        assert_eq!(h52.coeffs, vec![2, 2, 2, 2, -1, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn json() {
        let (g, i) = inequality_family(&FamilyTag::KcbsW6).unwrap();
        assert_eq!(g.num_edges(), 10);
        let j = i.to_json("W6");
        let s = serde_json::to_string(&j).unwrap();
        let back: InequalityJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_inequality().unwrap(), i);
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
    }
}
