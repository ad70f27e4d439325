//! Event graphs, their standard families, extreme deterministic labelings
//! and coloring-based dimension restrictions.
//!
//! Vertices are labelled `1..=n`. Every edge-indexed tuple in the crate uses
//! the canonical edge order: lexicographic on sorted vertex pairs.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::Error;

/// Default cap on `|V(G)|` for partition enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 12;

/// A finite simple graph with canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// JSON form `{"n": int, "edges": [[u,v],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl EventGraph {
    /// Builds a connected simple graph.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let g = Self::simple(n, edges)?;
        if !g.is_connected() {
            return Err(Error::Param("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Builds a simple graph without requiring connectivity (exclusivity
    /// graphs, disjoint unions).
    pub fn simple(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Param("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Param(format!("loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Param(format!("edge ({u},{v}) out of range 1..={n}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Param(format!("repeated edge ({u},{v})")));
            }
        }
        Ok(Self { n, edges: set.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Adjacency lists indexed by `label - 1`, holding 0-based neighbours.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
            adj[v - 1].push(u - 1);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.n
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile { n: self.n, edges: self.edges.iter().map(|&(u, v)| [u, v]).collect() }
    }

    pub fn from_file(f: &GraphFile) -> Result<Self, Error> {
        let edges: Vec<_> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(f.n, &edges)
    }

    /// Image of the canonical edge order under a vertex permutation
    /// (`perm[v-1]` is the image label of `v`): entry `k` is the index of
    /// the image of edge `k`.
    pub fn edge_permutation(&self, perm: &[usize]) -> Option<Vec<usize>> {
        self.edges.iter().map(|&(u, v)| self.edge_index(perm[u - 1], perm[v - 1])).collect()
    }

    /// All automorphisms as vertex permutations, by brute force.
    pub fn automorphisms(&self) -> Result<Vec<Vec<usize>>, Error> {
        if self.n > 8 {
            return Err(Error::Size(format!("automorphism search limited to 8 vertices, got {}", self.n)));
        }
        let adj = self.adjacency();
        let deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
        let mut out = Vec::new();
        let mut perm = vec![0usize; self.n];
        let mut used = vec![false; self.n];
        self.auto_rec(0, &deg, &mut perm, &mut used, &mut out);
        Ok(out)
    }

    fn auto_rec(&self, k: usize, deg: &[usize], perm: &mut [usize], used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if k == self.n {
            out.push(perm.iter().map(|p| p + 1).collect());
            return;
        }
        for img in 0..self.n {
            if used[img] || deg[img] != deg[k] {
                continue;
            }
            let ok = (0..k).all(|j| self.has_edge(j + 1, k + 1) == self.has_edge(perm[j] + 1, img + 1));
            if ok {
                used[img] = true;
                perm[k] = img;
                self.auto_rec(k + 1, deg, perm, used, out);
                used[img] = false;
            }
        }
    }
}

/// Named graph families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    /// Wheel on `n` vertices: suspension of `C_{n-1}`, hub labelled `n`.
    Wheel(usize),
    CompleteBipartite(usize, usize),
    /// `n` triangles sharing the edge `{1,2}`.
    TriangularBook(usize),
    Edgeless(usize),
}

pub fn complete(n: usize) -> Result<EventGraph, Error> {
    if n < 2 {
        return Err(Error::Param(format!("K_n needs n >= 2, got {n}")));
    }
    let mut e = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            e.push((u, v));
        }
    }
    EventGraph::new(n, &e)
}

pub fn cycle(n: usize) -> Result<EventGraph, Error> {
    if n < 3 {
        return Err(Error::Param(format!("C_n needs n >= 3, got {n}")));
    }
    let mut e: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    e.push((1, n));
    EventGraph::new(n, &e)
}

pub fn path(n: usize) -> Result<EventGraph, Error> {
    if n < 2 {
        return Err(Error::Param(format!("P_n needs n >= 2, got {n}")));
    }
    let e: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    EventGraph::new(n, &e)
}

pub fn wheel(n: usize) -> Result<EventGraph, Error> {
    if n < 4 {
        return Err(Error::Param(format!("W_n needs n >= 4, got {n}")));
    }
    suspension(&cycle(n - 1)?)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<EventGraph, Error> {
    if a == 0 || b == 0 {
        return Err(Error::Param("K_{a,b} needs a, b >= 1".into()));
    }
    let mut e = Vec::new();
    for u in 1..=a {
        for v in a + 1..=a + b {
            e.push((u, v));
        }
    }
    EventGraph::new(a + b, &e)
}

pub fn triangular_book(n: usize) -> Result<EventGraph, Error> {
    if n == 0 {
        return Err(Error::Param("triangular book needs n >= 1".into()));
    }
    let mut e = vec![(1, 2)];
    for k in 0..n {
        e.push((1, 3 + k));
        e.push((2, 3 + k));
    }
    EventGraph::new(n + 2, &e)
}

pub fn edgeless(n: usize) -> Result<EventGraph, Error> {
    EventGraph::simple(n, &[])
}

/// Adds a handle vertex `n+1` adjacent to every vertex.
pub fn suspension(g: &EventGraph) -> Result<EventGraph, Error> {
    let h = g.n + 1;
    let mut e = g.edges.clone();
    e.extend((1..=g.n).map(|v| (v, h)));
    EventGraph::new(h, &e)
}

/// Identifies vertex `a` of `g1` with vertex `b` of `g2`. Labels of `g1` are
/// kept; the remaining vertices of `g2` follow in order.
pub fn glue_vertex(g1: &EventGraph, a: usize, g2: &EventGraph, b: usize) -> Result<EventGraph, Error> {
    glue(g1, &[a], g2, &[b])
}

/// Identifies edge `{a1,a2}` of `g1` with edge `{b1,b2}` of `g2` (`a1~b1`, `a2~b2`).
pub fn glue_edge(g1: &EventGraph, a: (usize, usize), g2: &EventGraph, b: (usize, usize)) -> Result<EventGraph, Error> {
    if !g1.has_edge(a.0, a.1) || !g2.has_edge(b.0, b.1) {
        return Err(Error::Param("glue-edge needs an edge of each graph".into()));
    }
    glue(g1, &[a.0, a.1], g2, &[b.0, b.1])
}

fn glue(g1: &EventGraph, a: &[usize], g2: &EventGraph, b: &[usize]) -> Result<EventGraph, Error> {
    for (&x, &y) in a.iter().zip(b) {
        if x == 0 || x > g1.n || y == 0 || y > g2.n {
            return Err(Error::Param("glue vertex out of range".into()));
        }
    }
    let mut map = vec![0usize; g2.n + 1];
    let mut next = g1.n;
    for v in 1..=g2.n {
        map[v] = match b.iter().position(|&y| y == v) {
            Some(k) => a[k],
            None => {
                next += 1;
                next
            }
        };
    }
    let mut e: BTreeSet<(usize, usize)> = g1.edges.iter().copied().collect();
    for &(u, v) in &g2.edges {
        let (x, y) = (map[u], map[v]);
        e.insert((x.min(y), x.max(y)));
    }
    EventGraph::new(next, &e.into_iter().collect::<Vec<_>>())
}

/// Disjoint union; labels of `g2` are shifted by `|V(g1)|`.
pub fn disjoint_union(g1: &EventGraph, g2: &EventGraph) -> Result<EventGraph, Error> {
    let mut e = g1.edges.clone();
    e.extend(g2.edges.iter().map(|&(u, v)| (u + g1.n, v + g1.n)));
    EventGraph::simple(g1.n + g2.n, &e)
}

pub fn build_family(f: &Family) -> Result<EventGraph, Error> {
    match *f {
        Family::Complete(n) => complete(n),
        Family::Cycle(n) => cycle(n),
        Family::Path(n) => path(n),
        Family::Wheel(n) => wheel(n),
        Family::CompleteBipartite(a, b) => complete_bipartite(a, b),
        Family::TriangularBook(n) => triangular_book(n),
        Family::Edgeless(n) => edgeless(n),
    }
}

/// Parses codes such as `K5`, `C7`, `P3`, `W6`, `K3,3`, `B2`, `E4`, `suspC5`.
pub fn parse_graph_code(code: &str) -> Result<EventGraph, Error> {
    let code = code.trim();
    if let Some(rest) = code.strip_prefix("susp") {
        return suspension(&parse_graph_code(rest)?);
    }
    let bad = || Error::Param(format!("unknown graph code '{code}'"));
    let mut chars = code.chars();
    let head = chars.next().ok_or_else(bad)?;
    let tail: &str = chars.as_str();
    if head == 'K' && tail.contains(',') {
        let mut it = tail.split(',');
        let a = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let b = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if it.next().is_some() {
            return Err(bad());
        }
        return complete_bipartite(a, b);
    }
    let n: usize = tail.parse().map_err(|_| bad())?;
    let fam = match head {
        'K' => Family::Complete(n),
        'C' => Family::Cycle(n),
        'P' => Family::Path(n),
        'W' => Family::Wheel(n),
        'B' => Family::TriangularBook(n),
        'E' => Family::Edgeless(n),
        _ => return Err(bad()),
    };
    build_family(&fam)
}

/// A `{0,1}` labeling of the edges in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeterministicLabeling {
    pub bits: Vec<u8>,
}

impl DeterministicLabeling {
    pub fn new(bits: Vec<u8>) -> Self {
        Self { bits }
    }
}

/// Blocks are sorted lists of vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// From a restricted-growth string over vertices `1..=n`.
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (v, &b) in rgs.iter().enumerate() {
            blocks[b].push(v + 1);
        }
        Self { blocks }
    }

    /// Equality labeling: an edge gets 1 iff its endpoints share a block.
    pub fn labeling(&self, g: &EventGraph) -> DeterministicLabeling {
        let mut block_of = vec![0usize; g.n() + 1];
        for (b, blk) in self.blocks.iter().enumerate() {
            for &v in blk {
                block_of[v] = b;
            }
        }
        DeterministicLabeling::new(g.edges().iter().map(|&(u, v)| (block_of[u] == block_of[v]) as u8).collect())
    }
}

/// Iterator over restricted-growth strings of length `n`.
pub struct RestrictedGrowth {
    a: Vec<usize>,
    m: Vec<usize>,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        Self { a: vec![0; n], m: vec![0; n], done: n == 0 }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.a.clone();
        let n = self.a.len();
        // m[i] = max(a[0..i]) for i >= 1
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.a[i] <= self.m[i] {
                self.a[i] += 1;
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.m[j] = self.m[j - 1].max(self.a[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}

/// `ext(c(G))` with the default vertex cap.
pub fn enumerate_extreme_labelings(g: &EventGraph) -> Result<Vec<DeterministicLabeling>, Error> {
    enumerate_extreme_labelings_capped(g, DEFAULT_VERTEX_CAP)
}

/// Equality labelings of all vertex partitions, deduplicated and sorted.
pub fn enumerate_extreme_labelings_capped(g: &EventGraph, cap: usize) -> Result<Vec<DeterministicLabeling>, Error> {
    if g.n() > cap {
        return Err(Error::Size(format!("{} vertices exceeds enumeration cap {cap}", g.n())));
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    let words = g.num_edges().div_ceil(64).max(1);
    for rgs in RestrictedGrowth::new(g.n()) {
        let lab = VertexPartition::from_rgs(&rgs).labeling(g);
        let mut key = vec![0u64; words];
        for (k, &b) in lab.bits.iter().enumerate() {
            key[k / 64] |= (b as u64) << (k % 64);
        }
        if seen.insert(key) {
            out.push(lab);
        }
    }
    out.sort();
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn one_classes(g: &EventGraph, alpha: &DeterministicLabeling) -> UnionFind {
    let mut uf = UnionFind::new(g.n());
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        if alpha.bits[k] == 1 {
            uf.union(u - 1, v - 1);
        }
    }
    uf
}

/// No 0-edge joins two vertices linked by a path of 1-edges.
pub fn is_extreme(alpha: &DeterministicLabeling, g: &EventGraph) -> bool {
    let mut uf = one_classes(g, alpha);
    g.edges().iter().enumerate().all(|(k, &(u, v))| alpha.bits[k] == 1 || uf.find(u - 1) != uf.find(v - 1))
}

/// Quotient of `G` by the 1-edges; loops are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    pub classes: Vec<Vec<usize>>,
    /// Pairs of class indices, `a <= b`; `a == b` is a loop.
    pub edges: Vec<(usize, usize)>,
}

impl QuotientGraph {
    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn from_graph(g: &EventGraph) -> Self {
        Self {
            classes: (1..=g.n()).map(|v| vec![v]).collect(),
            edges: g.edges().iter().map(|&(u, v)| (u - 1, v - 1)).collect(),
        }
    }
}

pub fn quotient_graph(g: &EventGraph, alpha: &DeterministicLabeling) -> QuotientGraph {
    let mut uf = one_classes(g, alpha);
    let mut class_id = vec![usize::MAX; g.n()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        let r = uf.find(v);
        if class_id[r] == usize::MAX {
            class_id[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[class_id[r]].push(v + 1);
    }
    let mut edges = BTreeSet::new();
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        if alpha.bits[k] == 0 {
            let (a, b) = (class_id[uf.find(u - 1)], class_id[uf.find(v - 1)]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    QuotientGraph { classes, edges: edges.into_iter().collect() }
}

/// Exact chromatic number; `None` when a loop makes coloring impossible.
pub fn chromatic_number(h: &QuotientGraph) -> Option<usize> {
    if h.has_loop() {
        return None;
    }
    let n = h.classes.len();
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in &h.edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    Some(chromatic_number_adj(&adj))
}

/// Exact chromatic number of a loopless graph given as an adjacency matrix.
pub fn chromatic_number_adj(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    let lower = greedy_clique(adj, &order);
    let upper = greedy_coloring(adj, &order);
    let mut k = lower;
    while k < upper {
        let mut colour = vec![usize::MAX; n];
        if colorable(adj, &order, 0, k, 0, &mut colour) {
            return k;
        }
        k += 1;
    }
    upper
}

fn greedy_clique(adj: &[Vec<bool>], order: &[usize]) -> usize {
    let mut best = 1;
    for &s in order {
        let mut clique = vec![s];
        for &v in order {
            if v != s && clique.iter().all(|&c| adj[c][v]) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

fn greedy_coloring(adj: &[Vec<bool>], order: &[usize]) -> usize {
    let n = adj.len();
    let mut colour = vec![usize::MAX; n];
    let mut used = 0;
    for &v in order {
        let mut c = 0;
        while (0..n).any(|u| adj[v][u] && colour[u] == c) {
            c += 1;
        }
        colour[v] = c;
        used = used.max(c + 1);
    }
    used
}

fn colorable(adj: &[Vec<bool>], order: &[usize], pos: usize, k: usize, max_used: usize, colour: &mut [usize]) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    let limit = (max_used + 1).min(k);
    for c in 0..limit {
        if (0..adj.len()).any(|u| adj[v][u] && colour[u] == c) {
            continue;
        }
        colour[v] = c;
        if colorable(adj, order, pos + 1, k, max_used.max(c + 1), colour) {
            return true;
        }
        colour[v] = usize::MAX;
    }
    false
}

/// Extreme labelings whose quotient graph is `d`-colorable.
pub fn d_restricted_extremes(g: &EventGraph, d: usize) -> Result<Vec<DeterministicLabeling>, Error> {
    if d == 0 {
        return Err(Error::Param("d must be >= 1".into()));
    }
    Ok(enumerate_extreme_labelings(g)?
        .into_iter()
        .filter(|a| chromatic_number(&quotient_graph(g, a)).is_some_and(|c| c <= d))
        .collect())
}

/// Bell numbers `B(0..=n)` via the Bell triangle.
pub fn bell_numbers(n: usize) -> Vec<u128> {
    let mut out = vec![1u128];
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(b: &[u8]) -> DeterministicLabeling {
        DeterministicLabeling::new(b.to_vec())
    }

    #[test]
    fn triangle_edges() {
        let g = cycle(3).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn suspension_of_c5_is_w6() {
        let g = parse_graph_code("suspC5").unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.num_edges(), 10);
        assert_eq!(g, wheel(6).unwrap());
    }

    #[test]
    fn bowtie() {
        let t = cycle(3).unwrap();
        let g = glue_vertex(&t, 3, &t, 1).unwrap();
        assert_eq!((g.n(), g.num_edges()), (5, 6));
        let d = glue_edge(&t, (1, 2), &t, (1, 2)).unwrap();
        assert_eq!(d, triangular_book(2).unwrap());
    }

    #[test]
    fn bad_params() {
        assert!(matches!(cycle(2), Err(Error::Param(_))));
        assert!(parse_graph_code("X4").is_err());
        assert!(EventGraph::new(3, &[(1, 2)]).is_err());
        assert!(EventGraph::new(2, &[(1, 1)]).is_err());
    }

    #[test]
    fn k3_extremes() {
        let got = enumerate_extreme_labelings(&complete(3).unwrap()).unwrap();
        let want: Vec<_> = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1]].iter().map(|b| lab(b)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn bell_counts() {
        let bell = bell_numbers(10);
        assert_eq!(&bell[2..], &[2, 5, 15, 52, 203, 877, 4140, 21147, 115975]);
        for n in 2..=8 {
            assert_eq!(enumerate_extreme_labelings(&complete(n).unwrap()).unwrap().len() as u128, bell[n]);
        }
    }

    #[test]
    fn path_is_full_cube() {
        assert_eq!(enumerate_extreme_labelings(&path(3).unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn cap_enforced() {
        let g = path(13).unwrap();
        assert!(matches!(enumerate_extreme_labelings(&g), Err(Error::Size(_))));
    }

    #[test]
    fn extremality_examples() {
        let c3 = cycle(3).unwrap();
        // C3 edges (12,13,23); (1,1,0) is r12=r13=1, r23=0
        assert!(!is_extreme(&lab(&[1, 1, 0]), &c3));
        assert!(is_extreme(&lab(&[1, 1, 1]), &c3));
        assert!(!is_extreme(&lab(&[1, 1, 1, 0]), &cycle(4).unwrap()));
    }

    #[test]
    fn quotients() {
        let c4 = cycle(4).unwrap();
        let q0 = quotient_graph(&c4, &lab(&[0, 0, 0, 0]));
        assert_eq!(q0, QuotientGraph::from_graph(&c4));
        let q1 = quotient_graph(&cycle(3).unwrap(), &lab(&[1, 1, 1]));
        assert_eq!((q1.classes.len(), q1.edges.len()), (1, 0));
        // C4 edges (12,14,23,34): r12=1, r23=1 -> {1,2,3},{4}
        let q = quotient_graph(&c4, &lab(&[1, 0, 1, 0]));
        assert_eq!(q.classes, vec![vec![1, 2, 3], vec![4]]);
        assert_eq!(q.edges, vec![(0, 1)]);
    }

    #[test]
    fn chromatic_examples() {
        let q = |g: &EventGraph| QuotientGraph::from_graph(g);
        assert_eq!(chromatic_number(&q(&cycle(5).unwrap())), Some(3));
        assert_eq!(chromatic_number(&q(&complete(5).unwrap())), Some(5));
        assert_eq!(chromatic_number(&q(&cycle(6).unwrap())), Some(2));
        assert_eq!(chromatic_number(&q(&wheel(6).unwrap())), Some(4));
        let looped = QuotientGraph { classes: vec![vec![1]], edges: vec![(0, 0)] };
        assert_eq!(chromatic_number(&looped), None);
    }

    #[test]
    fn restricted_examples() {
        let k3 = complete(3).unwrap();
        let two = d_restricted_extremes(&k3, 2).unwrap();
        assert_eq!(two.len(), 4);
        assert!(!two.contains(&lab(&[0, 0, 0])));
        assert_eq!(d_restricted_extremes(&k3, 3).unwrap().len(), 5);
        let p3 = path(3).unwrap();
        assert_eq!(d_restricted_extremes(&p3, 2).unwrap().len(), 4);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(complete(4).unwrap().automorphisms().unwrap().len(), 24);
        assert_eq!(cycle(5).unwrap().automorphisms().unwrap().len(), 10);
        assert_eq!(wheel(6).unwrap().automorphisms().unwrap().len(), 10);
        assert_eq!(complete_bipartite(3, 3).unwrap().automorphisms().unwrap().len(), 72);
    }

    #[test]
    fn json_round_trip() {
        let g = wheel(6).unwrap();
        let s = serde_json::to_string(&g.to_file()).unwrap();
        let back = EventGraph::from_file(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(g, back);
    }
}
