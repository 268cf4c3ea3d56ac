//! Cayley (Schreier) multigraphs of finite quotients and their Cheeger
//! constants.
//!
//! The edge multiset is exactly `V × S`: one edge `c → c·s` per coset and
//! generator. An involutive generator therefore gives doubled edges and a
//! fixed point gives a loop. Loops count toward the degree `2|S|` but never
//! toward a boundary `∂D`. Boundaries count multi-edges with multiplicity.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coset::CosetTable;
use crate::rational::{self, Rational};

pub const DEFAULT_VERTEX_LIMIT: usize = 24;
/// Hard ceiling for exhaustive search regardless of the caller's limit.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 34;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("a Cheeger constant needs at least 2 vertices")]
    TooFewVertices,
    #[error("{n} vertices exceed the exhaustive limit {limit}; use the sweep bound")]
    TooManyVertices { n: usize, limit: usize },
    #[error("vector has {found} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cut of size {size} is not admissible on {n} vertices (need 0 < |D| <= n/2)")]
    InadmissibleCut { size: usize, n: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub label: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct CayleyMultigraph {
    generators: Vec<char>,
    n: usize,
    edges: Vec<Edge>,
    /// Non-loop neighbours with multiplicity, sorted by neighbour.
    adjacency: Vec<Vec<(usize, u32)>>,
    loops: Vec<u32>,
}

/// Builds `X_i` from a coset table, edges ordered by vertex then generator.
pub fn build_cayley(t: &CosetTable) -> CayleyMultigraph {
    let n = t.degree();
    let k = t.generator_count();
    let mut edges = Vec::with_capacity(n * k);
    for c in 0..n {
        for g in 0..k {
            edges.push(Edge { source: c, label: g, target: t.image(c, g) });
        }
    }
    CayleyMultigraph::from_edges(t.generators().to_vec(), n, edges)
}

impl CayleyMultigraph {
    fn from_edges(generators: Vec<char>, n: usize, edges: Vec<Edge>) -> Self {
        let mut raw: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut loops = vec![0u32; n];
        for e in &edges {
            if e.source == e.target {
                loops[e.source] += 1;
            } else {
                raw[e.source].push(e.target);
                raw[e.target].push(e.source);
            }
        }
        let adjacency = raw
            .into_iter()
            .map(|mut nb| {
                nb.sort_unstable();
                let mut out: Vec<(usize, u32)> = Vec::new();
                for u in nb {
                    match out.last_mut() {
                        Some((w, m)) if *w == u => *m += 1,
                        _ => out.push((u, 1)),
                    }
                }
                out
            })
            .collect();
        CayleyMultigraph { generators, n, edges, adjacency, loops }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// `2|S|`, counting loops twice.
    pub fn degree_constant(&self) -> usize {
        2 * self.generators.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adjacency[v]
    }

    pub fn loops_at(&self, v: usize) -> u32 {
        self.loops[v]
    }

    /// Degree of `v` with loops counted twice.
    pub fn degree_of(&self, v: usize) -> usize {
        self.adjacency[v].iter().map(|&(_, m)| m as usize).sum::<usize>() + 2 * self.loops[v] as usize
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> CayleyMultigraph {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge { source: perm[e.source], label: e.label, target: perm[e.target] })
            .collect();
        edges.sort_by_key(|e| (e.source, e.label));
        CayleyMultigraph::from_edges(self.generators.clone(), self.n, edges)
    }

    /// Number of non-loop edges with exactly one endpoint in `inside`.
    pub fn boundary_of(&self, inside: &[bool]) -> u64 {
        self.edges.iter().filter(|e| inside[e.source] != inside[e.target]).count() as u64
    }

    /// Whether the subgraph induced on `inside` (or its complement when
    /// `want == false`) is connected. Empty vertex sets count as connected.
    pub fn induced_connected(&self, inside: &[bool], want: bool) -> bool {
        let Some(start) = (0..self.n).find(|&v| inside[v] == want) else {
            return true;
        };
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adjacency[v] {
                if inside[u] == want && !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == inside.iter().filter(|&&b| b == want).count()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.n,
            degree: self.degree_constant(),
            generators: self.generators.iter().map(|c| c.to_string()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { source: e.source, label: self.generators[e.label].to_string(), target: e.target })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub source: usize,
    pub label: String,
    pub target: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: usize,
    pub degree: usize,
    pub generators: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

/// A vertex subset `D` with its boundary and ratio `|∂D|/|D|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub vertices: Vec<usize>,
    pub boundary_size: u64,
    #[serde(with = "rational")]
    pub ratio: Rational,
}

impl Cut {
    pub fn new(g: &CayleyMultigraph, vertices: &[usize]) -> Result<Self, CayleyError> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if let Some(&v) = vs.iter().find(|&&v| v >= g.n) {
            return Err(CayleyError::VertexOutOfRange(v));
        }
        if vs.is_empty() {
            return Err(CayleyError::InadmissibleCut { size: 0, n: g.n });
        }
        let inside = membership(g.n, &vs);
        let boundary_size = g.boundary_of(&inside);
        let ratio = Rational::new(boundary_size as i64, vs.len() as i64);
        Ok(Cut { vertices: vs, boundary_size, ratio })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `0 < |D| <= n/2`
    pub fn is_admissible(&self, n: usize) -> bool {
        !self.vertices.is_empty() && 2 * self.vertices.len() <= n
    }
}

pub fn membership(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; n];
    for &v in vertices {
        inside[v] = true;
    }
    inside
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutShape {
    /// `|D| > n/4`
    pub size_ok: bool,
    pub d_connected: bool,
    pub dc_connected: bool,
}

impl CutShape {
    pub fn holds(&self) -> bool {
        self.size_ok && self.d_connected && self.dc_connected
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheegerCertificate {
    #[serde(with = "rational")]
    pub h: Rational,
    pub witness: Cut,
    /// Set only when `h` is proven minimal.
    pub exhaustive: bool,
    pub shape: CutShape,
}

/// Size and connectivity diagnostics of a cut.
pub fn cut_shape(g: &CayleyMultigraph, c: &Cut) -> Result<CutShape, CayleyError> {
    if !c.is_admissible(g.n) {
        return Err(CayleyError::InadmissibleCut { size: c.len(), n: g.n });
    }
    let inside = membership(g.n, &c.vertices);
    Ok(CutShape {
        size_ok: 4 * c.len() > g.n,
        d_connected: g.induced_connected(&inside, true),
        dc_connected: g.induced_connected(&inside, false),
    })
}

/// Orders two vertex sets (as bit masks) by their sorted vertex lists.
fn lex_cmp_masks(s: u64, t: u64) -> Ordering {
    if s == t {
        return Ordering::Equal;
    }
    let i = (s ^ t).trailing_zeros();
    let above = if i >= 63 { 0 } else { !0u64 << (i + 1) };
    if s & (1 << i) != 0 {
        // s continues with i; t continues with something larger or stops.
        if t & above == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if s & above == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    boundary: u64,
    size: u64,
    mask: u64,
}

impl Candidate {
    fn cmp_key(&self, other: &Candidate) -> Ordering {
        (self.boundary as u128 * other.size as u128)
            .cmp(&(other.boundary as u128 * self.size as u128))
            .then_with(|| lex_cmp_masks(self.mask, other.mask))
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.cmp_key(&x) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Scans all masks whose top `n - low` bits equal `hi`, Gray-code order.
fn scan_block(adj: &[Vec<(usize, u32)>], n: usize, low: usize, hi: u64) -> Option<Candidate> {
    let half = (n / 2) as u64;
    let mut mask = hi << low;
    let mut size = mask.count_ones() as u64;
    let mut boundary: i64 = 0;
    for (v, nb) in adj.iter().enumerate() {
        if mask >> v & 1 == 1 {
            boundary += nb.iter().filter(|&&(u, _)| mask >> u & 1 == 0).map(|&(_, m)| m as i64).sum::<i64>();
        }
    }
    let degs: Vec<i64> = adj.iter().map(|nb| nb.iter().map(|&(_, m)| m as i64).sum()).collect();
    let mut best: Option<Candidate> = None;
    let consider = |mask: u64, size: u64, boundary: i64, best: &mut Option<Candidate>| {
        if size == 0 || size > half {
            return;
        }
        let c = Candidate { boundary: boundary as u64, size, mask };
        *best = better(*best, Some(c));
    };
    consider(mask, size, boundary, &mut best);
    for step in 1u64..(1u64 << low) {
        let v = step.trailing_zeros() as usize;
        let inner: i64 = adj[v].iter().filter(|&&(u, _)| mask >> u & 1 == 1).map(|&(_, m)| m as i64).sum();
        if mask >> v & 1 == 1 {
            boundary += 2 * inner - degs[v];
            size -= 1;
        } else {
            boundary += degs[v] - 2 * inner;
            size += 1;
        }
        mask ^= 1 << v;
        consider(mask, size, boundary, &mut best);
    }
    best
}

/// Exact Cheeger constant by exhaustive enumeration of every vertex subset.
///
/// The witness is the minimizer whose sorted vertex list is lexicographically
/// least. The subset space is split into blocks that may run on several
/// threads; the reduction is by `(ratio, lex order)` and so does not depend
/// on scheduling.
pub fn cheeger_exact(g: &CayleyMultigraph, vertex_limit: usize) -> Result<CheegerCertificate, CayleyError> {
    let n = g.n;
    if n < 2 {
        return Err(CayleyError::TooFewVertices);
    }
    let limit = vertex_limit.min(MAX_EXHAUSTIVE_VERTICES);
    if n > limit {
        return Err(CayleyError::TooManyVertices { n, limit });
    }
    let split = if n > 14 { 8.min(n - 1) } else { 0 };
    let low = n - split;
    let best = (0u64..(1u64 << split))
        .into_par_iter()
        .map(|hi| scan_block(&g.adjacency, n, low, hi))
        .reduce(|| None, better)
        .expect("n >= 2 always has an admissible subset");
    let vertices: Vec<usize> = (0..n).filter(|&v| best.mask >> v & 1 == 1).collect();
    let witness = Cut::new(g, &vertices)?;
    debug_assert_eq!(witness.boundary_size, best.boundary);
    let shape = cut_shape(g, &witness)?;
    Ok(CheegerCertificate { h: witness.ratio, witness, exhaustive: true, shape })
}

/// Sweep-cut upper bound from a vertex embedding (normally a Fiedler
/// vector). Vertices are sorted by value, ties by index; each threshold
/// splits the order into a prefix and a suffix, and the side with at most
/// `n/2` vertices is the candidate.
pub fn cheeger_sweep(g: &CayleyMultigraph, fiedler: &[f64]) -> Result<CheegerCertificate, CayleyError> {
    let n = g.n;
    if fiedler.len() != n {
        return Err(CayleyError::LengthMismatch { expected: n, found: fiedler.len() });
    }
    if n < 2 {
        return Err(CayleyError::TooFewVertices);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fiedler[a].total_cmp(&fiedler[b]).then(a.cmp(&b)));

    let mut inside = vec![false; n];
    let mut boundary: i64 = 0;
    // (boundary, size, prefix length, is_prefix)
    let mut best: Option<(u64, usize, usize, bool)> = None;
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        let inner: i64 = g.adjacency[v].iter().filter(|&&(u, _)| inside[u]).map(|&(_, m)| m as i64).sum();
        let deg: i64 = g.adjacency[v].iter().map(|&(_, m)| m as i64).sum();
        boundary += deg - 2 * inner;
        inside[v] = true;
        let len = k + 1;
        let (size, is_prefix) = if 2 * len <= n { (len, true) } else { (n - len, false) };
        let cand = (boundary as u64, size, len, is_prefix);
        best = match best {
            None => Some(cand),
            Some(cur) => {
                let ord = (cand.0 as u128 * cur.1 as u128).cmp(&(cur.0 as u128 * cand.1 as u128));
                let ord = ord.then_with(|| sweep_set(&order, cand.2, cand.3).cmp(&sweep_set(&order, cur.2, cur.3)));
                Some(if ord == Ordering::Less { cand } else { cur })
            }
        };
    }
    let (_, _, len, is_prefix) = best.expect("n >= 2");
    let witness = Cut::new(g, &sweep_set(&order, len, is_prefix))?;
    let shape = cut_shape(g, &witness)?;
    Ok(CheegerCertificate { h: witness.ratio, witness, exhaustive: false, shape })
}

fn sweep_set(order: &[usize], len: usize, prefix: bool) -> Vec<usize> {
    let mut v: Vec<usize> = if prefix { order[..len].to_vec() } else { order[len..].to_vec() };
    v.sort_unstable();
    v
}
