//! Covering 2-complex of a coset table, its decomposition along a vertex cut
//! `D` into `A` (closure of cells meeting `D`), `B` (closure of cells meeting
//! the complement) and `C = A ∩ B`, and splitting certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::CayleyMultigraph;
use crate::coset::{CosetError, CosetTable};
use crate::presentation::Presentation;
use crate::rational::{self, Rational};

pub const DEFAULT_SCAN_LIMIT: usize = 20;

pub const PIECE_RATIO_LABEL: &str = "non-asymptotic: ratios of computed rank bounds for this single subgroup; \
     they say nothing about limits along a family";

pub fn default_epsilon() -> Rational {
    Rational::new(1, 10)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Table(#[from] CosetError),
    #[error("cut is empty")]
    EmptyCut,
    #[error("cut contains every vertex")]
    FullCut,
    #[error("cut vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("epsilon {0} outside (0, 2/sqrt(3) - 1)")]
    EpsilonOutOfRange(String),
    #[error("cut scan over {n} vertices exceeds limit {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("complex has fewer than 2 vertices")]
    TooFewVertices,
}

/// One traversal of an edge by a face boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Traversal {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub base: usize,
    pub relator: usize,
    pub walk: Vec<Traversal>,
    /// Sorted, deduplicated vertices on the boundary.
    pub vertices: Vec<usize>,
}

/// Vertices are cosets. Edge `v·k + g` runs from `v` to `v·g`. Faces are
/// indexed `r·n + v`: relator `r` traced from base coset `v`.
#[derive(Clone, Debug)]
pub struct TwoComplex {
    n: usize,
    k: usize,
    endpoints: Vec<(usize, usize)>,
    faces: Vec<Face>,
    relator_length_sum: usize,
}

pub fn build_complex(p: &Presentation, t: &CosetTable) -> Result<TwoComplex, ComplexError> {
    t.validate(p)?;
    let n = t.degree();
    let k = t.generator_count();
    let endpoints = (0..n).flat_map(|v| (0..k).map(move |g| (v, g))).map(|(v, g)| (v, t.image(v, g))).collect();
    let mut faces = Vec::with_capacity(n * p.relators().len());
    for (ri, r) in p.relators().iter().enumerate() {
        for base in 0..n {
            let mut u = base;
            let mut walk = Vec::with_capacity(r.len());
            let mut vertices = vec![base];
            for &l in r.letters() {
                let g = l.generator();
                if l.is_inverse() {
                    let v = t.preimage(u, g);
                    walk.push(Traversal { edge: v * k + g, forward: false });
                    u = v;
                } else {
                    walk.push(Traversal { edge: u * k + g, forward: true });
                    u = t.image(u, g);
                }
                vertices.push(u);
            }
            debug_assert_eq!(u, base);
            vertices.sort_unstable();
            vertices.dedup();
            faces.push(Face { base, relator: ri, walk, vertices });
        }
    }
    Ok(TwoComplex { n, k, endpoints, faces, relator_length_sum: p.relator_length_sum() })
}

impl TwoComplex {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn generator_count(&self) -> usize {
        self.k
    }

    pub fn relator_length_sum(&self) -> usize {
        self.relator_length_sum
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
}

/// Cells of a subcomplex as sorted index lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSet {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    /// Edges with both endpoints in `D`.
    pub t1: u64,
    /// `|∂D|`.
    pub t2: u64,
    /// Edges on the boundary of a face meeting both `D` and its complement.
    pub t3: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutDecomposition {
    pub cut: Vec<usize>,
    pub n: usize,
    pub generator_count: usize,
    pub relator_length_sum: usize,
    pub a: CellSet,
    pub b: CellSet,
    pub c: CellSet,
    pub type_counts: TypeCounts,
    pub a_components: usize,
    pub b_components: usize,
    pub c_components: usize,
    /// `E - V + 1` of each component of `C`, ordered by least vertex.
    pub c_component_ranks: Vec<i64>,
    /// Every edge of `C` is of type (ii) or (iii).
    pub c_edges_typed: bool,
    /// Every edge of `A` is of type (i), (ii) or (iii).
    pub a_edges_typed: bool,
}

impl CutDecomposition {
    pub fn boundary_size(&self) -> u64 {
        self.type_counts.t2
    }

    /// `E_A - V_A + 1`
    pub fn rank_a_upper(&self) -> i64 {
        self.a.edges.len() as i64 - self.a.vertices.len() as i64 + 1
    }

    /// `E_B - V_B + 1`
    pub fn rank_b_upper(&self) -> i64 {
        self.b.edges.len() as i64 - self.b.vertices.len() as i64 + 1
    }

    /// First Betti number of the graph with a vertex per component of `A`
    /// and of `B` and an edge per component of `C`.
    pub fn graph_betti(&self) -> i64 {
        self.c_components as i64 - self.a_components as i64 - self.b_components as i64 + 1
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect()
}

struct Closure {
    vertices: Vec<bool>,
    edges: Vec<bool>,
    faces: Vec<bool>,
}

/// Closure of all cells whose closed cell contains a vertex with `side`.
fn closure(k: &TwoComplex, in_d: &[bool], side: bool) -> Closure {
    let mut vertices: Vec<bool> = in_d.iter().map(|&x| x == side).collect();
    let mut edges = vec![false; k.edge_count()];
    let mut faces = vec![false; k.face_count()];
    for (e, &(s, t)) in k.endpoints.iter().enumerate() {
        if in_d[s] == side || in_d[t] == side {
            edges[e] = true;
            vertices[s] = true;
            vertices[t] = true;
        }
    }
    for (f, face) in k.faces.iter().enumerate() {
        if face.vertices.iter().any(|&v| in_d[v] == side) {
            faces[f] = true;
            for tr in &face.walk {
                edges[tr.edge] = true;
            }
            for &v in &face.vertices {
                vertices[v] = true;
            }
        }
    }
    Closure { vertices, edges, faces }
}

/// Component count of the 1-skeleton given by the masks, with the per
/// component `E - V + 1` ordered by least vertex.
fn components(k: &TwoComplex, vertices: &[bool], edges: &[bool]) -> (usize, Vec<i64>) {
    let mut uf = UnionFind::new(k.n);
    for (e, &(s, t)) in k.endpoints.iter().enumerate() {
        if edges[e] {
            uf.union(s, t);
        }
    }
    let mut slot = vec![usize::MAX; k.n];
    let mut counts: Vec<(i64, i64)> = Vec::new();
    for v in (0..k.n).filter(|&v| vertices[v]) {
        let r = uf.find(v);
        if slot[r] == usize::MAX {
            slot[r] = counts.len();
            counts.push((0, 0));
        }
        counts[slot[r]].1 += 1;
    }
    for (e, &(s, _)) in k.endpoints.iter().enumerate() {
        if edges[e] {
            let r = uf.find(s);
            counts[slot[r]].0 += 1;
        }
    }
    (counts.len(), counts.into_iter().map(|(e, v)| e - v + 1).collect())
}

fn cut_mask(n: usize, cut: &[usize]) -> Result<(Vec<usize>, Vec<bool>), ComplexError> {
    let mut in_d = vec![false; n];
    for &v in cut {
        if v >= n {
            return Err(ComplexError::VertexOutOfRange(v));
        }
        in_d[v] = true;
    }
    let sorted = indices(&in_d);
    if sorted.is_empty() {
        return Err(ComplexError::EmptyCut);
    }
    if sorted.len() == n {
        return Err(ComplexError::FullCut);
    }
    Ok((sorted, in_d))
}

pub fn decompose(k: &TwoComplex, cut: &[usize]) -> Result<CutDecomposition, ComplexError> {
    let (cut, in_d) = cut_mask(k.n, cut)?;
    let a = closure(k, &in_d, true);
    let b = closure(k, &in_d, false);
    let and = |x: &[bool], y: &[bool]| x.iter().zip(y).map(|(&p, &q)| p && q).collect::<Vec<bool>>();
    let c = Closure {
        vertices: and(&a.vertices, &b.vertices),
        edges: and(&a.edges, &b.edges),
        faces: and(&a.faces, &b.faces),
    };

    let mut type1 = vec![false; k.edge_count()];
    let mut type2 = vec![false; k.edge_count()];
    let mut type3 = vec![false; k.edge_count()];
    for (e, &(s, t)) in k.endpoints.iter().enumerate() {
        type1[e] = in_d[s] && in_d[t];
        type2[e] = in_d[s] != in_d[t];
    }
    for face in &k.faces {
        let meets_d = face.vertices.iter().any(|&v| in_d[v]);
        let meets_dc = face.vertices.iter().any(|&v| !in_d[v]);
        if meets_d && meets_dc {
            for tr in &face.walk {
                type3[tr.edge] = true;
            }
        }
    }
    let count = |m: &[bool]| m.iter().filter(|&&x| x).count() as u64;
    let typed = |mask: &[bool], allow1: bool| {
        mask.iter().enumerate().all(|(e, &inside)| !inside || (allow1 && type1[e]) || type2[e] || type3[e])
    };

    let (a_components, _) = components(k, &a.vertices, &a.edges);
    let (b_components, _) = components(k, &b.vertices, &b.edges);
    let (c_components, c_component_ranks) = components(k, &c.vertices, &c.edges);
    let cells =
        |x: &Closure| CellSet { vertices: indices(&x.vertices), edges: indices(&x.edges), faces: indices(&x.faces) };
    Ok(CutDecomposition {
        cut,
        n: k.n,
        generator_count: k.k,
        relator_length_sum: k.relator_length_sum,
        type_counts: TypeCounts { t1: count(&type1), t2: count(&type2), t3: count(&type3) },
        a_edges_typed: typed(&a.edges, true),
        c_edges_typed: typed(&c.edges, false),
        a: cells(&a),
        b: cells(&b),
        c: cells(&c),
        a_components,
        b_components,
        c_components,
        c_component_ranks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCheck {
    pub counts: TypeCounts,
    /// `|D|·d(G)`
    pub t1_bound: u64,
    /// `|∂D|·L²`
    pub t3_bound: u64,
    pub t1_ok: bool,
    pub t2_matches_boundary: bool,
    pub t3_ok: bool,
}

impl TypeCheck {
    pub fn holds(&self) -> bool {
        self.t1_ok && self.t2_matches_boundary && self.t3_ok
    }
}

pub fn count_types(cd: &CutDecomposition, g: &CayleyMultigraph) -> TypeCheck {
    let d = cd.cut.len() as u64;
    let l = cd.relator_length_sum as u64;
    let t1_bound = d * cd.generator_count as u64;
    let t3_bound = cd.type_counts.t2 * l * l;
    let inside = crate::cayley::membership(g.vertex_count(), &cd.cut);
    TypeCheck {
        counts: cd.type_counts,
        t1_bound,
        t3_bound,
        t1_ok: cd.type_counts.t1 <= t1_bound,
        t2_matches_boundary: cd.type_counts.t2 == g.boundary_of(&inside),
        t3_ok: cd.type_counts.t3 <= t3_bound,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "inconclusive")]
    Inconclusive,
    #[serde(rename = "HNN_certified")]
    HnnCertified,
    #[serde(rename = "amalgam_certified")]
    AmalgamCertified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inconclusive => "inconclusive",
            Verdict::HnnCertified => "HNN_certified",
            Verdict::AmalgamCertified => "amalgam_certified",
        }
    }

    pub fn is_certified(self) -> bool {
        self != Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// `|D|·d(G)`
    pub t1_bound: u64,
    /// `|∂D|·(L²+1)`, also the bound on each `E - V + 1` of a `C` component.
    pub t23_bound: u64,
    pub rank_a_upper: i64,
    pub rank_b_upper: i64,
    pub rank_c_upper: Vec<i64>,
    /// `|D|·(d(G) - 1 + h·(L²+1))`
    #[serde(with = "rational")]
    pub chain_value: Rational,
    /// `(n/2)·(d(G) - 1 + h·(L²+1))`
    #[serde(with = "rational")]
    pub chain_half_index: Rational,
    /// `|D^c|·(d(G) - 1) + |∂D|·(L²+1)`
    #[serde(with = "rational")]
    pub chain_value_b: Rational,
    pub rank_a_within_chain: bool,
    pub rank_b_within_chain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRatios {
    #[serde(with = "rational::option")]
    pub a_over_rank: Option<Rational>,
    #[serde(with = "rational::option")]
    pub b_over_rank: Option<Rational>,
    #[serde(with = "rational::option")]
    pub max_c_over_rank: Option<Rational>,
    #[serde(with = "rational")]
    pub bracket_lower: Rational,
    #[serde(with = "rational")]
    pub bracket_upper: Rational,
    pub a_in_bracket: Option<bool>,
    pub b_in_bracket: Option<bool>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingCertificate {
    pub verdict: Verdict,
    pub cut: Vec<usize>,
    pub n: usize,
    #[serde(with = "rational")]
    pub epsilon: Rational,
    #[serde(with = "rational")]
    pub h: Rational,
    pub rank_lower: u64,
    pub type_counts: TypeCounts,
    pub a_components: usize,
    pub b_components: usize,
    pub c_components: usize,
    pub graph_betti: i64,
    pub bounds: Bounds,
    pub piece_ratios: PieceRatios,
}

/// `0 < ε` and `3(1+ε)² < 4`.
pub fn epsilon_in_range(eps: Rational) -> bool {
    let one = Rational::from_integer(1);
    let s = (one + eps) * (one + eps) * 3;
    eps > Rational::from_integer(0) && s < Rational::from_integer(4)
}

pub fn splitting_certificate(
    cd: &CutDecomposition,
    h: Rational,
    rank_lower: u64,
    epsilon: Rational,
) -> Result<SplittingCertificate, ComplexError> {
    if !epsilon_in_range(epsilon) {
        return Err(ComplexError::EpsilonOutOfRange(rational::display(epsilon)));
    }
    let d = cd.cut.len() as i64;
    let dc = cd.n as i64 - d;
    let gens = cd.generator_count as i64;
    let l2 = (cd.relator_length_sum * cd.relator_length_sum) as i64;
    let boundary = cd.type_counts.t2 as i64;
    let per_vertex = Rational::from_integer(gens - 1) + h * (l2 + 1);
    let chain_value = per_vertex * d;
    let chain_value_b = Rational::from_integer(dc * (gens - 1) + boundary * (l2 + 1));
    let rank_a = cd.rank_a_upper();
    let rank_b = cd.rank_b_upper();

    let betti = cd.graph_betti();
    let rank = rank_lower as i64;
    let verdict = if cd.c_components >= 2 && betti >= 1 {
        Verdict::HnnCertified
    } else if cd.c_components == 1 && cd.a_components == 1 && cd.b_components == 1 && rank_a < rank && rank_b < rank {
        Verdict::AmalgamCertified
    } else {
        Verdict::Inconclusive
    };

    let ratio = |x: i64| (rank > 0).then(|| Rational::new(x, rank));
    let lo = Rational::new(1, 4);
    let hi = Rational::new(3, 4);
    let a_over = ratio(rank_a);
    let b_over = ratio(rank_b);
    let piece_ratios = PieceRatios {
        a_over_rank: a_over,
        b_over_rank: b_over,
        max_c_over_rank: cd.c_component_ranks.iter().max().and_then(|&m| ratio(m)),
        bracket_lower: lo,
        bracket_upper: hi,
        a_in_bracket: a_over.map(|r| lo <= r && r <= hi),
        b_in_bracket: b_over.map(|r| lo <= r && r <= hi),
        label: PIECE_RATIO_LABEL.to_string(),
    };

    Ok(SplittingCertificate {
        verdict,
        cut: cd.cut.clone(),
        n: cd.n,
        epsilon,
        h,
        rank_lower,
        type_counts: cd.type_counts,
        a_components: cd.a_components,
        b_components: cd.b_components,
        c_components: cd.c_components,
        graph_betti: betti,
        bounds: Bounds {
            t1_bound: (d * gens) as u64,
            t23_bound: (boundary * (l2 + 1)) as u64,
            rank_a_upper: rank_a,
            rank_b_upper: rank_b,
            rank_c_upper: cd.c_component_ranks.clone(),
            chain_value,
            chain_half_index: per_vertex * Rational::new(cd.n as i64, 2),
            chain_value_b,
            rank_a_within_chain: Rational::from_integer(rank_a - 1) <= chain_value,
            rank_b_within_chain: rank_b - 1 <= chain_value_b.to_integer(),
        },
        piece_ratios,
    })
}

/// Certificate for the cut, taking `h` as the cut's own ratio `|∂D|/|D|`.
pub fn certify_cut(
    k: &TwoComplex,
    cut: &[usize],
    rank_lower: u64,
    epsilon: Rational,
) -> Result<SplittingCertificate, ComplexError> {
    let cd = decompose(k, cut)?;
    let h = Rational::new(cd.type_counts.t2 as i64, cd.cut.len() as i64);
    splitting_certificate(&cd, h, rank_lower, epsilon)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub best: SplittingCertificate,
    pub cuts_examined: u64,
    pub hnn_cuts: u64,
    pub amalgam_cuts: u64,
}

/// Examines every cut with `1 ≤ |D| ≤ n/2`. The best certificate has the
/// strongest verdict (amalgam, then HNN, then inconclusive), then the
/// lexicographically least cut.
pub fn scan_cuts(
    k: &TwoComplex,
    rank_lower: u64,
    epsilon: Rational,
    vertex_limit: usize,
) -> Result<ScanResult, ComplexError> {
    let n = k.n;
    if n < 2 {
        return Err(ComplexError::TooFewVertices);
    }
    let limit = vertex_limit.min(crate::cayley::MAX_EXHAUSTIVE_VERTICES);
    if n > limit {
        return Err(ComplexError::TooManyVertices { n, limit });
    }
    if !epsilon_in_range(epsilon) {
        return Err(ComplexError::EpsilonOutOfRange(rational::display(epsilon)));
    }
    let total: u64 = 1 << n;
    let results: Vec<(Verdict, Vec<usize>, u64, u64, u64)> = (1..total)
        .into_par_iter()
        .filter(|m| (m.count_ones() as usize) * 2 <= n)
        .fold(
            || (Verdict::Inconclusive, Vec::new(), 0u64, 0u64, 0u64),
            |mut acc, m| {
                let cut: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                let cert = certify_cut(k, &cut, rank_lower, epsilon).expect("admissible cut");
                acc.2 += 1;
                match cert.verdict {
                    Verdict::HnnCertified => acc.3 += 1,
                    Verdict::AmalgamCertified => acc.4 += 1,
                    Verdict::Inconclusive => {}
                }
                if acc.1.is_empty() || better(cert.verdict, &cut, acc.0, &acc.1) {
                    acc.0 = cert.verdict;
                    acc.1 = cut;
                }
                acc
            },
        )
        .collect();
    let mut best: Option<(Verdict, Vec<usize>)> = None;
    let (mut examined, mut hnn, mut amalgam) = (0, 0, 0);
    for (v, cut, e, h, a) in results {
        examined += e;
        hnn += h;
        amalgam += a;
        if cut.is_empty() {
            continue;
        }
        if best.as_ref().is_none_or(|(bv, bc)| better(v, &cut, *bv, bc)) {
            best = Some((v, cut));
        }
    }
    let (_, cut) = best.expect("n >= 2 admits a cut");
    Ok(ScanResult {
        best: certify_cut(k, &cut, rank_lower, epsilon)?,
        cuts_examined: examined,
        hnn_cuts: hnn,
        amalgam_cuts: amalgam,
    })
}

fn better(v: Verdict, cut: &[usize], bv: Verdict, bc: &[usize]) -> bool {
    v > bv || (v == bv && cut < bc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_cayley;
    use crate::coset::quotient_table;
    use crate::presentation::parse_presentation;

    fn cycle(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    fn z6() -> TwoComplex {
        let p = parse_presentation("a ;").unwrap();
        build_complex(&p, &quotient_table(&p, vec![cycle(6)]).unwrap()).unwrap()
    }

    fn z2_squared() -> (TwoComplex, CayleyMultigraph) {
        let p = parse_presentation("a b ; abAB").unwrap();
        let t = quotient_table(&p, vec![vec![1, 0], vec![0, 1]]).unwrap();
        (build_complex(&p, &t).unwrap(), build_cayley(&t))
    }

    #[test]
    fn cell_counts() {
        let k = z6();
        assert_eq!((k.vertex_count(), k.edge_count(), k.face_count()), (6, 6, 0));
        let (k, _) = z2_squared();
        assert_eq!((k.vertex_count(), k.edge_count(), k.face_count()), (2, 4, 2));
        assert!(k.faces().iter().all(|f| f.walk.len() == 4));
    }

    #[test]
    fn six_cycle_splits_as_hnn() {
        let k = z6();
        let cd = decompose(&k, &[2, 0, 1]).unwrap();
        assert_eq!(cd.cut, vec![0, 1, 2]);
        assert_eq!(cd.c.vertices, vec![0, 2, 3, 5]);
        // Edge v·1 + 0 joins v to v+1: {2,3} is edge 2, {5,0} is edge 5.
        assert_eq!(cd.c.edges, vec![2, 5]);
        assert_eq!(cd.c_components, 2);
        assert_eq!(cd.type_counts, TypeCounts { t1: 2, t2: 2, t3: 0 });
        let cert = splitting_certificate(&cd, Rational::new(2, 3), 1, default_epsilon()).unwrap();
        assert_eq!(cert.verdict, Verdict::HnnCertified);
        assert_eq!(cert.graph_betti, 1);
    }

    #[test]
    fn torus_cut_is_inconclusive() {
        let (k, g) = z2_squared();
        let cd = decompose(&k, &[0]).unwrap();
        assert_eq!(cd.c_components, 1);
        assert_eq!(cd.type_counts.t2, 2);
        assert_eq!(cd.type_counts.t3, 4);
        assert_eq!(cd.a.faces, vec![0, 1]);
        let tc = count_types(&cd, &g);
        assert!(tc.holds());
        assert_eq!(tc.t3_bound, 32);
        let cert = splitting_certificate(&cd, Rational::from_integer(2), 2, default_epsilon()).unwrap();
        assert_eq!(cert.bounds.rank_a_upper, 3);
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn cut_contract() {
        let k = z6();
        assert_eq!(decompose(&k, &[]), Err(ComplexError::EmptyCut));
        assert_eq!(decompose(&k, &[0, 1, 2, 3, 4, 5]), Err(ComplexError::FullCut));
        assert_eq!(decompose(&k, &[6]), Err(ComplexError::VertexOutOfRange(6)));
    }

    #[test]
    fn epsilon_range_is_exact() {
        assert!(epsilon_in_range(Rational::new(1, 10)));
        assert!(epsilon_in_range(Rational::new(154, 1000)));
        assert!(!epsilon_in_range(Rational::new(155, 1000)));
        assert!(!epsilon_in_range(Rational::from_integer(0)));
        let cd = decompose(&z6(), &[0]).unwrap();
        assert!(splitting_certificate(&cd, Rational::from_integer(2), 1, Rational::new(1, 5)).is_err());
    }

    #[test]
    fn disconnected_sides_are_not_hnn() {
        // D = {0, 3} on the 6-cycle: A is two arcs, B the whole cycle, and
        // the two components of C attach one to each arc, forming a tree.
        let cd = decompose(&z6(), &[0, 3]).unwrap();
        assert_eq!((cd.a_components, cd.b_components, cd.c_components), (2, 1, 2));
        let cert = splitting_certificate(&cd, Rational::from_integer(1), 1, default_epsilon()).unwrap();
        assert_eq!(cert.graph_betti, 0);
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn scan_prefers_lex_least_among_equal_verdicts() {
        let r = scan_cuts(&z6(), 1, default_epsilon(), DEFAULT_SCAN_LIMIT).unwrap();
        assert_eq!(r.best.verdict, Verdict::HnnCertified);
        assert_eq!(r.best.cut, vec![0, 1]);
        assert_eq!(r.cuts_examined, 6 + 15 + 20);
    }
}
