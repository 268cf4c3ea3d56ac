//! Reidemeister–Schreier rewriting, Smith normal form and the rank interval
//! `[d(G_i^ab), Schreier count]` of a finite-index subgroup.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::coset::{CosetError, CosetTable};
use crate::presentation::{Letter, Presentation, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewritingError {
    #[error(transparent)]
    Table(#[from] CosetError),
    #[error("certified upper bound {upper} is below the abelianization lower bound {lower}")]
    InconsistentCertificate { upper: u64, lower: u64 },
    #[error("certified upper bound must be at least 1")]
    ZeroCertificate,
}

/// Presentation of a finite-index subgroup on Schreier generators.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub parent: Presentation,
    pub table: CosetTable,
    /// Non-tree `(coset, generator)` pairs, ordered by coset then generator.
    pub schreier_generators: Vec<(usize, usize)>,
    /// One rewritten relator per (parent relator, coset), in that order.
    pub relators: Vec<Word>,
}

impl SubgroupPresentation {
    /// `degree·(|S|-1)+1`
    pub fn generator_count(&self) -> usize {
        self.schreier_generators.len()
    }

    /// Text export: generators named `g0, g1, ...`; relators as
    /// space-separated tokens with `^-1` marking inverses. Relators that
    /// rewrite to the identity are omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = (0..self.generator_count()).map(|i| format!("g{i}")).collect();
        let _ = write!(out, "{} ;", names.join(" "));
        let rels: Vec<String> =
            self.relators
                .iter()
                .filter(|r| !r.is_empty())
                .map(|r| {
                    r.letters()
                        .iter()
                        .map(|l| {
                            if l.is_inverse() {
                                format!("g{}^-1", l.generator())
                            } else {
                                format!("g{}", l.generator())
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
        if !rels.is_empty() {
            let _ = write!(out, " {}", rels.join(", "));
        }
        out
    }

    /// Describes each Schreier generator as `coset:letter`.
    pub fn generator_labels(&self) -> Vec<String> {
        self.schreier_generators.iter().map(|&(c, g)| format!("{c}:{}", self.parent.generators()[g])).collect()
    }
}

/// Schreier transversal by BFS from coset 0 (generators in order, then
/// inverses). Returns a flag per `(coset, generator)` pair: true for tree
/// edges.
fn spanning_tree(t: &CosetTable) -> Vec<bool> {
    let n = t.degree();
    let k = t.generator_count();
    let mut tree = vec![false; n * k];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..k {
            let d = t.image(c, g);
            if !seen[d] {
                seen[d] = true;
                tree[c * k + g] = true;
                queue.push_back(d);
            }
        }
        for g in 0..k {
            let d = t.preimage(c, g);
            if !seen[d] {
                seen[d] = true;
                tree[d * k + g] = true;
                queue.push_back(d);
            }
        }
    }
    tree
}

pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Result<SubgroupPresentation, RewritingError> {
    t.validate(p)?;
    let n = t.degree();
    let k = t.generator_count();
    let tree = spanning_tree(t);
    let mut index = vec![usize::MAX; n * k];
    let mut schreier_generators = Vec::with_capacity(n * k + 1 - n);
    for c in 0..n {
        for g in 0..k {
            if !tree[c * k + g] {
                index[c * k + g] = schreier_generators.len();
                schreier_generators.push((c, g));
            }
        }
    }
    let mut relators = Vec::with_capacity(p.relators().len() * n);
    for r in p.relators() {
        for c in 0..n {
            let mut u = c;
            let mut letters = Vec::new();
            for &l in r.letters() {
                let g = l.generator();
                if l.is_inverse() {
                    let v = t.preimage(u, g);
                    if index[v * k + g] != usize::MAX {
                        letters.push(Letter::new(index[v * k + g], true));
                    }
                    u = v;
                } else {
                    if index[u * k + g] != usize::MAX {
                        letters.push(Letter::new(index[u * k + g], false));
                    }
                    u = t.image(u, g);
                }
            }
            debug_assert_eq!(u, c, "relators act trivially");
            relators.push(Word::from_letters(letters));
        }
    }
    Ok(SubgroupPresentation { parent: p.clone(), table: t.clone(), schreier_generators, relators })
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(l, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q · row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let d = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] -= d;
        }
    }

    /// col[dst] -= q · col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let d = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] -= d;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` nonnegative entries, each dividing the next nonzero
    /// one, zeros last.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

/// `U · M · V = diag`, with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithTransforms {
    pub form: SmithForm,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    reduce(m.clone(), None).form
}

pub fn smith_normal_form_with_transforms(m: &IntMatrix) -> SmithTransforms {
    reduce(m.clone(), Some((IntMatrix::identity(m.rows), IntMatrix::identity(m.cols))))
}

/// Elementary row/column reduction with pivot of least absolute value.
fn reduce(mut a: IntMatrix, mut transforms: Option<(IntMatrix, IntMatrix)>) -> SmithTransforms {
    let (rows, cols) = (a.rows, a.cols);
    let dim = rows.min(cols);
    let mut t = 0;
    while t < dim {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = &a[(i, j)];
                if !v.is_zero() && pivot.is_none_or(|(pi, pj)| v.abs() < a[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some((u, v)) = transforms.as_mut() {
            u.swap_rows(t, pi);
            v.swap_cols(t, pj);
        }

        let mut clean = true;
        for i in t + 1..rows {
            if a[(i, t)].is_zero() {
                continue;
            }
            let q = a[(i, t)].clone() / a[(t, t)].clone();
            a.row_sub(i, t, &q);
            if let Some((u, _)) = transforms.as_mut() {
                u.row_sub(i, t, &q);
            }
            if !a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if a[(t, j)].is_zero() {
                continue;
            }
            let q = a[(t, j)].clone() / a[(t, t)].clone();
            a.col_sub(j, t, &q);
            if let Some((_, v)) = transforms.as_mut() {
                v.col_sub(j, t, &q);
            }
            if !a[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Row t and column t are clear; enforce divisibility of the rest.
        let p = a[(t, t)].clone();
        let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
        if let Some(i) = offender {
            let minus_one = -BigInt::one();
            a.row_sub(t, i, &minus_one);
            if let Some((u, _)) = transforms.as_mut() {
                u.row_sub(t, i, &minus_one);
            }
            continue;
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some((u, _)) = transforms.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..dim).map(|i| a[(i, i)].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    let (left, right) = transforms.unwrap_or_else(|| (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)));
    SmithTransforms { form: SmithForm { diagonal, rank }, left, right }
}

fn torsion_ser<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(u) => seq.serialize_element(&u)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub betti: u64,
    /// Invariant factors greater than 1, each dividing the next.
    #[serde(serialize_with = "torsion_ser")]
    pub torsion: Vec<BigInt>,
    pub d_ab: u64,
}

impl<'de> Deserialize<'de> for AbelianInvariants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Num {
            U(u64),
            S(String),
        }
        #[derive(Deserialize)]
        struct Raw {
            betti: u64,
            torsion: Vec<Num>,
            d_ab: u64,
        }
        let raw = Raw::deserialize(d)?;
        let torsion = raw
            .torsion
            .into_iter()
            .map(|n| match n {
                Num::U(u) => Ok(BigInt::from(u)),
                Num::S(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AbelianInvariants { betti: raw.betti, torsion, d_ab: raw.d_ab })
    }
}

impl AbelianInvariants {
    /// Order of the group, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.betti == 0).then(|| self.torsion.iter().product())
    }
}

/// Exponent-sum matrix of `relators` over `generators` generators.
pub fn relation_matrix(generators: usize, relators: &[Word]) -> IntMatrix {
    let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_sums(generators)).collect();
    IntMatrix::from_rows(generators, &rows)
}

/// Abelian invariants of `⟨generators | relators⟩`.
pub fn abelian_invariants(generators: usize, relators: &[Word]) -> AbelianInvariants {
    let snf = smith_normal_form(&relation_matrix(generators, relators));
    let torsion: Vec<BigInt> = snf.diagonal.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    let betti = (generators - snf.rank) as u64;
    let d_ab = betti + torsion.len() as u64;
    AbelianInvariants { betti, torsion, d_ab }
}

pub fn abelianization(sp: &SubgroupPresentation) -> AbelianInvariants {
    abelian_invariants(sp.generator_count(), &sp.relators)
}

pub fn presentation_abelianization(p: &Presentation) -> AbelianInvariants {
    abelian_invariants(p.generator_count(), p.relators())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInterval {
    pub lower: u64,
    pub upper: u64,
}

/// `[d_ab, min(Schreier count, certified_upper)]`.
pub fn rank_interval(sp: &SubgroupPresentation, certified_upper: Option<u64>) -> Result<RankInterval, RewritingError> {
    rank_interval_from(&abelianization(sp), sp.generator_count() as u64, certified_upper)
}

pub fn rank_interval_from(
    ab: &AbelianInvariants,
    schreier_count: u64,
    certified_upper: Option<u64>,
) -> Result<RankInterval, RewritingError> {
    let lower = ab.d_ab;
    let mut upper = schreier_count;
    if let Some(c) = certified_upper {
        if c == 0 {
            return Err(RewritingError::ZeroCertificate);
        }
        if c < lower {
            return Err(RewritingError::InconsistentCertificate { upper: c, lower });
        }
        upper = upper.min(c);
    }
    Ok(RankInterval { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{quotient_table, todd_coxeter};
    use crate::presentation::parse_presentation;

    fn cycle(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn free_group_index_three() {
        let p = parse_presentation("a b ;").unwrap();
        let t = quotient_table(&p, vec![cycle(3), vec![0, 1, 2]]).unwrap();
        let sp = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(sp.generator_count(), 4);
        assert!(sp.relators.is_empty());
        let ab = abelianization(&sp);
        assert_eq!((ab.betti, ab.d_ab), (4, 4));
        assert!(ab.torsion.is_empty());
        assert_eq!(rank_interval(&sp, None).unwrap(), RankInterval { lower: 4, upper: 4 });
    }

    #[test]
    fn z_squared_index_two() {
        let p = parse_presentation("a b ; abAB").unwrap();
        let t = quotient_table(&p, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let sp = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(sp.generator_count(), 3);
        assert_eq!(sp.relators.len(), 2);
        let ab = abelianization(&sp);
        assert_eq!(ab.betti, 2);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn index_one_keeps_the_group() {
        let p = parse_presentation("a b ; aaa, bb, abab").unwrap();
        let t = todd_coxeter(&p, &[p.parse_word("a").unwrap(), p.parse_word("b").unwrap()], 100).unwrap();
        assert_eq!(t.degree(), 1);
        let sp = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(sp.generator_count(), 2);
        assert_eq!(sp.relators, p.relators().to_vec());
        assert_eq!(abelianization(&sp), presentation_abelianization(&p));

        let z2 = parse_presentation("a ; aa").unwrap();
        let ab = presentation_abelianization(&z2);
        assert_eq!((ab.betti, ab.torsion.clone(), ab.d_ab), (0, big(&[2]), 1));
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, big(&[1, 6]));
        assert_eq!(s.rank, 2);
        let s = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(s.diagonal, big(&[0, 0]));
        assert_eq!(s.rank, 0);
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, big(&[1, 1, 1]));
        assert_eq!(s.rank, 3);
        let s = smith_normal_form(&IntMatrix::zeros(0, 4));
        assert!(s.diagonal.is_empty());
        let s = smith_normal_form(&IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.diagonal, big(&[2, 6, 12]));
    }

    #[test]
    fn snf_transforms_recombine() {
        let m = IntMatrix::from_rows(3, &[vec![4, 6, -2], vec![8, 3, 5]]);
        let st = smith_normal_form_with_transforms(&m);
        let d = st.left.mul(&m).mul(&st.right);
        for i in 0..2 {
            for j in 0..3 {
                let expect = if i == j { st.form.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], expect);
            }
        }
    }

    #[test]
    fn rank_interval_certificates() {
        let p = parse_presentation("a b ;").unwrap();
        let t = quotient_table(&p, vec![cycle(3), vec![0, 1, 2]]).unwrap();
        let sp = reidemeister_schreier(&p, &t).unwrap();
        assert_eq!(rank_interval(&sp, Some(3)), Err(RewritingError::InconsistentCertificate { upper: 3, lower: 4 }));
        assert_eq!(rank_interval(&sp, Some(0)), Err(RewritingError::ZeroCertificate));
        assert_eq!(rank_interval(&sp, Some(9)).unwrap(), RankInterval { lower: 4, upper: 4 });
    }

    #[test]
    fn deficiency_two_lower_bound() {
        // (|X| - 1 - |R|) n + 1 first Betti number for deficiency-2 groups.
        let p = parse_presentation("a b c ; abAB").unwrap();
        for n in 1..=5 {
            let mut perms = vec![cycle(n), (0..n).collect(), (0..n).collect()];
            perms[2] = cycle(n);
            let t = quotient_table(&p, perms).unwrap();
            let sp = reidemeister_schreier(&p, &t).unwrap();
            let ab = abelianization(&sp);
            assert!(ab.betti as usize > n, "n={n} betti={}", ab.betti);
            let ri = rank_interval(&sp, None).unwrap();
            assert!(ri.lower as usize > n);
        }
    }

    #[test]
    fn text_export() {
        let p = parse_presentation("a b ; abAB").unwrap();
        let t = quotient_table(&p, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let sp = reidemeister_schreier(&p, &t).unwrap();
        let text = sp.to_text();
        assert!(text.starts_with("g0 g1 g2 ;"), "{text}");
        assert_eq!(sp.generator_labels().len(), 3);
    }

    #[test]
    fn abelian_json() {
        let ab = AbelianInvariants { betti: 1, torsion: big(&[2, 4]), d_ab: 3 };
        let s = serde_json::to_string(&ab).unwrap();
        assert_eq!(s, r#"{"betti":1,"torsion":[2,4],"d_ab":3}"#);
        let back: AbelianInvariants = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ab);
    }
}
