//! Coset tables: permutation actions of the generators on the right cosets
//! of a finite-index subgroup.
//!
//! Coset 0 is always the subgroup itself and generators act on the right.
//! Tables come from Todd–Coxeter enumeration, from a directly supplied finite
//! quotient, or from intersecting two existing tables.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::{format_word_with, Letter, Presentation, PresentationError, Word};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset enumeration exceeded {0} cosets; index not confirmed finite within budget")]
    BudgetExceeded(usize),
    #[error("subgroup word uses generator index {0}, which the presentation lacks")]
    MalformedWord(usize),
    #[error("no image supplied for generator '{0}'")]
    MissingImage(char),
    #[error("image supplied for unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("image of '{name}' has {found} points, expected degree {expected}")]
    DegreeMismatch { name: char, expected: usize, found: usize },
    #[error("image of '{0}' is not a permutation")]
    NotPermutation(char),
    #[error("relator {relator} acts nontrivially (moves point {point})")]
    RelatorNontrivial { relator: String, point: usize },
    #[error("action is not transitive ({reached} of {degree} points reachable from 0)")]
    NotTransitive { reached: usize, degree: usize },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("subgroup word {0} does not fix coset 0")]
    SubgroupWordMoves(String),
    #[error("tables are over different generator sets")]
    GeneratorMismatch,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// How a table was produced. Reports use this to label normality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableOrigin {
    Enumerated,
    Quotient,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: Vec<char>,
    degree: usize,
    forward: Vec<Vec<usize>>,
    backward: Vec<Vec<usize>>,
    subgroup_words: Vec<Word>,
    origin: TableOrigin,
}

impl CosetTable {
    fn from_parts(
        generators: Vec<char>,
        forward: Vec<Vec<usize>>,
        subgroup_words: Vec<Word>,
        origin: TableOrigin,
    ) -> Self {
        let degree = forward.first().map_or(0, Vec::len);
        let backward = forward.iter().map(|perm| invert(perm)).collect();
        CosetTable { generators, degree, forward, backward, subgroup_words, origin }
    }

    /// Index of the subgroup.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn subgroup_words(&self) -> &[Word] {
        &self.subgroup_words
    }

    pub fn origin(&self) -> TableOrigin {
        self.origin
    }

    /// The permutation of generator `g`.
    pub fn action(&self, g: usize) -> &[usize] {
        &self.forward[g]
    }

    /// `c · x_g`
    pub fn image(&self, c: usize, g: usize) -> usize {
        self.forward[g][c]
    }

    /// `c · x_g⁻¹`
    pub fn preimage(&self, c: usize, g: usize) -> usize {
        self.backward[g][c]
    }

    pub fn apply(&self, c: usize, l: Letter) -> usize {
        if l.is_inverse() {
            self.preimage(c, l.generator())
        } else {
            self.image(c, l.generator())
        }
    }

    /// `c · w`
    pub fn trace(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |u, &l| self.apply(u, l))
    }

    /// Checks every invariant against `p`: bijective actions, transitivity,
    /// trivial relators, and subgroup words fixing coset 0.
    pub fn validate(&self, p: &Presentation) -> Result<(), CosetError> {
        if self.generators != p.generators() {
            return Err(CosetError::GeneratorMismatch);
        }
        if self.degree == 0 {
            return Err(CosetError::ZeroDegree);
        }
        for (g, perm) in self.forward.iter().enumerate() {
            if perm.len() != self.degree {
                return Err(CosetError::DegreeMismatch {
                    name: self.generators[g],
                    expected: self.degree,
                    found: perm.len(),
                });
            }
            if !is_permutation(perm) {
                return Err(CosetError::NotPermutation(self.generators[g]));
            }
        }
        for r in p.relators() {
            for c in 0..self.degree {
                if self.trace(c, r) != c {
                    return Err(CosetError::RelatorNontrivial { relator: p.format_word(r), point: c });
                }
            }
        }
        let reached = self.orbit_size_from_zero();
        if reached != self.degree {
            return Err(CosetError::NotTransitive { reached, degree: self.degree });
        }
        for w in &self.subgroup_words {
            if self.trace(0, w) != 0 {
                return Err(CosetError::SubgroupWordMoves(p.format_word(w)));
            }
        }
        Ok(())
    }

    fn orbit_size_from_zero(&self) -> usize {
        self.bfs_order(0).len()
    }

    /// Breadth-first visiting order from `start`: for each coset, generator
    /// images in generator order, then inverse images.
    pub fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut order = Vec::with_capacity(self.degree);
        seen[start] = true;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for g in 0..self.generator_count() {
                let d = self.image(c, g);
                if !seen[d] {
                    seen[d] = true;
                    order.push(d);
                }
            }
            for g in 0..self.generator_count() {
                let d = self.preimage(c, g);
                if !seen[d] {
                    seen[d] = true;
                    order.push(d);
                }
            }
        }
        order
    }

    /// Relabels cosets by `new_label[old] = new`. Label 0 must stay 0 for the
    /// result to describe the same subgroup.
    pub fn relabel(&self, new_label: &[usize]) -> CosetTable {
        let forward = self
            .forward
            .iter()
            .map(|perm| {
                let mut out = vec![0; self.degree];
                for (c, &d) in perm.iter().enumerate() {
                    out[new_label[c]] = new_label[d];
                }
                out
            })
            .collect();
        CosetTable::from_parts(self.generators.clone(), forward, self.subgroup_words.clone(), self.origin)
    }

    /// Relabels cosets in breadth-first order from 0.
    pub fn standardized(&self) -> CosetTable {
        self.relabel(&self.bfs_labels(0))
    }

    fn bfs_labels(&self, start: usize) -> Vec<usize> {
        let order = self.bfs_order(start);
        let mut label = vec![0; self.degree];
        for (i, &c) in order.iter().enumerate() {
            label[c] = i;
        }
        label
    }

    /// Canonical signature of the subgroup (coset 0's stabilizer): the
    /// standardized actions, flattened.
    pub fn signature(&self) -> Vec<usize> {
        let label = self.bfs_labels(0);
        signature_with(&self.forward, &label, self.degree)
    }

    /// True when coset 0's stabilizer is normal, i.e. every coset has the same
    /// stabilizer. Checked by asking whether the BFS relabeling rooted at each
    /// coset reproduces the one rooted at 0.
    pub fn is_normal(&self) -> bool {
        let base = self.signature();
        (1..self.degree).all(|c| {
            let label = self.bfs_labels(c);
            signature_with(&self.forward, &label, self.degree) == base
        })
    }

    /// Shortest-in-BFS word taking coset 0 to each coset.
    pub fn transversal(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.degree];
        words[0] = Some(Word::identity());
        let order = self.bfs_order(0);
        for &c in &order {
            let base = words[c].clone().expect("visited in BFS order");
            for g in 0..self.generator_count() {
                let d = self.image(c, g);
                if words[d].is_none() {
                    words[d] = Some(base.concat(&Word::generator(g)));
                }
            }
            for g in 0..self.generator_count() {
                let d = self.preimage(c, g);
                if words[d].is_none() {
                    words[d] = Some(base.concat(&Word::generator(g).inverse()));
                }
            }
        }
        words.into_iter().map(|w| w.expect("transitive table")).collect()
    }

    /// If this table's subgroup lies inside `coarser`'s, returns the induced
    /// map on cosets (this table's cosets onto `coarser`'s). `None` when the
    /// subgroup is not contained in `coarser`'s subgroup.
    pub fn factor_map(&self, coarser: &CosetTable) -> Option<Vec<usize>> {
        if self.generators != coarser.generators {
            return None;
        }
        let mut map = vec![usize::MAX; self.degree];
        map[0] = 0;
        for c in self.bfs_order(0) {
            let fc = map[c];
            for g in 0..self.generator_count() {
                for (d, fd) in
                    [(self.image(c, g), coarser.image(fc, g)), (self.preimage(c, g), coarser.preimage(fc, g))]
                {
                    if map[d] == usize::MAX {
                        map[d] = fd;
                    } else if map[d] != fd {
                        return None;
                    }
                }
            }
        }
        Some(map)
    }

    pub fn to_json(&self) -> QuotientJson {
        QuotientJson {
            degree: self.degree,
            images: self.generators.iter().zip(&self.forward).map(|(g, perm)| (g.to_string(), perm.clone())).collect(),
            subgroup_words: Some(self.subgroup_words.iter().map(|w| format_word_with(&self.generators, w)).collect()),
        }
    }
}

fn signature_with(forward: &[Vec<usize>], label: &[usize], degree: usize) -> Vec<usize> {
    let mut sig = Vec::with_capacity(1 + forward.len() * degree);
    sig.push(degree);
    for perm in forward {
        let mut out = vec![0; degree];
        for (c, &d) in perm.iter().enumerate() {
            out[label[c]] = label[d];
        }
        sig.extend(out);
    }
    sig
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        if j < perm.len() {
            inv[j] = i;
        }
    }
    inv
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &j in perm {
        if j >= perm.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// Quotient / coset table file schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub degree: usize,
    pub images: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup_words: Option<Vec<String>>,
}

impl QuotientJson {
    /// Builds and validates a table over `p` from this record. Subgroup words,
    /// when present, are parsed and checked to fix coset 0.
    pub fn into_table(self, p: &Presentation) -> Result<CosetTable, CosetError> {
        for key in self.images.keys() {
            let mut cs = key.chars();
            let known = matches!((cs.next(), cs.next()), (Some(c), None) if p.generator_index(c).is_some());
            if !known {
                return Err(CosetError::UnknownGenerator(key.clone()));
            }
        }
        let mut perms = Vec::with_capacity(p.generator_count());
        for &g in p.generators() {
            let img = self.images.get(&g.to_string()).ok_or(CosetError::MissingImage(g))?;
            if img.len() != self.degree {
                return Err(CosetError::DegreeMismatch { name: g, expected: self.degree, found: img.len() });
            }
            perms.push(img.clone());
        }
        let mut table = quotient_table(p, perms)?;
        if let Some(words) = self.subgroup_words {
            let parsed = words.iter().map(|w| p.parse_word(w)).collect::<Result<Vec<_>, _>>()?;
            table.subgroup_words = parsed;
            table.validate(p)?;
        }
        Ok(table)
    }
}

/// Accepts an externally supplied finite quotient: one permutation per
/// generator, in generator order.
pub fn quotient_table(p: &Presentation, perms: Vec<Vec<usize>>) -> Result<CosetTable, CosetError> {
    if perms.len() != p.generator_count() {
        let missing = p.generators()[perms.len().min(p.generator_count().saturating_sub(1))];
        return Err(CosetError::MissingImage(missing));
    }
    let degree = perms[0].len();
    if degree == 0 {
        return Err(CosetError::ZeroDegree);
    }
    for (g, perm) in perms.iter().enumerate() {
        if perm.len() != degree {
            return Err(CosetError::DegreeMismatch { name: p.generators()[g], expected: degree, found: perm.len() });
        }
        if !is_permutation(perm) {
            return Err(CosetError::NotPermutation(p.generators()[g]));
        }
    }
    let table = CosetTable::from_parts(p.generators().to_vec(), perms, Vec::new(), TableOrigin::Quotient);
    table.validate(p)?;
    Ok(table)
}

/// Intersection of the two subgroups: the action on the orbit of `(0, 0)`
/// under the product action.
pub fn intersect(t1: &CosetTable, t2: &CosetTable) -> Result<CosetTable, CosetError> {
    if t1.generators != t2.generators {
        return Err(CosetError::GeneratorMismatch);
    }
    let k = t1.generator_count();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(0usize, 0usize)];
    index.insert((0, 0), 0);
    let mut head = 0;
    let mut forward_pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    while head < pairs.len() {
        let (a, b) = pairs[head];
        head += 1;
        let mut row = Vec::with_capacity(k);
        for g in 0..k {
            row.push((t1.image(a, g), t2.image(b, g)));
        }
        for g in 0..k {
            for q in [(t1.image(a, g), t2.image(b, g)), (t1.preimage(a, g), t2.preimage(b, g))] {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(q) {
                    e.insert(pairs.len());
                    pairs.push(q);
                }
            }
        }
        forward_pairs.push(row);
    }
    let n = pairs.len();
    let mut forward = vec![vec![0; n]; k];
    for (c, row) in forward_pairs.iter().enumerate() {
        for (g, q) in row.iter().enumerate() {
            forward[g][c] = index[q];
        }
    }
    // Generating words of the intersection are not known.
    Ok(CosetTable::from_parts(t1.generators.clone(), forward, Vec::new(), TableOrigin::Intersection))
}

/// Intersection-closed collection of subgroups keyed by canonical signature.
#[derive(Clone, Debug, Default)]
pub struct LatticeStore {
    members: BTreeMap<Vec<usize>, CosetTable>,
    insertion: Vec<Vec<usize>>,
    closed: bool,
}

impl LatticeStore {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn closure_flag(&self) -> bool {
        self.closed
    }

    /// Members in insertion order.
    pub fn members(&self) -> impl Iterator<Item = &CosetTable> {
        self.insertion.iter().map(|k| &self.members[k])
    }

    pub fn contains(&self, t: &CosetTable) -> bool {
        self.members.contains_key(&t.signature())
    }

    fn insert(&mut self, t: CosetTable) -> bool {
        let sig = t.signature();
        if self.members.contains_key(&sig) {
            return false;
        }
        self.insertion.push(sig.clone());
        self.members.insert(sig, t);
        true
    }
}

/// Closes `tables` under pairwise intersection, holding at most `budget`
/// members. The returned store has its closure flag set only when closure
/// finished within budget.
pub fn lattice_close(tables: &[CosetTable], budget: usize) -> Result<LatticeStore, CosetError> {
    let mut store = LatticeStore::default();
    if let Some(first) = tables.first() {
        if tables.iter().any(|t| t.generators != first.generators) {
            return Err(CosetError::GeneratorMismatch);
        }
    }
    for t in tables {
        if store.contains(t) {
            continue;
        }
        if store.len() >= budget {
            return Ok(store);
        }
        store.insert(t.clone());
    }
    let mut i = 0;
    while i < store.insertion.len() {
        for j in 0..i {
            let a = &store.members[&store.insertion[i]];
            let b = &store.members[&store.insertion[j]];
            let m = intersect(a, b)?;
            if store.contains(&m) {
                continue;
            }
            if store.len() >= budget {
                return Ok(store);
            }
            store.insert(m);
        }
        i += 1;
    }
    store.closed = true;
    Ok(store)
}

const UNDEF: usize = usize::MAX;

/// HLT coset enumerator with immediate coincidence processing.
struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    count: usize,
    max: usize,
}

impl Enumerator {
    fn new(generators: usize, max: usize) -> Self {
        let cols = 2 * generators;
        Enumerator { cols, table: vec![UNDEF; cols], parent: vec![0], count: 1, max }
    }

    fn col(l: Letter) -> usize {
        2 * l.generator() + usize::from(l.is_inverse())
    }

    fn inv(col: usize) -> usize {
        col ^ 1
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.cols + x] = d;
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), CosetError> {
        if self.count >= self.max {
            return Err(CosetError::BudgetExceeded(self.max));
        }
        let d = self.count;
        self.count += 1;
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.parent.push(d);
        self.set(c, x, d);
        self.set(d, Self::inv(x), c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, Self::inv(x), UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                let fx = self.get(f1, Self::inv(x));
                if ex != UNDEF {
                    self.merge(f1, ex, &mut queue);
                } else if fx != UNDEF {
                    self.merge(e1, fx, &mut queue);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, Self::inv(x), e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), CosetError> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j && self.get(f, w[i as usize]) != UNDEF {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, Self::inv(w[j as usize])) != UNDEF {
                b = self.get(b, Self::inv(w[j as usize]));
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            } else if i == j {
                let x = w[i as usize];
                self.set(f, x, b);
                self.set(b, Self::inv(x), f);
                return Ok(());
            } else {
                self.define(f, w[i as usize])?;
            }
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `p`. `max_cosets` bounds the number of coset
/// definitions; exceeding it is an error, never a truncation.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable, CosetError> {
    let k = p.generator_count();
    for w in subgroup {
        if let Some(m) = w.max_generator() {
            if m >= k {
                return Err(CosetError::MalformedWord(m));
            }
        }
    }
    let as_cols = |w: &Word| w.letters().iter().map(|&l| Enumerator::col(l)).collect::<Vec<_>>();
    let relators: Vec<Vec<usize>> = p.relators().iter().map(as_cols).collect();
    let subgroup_cols: Vec<Vec<usize>> = subgroup.iter().map(as_cols).collect();

    let mut en = Enumerator::new(k, max_cosets.max(1));
    for w in &subgroup_cols {
        en.scan_and_fill(0, w)?;
    }
    let mut c = 0;
    while c < en.count {
        if en.live(c) {
            for r in &relators {
                en.scan_and_fill(c, r)?;
                if !en.live(c) {
                    break;
                }
            }
            if en.live(c) {
                for x in 0..en.cols {
                    if en.get(c, x) == UNDEF {
                        en.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }

    let live: Vec<usize> = (0..en.count).filter(|&c| en.live(c)).collect();
    let mut label = vec![UNDEF; en.count];
    for (i, &c) in live.iter().enumerate() {
        label[c] = i;
    }
    let n = live.len();
    let mut forward = vec![vec![0; n]; k];
    for (i, &c) in live.iter().enumerate() {
        for (g, perm) in forward.iter_mut().enumerate() {
            let d = en.get(c, 2 * g);
            debug_assert!(d != UNDEF, "complete table");
            perm[i] = label[en.rep(d)];
        }
    }
    let table = CosetTable::from_parts(p.generators().to_vec(), forward, subgroup.to_vec(), TableOrigin::Enumerated)
        .standardized();
    table.validate(p)?;
    Ok(table)
}
