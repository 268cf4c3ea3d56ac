//! Rank-gradient series over families of finite-index subgroups, evidence
//! reports for the splitting / expansion / rank-gradient trichotomy, and
//! diagnostics along nested chains.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{
    build_cayley, cheeger_exact, cheeger_sweep, CayleyError, CheegerCertificate, DEFAULT_VERTEX_LIMIT,
};
use crate::complex::{build_complex, certify_cut, default_epsilon, ComplexError, SplittingCertificate, Verdict};
use crate::coset::CosetTable;
use crate::presentation::Presentation;
use crate::rational::{self, Rational};
use crate::rewriting::{
    abelianization, rank_interval_from, reidemeister_schreier, AbelianInvariants, RankInterval, RewritingError,
};
use crate::spectral::{
    format_decimal, spectrum_with_fiedler, tau_evidence, SpectralError, SpectrumReport, TauSummary, TauTrend,
    DEFAULT_DENSE_TOL, DEFAULT_ITERATIVE_TOL, DENSE_LIMIT,
};

/// Largest quotient group whose minimal generating set is searched for
/// directly when it is not abelian.
pub const GENERATING_SEARCH_LIMIT: usize = 200;

pub const FINITE_SCALE_NOTE: &str = "finite-scale evidence from the listed subgroups only; \
     no asymptotic conclusion is drawn, and the rank gradient shown is an upper bound from the observed family";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GradientError {
    #[error("no subgroup records supplied")]
    Empty,
    #[error("chain needs at least two subgroups")]
    ShortChain,
    #[error("chain is not nested at step {0}")]
    NotNested(usize),
    #[error(transparent)]
    Rewriting(#[from] RewritingError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub exact_cheeger_limit: usize,
    /// Defaults by solver: dense or iterative.
    pub tol: Option<f64>,
    pub epsilon: Rational,
    pub spectrum: bool,
    pub split: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            exact_cheeger_limit: DEFAULT_VERTEX_LIMIT,
            tol: None,
            epsilon: default_epsilon(),
            spectrum: true,
            split: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub label: String,
    pub index: usize,
    pub rank: RankInterval,
    pub abelian: AbelianInvariants,
    pub schreier_generators: u64,
    pub certified_upper: Option<u64>,
    pub cheeger: Option<CheegerCertificate>,
    pub spectrum: Option<SpectrumReport>,
    pub certificate: Option<SplittingCertificate>,
    #[serde(skip)]
    pub table: Option<CosetTable>,
}

impl SubgroupRecord {
    /// `(rank.lower - 1)/index`
    pub fn gradient_lower(&self) -> Rational {
        Rational::new(self.rank.lower as i64 - 1, self.index as i64)
    }

    /// `(rank.upper - 1)/index`
    pub fn gradient_upper(&self) -> Rational {
        Rational::new(self.rank.upper as i64 - 1, self.index as i64)
    }

    /// Cheeger interval: exact value when known, else the spectral bracket
    /// with the upper end lowered to any witnessed cut ratio.
    pub fn cheeger_interval(&self) -> Option<(f64, f64)> {
        match (&self.cheeger, &self.spectrum) {
            (Some(c), _) if c.exhaustive => {
                let h = rational::to_f64(c.h);
                Some((h, h))
            }
            (c, Some(s)) => {
                let upper = c.as_ref().map_or(s.cheeger_upper, |c| s.cheeger_upper.min(rational::to_f64(c.h)));
                Some((s.cheeger_lower, upper))
            }
            (Some(c), None) => Some((0.0, rational::to_f64(c.h))),
            (None, None) => None,
        }
    }
}

/// Runs rewriting, Cheeger, spectral and splitting analyses on one subgroup.
/// The splitting certificate uses the Cheeger witness cut.
pub fn analyze(
    p: &Presentation,
    label: &str,
    table: &CosetTable,
    certified_upper: Option<u64>,
    opts: &AnalysisOptions,
) -> Result<SubgroupRecord, GradientError> {
    let sp = reidemeister_schreier(p, table)?;
    let abelian = abelianization(&sp);
    let schreier_generators = sp.generator_count() as u64;
    let rank = rank_interval_from(&abelian, schreier_generators, certified_upper)?;
    let n = table.degree();
    let mut cheeger = None;
    let mut spectrum = None;
    let mut certificate = None;
    if n >= 2 {
        let g = build_cayley(table);
        let mut fiedler = None;
        if opts.spectrum {
            let tol = opts.tol.unwrap_or(if n <= DENSE_LIMIT { DEFAULT_DENSE_TOL } else { DEFAULT_ITERATIVE_TOL });
            let (report, vector) = spectrum_with_fiedler(&g, tol)?;
            spectrum = Some(report);
            fiedler = Some(vector);
        }
        if n <= opts.exact_cheeger_limit {
            cheeger = Some(cheeger_exact(&g, opts.exact_cheeger_limit)?);
        } else if let Some(f) = &fiedler {
            cheeger = Some(cheeger_sweep(&g, f)?);
        }
        if opts.split {
            if let Some(c) = &cheeger {
                let k = build_complex(p, table)?;
                certificate = Some(certify_cut(&k, &c.witness.vertices, abelian.d_ab, opts.epsilon)?);
            }
        }
    }
    Ok(SubgroupRecord {
        label: label.to_string(),
        index: n,
        rank,
        abelian,
        schreier_generators,
        certified_upper,
        cheeger,
        spectrum,
        certificate,
        table: Some(table.clone()),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradientSeries {
    pub records: Vec<SubgroupRecord>,
    #[serde(with = "rational")]
    pub gradient_lower: Rational,
    #[serde(with = "rational")]
    pub gradient_upper: Rational,
    /// Each record's subgroup lies in the previous one's.
    pub chain_flag: bool,
    /// Upper bounds lowered through the index formula along the chain.
    pub chain_tightened: bool,
    /// `(rank.upper - 1)/index` non-increasing; checked only for chains.
    pub monotone: Option<bool>,
}

/// Orders records by index (stably), tightens upper bounds along a nested
/// chain, and forms the gradient interval `[inf max(0, lower_i), inf upper_i]`.
pub fn compute_series(mut records: Vec<SubgroupRecord>) -> Result<GradientSeries, GradientError> {
    if records.is_empty() {
        return Err(GradientError::Empty);
    }
    records.sort_by_key(|r| r.index);
    let chain_flag = records.len() >= 2
        && records.windows(2).all(|w| match (&w[0].table, &w[1].table) {
            (Some(a), Some(b)) => b.factor_map(a).is_some(),
            _ => false,
        });
    let mut chain_tightened = false;
    if chain_flag {
        // d(K) - 1 <= [H:K]·(d(H) - 1) for K of finite index in H.
        for i in 1..records.len() {
            let step = (records[i].index / records[i - 1].index) as u64;
            let bound = step * (records[i - 1].rank.upper - 1) + 1;
            if bound < records[i].rank.upper {
                records[i].rank.upper = bound.max(records[i].rank.lower);
                chain_tightened = true;
            }
        }
    }
    let zero = Rational::from_integer(0);
    let gradient_lower = records.iter().map(|r| r.gradient_lower().max(zero)).min().expect("nonempty");
    let gradient_upper = records.iter().map(SubgroupRecord::gradient_upper).min().expect("nonempty");
    let monotone = chain_flag.then(|| records.windows(2).all(|w| w[1].gradient_upper() <= w[0].gradient_upper()));
    Ok(GradientSeries { records, gradient_lower, gradient_upper, chain_flag, chain_tightened, monotone })
}

/// One CSV row per record: `index, rank_lo, rank_hi, grad_lo, grad_hi,
/// h_lo, h_hi, lambda1, verdict`.
pub fn series_csv(series: &GradientSeries) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "rank_lo", "rank_hi", "grad_lo", "grad_hi", "h_lo", "h_hi", "lambda1", "verdict"])?;
    for r in &series.records {
        let (h_lo, h_hi) = r
            .cheeger_interval()
            .map_or((String::new(), String::new()), |(lo, hi)| (format_decimal(lo), format_decimal(hi)));
        w.write_record([
            r.index.to_string(),
            r.rank.lower.to_string(),
            r.rank.upper.to_string(),
            rational::display(r.gradient_lower()),
            rational::display(r.gradient_upper()),
            h_lo,
            h_hi,
            r.spectrum.as_ref().map_or(String::new(), |s| format_decimal(s.lambda1)),
            r.certificate.as_ref().map_or("", |c| c.verdict.as_str()).to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Consistent,
    NotObserved,
    Undetermined,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplittingEvidence {
    pub label: String,
    pub index: usize,
    pub verdict: Verdict,
    pub cut: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradientEvidence {
    #[serde(with = "rational")]
    pub lower: Rational,
    #[serde(with = "rational")]
    pub upper: Rational,
    /// Upper endpoints in index order.
    #[serde(with = "rational::vec")]
    pub uppers: Vec<Rational>,
    /// The last upper bound is at most half the first.
    pub decaying: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrichotomyReport {
    pub members: usize,
    pub splitting_evidence: Vec<SplittingEvidence>,
    pub tau_evidence: Option<TauSummary>,
    pub gradient_evidence: GradientEvidence,
    /// Assessment of each alternative: splittings (1), expansion (2),
    /// vanishing rank gradient (3).
    pub assessment: BTreeMap<String, Evidence>,
    pub interpretation: String,
}

fn list(items: &[usize], conj: &str) -> String {
    let names: Vec<String> = items.iter().map(|i| format!("({i})")).collect();
    match names.len() {
        0 => String::new(),
        1 => names[0].clone(),
        n => format!("{} {conj} {}", names[..n - 1].join(", "), names[n - 1]),
    }
}

fn interpretation(assessment: &[Evidence; 3]) -> String {
    let pick = |e: Evidence| -> Vec<usize> { (0..3).filter(|&i| assessment[i] == e).map(|i| i + 1).collect() };
    let consistent = pick(Evidence::Consistent);
    let not = pick(Evidence::NotObserved);
    let open = pick(Evidence::Undetermined);
    let mut parts = Vec::new();
    let mut head = if consistent.is_empty() {
        "consistent with none of (1), (2), (3)".to_string()
    } else {
        format!("consistent with {}", list(&consistent, "and"))
    };
    if !not.is_empty() && !consistent.is_empty() {
        head.push_str(&format!(", not {}", list(&not, "or")));
    }
    parts.push(head);
    if !open.is_empty() {
        parts.push(format!("{} undetermined", list(&open, "and")));
    }
    format!("{} ({FINITE_SCALE_NOTE})", parts.join("; "))
}

/// Assembles the evidence; the interpretation is phrased only as
/// consistency with each alternative.
pub fn trichotomy(series: &GradientSeries) -> Result<TrichotomyReport, GradientError> {
    let splitting_evidence: Vec<SplittingEvidence> = series
        .records
        .iter()
        .filter_map(|r| {
            let c = r.certificate.as_ref()?;
            c.verdict.is_certified().then(|| SplittingEvidence {
                label: r.label.clone(),
                index: r.index,
                verdict: c.verdict,
                cut: c.cut.clone(),
            })
        })
        .collect();

    let with_spectrum: Vec<&SubgroupRecord> = series.records.iter().filter(|r| r.spectrum.is_some()).collect();
    let tau = if with_spectrum.is_empty() {
        None
    } else {
        let reports: Vec<SpectrumReport> =
            with_spectrum.iter().map(|r| r.spectrum.clone().expect("filtered")).collect();
        let cheeger: Vec<Option<CheegerCertificate>> = with_spectrum.iter().map(|r| r.cheeger.clone()).collect();
        Some(tau_evidence(&reports, &cheeger)?)
    };

    let uppers: Vec<Rational> = series.records.iter().map(SubgroupRecord::gradient_upper).collect();
    let zero = Rational::from_integer(0);
    let decaying = uppers.len() >= 2 && uppers[uppers.len() - 1] * 2 <= uppers[0] && uppers[0] > zero;
    let gradient_evidence =
        GradientEvidence { lower: series.gradient_lower, upper: series.gradient_upper, uppers, decaying };

    let split = if splitting_evidence.is_empty() { Evidence::Undetermined } else { Evidence::Consistent };
    let expansion = match tau.as_ref().map(|t| t.trend) {
        Some(TauTrend::Decaying) => Evidence::NotObserved,
        Some(TauTrend::NoDecayObserved) => Evidence::Consistent,
        Some(TauTrend::InsufficientData) | None => Evidence::Undetermined,
    };
    let vanishing = if series.gradient_upper == zero || gradient_evidence.decaying {
        Evidence::Consistent
    } else if series.gradient_lower > zero {
        Evidence::NotObserved
    } else {
        Evidence::Undetermined
    };
    let assessment = [split, expansion, vanishing];
    Ok(TrichotomyReport {
        members: series.records.len(),
        splitting_evidence,
        tau_evidence: tau,
        gradient_evidence,
        assessment: BTreeMap::from([
            ("1_splitting".to_string(), split),
            ("2_expansion".to_string(), expansion),
            ("3_zero_rank_gradient".to_string(), vanishing),
        ]),
        interpretation: interpretation(&assessment),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientSource {
    /// Computed inside the permutation group `G/G_{i+1}`.
    PermutationGroup,
    /// Supplied with the chain; both subgroups were not known to be normal.
    Supplied,
    Unavailable,
}

/// One link of a chain; `quotient` is used when the quotient group cannot
/// be computed from the tables.
#[derive(Clone, Debug)]
pub struct ChainLink {
    pub table: CosetTable,
    pub quotient: Option<AbelianInvariants>,
}

impl ChainLink {
    pub fn new(table: CosetTable) -> Self {
        ChainLink { table, quotient: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainStep {
    /// `[G:G_i]`
    pub index: usize,
    /// `[G_i:G_{i+1}]`
    pub step: usize,
    /// `ln[G_i:G_{i+1}] / [G:G_i]`
    pub log_ratio: f64,
    pub abelian: Option<bool>,
    pub quotient: Option<AbelianInvariants>,
    /// `d(G_i/G_{i+1})`
    pub rank: Option<u64>,
    /// `d(G_i/G_{i+1}) / [G:G_i]`
    #[serde(with = "rational::option")]
    pub rank_ratio: Option<Rational>,
    pub source: QuotientSource,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
}

/// Per-step data for nested chains `G_0 ≥ G_1 ≥ ...`. The first table is
/// `G_0`; pass the index-1 table to start at the whole group.
pub fn chain_quotients(chain: &[ChainLink]) -> Result<ChainReport, GradientError> {
    if chain.len() < 2 {
        return Err(GradientError::ShortChain);
    }
    let mut steps = Vec::with_capacity(chain.len() - 1);
    for (i, w) in chain.windows(2).enumerate() {
        let (upper, lower) = (&w[0].table, &w[1].table);
        let map = lower.factor_map(upper).ok_or(GradientError::NotNested(i))?;
        let index = upper.degree();
        let step = lower.degree() / index;
        let (quotient, abelian, source) = if upper.is_normal() && lower.is_normal() {
            let perms = quotient_elements(lower, &map);
            let abelian = commutative(&perms);
            let inv = abelian.then(|| abelian_group_invariants(&perms));
            (inv, Some(abelian), QuotientSource::PermutationGroup)
        } else if let Some(q) = &w[1].quotient {
            (Some(q.clone()), None, QuotientSource::Supplied)
        } else {
            (None, None, QuotientSource::Unavailable)
        };
        let rank = match (&quotient, abelian, source) {
            (Some(q), _, _) => Some(q.d_ab),
            (None, Some(false), QuotientSource::PermutationGroup) => {
                minimal_generating_size(&quotient_elements(lower, &map))
            }
            _ => None,
        };
        steps.push(ChainStep {
            index,
            step,
            log_ratio: (step as f64).ln() / index as f64,
            abelian,
            quotient,
            rank,
            rank_ratio: rank.map(|d| Rational::new(d as i64, index as i64)),
            source,
        });
    }
    Ok(ChainReport { steps })
}

type Perm = Vec<usize>;

/// Elements of `G_i/G_{i+1}` as permutations of `G/G_{i+1}` (right
/// multiplication by coset representatives in the fiber over coset 0).
fn quotient_elements(lower: &CosetTable, map: &[usize]) -> Vec<Perm> {
    let words = lower.transversal();
    (0..lower.degree())
        .filter(|&c| map[c] == 0)
        .map(|c| (0..lower.degree()).map(|x| lower.trace(x, &words[c])).collect())
        .collect()
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

fn commutative(perms: &[Perm]) -> bool {
    perms.iter().enumerate().all(|(i, a)| perms[i + 1..].iter().all(|b| compose(a, b) == compose(b, a)))
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn perm_pow(a: &Perm, mut e: usize) -> Perm {
    let mut result: Perm = (0..a.len()).collect();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = compose(&result, &base);
        }
        base = compose(&base, &base);
        e >>= 1;
    }
    result
}

/// Invariant factors of a finite abelian group given by all its elements,
/// from the sizes of the `p^j`-torsion subgroups.
fn abelian_group_invariants(elements: &[Perm]) -> AbelianInvariants {
    let order = elements.len();
    let identity: Perm = (0..elements[0].len()).collect();
    // For each prime, the exponents of its cyclic factors (descending).
    let mut primary: Vec<(usize, Vec<u32>)> = Vec::new();
    for p in prime_factors(order) {
        let mut exps = Vec::new();
        let mut prev = 1usize;
        let mut j = 1u32;
        let mut counts_by_level = Vec::new();
        loop {
            let pj = p.pow(j);
            let count = elements.iter().filter(|x| perm_pow(x, pj) == identity).count();
            if count == prev {
                break;
            }
            // count / prev = p^{number of cyclic factors of exponent >= j}
            let mut r = 0;
            let mut q = count / prev;
            while q > 1 {
                q /= p;
                r += 1;
            }
            counts_by_level.push(r);
            prev = count;
            j += 1;
        }
        for (level, &r) in counts_by_level.iter().enumerate() {
            let next = counts_by_level.get(level + 1).copied().unwrap_or(0);
            for _ in 0..(r - next) {
                exps.push(level as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        primary.push((p, exps));
    }
    let d = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    // Invariant factor t (from the largest) multiplies the t-th largest
    // primary component of each prime.
    let mut factors: Vec<BigInt> = (0..d)
        .map(|t| primary.iter().filter_map(|(p, e)| e.get(t).map(|&k| BigInt::from(p.pow(k)))).product())
        .collect();
    factors.reverse();
    AbelianInvariants { betti: 0, torsion: factors, d_ab: d as u64 }
}

/// Smallest number of elements generating the group, when the group is at
/// most [`GENERATING_SEARCH_LIMIT`] elements and two or three suffice.
fn minimal_generating_size(elements: &[Perm]) -> Option<u64> {
    let order = elements.len();
    if order > GENERATING_SEARCH_LIMIT {
        return None;
    }
    let generated = |gens: &[&Perm]| -> usize {
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        let identity: Perm = (0..elements[0].len()).collect();
        let mut frontier = vec![identity.clone()];
        seen.insert(identity, ());
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = compose(&x, g);
                if seen.insert(y.clone(), ()).is_none() {
                    frontier.push(y);
                }
            }
        }
        seen.len()
    };
    for i in 0..order {
        for j in i + 1..order {
            if generated(&[&elements[i], &elements[j]]) == order {
                return Some(2);
            }
        }
    }
    if order <= 60 {
        for i in 0..order {
            for j in i + 1..order {
                for k in j + 1..order {
                    if generated(&[&elements[i], &elements[j], &elements[k]]) == order {
                        return Some(3);
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientGrowth {
    /// `max_i |G_i/G_{i+1}|^(1/[G:G_i])`
    pub c: f64,
    pub per_step: Vec<f64>,
}

pub fn quotient_growth(report: &ChainReport) -> Result<QuotientGrowth, GradientError> {
    if report.steps.is_empty() {
        return Err(GradientError::ShortChain);
    }
    let per_step: Vec<f64> = report.steps.iter().map(|s| (s.step as f64).powf(1.0 / s.index as f64)).collect();
    let c = per_step.iter().copied().fold(f64::MIN, f64::max);
    Ok(QuotientGrowth { c, per_step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{quotient_table, todd_coxeter};
    use crate::families::{cyclic_family, free_kernel_family};
    use crate::presentation::parse_presentation;

    fn cycle(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    fn records(fam: &crate::families::Family) -> Vec<SubgroupRecord> {
        fam.members
            .iter()
            .map(|m| {
                analyze(&fam.presentation, &m.label, &m.table, m.certified_upper, &AnalysisOptions::default()).unwrap()
            })
            .collect()
    }

    #[test]
    fn free_kernels_have_unit_gradient() {
        let fam = free_kernel_family(2, &(2..=8).collect::<Vec<_>>()).unwrap();
        let s = compute_series(records(&fam)).unwrap();
        assert_eq!((s.gradient_lower, s.gradient_upper), (Rational::from_integer(1), Rational::from_integer(1)));
        let rep = trichotomy(&s).unwrap();
        assert!(rep.interpretation.starts_with("consistent with (1), not (2) or (3)"), "{}", rep.interpretation);
        assert!(!rep.interpretation.contains("proved"));
    }

    #[test]
    fn cyclic_family_reading() {
        let fam = cyclic_family(&(3..=20).collect::<Vec<_>>()).unwrap();
        let s = compute_series(records(&fam)).unwrap();
        assert_eq!(s.gradient_upper, Rational::from_integer(0));
        let rep = trichotomy(&s).unwrap();
        assert!(rep.interpretation.starts_with("consistent with (1) and (3), not (2)"), "{}", rep.interpretation);
    }

    #[test]
    fn index_one_record() {
        let p = parse_presentation("a b ; abAB").unwrap();
        let t = todd_coxeter(&p, &[p.parse_word("a").unwrap(), p.parse_word("b").unwrap()], 10).unwrap();
        let s = compute_series(vec![analyze(&p, "G", &t, None, &AnalysisOptions::default()).unwrap()]).unwrap();
        assert_eq!((s.gradient_lower, s.gradient_upper), (Rational::from_integer(1), Rational::from_integer(1)));
        assert!(!s.chain_flag);
        assert!(compute_series(Vec::new()).is_err());
    }

    #[test]
    fn z_chain_sequences() {
        let p = parse_presentation("a ;").unwrap();
        let chain: Vec<ChainLink> =
            [1, 2, 4, 8].iter().map(|&n| ChainLink::new(quotient_table(&p, vec![cycle(n)]).unwrap())).collect();
        let r = chain_quotients(&chain).unwrap();
        let idx: Vec<usize> = r.steps.iter().map(|s| s.index * s.step).collect();
        assert_eq!(idx, vec![2, 4, 8]);
        for (s, expect) in r.steps.iter().zip([1.0, 0.5, 0.25]) {
            assert!((s.log_ratio - 2f64.ln() * expect).abs() < 1e-15);
            assert_eq!(s.abelian, Some(true));
            assert_eq!(s.rank, Some(1));
        }
        assert_eq!(quotient_growth(&r).unwrap().c, 2.0);
        let shuffled = vec![chain[0].clone(), chain[3].clone(), chain[2].clone()];
        assert_eq!(chain_quotients(&shuffled).unwrap_err(), GradientError::NotNested(1));
    }

    #[test]
    fn abelian_invariants_from_elements() {
        // Z/2 x Z/4 acting regularly on 8 points.
        let n = 8;
        let elements: Vec<Perm> = (0..n)
            .map(|e| {
                let (a, b) = (e / 4, e % 4);
                (0..n).map(|x| ((x / 4 + a) % 2) * 4 + (x % 4 + b) % 4).collect()
            })
            .collect();
        let inv = abelian_group_invariants(&elements);
        assert_eq!(inv.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(inv.d_ab, 2);
    }

    #[test]
    fn quotient_growth_examples() {
        let mk = |index, step| ChainStep {
            index,
            step,
            log_ratio: 0.0,
            abelian: None,
            quotient: None,
            rank: None,
            rank_ratio: None,
            source: QuotientSource::Unavailable,
        };
        let r = ChainReport { steps: vec![mk(1, 2), mk(2, 2), mk(4, 2)] };
        assert_eq!(quotient_growth(&r).unwrap().c, 2.0);
        let r = ChainReport { steps: vec![mk(3, 1)] };
        assert_eq!(quotient_growth(&r).unwrap().c, 1.0);
    }

    #[test]
    fn interpretation_wording() {
        use Evidence::*;
        assert!(interpretation(&[Consistent, NotObserved, Consistent])
            .starts_with("consistent with (1) and (3), not (2) ("));
        assert!(interpretation(&[Consistent, NotObserved, NotObserved])
            .starts_with("consistent with (1), not (2) or (3) ("));
        assert!(interpretation(&[Undetermined, Consistent, NotObserved])
            .starts_with("consistent with (2), not (3); (1) undetermined"));
    }
}
