//! Acceptance gate: eleven checks, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rg_lab::cayley::{build_cayley, cheeger_exact, cheeger_sweep, CayleyMultigraph};
use rg_lab::complex::{build_complex, certify_cut, count_types, decompose, default_epsilon, TwoComplex, Verdict};
use rg_lab::coset::{quotient_table, todd_coxeter, CosetTable, DEFAULT_MAX_COSETS};
use rg_lab::families::{
    cyclic_family, dihedral_family, free_kernel_family, free_product_family, mapping_torus_family, preset,
    psl2p_family, sl2p_family, Family,
};
use rg_lab::gradient::{
    analyze, chain_quotients, compute_series, quotient_growth, trichotomy, AnalysisOptions, ChainLink,
};
use rg_lab::presentation::{parse_presentation, Presentation};
use rg_lab::rational::Rational;
use rg_lab::rewriting::{reidemeister_schreier, AbelianInvariants};
use rg_lab::spectral::{spectrum, spectrum_with_fiedler, DEFAULT_DENSE_TOL};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn cycle(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn rank_only() -> AnalysisOptions {
    AnalysisOptions { spectrum: false, split: false, exact_cheeger_limit: 0, ..AnalysisOptions::default() }
}

/// Action of a two-generator group on `Z/a × Z/b`, the first generator
/// shifting the first factor and the second the second.
fn product_table(p: &Presentation, a: usize, b: usize) -> CosetTable {
    let n = a * b;
    let x = (0..n).map(|v| ((v / b + 1) % a) * b + v % b).collect();
    let y = (0..n).map(|v| (v / b) * b + (v % b + 1) % b).collect();
    quotient_table(p, vec![x, y]).unwrap()
}

fn torus_table(a: usize, b: usize) -> CosetTable {
    product_table(&preset("Z2").unwrap(), a, b)
}

// ---------------------------------------------------------------------------
// Independent oracles.

/// Minimum of `|∂D|/|D|` over `1 ≤ |D| ≤ n/2` by plain enumeration, with
/// every minimizing mask.
struct BruteCheeger {
    h: Rational,
    minimizers: Vec<u32>,
}

fn edge_list(g: &CayleyMultigraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.source, e.target)).collect()
}

fn brute_cheeger(g: &CayleyMultigraph) -> BruteCheeger {
    let n = g.vertex_count();
    assert!(n <= 24);
    let edges = edge_list(g);
    let mut best: Option<(u64, u64)> = None;
    let mut minimizers = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as u64;
        if 2 * size > n as u64 {
            continue;
        }
        let boundary = edges.iter().filter(|&&(s, t)| (mask >> s ^ mask >> t) & 1 == 1).count() as u64;
        match best {
            Some((b, s)) if boundary * s > b * size => {}
            Some((b, s)) if boundary * s == b * size => minimizers.push(mask),
            _ => {
                best = Some((boundary, size));
                minimizers = vec![mask];
            }
        }
    }
    let (b, s) = best.expect("at least two vertices");
    BruteCheeger { h: Rational::new(b as i64, s as i64), minimizers }
}

fn induced_connected(n: usize, edges: &[(usize, usize)], inside: u32) -> bool {
    let members: Vec<usize> = (0..n).filter(|&v| inside >> v & 1 == 1).collect();
    let Some(&start) = members.first() else { return false };
    let mut seen = 1u32 << start;
    let mut changed = true;
    while changed {
        changed = false;
        for &(s, t) in edges {
            let (ins, int) = (inside >> s & 1 == 1, inside >> t & 1 == 1);
            if ins && int && (seen >> s & 1) != (seen >> t & 1) {
                seen |= (1 << s) | (1 << t);
                changed = true;
            }
        }
    }
    seen == inside
}

/// Rank over Q of an integer matrix.
fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// First Betti number of the subgroup, from its rewritten relators by
/// elimination over Q.
fn betti_over_q(p: &Presentation, t: &CosetTable) -> u64 {
    let sp = reidemeister_schreier(p, t).unwrap();
    let k = sp.generator_count();
    let rows: Vec<Vec<i64>> = sp.relators.iter().map(|r| r.exponent_sums(k)).collect();
    (k - rational_rank(&rows)) as u64
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Abelianization of the mapping torus of `ψ` on `F_2`, where `m` is the
/// abelianized matrix of `ψ`: `Z ⊕ coker(m - I)`, via the 2×2 Smith form.
fn torus_abelianization(m: [[i64; 2]; 2]) -> (u64, Vec<i64>) {
    let a = [[m[0][0] - 1, m[0][1]], [m[1][0], m[1][1] - 1]];
    let d1 = gcd(gcd(a[0][0], a[0][1]), gcd(a[1][0], a[1][1]));
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs();
    let diagonal = match (d1, det) {
        (0, _) => vec![0, 0],
        (d, 0) => vec![d, 0],
        (d, det) => vec![d, det / d],
    };
    let betti = 1 + diagonal.iter().filter(|&&d| d == 0).count() as u64;
    let torsion = diagonal.into_iter().filter(|&d| d > 1).collect();
    (betti, torsion)
}

fn invariants(ab: &AbelianInvariants) -> (u64, Vec<i64>) {
    (ab.betti, ab.torsion.iter().map(|t| i64::try_from(t).unwrap()).collect())
}

// ---------------------------------------------------------------------------
// Corpus of Cayley graphs of finite groups with at most 20 vertices.

struct Sample {
    name: String,
    graph: CayleyMultigraph,
    exact: BruteCheeger,
}

fn corpus() -> &'static [Sample] {
    static CORPUS: OnceLock<Vec<Sample>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut tables: Vec<(String, CosetTable)> = Vec::new();
        for m in cyclic_family(&(2..=20).collect::<Vec<_>>()).unwrap().members {
            tables.push((m.label, m.table));
        }
        for m in dihedral_family(&(2..=10).collect::<Vec<_>>()).unwrap().members {
            tables.push((m.label, m.table));
        }
        for name in ["S3", "Q8", "A4"] {
            tables.push((name.to_string(), todd_coxeter(&preset(name).unwrap(), &[], DEFAULT_MAX_COSETS).unwrap()));
        }
        for a in 2..=4 {
            for b in a..=20 / a {
                tables.push((format!("Z^2 -> Z/{a} x Z/{b}"), torus_table(a, b)));
            }
        }
        for m in psl2p_family(&[3]).unwrap().members {
            tables.push((m.label, m.table));
        }
        tables
            .into_iter()
            .map(|(name, t)| {
                assert!(t.is_normal() && t.degree() <= 20, "{name}");
                let graph = build_cayley(&t);
                let exact = brute_cheeger(&graph);
                Sample { name, graph, exact }
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Criteria.

fn free_group_gradient() -> Outcome {
    let fam = free_kernel_family(2, &(2..=8).collect::<Vec<_>>()).unwrap();
    let mut records = Vec::new();
    for m in &fam.members {
        let n = m.table.degree();
        let sp = reidemeister_schreier(&fam.presentation, &m.table).unwrap();
        ensure!(sp.generator_count() == n + 1, "n={n}: {} Schreier generators", sp.generator_count());
        ensure!(sp.relators.is_empty(), "n={n}: {} relators", sp.relators.len());
        let r = analyze(&fam.presentation, &m.label, &m.table, m.certified_upper, &rank_only()).unwrap();
        let one = Rational::one();
        ensure!(
            r.gradient_lower() == one && r.gradient_upper() == one,
            "n={n}: interval [{}, {}]",
            r.gradient_lower(),
            r.gradient_upper()
        );
        records.push(r);
    }
    let series = compute_series(records).unwrap();
    ensure!(series.gradient_lower == Rational::one() && series.gradient_upper == Rational::one(), "series interval");
    Ok("n = 2..8: n+1 generators, no relators, gradient [1, 1]".into())
}

fn cycle_cheeger() -> Outcome {
    let z = preset("Z").unwrap();
    for n in (4..=20).step_by(2) {
        let g = build_cayley(&quotient_table(&z, vec![cycle(n)]).unwrap());
        let cert = cheeger_exact(&g, 24).unwrap();
        let oracle = brute_cheeger(&g);
        let expected = Rational::new(4, n as i64);
        ensure!(oracle.h == expected, "oracle gives {} for n={n}", oracle.h);
        ensure!(cert.h == expected && cert.exhaustive, "n={n}: h = {}", cert.h);
        let w = &cert.witness.vertices;
        let arc = (0..n).any(|s| (0..w.len()).all(|i| w.contains(&((s + i) % n))));
        ensure!(arc, "n={n}: witness {w:?} is not an arc");
        let mask = w.iter().fold(0u32, |m, &v| m | 1 << v);
        ensure!(oracle.minimizers.contains(&mask), "n={n}: witness not a minimizer");
    }
    Ok("h = 4/n for n = 4, 6, ..., 20, arc witnesses, brute force agrees".into())
}

fn minimizer_structure() -> Outcome {
    let mut graphs = 0;
    let mut minimizers = 0;
    for s in corpus() {
        let n = s.graph.vertex_count();
        let edges = edge_list(&s.graph);
        let full = (1u32 << n) - 1;
        for &mask in &s.exact.minimizers {
            let size = mask.count_ones() as usize;
            ensure!(4 * size > n, "{}: minimizer {mask:#b} has {size} of {n} vertices", s.name);
            ensure!(induced_connected(n, &edges, mask), "{}: minimizer {mask:#b} disconnected", s.name);
            ensure!(induced_connected(n, &edges, full & !mask), "{}: complement of {mask:#b} disconnected", s.name);
        }
        let cert = cheeger_exact(&s.graph, 24).unwrap();
        ensure!(cert.h == s.exact.h, "{}: library h {} vs brute force {}", s.name, cert.h, s.exact.h);
        ensure!(cert.shape.holds(), "{}: library diagnostics reject the witness", s.name);
        graphs += 1;
        minimizers += s.exact.minimizers.len();
    }
    Ok(format!("{graphs} graphs, {minimizers} minimizers, no violations"))
}

fn spectral_sandwich() -> Outcome {
    let mut worst = f64::INFINITY;
    for s in corpus() {
        let rep = spectrum(&s.graph, DEFAULT_DENSE_TOL).unwrap();
        let h = *s.exact.h.numer() as f64 / *s.exact.h.denom() as f64;
        let lower = s.graph.degree_constant() as f64 * rep.lambda1 / 2.0;
        let upper = s.graph.degree_constant() as f64 * (2.0 * rep.lambda1).sqrt();
        ensure!(
            (lower - rep.cheeger_lower).abs() < 1e-9 && (upper - rep.cheeger_upper).abs() < 1e-9,
            "{}: reported bounds",
            s.name
        );
        ensure!(lower - 1e-6 <= h && h <= upper + 1e-6, "{}: {lower} <= {h} <= {upper} fails", s.name);
        worst = worst.min((h - lower).min(upper - h));
    }
    Ok(format!("{} graphs, smallest margin {worst:.3e}", corpus().len()))
}

/// Type counts recomputed from the complex: `t1` inside `D`, `t2` across,
/// `t3` distinct edges on faces meeting both sides.
fn recount(k: &TwoComplex, inside: &[bool]) -> (u64, u64, u64) {
    let (mut t1, mut t2) = (0, 0);
    for e in 0..k.edge_count() {
        let (s, t) = k.endpoints(e);
        match (inside[s], inside[t]) {
            (true, true) => t1 += 1,
            (a, b) if a != b => t2 += 1,
            _ => {}
        }
    }
    let mut marked = vec![false; k.edge_count()];
    for f in k.faces() {
        let meets_in = f.vertices.iter().any(|&v| inside[v]);
        let meets_out = f.vertices.iter().any(|&v| !inside[v]);
        if meets_in && meets_out {
            for tr in &f.walk {
                marked[tr.edge] = true;
            }
        }
    }
    (t1, t2, marked.iter().filter(|&&m| m).count() as u64)
}

fn edge_type_bounds() -> Outcome {
    let z2 = preset("Z2").unwrap();
    let s3 = preset("S3").unwrap();
    let psl = preset("PSL2Z").unwrap();
    let cases = [
        ("Z^2 -> Z/4 x Z/4", z2, torus_table(4, 4)),
        ("S3", s3.clone(), todd_coxeter(&s3, &[], DEFAULT_MAX_COSETS).unwrap()),
        ("PSL2Z -> Z/3 x Z/2", psl.clone(), product_table(&psl, 3, 2)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut checked = 0;
    for (name, p, t) in &cases {
        let k = build_complex(p, t).unwrap();
        let g = build_cayley(t);
        let n = t.degree();
        let d = p.generator_count() as u64;
        let l = p.relator_length_sum() as u64;
        for _ in 0..200 {
            let inside: Vec<bool> = loop {
                let v: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
                if v.iter().any(|&x| x) && v.iter().any(|&x| !x) {
                    break v;
                }
            };
            let cut: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
            let cd = decompose(&k, &cut).unwrap();
            let (t1, t2, t3) = recount(&k, &inside);
            let tc = cd.type_counts;
            ensure!(
                (tc.t1, tc.t2, tc.t3) == (t1, t2, t3),
                "{name} {cut:?}: library {tc:?} vs recount {:?}",
                (t1, t2, t3)
            );
            ensure!(t1 <= cut.len() as u64 * d, "{name} {cut:?}: t1 = {t1} > {}", cut.len() as u64 * d);
            ensure!(t3 <= t2 * l * l, "{name} {cut:?}: t3 = {t3} > {}", t2 * l * l);
            ensure!(count_types(&cd, &g).holds(), "{name} {cut:?}: library check fails");
            checked += 1;
        }
    }
    Ok(format!("{checked} random cuts, no violations"))
}

fn free_product_betti() -> Outcome {
    let mut seen = Vec::new();
    for (a, b, expected) in [(3i64, 2i64, 2i64), (2, 2, 1), (3, 3, 4)] {
        let fam = free_product_family(&a.to_string(), &b.to_string()).unwrap();
        let m = &fam.members[0];
        let n = (a * b) as usize;
        ensure!(m.table.degree() == n, "Z/{a} * Z/{b}: degree {}", m.table.degree());
        let formula = Rational::from_integer(a * b) * (Rational::one() - Rational::new(1, a) - Rational::new(1, b))
            + Rational::one();
        ensure!(formula == Rational::from_integer(expected), "formula arithmetic");
        let data = m.free_product.as_ref().unwrap();
        ensure!(data.formula == formula, "Z/{a} * Z/{b}: library formula {}", data.formula);
        let betti = betti_over_q(&fam.presentation, &m.table);
        ensure!(betti == expected as u64, "Z/{a} * Z/{b}: betti over Q {betti}");
        ensure!(data.rs_betti == betti, "Z/{a} * Z/{b}: Smith form betti {}", data.rs_betti);
        seen.push(format!("Z/{a}*Z/{b}: {expected}"));
    }
    Ok(seen.join(", "))
}

fn mapping_torus_consistency() -> Outcome {
    let phi = ["ab".to_string(), "a".to_string()];
    let fam = mapping_torus_family(&phi, &(1..=6).collect::<Vec<_>>()).unwrap();
    let mut power = [[1i64, 0], [0, 1]];
    for m in &fam.members {
        let n = m.table.degree();
        power = [[power[0][0] + power[0][1], power[0][0]], [power[1][0] + power[1][1], power[1][0]]];
        let data = m.mapping_torus.as_ref().unwrap();
        let direct = parse_presentation(&data.direct).unwrap();
        ensure!(
            direct.generator_count() == 3,
            "n={n}: direct presentation has {} generators",
            direct.generator_count()
        );
        let oracle = torus_abelianization(power);
        ensure!(
            invariants(&data.direct_invariants) == oracle,
            "n={n}: direct {:?} vs {oracle:?}",
            data.direct_invariants
        );
        ensure!(data.rs_invariants == data.direct_invariants && data.agree, "n={n}: rewriting disagrees");
        let r = analyze(&fam.presentation, &m.label, &m.table, m.certified_upper, &rank_only()).unwrap();
        ensure!(r.gradient_upper() == Rational::new(2, n as i64), "n={n}: upper {}", r.gradient_upper());
    }
    Ok("n = 1..6: invariants agree, upper gradient 2/n".into())
}

fn hnn_and_cyclic_trichotomy() -> Outcome {
    let z = preset("Z").unwrap();
    let t = quotient_table(&z, vec![cycle(6)]).unwrap();
    let k = build_complex(&z, &t).unwrap();
    let cert = certify_cut(&k, &[0, 1, 2], 1, default_epsilon()).unwrap();
    ensure!(cert.c_components == 2, "C has {} components", cert.c_components);
    ensure!(cert.verdict == Verdict::HnnCertified, "verdict {:?}", cert.verdict);

    let fam = cyclic_family(&(3..=20).collect::<Vec<_>>()).unwrap();
    let records = fam
        .members
        .iter()
        .map(|m| {
            analyze(&fam.presentation, &m.label, &m.table, m.certified_upper, &AnalysisOptions::default()).unwrap()
        })
        .collect();
    let rep = trichotomy(&compute_series(records).unwrap()).unwrap();
    ensure!(rep.interpretation.starts_with("consistent with (1) and (3), not (2)"), "{}", rep.interpretation);
    Ok("Z/6 cut {0,1,2}: two C components, HNN; cyclic family: (1) and (3), not (2)".into())
}

fn sl2_spectra() -> Outcome {
    let fam = sl2p_family(&[3, 5]).unwrap();
    let degrees: Vec<usize> = fam.members.iter().map(|m| m.table.degree()).collect();
    let orders: Vec<usize> = [3usize, 5].iter().map(|p| p * (p * p - 1)).collect();
    ensure!(degrees == orders, "degrees {degrees:?}, expected {orders:?}");

    let g3 = build_cayley(&fam.members[0].table);
    let r3 = spectrum(&g3, DEFAULT_DENSE_TOL).unwrap();
    let c3 = cheeger_exact(&g3, 24).unwrap();
    let h3 = *c3.h.numer() as f64 / *c3.h.denom() as f64;
    ensure!(c3.exhaustive, "p=3 not exhaustive");
    ensure!(
        r3.cheeger_lower - 1e-6 <= h3 && h3 <= r3.cheeger_upper + 1e-6,
        "p=3: {h3} outside [{}, {}]",
        r3.cheeger_lower,
        r3.cheeger_upper
    );

    let g5 = build_cayley(&fam.members[1].table);
    let (r5, fiedler) = spectrum_with_fiedler(&g5, DEFAULT_DENSE_TOL).unwrap();
    let c5 = cheeger_sweep(&g5, &fiedler).unwrap();
    let h5 = *c5.h.numer() as f64 / *c5.h.denom() as f64;
    ensure!(
        r5.cheeger_lower - 1e-6 <= h5 && h5 <= r5.cheeger_upper + 1e-6,
        "p=5: {h5} outside [{}, {}]",
        r5.cheeger_lower,
        r5.cheeger_upper
    );
    Ok(format!(
        "p=3: h = {} in [{:.4}, {:.4}]; p=5: sweep {} in [{:.4}, {:.4}]",
        c3.h, r3.cheeger_lower, r3.cheeger_upper, c5.h, r5.cheeger_lower, r5.cheeger_upper
    ))
}

fn nested(fam: &Family, whole: CosetTable) -> Vec<CosetTable> {
    std::iter::once(whole).chain(fam.members.iter().map(|m| m.table.clone())).collect()
}

/// Name, presentation, and nested tables with certified rank bounds.
type Chain = (&'static str, Presentation, Vec<(CosetTable, Option<u64>)>);

fn chain_diagnostics() -> Outcome {
    let z = preset("Z").unwrap();
    let chain: Vec<ChainLink> =
        [1, 2, 4, 8].iter().map(|&n| ChainLink::new(quotient_table(&z, vec![cycle(n)]).unwrap())).collect();
    let rep = chain_quotients(&chain).unwrap();
    let ln2 = std::f64::consts::LN_2;
    ensure!(rep.steps.len() == 3, "{} steps", rep.steps.len());
    for (s, idx) in rep.steps.iter().zip([1usize, 2, 4]) {
        ensure!(s.index == idx && s.step == 2, "step at index {}: [{}]", s.index, s.step);
        ensure!(s.abelian == Some(true), "step at index {idx} not abelian");
        ensure!((s.log_ratio - ln2 / idx as f64).abs() < 1e-12, "log ratio {} at index {idx}", s.log_ratio);
    }
    let lw = quotient_growth(&rep).unwrap();
    ensure!(lw.c == 2.0, "c = {}", lw.c);

    let free2 = free_kernel_family(2, &[2, 4, 8]).unwrap();
    let free3 = free_kernel_family(3, &[3, 9]).unwrap();
    let torus = mapping_torus_family(&["ab".into(), "a".into()], &[2, 4]).unwrap();
    let dihedral = dihedral_family(&[2, 4, 8]).unwrap();
    let cyclic = cyclic_family(&[2, 4, 8, 16]).unwrap();
    let z2 = preset("Z2").unwrap();
    let chains: Vec<Chain> = vec![
        (
            "Z",
            z.clone(),
            nested(&cyclic, quotient_table(&z, vec![vec![0]]).unwrap()).into_iter().map(|t| (t, Some(1))).collect(),
        ),
        (
            "F2",
            free2.presentation.clone(),
            nested(&free2, quotient_table(&free2.presentation, vec![identity(1); 2]).unwrap())
                .into_iter()
                .map(|t| (t, None))
                .collect(),
        ),
        (
            "F3",
            free3.presentation.clone(),
            nested(&free3, quotient_table(&free3.presentation, vec![identity(1); 3]).unwrap())
                .into_iter()
                .map(|t| (t, None))
                .collect(),
        ),
        (
            "mapping torus",
            torus.presentation.clone(),
            nested(&torus, quotient_table(&torus.presentation, vec![identity(1); 3]).unwrap())
                .into_iter()
                .map(|t| (t, Some(3)))
                .collect(),
        ),
        (
            "Z/2 * Z/2",
            dihedral.presentation.clone(),
            dihedral.members.iter().map(|m| (m.table.clone(), m.certified_upper)).collect(),
        ),
        ("Z^2", z2.clone(), [1, 2, 4].iter().map(|&m| (torus_table(m, m), Some(2))).collect()),
    ];
    for (name, p, tables) in &chains {
        let records = tables.iter().map(|(t, c)| analyze(p, name, t, *c, &rank_only()).unwrap()).collect::<Vec<_>>();
        let series = compute_series(records).unwrap();
        ensure!(series.chain_flag, "{name}: not recognised as nested");
        ensure!(series.monotone == Some(true), "{name}: monotone flag {:?}", series.monotone);
        for w in series.records.windows(2) {
            ensure!(
                w[1].gradient_upper() <= w[0].gradient_upper(),
                "{name}: {} after {}",
                w[1].gradient_upper(),
                w[0].gradient_upper()
            );
        }
    }
    Ok(format!(
        "Z chain: indices 2, 4, 8, log ratios ln2/1, ln2/2, ln2/4, c = 2; {} nested chains monotone",
        chains.len()
    ))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("rg-lab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let z6 = dir.join("z6.json");
    std::fs::write(&z6, r#"{"degree":6,"images":{"a":[1,2,3,4,5,0]}}"#).unwrap();
    let z6 = z6.to_str().unwrap();
    let z3z3 = dir.join("z3z3.json");
    std::fs::write(&z3z3, r#"{"degree":9,"images":{"a":[3,4,5,6,7,8,0,1,2],"b":[1,2,0,4,5,3,7,8,6]}}"#).unwrap();
    let z3z3 = z3z3.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["cheeger", "--preset", "Z", "--quotient", z6, "--exact"],
        vec!["spectrum", "--preset", "Z", "--quotient", z6],
        vec!["split", "--preset", "Z", "--quotient", z6, "--cut", "0,1,2"],
        vec!["split", "--preset", "Z3Z3", "--quotient", z3z3, "--scan"],
        vec!["rs", "--preset", "F2", "--subgroup", "aa,b,aba"],
        vec!["gradient", "--family", "free_kernels:k=2,n=2..8", "--csv", "{csv}"],
        vec!["gradient", "--family", "cyclic:n=3..20"],
        vec!["gradient", "--family", "cyclic:n=2,4,8", "--chain-quotients"],
        vec!["gradient", "--family", "free_product:a=3,b=2"],
        vec!["gradient", "--family", "mapping_torus:phi=ab/a,n=1..6"],
        vec!["gradient", "--family", "sl2p:p=3,5"],
    ];
    for args in &commands {
        let outputs: Vec<(Vec<u8>, Vec<u8>)> = ["1", "8"]
            .iter()
            .map(|threads| {
                let csv = dir.join(format!("series-{threads}.csv"));
                let csv = csv.to_str().unwrap();
                let args: Vec<&str> = args.iter().map(|&a| if a == "{csv}" { csv } else { a }).collect();
                let out = Command::new(env!("CARGO_BIN_EXE_rg-lab"))
                    .args(["--threads", threads])
                    .args(&args)
                    .output()
                    .unwrap();
                assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
                (out.stdout, std::fs::read(csv).unwrap_or_default())
            })
            .collect();
        ensure!(
            !outputs[0].0.is_empty() && outputs[0] == outputs[1],
            "{args:?}: output differs between 1 and 8 threads"
        );
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{} commands byte-identical under 1 and 8 threads", commands.len()))
}

// ---------------------------------------------------------------------------

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    assert!(Path::new(env!("CARGO_BIN_EXE_rg-lab")).exists());
    let criteria = [
        Criterion {
            id: 1,
            name: "free-group exact gradient",
            budget: Some(Duration::from_secs(5)),
            run: free_group_gradient,
        },
        Criterion {
            id: 2,
            name: "cycle Cheeger closed form",
            budget: Some(Duration::from_secs(60)),
            run: cycle_cheeger,
        },
        Criterion { id: 3, name: "minimizer size and connectivity", budget: None, run: minimizer_structure },
        Criterion { id: 4, name: "Cheeger-spectral sandwich", budget: None, run: spectral_sandwich },
        Criterion { id: 5, name: "edge-type bounds", budget: Some(Duration::from_secs(30)), run: edge_type_bounds },
        Criterion { id: 6, name: "free-product Betti numbers", budget: None, run: free_product_betti },
        Criterion {
            id: 7,
            name: "mapping-torus consistency",
            budget: Some(Duration::from_secs(30)),
            run: mapping_torus_consistency,
        },
        Criterion {
            id: 8,
            name: "HNN certificate and cyclic trichotomy",
            budget: None,
            run: hnn_and_cyclic_trichotomy,
        },
        Criterion { id: 9, name: "SL(2,p) spectra", budget: Some(Duration::from_secs(600)), run: sl2_spectra },
        Criterion { id: 10, name: "chain diagnostics", budget: None, run: chain_diagnostics },
        Criterion { id: 11, name: "thread-count determinism", budget: None, run: determinism },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => {
                Err(format!("took {:.2} s, budget {} s", elapsed.as_secs_f64(), b.as_secs()))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} ({:.2} s): {detail}", c.id, c.name, elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {} ({:.2} s): {why}", c.id, c.name, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
