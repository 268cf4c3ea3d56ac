//! Standard example families: each member is a finite-index subgroup of a
//! fixed group, given as a coset table together with any rank data known
//! independently of the table.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coset::{quotient_table, todd_coxeter, CosetError, CosetTable, DEFAULT_MAX_COSETS};
use crate::presentation::{parse_presentation, Letter, Presentation, PresentationError, Word};
use crate::rational::{self, Rational};
use crate::rewriting::{
    abelianization, presentation_abelianization, reidemeister_schreier, AbelianInvariants, RewritingError,
};

pub const MAX_SL2_PRIME: u64 = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{0}")]
    Parameter(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("{0} is not an odd prime at most {MAX_SL2_PRIME}")]
    BadPrime(u64),
    #[error("factor {0} is infinite or exceeds the coset budget")]
    InfiniteFactor(char),
    #[error("image word {0:?} uses letters outside the free basis")]
    ImageAlphabet(String),
    #[error("bad family spec {0:?}: {1}")]
    Syntax(String, String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Table(#[from] CosetError),
    #[error(transparent)]
    Rewriting(#[from] RewritingError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Cyclic {
        n: Vec<usize>,
    },
    FreeKernels {
        k: usize,
        n: Vec<usize>,
    },
    /// Factors are preset names, cyclic orders (`"3"`), or presentation text.
    FreeProduct {
        a: String,
        b: String,
    },
    /// `phi` lists the image of each basis letter, as words over `a, b, ...`.
    MappingTorus {
        phi: Vec<String>,
        n: Vec<usize>,
    },
    Sl2p {
        p: Vec<u64>,
    },
    Psl2p {
        p: Vec<u64>,
    },
    Dihedral {
        n: Vec<usize>,
    },
    Preset {
        name: String,
        n: Vec<usize>,
    },
}

/// Free-product member data: the Betti count of the lifted graph of spaces
/// and the Betti number of the Reidemeister–Schreier abelianization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeProductData {
    pub a_index: usize,
    pub b_index: usize,
    /// `n·(1 - 1/[A:A∩G_i] - 1/[B:B∩G_i]) + 1`
    #[serde(with = "rational")]
    pub formula: Rational,
    pub rs_betti: u64,
    /// An intersection index is 1, or both are 2: positivity of the formula
    /// value needs a separate argument.
    pub grushko_fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingTorusData {
    /// Mapping torus of `phi^n`, with the stable letter last.
    pub direct: String,
    pub direct_invariants: AbelianInvariants,
    pub rs_invariants: AbelianInvariants,
    pub agree: bool,
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub label: String,
    pub parameter: u64,
    pub table: CosetTable,
    /// Independently certified upper bound on the rank of the subgroup.
    pub certified_upper: Option<u64>,
    pub free_product: Option<FreeProductData>,
    pub mapping_torus: Option<MappingTorusData>,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub spec: FamilySpec,
    pub presentation: Presentation,
    pub members: Vec<FamilyMember>,
}

impl Family {
    fn new(spec: FamilySpec, presentation: Presentation) -> Self {
        Family { spec, presentation, members: Vec::new() }
    }

    fn push(&mut self, label: String, parameter: u64, table: CosetTable, certified_upper: Option<u64>) {
        self.members.push(FamilyMember {
            label,
            parameter,
            table,
            certified_upper,
            free_product: None,
            mapping_torus: None,
        });
    }
}

fn cycle(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Right-multiplication action of the group generated by `gens` on its
/// elements, numbered in breadth-first order from the identity.
pub fn regular_action<T: Clone + Eq + Hash>(one: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> Vec<Vec<usize>> {
    let mut index: HashMap<T, usize> = HashMap::from([(one.clone(), 0)]);
    let mut elements = vec![one];
    let mut action: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut i = 0;
    while i < elements.len() {
        for (g, s) in gens.iter().enumerate() {
            let x = mul(&elements[i], s);
            let j = *index.entry(x.clone()).or_insert_with(|| {
                elements.push(x);
                elements.len() - 1
            });
            action[g].push(j);
        }
        i += 1;
    }
    action
}

pub fn cyclic_family(n_list: &[usize]) -> Result<Family, FamilyError> {
    let p = preset("Z")?;
    let mut fam = Family::new(FamilySpec::Cyclic { n: n_list.to_vec() }, p.clone());
    for &n in n_list {
        if n < 2 {
            return Err(FamilyError::Parameter(format!("cyclic quotient order {n} < 2")));
        }
        fam.push(format!("cyclic n={n}"), n as u64, quotient_table(&p, vec![cycle(n)])?, Some(1));
    }
    Ok(fam)
}

/// Kernels of `F_k → Z/n` sending the first generator to 1 and the rest to 0.
pub fn free_kernel_family(k: usize, n_list: &[usize]) -> Result<Family, FamilyError> {
    if k < 2 {
        return Err(FamilyError::Parameter(format!("free rank {k} < 2")));
    }
    let p = Presentation::free(k)?;
    let mut fam = Family::new(FamilySpec::FreeKernels { k, n: n_list.to_vec() }, p.clone());
    for &n in n_list {
        if n < 1 {
            return Err(FamilyError::Parameter("index must be positive".into()));
        }
        let mut perms = vec![identity(n); k];
        perms[0] = cycle(n);
        fam.push(format!("free_kernels k={k} n={n}"), n as u64, quotient_table(&p, perms)?, None);
    }
    Ok(fam)
}

fn factor_presentation(text: &str) -> Result<Presentation, FamilyError> {
    if let Ok(m) = text.trim().parse::<usize>() {
        if m < 1 {
            return Err(FamilyError::Parameter("cyclic factor order must be positive".into()));
        }
        return Ok(Presentation::new(vec!['a'], vec![Word::generator(0).pow(m)])?);
    }
    preset(text.trim()).or_else(|_| Ok(parse_presentation(text)?))
}

/// `A ∗ B` with generators of `A` first, relabeled `a, b, ...`.
pub fn free_product_presentation(pa: &Presentation, pb: &Presentation) -> Result<Presentation, FamilyError> {
    let ka = pa.generator_count();
    let shift: Vec<Word> = (0..pb.generator_count()).map(|g| Word::generator(ka + g)).collect();
    let mut relators = pa.relators().to_vec();
    relators.extend(pb.relators().iter().map(|r| r.substitute(&shift)));
    let names = crate::presentation::default_names(ka + pb.generator_count())?;
    Ok(Presentation::new(names, relators)?)
}

/// `A ∗ B` acting on `A × B` through the regular actions of the factors;
/// the single member is the kernel of `A ∗ B → A × B`.
pub fn free_product_family(a: &str, b: &str) -> Result<Family, FamilyError> {
    let pa = factor_presentation(a)?;
    let pb = factor_presentation(b)?;
    let ta = todd_coxeter(&pa, &[], DEFAULT_MAX_COSETS).map_err(|_| FamilyError::InfiniteFactor('A'))?;
    let tb = todd_coxeter(&pb, &[], DEFAULT_MAX_COSETS).map_err(|_| FamilyError::InfiniteFactor('B'))?;
    let p = free_product_presentation(&pa, &pb)?;
    let (na, nb) = (ta.degree(), tb.degree());
    let n = na * nb;
    let mut perms = Vec::with_capacity(p.generator_count());
    for g in 0..ta.generator_count() {
        perms.push((0..n).map(|x| ta.image(x / nb, g) * nb + x % nb).collect());
    }
    for g in 0..tb.generator_count() {
        perms.push((0..n).map(|x| (x / nb) * nb + tb.image(x % nb, g)).collect());
    }
    let table = quotient_table(&p, perms)?;
    let data = free_product_data(&p, &table, pa.generator_count())?;
    let mut fam = Family::new(FamilySpec::FreeProduct { a: a.to_string(), b: b.to_string() }, p);
    fam.push(format!("free_product |A|={na} |B|={nb}"), n as u64, table, None);
    fam.members[0].free_product = Some(data);
    Ok(fam)
}

/// Orbit of coset 0 under the generators in `gens`.
fn orbit_size(t: &CosetTable, gens: std::ops::Range<usize>) -> usize {
    let mut seen = vec![false; t.degree()];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(c) = stack.pop() {
        for g in gens.clone() {
            for d in [t.image(c, g), t.preimage(c, g)] {
                if !seen[d] {
                    seen[d] = true;
                    count += 1;
                    stack.push(d);
                }
            }
        }
    }
    count
}

/// `a_gens` is the number of leading generators belonging to `A`.
pub fn free_product_data(p: &Presentation, t: &CosetTable, a_gens: usize) -> Result<FreeProductData, FamilyError> {
    let a_index = orbit_size(t, 0..a_gens);
    let b_index = orbit_size(t, a_gens..p.generator_count());
    let n = t.degree() as i64;
    let one = Rational::from_integer(1);
    let formula =
        Rational::from_integer(n) * (one - Rational::new(1, a_index as i64) - Rational::new(1, b_index as i64)) + one;
    let rs_betti = abelianization(&reidemeister_schreier(p, t)?).betti;
    let grushko_fallback = a_index == 1 || b_index == 1 || (a_index == 2 && b_index == 2);
    Ok(FreeProductData { a_index, b_index, formula, rs_betti, grushko_fallback })
}

fn parse_images(phi: &[String]) -> Result<Vec<Word>, FamilyError> {
    let k = phi.len();
    if k == 0 || k > 19 {
        return Err(FamilyError::Parameter("mapping torus needs 1 to 19 basis images".into()));
    }
    let basis = Presentation::free(k)?;
    phi.iter().map(|w| basis.parse_word(w).map_err(|_| FamilyError::ImageAlphabet(w.clone()))).collect()
}

/// `⟨basis, t | t·x·t⁻¹·φ(x)⁻¹⟩`, the stable letter named `t`.
pub fn mapping_torus_presentation(images: &[Word]) -> Result<Presentation, FamilyError> {
    let k = images.len();
    let mut names = crate::presentation::default_names(k)?;
    names.push('t');
    let t = Letter::new(k, false);
    let relators = images
        .iter()
        .enumerate()
        .map(|(x, img)| {
            let lhs = Word::from_letters([t, Letter::new(x, false), t.inverse()]);
            lhs.concat(&img.inverse())
        })
        .collect();
    Ok(Presentation::new(names, relators)?)
}

fn compose_power(images: &[Word], n: usize) -> Vec<Word> {
    let mut acc: Vec<Word> = (0..images.len()).map(Word::generator).collect();
    for _ in 0..n {
        acc = acc.iter().map(|w| w.substitute(images)).collect();
    }
    acc
}

/// Kernels `G_n` of `G → Z/n` (`t ↦ 1`, basis ↦ 0), each compared against
/// the mapping torus of `φⁿ`.
pub fn mapping_torus_family(phi: &[String], n_list: &[usize]) -> Result<Family, FamilyError> {
    let images = parse_images(phi)?;
    let k = images.len();
    let p = mapping_torus_presentation(&images)?;
    let mut fam = Family::new(FamilySpec::MappingTorus { phi: phi.to_vec(), n: n_list.to_vec() }, p.clone());
    for &n in n_list {
        if n < 1 {
            return Err(FamilyError::Parameter("index must be positive".into()));
        }
        let mut perms = vec![identity(n); k + 1];
        perms[k] = cycle(n);
        let table = quotient_table(&p, perms)?;
        let direct = mapping_torus_presentation(&compose_power(&images, n))?;
        let direct_invariants = presentation_abelianization(&direct);
        let rs_invariants = abelianization(&reidemeister_schreier(&p, &table)?);
        let agree = direct_invariants == rs_invariants;
        fam.push(format!("mapping_torus n={n}"), n as u64, table, Some(k as u64 + 1));
        fam.members.last_mut().expect("just pushed").mapping_torus =
            Some(MappingTorusData { direct: direct.to_string(), direct_invariants, rs_invariants, agree });
    }
    Ok(fam)
}

fn is_small_odd_prime(p: u64) -> bool {
    (3..=MAX_SL2_PRIME).contains(&p)
        && p % 2 == 1
        && (3..p).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

type Mat = [u64; 4];

fn mat_mul(x: &Mat, y: &Mat, p: u64) -> Mat {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

/// Representative of `±x` with the first nonzero entry at most `(p-1)/2`.
fn projective(x: Mat, p: u64) -> Mat {
    let lead = *x.iter().find(|&&v| v != 0).expect("invertible matrix");
    if lead * 2 < p {
        x
    } else {
        x.map(|v| (p - v) % p)
    }
}

const UPPER: Mat = [1, 1, 0, 1];
const LOWER: Mat = [1, 0, 1, 1];

pub fn sl2_action(p: u64) -> Result<Vec<Vec<usize>>, FamilyError> {
    if !is_small_odd_prime(p) {
        return Err(FamilyError::BadPrime(p));
    }
    Ok(regular_action([1, 0, 0, 1], &[UPPER, LOWER], |x, y| mat_mul(x, y, p)))
}

pub fn psl2_action(p: u64) -> Result<Vec<Vec<usize>>, FamilyError> {
    if !is_small_odd_prime(p) {
        return Err(FamilyError::BadPrime(p));
    }
    Ok(regular_action([1, 0, 0, 1], &[UPPER, LOWER], |x, y| projective(mat_mul(x, y, p), p)))
}

/// `F_2 → SL(2,p)` sending the generators to the elementary matrices.
pub fn sl2p_family(p_list: &[u64]) -> Result<Family, FamilyError> {
    let fp = Presentation::free(2)?;
    let mut fam = Family::new(FamilySpec::Sl2p { p: p_list.to_vec() }, fp.clone());
    for &p in p_list {
        fam.push(format!("sl2p p={p}"), p, quotient_table(&fp, sl2_action(p)?)?, None);
    }
    Ok(fam)
}

pub fn psl2p_family(p_list: &[u64]) -> Result<Family, FamilyError> {
    let fp = Presentation::free(2)?;
    let mut fam = Family::new(FamilySpec::Psl2p { p: p_list.to_vec() }, fp.clone());
    for &p in p_list {
        fam.push(format!("psl2p p={p}"), p, quotient_table(&fp, psl2_action(p)?)?, None);
    }
    Ok(fam)
}

/// Kernels of `Z/2 ∗ Z/2 → D_n`: the regular action of the dihedral group of
/// order `2n`, generated by `x ↦ -x` and `x ↦ 1 - x` on `Z/n`. Each kernel is
/// infinite cyclic.
pub fn dihedral_family(n_list: &[usize]) -> Result<Family, FamilyError> {
    let p = preset("dihedral_inf")?;
    let mut fam = Family::new(FamilySpec::Dihedral { n: n_list.to_vec() }, p.clone());
    for &n in n_list {
        if n < 2 {
            return Err(FamilyError::Parameter(format!("dihedral order parameter {n} < 2")));
        }
        let n64 = n as i64;
        // (s, r) is x ↦ s·x + r; the product applies the left factor first.
        let mul = |x: &(i64, i64), y: &(i64, i64)| (x.0 * y.0, (y.0 * x.1 + y.1).rem_euclid(n64));
        let action = regular_action((1, 0), &[(-1, 0), (-1, 1)], mul);
        fam.push(format!("dihedral n={n}"), n as u64, quotient_table(&p, action)?, Some(1));
    }
    Ok(fam)
}

/// Degree-`n` quotients of a preset group: the regular action when the group
/// itself is finite of order `n`, otherwise a `Z/n` quotient with 0/1 images.
pub fn preset_family(name: &str, n_list: &[usize]) -> Result<Family, FamilyError> {
    let p = preset(name)?;
    let mut fam = Family::new(FamilySpec::Preset { name: name.to_string(), n: n_list.to_vec() }, p.clone());
    for &n in n_list {
        let t = todd_coxeter(&p, &[], n.max(1) * 64).ok().filter(|t| t.degree() == n);
        let table = match t {
            Some(t) => t,
            None => cyclic_quotient(&p, n)?,
        };
        fam.push(format!("{name} n={n}"), n as u64, table, None);
    }
    Ok(fam)
}

/// A `Z/n` quotient sending each generator to 0 or 1: the first assignment
/// (in binary counting order, skipping all-zero) satisfying every relator.
fn cyclic_quotient(p: &Presentation, n: usize) -> Result<CosetTable, FamilyError> {
    let k = p.generator_count();
    if k > 16 {
        return Err(FamilyError::Parameter("too many generators for a cyclic quotient search".into()));
    }
    for mask in 1u32..(1 << k) {
        let sums_ok = p.relators().iter().all(|r| {
            let s: i64 =
                r.exponent_sums(k).iter().enumerate().map(|(g, e)| if mask >> g & 1 == 1 { *e } else { 0 }).sum();
            s.rem_euclid(n as i64) == 0
        });
        if sums_ok {
            let perms = (0..k).map(|g| if mask >> g & 1 == 1 { cycle(n) } else { identity(n) }).collect();
            return Ok(quotient_table(p, perms)?);
        }
    }
    Err(FamilyError::Parameter(format!("no cyclic quotient of order {n} with 0/1 images")))
}

pub const PRESETS: &[(&str, &str)] = &[
    ("Z", "a ;"),
    ("Z2", "a b ; abAB"),
    ("F2", "a b ;"),
    ("F3", "a b c ;"),
    ("S3", "a b ; aaa, bb, abab"),
    ("Q8", "a b ; aaaa, aaBB, abaB"),
    ("A4", "a b ; aaa, bb, ababab"),
    ("PSL2Z", "a b ; aaa, bb"),
    ("SL2Z", "a b ; aaaa, aaBBB"),
    ("dihedral_inf", "a b ; aa, bb"),
    ("Z3Z2", "a b ; aaa, bb"),
    ("Z3Z3", "a b ; aaa, bbb"),
    ("figure8", "a t ; taTTAtA"),
];

pub fn preset(name: &str) -> Result<Presentation, FamilyError> {
    let text = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| FamilyError::UnknownPreset(name.to_string()))?;
    Ok(parse_presentation(text)?)
}

pub fn generate(spec: &FamilySpec) -> Result<Family, FamilyError> {
    let mut fam = match spec {
        FamilySpec::Cyclic { n } => cyclic_family(n),
        FamilySpec::FreeKernels { k, n } => free_kernel_family(*k, n),
        FamilySpec::FreeProduct { a, b } => free_product_family(a, b),
        FamilySpec::MappingTorus { phi, n } => mapping_torus_family(phi, n),
        FamilySpec::Sl2p { p } => sl2p_family(p),
        FamilySpec::Psl2p { p } => psl2p_family(p),
        FamilySpec::Dihedral { n } => dihedral_family(n),
        FamilySpec::Preset { name, n } => preset_family(name, n),
    }?;
    fam.spec = spec.clone();
    Ok(fam)
}

/// Expands `a..b` (inclusive) and single integers.
fn parse_range<T: FromStr + Copy + Into<u64> + TryFrom<u64>>(item: &str) -> Option<Vec<T>> {
    match item.split_once("..") {
        Some((lo, hi)) => {
            let lo: T = lo.trim().parse().ok()?;
            let hi: T = hi.trim().parse().ok()?;
            let (lo, hi) = (lo.into(), hi.into());
            (lo <= hi).then(|| (lo..=hi).filter_map(|v| T::try_from(v).ok()).collect())
        }
        None => item.trim().parse().ok().map(|v| vec![v]),
    }
}

/// Short form `kind:key=value,...`. A comma-separated item without `=`
/// extends the previous key's list, so `sl2p:p=3,5` names two primes.
impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(text: &str) -> Result<Self, FamilyError> {
        let err = |m: &str| FamilyError::Syntax(text.to_string(), m.to_string());
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| err(&e.to_string()));
        }
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut params: Vec<(String, Vec<String>)> = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((key, value)) => params.push((key.trim().to_string(), vec![value.trim().to_string()])),
                None => match params.last_mut() {
                    Some((_, values)) => values.push(item.to_string()),
                    None => return Err(err("value before any key")),
                },
            }
        }
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone());
        let list = |key: &str| -> Result<Vec<usize>, FamilyError> {
            let values = get(key).ok_or_else(|| err(&format!("missing {key}")))?;
            let mut out = Vec::new();
            for v in &values {
                let r: Vec<u64> = parse_range::<u64>(v).ok_or_else(|| err(&format!("bad {key} value {v:?}")))?;
                out.extend(r.into_iter().map(|x| x as usize));
            }
            Ok(out)
        };
        let single = |key: &str| -> Result<String, FamilyError> {
            match get(key).as_deref() {
                Some([v]) => Ok(v.clone()),
                _ => Err(err(&format!("{key} needs exactly one value"))),
            }
        };
        let known = |keys: &[&str]| -> Result<(), FamilyError> {
            match params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
                Some((k, _)) => Err(err(&format!("unknown key {k}"))),
                None => Ok(()),
            }
        };
        let spec = match kind.trim() {
            "cyclic" => {
                known(&["n"])?;
                FamilySpec::Cyclic { n: list("n")? }
            }
            "free_kernels" => {
                known(&["k", "n"])?;
                let k = single("k")?.parse().map_err(|_| err("bad k"))?;
                FamilySpec::FreeKernels { k, n: list("n")? }
            }
            "free_product" => {
                known(&["a", "b"])?;
                FamilySpec::FreeProduct { a: single("a")?, b: single("b")? }
            }
            "mapping_torus" => {
                known(&["phi", "n"])?;
                let phi = single("phi")?.split('/').map(str::to_string).collect();
                FamilySpec::MappingTorus { phi, n: list("n")? }
            }
            "sl2p" => {
                known(&["p"])?;
                FamilySpec::Sl2p { p: list("p")?.into_iter().map(|x| x as u64).collect() }
            }
            "psl2p" => {
                known(&["p"])?;
                FamilySpec::Psl2p { p: list("p")?.into_iter().map(|x| x as u64).collect() }
            }
            "dihedral" => {
                known(&["n"])?;
                FamilySpec::Dihedral { n: list("n")? }
            }
            "preset" => {
                known(&["name", "n"])?;
                FamilySpec::Preset { name: single("name")?, n: list("n")? }
            }
            other => return Err(err(&format!("unknown kind {other:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let join64 = |v: &[u64]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            FamilySpec::Cyclic { n } => write!(f, "cyclic:n={}", join(n)),
            FamilySpec::FreeKernels { k, n } => write!(f, "free_kernels:k={k},n={}", join(n)),
            FamilySpec::FreeProduct { a, b } => write!(f, "free_product:a={a},b={b}"),
            FamilySpec::MappingTorus { phi, n } => write!(f, "mapping_torus:phi={},n={}", phi.join("/"), join(n)),
            FamilySpec::Sl2p { p } => write!(f, "sl2p:p={}", join64(p)),
            FamilySpec::Psl2p { p } => write!(f, "psl2p:p={}", join64(p)),
            FamilySpec::Dihedral { n } => write!(f, "dihedral:n={}", join(n)),
            FamilySpec::Preset { name, n } => write!(f, "preset:name={name},n={}", join(n)),
        }
    }
}
