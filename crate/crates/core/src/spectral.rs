//! Normalized Laplacian spectra of Cayley multigraphs and the Cheeger
//! sandwich `degree·λ₁/2 <= h <= degree·sqrt(2λ₁)`.
//!
//! `L = I - A/(2|S|)` where `A` counts edge multiplicities and a loop adds 2
//! to its diagonal entry, so every row of `A` sums to `2|S|`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{CayleyMultigraph, CheegerCertificate};
use crate::rational::{self, Rational};

/// Graphs up to this many vertices get a full dense solve.
pub const DENSE_LIMIT: usize = 2000;
pub const DEFAULT_DENSE_TOL: f64 = 1e-9;
pub const DEFAULT_ITERATIVE_TOL: f64 = 1e-6;

pub const TAU_CAVEAT: &str = "finite-scale evidence only: finitely many quotients neither establish nor rule out \
Property (tau); only trends are reported";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("graph has no vertices")]
    Empty,
    #[error("no family members supplied")]
    EmptyFamily,
    #[error("{reports} spectrum reports but {certificates} Cheeger entries")]
    Misaligned { reports: usize, certificates: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub degree: usize,
    pub method: SolveMethod,
    /// Ascending. Complete for dense solves; for iterative solves only the
    /// extremal values `0, λ₁, λ_max`.
    #[serde(with = "decimal_vec")]
    pub eigenvalues: Vec<f64>,
    #[serde(with = "decimal")]
    pub lambda1: f64,
    #[serde(with = "decimal")]
    pub cheeger_lower: f64,
    #[serde(with = "decimal")]
    pub cheeger_upper: f64,
    pub tol: f64,
}

/// Decimal text with 12 fractional digits; values within 1e-12 of zero are
/// written as zero so the sign of rounding noise never reaches a report.
pub fn format_decimal(v: f64) -> String {
    let v = if v.abs() < 5e-13 { 0.0 } else { v };
    format!("{v:.12}")
}

/// Serde adapter writing `f64` through [`format_decimal`].
pub mod decimal {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_decimal(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub mod decimal_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| super::format_decimal(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect()
    }
}

fn laplacian(g: &CayleyMultigraph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let deg = g.degree_constant() as f64;
    let mut m = DMatrix::<f64>::identity(n, n);
    for v in 0..n {
        m[(v, v)] -= 2.0 * g.loops_at(v) as f64 / deg;
        for &(u, mult) in g.neighbors(v) {
            m[(v, u)] -= mult as f64 / deg;
        }
    }
    m
}

/// `y = A x / deg`
fn apply_walk(g: &CayleyMultigraph, x: &[f64], y: &mut [f64]) {
    let deg = g.degree_constant() as f64;
    for v in 0..g.vertex_count() {
        let mut acc = 2.0 * g.loops_at(v) as f64 * x[v];
        for &(u, mult) in g.neighbors(v) {
            acc += mult as f64 * x[u];
        }
        y[v] = acc / deg;
    }
}

/// Computes the spectrum with `tol` as the reported (and, for the iterative
/// solver, convergence) tolerance.
pub fn spectrum(g: &CayleyMultigraph, tol: f64) -> Result<SpectrumReport, SpectralError> {
    spectrum_with_fiedler(g, tol).map(|(r, _)| r)
}

/// Like [`spectrum`], also returning an eigenvector for `λ₁`.
pub fn spectrum_with_fiedler(g: &CayleyMultigraph, tol: f64) -> Result<(SpectrumReport, Vec<f64>), SpectralError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(SpectralError::BadTolerance(tol));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let degree = g.degree_constant();
    let (method, eigenvalues, fiedler) = if n <= DENSE_LIMIT {
        let (vals, vec) = dense(g);
        (SolveMethod::Dense, vals, vec)
    } else {
        let (vals, vec) = lanczos(g, tol);
        (SolveMethod::Lanczos, vals, vec)
    };
    let lambda1 = if n >= 2 { eigenvalues[1].max(0.0) } else { 0.0 };
    let d = degree as f64;
    let report = SpectrumReport {
        n,
        degree,
        method,
        eigenvalues,
        lambda1,
        cheeger_lower: d * lambda1 / 2.0,
        cheeger_upper: d * (2.0 * lambda1).sqrt(),
        tol,
    };
    Ok((report, fiedler))
}

fn dense(g: &CayleyMultigraph) -> (Vec<f64>, Vec<f64>) {
    let n = g.vertex_count();
    let eig = SymmetricEigen::new(laplacian(g));
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let fiedler = if n >= 2 { eig.eigenvectors.column(idx[1]).iter().copied().collect() } else { vec![0.0; n] };
    (vals, fiedler)
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
    }
}

/// Lanczos on the walk operator `A/deg` restricted to the complement of the
/// constant vector, with full reorthogonalization. The start vector is the
/// normalized all-ones vector perturbed by vertex index, so runs are
/// reproducible.
fn lanczos(g: &CayleyMultigraph, tol: f64) -> (Vec<f64>, Vec<f64>) {
    let n = g.vertex_count();
    let ones = vec![1.0 / (n as f64).sqrt(); n];
    let mut q: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 + 1.0) / n as f64).collect();
    project_out(&mut q, std::slice::from_ref(&ones));
    normalize(&mut q);

    let max_steps = (n - 1).min(400);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut result: Option<(Vec<f64>, Vec<f64>)> = None;
    for step in 0..max_steps {
        basis.push(q.clone());
        apply_walk(g, &q, &mut w);
        let a: f64 = w.iter().zip(&q).map(|(x, y)| x * y).sum();
        alpha.push(a);
        let mut r = w.clone();
        project_out(&mut r, std::slice::from_ref(&ones));
        project_out(&mut r, &basis);
        project_out(&mut r, &basis);
        let b = normalize(&mut r);

        let m = alpha.len();
        let done = b < 1e-12 || step + 1 == max_steps;
        if m >= 2 && (m.is_multiple_of(10) || done) {
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (top, bottom) = extreme_indices(&eig.eigenvalues);
            let s = eig.eigenvectors.column(top);
            let residual = (b * s[m - 1]).abs();
            if residual < tol || done {
                let ritz: DVector<f64> = s.into_owned();
                let mut vec = vec![0.0; n];
                for (j, qj) in basis.iter().enumerate() {
                    vec.iter_mut().zip(qj).for_each(|(x, y)| *x += ritz[j] * y);
                }
                let lambda1 = 1.0 - eig.eigenvalues[top];
                let lambda_max = 1.0 - eig.eigenvalues[bottom];
                let mut vals = vec![0.0, lambda1, lambda_max];
                vals.sort_by(f64::total_cmp);
                result = Some((vals, vec));
                break;
            }
        }
        if done {
            break;
        }
        beta.push(b);
        q = r;
    }
    result.unwrap_or_else(|| (vec![0.0], vec![0.0; n]))
}

fn extreme_indices(vals: &DVector<f64>) -> (usize, usize) {
    let mut top = 0;
    let mut bottom = 0;
    for i in 0..vals.len() {
        if vals[i] > vals[top] {
            top = i;
        }
        if vals[i] < vals[bottom] {
            bottom = i;
        }
    }
    (top, bottom)
}

/// Best-known Cheeger interval of one family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauMember {
    pub n: usize,
    #[serde(with = "decimal")]
    pub lower: f64,
    #[serde(with = "decimal")]
    pub upper: f64,
    #[serde(with = "rational::option")]
    pub exact_h: Option<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauTrend {
    /// Upper bounds fall at least like `index^-1/2` across the family.
    Decaying,
    /// No decay of that strength observed and every lower bound positive.
    NoDecayObserved,
    /// Fewer than two distinct member sizes.
    InsufficientData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauSummary {
    pub members: Vec<TauMember>,
    #[serde(with = "decimal_vec")]
    pub running_inf_lower: Vec<f64>,
    #[serde(with = "decimal_vec")]
    pub running_inf_upper: Vec<f64>,
    /// `-log(upper_last/upper_first) / log(n_last/n_first)` over members
    /// sorted by size.
    pub decay_exponent: Option<f64>,
    pub trend: TauTrend,
    pub caveat: String,
}

/// Threshold on the decay exponent separating [`TauTrend::Decaying`].
pub const DECAY_THRESHOLD: f64 = 0.5;

/// Combines spectral bounds with exact or sweep Cheeger data, member by
/// member, in the given order.
pub fn tau_evidence(
    reports: &[SpectrumReport],
    cheeger: &[Option<CheegerCertificate>],
) -> Result<TauSummary, SpectralError> {
    if reports.is_empty() {
        return Err(SpectralError::EmptyFamily);
    }
    if reports.len() != cheeger.len() {
        return Err(SpectralError::Misaligned { reports: reports.len(), certificates: cheeger.len() });
    }
    let mut members = Vec::with_capacity(reports.len());
    for (r, c) in reports.iter().zip(cheeger) {
        let mut lower = r.cheeger_lower;
        let mut upper = r.cheeger_upper;
        let mut exact_h = None;
        if let Some(c) = c {
            let h = rational::to_f64(c.h);
            upper = upper.min(h);
            if c.exhaustive {
                lower = lower.max(h);
                exact_h = Some(c.h);
            }
        }
        members.push(TauMember { n: r.n, lower, upper, exact_h });
    }
    let mut running_inf_lower = Vec::with_capacity(members.len());
    let mut running_inf_upper = Vec::with_capacity(members.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::INFINITY);
    for m in &members {
        lo = lo.min(m.lower);
        hi = hi.min(m.upper);
        running_inf_lower.push(lo);
        running_inf_upper.push(hi);
    }

    let mut sorted: Vec<&TauMember> = members.iter().collect();
    sorted.sort_by_key(|m| m.n);
    let first = sorted[0];
    let last = sorted[sorted.len() - 1];
    let decay_exponent = (last.n > first.n && first.upper > 0.0 && last.upper > 0.0)
        .then(|| -(last.upper / first.upper).ln() / (last.n as f64 / first.n as f64).ln());
    let trend = match decay_exponent {
        None => TauTrend::InsufficientData,
        Some(a) if a >= DECAY_THRESHOLD => TauTrend::Decaying,
        Some(_) if members.iter().all(|m| m.lower > 0.0) => TauTrend::NoDecayObserved,
        Some(_) => TauTrend::Decaying,
    };
    Ok(TauSummary {
        members,
        running_inf_lower,
        running_inf_upper,
        decay_exponent,
        trend,
        caveat: TAU_CAVEAT.to_string(),
    })
}

/// One CSV row per member: `n, lambda1, lower, upper, exact_h`.
pub fn family_csv(reports: &[SpectrumReport], summary: &TauSummary) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "lambda1", "lower", "upper", "exact_h"])?;
    for (r, m) in reports.iter().zip(&summary.members) {
        w.write_record([
            r.n.to_string(),
            format_decimal(r.lambda1),
            format_decimal(m.lower),
            format_decimal(m.upper),
            m.exact_h.map(rational::display).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
