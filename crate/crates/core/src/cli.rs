//! Command-line driver: argument parsing, file I/O and report assembly.
//!
//! Every report starts with a header holding SHA-256 digests of the inputs
//! and the effective options. Thread count is not part of the header:
//! reports are byte-identical for any `--threads`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cayley::{build_cayley, cheeger_exact, cheeger_sweep, CayleyError, CheegerCertificate};
use crate::complex::{build_complex, certify_cut, scan_cuts, ComplexError, DEFAULT_SCAN_LIMIT};
use crate::coset::{todd_coxeter, CosetError, CosetTable, QuotientJson, DEFAULT_MAX_COSETS};
use crate::families::{self, FamilyError, FamilySpec};
use crate::gradient::{
    analyze, chain_quotients, compute_series, quotient_growth, series_csv, trichotomy, AnalysisOptions, ChainLink,
    ChainReport, GradientError, GradientSeries, QuotientGrowth, SubgroupRecord, TrichotomyReport,
};
use crate::presentation::{parse_presentation, Presentation, PresentationError, Word};
use crate::rational::{self, Rational};
use crate::rewriting::{
    abelianization, presentation_abelianization, rank_interval, reidemeister_schreier, RewritingError,
};
use crate::spectral::{
    spectrum, spectrum_with_fiedler, SpectralError, DEFAULT_DENSE_TOL, DEFAULT_ITERATIVE_TOL, DENSE_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rg-lab", version, about = "Splittings, expansion and rank gradient of finitely presented groups")]
pub struct Cli {
    /// Worker threads; affects speed only.
    #[arg(long, global = true, env = "RG_LAB_THREADS")]
    pub threads: Option<usize>,
    /// Coset definition budget for enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
    /// Largest vertex count for exhaustive Cheeger search.
    #[arg(long, global = true, default_value_t = crate::cayley::DEFAULT_VERTEX_LIMIT)]
    pub exact_cheeger_limit: usize,
    /// Eigenvalue tolerance (default 1e-9 dense, 1e-6 iterative).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Splitting-certificate epsilon, as `p/q`.
    #[arg(long, global = true, default_value = "1/10")]
    pub epsilon: String,
    /// Output file (default: standard output).
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// Presentation file, e.g. `a b ; abAB`.
    #[arg(long, conflicts_with = "preset")]
    pub presentation: Option<PathBuf>,
    /// Named presentation from the built-in catalog.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// Quotient JSON: `{"degree": n, "images": {"a": [...], ...}}`.
    #[arg(long, conflicts_with = "subgroup")]
    pub quotient: Option<PathBuf>,
    /// Comma-separated subgroup generators, enumerated by Todd–Coxeter.
    #[arg(long)]
    pub subgroup: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normalize a presentation and report its invariants.
    Parse {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Enumerate cosets of a subgroup given by generating words.
    Enumerate {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated subgroup generators (empty for the trivial subgroup).
        #[arg(long, default_value = "")]
        subgroup: String,
    },
    /// Cheeger constant of the quotient Cayley graph.
    Cheeger {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
        /// Exhaustive search instead of a spectral sweep cut.
        #[arg(long)]
        exact: bool,
    },
    /// Normalized Laplacian spectrum and Cheeger bounds.
    Spectrum {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Reidemeister–Schreier presentation, abelianization and rank interval.
    Rs {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
        /// Independently known upper bound on the subgroup rank.
        #[arg(long)]
        certified_upper: Option<u64>,
    },
    /// Splitting certificate for a cut, or the best over all cuts.
    Split {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        table: TableArgs,
        /// Comma-separated vertex list.
        #[arg(long, required_unless_present = "scan", conflicts_with = "scan")]
        cut: Option<String>,
        /// Examine every cut with at most half the vertices.
        #[arg(long)]
        scan: bool,
        #[arg(long, default_value_t = DEFAULT_SCAN_LIMIT)]
        scan_limit: usize,
    },
    /// Rank-gradient series and trichotomy evidence for a family.
    Gradient {
        /// Family spec, e.g. `free_kernels:k=2,n=2..8`, or JSON.
        #[arg(long)]
        family: String,
        /// Also write the series as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Chain diagnostics; the chain starts at the whole group.
        #[arg(long)]
        chain_quotients: bool,
    },
    /// Generate a family; with `--out-dir`, also write one analysis report
    /// per member.
    Family {
        #[arg(long)]
        family: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Merge member reports of one family into a trichotomy report.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Output(_) => EXIT_FAILURE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Budget(m) | CliError::Output(m) => m,
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_errors!(PresentationError, RewritingError, SpectralError, FamilyError, serde_json::Error);

impl From<CosetError> for CliError {
    fn from(e: CosetError) -> Self {
        match e {
            CosetError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CayleyError> for CliError {
    fn from(e: CayleyError) -> Self {
        match e {
            CayleyError::TooManyVertices { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::TooManyVertices { .. } => CliError::Budget(e.to_string()),
            ComplexError::Table(t) => t.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GradientError> for CliError {
    fn from(e: GradientError) -> Self {
        match e {
            GradientError::Cayley(c) => c.into(),
            GradientError::Complex(c) => c.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Input name to SHA-256 hex digest.
    pub inputs: BTreeMap<String, String>,
    pub options: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: T,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Context {
    max_cosets: usize,
    exact_cheeger_limit: usize,
    tol: Option<f64>,
    epsilon: Rational,
    out: Option<PathBuf>,
}

impl Context {
    fn header(&self, command: &str, inputs: BTreeMap<String, String>) -> Header {
        let options = BTreeMap::from([
            ("epsilon".to_string(), rational::display(self.epsilon)),
            ("exact_cheeger_limit".to_string(), self.exact_cheeger_limit.to_string()),
            ("max_cosets".to_string(), self.max_cosets.to_string()),
            ("tol".to_string(), self.tol.map_or("default".to_string(), |t| format!("{t:e}"))),
        ]);
        Header {
            tool: "rg-lab".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs,
            options,
        }
    }

    fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            exact_cheeger_limit: self.exact_cheeger_limit,
            tol: self.tol,
            epsilon: self.epsilon,
            ..AnalysisOptions::default()
        }
    }

    fn emit<T: Serialize>(&self, header: &Header, body: T) -> Result<(), CliError> {
        let text = to_json(&Report { header, body })?;
        match &self.out {
            Some(path) => write_file(path, text.as_bytes()),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string())),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// The presentation and the digest of its source text.
fn load_group(args: &GroupArgs) -> Result<(Presentation, String), CliError> {
    match (&args.presentation, &args.preset) {
        (Some(path), None) => {
            let bytes = read_file(path)?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
            Ok((parse_presentation(&text)?, sha256_hex(&bytes)))
        }
        (None, Some(name)) => {
            let p = families::preset(name)?;
            Ok((p, sha256_hex(format!("preset:{name}").as_bytes())))
        }
        _ => Err(CliError::Input("give exactly one of --presentation or --preset".into())),
    }
}

fn parse_words(p: &Presentation, list: &str) -> Result<Vec<Word>, CliError> {
    list.split(',').map(str::trim).filter(|w| !w.is_empty()).map(|w| p.parse_word(w).map_err(CliError::from)).collect()
}

fn load_table(ctx: &Context, p: &Presentation, args: &TableArgs) -> Result<(CosetTable, String), CliError> {
    match (&args.quotient, &args.subgroup) {
        (Some(path), None) => {
            let bytes = read_file(path)?;
            let q: QuotientJson = serde_json::from_slice(&bytes)?;
            Ok((q.into_table(p)?, sha256_hex(&bytes)))
        }
        (None, Some(words)) => {
            let t = todd_coxeter(p, &parse_words(p, words)?, ctx.max_cosets)?;
            Ok((t, sha256_hex(format!("subgroup:{words}").as_bytes())))
        }
        _ => Err(CliError::Input("give exactly one of --quotient or --subgroup".into())),
    }
}

fn inputs(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[derive(Serialize)]
struct ParseBody {
    presentation: String,
    generators: Vec<String>,
    relators: Vec<String>,
    relator_length_sum: usize,
    deficiency: i64,
    abelianization: crate::rewriting::AbelianInvariants,
}

#[derive(Serialize)]
struct EnumerateBody {
    index: usize,
    normal: bool,
    quotient: QuotientJson,
}

#[derive(Serialize)]
struct CheegerBody {
    n: usize,
    degree: usize,
    #[serde(flatten)]
    certificate: CheegerCertificate,
}

#[derive(Serialize)]
struct RsBody {
    index: usize,
    schreier_generators: usize,
    generator_labels: Vec<String>,
    relator_count: usize,
    abelianization: crate::rewriting::AbelianInvariants,
    rank_interval: crate::rewriting::RankInterval,
    subgroup_presentation: String,
}

#[derive(Serialize)]
struct ChainBody {
    chain: ChainReport,
    quotient_growth: QuotientGrowth,
}

#[derive(Serialize)]
struct GradientBody {
    family: String,
    series: GradientSeries,
    trichotomy: TrichotomyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_quotients: Option<ChainBody>,
}

#[derive(Serialize, Deserialize)]
struct MemberSummary {
    label: String,
    parameter: u64,
    certified_upper: Option<u64>,
    quotient: QuotientJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    free_product: Option<families::FreeProductData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mapping_torus: Option<families::MappingTorusData>,
}

#[derive(Serialize)]
struct FamilyBody {
    family: String,
    presentation: String,
    members: Vec<MemberSummary>,
}

/// Written per member by `family --out-dir` and read back by `report`.
#[derive(Serialize, Deserialize)]
pub struct MemberReport {
    pub header: Header,
    pub family: String,
    pub presentation: String,
    pub quotient: QuotientJson,
    pub record: SubgroupRecord,
}

#[derive(Serialize)]
struct MergedBody {
    family: String,
    series: GradientSeries,
    trichotomy: TrichotomyReport,
}

fn family_inputs(spec: &FamilySpec, p: &Presentation) -> BTreeMap<String, String> {
    inputs(&[
        ("family", &sha256_hex(spec.to_string().as_bytes())),
        ("presentation", &sha256_hex(p.to_string().as_bytes())),
    ])
}

fn analyze_family(ctx: &Context, fam: &families::Family) -> Result<Vec<SubgroupRecord>, CliError> {
    let opts = ctx.analysis_options();
    let records: Result<Vec<_>, GradientError> = fam
        .members
        .par_iter()
        .map(|m| analyze(&fam.presentation, &m.label, &m.table, m.certified_upper, &opts))
        .collect();
    Ok(records?)
}

fn run_command(ctx: &Context, command: Command) -> Result<(), CliError> {
    match command {
        Command::Parse { group } => {
            let (p, digest) = load_group(&group)?;
            let body = ParseBody {
                presentation: p.to_string(),
                generators: p.generators().iter().map(char::to_string).collect(),
                relators: p.relators().iter().map(|r| p.format_word(r)).collect(),
                relator_length_sum: p.relator_length_sum(),
                deficiency: p.deficiency(),
                abelianization: presentation_abelianization(&p),
            };
            ctx.emit(&ctx.header("parse", inputs(&[("presentation", &digest)])), body)
        }
        Command::Enumerate { group, subgroup } => {
            let (p, digest) = load_group(&group)?;
            let words = parse_words(&p, &subgroup)?;
            let t = todd_coxeter(&p, &words, ctx.max_cosets)?;
            let body = EnumerateBody { index: t.degree(), normal: t.is_normal(), quotient: t.to_json() };
            let sub = sha256_hex(format!("subgroup:{subgroup}").as_bytes());
            ctx.emit(&ctx.header("enumerate", inputs(&[("presentation", &digest), ("subgroup", &sub)])), body)
        }
        Command::Cheeger { group, table, exact } => {
            let (p, pd) = load_group(&group)?;
            let (t, td) = load_table(ctx, &p, &table)?;
            let g = build_cayley(&t);
            let certificate = if exact {
                cheeger_exact(&g, ctx.exact_cheeger_limit)?
            } else {
                let tol = ctx.tol.unwrap_or(DEFAULT_DENSE_TOL);
                let (_, fiedler) = spectrum_with_fiedler(&g, tol)?;
                cheeger_sweep(&g, &fiedler)?
            };
            let body = CheegerBody { n: g.vertex_count(), degree: g.degree_constant(), certificate };
            ctx.emit(&ctx.header("cheeger", inputs(&[("presentation", &pd), ("quotient", &td)])), body)
        }
        Command::Spectrum { group, table } => {
            let (p, pd) = load_group(&group)?;
            let (t, td) = load_table(ctx, &p, &table)?;
            let g = build_cayley(&t);
            let n = g.vertex_count();
            let tol = ctx.tol.unwrap_or(if n <= DENSE_LIMIT { DEFAULT_DENSE_TOL } else { DEFAULT_ITERATIVE_TOL });
            let report = spectrum(&g, tol)?;
            ctx.emit(&ctx.header("spectrum", inputs(&[("presentation", &pd), ("quotient", &td)])), report)
        }
        Command::Rs { group, table, certified_upper } => {
            let (p, pd) = load_group(&group)?;
            let (t, td) = load_table(ctx, &p, &table)?;
            let sp = reidemeister_schreier(&p, &t)?;
            let body = RsBody {
                index: t.degree(),
                schreier_generators: sp.generator_count(),
                generator_labels: sp.generator_labels(),
                relator_count: sp.relators.iter().filter(|r| !r.is_empty()).count(),
                abelianization: abelianization(&sp),
                rank_interval: rank_interval(&sp, certified_upper)?,
                subgroup_presentation: sp.to_text(),
            };
            ctx.emit(&ctx.header("rs", inputs(&[("presentation", &pd), ("quotient", &td)])), body)
        }
        Command::Split { group, table, cut, scan, scan_limit } => {
            let (p, pd) = load_group(&group)?;
            let (t, td) = load_table(ctx, &p, &table)?;
            let k = build_complex(&p, &t)?;
            let rank_lower = abelianization(&reidemeister_schreier(&p, &t)?).d_ab;
            let header = ctx.header("split", inputs(&[("presentation", &pd), ("quotient", &td)]));
            if scan {
                ctx.emit(&header, scan_cuts(&k, rank_lower, ctx.epsilon, scan_limit)?)
            } else {
                let cut = cut.expect("clap requires --cut without --scan");
                let vertices: Vec<usize> = cut
                    .split(',')
                    .map(|v| v.trim().parse().map_err(|_| CliError::Input(format!("bad cut vertex {v:?}"))))
                    .collect::<Result<_, _>>()?;
                ctx.emit(&header, certify_cut(&k, &vertices, rank_lower, ctx.epsilon)?)
            }
        }
        Command::Gradient { family, csv, chain_quotients: want_chain } => {
            let spec: FamilySpec = family.parse()?;
            let fam = families::generate(&spec)?;
            let records = analyze_family(ctx, &fam)?;
            let series = compute_series(records)?;
            let report = trichotomy(&series)?;
            let chain_report = if want_chain {
                let whole = todd_coxeter(&fam.presentation, &whole_group_words(&fam.presentation), ctx.max_cosets)?;
                let mut chain = vec![ChainLink::new(whole)];
                chain.extend(series.records.iter().filter_map(|r| r.table.clone()).map(ChainLink::new));
                let chain = chain_quotients(&chain)?;
                let growth = quotient_growth(&chain)?;
                Some(ChainBody { chain, quotient_growth: growth })
            } else {
                None
            };
            if let Some(path) = csv {
                write_file(&path, series_csv(&series).map_err(|e| CliError::Output(e.to_string()))?.as_bytes())?;
            }
            let header = ctx.header("gradient", family_inputs(&spec, &fam.presentation));
            ctx.emit(
                &header,
                GradientBody { family: spec.to_string(), series, trichotomy: report, chain_quotients: chain_report },
            )
        }
        Command::Family { family, out_dir } => {
            let spec: FamilySpec = family.parse()?;
            let fam = families::generate(&spec)?;
            let header = ctx.header("family", family_inputs(&spec, &fam.presentation));
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
                let records = analyze_family(ctx, &fam)?;
                for (i, (m, record)) in fam.members.iter().zip(records).enumerate() {
                    let report = MemberReport {
                        header: header.clone(),
                        family: spec.to_string(),
                        presentation: fam.presentation.to_string(),
                        quotient: m.table.to_json(),
                        record,
                    };
                    write_file(&dir.join(format!("member-{i:03}.json")), to_json(&report)?.as_bytes())?;
                }
            }
            let members = fam
                .members
                .iter()
                .map(|m| MemberSummary {
                    label: m.label.clone(),
                    parameter: m.parameter,
                    certified_upper: m.certified_upper,
                    quotient: m.table.to_json(),
                    free_product: m.free_product.clone(),
                    mapping_torus: m.mapping_torus.clone(),
                })
                .collect();
            let body = FamilyBody { family: spec.to_string(), presentation: fam.presentation.to_string(), members };
            ctx.emit(&header, body)
        }
        Command::Report { paths } => {
            let mut reports = Vec::with_capacity(paths.len());
            let mut digests = BTreeMap::new();
            for (i, path) in paths.iter().enumerate() {
                let bytes = read_file(path)?;
                let r: MemberReport =
                    serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                digests.insert(format!("report-{i:03}"), sha256_hex(&bytes));
                reports.push(r);
            }
            let first = &reports[0];
            if let Some(bad) = reports.iter().find(|r| r.header.inputs != first.header.inputs) {
                return Err(CliError::Input(format!(
                    "reports come from different families: {} vs {}",
                    first.family, bad.family
                )));
            }
            let p = parse_presentation(&first.presentation)?;
            let family = first.family.clone();
            let records = reports
                .into_iter()
                .map(|mut r| {
                    r.record.table = Some(r.quotient.into_table(&p)?);
                    Ok(r.record)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let series = compute_series(records)?;
            let report = trichotomy(&series)?;
            eprintln!("{family}: {} members", series.records.len());
            eprintln!(
                "rank gradient interval: [{}, {}]",
                rational::display(series.gradient_lower),
                rational::display(series.gradient_upper)
            );
            eprintln!("{}", report.interpretation);
            ctx.emit(&ctx.header("report", digests), MergedBody { family, series, trichotomy: report })
        }
    }
}

/// Generators of the whole group, for the index-1 table.
fn whole_group_words(p: &Presentation) -> Vec<Word> {
    (0..p.generator_count()).map(Word::generator).collect()
}

/// Parses arguments, runs the command in a pool of the requested size and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("rg-lab: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let epsilon = rational::parse(&cli.epsilon)
        .ok_or_else(|| CliError::Input(format!("epsilon {:?} is not a rational p/q", cli.epsilon)))?;
    if let Some(t) = cli.tol {
        if !t.is_finite() || t <= 0.0 {
            return Err(CliError::Input(format!("tolerance must be positive, got {t}")));
        }
    }
    let ctx = Context {
        max_cosets: cli.max_cosets,
        exact_cheeger_limit: cli.exact_cheeger_limit,
        tol: cli.tol,
        epsilon,
        out: cli.out,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Output(e.to_string()))?;
    pool.install(|| run_command(&ctx, cli.command))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(run(["rg-lab", "bogus"]), EXIT_INPUT);
        assert_eq!(run(["rg-lab", "parse", "--preset", "nope"]), EXIT_INPUT);
        assert_eq!(run(["rg-lab", "parse", "--presentation", "/nonexistent/file"]), EXIT_INPUT);
        assert_eq!(
            run(["rg-lab", "--max-cosets", "50", "--out", "/dev/null", "enumerate", "--preset", "Z", "--subgroup", ""]),
            EXIT_BUDGET
        );
        assert_eq!(
            run([
                "rg-lab",
                "--epsilon",
                "1/5",
                "--out",
                "/dev/null",
                "split",
                "--preset",
                "Z",
                "--subgroup",
                "aaaaaa",
                "--cut",
                "0"
            ]),
            EXIT_INPUT
        );
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
