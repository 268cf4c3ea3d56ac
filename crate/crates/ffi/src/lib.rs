//! C ABI over `rg-lab`.
//!
//! Presentations and coset tables are opaque handles, released with the
//! matching `*_free`. Every fallible function returns
//! an [`RgStatus`]; on failure, [`rg_last_error`] describes the error until
//! the next call on the same thread. Strings returned through `char **`
//! outputs are owned by the caller and released with [`rg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rg_lab::cayley::{build_cayley, cheeger_exact, CayleyError};
use rg_lab::complex::{build_complex, certify_cut, ComplexError};
use rg_lab::coset::{todd_coxeter, CosetError, CosetTable, QuotientJson};
use rg_lab::families::{self, FamilySpec};
use rg_lab::gradient::{analyze, compute_series, trichotomy, AnalysisOptions};
use rg_lab::presentation::{parse_presentation, Presentation};
use rg_lab::rational::Rational;
use rg_lab::rewriting::{abelianization, rank_interval, reidemeister_schreier};
use rg_lab::spectral::{spectrum, DEFAULT_DENSE_TOL};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Budget = 4,
    Invalid = 5,
    Internal = 6,
}

/// A parsed presentation.
pub struct RgPresentation {
    inner: Presentation,
}

/// A coset table together with the presentation it was built over.
pub struct RgTable {
    presentation: Presentation,
    inner: CosetTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(RgStatus, String);

impl From<CosetError> for Failure {
    fn from(e: CosetError) -> Self {
        let status = match e {
            CosetError::BudgetExceeded(_) => RgStatus::Budget,
            _ => RgStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

impl From<CayleyError> for Failure {
    fn from(e: CayleyError) -> Self {
        let status = match e {
            CayleyError::TooManyVertices { .. } => RgStatus::Budget,
            _ => RgStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        Failure(RgStatus::Invalid, e.to_string())
    }
}

fn invalid<E: ToString>(e: E) -> Failure {
    Failure(RgStatus::Invalid, e.to_string())
}

/// Runs `f`, converting failures and panics into a status and a stored
/// message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RgStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            RgStatus::Internal
        }
    }
}

/// # Safety
/// `s` is null or a valid nul-terminated string.
unsafe fn utf8<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(RgStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(RgStatus::InvalidUtf8, "string is not UTF-8".into()))
}

/// # Safety
/// `p` is null or a live handle.
unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(RgStatus::NullArgument, "null handle".into()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(RgStatus::NullArgument, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn export_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(invalid)
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `a b ; abAB`-style text.
///
/// # Safety
/// `text` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rg_presentation_parse(text: *const c_char, out: *mut *mut RgPresentation) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let p = parse_presentation(utf8(text)?).map_err(|e| Failure(RgStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(RgPresentation { inner: p }));
        Ok(())
    })
}

/// Presentation from the built-in catalog.
///
/// # Safety
/// `name` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rg_presentation_preset(name: *const c_char, out: *mut *mut RgPresentation) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let p = families::preset(utf8(name)?).map_err(invalid)?;
        *out = Box::into_raw(Box::new(RgPresentation { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `p` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rg_presentation_free(p: *mut RgPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn rg_presentation_generator_count(p: *const RgPresentation) -> usize {
    p.as_ref().map_or(0, |p| p.inner.generator_count())
}

/// Sum of relator lengths.
///
/// # Safety
/// `p` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn rg_presentation_relator_length_sum(p: *const RgPresentation) -> usize {
    p.as_ref().map_or(0, |p| p.inner.relator_length_sum())
}

/// Table from quotient JSON (`{"degree": n, "images": {...}}`).
///
/// # Safety
/// `p` is a live handle, `json` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rg_table_from_quotient(
    p: *const RgPresentation,
    json: *const c_char,
    out: *mut *mut RgTable,
) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let p = handle(p)?;
        let q: QuotientJson = serde_json::from_str(utf8(json)?).map_err(|e| Failure(RgStatus::Parse, e.to_string()))?;
        let t = q.into_table(&p.inner)?;
        *out = Box::into_raw(Box::new(RgTable { presentation: p.inner.clone(), inner: t }));
        Ok(())
    })
}

/// Coset enumeration for the subgroup generated by comma-separated words.
///
/// # Safety
/// `p` is a live handle, `subgroup` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rg_table_enumerate(
    p: *const RgPresentation,
    subgroup: *const c_char,
    max_cosets: usize,
    out: *mut *mut RgTable,
) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let p = handle(p)?;
        let words = utf8(subgroup)?
            .split(',')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(|w| p.inner.parse_word(w).map_err(|e| Failure(RgStatus::Parse, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let t = todd_coxeter(&p.inner, &words, max_cosets)?;
        *out = Box::into_raw(Box::new(RgTable { presentation: p.inner.clone(), inner: t }));
        Ok(())
    })
}

/// # Safety
/// `t` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rg_table_free(t: *mut RgTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Index of the subgroup.
///
/// # Safety
/// `t` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn rg_table_degree(t: *const RgTable) -> usize {
    t.as_ref().map_or(0, |t| t.inner.degree())
}

/// Exact Cheeger constant `num/den` of the quotient Cayley graph.
///
/// # Safety
/// `t` is a live handle; `num`, `den` are writable.
#[no_mangle]
pub unsafe extern "C" fn rg_cheeger_exact(
    t: *const RgTable,
    vertex_limit: usize,
    num: *mut i64,
    den: *mut i64,
) -> RgStatus {
    guard(|| {
        out_ptr(num)?;
        out_ptr(den)?;
        let t = handle(t)?;
        let c = cheeger_exact(&build_cayley(&t.inner), vertex_limit)?;
        *num = *c.h.numer();
        *den = *c.h.denom();
        Ok(())
    })
}

/// Second-smallest normalized Laplacian eigenvalue.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rg_lambda1(t: *const RgTable, out: *mut f64) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let t = handle(t)?;
        *out = spectrum(&build_cayley(&t.inner), DEFAULT_DENSE_TOL).map_err(invalid)?.lambda1;
        Ok(())
    })
}

/// Rank interval `[lower, upper]` of the subgroup.
///
/// # Safety
/// `t` is a live handle; `lower`, `upper` are writable.
#[no_mangle]
pub unsafe extern "C" fn rg_rank_interval(t: *const RgTable, lower: *mut u64, upper: *mut u64) -> RgStatus {
    guard(|| {
        out_ptr(lower)?;
        out_ptr(upper)?;
        let t = handle(t)?;
        let sp = reidemeister_schreier(&t.presentation, &t.inner).map_err(invalid)?;
        let ri = rank_interval(&sp, None).map_err(invalid)?;
        *lower = ri.lower;
        *upper = ri.upper;
        Ok(())
    })
}

/// Splitting certificate for the cut, as JSON.
///
/// # Safety
/// `t` is a live handle; `cut` points to `cut_len` readable values; `out`
/// is writable.
#[no_mangle]
pub unsafe extern "C" fn rg_split_certificate(
    t: *const RgTable,
    cut: *const usize,
    cut_len: usize,
    epsilon_num: i64,
    epsilon_den: i64,
    out: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let t = handle(t)?;
        if cut.is_null() && cut_len > 0 {
            return Err(Failure(RgStatus::NullArgument, "null cut".into()));
        }
        if epsilon_den == 0 {
            return Err(invalid("epsilon denominator is zero"));
        }
        let vertices = if cut_len == 0 { &[][..] } else { std::slice::from_raw_parts(cut, cut_len) };
        let k = build_complex(&t.presentation, &t.inner)?;
        let rank_lower = abelianization(&reidemeister_schreier(&t.presentation, &t.inner).map_err(invalid)?).d_ab;
        let cert = certify_cut(&k, vertices, rank_lower, Rational::new(epsilon_num, epsilon_den))?;
        *out = export_string(serde_json::to_string(&cert).map_err(invalid)?)?;
        Ok(())
    })
}

/// Trichotomy report for a family spec such as `cyclic:n=4..8`, as JSON.
///
/// # Safety
/// `spec` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rg_family_report(spec: *const c_char, out: *mut *mut c_char) -> RgStatus {
    guard(|| {
        out_ptr(out)?;
        let spec: FamilySpec =
            utf8(spec)?.parse().map_err(|e: families::FamilyError| Failure(RgStatus::Parse, e.to_string()))?;
        let fam = families::generate(&spec).map_err(invalid)?;
        let opts = AnalysisOptions::default();
        let records = fam
            .members
            .iter()
            .map(|m| analyze(&fam.presentation, &m.label, &m.table, m.certified_upper, &opts))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        let series = compute_series(records).map_err(invalid)?;
        let report = trichotomy(&series).map_err(invalid)?;
        *out = export_string(serde_json::to_string(&report).map_err(invalid)?)?;
        Ok(())
    })
}
