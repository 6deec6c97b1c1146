//! C ABI over the hopfring kernel.
//!
//! An algebra is an opaque handle created by `hr_algebra_point` or
//! `hr_algebra_from_json` and released with `hr_algebra_free`. Elements cross
//! the boundary as diagram strings; every string returned through an out
//! pointer must be released with `hr_string_free`. Functions return an
//! [`HrStatus`]; on failure `hr_last_error` describes the most recent error on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hopfring::{hopf, kadl, stable, Algebra, CoeffPresentation, Element, Error, Flavor};

/// Opaque algebra handle.
pub struct HrAlgebra {
    inner: Algebra,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed diagram, sequence or presentation.
    Parse = 3,
    /// A mathematically invalid request (truncation exceeded, bad restriction, ...).
    Math = 4,
    Panic = 5,
}

/// Flavor of stable ring for `hr_limit_mul`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrFlavor {
    Dinf = 0,
    Cx = 1,
    Q0x = 2,
}

impl From<HrFlavor> for Flavor {
    fn from(f: HrFlavor) -> Flavor {
        match f {
            HrFlavor::Dinf => Flavor::Dinf,
            HrFlavor::Cx => Flavor::CX,
            HrFlavor::Q0x => Flavor::Q0X,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HrStatus {
    match e {
        Error::Parse { .. } | Error::Presentation(_) | Error::Sequence(_) | Error::Io(_) => HrStatus::Parse,
        _ => HrStatus::Math,
    }
}

type Outcome<T> = std::result::Result<T, (HrStatus, String)>;

fn lift<T>(r: hopfring::Result<T>) -> Outcome<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Outcome<()>) -> HrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HrStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HrStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Outcome<&'a str> {
    if s.is_null() {
        return Err((HrStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (HrStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn algebra<'a>(h: *const HrAlgebra) -> Outcome<&'a Algebra> {
    h.as_ref().map(|a| &a.inner).ok_or_else(|| (HrStatus::NullPointer, "null algebra handle".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return Err((HrStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).expect("renderings contain no nul bytes").into_raw();
    Ok(())
}

unsafe fn write_handle(out: *mut *mut HrAlgebra, alg: Algebra) -> Outcome<()> {
    if out.is_null() {
        return Err((HrStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(HrAlgebra { inner: alg }));
    Ok(())
}

unsafe fn element(alg: &Algebra, s: *const c_char) -> Outcome<Element> {
    lift(alg.parse(text(s)?))
}

/// Message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn hr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Algebra over the point at prime `p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hr_algebra_point(p: u32, out: *mut *mut HrAlgebra) -> HrStatus {
    guard(|| {
        if !hopfring::scalars::is_prime(p) {
            return Err((HrStatus::Math, Error::NotPrime(p).to_string()));
        }
        write_handle(out, Algebra::point(p))
    })
}

/// Algebra over a JSON coefficient presentation.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hr_algebra_from_json(json: *const c_char, out: *mut *mut HrAlgebra) -> HrStatus {
    guard(|| {
        let pres = lift(CoeffPresentation::load(text(json)?))?;
        write_handle(out, Algebra::new(pres))
    })
}

/// # Safety
/// `h` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hr_algebra_free(h: *mut HrAlgebra) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hr_algebra_prime(h: *const HrAlgebra) -> u32 {
    h.as_ref().map_or(0, |a| a.inner.p)
}

/// Number of skyline basis monomials in tri-grade `(n, d, e)`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hr_count_skyline(h: *const HrAlgebra, n: u64, d: u64, e: u8, out: *mut u64) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        if out.is_null() {
            return Err((HrStatus::NullPointer, "null output pointer".into()));
        }
        *out = alg.count_skyline(n, d, e) as u64;
        Ok(())
    })
}

/// Number of Nakaoka monomials in tri-grade `(n, d, e)`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hr_count_nakaoka(h: *const HrAlgebra, n: u64, d: u64, e: u8, out: *mut u64) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        if out.is_null() {
            return Err((HrStatus::NullPointer, "null output pointer".into()));
        }
        *out = kadl::enumerate_nakaoka(&alg.pres, n, d, e).len() as u64;
        Ok(())
    })
}

/// Canonical form of a diagram or sum of diagrams.
///
/// # Safety
/// `h` must be a live handle, `a` a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hr_normalize(h: *const HrAlgebra, a: *const c_char, out: *mut *mut c_char) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        write_string(out, alg.render(&element(alg, a)?))
    })
}

/// Cup product.
///
/// # Safety
/// As for `hr_normalize`, with `b` also a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hr_cup(h: *const HrAlgebra, a: *const c_char, b: *const c_char, out: *mut *mut c_char) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let r = lift(hopf::cup_product(alg, &element(alg, a)?, &element(alg, b)?))?;
        write_string(out, alg.render(&r))
    })
}

/// Transfer product.
///
/// # Safety
/// As for `hr_cup`.
#[no_mangle]
pub unsafe extern "C" fn hr_transfer(
    h: *const HrAlgebra,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let r = hopf::transfer_product(alg, &element(alg, a)?, &element(alg, b)?);
        write_string(out, alg.render(&r))
    })
}

/// Coproduct, rendered as `c*left (x) right + ...`.
///
/// # Safety
/// As for `hr_normalize`.
#[no_mangle]
pub unsafe extern "C" fn hr_coproduct(h: *const HrAlgebra, a: *const c_char, out: *mut *mut c_char) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let x = hopf::coproduct(alg, &element(alg, a)?);
        let parts: Vec<String> = x
            .iter()
            .map(|((l, r), c)| format!("{c}*{} (x) {}", alg.render_monomial(l), alg.render_monomial(r)))
            .collect();
        write_string(out, if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    })
}

/// Divided power `a^[r]`.
///
/// # Safety
/// As for `hr_normalize`.
#[no_mangle]
pub unsafe extern "C" fn hr_divided_power(
    h: *const HrAlgebra,
    a: *const c_char,
    r: u64,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let x = lift(hopf::divided_power(alg, &element(alg, a)?, r))?;
        write_string(out, alg.render(&x))
    })
}

/// Restriction `ρ_{n,m}` from component `m` to component `n`.
///
/// # Safety
/// As for `hr_normalize`.
#[no_mangle]
pub unsafe extern "C" fn hr_restrict(
    h: *const HrAlgebra,
    a: *const c_char,
    n: u64,
    m: u64,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let x = lift(stable::restrict(alg, &element(alg, a)?, n, m))?;
        write_string(out, alg.render(&x))
    })
}

/// Cup product of limit classes; operands are read as `y|1^[*]`.
///
/// # Safety
/// As for `hr_cup`.
#[no_mangle]
pub unsafe extern "C" fn hr_limit_mul(
    h: *const HrAlgebra,
    a: *const c_char,
    b: *const c_char,
    flavor: HrFlavor,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let f = Flavor::from(flavor);
        let x = lift(stable::limit_of(alg, &element(alg, a)?, f))?;
        let y = lift(stable::limit_of(alg, &element(alg, b)?, f))?;
        let r = lift(stable::limit_cup(alg, &x, &y))?;
        write_string(out, stable::render_limit(alg, &r))
    })
}

/// Minimal sequence of the class `I_S[k]` (or `I'_S[k]` when `primed`),
/// rendered as `(e1,i1,...)`.
///
/// # Safety
/// `set` must point to `len` values (or be null with `len == 0`); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hr_minimal_sequence(
    p: u32,
    set: *const u32,
    len: usize,
    k: u32,
    primed: bool,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let s: &[u32] = if len == 0 {
            &[]
        } else if set.is_null() {
            return Err((HrStatus::NullPointer, "null set".into()));
        } else {
            std::slice::from_raw_parts(set, len)
        };
        let seq = lift(kadl::minimal_sequence(s, k, primed, p))?;
        write_string(out, seq.to_string())
    })
}

/// Stable generators up to `max_degree`, one `block<TAB>degree<TAB>h` line each
/// (`h` is `inf` when never nilpotent).
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hr_stable_generators(
    h: *const HrAlgebra,
    max_degree: u64,
    flavor: HrFlavor,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let alg = algebra(h)?;
        let gens = lift(stable::stable_generators(&alg.pres, max_degree, flavor.into()))?;
        let lines: Vec<String> = gens
            .iter()
            .map(|g| {
                let height = g.height.map_or("inf".to_string(), |h| h.to_string());
                format!("{}\t{}\t{}", alg.render_column(&g.block), g.degree, height)
            })
            .collect();
        write_string(out, lines.join("\n"))
    })
}
