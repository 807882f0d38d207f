//! C ABI for `unisheaf`.
//!
//! Every entry point returns a [`UsStatus`]; results come back through out
//! parameters. Objects are opaque handles created by `*_parse`/`*_new` and
//! released by the matching `*_free`. Strings returned to the caller are
//! NUL-terminated, owned by the caller and released with [`us_string_free`].
//! After a failure, [`us_last_error`] describes it for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unisheaf::dmod::{deligne_chi, index_report, irregularity, parse_operator_file, parse_point, ConnectionSpec};
use unisheaf::gtop::{parse_sheaf, sheaf_cohomology, PosetSheaf};
use unisheaf::spacefile::SpaceFile;
use unisheaf::tower::{make_tower, parse_tower_file, puncture_quotient, CoveringTower, Generator};
use unisheaf::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text failed to parse; the message carries line and column.
    Parse = 3,
    /// Input parsed but violates a structural requirement.
    Invalid = 4,
    /// The computation could not be carried out (size limits, arithmetic).
    Computation = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// A parsed space file (quasi-uniformity, covering family or topology).
pub struct UsSpace(SpaceFile);
/// A differential operator with its singular set.
pub struct UsConnection(ConnectionSpec);
/// A covering tower built to a fixed depth.
pub struct UsTower(CoveringTower);
/// A sheaf of finite-dimensional vector spaces on a finite space.
pub struct UsSheaf(PosetSheaf);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(UsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => UsStatus::Parse,
            Error::TooLarge { .. } | Error::DivisionByZero => UsStatus::Computation,
            _ => UsStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(UsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            UsStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(UsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` is null or points to a live handle.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL bytes removed").into_raw()
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(owned_string(s));
    Ok(())
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// Strings and errors

/// Message of the last failure on this thread, or null if there was none.
/// The caller owns the returned string.
#[no_mangle]
pub extern "C" fn us_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn us_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn us_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Spaces

/// Parses a space file.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_space_parse(source: *const c_char, out: *mut *mut UsSpace) -> UsStatus {
    guard(|| {
        let f = SpaceFile::parse(text(source, "source")?)?;
        put_handle(out, UsSpace(f))
    })
}

/// # Safety
/// `space` is null or a live handle from [`us_space_parse`].
#[no_mangle]
pub unsafe extern "C" fn us_space_free(space: *mut UsSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points.
///
/// # Safety
/// `space` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_space_size(space: *const UsSpace, out: *mut usize) -> UsStatus {
    guard(|| put(out, handle(space, "space")?.0.base.size()))
}

/// Quasi-uniformity axioms of the entourage basis, and the smallest
/// entourage as `(a,b) (b,b) ...`.
///
/// # Safety
/// `space` is a live handle; output pointers are writable (`e_min` may be null).
#[no_mangle]
pub unsafe extern "C" fn us_space_check(
    space: *const UsSpace,
    quasi_uniform: *mut bool,
    uniform: *mut bool,
    e_min: *mut *mut c_char,
) -> UsStatus {
    guard(|| {
        let f = &handle(space, "space")?.0;
        let r = f.quniformity()?.check()?;
        put(quasi_uniform, r.is_quasi_uniformity)?;
        put(uniform, r.is_uniformity)?;
        if !e_min.is_null() {
            let pairs: Vec<String> =
                r.e_min.pairs().map(|(x, y)| format!("({},{})", f.base.label(x), f.base.label(y))).collect();
            put_string(e_min, pairs.join(" "))?;
        }
        Ok(())
    })
}

/// Canonical text of the space file.
///
/// # Safety
/// `space` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_space_to_string(space: *const UsSpace, out: *mut *mut c_char) -> UsStatus {
    guard(|| put_string(out, handle(space, "space")?.0.to_canonical_string()))
}

// ---------------------------------------------------------------------------
// Connections

/// Parses an operator file.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_connection_parse(source: *const c_char, out: *mut *mut UsConnection) -> UsStatus {
    guard(|| {
        let (_, s) = parse_operator_file(text(source, "source")?)?;
        put_handle(out, UsConnection(s))
    })
}

/// # Safety
/// `c` is null or a live handle from [`us_connection_parse`].
#[no_mangle]
pub unsafe extern "C" fn us_connection_free(c: *mut UsConnection) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Irregularity at a point written as `0`, `1/2` or `inf`.
///
/// # Safety
/// `c` is a live handle; `point` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_connection_irregularity(
    c: *const UsConnection,
    point: *const c_char,
    out: *mut i64,
) -> UsStatus {
    guard(|| {
        let s = &handle(c, "connection")?.0;
        let x = parse_point(text(point, "point")?, 1, 1)?;
        put(out, irregularity(s.op(), &x))
    })
}

/// Euler characteristic from the index formula.
///
/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_connection_chi(c: *const UsConnection, out: *mut i64) -> UsStatus {
    guard(|| put(out, deligne_chi(&handle(c, "connection")?.0)))
}

/// Index from the truncated De Rham complex, growing windows up to `dmax`;
/// `agree` reports whether it stabilized at the formula's value.
///
/// # Safety
/// `c` is a live handle; output pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn us_connection_oracle_index(
    c: *const UsConnection,
    dmax: usize,
    index: *mut i64,
    agree: *mut bool,
) -> UsStatus {
    guard(|| {
        let r = index_report(&handle(c, "connection")?.0, dmax)?;
        put(index, r.chi_oracle())?;
        put(agree, r.agree())
    })
}

// ---------------------------------------------------------------------------
// Towers

/// Builds a tower from a generator name (`metric`, `sectorial`, `padic`,
/// `formal`); `p` is the prime for the last two and ignored otherwise.
///
/// # Safety
/// `generator` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_tower_new(
    generator: *const c_char,
    p: u64,
    depth: usize,
    out: *mut *mut UsTower,
) -> UsStatus {
    guard(|| {
        let g = Generator::from_name(text(generator, "generator")?, (p != 0).then_some(p))?;
        put_handle(out, UsTower(make_tower(g, depth)?))
    })
}

/// Parses a one-line tower file such as `tower sectorial depth=4`.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_tower_parse(source: *const c_char, out: *mut *mut UsTower) -> UsStatus {
    guard(|| {
        let spec = parse_tower_file(text(source, "source")?)?;
        put_handle(out, UsTower(spec.build()?))
    })
}

/// # Safety
/// `t` is null or a live tower handle.
#[no_mangle]
pub unsafe extern "C" fn us_tower_free(t: *mut UsTower) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of blocks at level `level`.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_tower_level_size(t: *const UsTower, level: usize, out: *mut usize) -> UsStatus {
    guard(|| {
        let t = &handle(t, "tower")?.0;
        if level > t.depth() {
            return Err(Failure(UsStatus::Invalid, format!("level {level} exceeds depth {}", t.depth())));
        }
        put(out, t.level_size(level))
    })
}

/// Whether every level star-refines the one a stride above it.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_tower_star_verified(t: *const UsTower, out: *mut bool) -> UsStatus {
    guard(|| put(out, handle(t, "tower")?.0.star_certificate().verified()))
}

/// Constant-sheaf cohomology dimensions of the boundary quotient, as `1 1`.
///
/// # Safety
/// `t` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_tower_boundary_cohomology(t: *const UsTower, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let q = puncture_quotient(&handle(t, "tower")?.0)?;
        put_string(out, join(&sheaf_cohomology(&PosetSheaf::constant(q, 1)?)))
    })
}

// ---------------------------------------------------------------------------
// Sheaves

/// Parses a sheaf file.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_sheaf_parse(source: *const c_char, out: *mut *mut UsSheaf) -> UsStatus {
    guard(|| {
        let (_, s) = parse_sheaf(text(source, "source")?)?;
        put_handle(out, UsSheaf(s))
    })
}

/// # Safety
/// `s` is null or a live sheaf handle.
#[no_mangle]
pub unsafe extern "C" fn us_sheaf_free(s: *mut UsSheaf) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Cohomology dimensions as space-separated integers.
///
/// # Safety
/// `s` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn us_sheaf_cohomology(s: *const UsSheaf, out: *mut *mut c_char) -> UsStatus {
    guard(|| put_string(out, join(&sheaf_cohomology(&handle(s, "sheaf")?.0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status_codes() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, UsStatus::Panic);
        let msg = unsafe { CStr::from_ptr(us_last_error()) }.to_str().unwrap().to_owned();
        assert!(msg.contains("boom"));
    }

    #[test]
    fn errors_map_to_codes() {
        assert_eq!(Failure::from(Error::TooLarge { size: 30, limit: 20 }).0, UsStatus::Computation);
        assert_eq!(Failure::from(Error::EmptyBasis).0, UsStatus::Invalid);
    }
}
