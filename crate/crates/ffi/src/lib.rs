//! C ABI over `freefermi`.
//!
//! Objects cross the boundary as opaque handles created by `ff_*_new` and
//! released by the matching `ff_*_free`. Every fallible call returns an
//! [`FfStatus`]; on failure a description is available from
//! [`ff_last_error`] until the next failing call on the same thread.
//! Results are written through caller-provided out-pointers.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use freefermi::asymptotics;
use freefermi::ladder::{
    dispersion_bands, fragment_entropy_with_bands, BandSet, Coupling, FragmentMode,
};
use freefermi::occupation::density_from_modeset;
use freefermi::spectra::{entropy_curve, EntropySource};
use freefermi::{Error, LadderSpec, ModeSet, OccupationDensity, RenyiOrder};
use num_complex::Complex64;

/// Status codes; the numeric values of `VALIDATION` and `NUMERICAL` match
/// the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Numerical = 3,
    Io = 4,
    Panic = 5,
}

/// Occupation density (thermodynamic-limit state).
pub struct FfDensity(OccupationDensity);

/// Finite set of occupied momentum modes.
pub struct FfModeSet(ModeSet);

/// Ladder couplings together with their dispersion bands.
pub struct FfLadder {
    spec: LadderSpec,
    bands: BandSet,
}

/// `S ≈ a L + b log L + c` at Rényi order `alpha`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FfCoefficients {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// One coupling `J_{p,j} = re + i im`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FfCoupling {
    pub p: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> FfStatus {
    match err {
        Error::NonContractive { .. } | Error::Accuracy { .. } => FfStatus::Numerical,
        Error::Io(_) => FfStatus::Io,
        _ => FfStatus::Validation,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FfStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            FfStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            FfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn input_slice<'a, T>(
    p: *const T,
    len: usize,
    what: &'static str,
) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the most recent failure on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ff_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Density with plateau `values[r]` ending at angle `jumps[r]`; both arrays have length `r`.
///
/// # Safety
/// `jumps` and `values` must point to `r` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_density_new(
    jumps: *const f64,
    values: *const f64,
    r: usize,
    out: *mut *mut FfDensity,
) -> FfStatus {
    guard(|| {
        let jumps = input_slice(jumps, r, "jumps")?.to_vec();
        let values = input_slice(values, r, "values")?.to_vec();
        let g = OccupationDensity::new(jumps, values)?;
        write_out(out, boxed(FfDensity(g)), "out")
    })
}

/// One of the three reference states (`index` 1, 2 or 3).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_density_named(index: u32, out: *mut *mut FfDensity) -> FfStatus {
    guard(|| {
        let g = OccupationDensity::named_state(index)?;
        write_out(out, boxed(FfDensity(g)), "out")
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_density_free(g: *mut FfDensity) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Mode set on a chain of even length `n`, modes in `1 - n/2 ..= n/2`.
///
/// # Safety
/// `modes` must point to `count` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_modeset_new(
    n: usize,
    modes: *const i64,
    count: usize,
    out: *mut *mut FfModeSet,
) -> FfStatus {
    guard(|| {
        let modes = input_slice(modes, count, "modes")?;
        let ms = ModeSet::new(n, modes.iter().copied())?;
        write_out(out, boxed(FfModeSet(ms)), "out")
    })
}

/// # Safety
/// `ms` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_modeset_free(ms: *mut FfModeSet) {
    if !ms.is_null() {
        drop(Box::from_raw(ms));
    }
}

/// Coarse-grained density of a mode set (`+1` on occupied runs, `-1` elsewhere).
///
/// # Safety
/// `ms` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_modeset_density(
    ms: *const FfModeSet,
    out: *mut *mut FfDensity,
) -> FfStatus {
    guard(|| {
        let ms = deref(ms, "modeset")?;
        let g = density_from_modeset(&ms.0)?;
        write_out(out, boxed(FfDensity(g)), "out")
    })
}

/// Large-`L` expansion coefficients of a density.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_expansion(
    g: *const FfDensity,
    alpha: f64,
    out: *mut FfCoefficients,
) -> FfStatus {
    guard(|| {
        let g = deref(g, "density")?;
        let e = asymptotics::expansion(&g.0, RenyiOrder::new(alpha)?)?;
        write_out(
            out,
            FfCoefficients {
                alpha: e.alpha.value(),
                a: e.a,
                b: e.b,
                c: e.c,
            },
            "out",
        )
    })
}

fn curve_into(
    source: &EntropySource,
    lengths: &[usize],
    alpha: f64,
    out: &mut [f64],
) -> Result<(), Failure> {
    let curve = entropy_curve(source, lengths, RenyiOrder::new(alpha)?)?;
    for (slot, (_, s)) in out.iter_mut().zip(curve) {
        *slot = s;
    }
    Ok(())
}

/// Exact entropies of a density for `count` interval lengths.
///
/// # Safety
/// `lengths` must hold `count` readable values and `out` room for `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_density_entropies(
    g: *const FfDensity,
    lengths: *const usize,
    count: usize,
    alpha: f64,
    out: *mut f64,
) -> FfStatus {
    guard(|| {
        let g = deref(g, "density")?;
        let lengths = input_slice(lengths, count, "lengths")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let out = slice::from_raw_parts_mut(out, count);
        curve_into(&EntropySource::Density(g.0.clone()), lengths, alpha, out)
    })
}

/// Exact entropies of a finite mode set for `count` interval lengths.
///
/// # Safety
/// `lengths` must hold `count` readable values and `out` room for `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn ff_modeset_entropies(
    ms: *const FfModeSet,
    lengths: *const usize,
    count: usize,
    alpha: f64,
    out: *mut f64,
) -> FfStatus {
    guard(|| {
        let ms = deref(ms, "modeset")?;
        let lengths = input_slice(lengths, count, "lengths")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let out = slice::from_raw_parts_mut(out, count);
        curve_into(&EntropySource::Modes(ms.0.clone()), lengths, alpha, out)
    })
}

/// Ladder with `q` rails from `count` couplings (duplicates are summed).
///
/// # Safety
/// `couplings` must point to `count` readable entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_ladder_new(
    q: usize,
    couplings: *const FfCoupling,
    count: usize,
    out: *mut *mut FfLadder,
) -> FfStatus {
    guard(|| {
        let couplings = input_slice(couplings, count, "couplings")?;
        let spec = LadderSpec::new(
            q,
            couplings.iter().map(|c| Coupling {
                p: c.p,
                j: c.j,
                value: Complex64::new(c.re, c.im),
            }),
        )?;
        let bands = dispersion_bands(&spec)?;
        write_out(out, boxed(FfLadder { spec, bands }), "out")
    })
}

/// # Safety
/// `ladder` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ff_ladder_free(ladder: *mut FfLadder) {
    if !ladder.is_null() {
        drop(Box::from_raw(ladder));
    }
}

/// Number of rails.
///
/// # Safety
/// `ladder` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_ladder_rails(ladder: *const FfLadder, out: *mut usize) -> FfStatus {
    guard(|| {
        let ladder = deref(ladder, "ladder")?;
        write_out(out, ladder.spec.q(), "out")
    })
}

/// Sign changes of band `s` over the Brillouin zone.
///
/// # Safety
/// `ladder` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_ladder_band_zeros(
    ladder: *const FfLadder,
    s: usize,
    out: *mut usize,
) -> FfStatus {
    guard(|| {
        let ladder = deref(ladder, "ladder")?;
        if s >= ladder.spec.q() {
            return Err(Failure::Lib(Error::Validation(format!(
                "band {s} out of range for q = {}",
                ladder.spec.q()
            ))));
        }
        write_out(out, ladder.bands.nu(s), "out")
    })
}

/// Entropy of the ladder fragment of length `l` per rail; `asymptotic` selects
/// the large-`L` formula instead of exact spectra.
///
/// # Safety
/// `ladder` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_ladder_fragment_entropy(
    ladder: *const FfLadder,
    l: usize,
    alpha: f64,
    asymptotic: bool,
    out: *mut f64,
) -> FfStatus {
    guard(|| {
        let ladder = deref(ladder, "ladder")?;
        let mode = if asymptotic {
            FragmentMode::Asymptotic
        } else {
            FragmentMode::Exact
        };
        let s = fragment_entropy_with_bands(&ladder.bands, l, RenyiOrder::new(alpha)?, mode)?;
        write_out(out, s, "out")
    })
}

/// Total occupation density of the ladder ground state.
///
/// # Safety
/// `ladder` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_ladder_density(
    ladder: *const FfLadder,
    out: *mut *mut FfDensity,
) -> FfStatus {
    guard(|| {
        let ladder = deref(ladder, "ladder")?;
        let (_, total) = ladder.bands.ground_state_density()?;
        write_out(out, boxed(FfDensity(total)), "out")
    })
}

/// Number of plateaus of a density.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_density_plateaus(g: *const FfDensity, out: *mut usize) -> FfStatus {
    guard(|| {
        let g = deref(g, "density")?;
        write_out(out, g.0.plateau_count(), "out")
    })
}

/// Copies up to `cap` jump angles and plateau values; `written` receives the
/// plateau count, which may exceed `cap`.
///
/// # Safety
/// `jumps` and `values` must have room for `cap` doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_density_plateau_data(
    g: *const FfDensity,
    jumps: *mut f64,
    values: *mut f64,
    cap: usize,
    written: *mut usize,
) -> FfStatus {
    guard(|| {
        let g = deref(g, "density")?;
        let r = g.0.plateau_count();
        let n = r.min(cap);
        if n > 0 && (jumps.is_null() || values.is_null()) {
            return Err(Failure::Null("jumps/values"));
        }
        for i in 0..n {
            jumps.add(i).write(g.0.jump_angles()[i]);
            values.add(i).write(g.0.values()[i]);
        }
        write_out(written, r, "written")
    })
}
