//! C interface to `avdc`.
//!
//! Objects are opaque handles created by `*_new`/`*_parse` and released with the
//! matching `*_free`. Every fallible call returns an [`AvdcStatus`]; on failure the
//! message is available from [`avdc_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use avdc::automaton::OrderedAutomaton;
use avdc::brs::{thm2_decide, Decision};
use avdc::discrepancy::Discrepancy;
use avdc::error::{Error, ValueError};
use avdc::numeration::Rank;
use avdc::vdc::VdcSequence;
use avdc::word::EpWord;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvdcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed text: automaton file, word or UTF-8.
    Parse = 2,
    /// Well-formed input rejected by validation or a hypothesis check.
    Invalid = 3,
    /// Internal consistency check failed.
    Internal = 4,
    Panic = 5,
}

/// Verdict of the bounded remainder set decision.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvdcDecision {
    Bounded = 0,
    Unbounded = 1,
}

/// A validated totally ordered automaton.
pub struct AvdcAutomaton(OrderedAutomaton);

/// The van der Corput sequence of a Pisot automaton, with discrepancy support when
/// the spectral data are available.
pub struct AvdcSequence {
    seq: VdcSequence,
    disc: Option<Discrepancy>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: AvdcStatus, msg: impl ToString) -> AvdcStatus {
    set_error(msg.to_string());
    status
}

fn status_of(e: Error) -> AvdcStatus {
    let status = match &e {
        _ if e.is_internal() => AvdcStatus::Internal,
        Error::Word(_) | Error::Automaton(avdc::error::AutomatonError::Parse { .. }) => AvdcStatus::Parse,
        _ => AvdcStatus::Invalid,
    };
    fail(status, e)
}

/// Runs `f`, turning panics into [`AvdcStatus::Panic`].
fn guard(f: impl FnOnce() -> AvdcStatus) -> AvdcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(AvdcStatus::Panic, "panic inside avdc"),
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, AvdcStatus> {
    if s.is_null() {
        return Err(fail(AvdcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(AvdcStatus::Parse, e))
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(AvdcStatus::NullPointer, concat!("null argument `", stringify!($p), "`"));
        })+
    };
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn avdc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses the automaton text format.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_automaton_parse(src: *const c_char, out: *mut *mut AvdcAutomaton) -> AvdcStatus {
    guard(|| {
        non_null!(out);
        let s = match text(src) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match OrderedAutomaton::parse(s) {
            Ok(a) => {
                *out = Box::into_raw(Box::new(AvdcAutomaton(a)));
                AvdcStatus::Ok
            }
            Err(e) => status_of(e.into()),
        }
    })
}

/// # Safety
/// `aut` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn avdc_automaton_free(aut: *mut AvdcAutomaton) {
    if !aut.is_null() {
        drop(Box::from_raw(aut));
    }
}

/// Number of states `d` (the sink excluded) and alphabet size.
///
/// # Safety
/// `aut` must be a live handle; `d` and `sigma` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn avdc_automaton_shape(aut: *const AvdcAutomaton, d: *mut usize, sigma: *mut usize) -> AvdcStatus {
    non_null!(aut, d, sigma);
    *d = (*aut).0.d();
    *sigma = (*aut).0.sigma();
    AvdcStatus::Ok
}

/// The mirror automaton as a new handle.
///
/// # Safety
/// `aut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_automaton_mirror(aut: *const AvdcAutomaton, out: *mut *mut AvdcAutomaton) -> AvdcStatus {
    guard(|| {
        non_null!(aut, out);
        *out = Box::into_raw(Box::new(AvdcAutomaton((*aut).0.mirror())));
        AvdcStatus::Ok
    })
}

/// Membership of the word `letters[0..len]`.
///
/// # Safety
/// `letters` must point to `len` readable values (or be null with `len == 0`).
#[no_mangle]
pub unsafe extern "C" fn avdc_automaton_accepts(
    aut: *const AvdcAutomaton,
    letters: *const u32,
    len: usize,
    out: *mut bool,
) -> AvdcStatus {
    guard(|| {
        non_null!(aut, out);
        if letters.is_null() && len > 0 {
            return fail(AvdcStatus::NullPointer, "null letters with nonzero length");
        }
        let w: Vec<usize> = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(letters, len).iter().map(|&a| a as usize).collect()
        };
        match (*aut).0.accepts(&w) {
            Ok(b) => {
                *out = b;
                AvdcStatus::Ok
            }
            Err(e) => status_of(e.into()),
        }
    })
}

/// Canonical text form; release with [`avdc_string_free`].
///
/// # Safety
/// `aut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_automaton_to_string(aut: *const AvdcAutomaton, out: *mut *mut c_char) -> AvdcStatus {
    guard(|| {
        non_null!(aut, out);
        *out = CString::new((*aut).0.to_string()).expect("no nul").into_raw();
        AvdcStatus::Ok
    })
}

/// # Safety
/// `s` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn avdc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sequence of a Pisot automaton satisfying the smallest-letter hypothesis.
///
/// # Safety
/// `aut` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_sequence_new(aut: *const AvdcAutomaton, out: *mut *mut AvdcSequence) -> AvdcStatus {
    guard(|| {
        non_null!(aut, out);
        let a = &(*aut).0;
        let seq = match VdcSequence::new(a) {
            Ok(s) => s,
            Err(e) => return status_of(e.into()),
        };
        *out = Box::into_raw(Box::new(AvdcSequence {
            seq,
            disc: Discrepancy::new(a).ok(),
        }));
        AvdcStatus::Ok
    })
}

/// # Safety
/// `seq` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn avdc_sequence_free(seq: *mut AvdcSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// `x_n` as a double.
///
/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_sequence_value(seq: *const AvdcSequence, n: u64, out: *mut f64) -> AvdcStatus {
    guard(|| {
        non_null!(seq, out);
        match (*seq).seq.x(&Rank::from(n)) {
            Ok(v) => {
                *out = v.to_f64();
                AvdcStatus::Ok
            }
            Err(e) => status_of(e.into()),
        }
    })
}

/// `x_n` as a decimal string with `digits` fractional digits (rounded half up);
/// release with [`avdc_string_free`].
///
/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_sequence_value_decimal(
    seq: *const AvdcSequence,
    n: u64,
    digits: u32,
    out: *mut *mut c_char,
) -> AvdcStatus {
    guard(|| {
        non_null!(seq, out);
        match (*seq).seq.x(&Rank::from(n)) {
            Ok(v) => {
                *out = CString::new(v.to_decimal(digits as usize)).expect("no nul").into_raw();
                AvdcStatus::Ok
            }
            Err(e) => status_of(e.into()),
        }
    })
}

/// Writes `x_0, …, x_{count-1}` to `out`.
///
/// # Safety
/// `out` must have room for `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn avdc_sequence_fill(seq: *const AvdcSequence, count: usize, out: *mut f64) -> AvdcStatus {
    guard(|| {
        non_null!(seq, out);
        let dst = std::slice::from_raw_parts_mut(out, count);
        let s = &(*seq).seq;
        for (slot, p) in dst.iter_mut().zip(s.points(count as u64)) {
            *slot = s.finite_value(&p.word).to_f64();
        }
        AvdcStatus::Ok
    })
}

unsafe fn discrepancy_of<'a>(seq: *const AvdcSequence) -> Result<&'a Discrepancy, AvdcStatus> {
    (*seq)
        .disc
        .as_ref()
        .ok_or_else(|| fail(AvdcStatus::Invalid, "spectral data unavailable for this automaton"))
}

unsafe fn word(s: *const c_char) -> Result<EpWord, AvdcStatus> {
    text(s)?
        .parse::<EpWord>()
        .map_err(|e| status_of(e.into()))
}

/// `D(N, [0, ⟨y⟩))` for `y` in `pre|per` syntax, as a double.
///
/// # Safety
/// `seq` must be a live handle, `y` a nul-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_discrepancy(
    seq: *const AvdcSequence,
    y: *const c_char,
    n: u64,
    out: *mut f64,
) -> AvdcStatus {
    guard(|| {
        non_null!(seq, out);
        let run = || -> Result<f64, AvdcStatus> {
            let disc = discrepancy_of(seq)?;
            let u = disc.valued(&word(y)?).map_err(|e| status_of(e.into()))?;
            let p = disc
                .brute_d(n, u.value())
                .map_err(|e: ValueError| status_of(e.into()))?;
            Ok(p.d.to_f64())
        };
        match run() {
            Ok(v) => {
                *out = v;
                AvdcStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Decides whether `[0, ⟨u⟩)` is a bounded remainder set. `hypotheses_met` may be null.
///
/// # Safety
/// `seq` must be a live handle, `u` a nul-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn avdc_brs_decide(
    seq: *const AvdcSequence,
    u: *const c_char,
    out: *mut AvdcDecision,
    hypotheses_met: *mut bool,
) -> AvdcStatus {
    guard(|| {
        non_null!(seq, out);
        let run = || -> Result<(AvdcDecision, bool), AvdcStatus> {
            let disc = discrepancy_of(seq)?;
            let vu = disc.valued(&word(u)?).map_err(|e| status_of(e.into()))?;
            let v = thm2_decide(disc.automaton(), disc.spectral(), &vu).map_err(|e| status_of(e.into()))?;
            let d = match v.decision {
                Decision::Bounded => AvdcDecision::Bounded,
                Decision::Unbounded => AvdcDecision::Unbounded,
            };
            Ok((d, v.hypotheses_met()))
        };
        match run() {
            Ok((d, met)) => {
                *out = d;
                if !hypotheses_met.is_null() {
                    *hypotheses_met = met;
                }
                AvdcStatus::Ok
            }
            Err(s) => s,
        }
    })
}
