//! C ABI over `spe-core`.
//!
//! Games and certificates are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`SpeStatus`]; the message of the last failure on the calling thread is
//! available from [`spe_last_error`]. Returned strings are borrowed from
//! their handle.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spe_core::arena::{expand, ExpandedArena};
use spe_core::cli::{parse_game, CertificateDocument, Game, ProfileDocument};
use spe_core::oracle::{self, SearchMode};
use spe_core::prefs::find_spe_killer;
use spe_core::profiles::{is_gp_spe, is_spe};
use spe_core::solver::{solve, SolveCertificate, SolveMode, SolveOptions};
use spe_core::Error;

/// Status codes; the non-zero values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeStatus {
    Ok = 0,
    Internal = 1,
    Killer = 2,
    Unsupported = 3,
    Input = 4,
    Resource = 5,
    NullArgument = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeMode {
    /// Whatever guarantee the dispatcher provides.
    Any = 0,
    GpSpe = 1,
}

/// Killer pattern `z <a y <a x` and `x <b z <b y`, as player and outcome indices.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpeKiller {
    pub a: usize,
    pub b: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// A parsed game together with its expanded arena.
pub struct SpeGame {
    game: Game,
    expanded: ExpandedArena,
}

pub struct SpeCertificate {
    cert: SolveCertificate,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> SpeStatus {
    set_error(&e.to_string());
    match e.exit_code() {
        2 => SpeStatus::Killer,
        3 => SpeStatus::Unsupported,
        4 => SpeStatus::Input,
        5 => SpeStatus::Resource,
        _ => SpeStatus::Internal,
    }
}

fn null_argument(name: &str) -> SpeStatus {
    set_error(&format!("`{name}` must not be null"));
    SpeStatus::NullArgument
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> SpeStatus) -> SpeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            SpeStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, SpeStatus> {
    if p.is_null() {
        return Err(null_argument("text"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(Error::Input("text is not UTF-8".into())))
}

/// Message of the last failure on this thread; empty if none. Valid until the next call.
#[no_mangle]
pub extern "C" fn spe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a game document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spe_game_from_json(json: *const c_char, out: *mut *mut SpeGame) -> SpeStatus {
    guard(|| {
        if out.is_null() {
            return null_argument("out");
        }
        *out = ptr::null_mut();
        let json = match text(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let built = parse_game(json).and_then(|game| {
            let expanded = expand(&game.arena)?;
            Ok(SpeGame { game, expanded })
        });
        match built {
            Ok(g) => {
                *out = Box::into_raw(Box::new(g));
                SpeStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `game` must come from [`spe_game_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spe_game_free(game: *mut SpeGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn spe_game_outcome_count(game: *const SpeGame) -> usize {
    game.as_ref().map_or(0, |g| g.game.prefs.outcomes.len())
}

/// # Safety
/// `game` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn spe_game_state_count(game: *const SpeGame) -> usize {
    game.as_ref().map_or(0, |g| g.expanded.len())
}

/// Looks for the killer; `found` tells whether `out` was written.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn spe_find_killer(game: *const SpeGame, out: *mut SpeKiller, found: *mut bool) -> SpeStatus {
    guard(|| {
        let Some(g) = game.as_ref() else { return null_argument("game") };
        if out.is_null() || found.is_null() {
            return null_argument("out");
        }
        match find_spe_killer(&g.game.prefs) {
            Some(w) => {
                *out = SpeKiller { a: w.a, b: w.b, x: w.x, y: w.y, z: w.z };
                *found = true;
            }
            None => *found = false,
        }
        SpeStatus::Ok
    })
}

/// Builds a verified certificate. Returns `SPE_STATUS_KILLER` when the preferences contain the killer.
///
/// # Safety
/// `game` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spe_solve(game: *const SpeGame, mode: SpeMode, out: *mut *mut SpeCertificate) -> SpeStatus {
    guard(|| {
        let Some(g) = game.as_ref() else { return null_argument("game") };
        if out.is_null() {
            return null_argument("out");
        }
        *out = ptr::null_mut();
        let options = SolveOptions {
            mode: match mode {
                SpeMode::Any => None,
                SpeMode::GpSpe => Some(SolveMode::GpSpe),
            },
            step_cap: None,
        };
        match solve(&g.expanded, &g.game.prefs, &options) {
            Ok(cert) => {
                let doc = CertificateDocument::new(&g.expanded, &g.game.prefs, &cert);
                let json = serde_json::to_string(&doc).unwrap_or_default();
                let json = CString::new(json).unwrap_or_default();
                *out = Box::into_raw(Box::new(SpeCertificate { cert, json }));
                SpeStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `cert` must come from [`spe_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spe_certificate_free(cert: *mut SpeCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Outcome index induced at the root.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn spe_certificate_root_outcome(game: *const SpeGame, cert: *const SpeCertificate) -> usize {
    match (game.as_ref(), cert.as_ref()) {
        (Some(g), Some(c)) => c.cert.root_outcome(&g.expanded),
        _ => usize::MAX,
    }
}

/// Certificate as JSON, borrowed from the handle.
///
/// # Safety
/// `cert` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn spe_certificate_json(cert: *const SpeCertificate) -> *const c_char {
    cert.as_ref().map_or(ptr::null(), |c| c.json.as_ptr())
}

/// Checks a profile document (or the `profile` member of a certificate) for SPE, or GP-SPE.
///
/// # Safety
/// All pointers must be valid; `profile_json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn spe_verify_profile(
    game: *const SpeGame,
    profile_json: *const c_char,
    mode: SpeMode,
    holds: *mut bool,
) -> SpeStatus {
    guard(|| {
        let Some(g) = game.as_ref() else { return null_argument("game") };
        if holds.is_null() {
            return null_argument("holds");
        }
        let json = match text(profile_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let doc: ProfileDocument = match serde_json::from_str(json)
            .or_else(|_| serde_json::from_str::<CertificateDocument>(json).map(|c| c.profile))
        {
            Ok(d) => d,
            Err(e) => return fail(Error::Input(format!("invalid profile: {e}"))),
        };
        let profile = match doc.to_profile(&g.expanded) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        *holds = match mode {
            SpeMode::Any => is_spe(&g.expanded, &profile, &g.game.prefs),
            SpeMode::GpSpe => is_gp_spe(&g.expanded, &profile, &g.game.prefs),
        };
        SpeStatus::Ok
    })
}

/// Number of SPE among positional profiles (`memory == 0`) or memory-bounded ones.
///
/// # Safety
/// `game` must be live and `count` valid.
#[no_mangle]
pub unsafe extern "C" fn spe_oracle_spe_count(game: *const SpeGame, memory: usize, cap: u64, count: *mut u64) -> SpeStatus {
    guard(|| {
        let Some(g) = game.as_ref() else { return null_argument("game") };
        if count.is_null() {
            return null_argument("count");
        }
        let memory = (memory > 0).then_some(memory);
        match oracle::search("", &g.expanded, &g.game.prefs, SearchMode::Spe, memory, cap) {
            Ok(r) => {
                *count = r.spe_count;
                SpeStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
