use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use spe_ffi::*;

const KILLER: &str = include_str!("../../../fixtures/stop_killer.json");
const ANTAGONIST: &str = include_str!("../../../fixtures/stop_antagonist.json");
const THREE: &str = include_str!("../../../fixtures/three_player_stop.json");

fn load(json: &str) -> *mut SpeGame {
    let json = CString::new(json).unwrap();
    let mut game = ptr::null_mut();
    let status = unsafe { spe_game_from_json(json.as_ptr(), &mut game) };
    assert_eq!(status, SpeStatus::Ok);
    assert!(!game.is_null());
    game
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(spe_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn killer_is_reported() {
    let game = load(KILLER);
    unsafe {
        let mut k = SpeKiller::default();
        let mut found = false;
        assert_eq!(spe_find_killer(game, &mut k, &mut found), SpeStatus::Ok);
        assert!(found);
        assert_eq!(k, SpeKiller { a: 0, b: 1, x: 0, y: 1, z: 2 });
        let mut cert = ptr::null_mut();
        assert_eq!(spe_solve(game, SpeMode::Any, &mut cert), SpeStatus::Killer);
        assert!(cert.is_null());
        assert!(last_error().contains("killer"));
        spe_game_free(game);
    }
}

#[test]
fn solve_then_verify() {
    let game = load(ANTAGONIST);
    unsafe {
        assert_eq!(spe_game_outcome_count(game), 3);
        assert_eq!(spe_game_state_count(game), 6);
        let mut cert = ptr::null_mut();
        assert_eq!(spe_solve(game, SpeMode::GpSpe, &mut cert), SpeStatus::Ok);
        assert!(spe_certificate_root_outcome(game, cert) < 3);
        let json = spe_certificate_json(cert);
        let mut holds = false;
        assert_eq!(spe_verify_profile(game, json, SpeMode::GpSpe, &mut holds), SpeStatus::Ok);
        assert!(holds);
        let mut count = 0;
        assert_eq!(spe_oracle_spe_count(game, 0, 1_000_000, &mut count), SpeStatus::Ok);
        assert!(count >= 1);
        spe_certificate_free(cert);
        spe_game_free(game);
    }
}

#[test]
fn three_player_game_is_unsupported_and_has_no_spe() {
    let game = load(THREE);
    unsafe {
        let mut cert = ptr::null_mut();
        assert_eq!(spe_solve(game, SpeMode::Any, &mut cert), SpeStatus::Unsupported);
        let mut count = 1;
        assert_eq!(spe_oracle_spe_count(game, 2, 1_000_000, &mut count), SpeStatus::Ok);
        assert_eq!(count, 0);
        assert_eq!(spe_oracle_spe_count(game, 2, 3, &mut count), SpeStatus::Resource);
        spe_game_free(game);
    }
}

#[test]
fn bad_input_and_null_arguments() {
    unsafe {
        let bad = CString::new("{\"players\": []").unwrap();
        let mut game = ptr::null_mut();
        assert_eq!(spe_game_from_json(bad.as_ptr(), &mut game), SpeStatus::Input);
        assert!(game.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(spe_game_from_json(ptr::null(), &mut game), SpeStatus::NullArgument);
        let mut found = false;
        assert_eq!(spe_find_killer(ptr::null(), ptr::null_mut(), &mut found), SpeStatus::NullArgument);
        spe_game_free(ptr::null_mut());
        spe_certificate_free(ptr::null_mut());
    }
}

#[test]
fn bad_profile_is_an_input_error() {
    let game = load(ANTAGONIST);
    unsafe {
        let junk = CString::new("{\"choices\": [{\"state\": \"nowhere\", \"next\": \"a1@{a1}\"}]}").unwrap();
        let mut holds = true;
        assert_eq!(spe_verify_profile(game, junk.as_ptr(), SpeMode::Any, &mut holds), SpeStatus::Input);
        spe_game_free(game);
    }
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spe.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["spe_game_from_json", "spe_solve", "spe_verify_profile", "SPE_STATUS_KILLER", "SpeKiller"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() else {
        eprintln!("no C compiler available; skipping compile check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
