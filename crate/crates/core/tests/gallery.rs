//! The gallery: documented failure sets, and the shipped JSON files in
//! `gallery/` at the workspace root. Run with `CQSTAR_BLESS=1` to rewrite
//! the files after an intentional generator change.

use std::path::PathBuf;

use cqstar::algebra::{check_banach_conditions, validate_spec};
use cqstar::gallery::{entry, FORMS, GALLERY};
use cqstar::hcq::{check_hcq, hcq_to_strict};
use cqstar::io::{algebra_to_json, form_to_json, parse_algebra_str};
use cqstar::modular::{check_left_hilbert, quasi_unit};
use cqstar::report::failures;
use cqstar::Settings64;

fn gallery_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gallery")
}

#[test]
fn failure_sets_match_documentation() {
    let s = Settings64::default();
    for e in GALLERY {
        let spec = e.spec();
        assert!(validate_spec(&spec, &s).is_valid(), "{}", e.name);
        let mut checks = check_banach_conditions(&spec, &s).checks;
        checks.extend(check_left_hilbert(&spec, &s));
        let hcq = check_hcq(&spec, &s);
        checks.extend(hcq.checks.clone());
        if hcq.is_hcq {
            checks.extend(hcq_to_strict(&spec, &s).unwrap().checks);
        }
        let mut got = failures(&checks);
        got.sort_unstable();
        let mut want = e.expected_failures.to_vec();
        want.sort_unstable();
        assert_eq!(got, want, "{}", e.name);
    }
}

#[test]
fn zero_product_has_no_quasi_unit() {
    let spec = entry("zero_product").unwrap().spec();
    assert!(quasi_unit(&spec, &Settings64::default()).is_none());
}

#[test]
fn shipped_files_match_generators() {
    let dir = gallery_dir();
    let bless = std::env::var_os("CQSTAR_BLESS").is_some();
    let files = GALLERY
        .iter()
        .map(|e| (format!("{}.json", e.name), algebra_to_json(&e.spec())))
        .chain(
            FORMS
                .iter()
                .map(|f| (format!("{}.form.json", f.name), form_to_json(&(f.build)()))),
        );
    for (name, text) in files {
        let path = dir.join(&name);
        if bless {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let shipped =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(shipped, text, "{name} is stale; rerun with CQSTAR_BLESS=1");
    }
}

#[test]
fn shipped_algebras_round_trip() {
    let s = Settings64::default();
    for e in GALLERY {
        let text = algebra_to_json(&e.spec());
        let back = parse_algebra_str(&text, &s).unwrap();
        assert_eq!(back, e.spec(), "{}", e.name);
        assert_eq!(algebra_to_json(&back), text, "{}", e.name);
    }
}
