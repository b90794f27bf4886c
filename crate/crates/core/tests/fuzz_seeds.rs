//! Replays the checked-in fuzz corpus through the same checks the fuzz
//! targets make, so regressions show up without a fuzzing toolchain.

use std::path::PathBuf;

use e0_core::descriptor::CurveDescriptor;
use e0_core::local_field::{FieldSpec, KElement, LocalField};

fn corpus(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let bytes = std::fs::read(&path).unwrap();
            (path, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn descriptor_seeds_round_trip() {
    for (path, bytes) in corpus("descriptor") {
        let text = std::str::from_utf8(&bytes).unwrap();
        let d = CurveDescriptor::parse(text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(CurveDescriptor::from_value(&d.to_json()).unwrap(), d, "{}", path.display());
        if let Ok(e) = d.curve(Some(6)) {
            d.curve_points(e.field()).unwrap();
        }
    }
}

#[test]
fn reduction_seeds_normalize() {
    for (path, bytes) in corpus("reduction") {
        let d = CurveDescriptor::parse(std::str::from_utf8(&bytes).unwrap()).unwrap();
        let Ok(e) = d.curve(Some(8)) else { continue };
        if let Ok(rt) = e.reduction_type() {
            if rt.is_additive() {
                let (model, _) = e.normalize_additive().unwrap_or_else(|err| panic!("{}: {err}", path.display()));
                assert!(model.is_normalized());
            }
        }
    }
}

#[test]
fn element_seeds_round_trip() {
    let eis = FieldSpec::Eisenstein {
        poly: vec![(-2).into(), 0.into(), 1.into()],
    };
    let fields = [
        LocalField::new(3, &FieldSpec::Unramified { n: 1, poly: None }, Some(10)).unwrap(),
        LocalField::new(2, &FieldSpec::Unramified { n: 2, poly: None }, Some(10)).unwrap(),
        LocalField::new(2, &eis, Some(10)).unwrap(),
    ];
    for (path, bytes) in corpus("element_json") {
        let (sel, rest) = bytes.split_first().unwrap();
        let field = &fields[*sel as usize % fields.len()];
        let v: serde_json::Value = serde_json::from_slice(rest).unwrap();
        let x = KElement::from_json(field, &v).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(KElement::from_json(field, &x.to_json()).unwrap().eq_at_precision(&x));
    }
}

#[test]
fn hostile_descriptors_are_rejected_cheaply() {
    let long = format!(r#"{{"p": 3, "a": [0, 0, 0, 0, "{}"]}}"#, "9".repeat(5000));
    for text in [
        long.as_str(),
        r#"{"p": 18446744073709551557, "a": [0, 0, 0, 0, 1]}"#,
        r#"{"p": 2, "field": {"n": 30}, "a": [0, 0, 0, 0, 1]}"#,
        r#"{"p": 3, "a": [0, 0, 0, 0, 1], "precision": 1000000}"#,
        r#"{"p": 3, "a": [0, 0, 0, 0, 1], "points": [{"x": 1}]}"#,
        r#"{"p": 2, "field": {"kind": "eisenstein", "poly": [1, 0, 1]}, "a": [0, 0, 0, 0, 1]}"#,
    ] {
        let start = std::time::Instant::now();
        let outcome = CurveDescriptor::parse(text).and_then(|d| d.curve(None));
        assert!(start.elapsed().as_secs() < 2, "{text}");
        assert!(outcome.is_err(), "{text}");
    }
}
