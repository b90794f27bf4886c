#![no_main]

use e0_core::descriptor::CurveDescriptor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = CurveDescriptor::parse(text) else {
        return;
    };
    // serialization must round-trip
    let again = CurveDescriptor::from_value(&d.to_json()).expect("re-parse of to_json");
    assert_eq!(again, d);
    // small fixed precision keeps each input cheap
    if let Ok(e) = d.curve(Some(6)) {
        let _ = d.curve_points(e.field());
        let _ = e.discriminant();
    }
});
