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
    let Ok(e) = d.curve(Some(8)) else {
        return;
    };
    // the singular point search enumerates the residue field
    if e.field().residue().order() > 1 << 10 {
        return;
    }
    if let Ok(rt) = e.reduction_type() {
        if rt.is_additive() {
            let (model, _) = e.normalize_additive().expect("additive curves normalize");
            assert!(model.is_normalized());
        }
    }
});
