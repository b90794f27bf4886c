#![no_main]

use std::sync::{Arc, OnceLock};

use e0_core::local_field::{FieldSpec, KElement, LocalField};
use libfuzzer_sys::fuzz_target;

fn fields() -> &'static [Arc<LocalField>] {
    static FIELDS: OnceLock<Vec<Arc<LocalField>>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        let eis = FieldSpec::Eisenstein {
            poly: vec![(-2).into(), 0.into(), 1.into()],
        };
        vec![
            LocalField::new(3, &FieldSpec::Unramified { n: 1, poly: None }, Some(10)).unwrap(),
            LocalField::new(2, &FieldSpec::Unramified { n: 2, poly: None }, Some(10)).unwrap(),
            LocalField::new(2, &eis, Some(10)).unwrap(),
        ]
    })
}

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else {
        return;
    };
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(rest) else {
        return;
    };
    let fields = fields();
    let field = &fields[selector as usize % fields.len()];
    if let Ok(x) = KElement::from_json(field, &v) {
        let back = KElement::from_json(field, &x.to_json()).expect("re-parse of to_json");
        assert!(back.eq_at_precision(&x));
        let _ = x.mul(&x).add(&x);
        let _ = x.inv();
    }
});
