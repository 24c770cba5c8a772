#![no_main]

use istruct::RespectingOperator;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(op) = serde_json::from_slice::<RespectingOperator>(data) {
        assert_eq!(op.matrix().shape(), (op.codomain().dim(), op.domain().dim()));
        let _ = istruct::morphisms::is_isomorphism(&op);
    }
});
