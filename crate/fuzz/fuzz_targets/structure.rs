#![no_main]

use istruct::ComplexStructure;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = serde_json::from_slice::<ComplexStructure>(data) {
        let a = s.operator();
        assert_eq!(a.nrows(), s.dim());
        assert_eq!(a.ncols(), s.dim());
    }
});
