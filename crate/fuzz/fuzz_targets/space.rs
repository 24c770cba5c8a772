#![no_main]

use istruct::{NormedSpace, Vector};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(space) = serde_json::from_slice::<NormedSpace>(data) else {
        return;
    };
    // Accepted descriptors must evaluate without panicking.
    if space.dim() <= 16 {
        let x = Vector::from_fn(space.dim(), |i, _| (i as f64 + 1.0).sin());
        let _ = space.norm(&x);
        let _ = space.gram();
    }
    let text = serde_json::to_string(&space).expect("serializes");
    let back: NormedSpace = serde_json::from_str(&text).expect("own output parses");
    assert_eq!(back, space);
});
