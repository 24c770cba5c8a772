#![no_main]

use istruct::pelczynski::{self, ChainDerivation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(chain) = serde_json::from_slice::<ChainDerivation>(data) {
        let _ = pelczynski::check_derivation(&chain);
    }
});
