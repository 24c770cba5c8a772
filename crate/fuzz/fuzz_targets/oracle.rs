#![no_main]

use istruct::ideals::{self, IdealOracle, OracleKind};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(oracle) = serde_json::from_slice::<IdealOracle>(data) else {
        return;
    };
    let _ = match oracle.kind() {
        OracleKind::Real => ideals::complexify_ideal(&oracle),
        OracleKind::Complex => ideals::realify_ideal(&oracle).and_then(|r| ideals::complexify_ideal(&r)),
    };
});
