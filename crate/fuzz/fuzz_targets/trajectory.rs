#![no_main]

use libfuzzer_sys::fuzz_target;
use noisyperc::ingest::parse_trajectory;
use noisyperc::Normalization;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(t) = parse_trajectory(text, None) else {
        return;
    };
    assert!(t.len() >= 2);
    assert_eq!(t.s1.len(), t.s2.len());
    for (&a, &b) in t.s1.iter().zip(&t.s2) {
        assert!(a >= 1 && a >= b && a + b <= t.n);
    }
    for norm in [Normalization::ByVertices, Normalization::ByPairs] {
        let _ = t.gcc_series(norm);
    }
});
