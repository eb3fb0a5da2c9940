#![no_main]

use libfuzzer_sys::fuzz_target;
use noisyperc::infer::{Direction, Orientation};
use noisyperc::{Model, Normalization, StatisticKind};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let _ = s.parse::<Model>();
    let _ = s.parse::<Direction>();
    let _ = s.parse::<Orientation>();
    if let Ok(n) = s.parse::<Normalization>() {
        assert_eq!(n.as_str().parse::<Normalization>().unwrap(), n);
    }
    let _ = s.parse::<StatisticKind>();
});
