#![no_main]

use libfuzzer_sys::fuzz_target;
use noisyperc_cli::config::parse_config;
use noisyperc_cli::{ProcessArgs, RunSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = parse_config(text) else {
        return;
    };
    if let Ok(spec) = RunSpec::resolve(&ProcessArgs::default(), None, [None, None, None], None, &file, 1) {
        let grid = spec.p.len() * spec.alpha.len() * spec.beta.len();
        if grid <= 4096 {
            for point in spec.points() {
                spec.config(point).unwrap().validate().unwrap();
            }
        }
    }
});
