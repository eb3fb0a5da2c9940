#![no_main]

use libfuzzer_sys::fuzz_target;
use noisyperc::dyngraph::parse_edge_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(edges) = parse_edge_list(text, None) else {
        return;
    };
    let out: String = edges.iter().map(|e| format!("{} {}\n", e.lo(), e.hi())).collect();
    assert_eq!(parse_edge_list(&out, None).unwrap(), edges);
    let n = edges.iter().map(|e| e.hi() as usize + 1).max().unwrap_or(2);
    assert_eq!(parse_edge_list(text, Some(n)).unwrap(), edges);
});
