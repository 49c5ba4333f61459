#![no_main]
use libfuzzer_sys::fuzz_target;

use sbm_recovery::io::{parse_edge_list_with_limit, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // a small cap keeps the dense adjacency allocation cheap
    if let Ok(g) = parse_edge_list_with_limit(text, 2048) {
        let back = parse_edge_list_with_limit(&write_edge_list(&g), 2048).expect("writer output parses");
        assert_eq!(back, g);
    }
});
