#![no_main]
use libfuzzer_sys::fuzz_target;

use sbm_recovery::io::{parse_labels_with_limit, write_labels};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse_labels_with_limit(text, 4096) {
        assert_eq!(t.sizes().iter().sum::<usize>(), t.n());
        let back = parse_labels_with_limit(&write_labels(&t), 4096).expect("writer output parses");
        assert_eq!(back.labels(), t.labels());
    }
});
