#![no_main]
use libfuzzer_sys::fuzz_target;

use sbm_recovery::io::{parse_clusters, write_clusters};

fuzz_target!(|data: &[u8]| {
    // first byte picks the universe size
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let n = usize::from(n);
    if let Ok(clusters) = parse_clusters(text, n) {
        assert!(clusters.iter().flatten().all(|&v| v < n));
        let back = parse_clusters(&write_clusters(&clusters), n).expect("writer output parses");
        // empty lines are skipped on the way back in
        let nonempty: Vec<_> = clusters.into_iter().filter(|c| !c.is_empty()).collect();
        assert_eq!(back, nonempty);
    }
});
