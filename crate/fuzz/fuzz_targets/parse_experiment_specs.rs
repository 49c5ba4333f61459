#![no_main]
use libfuzzer_sys::fuzz_target;

use sbm_recovery::harness::{format_sizes, parse_experiment_specs, parse_sizes};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(specs) = parse_experiment_specs(text) {
        for s in &specs {
            assert!(s.validate().is_ok());
            assert!(s.repeats >= 1);
        }
    }
    if let Ok(sizes) = parse_sizes(text) {
        assert_eq!(parse_sizes(&format_sizes(&sizes)).expect("formatted sizes parse"), sizes);
    }
});
