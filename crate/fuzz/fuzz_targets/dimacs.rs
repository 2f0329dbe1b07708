#![no_main]

use libfuzzer_sys::fuzz_target;
use mcpnet::formula::parse_dimacs;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(phi) = parse_dimacs(text) {
        assert_eq!(parse_dimacs(&phi.to_dimacs()).unwrap(), phi);
    }
});
