#![no_main]

use libfuzzer_sys::fuzz_target;
use mcpnet::formula::parse_qdimacs;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_qdimacs(text) {
        assert_eq!(parse_qdimacs(&q.to_qdimacs()).unwrap(), q);
    }
});
