#![no_main]

use libfuzzer_sys::fuzz_target;
use mcpnet::io::parse_outcome;
use mcpnet::Outcome;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(o) = text.parse::<Outcome>() {
        assert_eq!(o.to_string(), o.to_string().trim());
        assert_eq!(parse_outcome(&o.to_string(), o.len()).unwrap(), o);
    }
    let _ = parse_outcome(text, text.trim().len());
});
