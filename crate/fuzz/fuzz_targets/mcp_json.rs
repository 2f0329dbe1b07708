#![no_main]

use libfuzzer_sys::fuzz_target;
use mcpnet::io::{profile_from_json, profile_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(profile) = profile_from_json(text) {
        let again = profile_from_json(&profile_to_json(&profile)).expect("serialized profiles parse");
        assert_eq!(again, profile);
    }
});
