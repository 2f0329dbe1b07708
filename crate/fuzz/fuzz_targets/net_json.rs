#![no_main]

use libfuzzer_sys::fuzz_target;
use mcpnet::io::{net_from_json, net_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(net) = net_from_json(text) {
        let again = net_from_json(&net_to_json(&net)).expect("serialized nets parse");
        assert_eq!(again, net);
    }
});
