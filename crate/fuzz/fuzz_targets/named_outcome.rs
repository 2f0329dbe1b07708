#![no_main]

use libfuzzer_sys::fuzz_target;
use mcpnet::io::{format_named_outcome, net_from_json, parse_named_outcome};

const NET: &str = r#"{"features":[
  {"name":"Main","parents":[],"cpt":[{"cond":[],"prefer":0}],"values":["m","f"]},
  {"name":"Wine","parents":["Main"],"cpt":[{"cond":[0],"prefer":0},{"cond":[1],"prefer":1}],"values":["r","w"]},
  {"name":"Cake","parents":[],"cpt":[{"cond":[],"prefer":1}]}
]}"#;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let net = net_from_json(NET).unwrap();
    if let Ok(o) = parse_named_outcome(&net, text) {
        assert_eq!(parse_named_outcome(&net, &format_named_outcome(&net, &o)).unwrap(), o);
    }
});
