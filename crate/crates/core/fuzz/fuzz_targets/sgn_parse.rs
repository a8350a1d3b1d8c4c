#![no_main]

use libfuzzer_sys::fuzz_target;
use stegnet::{parse_graph, serialize_graph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_graph(text) {
        let out = serialize_graph(&g);
        let back = parse_graph(&out).expect("serialized graph reparses");
        assert_eq!(back, g);
        assert_eq!(serialize_graph(&back), out);
    }
});
