#![no_main]

use libfuzzer_sys::fuzz_target;
use stegnet::comms::prob_to_additive;
use stegnet::parse_graph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_graph(text) else { return };
    if let Ok(risk) = prob_to_additive(&g) {
        assert_eq!(risk.edge_count(), g.edge_count());
        assert!(risk.edges().all(|e| e.weight >= 0.0 && e.weight.is_finite()));
    }
});
