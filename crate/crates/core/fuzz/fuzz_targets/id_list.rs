#![no_main]

use libfuzzer_sys::fuzz_target;
use stegnet::cli::parse_id_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ids) = parse_id_list(text) {
        let joined = ids.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",");
        assert_eq!(parse_id_list(&joined).expect("joined list reparses"), ids);
    }
});
