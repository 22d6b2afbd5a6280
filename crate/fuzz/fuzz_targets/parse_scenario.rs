#![no_main]

use libfuzzer_sys::fuzz_target;
use oscequiv_cli::scenario::parse_scenario_str;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_scenario_str(text, "fuzz.toml");
    }
});
