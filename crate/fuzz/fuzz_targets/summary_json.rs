#![no_main]

use capacity_lln::output::{from_json, to_json, SimulationSummary};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(summary) = from_json::<SimulationSummary>(data) else {
        return;
    };
    let text = to_json(&summary).unwrap();
    let again: SimulationSummary = from_json(&text).unwrap();
    assert_eq!(to_json(&again).unwrap(), text);
});
