#![no_main]

use capacity_lln::capacity::{check_axioms, check_total_monotonicity};
use capacity_lln::document::parse_capacity_table;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok((table, _)) = parse_capacity_table(data) else {
        return;
    };
    // arbitrary tables may violate the axioms; the checks must still terminate cleanly
    if check_axioms(&table).passed {
        let _ = check_total_monotonicity(&table, 3);
    }
});
