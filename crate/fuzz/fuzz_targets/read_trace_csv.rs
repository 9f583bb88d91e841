#![no_main]

use capacity_lln::output::read_trace_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_trace_csv(data);
});
