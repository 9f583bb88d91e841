#![no_main]

use capacity_lln::document::load_spec;
use capacity_lln::slln::{verify_identical_distribution, verify_pairwise_independence};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(spec) = load_spec(data) else {
        return;
    };
    let _ = spec.mass_function();
    if let (Some((product, joint)), Some(x)) = (&spec.joint, &spec.rv) {
        let x1 = x.lift_first(product).unwrap();
        let x2 = x.lift_second(product).unwrap();
        let _ = verify_pairwise_independence(joint, &x1, &x2);
        let _ = verify_identical_distribution(joint, &x1, &x2);
    }
});
