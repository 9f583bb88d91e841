#![no_main]

use capacity_lln::capacity::{capacity_from_mass, check_axioms, mobius_from_capacity};
use capacity_lln::choquet::integral_interval;
use capacity_lln::document::parse_capacity_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok((mass, rv)) = parse_capacity_spec(data) else {
        return;
    };
    let nu = capacity_from_mass(&mass);
    assert!(check_axioms(&nu).passed);
    assert!(mobius_from_capacity(&nu).is_nonnegative(1e-12));
    if let Some(x) = rv {
        let i = integral_interval(&x, &nu).unwrap();
        assert!(i.lo() >= x.min() - 1e-9 && i.hi() <= x.max() + 1e-9);
    }
});
