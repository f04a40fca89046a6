#![no_main]

use libfuzzer_sys::fuzz_target;
use nilorbit::rootcomb::ParabolicType;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = s.parse::<ParabolicType>() {
        let again: ParabolicType = t.to_string().parse().unwrap();
        assert_eq!(again, t);
    }
});
