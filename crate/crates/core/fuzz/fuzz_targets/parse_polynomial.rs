#![no_main]

use libfuzzer_sys::fuzz_target;
use nilorbit::exactpoly::Polynomial;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 512 {
        return;
    }
    if let Ok(p) = s.parse::<Polynomial>() {
        let again: Polynomial = p.to_string().parse().unwrap();
        assert_eq!(again, p);
    }
});
