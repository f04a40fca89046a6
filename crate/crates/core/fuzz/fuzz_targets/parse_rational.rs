#![no_main]

use libfuzzer_sys::fuzz_target;
use nilorbit::exactpoly::parse_rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(s) {
        assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }
});
