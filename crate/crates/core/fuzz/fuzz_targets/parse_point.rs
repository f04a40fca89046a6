#![no_main]

use libfuzzer_sys::fuzz_target;
use nilorbit::exactpoly::{parse_point_json, MatrixPoint};
use nilorbit::rootcomb::ParabolicType;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_point_json(s);
    let t: ParabolicType = "2,2,2".parse().unwrap();
    let _ = MatrixPoint::from_json(&t, s);
});
