//! Replays the fuzz corpus through the same checks the fuzz targets make.

use std::path::PathBuf;

use nilorbit::exactpoly::{parse_point_json, parse_rational, MatrixPoint, Polynomial};
use nilorbit::rootcomb::{parse_diagram, ParabolicType};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| String::from_utf8_lossy(&std::fs::read(e.unwrap().path()).unwrap()).into_owned())
        .collect();
    assert!(!out.is_empty(), "{}", dir.display());
    out.sort();
    out
}

#[test]
fn type_seeds() {
    let mut ok = 0;
    for s in seeds("parse_type") {
        if let Ok(t) = s.parse::<ParabolicType>() {
            assert_eq!(t.to_string().parse::<ParabolicType>().unwrap(), t);
            ok += 1;
        }
    }
    assert!(ok >= 3);
}

#[test]
fn rational_seeds() {
    for s in seeds("parse_rational") {
        if let Ok(q) = parse_rational(&s) {
            assert_eq!(parse_rational(&q.to_string()).unwrap(), q, "{s}");
        }
    }
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn polynomial_seeds() {
    for s in seeds("parse_polynomial") {
        if let Ok(p) = s.parse::<Polynomial>() {
            assert_eq!(p.to_string().parse::<Polynomial>().unwrap(), p, "{s}");
        }
    }
}

#[test]
fn diagram_seeds() {
    let mut ok = 0;
    for s in seeds("parse_diagram") {
        ok += parse_diagram(&s).is_ok() as usize;
    }
    assert_eq!(ok, 3);
}

#[test]
fn point_seeds() {
    let t: ParabolicType = "2,2,2".parse().unwrap();
    for s in seeds("parse_point") {
        let _ = parse_point_json(&s);
        let _ = MatrixPoint::from_json(&t, &s);
    }
}
