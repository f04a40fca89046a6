//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use nilorbit::checker::{
    case242_report, independence_rank, is_n_invariant, root_corank, weight_corank,
};
use nilorbit::exactpoly::Polynomial;
use nilorbit::invgen::{l_poly, minor_poly, GeneratorSet, SliceSolver};
use nilorbit::orbitlab::{max_orbit_dim, verify_unique_intersection};
use nilorbit::rootcomb::{admissible_pairs, compute_base, find_pair, ParabolicType, Root};
use nilorbit::sampling::Sampler;

const SAMPLE_TYPES: [&str; 4] = ["2,1,3,2", "2,2,2,1,1", "2,2,1,1", "2,4,2"];
const SEEDS: [u64; 3] = [11, 12, 13];

type Outcome = Result<(), String>;

fn ty(s: &str) -> ParabolicType {
    s.parse().unwrap()
}

fn roots(list: &[(usize, usize)]) -> BTreeSet<Root> {
    list.iter().map(|&(i, j)| Root::new(i, j)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

type DiagramCase<'a> = (&'a str, usize, &'a [(usize, usize)], &'a [(usize, usize)]);

fn diagrams() -> Outcome {
    let cases: [DiagramCase; 4] = [
        (
            "2,1,3,2",
            0,
            &[(2, 3), (3, 4), (1, 5), (6, 7), (5, 8)],
            &[(4, 7), (4, 8), (5, 7)],
        ),
        (
            "2,2,2,1,1",
            0,
            &[(2, 3), (1, 4), (4, 5), (3, 6), (6, 7), (7, 8)],
            &[(3, 5), (5, 7)],
        ),
        // drawn as the trailing part of an 8x8 matrix
        ("2,2,1,1", 2, &[(4, 5), (3, 6), (6, 7), (7, 8)], &[(5, 7)]),
        (
            "2,4,2",
            0,
            &[(2, 3), (1, 4), (6, 7), (5, 8)],
            &[(3, 7), (3, 8), (4, 7), (4, 8)],
        ),
    ];
    for (s, shift, base, phi) in cases {
        let t = ty(s);
        let b = compute_base(&t);
        let moved = |r: &Root| Root::new(r.i + shift, r.j + shift);
        let got_base: BTreeSet<Root> = b.roots().iter().map(moved).collect();
        let got_phi: BTreeSet<Root> = admissible_pairs(&t, &b)
            .iter()
            .map(|q| moved(&q.phi))
            .collect();
        ensure(got_base == roots(base), || {
            format!("{s}: base {got_base:?}")
        })?;
        ensure(got_phi == roots(phi), || {
            format!("{s}: crosses {got_phi:?}")
        })?;
    }
    Ok(())
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n.min(max))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn closed_form_base() -> Outcome {
    let mut count = 0;
    for n in 1..=12 {
        for sizes in partitions(n, n) {
            let t = ParabolicType::new(sizes.clone()).unwrap();
            let mut expected = BTreeSet::new();
            let mut m = 0;
            for i in 0..sizes.len() - 1 {
                m += sizes[i];
                for j in 1..=sizes[i + 1] {
                    expected.insert(Root::new(m - j + 1, m + j));
                }
            }
            let got: BTreeSet<Root> = compute_base(&t).roots().iter().copied().collect();
            ensure(got == expected, || format!("{sizes:?}: {got:?}"))?;
            let tail: usize = sizes[1..].iter().sum();
            ensure(got.len() == tail, || {
                format!("{sizes:?}: |S| = {}", got.len())
            })?;
            count += 1;
        }
    }
    ensure(
        count == 1 + 2 + 3 + 5 + 7 + 11 + 15 + 22 + 30 + 42 + 56 + 77,
        || format!("enumerated {count} types"),
    )
}

fn det2(a: (usize, usize), b: (usize, usize), c: (usize, usize), d: (usize, usize)) -> Polynomial {
    let x = |p: (usize, usize)| Polynomial::x(p.0, p.1);
    &(&x(a) * &x(d)) - &(&x(b) * &x(c))
}

fn same_up_to_sign(a: &Polynomial, b: &Polynomial) -> bool {
    !a.is_zero() && (a == b || *a == -b)
}

fn generator_fidelity() -> Outcome {
    let t = ty("2,4,2");
    let base = compute_base(&t);
    let pairs = admissible_pairs(&t, &base);
    let x = |i, j| Polynomial::x(i, j);
    let m2 = det2((1, 3), (1, 4), (2, 3), (2, 4));
    let n2 = det2((5, 7), (5, 8), (6, 7), (6, 8));
    let m15 = det2((1, 3), (1, 5), (2, 3), (2, 5));
    let m16 = det2((1, 3), (1, 6), (2, 3), (2, 6));
    let m48 = det2((4, 7), (4, 8), (6, 7), (6, 8));
    let m38 = det2((3, 7), (3, 8), (6, 7), (6, 8));
    let printed_l11 = [(3, 7), (4, 7), (5, 7), (6, 7)]
        .iter()
        .zip([(2, 3), (2, 4), (2, 5), (2, 6)])
        .map(|(&(i, j), (k, l))| &x(k, l) * &x(i, j))
        .sum::<Polynomial>();
    let printed_l12 = &(&(&m2 * &x(4, 7)) + &(&m15 * &x(5, 7))) + &(&m16 * &x(6, 7));
    let printed_l21 = &(&(&x(2, 3) * &m38) + &(&x(2, 4) * &m48)) + &(&x(2, 5) * &n2);
    let printed_l22 = &(&m2 * &m48) + &(&m15 * &n2);

    let minors = [
        ((2, 3), x(2, 3)),
        ((1, 4), m2),
        ((6, 7), x(6, 7)),
        ((5, 8), n2.clone()),
    ];
    for ((i, j), printed) in minors {
        let got = minor_poly(&t, &base, Root::new(i, j)).map_err(|e| e.to_string())?;
        ensure(same_up_to_sign(&got, &printed), || {
            format!("M({i},{j}) = {got}")
        })?;
    }
    // printed L_{1,2} is the pair ((1,4),(6,7)) and L_{2,1} is ((2,3),(5,8))
    let ls = [
        ((2, 3), (6, 7), printed_l11),
        ((1, 4), (6, 7), printed_l12),
        ((2, 3), (5, 8), printed_l21),
        ((1, 4), (5, 8), printed_l22),
    ];
    for (a, b, printed) in ls {
        let q = find_pair(&pairs, Root::new(a.0, a.1), Root::new(b.0, b.1))
            .map_err(|e| e.to_string())?;
        let got = l_poly(&t, &base, &q).map_err(|e| e.to_string())?;
        ensure(same_up_to_sign(&got, &printed), || {
            format!("L{a:?}{b:?} = {got}")
        })?;
    }
    Ok(())
}

fn invariance() -> Outcome {
    for s in SAMPLE_TYPES {
        let t = ty(s);
        let set = GeneratorSet::build(&t);
        let all = set.all();
        ensure(!all.is_empty(), || format!("{s}: no generators"))?;
        for (id, f) in all {
            let ok = is_n_invariant(&t, f).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{s}: {id} not invariant"))?;
        }
    }
    let d = GeneratorSet::build(&ty("2,4,2"));
    ensure(d.extras().len() == 1, || "D missing".into())
}

fn independence() -> Outcome {
    let expected = [8, 8, 5, 8];
    for (s, want) in SAMPLE_TYPES.iter().zip(expected) {
        let t = ty(s);
        let set = GeneratorSet::build(&t);
        let gens: Vec<&Polynomial> = set.generators().into_iter().map(|(_, p)| p).collect();
        ensure(gens.len() == want, || {
            format!("{s}: {} generators", gens.len())
        })?;
        for seed in SEEDS {
            let r = independence_rank(&t, &gens, seed);
            ensure(r == want, || format!("{s}: rank {r} at seed {seed}"))?;
        }
    }
    Ok(())
}

fn restriction_structure() -> Outcome {
    for s in SAMPLE_TYPES {
        let set = GeneratorSet::build(&ty(s));
        let checks = set.restriction_forms();
        ensure(checks.len() == set.generators().len(), || {
            format!("{s}: count")
        })?;
        for c in checks {
            ensure(c.pass(), || {
                format!("{s}: {} -> {} (want ±{})", c.id, c.image, c.expected)
            })?;
        }
    }
    Ok(())
}

fn orbit_dims() -> Outcome {
    let mut uncovered = Vec::new();
    for n in 1..=6 {
        for sizes in compositions(n) {
            let t = ParabolicType::new(sizes.clone()).unwrap();
            let r = max_orbit_dim(&t, 20, 7).map_err(|e| e.to_string())?;
            ensure(r.flagged == (r.max_rank > r.predicted), || {
                format!("{sizes:?}: flag")
            })?;
            if t.has_unique_slice() {
                ensure(r.max_rank == r.predicted, || {
                    format!("{sizes:?}: max {} vs {}", r.max_rank, r.predicted)
                })?;
            } else {
                uncovered.push(format!("{t}:{}/{}", r.max_rank, r.predicted));
            }
        }
    }
    println!(
        "    uncovered types (max/predicted): {}",
        uncovered.join(" ")
    );
    Ok(())
}

fn reduction() -> Outcome {
    for s in ["2,2", "2,2,1,1", "2,2,2,1,1", "3,2,1", "2,4,2"] {
        let t = ty(s);
        let set = GeneratorSet::build(&t);
        let solver = SliceSolver::new(&set).map_err(|e| e.to_string())?;
        let mut sampler = Sampler::new(2024);
        for k in 0..50 {
            let a = sampler
                .u0_point(&t, set.base())
                .map_err(|e| e.to_string())?;
            let r = verify_unique_intersection(&set, &solver, &a)
                .map_err(|e| format!("{s} #{k}: {e}"))?;
            ensure(r.on_slice, || format!("{s} #{k}: off slice"))?;
            ensure(r.invariants_preserved, || {
                format!("{s} #{k}: changed {:?}", r.changed)
            })?;
            ensure(r.matches_slice_coordinates, || {
                format!("{s} #{k}: slice coordinates differ")
            })?;
        }
    }
    Ok(())
}

fn case_study() -> Outcome {
    let r = case242_report(SEEDS[0]);
    ensure(r.identity.holds, || "quadratic relation fails".into())?;
    println!("    L12*L21 - L11*L22 = {:+}*M1*N1*D", r.identity.sign);
    ensure(r.d_invariant, || "D not invariant".into())?;
    ensure(r.table.len() == 9, || "table size".into())?;
    for row in &r.table {
        ensure(row.pass, || {
            format!("{}(Y) = {} vs {}", row.name, row.computed, row.expected)
        })?;
    }
    for name in ["L11", "D"] {
        let row = r.table.iter().find(|row| row.name == name).unwrap();
        ensure(row.sign == 1, || format!("{name} sign {}", row.sign))?;
    }
    ensure(r.jacobian_generators == 9 && r.jacobian_rank == 8, || {
        format!(
            "jacobian rank {} of {}",
            r.jacobian_rank, r.jacobian_generators
        )
    })
}

fn coranks() -> Outcome {
    let t = ty("2,4,2");
    let pairs = admissible_pairs(&t, &compute_base(&t));
    let c = weight_corank(&pairs, 8);
    ensure(c == 1, || format!("weight corank of 2,4,2 is {c}"))?;
    let mut bad = Vec::new();
    for s in SAMPLE_TYPES {
        let t = ty(s);
        let b = compute_base(&t);
        let pairs = admissible_pairs(&t, &b);
        let mut slice: Vec<Root> = b.roots().to_vec();
        slice.extend(pairs.iter().map(|q| q.phi));
        let (a, sp) = (weight_corank(&pairs, t.n()), root_corank(&slice, t.n()));
        if a != sp {
            bad.push(format!("{s}: corank(A) = {a}, corank(S+Phi) = {sp}"));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// `(golden file, arguments)`
fn golden_runs() -> Vec<(String, Vec<String>)> {
    let mut runs = Vec::new();
    for s in SAMPLE_TYPES {
        let slug = s.replace(',', "-");
        runs.push((
            format!("verify-{slug}.json"),
            vec![
                "verify".into(),
                "--type".into(),
                s.into(),
                "--seed".into(),
                "11".into(),
            ],
        ));
        runs.push((
            format!("orbit-dim-{slug}.json"),
            vec![
                "orbit-dim".into(),
                "--type".into(),
                s.into(),
                "--seed".into(),
                "7".into(),
            ],
        ));
    }
    runs.push((
        "case242.json".into(),
        vec!["case242".into(), "--seed".into(), "11".into()],
    ));
    runs
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_nilorbit");
    for (file, args) in golden_runs() {
        let run = || {
            Command::new(exe)
                .args(&args)
                .env_remove("NILORBIT_OUT_DIR")
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a.stdout == b.stdout, || format!("{file}: runs differ"))?;
        let golden = std::fs::read(golden_dir().join(&file)).map_err(|e| format!("{file}: {e}"))?;
        ensure(a.stdout == golden, || {
            format!("{file}: differs from golden copy")
        })?;
    }
    Ok(())
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria = [
        Criterion {
            name: "diagram reproduction",
            limit: Duration::from_secs(1),
            run: diagrams,
        },
        Criterion {
            name: "closed-form base",
            limit: Duration::from_secs(10),
            run: closed_form_base,
        },
        Criterion {
            name: "generator fidelity",
            limit: Duration::from_secs(1),
            run: generator_fidelity,
        },
        Criterion {
            name: "invariance",
            limit: Duration::from_secs(120),
            run: invariance,
        },
        Criterion {
            name: "independence",
            limit: Duration::from_secs(60),
            run: independence,
        },
        Criterion {
            name: "restriction monomials",
            limit: Duration::from_secs(10),
            run: restriction_structure,
        },
        Criterion {
            name: "orbit dimension",
            limit: Duration::from_secs(300),
            run: orbit_dims,
        },
        Criterion {
            name: "reduction to slice",
            limit: Duration::from_secs(120),
            run: reduction,
        },
        Criterion {
            name: "(2,4,2) case study",
            limit: Duration::from_secs(30),
            run: case_study,
        },
        Criterion {
            name: "corank",
            limit: Duration::from_secs(1),
            run: coranks,
        },
        Criterion {
            name: "determinism",
            limit: Duration::from_secs(120),
            run: determinism,
        },
    ];
    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= c.limit, || {
                format!(
                    "took {:.2}s, limit {}s",
                    elapsed.as_secs_f64(),
                    c.limit.as_secs()
                )
            })
        });
        let (tag, detail) = match &outcome {
            Ok(()) => ("PASS", String::new()),
            Err(e) => ("FAIL", format!(": {e}")),
        };
        println!(
            "criterion {:>2} {:<24} {tag} ({:.2}s){detail}",
            k + 1,
            c.name,
            elapsed.as_secs_f64()
        );
        failed += usize::from(outcome.is_err());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
