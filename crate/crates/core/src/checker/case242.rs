//! The `(2,4,2)` case study: the quadratic relation between the `L`
//! generators, the extra invariant `D`, shift identities for the minors and
//! the evaluation table on the family `Y_{a,b,c}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{independence_rank, is_n_invariant, one_param_transform};
use crate::exactpoly::{Monomial, Polynomial, Var};
use crate::invgen::{GeneratorId, GeneratorSet};
use crate::rootcomb::{find_pair, AdmissiblePair, ParabolicType, Root};

const ALPHA: [Root; 2] = [Root { i: 2, j: 3 }, Root { i: 1, j: 4 }];
const BETA: [Root; 2] = [Root { i: 6, j: 7 }, Root { i: 5, j: 8 }];

/// Entries of `Y_{a,b,c}`; every other position is zero.
const Y_ENTRIES: [((usize, usize), &str); 8] = [
    ((1, 3), "a1"),
    ((2, 4), "a2"),
    ((3, 7), "c11"),
    ((3, 8), "c12"),
    ((4, 7), "c21"),
    ((4, 8), "c22"),
    ((5, 8), "b2"),
    ((6, 7), "b1"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// `L12*L21 - L11*L22 - sign*M1*N1*D == 0` for this sign; 0 if neither.
    pub sign: i8,
    pub holds: bool,
}

/// `T_k M_(a,k+1) = M_(a,k+1) + t M_(a,k)` and
/// `T_k M_(k,b') = M_(k,b') - t M_(k+1,b')` for `b <= k < a'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub xi: Root,
    pub xi_prime: Root,
    pub k: usize,
    pub row: bool,
    pub column: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub id: String,
    pub computed: String,
    pub expected: String,
    /// `computed = sign * expected`; 0 when they differ otherwise.
    pub sign: i8,
    /// The sign must be `+1`.
    pub exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case242Report {
    #[serde(rename = "type")]
    pub parabolic_type: Vec<usize>,
    pub seed: u64,
    pub identity: IdentityCheck,
    pub d_invariant: bool,
    pub shifts: Vec<ShiftCheck>,
    pub table: Vec<TableRow>,
    pub jacobian_generators: usize,
    pub jacobian_rank: usize,
    pub pass: bool,
}

fn sym(factors: &[&'static str]) -> Polynomial {
    Polynomial::term(
        crate::exactpoly::rat(1),
        Monomial::from_factors(factors.iter().map(|s| (Var::Symbol(s), 1))),
    )
}

fn pair(set: &GeneratorSet, i: usize, j: usize) -> AdmissiblePair {
    find_pair(set.pairs(), ALPHA[i], BETA[j]).expect("pair of the (2,4,2) base")
}

fn sign_of(computed: &Polynomial, expected: &Polynomial) -> i8 {
    if computed == expected {
        1
    } else if *computed == -expected {
        -1
    } else {
        0
    }
}

/// Values on `Y_{a,b,c}` as printed, in the order
/// `M1, M2, N1, N2, L11, L12, L21, L22, D`.
fn expected_table() -> Vec<(&'static str, Polynomial, bool)> {
    let d = &sym(&["a1", "a2", "c11", "c22"]) - &sym(&["a1", "a2", "c12", "c21"]);
    vec![
        ("M1", Polynomial::zero(), false),
        ("M2", -sym(&["a1", "a2"]), false),
        ("N1", sym(&["b1"]), false),
        ("N2", sym(&["b1", "b2"]), false),
        ("L11", sym(&["a2", "c21"]), true),
        ("L12", -sym(&["a2", "b1", "c22"]), false),
        ("L21", -sym(&["a1", "a2", "c21"]), false),
        ("L22", sym(&["a1", "a2", "b1", "c22"]), false),
        ("D", d, true),
    ]
}

pub fn shift_checks(set: &GeneratorSet) -> Vec<ShiftCheck> {
    let ty = set.parabolic_type();
    let t = Polynomial::var(Var::Deform);
    let m = |i: usize, j: usize| set.minor(Root::new(i, j)).expect("nilradical root");
    let mut out = Vec::new();
    for q in set.pairs() {
        let (a, b) = (q.xi.i, q.xi.j);
        let (a2, b2) = (q.xi_prime.i, q.xi_prime.j);
        for k in b..a2 {
            let row_target = m(a, k + 1);
            let row = one_param_transform(ty, k, &row_target).expect("valid k")
                == &row_target + &(&t * &m(a, k));
            let col_target = m(k, b2);
            let column = one_param_transform(ty, k, &col_target).expect("valid k")
                == &col_target - &(&t * &m(k + 1, b2));
            out.push(ShiftCheck {
                xi: q.xi,
                xi_prime: q.xi_prime,
                k,
                row,
                column,
            });
        }
    }
    out
}

pub fn case242_report(seed: u64) -> Case242Report {
    let ty: ParabolicType = "2,4,2".parse().expect("valid type");
    let set = GeneratorSet::build(&ty);
    let get = |id: &GeneratorId| set.get(id).expect("generator present").clone();
    let m1 = get(&GeneratorId::Base(ALPHA[0]));
    let n1 = get(&GeneratorId::Base(BETA[0]));
    let d = get(&GeneratorId::Extra("D".into()));
    let l = |i: usize, j: usize| get(&GeneratorId::pair(&pair(&set, i, j)));

    let lhs = &(&l(0, 1) * &l(1, 0)) - &(&l(0, 0) * &l(1, 1));
    let rhs = &(&m1 * &n1) * &d;
    let sign = sign_of(&lhs, &rhs);
    let identity = IdentityCheck {
        sign,
        holds: sign != 0,
    };
    let d_invariant = is_n_invariant(&ty, &d).expect("D lives on the nilradical");

    let assignment: HashMap<Var, Polynomial> = crate::rootcomb::nilradical_roots(&ty)
        .into_iter()
        .map(|r| {
            let img = Y_ENTRIES
                .iter()
                .find(|(pos, _)| *pos == (r.i, r.j))
                .map_or_else(Polynomial::zero, |(_, s)| sym(&[s]));
            (Var::entry(r.i, r.j), img)
        })
        .collect();
    let ids = [
        GeneratorId::Base(ALPHA[0]),
        GeneratorId::Base(ALPHA[1]),
        GeneratorId::Base(BETA[0]),
        GeneratorId::Base(BETA[1]),
        GeneratorId::pair(&pair(&set, 0, 0)),
        GeneratorId::pair(&pair(&set, 0, 1)),
        GeneratorId::pair(&pair(&set, 1, 0)),
        GeneratorId::pair(&pair(&set, 1, 1)),
        GeneratorId::Extra("D".into()),
    ];
    let table: Vec<TableRow> = ids
        .iter()
        .zip(expected_table())
        .map(|(id, (name, expected, exact))| {
            let computed = get(id).substitute(&assignment);
            let sign = sign_of(&computed, &expected);
            TableRow {
                name: name.to_string(),
                id: id.to_string(),
                computed: computed.to_string(),
                expected: expected.to_string(),
                sign,
                exact,
                pass: if exact { sign == 1 } else { sign != 0 },
            }
        })
        .collect();

    let all: Vec<&Polynomial> = set.all().into_iter().map(|(_, p)| p).collect();
    let jacobian_rank = independence_rank(&ty, &all, seed);
    let shifts = shift_checks(&set);
    let pass = identity.holds
        && d_invariant
        && shifts.iter().all(|s| s.row && s.column)
        && table.iter().all(|r| r.pass)
        && jacobian_rank == all.len() - 1;
    Case242Report {
        parabolic_type: ty.sizes().to_vec(),
        seed,
        identity,
        d_invariant,
        shifts,
        table,
        jacobian_generators: all.len(),
        jacobian_rank,
        pass,
    }
}
