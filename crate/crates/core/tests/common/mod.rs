#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use convdyn::scalar::rational;
use convdyn::{FiniteGroup, GroupRef, ProbMeasure, Rational};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn r(num: i64, den: i64) -> Rational {
    rational(num, den)
}

pub fn arc(g: FiniteGroup) -> GroupRef {
    Arc::new(g)
}

pub fn cyclic(n: usize) -> GroupRef {
    arc(FiniteGroup::cyclic(n).unwrap())
}

pub fn product(a: &GroupRef, b: &GroupRef) -> GroupRef {
    arc(FiniteGroup::product(a, b).unwrap())
}

/// Quaternion units ±1, ±i, ±j, ±k as integer 4-vectors.
pub fn quaternion() -> GroupRef {
    let units: [(&str, [i8; 4]); 8] = [
        ("1", [1, 0, 0, 0]),
        ("-1", [-1, 0, 0, 0]),
        ("i", [0, 1, 0, 0]),
        ("-i", [0, -1, 0, 0]),
        ("j", [0, 0, 1, 0]),
        ("-j", [0, 0, -1, 0]),
        ("k", [0, 0, 0, 1]),
        ("-k", [0, 0, 0, -1]),
    ];
    let labels = units.iter().map(|(l, _)| l.to_string()).collect();
    let elems: Vec<[i8; 4]> = units.iter().map(|(_, q)| *q).collect();
    arc(FiniteGroup::from_operation(labels, &elems, |p, q| {
        [
            p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
            p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
            p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
            p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
        ]
    })
    .unwrap())
}

/// The six-element abelian group listed as e, a, b², ab, b, ab².
pub fn six_mixed() -> GroupRef {
    six_group(&["e", "a", "b2", "ab", "b", "ab2"])
}

/// The same group listed coset by coset: e, b, b², a, ab, ab².
pub fn six_cosets() -> GroupRef {
    six_group(&["e", "b", "b2", "a", "ab", "ab2"])
}

fn six_group(order: &[&str]) -> GroupRef {
    let word = |l: &str| -> (u8, u8) {
        let a = u8::from(l.starts_with('a'));
        let b = match l.trim_start_matches('a') {
            "" | "e" => 0,
            "b" => 1,
            "b2" => 2,
            other => panic!("bad word {other}"),
        };
        (a, b)
    };
    let elems: Vec<(u8, u8)> = order.iter().map(|l| word(l)).collect();
    let labels = order.iter().map(|s| s.to_string()).collect();
    arc(FiniteGroup::from_operation(labels, &elems, |p, q| ((p.0 + q.0) % 2, (p.1 + q.1) % 3)).unwrap())
}

pub fn six_nu(g: &GroupRef, alpha: &Rational) -> ProbMeasure<Rational> {
    let mut w = vec![r(0, 1); 6];
    w[g.index_of("e").unwrap()] = alpha.clone();
    w[g.index_of("b").unwrap()] = r(1, 1) - alpha;
    ProbMeasure::new(g.clone(), w).unwrap()
}

pub fn exact(g: &GroupRef, w: &[(i64, i64)]) -> ProbMeasure<Rational> {
    ProbMeasure::new(g.clone(), w.iter().map(|&(a, b)| r(a, b)).collect()).unwrap()
}

pub fn z3_nu() -> ProbMeasure<Rational> {
    exact(&cyclic(3), &[(1, 3), (1, 4), (5, 12)])
}

/// The sweep family: Z_n (n ≤ 12), Z_2×Z_3, D_4, S_3, S_4.
pub fn sweep_groups() -> Vec<(String, GroupRef)> {
    let mut out: Vec<(String, GroupRef)> = (1..=12).map(|n| (format!("Z{n}"), cyclic(n))).collect();
    out.push(("Z2xZ3".into(), product(&cyclic(2), &cyclic(3))));
    out.push(("D4".into(), arc(FiniteGroup::dihedral(4).unwrap())));
    out.push(("S3".into(), arc(FiniteGroup::symmetric(3).unwrap())));
    out.push(("S4".into(), arc(FiniteGroup::symmetric(4).unwrap())));
    out
}

/// All 14 groups of order at most 8, up to isomorphism.
pub fn small_groups() -> Vec<(String, GroupRef)> {
    let z2 = cyclic(2);
    vec![
        ("Z1".into(), cyclic(1)),
        ("Z2".into(), z2.clone()),
        ("Z3".into(), cyclic(3)),
        ("Z4".into(), cyclic(4)),
        ("Z2xZ2".into(), product(&z2, &z2)),
        ("Z5".into(), cyclic(5)),
        ("Z6".into(), cyclic(6)),
        ("S3".into(), arc(FiniteGroup::symmetric(3).unwrap())),
        ("Z7".into(), cyclic(7)),
        ("Z8".into(), cyclic(8)),
        ("Z4xZ2".into(), product(&cyclic(4), &z2)),
        ("Z2xZ2xZ2".into(), product(&product(&z2, &z2), &z2)),
        ("D4".into(), arc(FiniteGroup::dihedral(4).unwrap())),
        ("Q8".into(), quaternion()),
    ]
}

/// Random measure with the given support and integer weights in 1..=9.
pub fn measure_on(g: &GroupRef, support: &[usize], rng: &mut StdRng) -> ProbMeasure<Rational> {
    let raw: Vec<i64> = support.iter().map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    let mut w = vec![r(0, 1); g.order()];
    for (&i, &x) in support.iter().zip(&raw) {
        w[i] = r(x, total);
    }
    ProbMeasure::new(g.clone(), w).unwrap()
}

pub fn random_support(n: usize, rng: &mut StdRng) -> Vec<usize> {
    let size = rng.random_range(1..=n);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut s = all[..size].to_vec();
    s.sort_unstable();
    s
}

pub fn random_measure(g: &GroupRef, rng: &mut StdRng) -> ProbMeasure<Rational> {
    let s = random_support(g.order(), rng);
    measure_on(g, &s, rng)
}

/// Σ over all pairs (i, j) of a_i b_j placed at g_i g_j.
pub fn convolve_oracle(a: &ProbMeasure<Rational>, b: &ProbMeasure<Rational>) -> Vec<Rational> {
    let g = a.group();
    let mut out = vec![r(0, 1); g.order()];
    for i in 0..g.order() {
        for j in 0..g.order() {
            out[g.mul(i, j)] += a.weight(i) * b.weight(j);
        }
    }
    out
}

/// Subgroup generated by `gens`: close under pairwise products until stable.
pub fn closure_oracle(g: &GroupRef, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    set.insert(g.identity());
    loop {
        let next: BTreeSet<usize> = set.iter().flat_map(|&x| set.iter().map(move |&y| g.mul(x, y))).collect();
        let next: BTreeSet<usize> = next.union(&set).copied().collect();
        if next == set {
            return set;
        }
        set = next;
    }
}

/// Left cosets gH as sorted sets.
pub fn left_cosets(g: &GroupRef, h: &BTreeSet<usize>) -> BTreeSet<BTreeSet<usize>> {
    (0..g.order()).map(|x| h.iter().map(|&y| g.mul(x, y)).collect()).collect()
}

/// Uniform measure on a set, built from scratch.
pub fn uniform_oracle(n: usize, set: &BTreeSet<usize>) -> Vec<Rational> {
    (0..n).map(|i| if set.contains(&i) { r(1, set.len() as i64) } else { r(0, 1) }).collect()
}

/// Parity of a permutation given by its one-line label, e.g. "213".
pub fn sign_of_label(label: &str) -> usize {
    let digits: Vec<u8> = label.bytes().collect();
    let mut inversions = 0;
    for i in 0..digits.len() {
        for j in i + 1..digits.len() {
            if digits[i] > digits[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}
