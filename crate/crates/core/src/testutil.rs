//! Fixtures shared by unit tests.

use std::sync::Arc;

use crate::group::{FiniteGroup, GroupRef};
use crate::measure::ProbMeasure;
use crate::scalar::{rational, Rational};

/// Z_2 × Z_3 written multiplicatively as words a^x b^y, listed as
/// {e, a, b², ab, b, ab²}.
pub const SIX_MIXED_ORDER: [&str; 6] = ["e", "a", "b2", "ab", "b", "ab2"];

/// The same group listed coset by coset: {e, b, b², a, ab, ab²}.
pub const SIX_COSET_ORDER: [&str; 6] = ["e", "b", "b2", "a", "ab", "ab2"];

fn word(label: &str) -> (u8, u8) {
    let x = u8::from(label.starts_with('a'));
    let y = if label.ends_with("b2") {
        2
    } else if label.ends_with('b') {
        1
    } else {
        0
    };
    (x, y)
}

pub fn z2z3_words(order: &[&str]) -> FiniteGroup {
    let elems: Vec<(u8, u8)> = order.iter().map(|l| word(l)).collect();
    FiniteGroup::from_operation(order.iter().map(|s| s.to_string()).collect(), &elems, |p, q| {
        ((p.0 + q.0) % 2, (p.1 + q.1) % 3)
    })
    .unwrap()
}

pub fn z3() -> GroupRef {
    Arc::new(FiniteGroup::cyclic(3).unwrap())
}

pub fn r(num: i64, den: i64) -> Rational {
    rational(num, den)
}

pub fn exact(group: &GroupRef, w: &[(i64, i64)]) -> ProbMeasure<Rational> {
    ProbMeasure::new(group.clone(), w.iter().map(|&(a, b)| r(a, b)).collect()).unwrap()
}

/// ν = (1/3, 1/4, 5/12) on Z_3.
pub fn z3_nu() -> ProbMeasure<Rational> {
    exact(&z3(), &[(1, 3), (1, 4), (5, 12)])
}

/// ν = αδ_e + (1−α)δ_b on the six-element group in the given listing.
pub fn six_nu(group: &GroupRef, alpha: Rational) -> ProbMeasure<Rational> {
    let mut w = vec![r(0, 1); 6];
    w[group.index_of("e").unwrap()] = alpha.clone();
    w[group.index_of("b").unwrap()] = r(1, 1) - alpha;
    ProbMeasure::new(group.clone(), w).unwrap()
}
