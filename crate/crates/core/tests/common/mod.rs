#![allow(dead_code)]

use std::sync::Arc;

use cs3_core::coframe::{ValueSpace, ValuedForm};
use cs3_core::lie::LieAlgebra;
use cs3_core::scalar::{int, Rational};
use proptest::prelude::*;

/// All increasing index tuples of length `degree` below `rank`.
pub fn multi_indices(rank: usize, degree: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, rank: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..rank {
            cur.push(i);
            go(i + 1, rank, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, rank, degree, &mut Vec::new(), &mut out);
    out
}

/// Number of coefficients a form of this shape needs.
pub fn coefficient_count(rank: usize, degree: usize, dim: usize) -> usize {
    multi_indices(rank, degree).len() * dim
}

/// Builds a form from a flat list of small integers, blade by blade.
pub fn form_from_ints(rank: usize, degree: usize, algebra: &Arc<LieAlgebra>, ints: &[i64]) -> ValuedForm<Rational> {
    let dim = algebra.dim();
    let terms = multi_indices(rank, degree)
        .into_iter()
        .enumerate()
        .map(|(b, idx)| (idx, (0..dim).map(|k| int(ints[b * dim + k])).collect()))
        .collect::<Vec<_>>();
    ValuedForm::from_terms(rank, degree, ValueSpace::Algebra(Arc::clone(algebra)), terms).unwrap()
}

/// A random exact form of the given degree with entries in `-3..=3`,
/// sparsified so that products stay cheap.
pub fn arb_form(
    rank: usize,
    degree: usize,
    algebra: Arc<LieAlgebra>,
) -> impl Strategy<Value = ValuedForm<Rational>> {
    let n = coefficient_count(rank, degree, algebra.dim());
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], n)
        .prop_map(move |ints| form_from_ints(rank, degree, &algebra, &ints))
}

/// A random degree in `0..=max` together with a form of that degree.
pub fn arb_graded_form(
    rank: usize,
    max_degree: usize,
    algebra: Arc<LieAlgebra>,
) -> impl Strategy<Value = ValuedForm<Rational>> {
    (0..=max_degree).prop_flat_map(move |p| arb_form(rank, p, Arc::clone(&algebra)))
}

pub fn sign(p: usize) -> Rational {
    if p.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}
