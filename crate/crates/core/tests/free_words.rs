//! Truncated free algebras against an operator-expansion oracle.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use nilmult_core::exactlin::{SparseVec, Subspace};
use nilmult_core::free::DEFAULT_DIM_CAP;
use nilmult_core::{catalog, lie, FreeTruncation, LeibnizAlgebra, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

type Q = Rational;
type Poly = BTreeMap<Vec<usize>, Q>;

fn add(p: &mut Poly, w: Vec<usize>, c: Q) {
    let e = p.entry(w.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&w);
    }
}

/// Right multiplication by the left-normed bracket `v`, as a polynomial:
/// `op(z) = z`, `op(v'z) = op(v') z - z op(v')`.
fn operator(v: &[usize]) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![v[0]], Q::one());
    for &z in &v[1..] {
        let mut next = Poly::new();
        for (w, c) in &p {
            let mut right = w.clone();
            right.push(z);
            add(&mut next, right, c.clone());
            let mut left = vec![z];
            left.extend(w);
            add(&mut next, left, -c.clone());
        }
        p = next;
    }
    p
}

fn oracle_bracket(u: &[usize], v: &[usize], m: usize) -> Poly {
    let mut out = Poly::new();
    if u.len() + v.len() > m {
        return out;
    }
    for (w, c) in operator(v) {
        let mut x = u.to_vec();
        x.extend(w);
        add(&mut out, x, c);
    }
    out
}

fn as_poly(f: &FreeTruncation, v: &SparseVec<Q>) -> Poly {
    v.entries()
        .iter()
        .map(|(i, c)| (f.word(*i), c.clone()))
        .collect()
}

fn free(d: usize, m: usize) -> FreeTruncation {
    FreeTruncation::new(d, m, DEFAULT_DIM_CAP).unwrap()
}

fn cached(d: usize) -> &'static FreeTruncation {
    static TWO: OnceLock<FreeTruncation> = OnceLock::new();
    static THREE: OnceLock<FreeTruncation> = OnceLock::new();
    match d {
        2 => TWO.get_or_init(|| free(2, 6)),
        _ => THREE.get_or_init(|| free(3, 4)),
    }
}

fn word(d: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..d, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn two_letter_brackets_match_oracle(u in word(2, 5), v in word(2, 5)) {
        let f = cached(2);
        let got = f.word_bracket(&u, &v).unwrap();
        prop_assert_eq!(as_poly(f, &got), oracle_bracket(&u, &v, 6));
    }

    #[test]
    fn three_letter_brackets_match_oracle(u in word(3, 3), v in word(3, 3)) {
        let f = cached(3);
        let got = f.word_bracket(&u, &v).unwrap();
        prop_assert_eq!(as_poly(f, &got), oracle_bracket(&u, &v, 4));
    }

    #[test]
    fn brackets_are_graded(u in word(2, 5), v in word(2, 5)) {
        let f = cached(2);
        let got = f.word_bracket(&u, &v).unwrap();
        for (i, _) in got.entries() {
            prop_assert_eq!(f.degree(*i), u.len() + v.len());
        }
    }

    /// Letters may go anywhere in `g_b`, whose absolute class is 4.
    #[test]
    fn evaluation_is_a_homomorphism(images in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 2)) {
        let f = free(2, 4);
        let target = Arc::new(catalog::g_b::<Q>());
        let images: Vec<SparseVec<Q>> = images
            .iter()
            .map(|v| SparseVec::from_dense(&v.iter().map(|x| Q::from_integer((*x).into())).collect::<Vec<_>>()))
            .collect();
        let h = f.evaluation_hom(&images, target.clone()).unwrap();
        prop_assert!(h.is_hom);
        for (a, img) in images.iter().enumerate() {
            prop_assert_eq!(&h.apply(&SparseVec::unit(a)), img);
        }
        let xy = f.word_index(&[0, 1]).unwrap();
        prop_assert_eq!(h.apply(&SparseVec::unit(xy)), target.bracket(&images[0], &images[1]));
    }
}

#[test]
fn small_truncations_are_leibniz() {
    for (d, m) in [(1, 5), (2, 4), (3, 3)] {
        let f = free(d, m);
        assert!(f.algebra().check_leibniz().holds, "free({d},{m})");
    }
}

#[test]
fn absolute_series_is_words_of_length_at_least_k() {
    for (d, m) in [(1, 4), (2, 3), (2, 4), (3, 3)] {
        let f = free(d, m);
        let s = lie::absolute_lower_series(f.algebra()).unwrap();
        for k in 1..=m + 1 {
            assert_eq!(*s.term(k), f.words_from_degree(k), "free({d},{m}) term {k}");
        }
        assert_eq!(s.cls, Some(m));
    }
}

#[test]
fn mixed_word_example() {
    let f = free(2, 4);
    let got = f.word_bracket(&[0, 1], &[1, 0]).unwrap();
    let xyyx = f.word_index(&[0, 1, 1, 0]).unwrap();
    let xyxy = f.word_index(&[0, 1, 0, 1]).unwrap();
    let want = SparseVec::unit(xyyx).sub(&SparseVec::unit(xyxy));
    assert_eq!(got, want);
}

#[test]
fn one_letter_four_is_g_b() {
    let f = free(1, 4);
    let g: LeibnizAlgebra = catalog::g_b();
    assert!(f.algebra().same_table(&g));
}

#[test]
fn evaluation_kernels_from_examples() {
    let ga = Arc::new(catalog::g_a::<Q>());
    let f = free(2, 4);
    let h = f
        .evaluation_hom(&[SparseVec::unit(0), SparseVec::unit(1)], ga)
        .unwrap();
    assert!(h.is_surjective().unwrap());
    assert_eq!(h.kernel().unwrap().dim(), 26);

    let q2 = Arc::new(catalog::q2::<Q>());
    let f = free(1, 4);
    let h = f.evaluation_hom(&[SparseVec::unit(1)], q2).unwrap();
    assert_eq!(h.kernel().unwrap().space, Subspace::coordinate(4, [2, 3]));
}
