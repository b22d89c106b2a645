//! Worked examples for brackets, ideals, quotients and the Lie-central series.

use std::sync::Arc;

use nilmult_core::exactlin::{SparseVec, Subspace};
use nilmult_core::{catalog, lie, Error, LeibnizAlgebra, Rational};

type Q = Rational;

fn e(i: usize) -> SparseVec<Q> {
    SparseVec::unit(i)
}

fn span(n: usize, idx: &[usize]) -> Subspace<Q> {
    Subspace::coordinate(n, idx.iter().copied())
}

#[test]
fn square_in_q2() {
    let q: LeibnizAlgebra = catalog::q2();
    assert_eq!(q.bracket(&e(1), &e(1)), e(0));
    assert!(q.bracket(&SparseVec::zero(), &e(1)).is_zero());
}

/// The stored `g_b` has `[a2, a1] = a3`, so `a1 + a2` picks up both products.
#[test]
fn bilinear_expansion_in_g_b() {
    let g: LeibnizAlgebra = catalog::g_b();
    assert_eq!(g.bracket(&e(0).add(&e(1)), &e(0)), e(1).add(&e(2)));
    assert_eq!(g.bracket(&e(0), &e(0).add(&e(1))), e(1));
}

#[test]
fn ideal_closures() {
    let g: LeibnizAlgebra = catalog::g_b();
    assert_eq!(g.ideal_closure([&e(2)]).unwrap().space, span(4, &[2, 3]));
    let q: LeibnizAlgebra = catalog::q2();
    assert_eq!(q.ideal_closure([&e(0)]).unwrap().space, span(2, &[0]));
    assert!(q.ideal_closure([&e(0), &e(1)]).unwrap().space.is_full());
}

#[test]
fn g_b_modulo_its_tail_is_q2() {
    let g = Arc::new(catalog::g_b::<Q>());
    let (q, _) = g.quotient(&g.ideal(span(4, &[2, 3])).unwrap()).unwrap();
    assert_eq!(q.dim(), 2);
    // a1 squares to a2 and everything else vanishes; swapping labels gives q2.
    assert_eq!(q.bracket(&e(0), &e(0)), e(1));
    assert_eq!(q.product_count(), 1);
}

#[test]
fn liezation_of_q2_is_one_dimensional_abelian() {
    let q = Arc::new(catalog::q2::<Q>());
    let (l, p) = lie::liezation(&q).unwrap();
    assert_eq!(l.dim(), 1);
    assert!(l.is_abelian());
    assert_eq!(p.kernel().unwrap().space, span(2, &[0]));
}

#[test]
fn ann_and_second_lie_term_agree() {
    for a in [
        catalog::q2(),
        catalog::g_a(),
        catalog::g_b(),
        catalog::heisenberg(),
        catalog::q2_plus_k(),
    ] {
        let ann = lie::ann::<Q>(&a).unwrap().space;
        let g2 = lie::lower_lie_series(&a, None).unwrap().term(2).clone();
        assert_eq!(ann, g2, "{}", a.name());
    }
    assert_eq!(
        lie::ann::<Q>(&catalog::g_b()).unwrap().space,
        span(4, &[1, 2, 3])
    );
}

#[test]
fn lie_commutators_and_centers() {
    let q: LeibnizAlgebra = catalog::q2();
    let full = Subspace::full(2);
    assert_eq!(
        lie::lie_commutator(&q, &full, &full).unwrap(),
        span(2, &[0])
    );
    assert!(lie::lie_commutator(&q, &Subspace::zero(2), &full)
        .unwrap()
        .is_zero());
    assert_eq!(lie::lie_center(&q).unwrap().space, span(2, &[0]));

    let g: LeibnizAlgebra = catalog::g_a();
    let full = Subspace::full(4);
    assert_eq!(
        lie::lie_commutator(&g, &full, &full).unwrap(),
        span(4, &[2, 3])
    );
    assert_eq!(lie::lie_center(&g).unwrap().space, span(4, &[3]));
}

#[test]
fn lower_series_of_q2_g_a_g_b() {
    let s = lie::lower_lie_series::<Q>(&catalog::q2(), None).unwrap();
    assert_eq!(
        s.terms,
        vec![Subspace::full(2), span(2, &[0]), Subspace::zero(2)]
    );
    assert_eq!(s.cls, Some(2));

    let s = lie::lower_lie_series::<Q>(&catalog::g_b(), None).unwrap();
    assert_eq!(
        s.terms[1..],
        [
            span(4, &[1, 2, 3]),
            span(4, &[2, 3]),
            span(4, &[3]),
            Subspace::zero(4)
        ]
    );
    assert_eq!(s.cls, Some(4));

    let s = lie::lower_lie_series::<Q>(&catalog::g_a(), None).unwrap();
    assert_eq!(
        s.terms[1..],
        [span(4, &[2, 3]), span(4, &[3]), Subspace::zero(4)]
    );
    assert_eq!(s.cls, Some(3));
}

#[test]
fn upper_series_of_g_a() {
    let s = lie::upper_lie_series::<Q>(&catalog::g_a()).unwrap();
    assert_eq!(
        s.terms,
        vec![
            Subspace::zero(4),
            span(4, &[3]),
            span(4, &[2, 3]),
            Subspace::full(4)
        ]
    );
    assert_eq!(s.cls, Some(3));
}

#[test]
fn upper_and_lower_classes_agree_on_catalog() {
    for (name, _) in catalog::list() {
        let name = name.replace(":N", ":2").replace(":D:M", ":2:3");
        let a: LeibnizAlgebra = catalog::get(&name).unwrap();
        let lower = lie::lower_lie_series(&a, None).unwrap().cls;
        let upper = lie::upper_lie_series(&a).unwrap().cls;
        assert_eq!(lower, upper, "{name}");
    }
}

#[test]
fn maximal_lie_class_and_its_series() {
    let g: LeibnizAlgebra = catalog::g_a();
    assert!(lie::is_maximal_lie_class(&g).unwrap());
    assert!(!lie::is_maximal_lie_class::<Q>(&catalog::g_b()).unwrap());
    assert!(!lie::is_maximal_lie_class::<Q>(&catalog::abelian(2)).unwrap());
    let lower = lie::lower_lie_series(&g, None).unwrap();
    for i in 0..=3 {
        assert_eq!(
            lie::upper_lie_term(&g, i).unwrap(),
            *lower.term(3 - i + 1),
            "i = {i}"
        );
    }
}

#[test]
fn relative_gamma_in_one_letter() {
    let f = catalog::free::<Q>(1, 5, 100).unwrap();
    let n = span(5, &[2, 3, 4]);
    assert_eq!(lie::relative_gamma(f.algebra(), &n, 0).unwrap(), n);
    assert_eq!(
        lie::relative_gamma(f.algebra(), &n, 1).unwrap(),
        span(5, &[3, 4])
    );
    assert_eq!(
        lie::relative_gamma(f.algebra(), &n, 2).unwrap(),
        span(5, &[4])
    );
}

#[test]
fn non_leibniz_table_reports_its_first_triple() {
    let a = LeibnizAlgebra::new(
        "bad",
        LeibnizAlgebra::default_labels(2),
        [((0, 0), e(1)), ((1, 0), e(0))],
    )
    .unwrap();
    let r = a.check_leibniz();
    assert!(!r.holds);
    assert!(matches!(
        a.ensure_leibniz(),
        Err(Error::IdentityFailure {
            triple: (1, 2, 1),
            ..
        })
    ));
}
