//! Extension classifiers and stem-cover construction over the catalog.

use std::sync::Arc;

use nilmult_core::baer::{self, LevelPolicy};
use nilmult_core::exactlin::SparseVec;
use nilmult_core::extension::{self, StemCoverOutcome};
use nilmult_core::{catalog, lie, Error, Extension, LeibnizAlgebra, Rational};

fn sweep() -> Vec<(&'static str, Arc<LeibnizAlgebra>, usize)> {
    vec![
        ("q2", Arc::new(catalog::q2()), 5),
        ("g_a", Arc::new(catalog::g_a()), 5),
        ("g_b", Arc::new(catalog::g_b()), 5),
        ("abelian:2", Arc::new(catalog::abelian(2)), 5),
        ("abelian:3", Arc::new(catalog::abelian(3)), 3),
        ("heisenberg", Arc::new(catalog::heisenberg()), 5),
        ("q2+k", Arc::new(catalog::q2_plus_k()), 5),
    ]
}

fn lie_class(a: &LeibnizAlgebra) -> usize {
    lie::lower_lie_series(a, None).unwrap().cls.unwrap()
}

/// `abelian:3` stops at `c = 3` to keep debug builds quick; release builds
/// finish `c = 5` as well.
#[test]
fn no_cover_above_the_lie_class() {
    let p = LevelPolicy::default();
    let mut forced = 0;
    let mut built = 0;
    for (name, q, c_max) in sweep() {
        let k = lie_class(&q);
        for c in 1..=c_max {
            let dim_m = baer::multiplier(&q, c, &p).unwrap().dim;
            let out = extension::stem_cover_construct(&q, c, &p).unwrap();
            if c > k && dim_m != 0 {
                forced += 1;
                let StemCoverOutcome::NoIdealComplement(info) = &out else {
                    panic!("{name} c={c}: cover built above Lie-class {k}");
                };
                assert_eq!(info.lie_class, Some(k));
                assert_eq!(info.dim_multiplier, dim_m);
                assert!(info.after_window, "{name} c={c}");
            }
            if let Some(s) = out.cover() {
                built += 1;
                check_cover(name, &q, c, s.algebra.clone(), &s.extension, dim_m);
            }
        }
    }
    assert_eq!((forced, built), (19, 11));
}

fn check_cover(
    name: &str,
    q: &Arc<LeibnizAlgebra>,
    c: usize,
    qs: Arc<LeibnizAlgebra>,
    e: &Extension,
    dim_m: usize,
) {
    assert!(qs.check_leibniz().holds, "{name} c={c}");
    assert_eq!(qs.dim(), q.dim() + dim_m);
    let n = &e.kernel.space;
    assert!(
        n.is_subspace_of(&lie::upper_lie_term(&qs, c).unwrap()),
        "{name} c={c}"
    );
    assert!(
        n.is_subspace_of(lie::lower_lie_series(&qs, None).unwrap().term(c + 1)),
        "{name} c={c}"
    );
    let r = extension::is_c_lie_stem_cover(e, c, &LevelPolicy::default()).unwrap();
    assert!(r.is_cover && r.central && r.stem);
    assert_eq!(r.induced_rank, Some(0));
}

#[test]
fn covers_of_q2_for_small_c() {
    let q = Arc::new(catalog::q2::<Rational>());
    let p = LevelPolicy::default();
    let one = extension::stem_cover_construct(&q, 1, &p).unwrap();
    assert!(one
        .cover()
        .unwrap()
        .algebra
        .same_table(catalog::free(1, 3, 10).unwrap().algebra()));
    let two = extension::stem_cover_construct(&q, 2, &p).unwrap();
    assert!(two.cover().unwrap().algebra.same_table(&catalog::g_b()));
    let three = extension::stem_cover_construct(&q, 3, &p).unwrap();
    assert_eq!(three.code(), "NO_IDEAL_COMPLEMENT");
}

/// Centrality by commutators agrees with containment in the upper series,
/// and stemness agrees with equal dimensions modulo the `(c+1)`-st term.
#[test]
fn classifier_routes_agree_on_quotient_extensions() {
    let mut stems = 0;
    for (name, g, _) in sweep() {
        for i in 0..g.dim() {
            let n = g.ideal_closure([&SparseVec::unit(i)]).unwrap();
            let e = Extension::from_quotient(&g, &n).unwrap();
            for c in 1..=5 {
                let central = extension::is_c_lie_central(&e, c).unwrap();
                let inside = n.space.is_subspace_of(&lie::upper_lie_term(&g, c).unwrap());
                assert_eq!(central, inside, "{name} e{} c={c}", i + 1);
                if !central {
                    assert_eq!(extension::is_c_lie_stem(&e, c), Err(Error::NotCentral));
                    continue;
                }
                let stem = extension::is_c_lie_stem(&e, c).unwrap();
                let gamma_g = lie::lower_lie_series(&g, None).unwrap().term(c + 1).dim();
                let gamma_q = lie::lower_lie_series(&e.base, None)
                    .unwrap()
                    .term(c + 1)
                    .dim();
                assert_eq!(
                    stem,
                    g.dim() - gamma_g == e.base.dim() - gamma_q,
                    "{name} e{} c={c}",
                    i + 1
                );
                stems += usize::from(stem);
            }
        }
    }
    assert!(stems > 0);
}

#[test]
fn one_letter_cover_of_q2() {
    let f = Arc::new(catalog::free(1, 3, 10).unwrap().algebra().as_ref().clone());
    let q = Arc::new(catalog::q2::<Rational>());
    let pi = nilmult_core::Morphism::hom(
        f,
        q,
        vec![SparseVec::unit(1), SparseVec::unit(0), SparseVec::zero()],
    )
    .unwrap();
    let e = Extension::new(pi).unwrap();
    assert!(extension::is_c_lie_stem(&e, 1).unwrap());
    let r = extension::is_c_lie_stem_cover(&e, 1, &LevelPolicy::default()).unwrap();
    assert!(r.is_cover);
    assert_eq!(r.dim_kernel, 1);
}

#[test]
fn non_surjective_map_is_rejected() {
    let q = Arc::new(catalog::q2::<Rational>());
    let pi = nilmult_core::Morphism::hom(q.clone(), q, vec![SparseVec::zero(), SparseVec::zero()])
        .unwrap();
    assert_eq!(Extension::new(pi).unwrap_err(), Error::NotSurjective);
}
