//! Properties of multipliers, Baer invariants and `Z*` over the catalog.

use std::sync::Arc;

use nilmult_core::baer::{self, LevelPolicy, Mode};
use nilmult_core::exactlin::{SparseVec, Subspace};
use nilmult_core::{catalog, lie, Error, Ideal, LeibnizAlgebra, Rational};

type Q = Rational;

fn catalog_algebras() -> Vec<Arc<LeibnizAlgebra>> {
    vec![
        Arc::new(catalog::q2()),
        Arc::new(catalog::g_a()),
        Arc::new(catalog::g_b()),
        Arc::new(catalog::abelian(1)),
        Arc::new(catalog::abelian(2)),
        Arc::new(catalog::heisenberg()),
        Arc::new(catalog::q2_plus_k()),
    ]
}

fn single_generated_ideals(q: &LeibnizAlgebra) -> Vec<Ideal> {
    (0..q.dim())
        .map(|i| q.ideal_closure([&SparseVec::unit(i)]).unwrap())
        .collect()
}

fn policy() -> LevelPolicy {
    LevelPolicy::default()
}

fn m(q: &Arc<LeibnizAlgebra>, c: usize) -> usize {
    baer::multiplier(q, c, &policy()).unwrap().dim
}

fn quotient(q: &Arc<LeibnizAlgebra>, n: &Ideal) -> Arc<LeibnizAlgebra> {
    q.quotient(n).unwrap().0
}

fn gamma_c1(q: &LeibnizAlgebra, c: usize) -> Subspace<Q> {
    lie::lower_lie_series(q, None).unwrap().term(c + 1).clone()
}

#[test]
fn gamma_star_vanishes_exactly_for_small_class_and_trivial_multiplier() {
    for q in catalog_algebras() {
        let class = lie::lower_lie_series(&q, None).unwrap().cls.unwrap();
        for c in 1..=3 {
            let g = baer::gamma_star(&q, c, &policy()).unwrap();
            assert_eq!(g.dim, g.dim_multiplier + g.dim_gamma_c1_q);
            assert_eq!(
                g.dim == 0,
                class <= c && g.dim_multiplier == 0,
                "{} c={c}",
                q.name()
            );
        }
    }
}

#[test]
fn vanishing_gamma_star_passes_to_quotients() {
    for q in catalog_algebras() {
        for c in 1..=2 {
            if baer::gamma_star(&q, c, &policy()).unwrap().dim != 0 {
                continue;
            }
            for n in single_generated_ideals(&q) {
                let qn = quotient(&q, &n);
                assert_eq!(
                    baer::gamma_star(&qn, c, &policy()).unwrap().dim,
                    0,
                    "{} c={c}",
                    q.name()
                );
            }
        }
    }
}

#[test]
fn levels_increase_weakly_and_are_constant_from_k_plus_c() {
    for q in catalog_algebras() {
        for c in 1..=3 {
            let k = baer::nilpotency_class(&q).unwrap();
            let p = LevelPolicy {
                m_start: Some(k.max(1)),
                m_max: Some(k + c + 1),
                ..policy()
            };
            let r = baer::multiplier(&q, c, &p).unwrap();
            let dims: Vec<usize> = r.per_level_dims.iter().map(|l| l.dim_multiplier).collect();
            assert!(
                dims.windows(2).all(|w| w[0] <= w[1]),
                "{} c={c}: {dims:?}",
                q.name()
            );
            let exact = baer::multiplier(&q, c, &LevelPolicy::at_level(k + c))
                .unwrap()
                .dim;
            for l in &r.per_level_dims {
                if l.level >= k + c {
                    assert_eq!(
                        l.dim_multiplier,
                        exact,
                        "{} c={c} level {}",
                        q.name(),
                        l.level
                    );
                }
            }
        }
    }
}

#[test]
fn isomorphism_criterion_below_z_star() {
    let mut nontrivial = 0;
    for q in catalog_algebras() {
        for c in 1..=2 {
            let z = baer::z_star(&q, c, &policy()).unwrap().subspace;
            let mut ideals = vec![q.ideal(z.clone()).unwrap()];
            ideals.extend(z.basis().iter().map(|v| q.ideal_closure([v]).unwrap()));
            for n in ideals {
                if n.dim() == 0 {
                    continue;
                }
                nontrivial += 1;
                let qn = quotient(&q, &n);
                let lhs = baer::gamma_star(&q, c, &policy()).unwrap().dim;
                let rhs = baer::gamma_star(&qn, c, &policy()).unwrap().dim;
                assert_eq!(lhs, rhs, "{} c={c} N dim {}", q.name(), n.dim());
            }
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn injectivity_matches_dimension_formula_for_central_ideals() {
    for q in catalog_algebras() {
        for c in 1..=2 {
            let zeta = lie::upper_lie_term(&q, c).unwrap();
            let gamma = gamma_c1(&q, c);
            for v in zeta.basis() {
                let n = q.ideal_closure([v]).unwrap();
                let map = baer::induced_multiplier_map(&q, &n, c, None).unwrap();
                let meet = n.space.intersect(&gamma).unwrap().dim();
                let formula = m(&quotient(&q, &n), c) as isize - m(&q, c) as isize == meet as isize;
                assert_eq!(
                    map.is_injective(),
                    formula,
                    "{} c={c} N = <{v:?}>",
                    q.name()
                );
            }
        }
    }
}

#[test]
fn dimension_formula_at_z_star() {
    for q in catalog_algebras() {
        for c in 1..=2 {
            let z = baer::z_star(&q, c, &policy()).unwrap().subspace;
            let n = q.ideal(z).unwrap();
            let meet = n.space.intersect(&gamma_c1(&q, c)).unwrap().dim();
            assert_eq!(
                m(&quotient(&q, &n), c),
                m(&q, c) + meet,
                "{} c={c}",
                q.name()
            );
        }
    }
}

#[test]
fn z_star_lies_in_the_upper_term_and_its_quotient_is_capable() {
    for q in catalog_algebras() {
        for c in 1..=2 {
            let z = baer::z_star(&q, c, &policy()).unwrap();
            assert!(z.stabilized && z.exact);
            assert!(z
                .subspace
                .is_subspace_of(&lie::upper_lie_term(&q, c).unwrap()));
            let qz = quotient(&q, &q.ideal(z.subspace.clone()).unwrap());
            assert!(
                baer::is_c_lie_capable(&qz, c, &policy()).unwrap(),
                "{} c={c}",
                q.name()
            );
        }
    }
}

#[test]
fn capability_routes_agree() {
    for q in catalog_algebras() {
        for c in 1..=2 {
            let chk = baer::capability_cross_check(&q, c, &policy()).unwrap();
            assert!(chk.agrees(), "{} c={c}", q.name());
        }
    }
    let one = Arc::new(catalog::abelian::<Q>(1));
    assert!(baer::z_star(&one, 1, &policy()).unwrap().subspace.is_zero());
    let f13 = Arc::new(
        catalog::free::<Q>(1, 3, 100)
            .unwrap()
            .algebra()
            .as_ref()
            .clone(),
    );
    assert!(baer::capability_cross_check(&f13, 1, &policy())
        .unwrap()
        .agrees());
}

#[test]
fn four_term_sequence_for_the_top_of_g_b() {
    let g = Arc::new(catalog::g_b::<Q>());
    let n = g.ideal(Subspace::coordinate(4, [3])).unwrap();
    let a = baer::four_term_check(&g, &n, 1, Some(5)).unwrap();
    let b = baer::four_term_check(&g, &n, 1, Some(6)).unwrap();
    assert!(a.holds() && b.holds());
    let terms =
        |r: &baer::FourTermReport| (r.term_kernel, r.dim_m_q, r.dim_m_quotient, r.term_cokernel);
    assert_eq!(terms(&a), terms(&b));
}

#[test]
fn zero_ideal_gives_trivial_end_terms() {
    for q in catalog_algebras() {
        let r = baer::four_term_check(&q, &q.zero_ideal(), 2, None).unwrap();
        assert_eq!((r.term_kernel, r.term_cokernel), (0, 0));
        assert_eq!(r.dim_m_q, r.dim_m_quotient);
    }
}

#[test]
fn non_nilpotent_input_is_rejected() {
    let a = Arc::new(
        LeibnizAlgebra::new(
            "solvable",
            LeibnizAlgebra::default_labels(2),
            [((1, 0), SparseVec::unit(1))],
        )
        .unwrap(),
    );
    assert!(a.check_leibniz().holds);
    assert!(matches!(
        baer::multiplier(&a, 1, &policy()),
        Err(Error::NotNilpotent)
    ));
}

/// The two presentations agree for `c = 1` and differ from `c = 2` on.
#[test]
fn presentation_dependence_is_pinned() {
    for (q, want) in [
        (catalog::q2::<Q>(), 1),
        (catalog::g_b(), 1),
        (catalog::g_a(), 3),
    ] {
        let q = Arc::new(q);
        let k = baer::nilpotency_class(&q).unwrap();
        for mode in [Mode::Minimal, Mode::Full] {
            let r = baer::multiplier(&q, 1, &LevelPolicy::at_level(k + 1).with_mode(mode)).unwrap();
            assert_eq!(r.dim, want, "{} {mode:?}", q.name());
        }
    }
    let q = Arc::new(catalog::q2::<Q>());
    let full = baer::multiplier(&q, 2, &LevelPolicy::at_level(4).with_mode(Mode::Full)).unwrap();
    assert_eq!((m(&q, 2), full.dim), (2, 4));
}
