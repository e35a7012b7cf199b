//! Property suites for the relation calculus.

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use relcalc::harness::{gen_hermitian, gen_self_adjoint, InstanceSpec};
use relcalc::subspace::SetRelation;
use relcalc::{deficiency_pair, Relation};

fn graphs_equal(a: &Relation, b: &Relation) -> bool {
    a.graph().compare(b.graph()).unwrap().relation == SetRelation::Equal
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adjoint_is_an_involution(n in 1usize..5, d_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let d = ((2 * n) as f64 * d_frac) as usize;
        let t = random_relation(&mut rng(seed), n, d);
        let back = t.adjoint().adjoint();
        prop_assert!(graphs_equal(&back, &t));
    }

    #[test]
    fn adjoint_dimension_law(n in 1usize..5, d_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let d = ((2 * n) as f64 * d_frac) as usize;
        let t = random_relation(&mut rng(seed), n, d);
        prop_assert_eq!(t.adjoint().dim(), 2 * n - t.dim());
    }

    #[test]
    fn graph_dimension_splits_into_domain_and_mul(
        n in 1usize..5,
        d_frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let d = ((2 * n) as f64 * d_frac) as usize;
        let t = random_relation(&mut rng(seed), n, d);
        let parts = t.components();
        prop_assert_eq!(t.dim(), parts.domain.dim() + parts.mul_part.dim());
        prop_assert!(matches!(
            parts.mul_part.compare(&parts.range).unwrap().relation,
            SetRelation::Equal | SetRelation::LeftInRight
        ));
    }

    #[test]
    fn op_sum_commutes_and_associates_on_common_domain(
        n in 2usize..5,
        k_frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let domain = random_subspace(&mut r, n, k);
        let mul_room = domain.complement();
        let pick_mul = |r: &mut rand_chacha::ChaCha8Rng| {
            if mul_room.is_zero() {
                relcalc::Subspace::zero(n, tol())
            } else {
                let d = r.random_range(0..=mul_room.dim());
                if d == 0 {
                    relcalc::Subspace::zero(n, tol())
                } else {
                    relcalc::Subspace::span_of_columns(
                        &(mul_room.basis() * random_matrix(r, mul_room.dim(), d)),
                        tol(),
                    )
                    .unwrap()
                }
            }
        };
        let mul_t = pick_mul(&mut r);
        let t = random_relation_on(&mut r, &domain, &mul_t);
        let mul_s = pick_mul(&mut r);
        let s = random_relation_on(&mut r, &domain, &mul_s);
        let mul_u = pick_mul(&mut r);
        let u = random_relation_on(&mut r, &domain, &mul_u);

        let ts = t.op_sum(&s).unwrap();
        let st = s.op_sum(&t).unwrap();
        prop_assert!(graphs_equal(&ts, &st));

        let left = ts.op_sum(&u).unwrap();
        let right = t.op_sum(&s.op_sum(&u).unwrap()).unwrap();
        prop_assert!(graphs_equal(&left, &right));
    }

    #[test]
    fn hermitian_domain_is_orthogonal_to_mul_part(
        n in 2usize..6,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let dim_mul = r.random_range(0..=n / 2);
        let dim_dom = r.random_range(0..=(n - dim_mul));
        let spec = InstanceSpec { n, dim_mul, dim_dom, seed, ..InstanceSpec::new(n, seed) };
        let t = gen_hermitian(&spec).unwrap();
        let parts = t.components();
        // D(T) inside T(0)-perp
        prop_assert!(matches!(
            parts.domain.compare(&parts.mul_part.complement()).unwrap().relation,
            SetRelation::Equal | SetRelation::LeftInRight
        ));
    }

    #[test]
    fn self_adjoint_implies_hermitian_with_zero_deficiency(
        n in 1usize..6,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let dim_mul = r.random_range(0..=n);
        let spec = InstanceSpec { n, dim_mul, dim_dom: n - dim_mul, seed, ..InstanceSpec::new(n, seed) };
        let t = gen_self_adjoint(&spec).unwrap();
        prop_assert!(t.is_hermitian());
        prop_assert_eq!(deficiency_pair(&t).unwrap(), (0, 0));
    }
}

/// T = (T - S) + S holds exactly when D(T) is contained in D(S) and S(0)
/// in T(0); both directions exercised on constructed instances.
#[test]
fn sum_recovery_identity_both_directions() {
    let minus_one = C::new(-1.0, 0.0);
    let mut r = rng(31415);
    for trial in 0..150 {
        let n = 2 + trial % 4;

        // satisfying instance: D(T) inside D(S), S(0) inside T(0)
        let dom_t = random_subspace(&mut r, n, n / 2);
        let extra = dom_t.complement();
        let dom_s = if extra.is_zero() {
            dom_t.clone()
        } else {
            dom_t.sum(&random_inside_exact(&mut r, &extra, 1)).unwrap()
        };
        let mul_room = dom_s.complement();
        let mul_t = if mul_room.is_zero() {
            relcalc::Subspace::zero(n, tol())
        } else {
            let d = r.random_range(0..=mul_room.dim());
            random_inside(&mut r, &mul_room, d)
        };
        let mul_s = if mul_t.is_zero() {
            relcalc::Subspace::zero(n, tol())
        } else {
            let d = r.random_range(0..=mul_t.dim());
            random_inside(&mut r, &mul_t, d)
        };
        let t = random_relation_on(&mut r, &dom_t, &mul_t);
        let s = random_relation_on(&mut r, &dom_s, &mul_s);
        let recovered = t
            .op_sum(&s.scalar_mul(minus_one))
            .unwrap()
            .op_sum(&s)
            .unwrap();
        assert!(
            graphs_equal_pub(&recovered, &t),
            "trial {trial}: recovery failed on a satisfying instance"
        );

        // domain violated: D(T) strictly larger than D(S)
        if !extra.is_zero() {
            let s_small = random_relation_on(&mut r, &dom_t, &relcalc::Subspace::zero(n, tol()));
            let t_big = random_relation_on(
                &mut r,
                &dom_t.sum(&extra).unwrap(),
                &relcalc::Subspace::zero(n, tol()),
            );
            let broken = t_big
                .op_sum(&s_small.scalar_mul(minus_one))
                .unwrap()
                .op_sum(&s_small)
                .unwrap();
            assert!(
                !graphs_equal_pub(&broken, &t_big),
                "trial {trial}: recovery should fail when D(T) escapes D(S)"
            );
        }

        // multivalued part violated: S(0) strictly larger than T(0)
        if !mul_room.is_zero() {
            let t_plain = random_relation_on(&mut r, &dom_t, &relcalc::Subspace::zero(n, tol()));
            let escaped = random_inside_exact(&mut r, &mul_room, 1);
            let s_mul = random_relation_on(&mut r, &dom_s, &escaped);
            let broken = t_plain
                .op_sum(&s_mul.scalar_mul(minus_one))
                .unwrap()
                .op_sum(&s_mul)
                .unwrap();
            assert!(
                !graphs_equal_pub(&broken, &t_plain),
                "trial {trial}: recovery should fail when S(0) escapes T(0)"
            );
        }
    }
}

fn graphs_equal_pub(a: &Relation, b: &Relation) -> bool {
    a.graph().compare(b.graph()).unwrap().relation == SetRelation::Equal
}

fn random_inside(
    r: &mut rand_chacha::ChaCha8Rng,
    room: &relcalc::Subspace,
    d: usize,
) -> relcalc::Subspace {
    if d == 0 || room.is_zero() {
        return relcalc::Subspace::zero(room.ambient_dim(), tol());
    }
    relcalc::Subspace::span_of_columns(&(room.basis() * random_matrix(r, room.dim(), d)), tol())
        .unwrap()
}

fn random_inside_exact(
    r: &mut rand_chacha::ChaCha8Rng,
    room: &relcalc::Subspace,
    d: usize,
) -> relcalc::Subspace {
    loop {
        let s = random_inside(r, room, d);
        if s.dim() == d {
            return s;
        }
    }
}

/// Rotation-complement adjoint against the brute-force solution of the
/// defining identity, on a small deterministic corpus (the acceptance suite
/// runs the full 500-instance version).
#[test]
fn adjoint_agrees_with_definition_solving_oracle() {
    let mut r = rng(2718);
    for trial in 0..100 {
        let n = 1 + trial % 4;
        let d = r.random_range(0..=2 * n);
        let t = random_relation(&mut r, n, d);
        let adj = t.adjoint();

        let oracle_rows = relcalc_oracles::adjoint_by_definition(&graph_rows(&t), n, 1e-12);
        let pairs: Vec<(Vec_, Vec_)> = oracle_rows
            .iter()
            .map(|row| {
                (
                    Vec_::from_iterator(n, row[..n].iter().map(|z| C::new(z.re, z.im))),
                    Vec_::from_iterator(n, row[n..].iter().map(|z| C::new(z.re, z.im))),
                )
            })
            .collect();
        let oracle_rel = Relation::from_pairs(n, &pairs, tol()).unwrap();
        assert!(
            graphs_equal_pub(&adj, &oracle_rel),
            "trial {trial}: adjoint routes disagree (dims {} vs {})",
            adj.dim(),
            oracle_rel.dim()
        );
    }
}
