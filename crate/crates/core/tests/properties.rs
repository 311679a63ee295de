use gvc_core::cohomology::{presentation, CohomologyPresentation, Frobenius};
use gvc_core::dsl::{parse_endo, parse_expr, run, Command, RunOptions};
use gvc_core::dynamics::{
    d_sequence, generator_matrix, graded_trace, inverse_weight_action, lefschetz_point_count, standard_frobenius, zeta_series, Block,
    BlockAction, EndomorphismAction,
};
use gvc_core::hopf::{exterior_hopf, hopf_tensor, primitives, verify_hopf_theorem};
use gvc_core::linalg::{RatMatrix, Rational};
use gvc_core::model::{DynkinType, GroupExpr};
use gvc_core::oracle::{enumerate_elliptic, enumerate_roots, is_prime};
use gvc_core::report::Report;
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

fn small_type() -> impl Strategy<Value = DynkinType> {
    prop_oneof![
        (1u32..=4).prop_map(DynkinType::A),
        (2u32..=4).prop_map(DynkinType::B),
        (3u32..=4).prop_map(DynkinType::C),
        Just(DynkinType::D(4)),
        Just(DynkinType::G2),
        Just(DynkinType::F4),
    ]
}

fn leaf(abelian: bool) -> BoxedStrategy<GroupExpr> {
    let base = prop_oneof![
        Just(GroupExpr::Trivial),
        (0u32..=3).prop_map(|dim| GroupExpr::Unipotent { dim }),
        (0u32..=3).prop_map(|rank| GroupExpr::Torus { rank }),
        small_type().prop_map(GroupExpr::SimplyConnectedSimple),
        (1u32..=4).prop_map(GroupExpr::gl),
    ];
    if abelian {
        prop_oneof![4 => base, 1 => (0u32..=2).prop_map(|g| GroupExpr::abelian(g, None))].boxed()
    } else {
        base.boxed()
    }
}

fn expr_with(abelian: bool) -> BoxedStrategy<GroupExpr> {
    leaf(abelian)
        .prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(n, q)| GroupExpr::ext(n, q)),
                prop::collection::vec(inner.clone(), 1..=3).prop_map(GroupExpr::Product),
                inner.prop_map(|e| GroupExpr::Isogenous(Box::new(e))),
            ]
        })
        .boxed()
}

fn expr() -> BoxedStrategy<GroupExpr> {
    expr_with(true)
}

fn odd_degrees(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec((0u32..=4).prop_map(|k| 2 * k + 1), 0..=max_len).prop_map(|mut d| {
        d.sort_unstable();
        d
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// One random matrix block per degree.
fn action_for(pres: &CohomologyPresentation) -> BoxedStrategy<EndomorphismAction> {
    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut last = None;
    for g in pres.generators() {
        if last != Some(g.degree) {
            groups.push(Vec::new());
            last = Some(g.degree);
        }
        groups.last_mut().unwrap().push(g.label.clone());
    }
    let strategies: Vec<BoxedStrategy<Block>> = groups
        .into_iter()
        .map(|labels| {
            let n = labels.len();
            prop::collection::vec(prop::collection::vec(small_rational(), n), n)
                .prop_map(move |rows| Block {
                    labels: labels.clone(),
                    action: BlockAction::Matrix(RatMatrix::from_rows(rows).unwrap()),
                })
                .boxed()
        })
        .collect();
    strategies.prop_map(|blocks| EndomorphismAction { blocks }).boxed()
}

fn presentation_and_action(max_len: usize) -> impl Strategy<Value = (CohomologyPresentation, EndomorphismAction)> {
    odd_degrees(max_len).prop_flat_map(|d| {
        let pres = CohomologyPresentation::from_degrees(&d);
        (Just(pres.clone()), action_for(&pres))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent_and_keeps_dimension(e in expr()) {
        let n = e.normalize();
        prop_assert!(n.is_normalized());
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(n.dim(), e.dim());
    }

    #[test]
    fn pretty_print_round_trips(e in expr()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e.clone());
        let n = e.normalize();
        prop_assert_eq!(parse_expr(&n.to_string()).unwrap(), n);
    }

    #[test]
    fn dimension_and_poincare_multiply_over_extensions(a in expr(), b in expr()) {
        let e = GroupExpr::ext(a.clone(), b.clone());
        prop_assert_eq!(e.dim().0, a.dim().0 + b.dim().0);
        let lhs = presentation(&e).poincare();
        let rhs = presentation(&a).poincare().mul(&presentation(&b).poincare());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poincare_at_one_counts_monomials(e in expr()) {
        let p = presentation(&e);
        prop_assert_eq!(p.poincare().total(), BigUint::one() << p.len());
    }

    #[test]
    fn degree_sum_matches_dimension(e in expr()) {
        let p = presentation(&e);
        let sum: u64 = p.degrees().iter().map(|&d| d as u64).sum();
        prop_assert_eq!(sum, e.dim().0 - e.unipotent_dim() + e.abelian_dim());
        prop_assert_eq!(p.cohomological_dimension(), sum);
    }

    #[test]
    fn euler_characteristic_vanishes_iff_generators(e in expr()) {
        let p = presentation(&e);
        prop_assert_eq!(p.euler_characteristic() == 0, !p.is_empty());
        let id = graded_trace(&p, &EndomorphismAction::identity(&p)).unwrap();
        prop_assert_eq!(id, Rational::from_integer(p.euler_characteristic().into()));
    }

    #[test]
    fn full_label_globs_select_single_generators(e in expr()) {
        let p = presentation(&e);
        for g in p.generators() {
            let spec = format!("block({} : scalar 2), scalar 1", g.label);
            let act = parse_endo(&spec, &p).unwrap();
            let m = generator_matrix(&p, &act).unwrap();
            let i = p.index_of(&g.label).unwrap();
            prop_assert_eq!(m[(i, i)].clone(), Rational::from_integer(2.into()));
        }
    }

    #[test]
    fn cohomology_reports_round_trip(e in expr()) {
        let out = run(&Command::Cohomology { expr: e.to_string() }, &RunOptions::default());
        prop_assert_eq!(out.exit_code, 0);
        prop_assert_eq!(Report::from_json(&out.report.to_json()).unwrap(), out.report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exterior_algebras_satisfy_the_structure_theorem(d in odd_degrees(5)) {
        let h = exterior_hopf(&d).unwrap();
        prop_assert!(h.check_axioms().is_ok());
        let mut prim = primitives(&h).degrees();
        prim.sort_unstable();
        prop_assert_eq!(&prim, &d);
        prop_assert!(verify_hopf_theorem(&h).is_iso());
    }

    #[test]
    fn primitives_add_under_tensor_products(a in odd_degrees(3), b in odd_degrees(3)) {
        let t = hopf_tensor(&exterior_hopf(&a).unwrap(), &exterior_hopf(&b).unwrap()).unwrap();
        prop_assert!(t.check_axioms().is_ok());
        let mut prim = primitives(&t).degrees();
        prim.sort_unstable();
        let mut both = [a, b].concat();
        both.sort_unstable();
        prop_assert_eq!(prim, both);
        prop_assert!(verify_hopf_theorem(&t).is_iso());
    }

    #[test]
    fn determinant_trace_matches_the_lift((pres, act) in presentation_and_action(5)) {
        let h = exterior_hopf(&pres.degrees()).unwrap();
        let m = generator_matrix(&pres, &act).unwrap();
        let lifted = h.lift_generator_action(&m);
        prop_assert_eq!(h.alternating_trace(&lifted), graded_trace(&pres, &act).unwrap());
    }

    #[test]
    fn d_n_multiplies_over_unions(
        (pn, an) in presentation_and_action(3),
        (pq, aq) in presentation_and_action(3),
    ) {
        // relabel the quotient so the union is disjoint
        let relabel = |p: &CohomologyPresentation, prefix: &str| {
            CohomologyPresentation::from_generators(
                p.generators()
                    .iter()
                    .map(|g| {
                        let mut g = g.clone();
                        g.label = format!("{prefix}.{}", g.label);
                        g
                    })
                    .collect(),
            )
        };
        let rename = |a: &EndomorphismAction, prefix: &str| EndomorphismAction {
            blocks: a
                .blocks
                .iter()
                .map(|b| Block {
                    labels: b.labels.iter().map(|l| format!("{prefix}.{l}")).collect(),
                    action: b.action.clone(),
                })
                .collect(),
        };
        let (pn, an) = (relabel(&pn, "n"), rename(&an, "n"));
        let (pq, aq) = (relabel(&pq, "q"), rename(&aq, "q"));
        let pg = pn.union(&pq);
        let ag = EndomorphismAction { blocks: [an.blocks.clone(), aq.blocks.clone()].concat() };
        let dg = d_sequence(&pg, &ag, 8).unwrap();
        let dn = d_sequence(&pn, &an, 8).unwrap();
        let dq = d_sequence(&pq, &aq, 8).unwrap();
        for k in 0..8 {
            prop_assert_eq!(&dg.values[k], &(&dn.values[k] * &dq.values[k]));
        }
    }

    #[test]
    fn point_counts_multiply(a in expr_with(false), b in expr_with(false), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let e = GroupExpr::ext(a.clone(), b.clone());
        prop_assert_eq!(
            lefschetz_point_count(&e, p).unwrap(),
            lefschetz_point_count(&a, p).unwrap() * lefschetz_point_count(&b, p).unwrap()
        );
    }

    #[test]
    fn frobenius_trace_determines_the_point_count(e in expr_with(false), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        // trace = ∏(1 - q^w) and #G(F_q) = q^{dim - Σw} ∏(q^w - 1)
        let pres = presentation(&e);
        let trace = graded_trace(&pres, &standard_frobenius(&pres, p).unwrap()).unwrap();
        let weights: u64 = pres
            .generators()
            .iter()
            .map(|g| match g.frobenius {
                Frobenius::LinearWeight(w) => w as u64,
                _ => unreachable!("linear expressions only"),
            })
            .sum();
        let mut expected = trace * Rational::from_integer(num_traits::Pow::pow(BigInt::from(p), e.dim().0 - weights));
        if pres.len() % 2 == 1 {
            expected = -expected;
        }
        prop_assert_eq!(Rational::from_integer(lefschetz_point_count(&e, p).unwrap()), expected);
    }

    #[test]
    fn linear_counts_from_the_inverse_weight_trace(e in expr_with(false), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let pres = presentation(&e);
        let trace = graded_trace(&pres, &inverse_weight_action(&pres, p).unwrap()).unwrap();
        let q_dim = Rational::from_integer(num_traits::Pow::pow(BigInt::from(p), e.dim().0));
        prop_assert_eq!(Rational::from_integer(lefschetz_point_count(&e, p).unwrap()), q_dim * trace);
    }

    #[test]
    fn zeta_of_integral_frobenius_is_integral(e in expr_with(false), p in prop::sample::select(vec![2u64, 3])) {
        let pres = presentation(&e);
        prop_assume!(pres.len() <= 4);
        let act = standard_frobenius(&pres, p).unwrap();
        let seq = d_sequence(&pres, &act, 6).unwrap();
        let z = zeta_series(&seq, 6).unwrap();
        prop_assert!(z.iter().all(|c| c.is_integer()));
    }

    #[test]
    fn elliptic_charpoly_reproduces_its_count(
        p in prop::sample::select((5u64..60).filter(|&p| is_prime(p)).collect::<Vec<_>>()),
        a in 0i64..60,
        b in 0i64..60,
    ) {
        let Ok(curve) = enumerate_elliptic(a, b, p) else { return Ok(()); };
        let e = GroupExpr::abelian(1, Some(curve.charpoly.clone()));
        prop_assert_eq!(lefschetz_point_count(&e, p).unwrap(), BigInt::from(curve.count));
        let pres = presentation(&e);
        let act = standard_frobenius(&pres, p).unwrap();
        prop_assert_eq!(graded_trace(&pres, &act).unwrap(), Rational::from_integer(curve.count.into()));
    }
}

#[test]
fn roots_identity_through_e8() {
    for ty in DynkinType::all_up_to_rank(8) {
        assert_eq!(ty.rank() as u64 + enumerate_roots(ty) as u64, ty.dimension(), "{ty}");
    }
}
