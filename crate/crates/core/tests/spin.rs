use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use swcalc_core::fixtures;
use swcalc_core::spin::{
    lambda1_class, restrict_spin, solve_indeterminate, variants, whitney_sum, Pipeline, PipelineConfig, RepSum, SolveSpec,
    Summand, Variant,
};
use swcalc_core::steenrod::VanishingPattern;
use swcalc_core::{Error, Polynomial};

fn pipeline() -> &'static Mutex<Pipeline> {
    static P: OnceLock<Mutex<Pipeline>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(Pipeline::default()))
}

fn with<T>(f: impl FnOnce(&mut Pipeline) -> swcalc_core::Result<T>) -> T {
    f(&mut pipeline().lock().unwrap()).unwrap()
}

#[test]
fn half_spin_sum_of_spin8() {
    let plus = with(|p| p.table(8, Variant::Plus));
    let minus = with(|p| p.table(8, Variant::Minus));
    let sum = RepSum::new(plus.ring())
        .with(Summand::Spin(plus.clone()), 1)
        .with(Summand::Spin(minus), 1);
    let expected = plus
        .ring()
        .parse("1 + y_8 + y_4^2 + y_4*y_8 + y_6^2 + y_6*y_8 + y_7^2 + y_7*y_8 + u_8^2 + y_8*u_8")
        .unwrap();
    assert_eq!(whitney_sum(&sum).unwrap(), expected);
}

#[test]
fn half_spin_sum_of_spin10_in_degree_64() {
    let plus = with(|p| p.table(10, Variant::Plus));
    let minus = with(|p| p.table(10, Variant::Minus));
    let sum = RepSum::new(plus.ring())
        .with(Summand::Spin(plus.clone()), 1)
        .with(Summand::Spin(minus), 1);
    assert_eq!(whitney_sum(&sum).unwrap().component(64), plus.ring().parse("u_32^2").unwrap());
}

#[test]
fn restriction_of_spin_representations() {
    use Variant::*;
    assert_eq!(restrict_spin(9, Full).unwrap(), [(Plus, 1), (Minus, 1)]);
    assert_eq!(restrict_spin(15, Full).unwrap(), [(Plus, 1)]);
    assert_eq!(restrict_spin(12, Plus).unwrap(), [(Full, 1)]);
    assert_eq!(restrict_spin(12, Minus).unwrap(), [(Full, 1)]);
}

#[test]
fn named_classes() {
    let t9 = with(|p| p.table(9, Variant::Full));
    assert_eq!(t9.total().unwrap(), t9.ring().parse(fixtures::text("spin9.total").unwrap()).unwrap());
    assert_eq!(t9.class(8).unwrap(), &t9.ring().parse("y_8 + y_4^2").unwrap());

    let t10 = with(|p| p.table(10, Variant::Plus));
    assert_eq!(t10.class(16).unwrap(), &t10.ring().parse("y_6*y_10 + y_8^2 + y_4^4").unwrap());

    let t15 = with(|p| p.table(15, Variant::Full));
    let w64 = t15.class(64).unwrap();
    assert_eq!(w64, &t15.ring().parse(fixtures::text("spin15.w64").unwrap()).unwrap());
    let y10y13y15 = t15.ring().parse("y_10*y_13^3*y_15").unwrap();
    assert!(w64.contains(y10y13y15.leading_monomial().unwrap()));
}

#[test]
fn solver_coefficients() {
    let t11 = with(|p| p.table(11, Variant::Full));
    let order = fixtures::polynomial_list(t11.ring().ring(), "spin11.kernel32").unwrap();
    let r = t11.solve_at(32).unwrap();
    assert_eq!(r.coefficients_in(&order).unwrap(), [true, true, true, true, false]);
    assert_eq!(r.contributing, [1, 4, 30]);

    let t12 = with(|p| p.table(12, Variant::Plus));
    let order = fixtures::polynomial_list(t12.ring().ring(), "spin12plus.kernel32").unwrap();
    assert_eq!(t12.solve_at(32).unwrap().coefficients_in(&order).unwrap(), [true]);
}

#[test]
fn solver_edge_cases() {
    let t11 = with(|p| p.table(11, Variant::Full));
    let ctx = with(|p| p.squares(11));
    let w32 = t11.class(32).unwrap().clone();
    let sq1 = ctx.sq(1, &w32).unwrap();
    let spec = SolveSpec {
        ring: t11.ring().clone(),
        degree: 32,
        particular: w32.clone(),
        unknowns: vec![],
        constraints: vec![(1, sq1)],
    };
    assert_eq!(solve_indeterminate(&spec, &ctx).unwrap().class, w32);

    let wrong = SolveSpec {
        constraints: vec![(1, t11.ring().parse("y_11^3").unwrap())],
        ..spec.clone()
    };
    assert!(matches!(solve_indeterminate(&wrong, &ctx), Err(Error::Inconsistent { .. })));

    let none = SolveSpec {
        constraints: vec![],
        ..spec
    };
    assert!(matches!(solve_indeterminate(&none, &ctx), Err(Error::Unsupported(_))));
}

#[test]
fn too_few_constraints_leave_unknowns_free() {
    let mut config = PipelineConfig::default();
    config.constraints.insert((11, Variant::Full, 32), vec![1]);
    let mut p = Pipeline::new(config);
    match p.table(11, Variant::Full) {
        Err(Error::Underdetermined { free }) => assert!(!free.is_empty()),
        other => panic!("expected an underdetermined system, got {other:?}"),
    }
}

#[test]
fn lambda2_small_cases() {
    let l3 = with(|p| p.lambda_classes(3, None));
    assert!(l3.lambda2.is_one());
    let l5 = with(|p| p.lambda_classes(5, None));
    assert_eq!(l5.lambda2.to_string(), "y_4 + 1");
    let l15 = with(|p| p.lambda_classes(15, Some(4)));
    assert_eq!(l15.lambda2.component(4).to_string(), "y_4");
}

#[test]
fn exceptional_classes_are_whitney_products() {
    let t9 = with(|p| p.table(9, Variant::Full));
    let f4 = with(|p| p.exceptional_class(swcalc_core::spin::Exceptional::F4));
    let l1 = lambda1_class(t9.ring(), 9).unwrap();
    assert_eq!(f4, t9.ring().normal_form(&(&t9.total().unwrap() * &l1)).unwrap());
    assert_eq!(f4.component(16), t9.ring().parse("u_16 + y_8^2 + y_4*y_6^2").unwrap());
}

#[test]
fn every_table_respects_its_pattern() {
    for n in 3..=15 {
        for &v in variants(n) {
            let t = with(|p| p.table(n, v));
            assert!(t.is_complete() && t.respects_pattern(), "{}", t.label());
            let top = t.pattern.top();
            assert_eq!(t.total().unwrap().max_degree(), Some(top), "{}", t.label());
            assert_eq!(t.dimension(), top);
        }
    }
}

proptest! {
    #[test]
    fn patterns(n in 3u32..=15) {
        let p = VanishingPattern::for_rank(n);
        let degs = p.degrees();
        prop_assert_eq!(degs[0], 0);
        prop_assert_eq!(*degs.last().unwrap(), p.top());
        prop_assert!(degs.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(p.contains(p.lowest()) || p.r == p.h);
        for d in 0..=p.top() {
            prop_assert_eq!(p.contains(d), degs.contains(&d));
        }
    }

    #[test]
    fn whitney_sum_ignores_order(order in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), mult in prop::collection::vec(0u32..3, 4)) {
        let plus = with(|p| p.table(8, Variant::Plus));
        let minus = with(|p| p.table(8, Variant::Minus));
        let ring = plus.ring().clone();
        let summands = [
            Summand::Spin(plus),
            Summand::Spin(minus),
            Summand::Class { name: "lambda^1".into(), dimension: 8, total: lambda1_class(&ring, 8).unwrap() },
            Summand::Trivial,
        ];
        let mut a = RepSum::new(&ring);
        let mut b = RepSum::new(&ring);
        for i in 0..4 {
            a = a.with(summands[i].clone(), mult[i]);
            b = b.with(summands[order[i]].clone(), mult[order[i]]);
        }
        prop_assert_eq!(a.dimension(), b.dimension());
        prop_assert_eq!(whitney_sum(&a).unwrap(), whitney_sum(&b).unwrap());
        let pieces: BTreeMap<u32, Polynomial> = whitney_sum(&a).unwrap().components();
        prop_assert!(pieces.keys().all(|&d| d <= a.dimension()));
    }
}
