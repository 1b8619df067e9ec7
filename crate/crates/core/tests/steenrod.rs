use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;
use swcalc_core::presentations::{bso_ring, PresentedRing};
use swcalc_core::spin::Pipeline;
use swcalc_core::steenrod::{expected_sq_of_class, SteenrodContext, VanishingPattern};
use swcalc_core::Polynomial;

fn bso(n: u32) -> SteenrodContext {
    SteenrodContext::bso(&PresentedRing::free(&bso_ring(n).unwrap()), n).unwrap()
}

fn bspin_squares(n: u32) -> Arc<SteenrodContext> {
    static P: OnceLock<Mutex<Pipeline>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(Pipeline::default())).lock().unwrap().squares(n).unwrap()
}

fn parse(ctx: &SteenrodContext, s: &str) -> Polynomial {
    ctx.ring().parse(s).unwrap()
}

#[test]
fn wu_formula_examples() {
    let ctx = bso(10);
    assert_eq!(ctx.sq(1, &parse(&ctx, "y_2")).unwrap(), parse(&ctx, "y_3"));
    assert_eq!(ctx.sq(2, &parse(&ctx, "y_3")).unwrap(), parse(&ctx, "y_5 + y_2*y_3"));
    assert_eq!(ctx.sq(4, &parse(&ctx, "y_5")).unwrap(), parse(&ctx, "y_9 + y_2*y_7 + y_3*y_6 + y_4*y_5"));
    for i in 2..=10 {
        let w = Polynomial::var(ctx.ring().ring(), (i - 2) as usize);
        assert_eq!(ctx.sq(0, &w).unwrap(), w);
    }
}

#[test]
fn total_squares() {
    let ctx = bso(8);
    let one = Polynomial::one(ctx.ring().ring());
    assert_eq!(ctx.total_sq(&one).unwrap(), one);
    let y4 = parse(&ctx, "y_4");
    assert_eq!(ctx.total_sq(&y4.square().unwrap()).unwrap(), ctx.total_sq(&y4).unwrap().square().unwrap());
    let three = bso(3);
    assert_eq!(three.total_sq(&parse(&three, "y_2")).unwrap(), parse(&three, "y_2 + y_3 + y_2^2"));
}

#[test]
fn instability_edges() {
    let ctx = bso(9);
    let p = parse(&ctx, "y_4*y_5 + y_9");
    assert!(ctx.sq(10, &p).unwrap().is_zero());
    assert_eq!(ctx.sq(9, &p).unwrap(), p.square().unwrap());
}

#[test]
fn pattern_wu_sums() {
    let ring = bso_ring(2).unwrap();
    let zero = Polynomial::zero(&ring);

    let p11 = VanishingPattern::for_rank(11);
    assert_eq!((p11.h, p11.r), (6, 2));
    let s = expected_sq_of_class(&p11, &|_| None, &zero, 32, 1).unwrap();
    assert!(s.known.is_zero() && s.unresolved.is_empty());

    let p12 = VanishingPattern::for_rank(12);
    assert_eq!(p12.degrees(), [0, 32, 48, 56, 60, 64]);
    let s = expected_sq_of_class(&p12, &|_| None, &zero, 64, 62).unwrap();
    assert!(s.known.is_zero() && s.unresolved.is_empty());

    let p15 = VanishingPattern::for_rank(15);
    let s = expected_sq_of_class(&p15, &|_| None, &zero, 64, 32).unwrap();
    assert_eq!(s.unresolved, [(96, 0)]);
}

#[test]
fn squares_of_u() {
    let ctx = bspin_squares(12);
    let u = parse(&ctx, "u_64");
    assert!(ctx.sq(1, &u).unwrap().is_zero());
    assert!(ctx.sq(4, &u).unwrap().is_zero());
    assert_eq!(ctx.sq(0, &u).unwrap(), u);
    assert_eq!(ctx.sq(64, &u).unwrap(), parse(&ctx, "u_64^2"));
}

fn element(ctx: Arc<SteenrodContext>, max_deg: u32, with_u: bool) -> impl Strategy<Value = Polynomial> {
    let ring = ctx.ring().clone();
    let gens: Vec<usize> = ring
        .generators()
        .into_iter()
        .filter(|&i| ring.ring().generator_degree(i) <= max_deg || with_u && i + 1 == ring.ring().len())
        .collect();
    let k = gens.len();
    prop::collection::vec(prop::collection::vec(0u32..3, k), 1..4).prop_map(move |terms| {
        let amb = ring.ring();
        let mut out = Polynomial::zero(amb);
        for e in terms {
            let pairs: Vec<(usize, u32)> = gens.iter().copied().zip(e).filter(|&(_, x)| x > 0).collect();
            let m = amb.monomial(&pairs).unwrap();
            if m.degree() <= max_deg + if with_u { 32 } else { 0 } {
                out.toggle(m);
            }
        }
        ring.normal_form(&out).unwrap()
    })
}

fn top(p: &Polynomial) -> Polynomial {
    p.component(p.max_degree().unwrap_or(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cartan_on_bso(a in element(Arc::new(bso(8)), 10, false), b in element(Arc::new(bso(8)), 10, false)) {
        let ctx = bso(8);
        prop_assert_eq!(ctx.total_sq(&(&a * &b)).unwrap(), &ctx.total_sq(&a).unwrap() * &ctx.total_sq(&b).unwrap());
    }

    #[test]
    fn cartan_on_bspin(a in element(bspin_squares(10), 10, true), b in element(bspin_squares(10), 10, true)) {
        let ctx = bspin_squares(10);
        let ring = ctx.ring();
        let lhs = ctx.total_sq(&ring.normal_form(&(&a * &b)).unwrap()).unwrap();
        let rhs = ring.normal_form(&(&ctx.total_sq(&a).unwrap() * &ctx.total_sq(&b).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adem_relations(a in element(bspin_squares(11), 14, true)) {
        let ctx = bspin_squares(11);
        let x = top(&a);
        let sq = |j: u32, p: &Polynomial| ctx.sq(j, p).unwrap();
        prop_assert!(sq(1, &sq(1, &x)).is_zero());
        prop_assert_eq!(sq(1, &sq(2, &x)), sq(3, &x));
        prop_assert_eq!(sq(2, &sq(2, &x)), sq(3, &sq(1, &x)));
    }

    #[test]
    fn instability(a in element(bspin_squares(9), 16, true)) {
        let ctx = bspin_squares(9);
        let x = top(&a);
        let d = x.max_degree().unwrap_or(0);
        prop_assert_eq!(ctx.sq(0, &x).unwrap(), x.clone());
        prop_assert_eq!(ctx.sq(d, &x).unwrap(), ctx.ring().normal_form(&x.square().unwrap()).unwrap());
        prop_assert!(ctx.sq(d + 1, &x).unwrap().is_zero());
    }
}
