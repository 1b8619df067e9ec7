use std::sync::Arc;

use proptest::prelude::*;
use swcalc_core::poly::{binom_mod2, BitVec, Gf2Matrix};
use swcalc_core::{Error, Polynomial, Ring};

fn ring() -> Arc<Ring> {
    Ring::indexed("BSO(13)", "y", 2..=13, 1).unwrap()
}

fn p(r: &Arc<Ring>, s: &str) -> Polynomial {
    Polynomial::parse(r, s).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    let r = ring();
    let n = r.len();
    prop::collection::vec(prop::collection::vec(0u32..4, n), 0..7).prop_map(move |terms| {
        let mut out = Polynomial::zero(&r);
        for e in terms {
            let pairs: Vec<(usize, u32)> = e.iter().copied().enumerate().filter(|&(_, x)| x > 0).collect();
            out.toggle(r.monomial(&pairs).unwrap());
        }
        out
    })
}

#[test]
fn addition_examples() {
    let r = ring();
    assert!((&p(&r, "y_4") + &p(&r, "y_4")).is_zero());
    assert_eq!(&p(&r, "y_4") + &p(&r, "y_6"), p(&r, "y_4 + y_6"));
    let a = p(&r, "y_7*y_10 + y_6*y_11");
    let b = p(&r, "y_6*y_11 + y_4*y_13");
    assert_eq!(&a + &b, p(&r, "y_7*y_10 + y_4*y_13"));
}

#[test]
fn multiplication_examples() {
    let r = ring();
    let one_y4 = p(&r, "1 + y_4");
    assert_eq!(&one_y4 * &one_y4, p(&r, "1 + y_4^2"));
    assert_eq!(&p(&r, "y_4") * &p(&r, "y_4 + y_6"), p(&r, "y_4^2 + y_4*y_6"));

    let t = Ring::new("T", (1..=3).map(|i| (format!("t_{i}"), 1)).collect()).unwrap();
    let f = |s: &str| Polynomial::parse(&t, s).unwrap();
    let prod = &(&f("1 + t_1 + t_2") * &f("1 + t_1 + t_3")) * &f("1 + t_2 + t_3");
    // Brute force: expand the three factors term by term.
    let factors = [[0usize, 1], [0, 2], [1, 2]];
    let mut expected = Polynomial::zero(&t);
    for choice in 0..27u32 {
        let mut e = [0u32; 3];
        let mut c = choice;
        for fac in &factors {
            match c % 3 {
                0 => {}
                1 => e[fac[0]] += 1,
                _ => e[fac[1]] += 1,
            }
            c /= 3;
        }
        let pairs: Vec<(usize, u32)> = (0..3).map(|i| (i, e[i])).filter(|x| x.1 > 0).collect();
        expected.toggle(t.monomial(&pairs).unwrap());
    }
    assert_eq!(prod, expected);
    assert!(prod.component(0).is_one());
    assert!(!prod.contains(t.monomial(&[(0, 1), (1, 1), (2, 1)]).unwrap()));
}

#[test]
fn graded_components() {
    let r = Ring::new("BSpin(7)", vec![("y_4".into(), 4), ("y_6".into(), 6), ("y_7".into(), 7), ("u_8".into(), 8)]).unwrap();
    let w = Polynomial::parse(&r, "1 + y_4 + y_6 + y_7 + u_8").unwrap();
    assert_eq!(w.component(7).to_string(), "y_7");
    assert!(w.component(5).is_zero());
    let r = ring();
    let w = p(&r, "1 + y_8 + y_4^2 + y_4*y_8");
    assert_eq!(w.component(8), p(&r, "y_8 + y_4^2"));
}

#[test]
fn leading_monomials() {
    let r = ring();
    let rel = p(&r, "y_7*y_10 + y_6*y_11 + y_4*y_13");
    assert_eq!(r.format_monomial(rel.leading_monomial().unwrap()), "y_7*y_10");
    assert_eq!(r.format_monomial(p(&r, "y_4").leading_monomial().unwrap()), "y_4");
    let small = Ring::indexed("S", "y", 1..=3, 1).unwrap();
    let q = Polynomial::parse(&small, "y_3 + y_1*y_2").unwrap();
    assert_eq!(small.format_monomial(q.leading_monomial().unwrap()), "y_3");
    assert_eq!(q.to_string(), "y_3 + y_1*y_2");
    assert!(Polynomial::zero(&r).leading_monomial().is_none());
}

#[test]
fn binomial_examples() {
    assert!(binom_mod2(17, 0));
    assert!(!binom_mod2(2, 1));
    assert!(binom_mod2(63, 32));
}

#[test]
fn linear_systems() {
    let id = Gf2Matrix::from_rows(2, vec![BitVec::from_bools(&[true, false]), BitVec::from_bools(&[false, true])]);
    let sol = id.solve(&BitVec::from_bools(&[true, false])).unwrap();
    assert_eq!(sol.particular, BitVec::from_bools(&[true, false]));
    assert!(sol.null_space.is_empty());

    let a = Gf2Matrix::from_rows(2, vec![BitVec::from_bools(&[true, true])]);
    let sol = a.solve(&BitVec::from_bools(&[false])).unwrap();
    assert_eq!(sol.particular, BitVec::from_bools(&[false, false]));
    assert_eq!(sol.null_space, vec![BitVec::from_bools(&[true, true])]);

    // a_4 y_7^2 y_11^2 + y_7^2 y_11^2 = 0: one equation a_4 = 1.
    let a = Gf2Matrix::from_rows(1, vec![BitVec::from_bools(&[true])]);
    let sol = a.solve(&BitVec::from_bools(&[true])).unwrap();
    assert!(sol.particular.get(0));
}

#[test]
fn exact_division() {
    let r = ring();
    assert_eq!(p(&r, "y_4^2*y_6").exact_div(&p(&r, "y_4")).unwrap(), p(&r, "y_4*y_6"));
    assert!(Polynomial::zero(&r).exact_div(&p(&r, "y_5")).unwrap().is_zero());
    assert_eq!(p(&r, "y_4*y_6 + y_6").exact_div(&p(&r, "y_6")).unwrap(), p(&r, "y_4 + 1"));
    assert!(matches!(p(&r, "y_4 + 1").exact_div(&p(&r, "y_6")), Err(Error::NotDivisible { .. })));
    assert!(matches!(p(&r, "y_4").exact_div(&Polynomial::zero(&r)), Err(Error::DivisionByZero)));
}

#[test]
fn canonical_text() {
    let r = ring();
    assert_eq!(Polynomial::zero(&r).to_string(), "0");
    assert_eq!(Polynomial::one(&r).to_string(), "1");
    let q = p(&r, "  y_4*y_13+y_6 * y_11 +   y_7*y_10 ");
    assert_eq!(q.to_string(), "y_7*y_10 + y_6*y_11 + y_4*y_13");
    assert_eq!(p(&r, "y_4^1").to_string(), "y_4");
    assert!(matches!(Polynomial::parse(&r, "y_1"), Err(Error::UnknownGenerator(_))));
    assert!(matches!(Polynomial::parse(&r, "y_4 +"), Err(Error::Parse { .. })));
}

#[test]
fn exponent_cap() {
    let r = ring();
    let y = p(&r, "y_2^127");
    assert!(matches!(y.mul(&p(&r, "y_2")), Err(Error::ExponentOverflow { .. })));
}

proptest! {
    #[test]
    fn ring_laws(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert!((&a + &a).is_zero());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Polynomial::one(a.ring()), a.clone());
    }

    #[test]
    fn frobenius(a in poly_strategy(), b in poly_strategy()) {
        let s = &a + &b;
        prop_assert_eq!(s.square().unwrap(), &a.square().unwrap() + &b.square().unwrap());
        prop_assert_eq!(a.square().unwrap(), &a * &a);
        prop_assert_eq!(a.square().unwrap().sqrt(), Some(a.clone()));
        prop_assert_eq!(a.pow(4).unwrap(), a.square().unwrap().square().unwrap());
    }

    #[test]
    fn leading_term_is_multiplicative(a in poly_strategy(), b in poly_strategy()) {
        if let (Some(x), Some(y)) = (a.leading_monomial(), b.leading_monomial()) {
            prop_assert_eq!((&a * &b).leading_monomial(), x.checked_mul(y));
        }
    }

    #[test]
    fn terms_sorted_by_a_graded_order(a in poly_strategy()) {
        let keys: Vec<u128> = a.terms().iter().map(|m| m.order_key()).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] > w[1]));
        let degs: Vec<u32> = a.terms().iter().map(|m| m.degree()).collect();
        prop_assert!(degs.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn text_and_json_round_trip(a in poly_strategy()) {
        let r = a.ring().clone();
        prop_assert_eq!(Polynomial::parse(&r, &a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(Polynomial::from_json(&r, &a.to_json()).unwrap(), a.clone());
    }

    #[test]
    fn division_inverts_multiplication(a in poly_strategy(), b in poly_strategy()) {
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn components_sum_back(a in poly_strategy()) {
        let mut sum = Polynomial::zero(a.ring());
        for (d, c) in a.components() {
            prop_assert!(c.terms().iter().all(|m| m.degree() == d));
            sum.add_assign(&c).unwrap();
        }
        prop_assert_eq!(sum, a.clone());
        if let Some(d) = a.max_degree() {
            prop_assert_eq!(a.truncate(d), a.clone());
        }
    }
}
