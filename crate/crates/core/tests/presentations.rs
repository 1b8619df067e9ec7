use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;
use swcalc_core::presentations::{
    bspin_ring_unchecked, buchberger_reduced, bsu_ring, h_n, is_groebner_basis, j_generators, kernel_in_degree,
    make_bspin_ring, preimage_in_degree, u_degree, PresentedRing, RingHom,
};
use swcalc_core::spin::Pipeline;
use swcalc_core::{Polynomial, Ring};

fn pipeline() -> &'static Mutex<Pipeline> {
    static P: OnceLock<Mutex<Pipeline>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(Pipeline::default()))
}

fn restriction(n: u32) -> Arc<RingHom> {
    pipeline().lock().unwrap().restriction_hom(n).unwrap()
}

fn su(m: u32) -> Arc<RingHom> {
    pipeline().lock().unwrap().su_hom(m).unwrap()
}

#[test]
fn h_and_u() {
    assert_eq!((h_n(15), u_degree(15)), (7, 128));
    assert_eq!((h_n(10), u_degree(10)), (5, 32));
    assert_eq!((h_n(8), u_degree(8)), (3, 8));
}

#[test]
fn generators_of_j() {
    let j = j_generators(10).unwrap();
    assert_eq!(j.len(), h_n(10) as usize);
    assert_eq!(j[0].to_string(), "y_2");
    assert_eq!(j[1].to_string(), "y_3");
    assert_eq!(j[2].to_string(), "y_5 + y_2*y_3");
}

#[test]
fn buchberger_on_a_principal_ideal() {
    let r = Ring::indexed("R", "y", 2..=6, 1).unwrap();
    let y4 = Polynomial::parse(&r, "y_4").unwrap();
    assert_eq!(buchberger_reduced(&[y4.clone()]).unwrap(), vec![y4]);
}

#[test]
fn presentations() {
    let six = bspin_ring_unchecked(6).unwrap();
    assert_eq!(six.generator_names(), ["y_4", "y_6", "u_8"]);
    assert!(six.relations().is_empty());

    let ten = bspin_ring_unchecked(10).unwrap();
    let rels: Vec<String> = ten.relations().iter().map(|r| r.to_string()).collect();
    assert_eq!(rels, ["y_7*y_10"]);

    let eleven = bspin_ring_unchecked(11).unwrap();
    let rels: Vec<String> = eleven.relations().iter().map(|r| r.to_string()).collect();
    assert_eq!(rels, ["y_7*y_10 + y_6*y_11", "y_11^3 + y_7^2*y_8*y_11 + y_4*y_7*y_11^2"]);

    let thirteen = bspin_ring_unchecked(13).unwrap();
    let leads: Vec<String> = thirteen
        .relations()
        .iter()
        .map(|r| thirteen.ring().format_monomial(r.leading_monomial().unwrap()))
        .collect();
    assert_eq!(leads, ["y_7*y_10", "y_11^3", "y_13^5"]);
}

#[test]
fn normal_forms() {
    let ten = make_bspin_ring(10).unwrap();
    assert!(ten.parse("y_7*y_10").unwrap().is_zero());
    assert!(ten.normal_form(&Polynomial::zero(ten.ring())).unwrap().is_zero());
    let eleven = make_bspin_ring(11).unwrap();
    assert_eq!(eleven.parse("y_7*y_10").unwrap().to_string(), "y_6*y_11");
    // Eliminated generators reduce away: y_2 = 0, y_3 = 0, y_5 = y_2 y_3.
    assert!(eleven.parse("y_2 + y_3*y_4 + y_5").unwrap().is_zero());
}

#[test]
fn degree_bases() {
    let ten = make_bspin_ring(10).unwrap();
    let b4: Vec<String> = ten.degree_basis(4).iter().map(|m| ten.ring().format_monomial(*m)).collect();
    assert_eq!(b4, ["y_4"]);
    let b17 = ten.degree_basis(17);
    let y7y10 = ten.ring().monomial(&[(5, 1), (8, 1)]).unwrap();
    assert!(!b17.contains(&y7y10));
    assert!(b17.iter().all(|m| ten.is_normal_monomial(*m) && m.degree() == 17));

    let eleven = make_bspin_ring(11).unwrap();
    let b32: Vec<String> = eleven.degree_basis(32).iter().map(|m| eleven.ring().format_monomial(*m)).collect();
    for m in ["y_10*y_11^2", "y_4*y_6*y_11^2", "y_6*y_7*y_8*y_11", "y_7^3*y_11", "y_4^2*y_6*y_7*y_11"] {
        assert!(b32.iter().any(|x| x == m), "{m}");
    }
    assert_eq!(b32.len(), eleven.dimension(32));
}

#[test]
fn restriction_images() {
    let f8 = restriction(8);
    let u16 = f8.source().parse("u_16").unwrap();
    assert_eq!(f8.apply(&u16).unwrap(), f8.target().parse("u_8^2 + y_8*u_8").unwrap());

    let f10 = restriction(10);
    let u64 = f10.source().parse("u_64").unwrap();
    assert_eq!(f10.apply(&u64).unwrap(), f10.target().parse("u_32^2").unwrap());

    let r5 = su(5);
    let w16 = r5.source().parse("y_6*y_10 + y_8^2 + y_4^4").unwrap();
    assert_eq!(r5.apply(&w16).unwrap(), r5.target().parse("c_3*c_5 + c_4^2 + c_2^4").unwrap());

    let r6 = su(6);
    for rel in r6.source().relations() {
        assert!(r6.apply(rel).unwrap().is_zero(), "{rel}");
    }
}

#[test]
fn kernels_and_preimages() {
    let ring = make_bspin_ring(11).unwrap();
    let vars: Vec<Polynomial> = (0..ring.ring().len()).map(|i| Polynomial::var(ring.ring(), i)).collect();
    let id = RingHom::new("id", &ring, &ring, vars).unwrap();
    let k = kernel_in_degree(&[&id], 32).unwrap();
    assert!(k.basis.is_empty());
    assert_eq!(k.image_dimension, k.source_dimension);

    let f8 = restriction(8);
    let target = f8.target().parse("y_8 + y_4^2").unwrap();
    let (lift, kernel) = preimage_in_degree(&[&f8], &[target], 8).unwrap();
    assert_eq!(lift, f8.source().parse("y_8 + y_4^2").unwrap());
    assert!(kernel.basis.is_empty());

    let zero = Polynomial::zero(f8.target().ring());
    let (lift, kernel) = preimage_in_degree(&[&f8], &[zero], 24).unwrap();
    assert!(lift.is_zero());
    assert_eq!(kernel.source_dimension, kernel.image_dimension + kernel.basis.len());

    let r5 = su(5);
    let c = r5.target().parse("c_3*c_5 + c_4^2 + c_2^4").unwrap();
    let (lift, kernel) = preimage_in_degree(&[&r5], &[c], 16).unwrap();
    assert_eq!(lift, r5.source().parse("y_6*y_10 + y_8^2 + y_4^4").unwrap());
    assert!(kernel.basis.is_empty());
    assert_eq!(kernel.source_dimension, bsu_ring(5).unwrap().dimension(16));
}

#[test]
fn groebner_bases_for_all_ranks() {
    for n in 3..=15 {
        let ring = make_bspin_ring(n).unwrap();
        assert!(is_groebner_basis(ring.basis()).unwrap(), "n = {n}");
    }
}

fn element(ring: Arc<PresentedRing>, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let gens = ring.generators();
    let k = gens.len();
    prop::collection::vec(prop::collection::vec(0u32..3, k), 0..5).prop_map(move |terms| {
        let amb = ring.ring();
        let mut out = Polynomial::zero(amb);
        for e in terms {
            let pairs: Vec<(usize, u32)> = gens.iter().copied().zip(e).filter(|&(_, x)| x > 0).collect();
            let m = amb.monomial(&pairs).unwrap();
            if m.degree() <= max_deg {
                out.toggle(m);
            }
        }
        ring.normal_form(&out).unwrap()
    })
}

fn ambient(n: u32) -> impl Strategy<Value = Polynomial> {
    let ring = make_bspin_ring(n).unwrap();
    element(PresentedRing::free(ring.ring()), 40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent_and_linear(p in ambient(13), q in ambient(13)) {
        let ring = make_bspin_ring(13).unwrap();
        let np = ring.normal_form(&p).unwrap();
        prop_assert_eq!(ring.normal_form(&np).unwrap(), np.clone());
        prop_assert_eq!(ring.normal_form(&(&p + &q)).unwrap(), &np + &ring.normal_form(&q).unwrap());
        prop_assert!(np.terms().iter().all(|m| ring.is_normal_monomial(*m)));
    }

    #[test]
    fn normal_form_respects_products(p in ambient(11), q in ambient(11)) {
        let ring = make_bspin_ring(11).unwrap();
        let lhs = ring.normal_form(&(&p * &q)).unwrap();
        let rhs = ring.normal_form(&(&ring.normal_form(&p).unwrap() * &q)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restriction_is_multiplicative(p in element(make_bspin_ring(10).unwrap(), 24), q in element(make_bspin_ring(10).unwrap(), 24)) {
        let f = restriction(9);
        let lhs = f.apply(&(&p * &q)).unwrap();
        let rhs = f.target().normal_form(&(&f.apply(&p).unwrap() * &f.apply(&q).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
