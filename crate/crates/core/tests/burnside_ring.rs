mod common;

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use common::*;
use o2deg::burnside::{recurrence, reconstruct, Element, FiniteBurnside, ProductTable};
use o2deg::characters::GammaShape;
use o2deg::group::{direct_product, make_cyclic, make_dihedral, Group};
use o2deg::lattice::{AmalgamClass, O2Kind};
use o2deg::pipeline::Engine;
use o2deg::rep::Component;
use o2deg::Error;
use proptest::prelude::*;

#[test]
fn finite_products_match_orbit_partition() {
    let g = direct_product(&make_dihedral(8).unwrap(), &make_cyclic(2).unwrap());
    let mut fb = FiniteBurnside::new(&g).unwrap();
    let classes = fb.classes.clone();
    assert_eq!(classes.len(), 38);
    for a in 0..38 {
        for b in 0..38 {
            assert_eq!(fb.product(&a, &b).unwrap(), orbit_product(&g, &classes, a, b), "{} * {}", classes[a].name, classes[b].name);
        }
    }
}

struct Plane {
    engine: Engine,
    classes: Vec<AmalgamClass>,
    working: BTreeSet<AmalgamClass>,
}

fn plane() -> &'static Mutex<Plane> {
    static P: OnceLock<Mutex<Plane>> = OnceLock::new();
    P.get_or_init(|| {
        let mut engine = Engine::new(GammaShape::Dihedral(8), 32).unwrap();
        let iso = engine.isotropy(&[Component::new(0, NATURAL), Component::new(1, NATURAL)]).unwrap();
        let working: BTreeSet<AmalgamClass> = iso.classes.iter().cloned().chain([engine.full()]).collect();
        Mutex::new(Plane { engine, classes: working.iter().cloned().collect(), working })
    })
}

fn mul(p: &mut Plane, a: &Element, b: &Element) -> Result<Element, Error> {
    let w = p.working.clone();
    a.multiply(b, p.engine.lattice(), Some(&w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let mut p = plane().lock().unwrap();
        let n = p.classes.len();
        let (a, b, c) = (Element::generator(p.classes[i % n].clone()), Element::generator(p.classes[j % n].clone()), Element::generator(p.classes[k % n].clone()));
        let unit = p.engine.unit();
        prop_assert_eq!(mul(&mut p, &unit, &a).unwrap(), a.clone());
        let ab = mul(&mut p, &a, &b);
        let ba = mul(&mut p, &b, &a);
        prop_assert_eq!(ab.is_ok(), ba.is_ok());
        let (Ok(ab), Ok(ba)) = (ab, ba) else { return Ok(()) };
        prop_assert_eq!(&ab, &ba);
        let left = mul(&mut p, &ab, &c);
        let bc = mul(&mut p, &b, &c);
        if let (Ok(left), Ok(bc)) = (left, bc) {
            if let Ok(right) = mul(&mut p, &a, &bc) {
                prop_assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn reconstruction_inverts_recurrence(coeffs in proptest::collection::vec(-5i64..=5, 64)) {
        let mut p = plane().lock().unwrap();
        let comps = [Component::new(0, NATURAL), Component::new(1, NATURAL)];
        let poset = p.engine.poset(&comps).unwrap();
        let e = Element::from_terms(poset.classes().iter().cloned().zip(coeffs.iter().copied()));
        let d = reconstruct(&e, &poset).unwrap();
        prop_assert_eq!(recurrence(&d, &poset).unwrap(), e);
    }
}

#[test]
fn unit_recurrence() {
    let mut p = plane().lock().unwrap();
    let poset = p.engine.poset(&[Component::new(1, NATURAL)]).unwrap();
    let d = vec![1; poset.len()];
    assert_eq!(recurrence(&d, &poset).unwrap(), p.engine.unit());
}

#[test]
fn inexact_recurrence_is_an_error() {
    let mut p = plane().lock().unwrap();
    let poset = p.engine.poset(&[Component::new(1, NATURAL)]).unwrap();
    // Flip the sign at the bottom class only; the quotient by its Weyl order is not integral.
    let mut d = vec![1; poset.len()];
    let last = poset.len() - 1;
    d[last] = -1;
    assert!(poset.weyl_at(last) > 2);
    assert!(matches!(recurrence(&d, &poset), Err(Error::InconsistentDegree { .. })));
}

#[test]
fn rotation_class_squares_to_twice_itself() {
    let mut p = plane().lock().unwrap();
    let f = GammaShape::Dihedral(8).build().unwrap();
    let all: Vec<usize> = (0..f.order()).collect();
    let so2 = p.engine.lattice().product_class(O2Kind::SO2, &all).unwrap();
    let x = Element::generator(so2.clone());
    let sq = x.multiply(&x, p.engine.lattice(), None).unwrap();
    assert_eq!(sq, x.scale(2));
}

#[test]
fn unit_coefficient_and_module_ops() {
    let p = plane().lock().unwrap();
    let unit = p.engine.unit();
    assert_eq!(unit.coeff(&p.engine.full()), 1);
    assert!(unit.sub(&unit).is_zero());
    assert_eq!(unit.add(&Element::zero()), unit);
    assert_eq!(unit.scale(2).coeff(&p.engine.full()), 2);
}

#[test]
fn print_parse_round_trip() {
    let mut p = plane().lock().unwrap();
    for k in [0, 1] {
        let d = p.engine.basic_degree(Component::new(k, NATURAL)).unwrap();
        let lat = p.engine.lattice_ref();
        assert_eq!(Element::parse(&d.to_string(), |l| lat.by_label(l)).unwrap(), d);
    }
    let lat = p.engine.lattice_ref();
    assert!(Element::parse("(G) + (nope)", |l| lat.by_label(l)).is_err());
    assert!(Element::parse("(G) (G)", |l| lat.by_label(l)).is_err());
    assert!(Element::parse("0", |l| lat.by_label(l)).unwrap().is_zero());
}

#[test]
fn generator_products_stay_in_the_working_set() {
    let mut p = plane().lock().unwrap();
    let cs = p.classes.clone();
    let mut ok = 0;
    let mut total = 0;
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i..] {
            total += 1;
            if mul(&mut p, &Element::generator(a.clone()), &Element::generator(b.clone())).is_ok() {
                ok += 1;
            }
        }
    }
    assert_eq!(ok, total);
}
