mod common;

use common::*;
use o2deg::characters::{character_table, minus_irreps, GammaShape};
use o2deg::group::{self, direct_product, make_cyclic, make_dihedral, subgroup_classes, Group};
use o2deg::lattice::{O2Kind, Weyl};
use o2deg::pipeline::{analyze, Engine};
use o2deg::report::stability;
use o2deg::rep::Component;

#[test]
fn small_groups() {
    assert_eq!(make_dihedral(8).unwrap().order(), 16);
    let d1 = make_dihedral(1).unwrap();
    assert_eq!(d1.order(), 2);
    let d3 = make_dihedral(3).unwrap();
    let involutions = (1..6).filter(|&x| d3.mul(x, x) == 0).count();
    assert_eq!(involutions, 3);
    assert_ne!(d3.mul(1, 3), d3.mul(3, 1));
    let klein = direct_product(&make_cyclic(2).unwrap(), &make_cyclic(2).unwrap());
    assert_eq!((1..4).filter(|&x| klein.mul(x, x) == 0).count(), 3);
    assert_eq!(subgroup_classes(&make_cyclic(2).unwrap()).unwrap().len(), 2);
}

#[test]
fn characters_of_the_symmetry_group() {
    let f = direct_product(&make_dihedral(8).unwrap(), &make_cyclic(2).unwrap());
    let t = character_table(&f).unwrap();
    assert_eq!(t.len(), 14);
    assert!(t.orthogonal());
    assert_eq!(t.len(), f.element_classes().len());
    // minus type: one per irreducible of D8, four of them linear
    let minus = minus_irreps(&f).unwrap();
    assert_eq!(minus.len(), 7);
    assert_eq!(minus.iter().filter(|r| r.dim == 1).count(), 4);
    assert!(minus[NATURAL].is_natural());
}

#[test]
fn every_plane_class_truncates_and_lifts_back() {
    let mut e = Engine::new(GammaShape::Dihedral(8), 32).unwrap();
    let iso = e.isotropy(&[Component::new(0, NATURAL), Component::new(1, NATURAL)]).unwrap();
    assert!(iso.classes.len() >= 16);
    let lat = e.lattice();
    for c in &iso.classes {
        for level in [32, 64] {
            let t = lat.truncate(c, level).unwrap();
            let g = c.goursat().clone();
            let h_order = match c.kind() {
                O2Kind::Dihedral(n) => 2 * n,
                O2Kind::Cyclic(n) => n,
                O2Kind::SO2 => level,
                O2Kind::FullO2 => 2 * level,
            };
            assert_eq!(t.order(), h_order * g.k_members.len() / g.l_order, "{}", c.label());
            assert_eq!(&lat.lift(&t, level).unwrap(), c);
        }
        assert!(matches!(lat.weyl_order_amalgam(c).unwrap(), Weyl::Finite(_)));
    }
}

#[test]
fn labels() {
    let mut e = Engine::new(GammaShape::Dihedral(8), 32).unwrap();
    assert_eq!(e.full().label(), "(G)");
    e.isotropy(&[Component::new(0, NATURAL), Component::new(1, NATURAL)]).unwrap();
    let lat = e.lattice_ref();
    for l in ["(O(2) × Z2m)", "(O(2) × D2d)", "(O(2) × D2td)", "(D1 × Z2m)"].into_iter().chain(MAX_ORB) {
        assert!(lat.by_label(l).is_some(), "{l}");
    }
}

#[test]
fn plane_poset_contains_maximal_types() {
    let mut e = Engine::new(GammaShape::Dihedral(8), 32).unwrap();
    let poset = e.poset(&[Component::new(0, NATURAL), Component::new(1, NATURAL)]).unwrap();
    let lat = e.lattice_ref();
    let top = poset.position(&e.full()).unwrap();
    for l in MAX_ORB {
        let i = poset.position(&lat.by_label(l).unwrap()).unwrap();
        assert!(poset.leq(i, top));
        assert_eq!(poset.n_at(i, top), 1);
    }
    let single = e.poset(&[]).unwrap();
    assert_eq!(single.len(), 1);
}

#[test]
fn so2_weyl_order() {
    let mut e = Engine::new(GammaShape::Dihedral(8), 32).unwrap();
    let lat = e.lattice();
    let so2 = lat.product_class(O2Kind::SO2, &[0]).unwrap();
    // O(2)/SO(2) times all of Gamma x Z2
    assert_eq!(lat.weyl_order_amalgam(&so2).unwrap(), Weyl::Finite(2 * 32));
    let g = lat.full_group();
    assert_eq!(lat.n_count_amalgam(&so2, &g).unwrap(), 1);
}

#[test]
fn truncation_is_stable_on_the_plane_working_set() {
    let p = paper(3, &[-2.0, -0.5, -0.5]);
    let (mut e, rep) = analyze(&p, None).unwrap();
    assert!(stability(&mut e, &p, &rep).unwrap().is_empty());
}

#[test]
fn inadmissible_fold_is_rejected() {
    let f = direct_product(&make_dihedral(8).unwrap(), &make_cyclic(2).unwrap());
    let mut lat = o2deg::lattice::Lattice::new(f, 4).unwrap();
    let all: Vec<usize> = vec![0];
    assert!(matches!(lat.product_class(O2Kind::Dihedral(8), &all).and_then(|c| lat.truncate(&c, 4)), Err(o2deg::Error::InadmissibleLevel { .. })));
    let _ = group::trivial(&make_cyclic(2).unwrap());
}
