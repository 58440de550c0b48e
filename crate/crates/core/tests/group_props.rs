use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tfg_core::fullgroup::{index, induced_transformation, is_in_point_stabilizer, IndexMethod, Multisection};
use tfg_core::random::{random_element, random_nonempty_clopen};
use tfg_core::{Element, Order, Space, SpaceSpec};

fn spaces() -> Vec<Space> {
    vec![
        Space::new(SpaceSpec::odometer(&[2])).unwrap(),
        Space::new(SpaceSpec::odometer(&[3, 2])).unwrap(),
        Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])).unwrap(),
        Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "ba")])).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn group_axioms(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for s in spaces() {
            let g = random_element(&s, &mut r, 4).unwrap();
            let h = random_element(&s, &mut r, 4).unwrap();
            let k = random_element(&s, &mut r, 4).unwrap();
            prop_assert_eq!(g.compose(&h).unwrap().compose(&k).unwrap(), g.compose(&h.compose(&k).unwrap()).unwrap());
            prop_assert_eq!(g.compose(&h).unwrap().inverse().unwrap(), h.inverse().unwrap().compose(&g.inverse().unwrap()).unwrap());
            prop_assert_eq!(g.pow(3).unwrap(), g.compose(&g).unwrap().compose(&g).unwrap());
            prop_assert_eq!(g.pow(-2).unwrap(), g.inverse().unwrap().pow(2).unwrap());
            prop_assert!(g.compose(&h).unwrap().cocycle_bound() <= g.cocycle_bound() + h.cocycle_bound());
        }
    }

    #[test]
    fn support_and_images(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for s in spaces() {
            let g = random_element(&s, &mut r, 3).unwrap();
            let a = random_nonempty_clopen(&s, &mut r).unwrap();
            // Images respect the partition and inverses undo them.
            prop_assert_eq!(g.inverse().unwrap().image(&g.image(&a).unwrap()).unwrap(), a.clone());
            let supp = g.support().unwrap();
            let fixed = s.complement(&supp).unwrap();
            prop_assert_eq!(g.image(&fixed).unwrap(), fixed);
            prop_assert_eq!(g.image(&supp).unwrap(), supp);
            let j = g.to_json();
            prop_assert_eq!(Element::from_json(&s, &j).unwrap(), g);
        }
    }

    #[test]
    fn index_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for s in spaces() {
            let x = s.designated_point();
            let g = random_element(&s, &mut r, 3).unwrap();
            let h = random_element(&s, &mut r, 3).unwrap();
            let i = |e: &Element| index(e, IndexMethod::Orbit, &x).unwrap();
            prop_assert_eq!(i(&g.compose(&h).unwrap()), i(&g) + i(&h));
            prop_assert_eq!(i(&g.inverse().unwrap()), -i(&g));
            prop_assert_eq!(i(&g.conjugate_by(&h).unwrap()), i(&g));
            prop_assert_eq!(i(&g.commutator(&h).unwrap()), 0);
        }
    }
}

#[test]
fn induced_maps_have_index_one() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for s in spaces() {
        let x = s.designated_point();
        for _ in 0..10 {
            let a = random_nonempty_clopen(&s, &mut r).unwrap();
            let phi_a = induced_transformation(&s, &a).unwrap();
            assert_eq!(index(&phi_a, IndexMethod::Orbit, &x).unwrap(), 1);
        }
    }
}

#[test]
fn multisection_is_a_homomorphism_of_symmetric_groups() {
    let s = Space::new(SpaceSpec::odometer(&[2])).unwrap();
    let base = s.residue_set(3, &[0]).unwrap();
    let m = Multisection::from_offsets(&s, &base, &[0, 1, 3]).unwrap();
    let perms: Vec<Vec<usize>> =
        vec![vec![0, 1, 2], vec![1, 0, 2], vec![1, 2, 0], vec![2, 1, 0], vec![0, 2, 1], vec![2, 0, 1]];
    for p in &perms {
        for q in &perms {
            let pq: Vec<usize> = (0..3).map(|i| p[q[i]]).collect();
            assert_eq!(m.cycle(&pq).unwrap(), m.cycle(p).unwrap().compose(&m.cycle(q).unwrap()).unwrap());
        }
    }
    assert_eq!(m.cycle(&[1, 2, 0]).unwrap().order(5).unwrap(), Order::Finite(3));
}

#[test]
fn stabilizer_of_the_orbit_split() {
    let s = Space::new(SpaceSpec::odometer(&[2])).unwrap();
    let x = s.designated_point();
    let base = s.residue_set(2, &[1]).unwrap();
    let m = Multisection::from_offsets(&s, &base, &[0, 1]).unwrap();
    assert!(is_in_point_stabilizer(&m.cycle(&[1, 0]).unwrap(), &x).unwrap());
    assert!(!is_in_point_stabilizer(&Element::shift(&s, 2), &x).unwrap());
}
