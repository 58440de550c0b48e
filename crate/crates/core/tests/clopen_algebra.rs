use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tfg_core::random::random_clopen;
use tfg_core::{ClopenSet, Space, SpaceSpec};

fn spaces() -> Vec<Space> {
    vec![
        Space::new(SpaceSpec::odometer(&[2])).unwrap(),
        Space::new(SpaceSpec::odometer(&[2, 3])).unwrap(),
        Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])).unwrap(),
        Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "ba")])).unwrap(),
        Space::new(SpaceSpec::sft(&["a", "b"], &["bb"])).unwrap(),
    ]
}

fn three(s: &Space, seed: u64) -> (ClopenSet, ClopenSet, ClopenSet) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (random_clopen(s, &mut r).unwrap(), random_clopen(s, &mut r).unwrap(), random_clopen(s, &mut r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boolean_algebra_laws(seed in any::<u64>()) {
        for s in spaces() {
            let (a, b, c) = three(&s, seed);
            let u = |x: &ClopenSet, y: &ClopenSet| s.union(x, y).unwrap();
            let i = |x: &ClopenSet, y: &ClopenSet| s.intersect(x, y).unwrap();
            let not = |x: &ClopenSet| s.complement(x).unwrap();
            prop_assert_eq!(u(&a, &b), u(&b, &a));
            prop_assert_eq!(i(&a, &u(&b, &c)), u(&i(&a, &b), &i(&a, &c)));
            prop_assert_eq!(not(&u(&a, &b)), i(&not(&a), &not(&b)));
            prop_assert_eq!(not(&not(&a)), a.clone());
            prop_assert_eq!(u(&a, &not(&a)), s.full());
            prop_assert!(i(&a, &not(&a)).is_empty());
            prop_assert_eq!(s.difference(&a, &b).unwrap(), i(&a, &not(&b)));
            prop_assert!(s.is_subset(&i(&a, &b), &a).unwrap());
        }
    }

    #[test]
    fn canonical_forms_are_stable(seed in any::<u64>()) {
        for s in spaces() {
            let (a, b, _) = three(&s, seed);
            prop_assert_eq!(s.normalize(&a).unwrap(), a.clone());
            let j = s.clopen_to_json(&a);
            prop_assert_eq!(s.clopen_from_json(&j).unwrap(), a.clone());
            // Equal sets have equal representations, however they were built.
            let rebuilt = s.union(&s.difference(&a, &b).unwrap(), &s.intersect(&a, &b).unwrap()).unwrap();
            prop_assert_eq!(rebuilt, a);
        }
    }

    #[test]
    fn shift_is_an_automorphism(seed in any::<u64>(), m in -12i64..12) {
        for s in spaces() {
            let (a, b, _) = three(&s, seed);
            let sh = |x: &ClopenSet| s.shift_image(x, m);
            prop_assert_eq!(sh(&s.union(&a, &b).unwrap()), s.union(&sh(&a), &sh(&b)).unwrap());
            prop_assert_eq!(sh(&s.complement(&a).unwrap()), s.complement(&sh(&a)).unwrap());
            prop_assert_eq!(s.shift_image(&sh(&a), -m), a);
        }
    }
}

#[test]
fn languages_are_factorial_and_extendable() {
    for s in spaces().into_iter().filter(|s| s.kind() != tfg_core::SpaceKind::Odometer) {
        for n in 1..=10 {
            let longer = s.language(n + 1).unwrap();
            let shorter = s.language(n).unwrap();
            for w in longer.iter() {
                assert!(shorter.binary_search(&w[1..].to_vec()).is_ok(), "{} suffix", s.id());
                assert!(shorter.binary_search(&w[..n].to_vec()).is_ok(), "{} prefix", s.id());
            }
            for w in shorter.iter() {
                assert!(longer.iter().any(|v| v.starts_with(w)), "{} right extension", s.id());
            }
        }
    }
}

#[test]
fn complexity_of_standard_examples() {
    let [_, _, fib, tm, golden] = <[Space; 5]>::try_from(spaces()).unwrap();
    let tm_counts: Vec<u64> = (1..=8).map(|n| tm.complexity(n).unwrap()).collect();
    assert_eq!(tm_counts, vec![2, 4, 6, 10, 12, 16, 20, 22]);
    // Golden mean shift: Fibonacci numbers.
    let gm: Vec<u64> = (1..=8).map(|n| golden.complexity(n).unwrap()).collect();
    assert_eq!(gm, vec![2, 3, 5, 8, 13, 21, 34, 55]);
    assert_eq!(fib.complexity(30).unwrap(), 31);
    let h = golden.entropy_estimate(20).unwrap().value;
    assert!((h - 0.5_f64.mul_add(5f64.sqrt(), 0.5).ln()).abs() < 0.05);
}

#[test]
fn shift_invariant_sets_have_one_form() {
    // On Thue-Morse, x_{-1} = x_0 fixes the parity of the 2-block cut, which
    // is readable from any long enough window.
    let tm = Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "ba")])).unwrap();
    let a = tm.cylinder_str(3, &["aab", "abb", "baa", "bba"]).unwrap();
    let b = tm.cylinder_str(-1, &["aa", "bb"]).unwrap();
    let s = tm.intersect(&a, &b).unwrap();
    let period = (1..=16).find(|&p| tm.shift_image(&s, p) == s).expect("periodic");
    let far = tm.shift_image(&s, 1000 * period);
    assert_eq!(far, s);
    assert_eq!(tm.normalize(&tm.shift_image(&s, 3)).unwrap(), tm.shift_image(&s, 3));
    for m in -6..6 {
        let moved = tm.shift_image(&s, m);
        assert_eq!(tm.union(&moved, &tm.empty()).unwrap(), moved);
        assert_eq!(tm.shift_image(&moved, -m), s);
    }
    let x = tm.designated_point();
    for k in -20..20 {
        let inside = x.shifted(k).unwrap().contains(&s).unwrap();
        assert_eq!(inside, x.shifted(k + period).unwrap().contains(&s).unwrap());
    }
}
