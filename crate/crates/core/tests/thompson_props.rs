use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfg_core::random::random_table;
use tfg_core::thompson::{PathLanguage, ThompsonTable};
use tfg_core::{Error, Order};

fn languages() -> Vec<PathLanguage> {
    vec![
        PathLanguage::free(2, 1),
        PathLanguage::free(3, 2),
        PathLanguage::bouquet(2),
        PathLanguage::graph(vec![(0, 0), (0, 1), (1, 0)]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_confluent(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for lang in languages() {
            let t = random_table(&lang, &mut r, 5, 5).unwrap();
            let c = t.canonicalize();
            prop_assert_eq!(c.canonicalize(), c.clone());
            // Expanding and re-contracting in any order gives the same table.
            let mut expanded = c.clone();
            for _ in 0..3 {
                let i = r.gen_range(0..expanded.domain().len());
                expanded = expanded.expand(i);
            }
            let mut pick = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            prop_assert_eq!(expanded.canonicalize_with(|k| pick.gen_range(0..k)), c);
        }
    }

    #[test]
    fn tables_act_as_bijections(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let lang = PathLanguage::free(2, 1);
        let g = random_table(&lang, &mut r, 4, 4).unwrap().canonicalize();
        let h = random_table(&lang, &mut r, 4, 4).unwrap().canonicalize();
        let w: Vec<u32> = std::iter::once(1).chain((0..10).map(|_| r.gen_range(1..=2))).collect();
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.act_on_word(&w).unwrap(), g.act_on_word(&h.act_on_word(&w).unwrap()).unwrap());
        prop_assert_eq!(g.inverse().act_on_word(&g.act_on_word(&w).unwrap()).unwrap(), w);
        let json = g.to_json();
        prop_assert_eq!(ThompsonTable::from_json(&json).unwrap(), g);
    }
}

#[test]
fn composing_across_languages_fails() {
    let a = ThompsonTable::identity(&PathLanguage::free(2, 1));
    let b = ThompsonTable::identity(&PathLanguage::free(3, 1));
    assert!(matches!(a.compose(&b), Err(Error::LanguageMismatch)));
}

#[test]
fn thompson_generators() {
    let lang = PathLanguage::free(2, 1);
    let w = |s: &[u32]| [&[1u32][..], s].concat();
    let x0 =
        ThompsonTable::new(lang.clone(), vec![w(&[1]), w(&[2, 1]), w(&[2, 2])], vec![w(&[1, 1]), w(&[1, 2]), w(&[2])])
            .unwrap();
    let x1 = ThompsonTable::new(
        lang.clone(),
        vec![w(&[1]), w(&[2, 1]), w(&[2, 2, 1]), w(&[2, 2, 2])],
        vec![w(&[1]), w(&[2, 1, 1]), w(&[2, 1, 2]), w(&[2, 2])],
    )
    .unwrap();
    // x1^x0 = x2 and the defining relation x2 x1 = x1 x3 of F.
    let conj = |a: &ThompsonTable, b: &ThompsonTable| b.inverse().compose(a).unwrap().compose(b).unwrap();
    let x2 = conj(&x1, &x0);
    let x3 = conj(&x2, &x0);
    assert_eq!(x2.compose(&x1).unwrap(), x1.compose(&x3).unwrap());
    assert_eq!(x0.order(30).unwrap(), Order::Unknown(30));
    // The rotation of T: 1 -> 2 -> 1 on the first level, order 2; a 3-cycle on a finer basis has order 3.
    let c =
        ThompsonTable::new(lang.clone(), vec![w(&[1]), w(&[2, 1]), w(&[2, 2])], vec![w(&[2, 1]), w(&[2, 2]), w(&[1])])
            .unwrap();
    assert_eq!(c.order(10).unwrap(), Order::Finite(3));
}
