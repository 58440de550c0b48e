//! Primitive substitutions: exact factor languages and the two-sided fixed point.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock};

use super::{Limits, Symbol, Word};
use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct Substitution {
    pub(crate) images: Vec<Word>,
    /// Smallest k with every entry of M^k positive.
    pub(crate) primitivity_exponent: usize,
    /// Admissible two-letter words, sorted.
    pub(crate) two_letter: Vec<[Symbol; 2]>,
    /// Seed pair `(l, r)` and the power `p` of the substitution used to grow it.
    pub(crate) seed: (Symbol, Symbol),
    pub(crate) seed_power: usize,
    /// `σ^p` precomputed.
    power_images: Vec<Word>,
    right: RwLock<Word>,
    /// Left half stored reversed: `left[0]` is the coordinate at -1.
    left: RwLock<Word>,
    cache: RwLock<BTreeMap<usize, Arc<Vec<Word>>>>,
}

fn apply(images: &[Word], w: &[Symbol]) -> Word {
    w.iter().flat_map(|&c| images[c as usize].iter().copied()).collect()
}

fn primitivity_exponent(images: &[Word]) -> Option<usize> {
    let k = images.len();
    let mut base = vec![vec![false; k]; k];
    for (i, img) in images.iter().enumerate() {
        for &c in img {
            base[i][c as usize] = true;
        }
    }
    let mut power = base.clone();
    // Wielandt bound for primitive matrices.
    let bound = (k - 1) * (k - 1) + 1;
    for e in 1..=bound {
        if power.iter().all(|row| row.iter().all(|&b| b)) {
            return Some(e);
        }
        let mut next = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                if power[i][j] {
                    for l in 0..k {
                        next[i][l] |= base[j][l];
                    }
                }
            }
        }
        power = next;
    }
    None
}

impl Substitution {
    pub(crate) fn new(images: Vec<Word>) -> Result<Self> {
        if images.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidSpec("substitution images must be nonempty".into()));
        }
        let primitivity_exponent = primitivity_exponent(&images)
            .ok_or_else(|| Error::NonPrimitiveSubstitution("no power of the incidence matrix is positive".into()))?;

        // Two-letter words: close the pairs found inside images under σ.
        let mut pairs: BTreeSet<[Symbol; 2]> = BTreeSet::new();
        for img in &images {
            for p in img.windows(2) {
                pairs.insert([p[0], p[1]]);
            }
        }
        loop {
            let mut added = false;
            for p in pairs.clone() {
                let w = apply(&images, &p);
                for q in w.windows(2) {
                    added |= pairs.insert([q[0], q[1]]);
                }
            }
            if !added {
                break;
            }
        }
        let two_letter: Vec<[Symbol; 2]> = pairs.into_iter().collect();

        let (seed, seed_power) = find_seed(&images, &two_letter)
            .ok_or_else(|| Error::InvalidSpec("no legal seed pair for a two-sided fixed point".into()))?;
        let mut power_images: Vec<Word> = (0..images.len() as Symbol).map(|c| vec![c]).collect();
        for _ in 0..seed_power {
            power_images = power_images.iter().map(|w| apply(&images, w)).collect();
        }
        Ok(Substitution {
            images,
            primitivity_exponent,
            two_letter,
            seed,
            seed_power,
            power_images,
            right: RwLock::new(vec![seed.1]),
            left: RwLock::new(vec![seed.0]),
            cache: RwLock::new(BTreeMap::new()),
        })
    }

    /// All admissible words of length `n`, sorted.
    ///
    /// Every factor of length `n >= 2` lies inside `σ^k(cd)` for an admissible
    /// pair `cd` once all letter images under `σ^k` have length at least `n - 1`,
    /// so the enumeration below is complete.
    pub(crate) fn language(&self, n: usize, limits: &Limits) -> Result<Arc<Vec<Word>>> {
        if let Some(w) = self.cache.read().unwrap().get(&n) {
            return Ok(w.clone());
        }
        if n > limits.max_word_length {
            return Err(Error::CertificationFailure(format!(
                "word length {n} exceeds the configured bound {}",
                limits.max_word_length
            )));
        }
        let words: Vec<Word> = match n {
            0 => vec![vec![]],
            1 => (0..self.images.len() as Symbol).map(|c| vec![c]).collect(),
            _ => {
                let mut level: Vec<Word> = (0..self.images.len() as Symbol).map(|c| vec![c]).collect();
                while level.iter().map(Vec::len).min().unwrap() < n - 1 {
                    level = level.iter().map(|w| apply(&self.images, w)).collect();
                }
                let mut set = BTreeSet::new();
                for [c, d] in &self.two_letter {
                    let mut w = level[*c as usize].clone();
                    w.extend_from_slice(&level[*d as usize]);
                    for f in w.windows(n) {
                        set.insert(f.to_vec());
                    }
                }
                set.into_iter().collect()
            }
        };
        let words = Arc::new(words);
        self.cache.write().unwrap().insert(n, words.clone());
        Ok(words)
    }

    /// Coordinate `i` of the designated two-sided fixed point.
    pub(crate) fn coordinate(&self, i: i64) -> Symbol {
        if i >= 0 {
            let need = i as usize + 1;
            grow(&self.right, need, |w| apply(&self.power_images, w));
            self.right.read().unwrap()[i as usize]
        } else {
            let need = (-i) as usize;
            grow(&self.left, need, |rev| {
                let fwd: Word = rev.iter().rev().copied().collect();
                let mut img = apply(&self.power_images, &fwd);
                img.reverse();
                img
            });
            self.left.read().unwrap()[need - 1]
        }
    }
}

fn grow(cell: &RwLock<Word>, need: usize, step: impl Fn(&Word) -> Word) {
    if cell.read().unwrap().len() >= need {
        return;
    }
    let mut w = cell.write().unwrap();
    while w.len() < need {
        let next = step(&w);
        debug_assert!(next.starts_with(&w));
        *w = next;
    }
}

/// Smallest power `p` and first admissible pair `(l, r)` (in sorted order) with
/// `σ^p(l)` ending in `l` and `σ^p(r)` starting with `r`.
fn find_seed(images: &[Word], pairs: &[[Symbol; 2]]) -> Option<((Symbol, Symbol), usize)> {
    let k = images.len();
    let mut first: Vec<Symbol> = (0..k as Symbol).collect();
    let mut last: Vec<Symbol> = (0..k as Symbol).collect();
    // Letter maps c -> first/last letter of σ(c); their powers become periodic
    // within k! steps, but k is small so a generous bound suffices.
    let bound = (1..=k).product::<usize>().max(1) * k + k;
    for p in 1..=bound {
        first = first.iter().map(|&c| images[c as usize][0]).collect();
        last = last.iter().map(|&c| *images[c as usize].last().unwrap()).collect();
        // Growth: σ^p(r) must be longer than r for the expansion to converge.
        for &[l, r] in pairs {
            if last[l as usize] == l && first[r as usize] == r {
                let mut wl = vec![l];
                let mut wr = vec![r];
                for _ in 0..p {
                    wl = apply(images, &wl);
                    wr = apply(images, &wr);
                }
                if wl.len() > 1 && wr.len() > 1 {
                    return Some(((l, r), p));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Substitution {
        Substitution::new(vec![vec![0, 1], vec![0]]).unwrap()
    }

    /// Brute force: factors of a long iterate of the seed letter.
    fn factors_of_iterate(images: &[Word], k: usize, n: usize) -> BTreeSet<Word> {
        let mut w = vec![0];
        for _ in 0..k {
            w = apply(images, &w);
        }
        w.windows(n).map(|f| f.to_vec()).collect()
    }

    #[test]
    fn fibonacci_two_letter_words() {
        assert_eq!(fib().two_letter, vec![[0, 0], [0, 1], [1, 0]]);
    }

    #[test]
    fn fibonacci_language_matches_long_iterate() {
        let s = fib();
        let limits = Limits::default();
        for n in 1..=12 {
            let lang: BTreeSet<Word> = s.language(n, &limits).unwrap().iter().cloned().collect();
            assert_eq!(lang, factors_of_iterate(&s.images, 16, n), "n = {n}");
        }
    }

    #[test]
    fn fibonacci_seed_and_point() {
        let s = fib();
        assert_eq!(s.seed, (0, 0));
        assert_eq!(s.seed_power, 2);
        let right: Vec<Symbol> = (0..5).map(|i| s.coordinate(i)).collect();
        assert_eq!(right, vec![0, 1, 0, 0, 1]);
        // σ^4(a) = abaababa, so the left half reads ...abaababa backwards from -1.
        let left: Vec<Symbol> = (1..=8).map(|i| s.coordinate(-i)).collect();
        assert_eq!(left, vec![0, 1, 0, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn rejects_non_primitive() {
        // a -> aa, b -> b is reducible.
        assert!(matches!(Substitution::new(vec![vec![0, 0], vec![1]]), Err(Error::NonPrimitiveSubstitution(_))));
    }

    #[test]
    fn period_doubling_language() {
        // a -> ab, b -> aa
        let s = Substitution::new(vec![vec![0, 1], vec![0, 0]]).unwrap();
        let limits = Limits::default();
        for n in 1..=10 {
            let lang: BTreeSet<Word> = s.language(n, &limits).unwrap().iter().cloned().collect();
            assert_eq!(lang, factors_of_iterate(&s.images, 14, n), "n = {n}");
        }
    }
}
