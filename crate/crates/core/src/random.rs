//! Random clopen sets, elements and tables for tests and benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::fullgroup::{involution_from_slice, Element};
use crate::spaces::{ClopenSet, Space, SpaceKind};
use crate::thompson::{Path, PathLanguage, ThompsonTable};

/// Deepest odometer level with at most `cap` residues.
fn max_level(space: &Space, cap: u64) -> u32 {
    let mut level = 0;
    while space.modulus(level + 1).is_ok_and(|m| m <= cap) {
        level += 1;
    }
    level
}

/// Random union of residue classes (odometers) or of cylinders of length at
/// most 4 on a window near the origin (subshifts).
pub fn random_clopen<R: Rng>(space: &Space, rng: &mut R) -> Result<ClopenSet> {
    match space.kind() {
        SpaceKind::Odometer => {
            let level = rng.gen_range(0..=max_level(space, 64));
            let m = space.modulus(level)?;
            let residues: Vec<u64> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
            space.residue_set(level, &residues)
        }
        _ => {
            let len = rng.gen_range(1..=4);
            let lo = rng.gen_range(-3..=3);
            let words: Vec<_> = space.language(len)?.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            space.cylinder(lo, &words)
        }
    }
}

pub fn random_nonempty_clopen<R: Rng>(space: &Space, rng: &mut R) -> Result<ClopenSet> {
    loop {
        let a = random_clopen(space, rng)?;
        if !a.is_empty() {
            return Ok(a);
        }
    }
}

/// A single residue class or cylinder.
fn random_cell<R: Rng>(space: &Space, rng: &mut R) -> Result<ClopenSet> {
    match space.kind() {
        SpaceKind::Odometer => {
            let level = rng.gen_range(1..=max_level(space, 64).max(1));
            let m = space.modulus(level)?;
            space.residue_set(level, &[rng.gen_range(0..m)])
        }
        _ => {
            let len = rng.gen_range(1..=5);
            let words = space.language(len)?;
            let w = words.choose(rng).expect("nonempty language").clone();
            space.cylinder(rng.gen_range(-2..=2), &[w])
        }
    }
}

/// Product of disjoint slice involutions with moves of at most `reach`.
fn random_swaps<R: Rng>(space: &Space, rng: &mut R, reach: u64) -> Result<Element> {
    let mut g = Element::identity(space);
    if reach == 0 {
        return Ok(g);
    }
    let mut used = space.empty();
    for _ in 0..rng.gen_range(1..=6) {
        let u = random_cell(space, rng)?;
        let n = rng.gen_range(1..=reach as i64);
        let image = space.shift_image(&u, n);
        let both = space.union(&u, &image)?;
        if !space.is_disjoint(&u, &image)? || !space.is_disjoint(&both, &used)? {
            continue;
        }
        used = space.union(&used, &both)?;
        g = g.compose(&involution_from_slice(space, &u, n)?)?;
    }
    Ok(g)
}

/// Random element with cocycle bound at most `bound`: a power of the shift
/// composed with two layers of disjoint slice swaps.
pub fn random_element<R: Rng>(space: &Space, rng: &mut R, bound: u64) -> Result<Element> {
    let b = bound as i64;
    let s = rng.gen_range(-b..=b);
    let rest = bound - s.unsigned_abs();
    let first = rng.gen_range(0..=rest);
    let a = random_swaps(space, rng, first)?;
    let c = random_swaps(space, rng, rest - first)?;
    a.compose(&c)?.compose(&Element::shift(space, s))
}

/// Random table from `expansions` random leaf expansions of the roots on each
/// side (depth at most `max_depth`), with a random bijection between leaves
/// ending at the same vertex. Not canonicalized.
pub fn random_table<R: Rng>(
    language: &PathLanguage,
    rng: &mut R,
    expansions: usize,
    max_depth: usize,
) -> Result<ThompsonTable> {
    for _ in 0..1000 {
        let domain = random_basis(language, rng, expansions, max_depth);
        let range = random_basis(language, rng, expansions, max_depth);
        let by_vertex = |basis: &[Path]| {
            let mut m: BTreeMap<Option<u32>, Vec<Path>> = BTreeMap::new();
            for w in basis {
                m.entry(end_vertex(language, w)).or_default().push(w.clone());
            }
            m
        };
        let (dm, mut rm) = (by_vertex(&domain), by_vertex(&range));
        if dm.iter().any(|(v, ws)| rm.get(v).map(Vec::len) != Some(ws.len())) || dm.len() != rm.len() {
            continue;
        }
        let (mut dom, mut ran) = (Vec::new(), Vec::new());
        for (v, ws) in dm {
            let targets = rm.get_mut(&v).expect("same vertices");
            targets.shuffle(rng);
            dom.extend(ws);
            ran.append(targets);
        }
        return ThompsonTable::unreduced(language.clone(), dom, ran);
    }
    Ok(ThompsonTable::identity(language))
}

fn end_vertex(language: &PathLanguage, w: &[u32]) -> Option<u32> {
    match language {
        PathLanguage::Free { .. } => None,
        PathLanguage::Graph { edges } => w.last().map(|&e| edges[e as usize].1),
    }
}

fn random_basis<R: Rng>(language: &PathLanguage, rng: &mut R, expansions: usize, max_depth: usize) -> Vec<Path> {
    let mut basis = language.roots();
    for _ in 0..expansions {
        let open: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].len() < max_depth).collect();
        let Some(&i) = open.choose(rng) else { break };
        let w = basis.swap_remove(i);
        basis.extend(language.children(&w));
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn elements_respect_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in [SpaceSpec::odometer(&[2]), SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])] {
            let s = Space::new(spec).unwrap();
            for _ in 0..20 {
                let g = random_element(&s, &mut rng, 3).unwrap();
                assert!(g.cocycle_bound() <= 3);
            }
        }
    }

    #[test]
    fn tables_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lang = PathLanguage::graph(vec![(0, 0), (0, 1), (1, 0)]);
        for _ in 0..20 {
            let t = random_table(&lang, &mut rng, 4, 5).unwrap();
            assert_eq!(t.domain().len(), t.range().len());
        }
    }
}
