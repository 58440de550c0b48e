//! Kakutani-Rokhlin partitions, nested sequences of them, and the ordered
//! Bratteli diagrams they induce.

mod bratteli;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{ClopenJson, ClopenSet, PointOracle, Space, SpaceKind};

pub use bratteli::{
    bratteli_from_nested, incidence_matrices, pushforward, telescope, vershik_step, BratteliDiagram, Edge,
    VershikResult,
};

/// Base `A` and height `h`; the levels are `φ^k(A)` for `0 <= k < h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub base: ClopenSet,
    pub height: usize,
}

/// A partition of the space into towers of clopen levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRPartition {
    space: Space,
    towers: Vec<Tower>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerJson {
    pub base: ClopenJson,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRJson {
    pub towers: Vec<TowerJson>,
}

impl KRPartition {
    /// Validate that the levels of all towers partition the space.
    pub fn new(space: &Space, towers: Vec<Tower>) -> Result<KRPartition> {
        if towers.iter().any(|t| t.height == 0 || t.base.is_empty()) {
            return Err(Error::NotAPartition("towers need a nonempty base and height >= 1".into()));
        }
        let kr = KRPartition { space: space.clone(), towers };
        let atoms: Vec<ClopenSet> = kr.atoms().into_iter().map(|(_, _, a)| a).collect();
        if !space.is_partition(&atoms)? {
            return Err(Error::NotAPartition("tower levels do not partition the space".into()));
        }
        Ok(kr)
    }

    /// The partition `{X}` with one tower of height 1.
    pub fn trivial(space: &Space) -> KRPartition {
        KRPartition { space: space.clone(), towers: vec![Tower { base: space.full(), height: 1 }] }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn towers(&self) -> &[Tower] {
        &self.towers
    }

    /// Level `k` of tower `i`.
    pub fn atom(&self, i: usize, k: usize) -> ClopenSet {
        self.space.shift_image(&self.towers[i].base, k as i64)
    }

    /// `(tower, level, clopen)` for every atom, tower by tower.
    pub fn atoms(&self) -> Vec<(usize, usize, ClopenSet)> {
        let mut out = Vec::new();
        for (i, t) in self.towers.iter().enumerate() {
            for k in 0..t.height {
                out.push((i, k, self.atom(i, k)));
            }
        }
        out
    }

    pub fn atom_count(&self) -> usize {
        self.towers.iter().map(|t| t.height).sum()
    }

    /// Union of the tower bases.
    pub fn base(&self) -> Result<ClopenSet> {
        self.space.union_all(self.towers.iter().map(|t| &t.base))
    }

    /// Union of the top levels.
    pub fn roof(&self) -> Result<ClopenSet> {
        let tops: Vec<ClopenSet> = (0..self.towers.len()).map(|i| self.atom(i, self.towers[i].height - 1)).collect();
        self.space.union_all(&tops)
    }

    /// Union of all levels of tower `i`.
    pub fn tower_set(&self, i: usize) -> Result<ClopenSet> {
        let levels: Vec<ClopenSet> = (0..self.towers[i].height).map(|k| self.atom(i, k)).collect();
        self.space.union_all(&levels)
    }

    pub fn min_height(&self) -> usize {
        self.towers.iter().map(|t| t.height).min().unwrap_or(0)
    }

    pub fn max_height(&self) -> usize {
        self.towers.iter().map(|t| t.height).max().unwrap_or(0)
    }

    /// Tower and level of the atom containing `p`.
    pub fn locate(&self, p: &PointOracle) -> Result<(usize, usize)> {
        for (i, t) in self.towers.iter().enumerate() {
            for k in 0..t.height {
                if p.contains(&self.atom(i, k))? {
                    return Ok((i, k));
                }
            }
        }
        Err(Error::NotAPartition("point lies in no tower".into()))
    }

    pub fn to_json(&self) -> KRJson {
        KRJson {
            towers: self
                .towers
                .iter()
                .map(|t| TowerJson { base: self.space.clopen_to_json(&t.base), height: t.height })
                .collect(),
        }
    }

    pub fn from_json(space: &Space, j: &KRJson) -> Result<KRPartition> {
        let towers = j
            .towers
            .iter()
            .map(|t| Ok(Tower { base: space.clopen_from_json(&t.base)?, height: t.height }))
            .collect::<Result<Vec<_>>>()?;
        KRPartition::new(space, towers)
    }
}

/// Pieces `A_t = {x ∈ A : first return time to A is t}`, by increasing `t`.
pub fn first_return_partition(space: &Space, a: &ClopenSet) -> Result<Vec<(ClopenSet, usize)>> {
    space.require_minimal("first return")?;
    if a.is_empty() {
        return Err(Error::InvalidClopen("first return needs a nonempty set".into()));
    }
    let mut remaining = a.clone();
    let mut pieces = Vec::new();
    for t in 1..=space.limits().max_return_time {
        let back = space.shift_image(a, -(t as i64));
        let piece = space.intersect(&remaining, &back)?;
        if !piece.is_empty() {
            remaining = space.difference(&remaining, &piece)?;
            pieces.push((piece, t));
            if remaining.is_empty() {
                return Ok(pieces);
            }
        }
    }
    Err(Error::DepthExceeded(format!("no first return within {} steps", space.limits().max_return_time)))
}

/// Towers over the pieces of the first-return partition of `a`.
pub fn kr_from_base(space: &Space, a: &ClopenSet) -> Result<KRPartition> {
    let towers = first_return_partition(space, a)?.into_iter().map(|(base, height)| Tower { base, height }).collect();
    KRPartition::new(space, towers)
}

/// Split tower bases by their itineraries through `p`, so that every level of
/// the result lies inside one set of `p`.
pub fn refine_kr(kr: &KRPartition, p: &[ClopenSet]) -> Result<KRPartition> {
    if !kr.space.is_partition(p)? {
        return Err(Error::NotAPartition("refining sets do not partition the space".into()));
    }
    Ok(refine_with_itinerary(kr, p)?.0)
}

/// Refinement of `kr` by a partition `p` known to be valid, together with
/// the index into `p` of the set containing each level of each new tower.
pub(crate) fn refine_with_itinerary(kr: &KRPartition, p: &[ClopenSet]) -> Result<(KRPartition, Vec<Vec<usize>>)> {
    let space = &kr.space;
    let mut towers = Vec::new();
    let mut itineraries = Vec::new();
    for t in &kr.towers {
        let mut pieces = vec![(t.base.clone(), Vec::with_capacity(t.height))];
        for k in 0..t.height {
            let mut next = Vec::new();
            for (q, path) in &pieces {
                for (i, c) in p.iter().enumerate() {
                    if c.is_empty() {
                        continue;
                    }
                    let piece = space.intersect(q, &space.shift_image(c, -(k as i64)))?;
                    if !piece.is_empty() {
                        let mut path = path.clone();
                        path.push(i);
                        next.push((piece, path));
                    }
                }
            }
            pieces = next;
        }
        pieces.sort();
        for (base, path) in pieces {
            towers.push(Tower { base, height: t.height });
            itineraries.push(path);
        }
    }
    Ok((KRPartition { space: space.clone(), towers }, itineraries))
}

/// Partitions `𝒜_1, 𝒜_2, ...` each refining the previous, with bases shrinking
/// to the point and strictly increasing minimal heights.
#[derive(Debug, Clone)]
pub struct NestedKRSequence {
    point: PointOracle,
    levels: Vec<KRPartition>,
    depths: Vec<u32>,
}

impl NestedKRSequence {
    pub fn levels(&self) -> &[KRPartition] {
        &self.levels
    }

    /// Depth of the neighbourhood used as base at each stored level.
    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn point(&self) -> &PointOracle {
        &self.point
    }

    pub fn space(&self) -> &Space {
        self.point.space()
    }
}

/// Nested sequence around `x` with `levels` stored partitions. The base at
/// depth `n` is the residue class of `x` mod `a_n` (odometer) or the cylinder
/// `x_[-n, n-1]` (subshift); depths that do not raise the minimal height are
/// skipped.
pub fn nested_sequence(space: &Space, x: &PointOracle, levels: usize) -> Result<NestedKRSequence> {
    space.require_minimal("nested sequence")?;
    space.check_same(x.space())?;
    let mut out: Vec<KRPartition> = Vec::new();
    let mut depths = Vec::new();
    let mut depth = 0u32;
    let max_depth = 64 + 4 * levels as u32;
    while out.len() < levels {
        depth += 1;
        if depth > max_depth {
            return Err(Error::DepthExceeded(format!("no {levels} nested levels by depth {max_depth}")));
        }
        let base = x.neighbourhood(depth)?;
        let mut kr = kr_from_base(space, &base)?;
        if let Some(prev) = out.last() {
            if kr.min_height() <= prev.min_height() {
                continue;
            }
            let atoms: Vec<ClopenSet> = prev.atoms().into_iter().map(|(_, _, a)| a).collect();
            kr = refine_kr(&kr, &atoms)?;
        }
        out.push(kr);
        depths.push(depth);
    }
    Ok(NestedKRSequence { point: x.clone(), levels: out, depths })
}

/// `μ(A)` for the unique invariant measure of an odometer.
pub fn odometer_measure(space: &Space, a: &ClopenSet) -> Result<Ratio<u64>> {
    if space.kind() != SpaceKind::Odometer {
        return Err(Error::UnsupportedForSpace("exact measures are available for odometers".into()));
    }
    let count = a.residues().expect("odometer clopen").len() as u64;
    Ok(Ratio::new(count, a.modulus().expect("odometer clopen")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceSpec;

    fn dyadic() -> Space {
        Space::new(SpaceSpec::odometer(&[2, 2, 2])).unwrap()
    }

    fn fibonacci() -> Space {
        Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])).unwrap()
    }

    #[test]
    fn dyadic_towers() {
        let s = dyadic();
        let kr = kr_from_base(&s, &s.residue_set(1, &[0]).unwrap()).unwrap();
        assert_eq!(kr.towers().len(), 1);
        assert_eq!(kr.towers()[0].height, 2);
        let kr = kr_from_base(&s, &s.residue_set(2, &[0]).unwrap()).unwrap();
        assert_eq!(kr.towers()[0].height, 4);
        let kr = kr_from_base(&s, &s.full()).unwrap();
        assert_eq!(kr.towers()[0].height, 1);
    }

    #[test]
    fn fibonacci_return_times() {
        let s = fibonacci();
        let b = s.cylinder_str(0, &["b"]).unwrap();
        let times: Vec<usize> = first_return_partition(&s, &b).unwrap().iter().map(|p| p.1).collect();
        assert_eq!(times, vec![2, 3]);
    }

    #[test]
    fn refine_splits_bases() {
        let s = dyadic();
        let kr = kr_from_base(&s, &s.residue_set(1, &[0]).unwrap()).unwrap();
        assert_eq!(refine_kr(&kr, &[s.full()]).unwrap(), kr);
        let p1 = s.residue_set(2, &[0, 1]).unwrap();
        let p2 = s.complement(&p1).unwrap();
        let r = refine_kr(&kr, &[p1, p2]).unwrap();
        let bases: Vec<ClopenSet> = r.towers().iter().map(|t| t.base.clone()).collect();
        assert_eq!(bases, vec![s.residue_set(2, &[0]).unwrap(), s.residue_set(2, &[2]).unwrap()]);
        KRPartition::new(&s, r.towers().to_vec()).unwrap();
    }

    #[test]
    fn nested_dyadic_heights() {
        let s = dyadic();
        let seq = nested_sequence(&s, &s.designated_point(), 3).unwrap();
        let heights: Vec<usize> = seq.levels().iter().map(|k| k.towers()[0].height).collect();
        assert_eq!(heights, vec![2, 4, 8]);
    }

    #[test]
    fn nested_fibonacci_refines() {
        let s = fibonacci();
        let x = s.designated_point();
        let seq = nested_sequence(&s, &x, 3).unwrap();
        for w in seq.levels().windows(2) {
            assert!(w[1].min_height() > w[0].min_height());
            let coarse: Vec<ClopenSet> = w[0].atoms().into_iter().map(|(_, _, a)| a).collect();
            for (_, _, a) in w[1].atoms() {
                assert!(coarse.iter().any(|c| s.is_subset(&a, c).unwrap()));
            }
            assert!(s.is_subset(&w[1].base().unwrap(), &w[0].base().unwrap()).unwrap());
        }
        for kr in seq.levels() {
            assert!(x.contains(&kr.base().unwrap()).unwrap());
        }
    }

    #[test]
    fn measures() {
        let s = dyadic();
        let a = s.residue_set(3, &[5]).unwrap();
        assert_eq!(odometer_measure(&s, &a).unwrap(), Ratio::new(1, 8));
        assert_eq!(odometer_measure(&s, &s.full()).unwrap(), Ratio::from_integer(1));
        assert_eq!(odometer_measure(&s, &s.shift_image(&a, 3)).unwrap(), Ratio::new(1, 8));
    }
}
