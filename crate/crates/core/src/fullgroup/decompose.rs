//! Splitting an element into a tower-preserving part and a rotation, and the
//! finite quotients this induces.

use std::collections::BTreeSet;

use super::{induced_transformation, Element};
use crate::error::{Error, Result};
use crate::spaces::{ClopenSet, Space};
use crate::towers::{nested_sequence, refine_with_itinerary, KRPartition};

/// `g = p ∘ r` with `p` preserving every tower and `r` a product of induced
/// maps on the levels near the roof and the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub p: Element,
    pub r: Element,
    /// Upper bound on the number of tower bases any point crosses under `r`.
    pub rotation_number: u64,
}

/// If `g` carries the level `j < N` below the roof past the roof, `r` applies the
/// induced map on that level, moving it one tower on; likewise backwards for
/// levels above the base. Then `p = g ∘ r^-1`. Each boundary level must cross
/// as a whole.
pub fn decompose_perm_rotation(g: &Element, kr: &KRPartition) -> Result<Decomposition> {
    let space = g.space();
    space.check_same(kr.space())?;
    space.require_minimal("decomposition")?;
    let n = g.cocycle_bound() as usize;
    if kr.min_height() < 2 * n {
        return Err(Error::PartitionTooCoarse(format!(
            "minimal height {} is below twice the cocycle bound {n}",
            kr.min_height()
        )));
    }
    let base = kr.base()?;
    let mut r = Element::identity(space);
    for j in 0..n {
        let top = space.shift_image(&base, -(j as i64 + 1));
        if crosses(g, &top, |f| f > j as i64)? {
            r = r.compose(&induced_transformation(space, &top)?)?;
        }
        let bottom = space.shift_image(&base, j as i64);
        if crosses(g, &bottom, |f| f < -(j as i64))? {
            r = r.compose(&induced_transformation(space, &bottom)?.inverse()?)?;
        }
    }
    let p = g.compose(&r.inverse()?)?;
    for i in 0..kr.towers().len() {
        let t = kr.tower_set(i)?;
        if p.image(&t)? != t {
            return Err(Error::PartitionTooCoarse(format!("tower {i} is not preserved")));
        }
    }
    if p.compose(&r)? != *g {
        return Err(Error::PartitionTooCoarse("p ∘ r does not recover g".into()));
    }
    let rotation_number = rotation_bound(&r, &base)?;
    Ok(Decomposition { p, r, rotation_number })
}

/// Whether the cocycle of `g` satisfies `keep` on all of `level` (true) or
/// nowhere on it (false).
fn crosses(g: &Element, level: &ClopenSet, keep: impl Fn(i64) -> bool) -> Result<bool> {
    let space = g.space();
    let mut part = space.empty();
    for a in g.atoms().iter().filter(|a| keep(a.power)) {
        part = space.union(&part, &space.intersect(&a.clopen, level)?)?;
    }
    if part.is_empty() {
        Ok(false)
    } else if part == *level {
        Ok(true)
    } else {
        Err(Error::PartitionTooCoarse("cocycle is not constant on a boundary level".into()))
    }
}

/// Largest number of times a single point passes through the base (moving
/// forward) or leaves it (moving backward) along its move under `r`.
fn rotation_bound(r: &Element, base: &ClopenSet) -> Result<u64> {
    let space = r.space();
    let mut best = 0;
    for a in r.atoms() {
        let steps: Vec<i64> = if a.power > 0 { (1..=a.power).collect() } else { (0..-a.power).map(|t| -t).collect() };
        let mut regions = vec![(a.clopen.clone(), 0u64)];
        for t in steps {
            let hit = space.shift_image(base, -t);
            if space.is_disjoint(&a.clopen, &hit)? {
                continue;
            }
            let mut next = Vec::new();
            for (region, count) in regions {
                let inside = space.intersect(&region, &hit)?;
                let outside = space.difference(&region, &hit)?;
                if !inside.is_empty() {
                    next.push((inside, count + 1));
                }
                if !outside.is_empty() {
                    next.push((outside, count));
                }
            }
            regions = next;
        }
        best = best.max(regions.iter().map(|r| r.1).max().unwrap_or(0));
    }
    Ok(best)
}

/// A finite permutation model of a finite set of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LefQuotient {
    /// Number of nested levels used.
    pub levels: usize,
    /// Number of permuted points (tower levels of the refined partition).
    pub degree: usize,
    /// All products `γ1 ∘ γ2` with `γ1, γ2` in `F ∪ {id}`, sorted.
    pub elements: Vec<Element>,
    /// `images[i][k]` is the image of point `k` under `elements[i]`.
    pub images: Vec<Vec<usize>>,
}

impl LefQuotient {
    pub fn image(&self, g: &Element) -> Option<&[usize]> {
        self.elements.binary_search(g).ok().map(|i| self.images[i].as_slice())
    }
}

/// Map each product of two elements of `F ∪ {id}` to the permutation its
/// tower-preserving part induces on the levels of the nested partition with
/// `levels` levels, trying `min_levels..=max_levels` until the map is
/// injective on `F` and multiplicative on `F × F`.
pub fn lef_quotient(space: &Space, f: &[Element], min_levels: usize, max_levels: usize) -> Result<LefQuotient> {
    space.require_minimal("LEF quotient")?;
    for g in f {
        space.check_same(g.space())?;
    }
    let mut generators = vec![Element::identity(space)];
    generators.extend(f.iter().cloned());
    let mut elements = BTreeSet::new();
    for a in &generators {
        for b in &generators {
            elements.insert(a.compose(b)?);
        }
    }
    let elements: Vec<Element> = elements.into_iter().collect();
    let x = space.designated_point();
    for levels in min_levels.max(1)..=max_levels {
        let seq = nested_sequence(space, &x, levels)?;
        let kr = seq.levels().last().expect("nonempty sequence");
        let Some(images) = permutations(&elements, kr)? else { continue };
        let q = LefQuotient { levels, degree: images[0].len(), elements: elements.clone(), images };
        if faithful(&q, f)? {
            return Ok(q);
        }
    }
    Err(Error::PartitionDepthExceeded(format!("no faithful finite model within {max_levels} levels")))
}

fn faithful(q: &LefQuotient, f: &[Element]) -> Result<bool> {
    let image = |g: &Element| q.image(g).expect("product is tabulated");
    for a in f {
        for b in f {
            if a != b && image(a) == image(b) {
                return Ok(false);
            }
            let (pa, pb, pab) = (image(a), image(b), image(&a.compose(b)?));
            if (0..q.degree).any(|k| pa[pb[k]] != pab[k]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Permutations of the refined tower levels induced by the tower-preserving
/// parts of `elements`, or `None` when the partition is too coarse.
fn permutations(elements: &[Element], kr: &KRPartition) -> Result<Option<Vec<Vec<usize>>>> {
    let space = kr.space();
    let mut parts = Vec::new();
    for g in elements {
        match decompose_perm_rotation(g, kr) {
            Ok(d) => parts.push(d.p),
            Err(Error::PartitionTooCoarse(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    let sets: Vec<&ClopenSet> = parts.iter().flat_map(|p| p.atoms().iter().map(|a| &a.clopen)).collect();
    let fine = space.common_refinement(&sets)?;
    // Power of each part on each fine atom.
    let mut power = vec![vec![0i64; fine.len()]; parts.len()];
    for (k, p) in parts.iter().enumerate() {
        for (i, c) in fine.iter().enumerate() {
            let a = p.atoms().iter().find(|a| space.is_subset(c, &a.clopen).unwrap_or(false));
            power[k][i] = a.expect("fine atoms refine every part").power;
        }
    }
    let (refined, itineraries) = refine_with_itinerary(kr, &fine)?;
    let mut offsets = Vec::new();
    let mut total = 0;
    for t in refined.towers() {
        offsets.push(total);
        total += t.height;
    }
    let mut perms = Vec::new();
    for pw in &power {
        let mut perm = vec![0; total];
        for (t, tower) in refined.towers().iter().enumerate() {
            for k in 0..tower.height {
                let target = k as i64 + pw[itineraries[t][k]];
                if target < 0 || target >= tower.height as i64 {
                    return Ok(None);
                }
                perm[offsets[t] + k] = offsets[t] + target as usize;
            }
        }
        perms.push(perm);
    }
    Ok(Some(perms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fullgroup::{involution_from_slice, Atom};
    use crate::spaces::SpaceSpec;
    use crate::towers::kr_from_base;

    fn dyadic() -> Space {
        Space::new(SpaceSpec::odometer(&[2])).unwrap()
    }

    #[test]
    fn shift_on_single_tower() {
        let s = dyadic();
        let kr = kr_from_base(&s, &s.residue_set(2, &[0]).unwrap()).unwrap();
        let phi = Element::shift(&s, 1);
        let d = decompose_perm_rotation(&phi, &kr).unwrap();
        assert_eq!(d.p.compose(&d.r).unwrap(), phi);
        // r moves the roof level by a full tower height; p cycles the levels.
        let roof = s.residue_set(2, &[3]).unwrap();
        let rest = s.complement(&roof).unwrap();
        let r = Element::new(&s, vec![Atom::new(roof.clone(), 4), Atom::new(rest.clone(), 0)]).unwrap();
        let p = Element::new(&s, vec![Atom::new(roof, -3), Atom::new(rest, 1)]).unwrap();
        assert_eq!((&d.r, &d.p), (&r, &p));
        assert_eq!(d.rotation_number, 1);
        assert_eq!(decompose_perm_rotation(&phi, &kr).unwrap(), d);
    }

    #[test]
    fn permutation_has_trivial_rotation() {
        let s = dyadic();
        let kr = kr_from_base(&s, &s.residue_set(2, &[0]).unwrap()).unwrap();
        let swap = involution_from_slice(&s, &s.residue_set(1, &[0]).unwrap(), 1).unwrap();
        let d = decompose_perm_rotation(&swap, &kr).unwrap();
        assert!(d.r.is_identity());
        assert_eq!(d.p, swap);
    }

    #[test]
    fn too_coarse() {
        let s = dyadic();
        let kr = kr_from_base(&s, &s.residue_set(1, &[0]).unwrap()).unwrap();
        let g = Element::shift(&s, 3);
        assert!(matches!(decompose_perm_rotation(&g, &kr), Err(Error::PartitionTooCoarse(_))));
    }

    #[test]
    fn lef_of_swap() {
        let s = dyadic();
        let swap = involution_from_slice(&s, &s.residue_set(1, &[0]).unwrap(), 1).unwrap();
        let q = lef_quotient(&s, std::slice::from_ref(&swap), 1, 4).unwrap();
        assert_eq!(q.image(&swap).unwrap(), &[1, 0]);
        let q = lef_quotient(&s, std::slice::from_ref(&swap), 2, 4).unwrap();
        assert_eq!(q.image(&swap).unwrap(), &[1, 0, 3, 2]);
        let phi = Element::shift(&s, 1);
        let q = lef_quotient(&s, &[phi.clone(), phi.inverse().unwrap()], 1, 6).unwrap();
        let (a, b) = (q.image(&phi).unwrap(), q.image(&phi.inverse().unwrap()).unwrap());
        assert!((0..q.degree).all(|i| a[b[i]] == i));
        let id = Element::identity(&s);
        let q = lef_quotient(&s, std::slice::from_ref(&id), 1, 2).unwrap();
        assert_eq!(q.image(&id).unwrap(), &[0, 1]);
    }
}
