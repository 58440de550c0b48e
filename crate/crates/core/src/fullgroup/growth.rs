//! Ball enumeration in the group and on orbits (Schreier graphs).

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::Element;
use crate::error::{Error, Result};
use crate::spaces::PointOracle;

#[derive(Debug, Clone)]
pub struct GrowthReport {
    /// Symmetric generating set actually used.
    pub generators: Vec<Element>,
    pub radius: usize,
    /// `sizes[k]` = number of elements of word length at most `k`.
    pub sizes: Vec<usize>,
    /// The whole ball, sorted by canonical key.
    pub census: Vec<Element>,
}

/// Breadth-first enumeration of the ball of radius `radius`, using right
/// multiplication by the symmetric closure of `generators`. Fails once more
/// than `cap` elements have been found.
pub fn ball_growth(generators: &[Element], radius: usize, cap: usize) -> Result<GrowthReport> {
    let first = generators.first().ok_or_else(|| Error::InvalidSpec("need at least one generator".into()))?;
    let space = first.space().clone();
    let mut closure = BTreeSet::new();
    for g in generators {
        space.check_same(g.space())?;
        closure.insert(g.clone());
        closure.insert(g.inverse()?);
    }
    let gens: Vec<Element> = closure.into_iter().collect();

    let id = Element::identity(&space);
    let mut seen: HashSet<Element> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    let mut sizes = vec![1];
    for _ in 0..radius {
        let mut next = BTreeSet::new();
        for g in &frontier {
            for s in &gens {
                let h = g.compose(s)?;
                if !seen.contains(&h) {
                    seen.insert(h.clone());
                    if seen.len() > cap {
                        return Err(Error::BudgetExceeded(format!("ball exceeds {cap} elements")));
                    }
                    next.insert(h);
                }
            }
        }
        frontier = next.into_iter().collect();
        sizes.push(seen.len());
    }
    let mut census: Vec<Element> = seen.into_iter().collect();
    census.sort();
    Ok(GrowthReport { generators: gens, radius, sizes, census })
}

/// Ball around `x` in the Schreier graph of `generators` on the orbit of `x`.
/// Vertex `j` stands for `φ^j(x)`; distances ignore edge direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierBall {
    pub vertices: Vec<i64>,
    /// `(from, to, generator index)`, sorted.
    pub edges: Vec<(i64, i64, usize)>,
}

pub fn schreier_ball(generators: &[Element], x: &PointOracle, radius: usize) -> Result<SchreierBall> {
    x.space().require_minimal("Schreier graph")?;
    for g in generators {
        x.space().check_same(g.space())?;
    }
    let inverses = generators.iter().map(Element::inverse).collect::<Result<Vec<_>>>()?;
    let mut dist: BTreeMap<i64, usize> = BTreeMap::from([(0, 0)]);
    let mut queue = VecDeque::from([0i64]);
    while let Some(j) = queue.pop_front() {
        let d = dist[&j];
        if d == radius {
            continue;
        }
        let p = x.shifted(j)?;
        for g in generators.iter().chain(&inverses) {
            let k = j + g.cocycle_at(&p)?;
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(k) {
                e.insert(d + 1);
                queue.push_back(k);
            }
        }
    }
    let mut edges = Vec::new();
    for &j in dist.keys() {
        let p = x.shifted(j)?;
        for (s, g) in generators.iter().enumerate() {
            let k = j + g.cocycle_at(&p)?;
            if dist.contains_key(&k) {
                edges.push((j, k, s));
            }
        }
    }
    edges.sort();
    Ok(SchreierBall { vertices: dist.into_keys().collect(), edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fullgroup::involution_from_slice;
    use crate::spaces::{Space, SpaceSpec};

    fn dyadic() -> Space {
        Space::new(SpaceSpec::odometer(&[2])).unwrap()
    }

    #[test]
    fn growth_of_small_groups() {
        let s = dyadic();
        let phi = Element::shift(&s, 1);
        let swap = involution_from_slice(&s, &s.residue_set(1, &[0]).unwrap(), 1).unwrap();
        assert_eq!(ball_growth(std::slice::from_ref(&phi), 3, 100).unwrap().sizes, vec![1, 3, 5, 7]);
        assert_eq!(ball_growth(std::slice::from_ref(&swap), 2, 100).unwrap().sizes, vec![1, 2, 2]);
        assert_eq!(ball_growth(&[swap, phi.clone()], 1, 100).unwrap().sizes, vec![1, 4]);
        let err = ball_growth(&[phi], 10, 5).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn schreier_graphs() {
        let s = dyadic();
        let x = s.designated_point();
        let phi = Element::shift(&s, 1);
        let b = schreier_ball(&[phi.clone(), phi.inverse().unwrap()], &x, 2).unwrap();
        assert_eq!(b.vertices, vec![-2, -1, 0, 1, 2]);
        let b = schreier_ball(&[Element::identity(&s)], &x, 3).unwrap();
        assert_eq!(b.vertices, vec![0]);
        assert_eq!(b.edges, vec![(0, 0, 0)]);
        let swap = involution_from_slice(&s, &s.residue_set(1, &[0]).unwrap(), 1).unwrap();
        let b = schreier_ball(&[swap], &x, 1).unwrap();
        assert_eq!(b.edges, vec![(0, 1, 0), (1, 0, 0)]);
    }
}
