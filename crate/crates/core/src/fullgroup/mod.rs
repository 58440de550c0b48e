//! Elements of the topological full group: finite clopen partitions whose
//! atoms carry a power of the shift.

mod constructions;
mod decompose;
mod growth;
mod index;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{ClopenJson, ClopenSet, PointOracle, Space};

pub use constructions::{
    induced_transformation, involution_from_slice, lamplighter_generators, tower_wreath_generators, Lamplighter,
    Multisection,
};
pub use decompose::{decompose_perm_rotation, lef_quotient, Decomposition, LefQuotient};
pub use growth::{ball_growth, schreier_ball, GrowthReport, SchreierBall};
pub use index::{index, is_in_point_stabilizer, transfer_counts, wobbling_image, IndexMethod};

/// One piece of an element: acts as `φ^power` on `clopen`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub clopen: ClopenSet,
    pub power: i64,
}

impl Atom {
    pub fn new(clopen: ClopenSet, power: i64) -> Self {
        Atom { clopen, power }
    }
}

/// A full-group element in canonical form: one atom per distinct power, atoms
/// sorted by clopen key. Two elements are equal iff their canonical forms are.
#[derive(Clone)]
pub struct Element {
    space: Space,
    atoms: Vec<Atom>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms && self.space == other.space
    }
}

impl Eq for Element {}

impl std::hash::Hash for Element {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.atoms.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.atoms.cmp(&other.atoms)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(&self.to_json()).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

/// Result of [`Element::order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Finite(u64),
    /// No identity power up to the bound.
    Unknown(u64),
}

/// Cocycle bound and the per-atom exponent table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleReport {
    pub bound: u64,
    pub powers: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomJson {
    pub clopen: ClopenJson,
    pub power: i64,
}

/// JSON form of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub space: String,
    pub atoms: Vec<AtomJson>,
}

impl Element {
    /// Validate that the atoms and their images both partition the space.
    pub fn new(space: &Space, atoms: Vec<Atom>) -> Result<Element> {
        if atoms.is_empty() {
            return Err(Error::NotAPartition("element has no atoms".into()));
        }
        let domains: Vec<ClopenSet> = atoms.iter().map(|a| a.clopen.clone()).collect();
        if !space.is_partition(&domains)? {
            return Err(Error::NotAPartition("atoms do not partition the space".into()));
        }
        let images: Vec<ClopenSet> = atoms.iter().map(|a| space.shift_image(&a.clopen, a.power)).collect();
        if !space.is_partition(&images)? {
            return Err(Error::NotABijection("atom images do not partition the space".into()));
        }
        Element::canonical(space, atoms)
    }

    /// Canonicalize atoms already known to describe a valid element.
    pub(crate) fn canonical(space: &Space, atoms: Vec<Atom>) -> Result<Element> {
        let mut by_power: BTreeMap<i64, ClopenSet> = BTreeMap::new();
        for a in atoms {
            if a.clopen.is_empty() {
                continue;
            }
            let merged = match by_power.remove(&a.power) {
                Some(c) => space.union(&c, &a.clopen)?,
                None => a.clopen,
            };
            by_power.insert(a.power, merged);
        }
        let mut atoms: Vec<Atom> = by_power.into_iter().map(|(power, clopen)| Atom { clopen, power }).collect();
        atoms.sort();
        Ok(Element { space: space.clone(), atoms })
    }

    pub fn identity(space: &Space) -> Element {
        Element { space: space.clone(), atoms: vec![Atom::new(space.full(), 0)] }
    }

    /// `φ^k`.
    pub fn shift(space: &Space, k: i64) -> Element {
        Element { space: space.clone(), atoms: vec![Atom::new(space.full(), k)] }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_identity(&self) -> bool {
        self.atoms.len() == 1 && self.atoms[0].power == 0
    }

    /// `max |n_i|`.
    pub fn cocycle_bound(&self) -> u64 {
        self.atoms.iter().map(|a| a.power.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn cocycle_report(&self) -> CocycleReport {
        CocycleReport { bound: self.cocycle_bound(), powers: self.atoms.iter().map(|a| a.power).collect() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Element) -> Result<Element> {
        self.space.check_same(&other.space)?;
        let space = &self.space;
        let mut atoms = Vec::new();
        for h in &other.atoms {
            for g in &self.atoms {
                let pre = space.shift_image(&g.clopen, -h.power);
                let piece = space.intersect(&h.clopen, &pre)?;
                if !piece.is_empty() {
                    atoms.push(Atom::new(piece, h.power + g.power));
                }
            }
        }
        Element::canonical(space, atoms)
    }

    pub fn inverse(&self) -> Result<Element> {
        let atoms =
            self.atoms.iter().map(|a| Atom::new(self.space.shift_image(&a.clopen, a.power), -a.power)).collect();
        Element::canonical(&self.space, atoms)
    }

    pub fn pow(&self, k: i64) -> Result<Element> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut result = Element::identity(&self.space);
        let mut square = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&square)?;
            }
            e >>= 1;
            if e > 0 {
                square = square.compose(&square)?;
            }
        }
        Ok(result)
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Element) -> Result<Element> {
        self.inverse()?.compose(&other.inverse()?)?.compose(self)?.compose(other)
    }

    /// `other self other^-1`.
    pub fn conjugate_by(&self, other: &Element) -> Result<Element> {
        other.compose(self)?.compose(&other.inverse()?)
    }

    /// Image of a clopen set.
    pub fn image(&self, a: &ClopenSet) -> Result<ClopenSet> {
        let mut out = self.space.empty();
        for atom in &self.atoms {
            let piece = self.space.intersect(a, &atom.clopen)?;
            out = self.space.union(&out, &self.space.shift_image(&piece, atom.power))?;
        }
        Ok(out)
    }

    /// Union of the atoms with nonzero power; only meaningful on aperiodic spaces.
    pub fn support(&self) -> Result<ClopenSet> {
        self.space.require_minimal("support")?;
        self.space.union_all(self.atoms.iter().filter(|a| a.power != 0).map(|a| &a.clopen))
    }

    /// Least `k <= bound` with `self^k` the identity.
    pub fn order(&self, bound: u64) -> Result<Order> {
        let mut power = self.clone();
        for k in 1..=bound {
            if power.is_identity() {
                return Ok(Order::Finite(k));
            }
            if k < bound {
                power = power.compose(self)?;
            }
        }
        Ok(Order::Unknown(bound))
    }

    /// Cocycle value at a point.
    pub fn cocycle_at(&self, p: &PointOracle) -> Result<i64> {
        for a in &self.atoms {
            if p.contains(&a.clopen)? {
                return Ok(a.power);
            }
        }
        Err(Error::NotAPartition("point lies in no atom".into()))
    }

    /// Cocycle value at `p` and the image point.
    pub fn evaluate(&self, p: &PointOracle) -> Result<(i64, PointOracle)> {
        self.space.check_same(p.space())?;
        let n = self.cocycle_at(p)?;
        Ok((n, p.shifted(n)?))
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            space: self.space.id().to_string(),
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomJson { clopen: self.space.clopen_to_json(&a.clopen), power: a.power })
                .collect(),
        }
    }

    pub fn from_json(space: &Space, j: &ElementJson) -> Result<Element> {
        if j.space != space.id() {
            return Err(Error::SpaceMismatch);
        }
        let atoms = j
            .atoms
            .iter()
            .map(|a| Ok(Atom::new(space.clopen_from_json(&a.clopen)?, a.power)))
            .collect::<Result<Vec<_>>>()?;
        Element::new(space, atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceSpec;

    fn dyadic() -> Space {
        Space::new(SpaceSpec::odometer(&[2])).unwrap()
    }

    fn swap(s: &Space) -> Element {
        let even = s.residue_set(1, &[0]).unwrap();
        let odd = s.residue_set(1, &[1]).unwrap();
        Element::new(s, vec![Atom::new(even, 1), Atom::new(odd, -1)]).unwrap()
    }

    #[test]
    fn swap_is_an_involution() {
        let s = dyadic();
        let w = swap(&s);
        assert_eq!(w.inverse().unwrap(), w);
        assert_eq!(w.order(10).unwrap(), Order::Finite(2));
        assert_eq!(w.support().unwrap(), s.full());
        let p = s.designated_point();
        assert_eq!(w.evaluate(&p).unwrap().0, 1);
    }

    #[test]
    fn rejects_non_bijection() {
        let s = dyadic();
        let even = s.residue_set(1, &[0]).unwrap();
        let odd = s.residue_set(1, &[1]).unwrap();
        let r = Element::new(&s, vec![Atom::new(even.clone(), 1), Atom::new(odd.clone(), 0)]);
        assert!(matches!(r, Err(Error::NotABijection(_))));
        let r = Element::new(&s, vec![Atom::new(even.clone(), 1), Atom::new(s.full(), 0)]);
        assert!(matches!(r, Err(Error::NotAPartition(_))));
        // Both atoms moving by +1 is φ itself.
        let phi = Element::new(&s, vec![Atom::new(even, 1), Atom::new(odd, 1)]).unwrap();
        assert_eq!(phi, Element::shift(&s, 1));
    }

    #[test]
    fn compose_against_residue_evaluation() {
        let s = dyadic();
        let w = swap(&s);
        let phi = Element::shift(&s, 1);
        let c = w.compose(&phi).unwrap();
        // Oracle: act on residues mod 4 directly.
        let swap_res = |r: u64| if r.is_multiple_of(2) { (r + 1) % 4 } else { (r + 3) % 4 };
        for r in 0..4u64 {
            let expected = swap_res((r + 1) % 4);
            let set = s.residue_set(2, &[r]).unwrap();
            assert_eq!(c.image(&set).unwrap(), s.residue_set(2, &[expected]).unwrap());
        }
        assert_eq!(phi.compose(&phi).unwrap(), Element::shift(&s, 2));
        assert!(w.compose(&w.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn phi_has_infinite_order() {
        let s = dyadic();
        assert_eq!(Element::shift(&s, 1).order(100).unwrap(), Order::Unknown(100));
        assert_eq!(Element::identity(&s).order(5).unwrap(), Order::Finite(1));
        assert!(Element::identity(&s).support().unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let s = dyadic();
        let w = swap(&s);
        let j = w.to_json();
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"space":"odometer[2]","atoms":[{"clopen":{"level":1,"residues":[0]},"power":1},{"clopen":{"level":1,"residues":[1]},"power":-1}]}"#
        );
        assert_eq!(Element::from_json(&s, &j).unwrap(), w);
    }

    #[test]
    fn sft_support_is_gated() {
        let s = Space::new(SpaceSpec::sft(&["a", "b"], &["bb"])).unwrap();
        assert!(matches!(Element::shift(&s, 1).support(), Err(Error::UnsupportedForSpace(_))));
    }
}
