//! Standard elements: slice involutions, induced transformations, multisection
//! cycles, and the lamplighter and wreath generators built from them.

use super::{Atom, Element};
use crate::error::{Error, Result};
use crate::spaces::{ClopenSet, Space};
use crate::towers::first_return_partition;

/// `φ^n` on `U`, `φ^-n` on `φ^n(U)`, identity elsewhere.
pub fn involution_from_slice(space: &Space, u: &ClopenSet, n: i64) -> Result<Element> {
    if u.is_empty() {
        return Ok(Element::identity(space));
    }
    let image = space.shift_image(u, n);
    if !space.is_disjoint(u, &image)? {
        return Err(Error::OverlappingSlice);
    }
    let rest = space.complement(&space.union(u, &image)?)?;
    Element::canonical(space, vec![Atom::new(u.clone(), n), Atom::new(image, -n), Atom::new(rest, 0)])
}

/// `φ_A`: the first return map on `A`, identity off `A`.
pub fn induced_transformation(space: &Space, a: &ClopenSet) -> Result<Element> {
    let mut atoms: Vec<Atom> =
        first_return_partition(space, a)?.into_iter().map(|(piece, t)| Atom::new(piece, t as i64)).collect();
    atoms.push(Atom::new(space.complement(a)?, 0));
    Element::canonical(space, atoms)
}

/// Degree-`d` family of slices `M_ij = (D_i, p_ij)` with `φ^{p_ij}(D_i) = D_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multisection {
    space: Space,
    domains: Vec<ClopenSet>,
    powers: Vec<Vec<i64>>,
}

impl Multisection {
    /// Validate a full table of domains and powers.
    pub fn new(space: &Space, domains: Vec<ClopenSet>, powers: Vec<Vec<i64>>) -> Result<Multisection> {
        let d = domains.len();
        let bad = |m: String| Err(Error::InvalidMultisection(m));
        if d == 0 || powers.len() != d || powers.iter().any(|row| row.len() != d) {
            return bad("need a square table of powers matching the domains".into());
        }
        if domains.iter().any(ClopenSet::is_empty) {
            return bad("domains must be nonempty".into());
        }
        for i in 0..d {
            for j in 0..d {
                if i == j && powers[i][i] != 0 {
                    return bad(format!("M_{i}{i} must be the identity slice"));
                }
                if i < j && !space.is_disjoint(&domains[i], &domains[j])? {
                    return bad(format!("domains {i} and {j} overlap"));
                }
                if space.shift_image(&domains[i], powers[i][j]) != domains[j] {
                    return bad(format!("M_{i}{j} does not map domain {i} onto domain {j}"));
                }
                for k in 0..d {
                    if powers[i][j] + powers[j][k] != powers[i][k] {
                        return bad(format!("M_{j}{k} ∘ M_{i}{j} differs from M_{i}{k}"));
                    }
                }
            }
        }
        Ok(Multisection { space: space.clone(), domains, powers })
    }

    /// Domains `φ^{o_i}(base)`; `offsets[0]` is usually 0.
    pub fn from_offsets(space: &Space, base: &ClopenSet, offsets: &[i64]) -> Result<Multisection> {
        let domains = offsets.iter().map(|&o| space.shift_image(base, o)).collect();
        let powers = offsets.iter().map(|&oi| offsets.iter().map(|&oj| oj - oi).collect()).collect();
        Multisection::new(space, domains, powers)
    }

    pub fn degree(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[ClopenSet] {
        &self.domains
    }

    /// `𝓜_π`: acts as `M_{i,π(i)}` on `D_i`, identity off the domains.
    /// `pi` is a permutation of `0..d`.
    pub fn cycle(&self, pi: &[usize]) -> Result<Element> {
        let d = self.degree();
        let mut seen = vec![false; d];
        if pi.len() != d || pi.iter().any(|&j| j >= d || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::InvalidMultisection(format!("{pi:?} is not a permutation of 0..{d}")));
        }
        let mut atoms: Vec<Atom> = (0..d).map(|i| Atom::new(self.domains[i].clone(), self.powers[i][pi[i]])).collect();
        let covered = self.space.union_all(&self.domains)?;
        atoms.push(Atom::new(self.space.complement(&covered)?, 0));
        Element::canonical(&self.space, atoms)
    }
}

/// Generators of the lamplighter subgroup, with the pieces they are built from.
#[derive(Debug, Clone)]
pub struct Lamplighter {
    pub x: Element,
    pub y: Element,
    pub tau: Element,
    pub r: Element,
    pub phi_u: Element,
}

/// `x = [τ_C^-1, φ^-2]` and `y = [r^-1, φ^-2]` where `τ_C` swaps `C` with `φ(C)`
/// and `r = φ_U ∘ φ ∘ φ_U ∘ φ^-1`; commutators are `[a, b] = a^-1 b^-1 a b`.
/// Checks `x^2 = 1` and `[x, y^k x y^-k] = 1` for `1 <= k <= relations`.
pub fn lamplighter_generators(space: &Space, u: &ClopenSet, c: &ClopenSet, relations: usize) -> Result<Lamplighter> {
    let shifts: Vec<ClopenSet> = (0..4).map(|k| space.shift_image(u, k)).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            if !space.is_disjoint(&shifts[i], &shifts[j])? {
                return Err(Error::DisjointnessFailure(format!("φ^{i}(U) and φ^{j}(U) intersect")));
            }
        }
    }
    if c.is_empty() || !space.is_subset(c, u)? {
        return Err(Error::BadC);
    }
    let phi = Element::shift(space, 1);
    let phi_inv = Element::shift(space, -1);
    let phi_m2 = Element::shift(space, -2);
    let tau = involution_from_slice(space, c, 1)?;
    let phi_u = induced_transformation(space, u)?;
    let r = phi_u.compose(&phi)?.compose(&phi_u)?.compose(&phi_inv)?;
    let x = tau.inverse()?.commutator(&phi_m2)?;
    let y = r.inverse()?.commutator(&phi_m2)?;
    if !x.compose(&x)?.is_identity() {
        return Err(Error::DisjointnessFailure("x^2 is not the identity".into()));
    }
    let mut yk = Element::identity(space);
    for k in 1..=relations {
        yk = yk.compose(&y)?;
        let conj = x.conjugate_by(&yk)?;
        if !x.commutator(&conj)?.is_identity() {
            return Err(Error::DisjointnessFailure(format!("[x, y^{k} x y^-{k}] is not the identity")));
        }
    }
    Ok(Lamplighter { x, y, tau, r, phi_u })
}

/// `φ_U` followed by the transpositions of adjacent tower levels
/// `φ^k(U) ↔ φ^{k+1}(U)` for `0 <= k < n - 1`.
pub fn tower_wreath_generators(space: &Space, u: &ClopenSet, n: usize) -> Result<Vec<Element>> {
    let levels: Vec<ClopenSet> = (0..n).map(|k| space.shift_image(u, k as i64)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !space.is_disjoint(&levels[i], &levels[j])? {
                return Err(Error::DisjointnessFailure(format!("levels {i} and {j} intersect")));
            }
        }
    }
    let mut gens = vec![induced_transformation(space, u)?];
    for level in levels.iter().take(n.saturating_sub(1)) {
        gens.push(involution_from_slice(space, level, 1)?);
    }
    Ok(gens)
}
