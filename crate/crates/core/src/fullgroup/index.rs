//! The index homomorphism, forward-orbit stabilizers and the wobbling image.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::Element;
use crate::error::{Error, Result};
use crate::spaces::{PointOracle, SpaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMethod {
    Orbit,
    Measure,
}

/// `(κ, λ)`: the number of orbit points `φ^j x` with `j <= 0` sent to `j' >= 1`,
/// and with `j >= 1` sent to `j' <= 0`.
///
/// With `N` the cocycle bound, a point `j <= -N` has `j + f <= 0` and a point
/// `j > N` has `j + f >= 1`, so only `j` in `[-N, N]` can cross.
pub fn transfer_counts(g: &Element, x: &PointOracle) -> Result<(u64, u64)> {
    g.space().require_minimal("index")?;
    g.space().check_same(x.space())?;
    let n = g.cocycle_bound() as i64;
    let mut kappa = 0;
    let mut lambda = 0;
    for j in -n..=n {
        let f = g.cocycle_at(&x.shifted(j)?)?;
        if j <= 0 && j + f >= 1 {
            kappa += 1;
        }
        if j >= 1 && j + f <= 0 {
            lambda += 1;
        }
    }
    Ok((kappa, lambda))
}

pub fn index(g: &Element, method: IndexMethod, x: &PointOracle) -> Result<i64> {
    match method {
        IndexMethod::Orbit => {
            let (k, l) = transfer_counts(g, x)?;
            Ok(k as i64 - l as i64)
        }
        IndexMethod::Measure => {
            let space = g.space();
            if space.kind() != SpaceKind::Odometer {
                return Err(Error::UnsupportedForSpace("the measure method needs an odometer".into()));
            }
            let mut total = Ratio::<i128>::from_integer(0);
            for a in g.atoms() {
                let modulus = a.clopen.modulus().expect("odometer clopen") as i128;
                let count = a.clopen.residues().expect("odometer clopen").len() as i128;
                total += Ratio::new(a.power as i128 * count, modulus);
            }
            if !total.is_integer() {
                return Err(Error::NonIntegerIndex(total.to_string()));
            }
            Ok(total.to_integer() as i64)
        }
    }
}

/// True iff `g` maps the forward orbit of `x` onto itself.
pub fn is_in_point_stabilizer(g: &Element, x: &PointOracle) -> Result<bool> {
    Ok(transfer_counts(g, x)? == (0, 0))
}

/// `k ↦ k + f_g(φ^k x)` for `k` in `[-w, w]`.
pub fn wobbling_image(g: &Element, x: &PointOracle, w: u64) -> Result<Vec<(i64, i64)>> {
    g.space().require_minimal("wobbling image")?;
    let w = w as i64;
    (-w..=w).map(|k| Ok((k, k + g.cocycle_at(&x.shifted(k)?)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fullgroup::Atom;
    use crate::spaces::{Space, SpaceSpec};

    #[test]
    fn index_of_basic_elements() {
        let s = Space::new(SpaceSpec::odometer(&[2])).unwrap();
        let x = s.designated_point();
        let phi = Element::shift(&s, 1);
        let even = s.residue_set(1, &[0]).unwrap();
        let odd = s.residue_set(1, &[1]).unwrap();
        let swap = Element::new(&s, vec![Atom::new(even, 1), Atom::new(odd, -1)]).unwrap();
        for m in [IndexMethod::Orbit, IndexMethod::Measure] {
            assert_eq!(index(&phi, m, &x).unwrap(), 1);
            assert_eq!(index(&swap, m, &x).unwrap(), 0);
            assert_eq!(index(&Element::shift(&s, -3), m, &x).unwrap(), -3);
        }
        assert!(is_in_point_stabilizer(&Element::identity(&s), &x).unwrap());
        assert!(!is_in_point_stabilizer(&phi, &x).unwrap());
        assert_eq!(transfer_counts(&phi, &x).unwrap(), (1, 0));
        assert!(!is_in_point_stabilizer(&swap, &x).unwrap());
    }

    #[test]
    fn measure_method_only_on_odometers() {
        let s = Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])).unwrap();
        let x = s.designated_point();
        let phi = Element::shift(&s, 1);
        assert_eq!(index(&phi, IndexMethod::Orbit, &x).unwrap(), 1);
        assert!(matches!(index(&phi, IndexMethod::Measure, &x), Err(Error::UnsupportedForSpace(_))));
    }

    #[test]
    fn wobbling_of_shift() {
        let s = Space::new(SpaceSpec::odometer(&[3])).unwrap();
        let x = s.designated_point();
        let w = wobbling_image(&Element::shift(&s, 1), &x, 2).unwrap();
        assert_eq!(w, vec![(-2, -1), (-1, 0), (0, 1), (1, 2), (2, 3)]);
    }
}
