//! Coordinate oracles for the designated point of a space and its shifts.

use std::fmt;

use super::{ClopenSet, Model, Space, Symbol, Word};
use crate::error::{Error, Result};

/// The point `φ^offset(x)` for the designated point `x` of a space.
#[derive(Clone, PartialEq, Eq)]
pub struct PointOracle {
    space: Space,
    offset: i64,
}

impl fmt::Debug for PointOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointOracle({}, {})", self.name(), self.offset)
    }
}

impl PointOracle {
    pub(crate) fn new(space: Space) -> Self {
        PointOracle { space, offset: 0 }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Description of the underlying designated point.
    pub fn name(&self) -> String {
        match self.space.model() {
            Model::Odometer { .. } => "all-zeros".to_string(),
            Model::Substitution(_) => {
                let (l, r, p) = self.space.fixed_point_seed().expect("substitution");
                format!("fixed point {l}.{r} of power {p}")
            }
            Model::Sft(s) => format!("periodic point ({})", self.space.format_word(&s.period)),
        }
    }

    /// `φ^n` applied to this point.
    pub fn shifted(&self, n: i64) -> Result<PointOracle> {
        let offset = self
            .offset
            .checked_add(n)
            .filter(|o| o.unsigned_abs() <= self.space.limits().max_point_depth)
            .ok_or_else(|| Error::DepthExceeded(format!("orbit offset {} + {n}", self.offset)))?;
        Ok(PointOracle { space: self.space.clone(), offset })
    }

    /// Coordinate `i` of a subshift point.
    pub fn coordinate(&self, i: i64) -> Result<Symbol> {
        let j = i
            .checked_add(self.offset)
            .filter(|j| j.unsigned_abs() <= self.space.limits().max_point_depth)
            .ok_or_else(|| Error::DepthExceeded(format!("coordinate {i}")))?;
        match self.space.model() {
            Model::Odometer { .. } => {
                Err(Error::UnsupportedForSpace("odometer points have residues, not symbols".into()))
            }
            Model::Substitution(s) => Ok(s.coordinate(j)),
            Model::Sft(s) => Ok(s.period[j.rem_euclid(s.period.len() as i64) as usize]),
        }
    }

    /// Coordinates `lo..=hi`.
    pub fn read_window(&self, lo: i64, hi: i64) -> Result<Word> {
        (lo..=hi).map(|i| self.coordinate(i)).collect()
    }

    /// Residue modulo `a_level` of an odometer point.
    pub fn residue(&self, level: u32) -> Result<u64> {
        match self.space.model() {
            Model::Odometer { .. } => {
                let m = self.space.modulus(level)?;
                Ok(self.offset.rem_euclid(m as i64) as u64)
            }
            _ => Err(Error::UnsupportedForSpace("only odometer points have residues".into())),
        }
    }

    pub fn contains(&self, a: &ClopenSet) -> Result<bool> {
        if let (Some(level), Some(res)) = (a.level(), a.residues()) {
            let r = self.residue(level)?;
            return Ok(res.binary_search(&r).is_ok());
        }
        let (lo, hi) = a.interval().expect("window");
        let words = a.words().expect("window");
        if hi < lo {
            return Ok(!words.is_empty());
        }
        let w = self.read_window(lo, hi)?;
        Ok(words.binary_search(&w).is_ok())
    }

    /// A clopen neighbourhood: the residue class at `depth` for odometers, the
    /// cylinder `x_[-depth, depth-1]` for subshifts.
    pub fn neighbourhood(&self, depth: u32) -> Result<ClopenSet> {
        match self.space.model() {
            Model::Odometer { .. } => self.space.residue_set(depth, &[self.residue(depth)?]),
            _ => {
                let d = depth as i64;
                if d == 0 {
                    return Ok(self.space.full());
                }
                let w = self.read_window(-d, d - 1)?;
                self.space.cylinder(-d, &[w])
            }
        }
    }
}

impl Space {
    /// Index of the unique set in `partition` containing `p`.
    pub fn locate(&self, p: &PointOracle, partition: &[ClopenSet]) -> Result<usize> {
        self.check_same(p.space())?;
        if !self.is_partition(partition)? {
            return Err(Error::NotAPartition("sets do not partition the space".into()));
        }
        locate_in(p, partition)
    }
}

/// Like [`Space::locate`] for a partition already known to be valid.
pub(crate) fn locate_in(p: &PointOracle, partition: &[ClopenSet]) -> Result<usize> {
    for (i, a) in partition.iter().enumerate() {
        if p.contains(a)? {
            return Ok(i);
        }
    }
    Err(Error::NotAPartition("point lies in no set".into()))
}
