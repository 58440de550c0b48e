//! Exact clopen sets: word sets on an integer window (subshifts) or residue
//! sets at a level (odometers), always kept in canonical form.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Model, Space, Word};
use crate::error::{Error, Result};

/// Longest chain of minimal windows walked in one direction.
const MAX_CHAIN: usize = 4096;

/// A clopen subset of a space in canonical form.
///
/// Equality and ordering are those of the canonical encoding. The empty set
/// and the whole space use the empty window `[0, -1]` (with no words, resp. the
/// empty word) or level 0 (with no residues, resp. residue 0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClopenSet(Repr);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Residues {
        level: u32,
        modulus: u64,
        residues: Vec<u64>,
    },
    /// `period > 0` when the set is invariant under `φ^period`; its minimal
    /// windows then repeat along the whole line.
    Window {
        lo: i64,
        hi: i64,
        words: Vec<Word>,
        period: i64,
    },
}

/// JSON form of a clopen set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClopenJson {
    Window { interval: [i64; 2], words: Vec<String> },
    Residues { level: u32, residues: Vec<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
    SymmetricDifference,
}

impl ClopenSet {
    pub fn is_empty(&self) -> bool {
        match &self.0 {
            Repr::Residues { residues, .. } => residues.is_empty(),
            Repr::Window { words, .. } => words.is_empty(),
        }
    }

    /// `(lo, hi)` of a subshift clopen; `hi = lo - 1` for the empty window.
    pub fn interval(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Window { lo, hi, .. } => Some((*lo, *hi)),
            _ => None,
        }
    }

    pub fn words(&self) -> Option<&[Word]> {
        match &self.0 {
            Repr::Window { words, .. } => Some(words),
            _ => None,
        }
    }

    pub fn level(&self) -> Option<u32> {
        match &self.0 {
            Repr::Residues { level, .. } => Some(*level),
            _ => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.0 {
            Repr::Residues { residues, .. } => Some(residues),
            _ => None,
        }
    }

    pub(crate) fn modulus(&self) -> Option<u64> {
        match &self.0 {
            Repr::Residues { modulus, .. } => Some(*modulus),
            _ => None,
        }
    }
}

fn merge_sorted<T: Ord + Clone>(a: &[T], b: &[T], op: BoolOp) -> Vec<T> {
    use std::cmp::Ordering::*;
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    let keep = |in_a: bool, in_b: bool| match op {
        BoolOp::Union => in_a || in_b,
        BoolOp::Intersect => in_a && in_b,
        BoolOp::Difference => in_a && !in_b,
        BoolOp::SymmetricDifference => in_a != in_b,
    };
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Less,
            _ => Greater,
        };
        let (x, in_a, in_b) = match ord {
            Less => {
                i += 1;
                (&a[i - 1], true, false)
            }
            Greater => {
                j += 1;
                (&b[j - 1], false, true)
            }
            Equal => {
                i += 1;
                j += 1;
                (&a[i - 1], true, true)
            }
        };
        if keep(in_a, in_b) {
            out.push(x.clone());
        }
    }
    out
}

fn contains(words: &[Word], w: &[u8]) -> bool {
    words.binary_search_by(|u| u.as_slice().cmp(w)).is_ok()
}

impl Space {
    fn empty_repr(&self) -> Repr {
        match self.model() {
            Model::Odometer { .. } => Repr::Residues { level: 0, modulus: 1, residues: vec![] },
            _ => Repr::Window { lo: 0, hi: -1, words: vec![], period: 0 },
        }
    }

    pub fn empty(&self) -> ClopenSet {
        ClopenSet(self.empty_repr())
    }

    pub fn full(&self) -> ClopenSet {
        match self.model() {
            Model::Odometer { .. } => ClopenSet(Repr::Residues { level: 0, modulus: 1, residues: vec![0] }),
            _ => ClopenSet(Repr::Window { lo: 0, hi: -1, words: vec![vec![]], period: 0 }),
        }
    }

    fn require_subshift(&self) -> Result<()> {
        match self.model() {
            Model::Odometer { .. } => Err(Error::InvalidClopen("word windows are not clopens of an odometer".into())),
            _ => Ok(()),
        }
    }

    fn require_odometer(&self) -> Result<()> {
        match self.model() {
            Model::Odometer { .. } => Ok(()),
            _ => Err(Error::InvalidClopen("residue sets need an odometer".into())),
        }
    }

    /// `{x : x_[lo, lo+len-1] ∈ words}`; all words must be admissible and of equal length.
    pub fn cylinder(&self, lo: i64, words: &[Word]) -> Result<ClopenSet> {
        self.require_subshift()?;
        let Some(len) = words.first().map(Vec::len) else {
            return Ok(self.empty());
        };
        let mut sorted = words.to_vec();
        sorted.sort();
        sorted.dedup();
        for w in &sorted {
            if w.len() != len {
                return Err(Error::InvalidClopen("words of different lengths".into()));
            }
            if !self.is_admissible(w)? {
                return Err(Error::InvalidClopen(format!("word {:?} is not admissible", self.format_word(w))));
            }
        }
        self.canonical_window(lo, lo + len as i64 - 1, sorted)
    }

    /// Like [`Space::cylinder`] with words spelled in the alphabet.
    pub fn cylinder_str(&self, lo: i64, words: &[&str]) -> Result<ClopenSet> {
        self.require_subshift()?;
        let words = words.iter().map(|w| self.parse_word(w)).collect::<Result<Vec<_>>>()?;
        self.cylinder(lo, &words)
    }

    /// Union of residue classes modulo `a_level`.
    pub fn residue_set(&self, level: u32, residues: &[u64]) -> Result<ClopenSet> {
        self.require_odometer()?;
        let modulus = self.modulus(level)?;
        let mut r = residues.to_vec();
        r.sort_unstable();
        r.dedup();
        if let Some(bad) = r.iter().find(|&&x| x >= modulus) {
            return Err(Error::InvalidClopen(format!("residue {bad} is not below {modulus}")));
        }
        Ok(self.canonical_residues(level, modulus, r))
    }

    fn canonical_residues(&self, mut level: u32, mut modulus: u64, mut r: Vec<u64>) -> ClopenSet {
        if r.is_empty() {
            return self.empty();
        }
        while level > 0 {
            let ratio = self.ratio(level).expect("odometer");
            let coarse = modulus / ratio;
            let mut projected: Vec<u64> = r.iter().map(|x| x % coarse).collect();
            projected.sort_unstable();
            projected.dedup();
            if projected.len() as u64 * ratio != r.len() as u64 {
                break;
            }
            r = projected;
            level -= 1;
            modulus = coarse;
        }
        ClopenSet(Repr::Residues { level, modulus, residues: r })
    }

    fn canonical_window(&self, mut lo: i64, mut hi: i64, mut words: Vec<Word>) -> Result<ClopenSet> {
        if words.is_empty() {
            return Ok(self.empty());
        }
        let mut lang = self.language((hi - lo + 1) as usize)?;
        if words.len() == lang.len() {
            return Ok(self.full());
        }
        loop {
            let len = (hi - lo + 1) as usize;
            let mut left: Vec<Word> = words.iter().map(|w| w[1..].to_vec()).collect();
            left.sort();
            left.dedup();
            if lang.iter().filter(|u| contains(&left, &u[1..])).count() == words.len() {
                words = left;
                lo += 1;
                lang = self.language(len - 1)?;
                continue;
            }
            let mut right: Vec<Word> = words.iter().map(|w| w[..len - 1].to_vec()).collect();
            right.sort();
            right.dedup();
            if lang.iter().filter(|u| contains(&right, &u[..len - 1])).count() == words.len() {
                words = right;
                hi -= 1;
                lang = self.language(len - 1)?;
                continue;
            }
            break;
        }
        self.slide_window(lo, hi, words)
    }

    /// The trimmed window is one of possibly several minimal windows, which
    /// form a chain ordered by position. Walk the chain in both directions and
    /// keep the shortest window, leftmost on ties.
    ///
    /// A step depends only on the words, not on the position, so if a word set
    /// comes back `p` places further on, the set is `φ^p`-invariant and its
    /// chain is periodic in both directions. Then the shortest window with the
    /// smallest `lo >= 0` is kept, which is why shifting such a set needs a
    /// fresh canonical form.
    ///
    /// For substitutions a direction is abandoned after `len + 1` extensions
    /// without finding a new minimal window.
    fn slide_window(&self, lo: i64, hi: i64, words: Vec<Word>) -> Result<ClopenSet> {
        // In a shift of finite type with memory m, a conflict at an edge of a
        // window of width w is either resolved within m - w further symbols or
        // never, so the search there is exact.
        let horizon = |l: i64, h: i64| match self.model() {
            Model::Sft(sft) => (sft.memory as i64 - (h - l)).max(1) as usize,
            _ => (hi - lo + 2) as usize,
        };
        let mut best = (hi - lo, lo, words.clone());
        for rightwards in [true, false] {
            let (mut l, mut h, mut ws) = (lo, hi, words.clone());
            let mut visited: Vec<(i64, i64, Vec<Word>)> = vec![(l, h, ws.clone())];
            let mut seen: HashMap<Vec<Word>, usize> = HashMap::from([(ws.clone(), 0)]);
            let mut conflicts = self.edge_conflicts(l, h, &ws, rightwards)?;
            let mut misses = 0;
            while misses < horizon(l, h) && visited.len() < MAX_CHAIN {
                let step = 1 + misses as i64;
                let (l2, h2) = if rightwards { (l + 1, h + step) } else { (l - step, h - 1) };
                if !self.extension_decides(l, h, &ws, &conflicts, l2, h2, rightwards)? {
                    misses += 1;
                    continue;
                }
                // Shrink the far edge as much as possible.
                let (mut l2, mut h2) = (l2, h2);
                loop {
                    let (l3, h3) = if rightwards { (l2 + 1, h2) } else { (l2, h2 - 1) };
                    if l3 > h3 || self.restrict_window(l, h, &ws, l3, h3)?.is_none() {
                        break;
                    }
                    (l2, h2) = (l3, h3);
                }
                ws = self.restrict_window(l, h, &ws, l2, h2)?.expect("measurable");
                (l, h, misses) = (l2, h2, 0);
                if let Some(&start) = seen.get(&ws) {
                    let period = (l - visited[start].0).abs();
                    let (vl, vh, vw) = visited[start..]
                        .iter()
                        .min_by_key(|(vl, vh, _)| (vh - vl, vl.rem_euclid(period)))
                        .expect("nonempty cycle");
                    let shift = vl.rem_euclid(period) - vl;
                    return Ok(ClopenSet(Repr::Window { lo: vl + shift, hi: vh + shift, words: vw.clone(), period }));
                }
                if (h - l, l) < (best.0, best.1) {
                    best = (h - l, l, ws.clone());
                }
                seen.insert(ws.clone(), visited.len());
                visited.push((l, h, ws.clone()));
                conflicts = self.edge_conflicts(l, h, &ws, rightwards)?;
            }
        }
        let (width, lo, words) = best;
        Ok(ClopenSet(Repr::Window { lo, hi: lo + width, words, period: 0 }))
    }

    /// Words on `[l, h]` minus its left edge (`left_edge`) or right edge whose
    /// extensions by that edge letter fall on both sides of the set.
    fn edge_conflicts(&self, l: i64, h: i64, words: &[Word], left_edge: bool) -> Result<BTreeSet<Word>> {
        let lang = self.language((h - l + 1) as usize)?;
        let mut classes: HashMap<&[u8], (bool, bool)> = HashMap::new();
        for u in lang.iter() {
            let rest = if left_edge { &u[1..] } else { &u[..u.len() - 1] };
            let entry = classes.entry(rest).or_default();
            if contains(words, u) {
                entry.0 = true;
            } else {
                entry.1 = true;
            }
        }
        Ok(classes.into_iter().filter(|(_, c)| c.0 && c.1).map(|(k, _)| k.to_vec()).collect())
    }

    /// Whether the set given on `[l, h]` is a union of cylinders on `[l2, h2]`,
    /// which drops the edge of `[l, h]` on one side and extends the other.
    /// Only words around an edge conflict can break this.
    #[allow(clippy::too_many_arguments)]
    fn extension_decides(
        &self,
        l: i64,
        h: i64,
        words: &[Word],
        conflicts: &BTreeSet<Word>,
        l2: i64,
        h2: i64,
        left_edge: bool,
    ) -> Result<bool> {
        let (hl, hh) = (l.min(l2), h.max(h2));
        let lang = self.language((hh - hl + 1) as usize)?;
        let (off, len) = ((l - hl) as usize, (h - l + 1) as usize);
        let core = if left_edge { off + 1..off + len } else { off..off + len - 1 };
        let window = (l2 - hl) as usize..(h2 - hl + 1) as usize;
        let mut classes: HashMap<&[u8], bool> = HashMap::new();
        for u in lang.iter() {
            if !conflicts.contains(&u[core.clone()]) {
                continue;
            }
            let inside = contains(words, &u[off..off + len]);
            if *classes.entry(&u[window.clone()]).or_insert(inside) != inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Words on `[l, h]` of the set given by `words` on `[lo, hi]`, if the set
    /// is a union of cylinders on `[l, h]`.
    fn restrict_window(&self, lo: i64, hi: i64, words: &[Word], l: i64, h: i64) -> Result<Option<Vec<Word>>> {
        let (hl, hh) = (lo.min(l), hi.max(h));
        let lang = self.language((hh - hl + 1) as usize)?;
        let (off, len) = ((lo - hl) as usize, (hi - lo + 1) as usize);
        let (woff, wlen) = ((l - hl) as usize, (h - l + 1) as usize);
        let mut inside = BTreeSet::new();
        let mut outside = BTreeSet::new();
        for u in lang.iter() {
            let p = &u[woff..woff + wlen];
            if contains(words, &u[off..off + len]) {
                inside.insert(p);
            } else {
                outside.insert(p);
            }
        }
        if inside.intersection(&outside).next().is_some() {
            return Ok(None);
        }
        Ok(Some(inside.into_iter().map(<[u8]>::to_vec).collect()))
    }

    /// Words of `a` re-expressed on the window `[lo, hi]`, which must contain
    /// `a`'s own window (unless that window is empty).
    pub(crate) fn words_on(&self, a: &ClopenSet, lo: i64, hi: i64) -> Result<Vec<Word>> {
        let Repr::Window { lo: alo, hi: ahi, words, .. } = &a.0 else {
            return Err(Error::InvalidClopen("expected a word window".into()));
        };
        let lang = self.language((hi - lo + 1).max(0) as usize)?;
        if ahi < alo {
            return Ok(if words.is_empty() { vec![] } else { lang.to_vec() });
        }
        debug_assert!(lo <= *alo && *ahi <= hi);
        let off = (alo - lo) as usize;
        let len = (ahi - alo + 1) as usize;
        Ok(lang.iter().filter(|u| contains(words, &u[off..off + len])).cloned().collect())
    }

    /// Residues of `a` lifted to `level` (which must be at least `a`'s level).
    pub(crate) fn residues_at(&self, a: &ClopenSet, level: u32) -> Result<Vec<u64>> {
        let Repr::Residues { level: l, modulus, residues } = &a.0 else {
            return Err(Error::InvalidClopen("expected a residue set".into()));
        };
        debug_assert!(*l <= level);
        let target = self.modulus(level)?;
        let mut out = Vec::with_capacity(residues.len() * (target / modulus) as usize);
        for k in 0..target / modulus {
            out.extend(residues.iter().map(|r| r + k * modulus));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Smallest window containing the windows of all `sets` (empty windows ignored).
    pub(crate) fn hull(&self, sets: &[&ClopenSet]) -> (i64, i64) {
        let mut hull: Option<(i64, i64)> = None;
        for s in sets {
            if let Repr::Window { lo, hi, .. } = &s.0 {
                if hi >= lo {
                    hull = Some(match hull {
                        None => (*lo, *hi),
                        Some((a, b)) => (a.min(*lo), b.max(*hi)),
                    });
                }
            }
        }
        hull.unwrap_or((0, -1))
    }

    pub fn boolean(&self, op: BoolOp, a: &ClopenSet, b: &ClopenSet) -> Result<ClopenSet> {
        match (&a.0, &b.0) {
            (Repr::Residues { level: la, .. }, Repr::Residues { level: lb, .. }) => {
                let level = *la.max(lb);
                let ra = self.residues_at(a, level)?;
                let rb = self.residues_at(b, level)?;
                let modulus = self.modulus(level)?;
                Ok(self.canonical_residues(level, modulus, merge_sorted(&ra, &rb, op)))
            }
            (Repr::Window { .. }, Repr::Window { .. }) => {
                let (lo, hi) = self.hull(&[a, b]);
                let wa = self.words_on(a, lo, hi)?;
                let wb = self.words_on(b, lo, hi)?;
                self.canonical_window(lo, hi, merge_sorted(&wa, &wb, op))
            }
            _ => Err(Error::InvalidClopen("mixed clopen encodings".into())),
        }
    }

    pub fn union(&self, a: &ClopenSet, b: &ClopenSet) -> Result<ClopenSet> {
        self.boolean(BoolOp::Union, a, b)
    }

    pub fn intersect(&self, a: &ClopenSet, b: &ClopenSet) -> Result<ClopenSet> {
        self.boolean(BoolOp::Intersect, a, b)
    }

    pub fn difference(&self, a: &ClopenSet, b: &ClopenSet) -> Result<ClopenSet> {
        self.boolean(BoolOp::Difference, a, b)
    }

    pub fn complement(&self, a: &ClopenSet) -> Result<ClopenSet> {
        self.difference(&self.full(), a)
    }

    pub fn union_all<'a>(&self, sets: impl IntoIterator<Item = &'a ClopenSet>) -> Result<ClopenSet> {
        let mut acc = self.empty();
        for s in sets {
            acc = self.union(&acc, s)?;
        }
        Ok(acc)
    }

    /// Whether `a op b` is empty, without building its canonical form.
    fn is_empty_op(&self, op: BoolOp, a: &ClopenSet, b: &ClopenSet) -> Result<bool> {
        match (&a.0, &b.0) {
            (Repr::Window { .. }, Repr::Window { .. }) => {
                let (lo, hi) = self.hull(&[a, b]);
                let wa = self.words_on(a, lo, hi)?;
                let wb = self.words_on(b, lo, hi)?;
                Ok(merge_sorted(&wa, &wb, op).is_empty())
            }
            _ => Ok(self.boolean(op, a, b)?.is_empty()),
        }
    }

    pub fn is_subset(&self, a: &ClopenSet, b: &ClopenSet) -> Result<bool> {
        self.is_empty_op(BoolOp::Difference, a, b)
    }

    pub fn is_disjoint(&self, a: &ClopenSet, b: &ClopenSet) -> Result<bool> {
        self.is_empty_op(BoolOp::Intersect, a, b)
    }

    /// True when the sets are pairwise disjoint and cover the space.
    /// Empty members are allowed.
    pub fn is_partition(&self, parts: &[ClopenSet]) -> Result<bool> {
        let mut acc = self.empty();
        for p in parts {
            if !self.is_disjoint(&acc, p)? {
                return Ok(false);
            }
            acc = self.union(&acc, p)?;
        }
        Ok(acc == self.full())
    }

    /// `φ^m(a)`.
    pub fn shift_image(&self, a: &ClopenSet, m: i64) -> ClopenSet {
        match &a.0 {
            Repr::Residues { level, modulus, residues } => {
                let shift = m.rem_euclid(*modulus as i64) as u64;
                let mut r: Vec<u64> = residues.iter().map(|x| (x + shift) % modulus).collect();
                r.sort_unstable();
                ClopenSet(Repr::Residues { level: *level, modulus: *modulus, residues: r })
            }
            Repr::Window { lo, hi, words, period } => {
                if hi < lo {
                    a.clone()
                } else if *period > 0 {
                    // The choice among translated windows depends on position.
                    self.canonical_window(lo - m, hi - m, words.clone()).expect("translate of a valid set")
                } else {
                    ClopenSet(Repr::Window { lo: lo - m, hi: hi - m, words: words.clone(), period: 0 })
                }
            }
        }
    }

    /// A partition of the space such that every set in `sets` is a union of
    /// its members: all words on the common window, or all residues at the
    /// common level.
    pub fn common_refinement(&self, sets: &[&ClopenSet]) -> Result<Vec<ClopenSet>> {
        match self.model() {
            Model::Odometer { .. } => {
                let level = sets.iter().filter_map(|s| s.level()).max().unwrap_or(0);
                let modulus = self.modulus(level)?;
                (0..modulus).map(|r| self.residue_set(level, &[r])).collect()
            }
            _ => {
                let (lo, hi) = self.hull(sets);
                let lang = self.language((hi - lo + 1).max(0) as usize)?;
                lang.iter().map(|w| self.canonical_window(lo, hi, vec![w.clone()])).collect()
            }
        }
    }

    /// Re-derive the canonical form (a no-op on values built by this library).
    pub fn normalize(&self, a: &ClopenSet) -> Result<ClopenSet> {
        match &a.0 {
            Repr::Residues { level, modulus, residues } => {
                Ok(self.canonical_residues(*level, *modulus, residues.clone()))
            }
            Repr::Window { lo, hi, words, .. } => {
                if hi < lo {
                    return Ok(if words.is_empty() { self.empty() } else { self.full() });
                }
                self.canonical_window(*lo, *hi, words.clone())
            }
        }
    }

    /// Express `a` at a finer odometer level.
    pub fn residues_at_level(&self, a: &ClopenSet, level: u32) -> Result<Vec<u64>> {
        let l = a.level().ok_or_else(|| Error::InvalidClopen("expected a residue set".into()))?;
        if level < l {
            return Err(Error::InvalidClopen(format!("set is not expressible at level {level}")));
        }
        self.residues_at(a, level)
    }

    /// Express `a` on a window containing its own.
    pub fn words_on_window(&self, a: &ClopenSet, lo: i64, hi: i64) -> Result<Vec<Word>> {
        if let Some((alo, ahi)) = a.interval() {
            if ahi >= alo && (lo > alo || hi < ahi) {
                return Err(Error::InvalidClopen(format!("set is not expressible on [{lo}, {hi}]")));
            }
        }
        self.words_on(a, lo, hi)
    }

    pub fn clopen_from_json(&self, j: &ClopenJson) -> Result<ClopenSet> {
        match j {
            ClopenJson::Residues { level, residues } => self.residue_set(*level, residues),
            ClopenJson::Window { interval: [a, b], words } => {
                self.require_subshift()?;
                if *b < *a - 1 {
                    return Err(Error::InvalidClopen(format!("bad interval [{a}, {b}]")));
                }
                let len = (b - a + 1) as usize;
                let words = words.iter().map(|w| self.parse_word(w)).collect::<Result<Vec<_>>>()?;
                if let Some(w) = words.iter().find(|w| w.len() != len) {
                    return Err(Error::InvalidClopen(format!(
                        "word {:?} does not fit the interval [{a}, {b}]",
                        self.format_word(w)
                    )));
                }
                if len == 0 {
                    return Ok(if words.is_empty() { self.empty() } else { self.full() });
                }
                self.cylinder(*a, &words)
            }
        }
    }

    pub fn clopen_to_json(&self, a: &ClopenSet) -> ClopenJson {
        match &a.0 {
            Repr::Residues { level, residues, .. } => {
                ClopenJson::Residues { level: *level, residues: residues.clone() }
            }
            Repr::Window { lo, hi, words, .. } => {
                ClopenJson::Window { interval: [*lo, *hi], words: words.iter().map(|w| self.format_word(w)).collect() }
            }
        }
    }
}
