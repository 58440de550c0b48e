//! Higman-Thompson tables over a path language.
//!
//! A word in `free(n, r)` is `[root, s_1, ..., s_k]` with `1 <= root <= r` and
//! `1 <= s_i <= n`. A path in a graph language is a list of edge ids, each edge
//! starting where the previous one ends; the roots are the single edges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fullgroup::Order;

pub type Path = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathLanguage {
    Free {
        n: u32,
        r: u32,
    },
    /// Edge `i` goes from `edges[i].0` to `edges[i].1`.
    Graph {
        edges: Vec<(u32, u32)>,
    },
}

impl PathLanguage {
    pub fn free(n: u32, r: u32) -> PathLanguage {
        PathLanguage::Free { n, r }
    }

    /// `n` loops on a single vertex.
    pub fn bouquet(n: u32) -> PathLanguage {
        PathLanguage::Graph { edges: vec![(0, 0); n as usize] }
    }

    pub fn graph(edges: Vec<(u32, u32)>) -> PathLanguage {
        PathLanguage::Graph { edges }
    }

    /// Reject degenerate languages: `n, r >= 1`, and every vertex with an
    /// incoming edge must have an outgoing one.
    pub fn validate(&self) -> Result<()> {
        match self {
            PathLanguage::Free { n, r } if *n == 0 || *r == 0 => {
                Err(Error::InvalidTable(format!("free({n}, {r}) needs n, r >= 1")))
            }
            PathLanguage::Free { .. } => Ok(()),
            PathLanguage::Graph { edges } => {
                if edges.is_empty() {
                    return Err(Error::InvalidTable("graph has no edges".into()));
                }
                let sources: BTreeSet<u32> = edges.iter().map(|e| e.0).collect();
                match edges.iter().find(|e| !sources.contains(&e.1)) {
                    Some(e) => Err(Error::InvalidTable(format!("vertex {} has no outgoing edge", e.1))),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn roots(&self) -> Vec<Path> {
        match self {
            PathLanguage::Free { r, .. } => (1..=*r).map(|x| vec![x]).collect(),
            PathLanguage::Graph { edges } => (0..edges.len() as u32).map(|e| vec![e]).collect(),
        }
    }

    /// Symbols that may follow `w`, in child order.
    fn extensions(&self, w: &[u32]) -> Vec<u32> {
        match self {
            PathLanguage::Free { n, .. } => (1..=*n).collect(),
            PathLanguage::Graph { edges } => {
                let v = edges[*w.last().expect("nonempty path") as usize].1;
                (0..edges.len() as u32).filter(|&e| edges[e as usize].0 == v).collect()
            }
        }
    }

    pub fn children(&self, w: &[u32]) -> Vec<Path> {
        self.extensions(w)
            .into_iter()
            .map(|s| {
                let mut c = w.to_vec();
                c.push(s);
                c
            })
            .collect()
    }

    pub fn check_word(&self, w: &[u32]) -> Result<()> {
        let bad = || Err(Error::InvalidWord(format!("{w:?}")));
        let Some((&first, rest)) = w.split_first() else { return bad() };
        match self {
            PathLanguage::Free { n, r } => {
                if first == 0 || first > *r || rest.iter().any(|&s| s == 0 || s > *n) {
                    return bad();
                }
            }
            PathLanguage::Graph { edges } => {
                if w.iter().any(|&e| e as usize >= edges.len()) {
                    return bad();
                }
                if w.windows(2).any(|p| edges[p[0] as usize].1 != edges[p[1] as usize].0) {
                    return bad();
                }
            }
        }
        Ok(())
    }

    /// Terminal vertex of a graph path; `None` for free words.
    fn range_vertex(&self, w: &[u32]) -> Option<u32> {
        match self {
            PathLanguage::Free { .. } => None,
            PathLanguage::Graph { edges } => w.last().map(|&e| edges[e as usize].1),
        }
    }

    /// Strongly connected and not a single cycle.
    pub fn is_irreducible_non_cycle(&self) -> bool {
        let PathLanguage::Graph { edges } = self else { return true };
        let vertices: BTreeSet<u32> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
        let reach = |forward: bool| {
            let start = *vertices.iter().next().expect("nonempty graph");
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(s, t) in edges {
                    let (a, b) = if forward { (s, t) } else { (t, s) };
                    if a == v && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
            seen.len() == vertices.len()
        };
        reach(true) && reach(false) && edges.len() > vertices.len()
    }

    /// Check that `basis` is an antichain whose complete sibling families
    /// contract down to the roots.
    pub fn validate_basis(&self, basis: &[Path]) -> Result<()> {
        for w in basis {
            self.check_word(w)?;
        }
        let mut sorted: Vec<&Path> = basis.iter().collect();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[1].starts_with(pair[0]) {
                return Err(Error::NotAntichain(format!("{:?} is a prefix of {:?}", pair[0], pair[1])));
            }
        }
        let mut set: BTreeSet<Path> = basis.iter().cloned().collect();
        while let Some(deepest) = set.iter().filter(|w| w.len() > 1).max_by_key(|w| w.len()).cloned() {
            let parent = deepest[..deepest.len() - 1].to_vec();
            let family = self.children(&parent);
            if let Some(missing) = family.iter().find(|c| !set.contains(*c)) {
                return Err(Error::NotMaximal(format!("{missing:?} is not covered")));
            }
            for c in &family {
                set.remove(c);
            }
            set.insert(parent);
        }
        let roots: BTreeSet<Path> = self.roots().into_iter().collect();
        match roots.iter().find(|r| !set.contains(*r)) {
            Some(r) => Err(Error::NotMaximal(format!("{r:?} is not covered"))),
            None => Ok(()),
        }
    }

    /// Coarsest basis refining both `b` and `c`, in length-lexicographic order.
    pub fn common_expansion(&self, b: &[Path], c: &[Path]) -> Result<Vec<Path>> {
        self.validate_basis(b)?;
        self.validate_basis(c)?;
        Ok(merge_bases(b, c))
    }
}

fn strictly_extends(w: &[u32], prefix: &[u32]) -> bool {
    w.len() > prefix.len() && w.starts_with(prefix)
}

fn merge_bases(b: &[Path], c: &[Path]) -> Vec<Path> {
    let mut out: BTreeSet<Key> = BTreeSet::new();
    for w in b {
        if !c.iter().any(|v| strictly_extends(v, w)) {
            out.insert(Key(w.clone()));
        }
    }
    for w in c {
        if !b.iter().any(|v| strictly_extends(v, w)) {
            out.insert(Key(w.clone()));
        }
    }
    out.into_iter().map(|k| k.0).collect()
}

/// Length-lexicographic ordering of paths.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Key(Path);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A bijection `domain[i] ↦ range[i]` between two tree bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThompsonTable {
    language: PathLanguage,
    domain: Vec<Path>,
    range: Vec<Path>,
}

impl ThompsonTable {
    /// Validate and canonicalize.
    pub fn new(language: PathLanguage, domain: Vec<Path>, range: Vec<Path>) -> Result<ThompsonTable> {
        Ok(ThompsonTable::checked(language, domain, range)?.canonicalize())
    }

    fn checked(language: PathLanguage, domain: Vec<Path>, range: Vec<Path>) -> Result<ThompsonTable> {
        language.validate()?;
        if domain.len() != range.len() {
            return Err(Error::InvalidTable(format!("domain has {} rows but range has {}", domain.len(), range.len())));
        }
        language.validate_basis(&domain)?;
        language.validate_basis(&range)?;
        for (b, c) in domain.iter().zip(&range) {
            if language.range_vertex(b) != language.range_vertex(c) {
                return Err(Error::RangeVertexMismatch(format!("{b:?} and {c:?} end at different vertices")));
            }
        }
        Ok(ThompsonTable { language, domain, range })
    }

    /// Validate without canonicalizing.
    pub fn unreduced(language: PathLanguage, domain: Vec<Path>, range: Vec<Path>) -> Result<ThompsonTable> {
        ThompsonTable::checked(language, domain, range)
    }

    /// Replace row `i` by the rows of its children.
    pub fn expand(&self, i: usize) -> ThompsonTable {
        let mut map: BTreeMap<Path, Path> = self.rows().map(|(b, c)| (b.clone(), c.clone())).collect();
        let (b, c) = (&self.domain[i], &self.range[i]);
        map.remove(b);
        for s in self.language.extensions(b) {
            map.insert([b.as_slice(), &[s]].concat(), [c.as_slice(), &[s]].concat());
        }
        self.tabulate(map)
    }

    pub fn identity(language: &PathLanguage) -> ThompsonTable {
        let roots = language.roots();
        ThompsonTable { language: language.clone(), domain: roots.clone(), range: roots }
    }

    pub fn language(&self) -> &PathLanguage {
        &self.language
    }

    pub fn domain(&self) -> &[Path] {
        &self.domain
    }

    pub fn range(&self) -> &[Path] {
        &self.range
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Path, &Path)> {
        self.domain.iter().zip(&self.range)
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.range
    }

    /// Contract order-preserving sibling families until none is left.
    pub fn canonicalize(&self) -> ThompsonTable {
        self.canonicalize_with(|_| 0)
    }

    /// As [`canonicalize`](Self::canonicalize), letting `choose(k)` pick which
    /// of the `k` currently contractible families goes next.
    pub fn canonicalize_with(&self, mut choose: impl FnMut(usize) -> usize) -> ThompsonTable {
        let mut map: BTreeMap<Path, Path> = self.rows().map(|(b, c)| (b.clone(), c.clone())).collect();
        loop {
            let candidates = self.contractible(&map);
            if candidates.is_empty() {
                break;
            }
            let (parent, image) = &candidates[choose(candidates.len()) % candidates.len()];
            for c in self.language.children(parent) {
                map.remove(&c);
            }
            map.insert(parent.clone(), image.clone());
        }
        self.tabulate(map)
    }

    fn contractible(&self, map: &BTreeMap<Path, Path>) -> Vec<(Path, Path)> {
        let mut parents = BTreeSet::new();
        for w in map.keys().filter(|w| w.len() > 1) {
            parents.insert(w[..w.len() - 1].to_vec());
        }
        let mut out = Vec::new();
        for parent in parents {
            let ext = self.language.extensions(&parent);
            let Some(first) = map.get(&[parent.as_slice(), &[ext[0]]].concat()) else { continue };
            if first.len() < 2 {
                continue;
            }
            let image = first[..first.len() - 1].to_vec();
            if self.language.range_vertex(&image) != self.language.range_vertex(&parent) {
                continue;
            }
            let preserved = ext.iter().all(|&s| {
                let child = [parent.as_slice(), &[s]].concat();
                map.get(&child) == Some(&[image.as_slice(), &[s]].concat())
            });
            if preserved {
                out.push((parent, image));
            }
        }
        out
    }

    fn tabulate(&self, map: BTreeMap<Path, Path>) -> ThompsonTable {
        let mut rows: Vec<(Key, Path)> = map.into_iter().map(|(b, c)| (Key(b), c)).collect();
        rows.sort();
        ThompsonTable {
            language: self.language.clone(),
            domain: rows.iter().map(|r| r.0 .0.clone()).collect(),
            range: rows.into_iter().map(|r| r.1).collect(),
        }
    }

    /// Rewrite the prefix of `w` lying in the domain.
    pub fn act_on_word(&self, w: &[u32]) -> Result<Path> {
        self.language.check_word(w)?;
        for (b, c) in self.rows() {
            if w.starts_with(b) {
                let mut out = c.clone();
                out.extend_from_slice(&w[b.len()..]);
                return Ok(out);
            }
        }
        Err(Error::WordTooShort(format!("{w:?}")))
    }

    fn act_inverse(&self, w: &[u32]) -> Path {
        let (b, c) = self.rows().find(|(_, c)| w.starts_with(c)).expect("refined range");
        [b.as_slice(), &w[c.len()..]].concat()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ThompsonTable) -> Result<ThompsonTable> {
        if self.language != other.language {
            return Err(Error::LanguageMismatch);
        }
        let middle = merge_bases(&other.range, &self.domain);
        let mut map = BTreeMap::new();
        for w in middle {
            let from = other.act_inverse(&w);
            let to = self.act_on_word(&w)?;
            map.insert(from, to);
        }
        Ok(self.tabulate(map).canonicalize())
    }

    pub fn inverse(&self) -> ThompsonTable {
        ThompsonTable { language: self.language.clone(), domain: self.range.clone(), range: self.domain.clone() }
            .canonicalize()
    }

    pub fn pow(&self, k: i64) -> Result<ThompsonTable> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = ThompsonTable::identity(&self.language);
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base)?;
        }
        Ok(out)
    }

    pub fn order(&self, bound: u64) -> Result<Order> {
        let mut power = self.clone();
        for k in 1..=bound {
            if power.is_identity() {
                return Ok(Order::Finite(k));
            }
            power = power.compose(self)?;
        }
        Ok(Order::Unknown(bound))
    }

    /// The same table over the bouquet of `n` loops, sending word
    /// `[1, s_1, ..., s_k]` to path `[s_1 - 1, ..., s_k - 1]`.
    pub fn to_bouquet(&self) -> Result<ThompsonTable> {
        let PathLanguage::Free { n, r: 1 } = self.language else {
            return Err(Error::LanguageMismatch);
        };
        let lang = PathLanguage::bouquet(n);
        if self.is_identity() {
            return Ok(ThompsonTable::identity(&lang));
        }
        let convert = |w: &Path| w[1..].iter().map(|s| s - 1).collect::<Path>();
        ThompsonTable::new(lang, self.domain.iter().map(convert).collect(), self.range.iter().map(convert).collect())
    }

    /// Inverse of [`to_bouquet`](Self::to_bouquet).
    pub fn from_bouquet(&self) -> Result<ThompsonTable> {
        let PathLanguage::Graph { edges } = &self.language else {
            return Err(Error::LanguageMismatch);
        };
        if edges.iter().any(|&e| e != (0, 0)) {
            return Err(Error::LanguageMismatch);
        }
        let lang = PathLanguage::free(edges.len() as u32, 1);
        if self.is_identity() {
            return Ok(ThompsonTable::identity(&lang));
        }
        let convert = |w: &Path| std::iter::once(1).chain(w.iter().map(|s| s + 1)).collect::<Path>();
        ThompsonTable::new(lang, self.domain.iter().map(convert).collect(), self.range.iter().map(convert).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tables serialize")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<ThompsonTable> {
        let raw: ThompsonTable =
            serde_json::from_value(value.clone()).map_err(|e| Error::InvalidTable(e.to_string()))?;
        ThompsonTable::new(raw.language, raw.domain, raw.range)
    }
}

/// The full group element of the SFT groupoid sending the cylinder of `υ_i`
/// to that of `ω_i` for each pair `(ω_i, υ_i)`.
pub fn sft_element(edges: &[(u32, u32)], pairs: &[(Path, Path)]) -> Result<ThompsonTable> {
    let language = PathLanguage::graph(edges.to_vec());
    language.validate()?;
    if !language.is_irreducible_non_cycle() {
        return Err(Error::InvalidTable("graph must be strongly connected and not a cycle".into()));
    }
    let range: Vec<Path> = pairs.iter().map(|p| p.0.clone()).collect();
    let domain: Vec<Path> = pairs.iter().map(|p| p.1.clone()).collect();
    for (w, u) in &range.iter().zip(&domain).collect::<Vec<_>>() {
        language.check_word(w)?;
        language.check_word(u)?;
        if language.range_vertex(w) != language.range_vertex(u) {
            return Err(Error::RangeVertexMismatch(format!("{w:?} and {u:?} end at different vertices")));
        }
    }
    for basis in [&domain, &range] {
        language.validate_basis(basis).map_err(|e| Error::NotABasis(e.to_string()))?;
    }
    ThompsonTable::new(language, domain, range)
}
