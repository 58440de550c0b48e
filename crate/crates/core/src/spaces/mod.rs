//! Symbolic models of Cantor spaces: odometers, primitive substitution
//! subshifts and shifts of finite type.
//!
//! The shift acts by `σ(x)_i = x_{i+1}`; the odometer acts by `+1`.

mod clopen;
mod point;
mod sft;
mod substitution;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use clopen::{BoolOp, ClopenJson, ClopenSet};
pub use point::PointOracle;

use sft::Sft;
use substitution::Substitution;

/// Index of a symbol in the alphabet.
pub type Symbol = u8;
/// A finite word over the alphabet.
pub type Word = Vec<Symbol>;

/// Input description of a space, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    /// Ratios `r_1, r_2, ...`; levels past the list repeat it cyclically.
    Odometer {
        ratios: Vec<u64>,
    },
    Substitution {
        rules: BTreeMap<String, String>,
    },
    Sft {
        alphabet: Vec<String>,
        forbidden: Vec<String>,
    },
}

impl SpaceSpec {
    pub fn odometer(ratios: &[u64]) -> Self {
        SpaceSpec::Odometer { ratios: ratios.to_vec() }
    }

    pub fn substitution(rules: &[(&str, &str)]) -> Self {
        SpaceSpec::Substitution { rules: rules.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }

    pub fn sft(alphabet: &[&str], forbidden: &[&str]) -> Self {
        SpaceSpec::Sft {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            forbidden: forbidden.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Bounds applied by searches that could otherwise run without end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Longest word length for which a language is enumerated.
    pub max_word_length: usize,
    /// Largest language (or block set) that will be materialized.
    pub max_language_size: usize,
    /// Largest coordinate index a point oracle will compute.
    pub max_point_depth: u64,
    /// Largest odometer modulus `a_n`.
    pub max_modulus: u64,
    /// Largest first-return time searched before giving up.
    pub max_return_time: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_length: 4096,
            max_language_size: 1 << 20,
            max_point_depth: 1 << 26,
            max_modulus: 1 << 40,
            max_return_time: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Odometer,
    Substitution,
    Sft,
}

#[derive(Debug)]
pub(crate) enum Model {
    Odometer { ratios: Vec<u64> },
    Substitution(Substitution),
    Sft(Sft),
}

#[derive(Debug)]
struct Inner {
    spec: SpaceSpec,
    id: String,
    alphabet: Vec<char>,
    limits: Limits,
    model: Model,
}

/// A validated space. Cloning is cheap; clones share caches.
#[derive(Clone)]
pub struct Space(Arc<Inner>);

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({})", self.0.id)
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Space {}

/// Finite-stage entropy `log(complexity) / n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub complexity: u64,
    pub value: f64,
}

fn single_chars(tokens: &[String], what: &str) -> Result<Vec<char>> {
    tokens
        .iter()
        .map(|t| {
            let mut it = t.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::InvalidSpec(format!("{what} symbol {t:?} is not a single character"))),
            }
        })
        .collect()
}

fn spec_id(spec: &SpaceSpec) -> String {
    match spec {
        SpaceSpec::Odometer { ratios } => {
            let r: Vec<String> = ratios.iter().map(u64::to_string).collect();
            format!("odometer[{}]", r.join(","))
        }
        SpaceSpec::Substitution { rules } => {
            let r: Vec<String> = rules.iter().map(|(k, v)| format!("{k}->{v}")).collect();
            format!("substitution[{}]", r.join(","))
        }
        SpaceSpec::Sft { alphabet, forbidden } => {
            format!("sft[{}|{}]", alphabet.join(","), forbidden.join(","))
        }
    }
}

impl Space {
    pub fn new(spec: SpaceSpec) -> Result<Space> {
        Space::with_limits(spec, Limits::default())
    }

    pub fn with_limits(spec: SpaceSpec, limits: Limits) -> Result<Space> {
        let id = spec_id(&spec);
        let (alphabet, model) = match &spec {
            SpaceSpec::Odometer { ratios } => {
                if ratios.is_empty() {
                    return Err(Error::BadOdometerRatios("ratio list is empty".into()));
                }
                if let Some(r) = ratios.iter().find(|&&r| r < 2) {
                    return Err(Error::BadOdometerRatios(format!("ratio {r} is below 2")));
                }
                (vec![], Model::Odometer { ratios: ratios.clone() })
            }
            SpaceSpec::Substitution { rules } => {
                let keys: Vec<String> = rules.keys().cloned().collect();
                let alphabet = single_chars(&keys, "substitution")?;
                if alphabet.len() < 2 {
                    return Err(Error::InvalidSpec("alphabet needs at least two symbols".into()));
                }
                let images = rules.values().map(|img| encode(&alphabet, img)).collect::<Result<Vec<_>>>()?;
                let sub = Substitution::new(images)?;
                (alphabet, Model::Substitution(sub))
            }
            SpaceSpec::Sft { alphabet, forbidden } => {
                let alpha = single_chars(alphabet, "alphabet")?;
                if alpha.len() < 2 {
                    return Err(Error::InvalidSpec("alphabet needs at least two symbols".into()));
                }
                for (i, c) in alpha.iter().enumerate() {
                    if alpha[..i].contains(c) {
                        return Err(Error::InvalidSpec(format!("duplicate symbol {c:?}")));
                    }
                }
                let words = forbidden.iter().map(|w| encode(&alpha, w)).collect::<Result<Vec<_>>>()?;
                let sft = Sft::new(alpha.len(), words, &limits)?;
                (alpha, Model::Sft(sft))
            }
        };
        let space = Space(Arc::new(Inner { spec, id, alphabet, limits, model }));
        if space.kind() == SpaceKind::Substitution {
            // A primitive substitution can still generate a single periodic orbit.
            for n in 1..=32 {
                if space.complexity(n)? <= n as u64 {
                    return Err(Error::InvalidSpec("substitution subshift is periodic".into()));
                }
            }
        }
        Ok(space)
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.0.spec
    }

    /// Identifier used in element files.
    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn limits(&self) -> &Limits {
        &self.0.limits
    }

    pub fn kind(&self) -> SpaceKind {
        match self.0.model {
            Model::Odometer { .. } => SpaceKind::Odometer,
            Model::Substitution(_) => SpaceKind::Substitution,
            Model::Sft(_) => SpaceKind::Sft,
        }
    }

    pub(crate) fn model(&self) -> &Model {
        &self.0.model
    }

    /// Odometers and primitive aperiodic substitutions are minimal; SFTs are
    /// treated as non-minimal.
    pub fn is_minimal(&self) -> bool {
        self.kind() != SpaceKind::Sft
    }

    pub(crate) fn require_minimal(&self, op: &str) -> Result<()> {
        if self.is_minimal() {
            Ok(())
        } else {
            Err(Error::UnsupportedForSpace(format!("{op} requires a minimal space")))
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.0.alphabet
    }

    /// Ratio `r_n` for `n >= 1`, cycling through the given list.
    pub fn ratio(&self, n: u32) -> Result<u64> {
        match &self.0.model {
            Model::Odometer { ratios } if n >= 1 => Ok(ratios[(n as usize - 1) % ratios.len()]),
            Model::Odometer { .. } => Ok(1),
            _ => Err(Error::UnsupportedForSpace("ratios exist only for odometers".into())),
        }
    }

    /// Modulus `a_n = r_1 ... r_n` (with `a_0 = 1`).
    pub fn modulus(&self, n: u32) -> Result<u64> {
        let mut a: u64 = 1;
        for k in 1..=n {
            a = a
                .checked_mul(self.ratio(k)?)
                .filter(|&a| a <= self.0.limits.max_modulus)
                .ok_or_else(|| Error::DepthExceeded(format!("odometer level {n} is too deep")))?;
        }
        Ok(a)
    }

    /// Admissible words of length `n`, sorted.
    pub fn language(&self, n: usize) -> Result<Arc<Vec<Word>>> {
        match &self.0.model {
            Model::Odometer { .. } => {
                Err(Error::UnsupportedForSpace("odometers have no word language; use residue levels".into()))
            }
            Model::Substitution(s) => s.language(n, &self.0.limits),
            Model::Sft(s) => {
                if n > self.0.limits.max_word_length {
                    return Err(Error::CertificationFailure(format!("word length {n} exceeds the configured bound")));
                }
                s.language(n, &self.0.limits).map(Arc::new)
            }
        }
    }

    pub fn complexity(&self, n: usize) -> Result<u64> {
        Ok(self.language(n)?.len() as u64)
    }

    pub fn entropy_estimate(&self, n: usize) -> Result<EntropyReport> {
        if n == 0 {
            return Err(Error::InvalidSpec("entropy needs n >= 1".into()));
        }
        let complexity = self.complexity(n)?;
        Ok(EntropyReport { n, complexity, value: (complexity as f64).ln() / n as f64 })
    }

    pub(crate) fn is_admissible(&self, w: &[Symbol]) -> Result<bool> {
        Ok(self.language(w.len())?.binary_search_by(|u| u.as_slice().cmp(w)).is_ok())
    }

    /// Parse a word written with alphabet characters.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        encode(&self.0.alphabet, s)
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        w.iter().map(|&c| self.0.alphabet[c as usize]).collect()
    }

    pub(crate) fn check_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Designated point: all-zeros for odometers, the two-sided fixed point for
    /// substitutions, a periodic point for SFTs.
    pub fn designated_point(&self) -> PointOracle {
        PointOracle::new(self.clone())
    }

    /// Seed pair and substitution power of the designated fixed point.
    pub fn fixed_point_seed(&self) -> Option<(char, char, usize)> {
        match &self.0.model {
            Model::Substitution(s) => {
                Some((self.0.alphabet[s.seed.0 as usize], self.0.alphabet[s.seed.1 as usize], s.seed_power))
            }
            _ => None,
        }
    }

    /// Smallest power of the substitution matrix with all entries positive.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        match &self.0.model {
            Model::Substitution(s) => Some(s.primitivity_exponent),
            _ => None,
        }
    }

    /// Number of vertices of the pruned block graph (SFT only).
    pub fn sft_vertex_count(&self) -> Option<usize> {
        match &self.0.model {
            Model::Sft(s) => Some(s.vertices.len()),
            _ => None,
        }
    }
}

fn encode(alphabet: &[char], s: &str) -> Result<Word> {
    s.chars()
        .map(|c| {
            alphabet
                .iter()
                .position(|&a| a == c)
                .map(|p| p as Symbol)
                .ok_or_else(|| Error::InvalidSpec(format!("symbol {c:?} not in alphabet")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fibonacci() -> Space {
        Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "a")])).unwrap()
    }

    #[test]
    fn odometer_moduli() {
        let s = Space::new(SpaceSpec::odometer(&[2, 2, 2])).unwrap();
        assert_eq!(s.modulus(1).unwrap(), 2);
        assert_eq!(s.modulus(2).unwrap(), 4);
        assert_eq!(s.modulus(3).unwrap(), 8);
        // cyclic extension
        assert_eq!(s.modulus(5).unwrap(), 32);
        let t = Space::new(SpaceSpec::odometer(&[2, 3])).unwrap();
        assert_eq!(t.modulus(3).unwrap(), 12);
        assert!(s.modulus(64).unwrap_err().is_budget());
    }

    #[test]
    fn bad_specs() {
        assert!(matches!(Space::new(SpaceSpec::odometer(&[2, 1])), Err(Error::BadOdometerRatios(_))));
        assert!(matches!(
            Space::new(SpaceSpec::substitution(&[("a", "aa"), ("b", "ab")])),
            Err(Error::NonPrimitiveSubstitution(_))
        ));
        assert!(matches!(Space::new(SpaceSpec::substitution(&[("a", "ab"), ("b", "ab")])), Err(Error::InvalidSpec(_))));
        assert!(matches!(Space::new(SpaceSpec::sft(&["a", "b"], &["a", "b"])), Err(Error::EmptySft)));
    }

    #[test]
    fn fibonacci_language_and_complexity() {
        let f = fibonacci();
        let l2: Vec<String> = f.language(2).unwrap().iter().map(|w| f.format_word(w)).collect();
        assert_eq!(l2, vec!["aa", "ab", "ba"]);
        assert_eq!(f.complexity(1).unwrap(), 2);
        assert_eq!(f.complexity(5).unwrap(), 6);
        assert_eq!(f.entropy_estimate(10).unwrap().complexity, 11);
        assert_eq!(f.fixed_point_seed(), Some(('a', 'a', 2)));
    }

    #[test]
    fn full_shift_entropy() {
        let s = Space::new(SpaceSpec::sft(&["a", "b"], &[])).unwrap();
        assert_eq!(s.complexity(3).unwrap(), 8);
        for n in 1..=10 {
            let e = s.entropy_estimate(n).unwrap();
            assert!((e.value - 2f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_mean() {
        let s = Space::new(SpaceSpec::sft(&["a", "b"], &["bb"])).unwrap();
        assert_eq!(s.sft_vertex_count(), Some(2));
        assert_eq!(s.complexity(8).unwrap(), 55);
    }

    #[test]
    fn odometer_has_no_language() {
        let s = Space::new(SpaceSpec::odometer(&[2])).unwrap();
        assert!(matches!(s.language(3), Err(Error::UnsupportedForSpace(_))));
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"kind":"substitution","rules":{"a":"ab","b":"a"}}"#;
        let spec: SpaceSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, SpaceSpec::substitution(&[("a", "ab"), ("b", "a")]));
        assert_eq!(serde_json::to_string(&spec).unwrap(), text);
        let o: SpaceSpec = serde_json::from_str(r#"{"kind":"odometer","ratios":[2,2,2]}"#).unwrap();
        assert_eq!(o, SpaceSpec::odometer(&[2, 2, 2]));
    }
}
