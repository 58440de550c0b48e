//! Exact computation in topological full groups of Cantor minimal systems.
//!
//! Spaces are symbolic ([`Space`]): odometers, primitive substitution
//! subshifts and shifts of finite type, with an exact clopen calculus. Full
//! group elements ([`Element`]) are finite clopen partitions carrying powers of
//! the shift. Towers, Bratteli diagrams and Higman-Thompson tables live in
//! their own modules.

// Elements hold a `Space`, whose caches never take part in comparisons.
#![allow(clippy::mutable_key_type)]

pub mod error;
pub mod fullgroup;
pub mod random;
pub mod spaces;
pub mod thompson;
pub mod towers;

pub use error::{Error, Result};
pub use fullgroup::{Atom, Element, Order};
pub use spaces::{
    BoolOp, ClopenJson, ClopenSet, EntropyReport, Limits, PointOracle, Space, SpaceKind, SpaceSpec, Symbol, Word,
};
pub use thompson::{PathLanguage, ThompsonTable};
