//! Registered concrete categories.
//!
//! * `VectQ`: finite-dimensional rational vector spaces (abelian baseline).
//! * `SubVect`: pairs `X₁ ⊆ X₀` with maps carrying `X₁` into `Y₁`.
//! * `FiltVect_n`: length-`n` flags `V₁ ⊆ … ⊆ V_n ⊆ Q^d` with layer-preserving maps.
//! * `LatZ`: free finitely generated abelian groups `Z^r` with integer matrices.
//!
//! The first three share one implementation, [`FlagCategory`], parametrized
//! by flag depth (0, 1 and `n`).

mod flag;
mod latz;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use flag::{FlagCategory, FlagMorphism, FlagObject};
pub use latz::{LatMorphism, LatObject, LatticeCategory};

use crate::category::{Category, CategoryError, SampleRng};
use crate::linalg::{RatMatrix, Rational};

/// How to drop a coordinate from an object while shrinking a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteMode {
    /// Intersect structure with the hyperplane `x_k = 0` (restriction to a subobject).
    Restrict,
    /// Project structure away from coordinate `k` (passage to a quotient).
    Project,
}

/// A backend whose morphisms are matrices between coordinate spaces.
pub trait MatrixCategory: Category {
    fn object_dim(&self, a: &Self::Object) -> usize;
    fn matrix<'a>(&self, f: &'a Self::Morphism) -> &'a RatMatrix;
    /// Validating constructor.
    fn make_morphism(
        &self,
        dom: &Self::Object,
        cod: &Self::Object,
        matrix: RatMatrix,
    ) -> Result<Self::Morphism, CategoryError>;
    fn delete_coordinate(&self, a: &Self::Object, k: usize, mode: DeleteMode) -> Self::Object;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    VectQ,
    SubVect,
    FiltVect(usize),
    LatZ,
}

/// A backend instance with its concrete type recovered.
#[derive(Debug, Clone)]
pub enum AnyCategory {
    Flag(FlagCategory),
    Lattice(LatticeCategory),
}

impl Backend {
    pub fn category(self) -> AnyCategory {
        match self {
            Backend::VectQ => AnyCategory::Flag(FlagCategory::new(0)),
            Backend::SubVect => AnyCategory::Flag(FlagCategory::new(1)),
            Backend::FiltVect(n) => AnyCategory::Flag(FlagCategory::new(n.max(1))),
            Backend::LatZ => AnyCategory::Lattice(LatticeCategory),
        }
    }

    pub fn all_default() -> [Backend; 4] {
        [Backend::VectQ, Backend::SubVect, Backend::FiltVect(3), Backend::LatZ]
    }
}

/// Runs `$body` with `$cat` bound to the concrete category of `$backend`.
#[macro_export]
macro_rules! with_category {
    ($backend:expr, |$cat:ident| $body:expr) => {
        match $backend.category() {
            $crate::backends::AnyCategory::Flag($cat) => $body,
            $crate::backends::AnyCategory::Lattice($cat) => $body,
        }
    };
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::VectQ => write!(f, "VectQ"),
            Backend::SubVect => write!(f, "SubVect"),
            Backend::FiltVect(n) => write!(f, "FiltVect_{n}"),
            Backend::LatZ => write!(f, "LatZ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown backend {0:?} (expected VectQ, SubVect, FiltVect_<n> or LatZ)")]
pub struct UnknownBackend(pub String);

impl FromStr for Backend {
    type Err = UnknownBackend;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "VectQ" => Ok(Backend::VectQ),
            "SubVect" => Ok(Backend::SubVect),
            "LatZ" => Ok(Backend::LatZ),
            _ => s
                .strip_prefix("FiltVect_")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .map(|n| if n == 1 { Backend::SubVect } else { Backend::FiltVect(n) })
                .ok_or_else(|| UnknownBackend(s.to_string())),
        }
    }
}

impl Serialize for Backend {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Backend {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Small integer entry, zero with probability about 0.4.
pub(crate) fn small_entry(rng: &mut SampleRng, max: i64) -> Rational {
    if rng.gen_bool(0.4) {
        Rational::zero()
    } else {
        let mut x = 0;
        while x == 0 {
            x = rng.gen_range(-max..=max);
        }
        Rational::from_integer(x)
    }
}

pub(crate) fn random_vector(rng: &mut SampleRng, n: usize, max: i64) -> Vec<Rational> {
    (0..n).map(|_| small_entry(rng, max)).collect()
}

/// One of the structural edge cases: zero, truncated identity (identity,
/// inclusion or projection depending on shape), or twice that.
pub(crate) fn structural_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> RatMatrix {
    let diag = |s: i64| {
        RatMatrix::from_fn(rows, cols, |i, j| if i == j { Rational::from_integer(s) } else { Rational::zero() })
    };
    match rng.gen_range(0..4) {
        0 => RatMatrix::zeros(rows, cols),
        1 | 2 => diag(1),
        _ => diag(2),
    }
}

/// Probability of drawing a structural edge case instead of a generic map.
pub(crate) const STRUCTURAL_BIAS: f64 = 0.2;
