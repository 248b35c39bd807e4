//! The preabelian category interface and the universal constructions derived
//! from it.
//!
//! A backend supplies composition, the additive structure, biproducts,
//! chosen kernels and cokernels, and exact factorization through monos and
//! epis. Everything else (images, coimages, the canonical decomposition,
//! pullbacks, pushouts, induced maps) is built here from those primitives, so
//! the same code runs unchanged on a backend and on its opposite.

mod constructions;
mod opposite;

use std::fmt::Debug;

use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use constructions::{
    classify, column, decompose, induced_cokernel_map, induced_kernel_map, is_pullback, is_pushout, pullback, pushout,
    row, Decomposition, MorphismClass,
};
pub use opposite::{Op, Opposite};

/// Seeded generator used by every sampler in the crate.
pub type SampleRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("square does not commute")]
    NotCommutative,
    /// A factorization that the universal properties guarantee did not exist.
    #[error("law violation: {0}")]
    LawViolation(String),
}

pub trait Category: Clone + Debug + Send + Sync {
    type Object: Clone + PartialEq + Debug + Serialize + DeserializeOwned + Send + Sync;
    type Morphism: Clone + PartialEq + Debug + Serialize + DeserializeOwned + Send + Sync;

    fn name(&self) -> String;

    fn dom<'a>(&self, f: &'a Self::Morphism) -> &'a Self::Object;
    fn cod<'a>(&self, f: &'a Self::Morphism) -> &'a Self::Object;

    fn identity(&self, a: &Self::Object) -> Self::Morphism;
    fn zero_morphism(&self, a: &Self::Object, b: &Self::Object) -> Self::Morphism;
    fn zero_object(&self) -> Self::Object;
    fn is_zero_object(&self, a: &Self::Object) -> bool;

    /// `g ∘ f`
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism, CategoryError>;
    fn add(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism, CategoryError>;
    fn negate(&self, f: &Self::Morphism) -> Self::Morphism;

    fn biproduct(&self, a: &Self::Object, b: &Self::Object) -> Biproduct<Self::Object, Self::Morphism>;

    fn kernel(&self, f: &Self::Morphism) -> Cone<Self::Object, Self::Morphism>;
    fn cokernel(&self, f: &Self::Morphism) -> Cone<Self::Object, Self::Morphism>;

    /// Some `u` with `mono ∘ u = x`; unique when `mono` is a monomorphism.
    fn lift(&self, mono: &Self::Morphism, x: &Self::Morphism) -> Option<Self::Morphism>;
    /// Some `v` with `v ∘ epi = x`; unique when `epi` is an epimorphism.
    fn descend(&self, epi: &Self::Morphism, x: &Self::Morphism) -> Option<Self::Morphism>;

    /// The two-sided inverse in the category, if `f` is an isomorphism.
    fn inverse(&self, f: &Self::Morphism) -> Option<Self::Morphism>;

    /// Checks a morphism parsed from outside against this category's
    /// structure constraints.
    fn check_morphism(&self, f: &Self::Morphism) -> Result<(), CategoryError>;

    fn random_object(&self, size_bound: usize, rng: &mut SampleRng) -> Self::Object;
    fn random_morphism(&self, a: &Self::Object, b: &Self::Object, rng: &mut SampleRng) -> Self::Morphism;

    fn is_zero(&self, f: &Self::Morphism) -> bool {
        *f == self.zero_morphism(self.dom(f), self.cod(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Kernel,
    Cokernel,
}

/// A chosen kernel or cokernel: apex object plus the universal leg.
///
/// For a kernel the leg is `apex -> dom f`; for a cokernel it is
/// `cod f -> apex`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cone<O, M> {
    pub kind: ConeKind,
    pub apex: O,
    pub leg: M,
}

impl<O, M> Cone<O, M> {
    /// The unique mediating morphism for a test morphism `x`: `u` with
    /// `leg ∘ u = x` for kernels, `u` with `u ∘ leg = x` for cokernels.
    pub fn factor<C>(&self, cat: &C, x: &M) -> Option<M>
    where
        C: Category<Object = O, Morphism = M>,
    {
        match self.kind {
            ConeKind::Kernel => cat.lift(&self.leg, x),
            ConeKind::Cokernel => cat.descend(&self.leg, x),
        }
    }
}

/// `object = a ⊕ b` with injections and projections.
#[derive(Debug, Clone, PartialEq)]
pub struct Biproduct<O, M> {
    pub object: O,
    pub inj1: M,
    pub inj2: M,
    pub proj1: M,
    pub proj2: M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Pushout,
    Pullback,
    Commutative,
}

impl Provenance {
    pub fn dual(self) -> Self {
        match self {
            Provenance::Pushout => Provenance::Pullback,
            Provenance::Pullback => Provenance::Pushout,
            Provenance::Commutative => Provenance::Commutative,
        }
    }
}

/// A commutative square
///
/// ```text
///   C --top--> D
///   |          |
///  left      right
///   v          v
///   A -bottom-> B
/// ```
///
/// with `bottom ∘ left = right ∘ top`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Square<M> {
    pub top: M,
    pub left: M,
    pub bottom: M,
    pub right: M,
    pub provenance: Provenance,
}

impl<M: Clone + PartialEq> Square<M> {
    /// Checks the corners match up and the square commutes.
    pub fn new<C: Category<Morphism = M>>(
        cat: &C,
        top: M,
        left: M,
        bottom: M,
        right: M,
        provenance: Provenance,
    ) -> Result<Self, CategoryError> {
        let corners = [
            (cat.dom(&top), cat.dom(&left), "top and left must share a domain"),
            (cat.cod(&top), cat.dom(&right), "top must end where right starts"),
            (cat.cod(&left), cat.dom(&bottom), "left must end where bottom starts"),
            (cat.cod(&bottom), cat.cod(&right), "bottom and right must share a codomain"),
        ];
        for (x, y, msg) in corners {
            if x != y {
                return Err(CategoryError::EndpointMismatch(msg.to_string()));
            }
        }
        if cat.compose(&bottom, &left)? != cat.compose(&right, &top)? {
            return Err(CategoryError::NotCommutative);
        }
        Ok(Square { top, left, bottom, right, provenance })
    }

    pub fn map<N>(self, mut f: impl FnMut(M) -> N) -> Square<N> {
        Square {
            top: f(self.top),
            left: f(self.left),
            bottom: f(self.bottom),
            right: f(self.right),
            provenance: self.provenance,
        }
    }
}
