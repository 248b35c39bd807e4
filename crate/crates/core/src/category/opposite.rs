use serde::{Deserialize, Serialize};

use super::{Biproduct, Category, CategoryError, Cone, ConeKind, SampleRng};

/// A morphism of the opposite category: the same data, read backwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Op<M>(pub M);

/// The formal dual of a backend. Kernels are the original cokernels,
/// monos are the original epis, pushouts are the original pullbacks.
#[derive(Debug, Clone)]
pub struct Opposite<C>(pub C);

fn flip<O, M>(cone: Cone<O, M>) -> Cone<O, Op<M>> {
    Cone {
        kind: match cone.kind {
            ConeKind::Kernel => ConeKind::Cokernel,
            ConeKind::Cokernel => ConeKind::Kernel,
        },
        apex: cone.apex,
        leg: Op(cone.leg),
    }
}

impl<C: Category> Category for Opposite<C> {
    type Object = C::Object;
    type Morphism = Op<C::Morphism>;

    fn name(&self) -> String {
        format!("{}^op", self.0.name())
    }

    fn dom<'a>(&self, f: &'a Self::Morphism) -> &'a Self::Object {
        self.0.cod(&f.0)
    }

    fn cod<'a>(&self, f: &'a Self::Morphism) -> &'a Self::Object {
        self.0.dom(&f.0)
    }

    fn identity(&self, a: &Self::Object) -> Self::Morphism {
        Op(self.0.identity(a))
    }

    fn zero_morphism(&self, a: &Self::Object, b: &Self::Object) -> Self::Morphism {
        Op(self.0.zero_morphism(b, a))
    }

    fn zero_object(&self) -> Self::Object {
        self.0.zero_object()
    }

    fn is_zero_object(&self, a: &Self::Object) -> bool {
        self.0.is_zero_object(a)
    }

    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism, CategoryError> {
        self.0.compose(&f.0, &g.0).map(Op)
    }

    fn add(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism, CategoryError> {
        self.0.add(&f.0, &g.0).map(Op)
    }

    fn negate(&self, f: &Self::Morphism) -> Self::Morphism {
        Op(self.0.negate(&f.0))
    }

    fn biproduct(&self, a: &Self::Object, b: &Self::Object) -> Biproduct<Self::Object, Self::Morphism> {
        let bp = self.0.biproduct(a, b);
        Biproduct { object: bp.object, inj1: Op(bp.proj1), inj2: Op(bp.proj2), proj1: Op(bp.inj1), proj2: Op(bp.inj2) }
    }

    fn kernel(&self, f: &Self::Morphism) -> Cone<Self::Object, Self::Morphism> {
        flip(self.0.cokernel(&f.0))
    }

    fn cokernel(&self, f: &Self::Morphism) -> Cone<Self::Object, Self::Morphism> {
        flip(self.0.kernel(&f.0))
    }

    fn lift(&self, mono: &Self::Morphism, x: &Self::Morphism) -> Option<Self::Morphism> {
        self.0.descend(&mono.0, &x.0).map(Op)
    }

    fn descend(&self, epi: &Self::Morphism, x: &Self::Morphism) -> Option<Self::Morphism> {
        self.0.lift(&epi.0, &x.0).map(Op)
    }

    fn inverse(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        self.0.inverse(&f.0).map(Op)
    }

    fn check_morphism(&self, f: &Self::Morphism) -> Result<(), CategoryError> {
        self.0.check_morphism(&f.0)
    }

    fn random_object(&self, size_bound: usize, rng: &mut SampleRng) -> Self::Object {
        self.0.random_object(size_bound, rng)
    }

    fn random_morphism(&self, a: &Self::Object, b: &Self::Object, rng: &mut SampleRng) -> Self::Morphism {
        Op(self.0.random_morphism(b, a, rng))
    }

    fn is_zero(&self, f: &Self::Morphism) -> bool {
        self.0.is_zero(&f.0)
    }
}
