//! Free finitely generated abelian groups with integer matrices.
//!
//! The kernel of `F : Z^n -> Z^m` is the integer nullspace. The cokernel is
//! `Z^m` modulo the saturation of `F(Z^n)`, since the torsion part of the
//! naive quotient is not an object here. Its leg is a matrix whose rows form a
//! basis of the integer vectors `y` with `yᵀ F = 0`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{small_entry, structural_matrix, DeleteMode, MatrixCategory, STRUCTURAL_BIAS};
use crate::category::{Biproduct, Category, CategoryError, Cone, ConeKind, SampleRng};
use crate::linalg::{integer_kernel, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatObject {
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatMorphismRepr", into = "LatMorphismRepr")]
pub struct LatMorphism {
    dom: LatObject,
    cod: LatObject,
    matrix: RatMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatMorphismRepr {
    dom: LatObject,
    cod: LatObject,
    matrix: RatMatrix,
}

impl TryFrom<LatMorphismRepr> for LatMorphism {
    type Error = CategoryError;
    fn try_from(r: LatMorphismRepr) -> Result<Self, Self::Error> {
        LatMorphism::new(r.dom, r.cod, r.matrix)
    }
}

impl From<LatMorphism> for LatMorphismRepr {
    fn from(m: LatMorphism) -> Self {
        LatMorphismRepr { dom: m.dom, cod: m.cod, matrix: m.matrix }
    }
}

impl LatMorphism {
    pub fn new(dom: LatObject, cod: LatObject, matrix: RatMatrix) -> Result<Self, CategoryError> {
        if matrix.shape() != (cod.rank, dom.rank) {
            return Err(CategoryError::ConstraintViolation(format!(
                "matrix is {}x{} but the map goes Z^{} -> Z^{}",
                matrix.rows(),
                matrix.cols(),
                dom.rank,
                cod.rank
            )));
        }
        if !matrix.is_integral() {
            return Err(CategoryError::ConstraintViolation("matrix has non-integer entries".into()));
        }
        Ok(LatMorphism { dom, cod, matrix })
    }

    pub fn dom(&self) -> &LatObject {
        &self.dom
    }

    pub fn cod(&self) -> &LatObject {
        &self.cod
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LatticeCategory;

fn lat(rank: usize) -> LatObject {
    LatObject { rank }
}

impl Category for LatticeCategory {
    type Object = LatObject;
    type Morphism = LatMorphism;

    fn name(&self) -> String {
        "LatZ".to_string()
    }

    fn dom<'a>(&self, f: &'a LatMorphism) -> &'a LatObject {
        &f.dom
    }

    fn cod<'a>(&self, f: &'a LatMorphism) -> &'a LatObject {
        &f.cod
    }

    fn identity(&self, a: &LatObject) -> LatMorphism {
        LatMorphism { dom: a.clone(), cod: a.clone(), matrix: RatMatrix::identity(a.rank) }
    }

    fn zero_morphism(&self, a: &LatObject, b: &LatObject) -> LatMorphism {
        LatMorphism { dom: a.clone(), cod: b.clone(), matrix: RatMatrix::zeros(b.rank, a.rank) }
    }

    fn zero_object(&self) -> LatObject {
        lat(0)
    }

    fn is_zero_object(&self, a: &LatObject) -> bool {
        a.rank == 0
    }

    fn compose(&self, g: &LatMorphism, f: &LatMorphism) -> Result<LatMorphism, CategoryError> {
        if f.cod != g.dom {
            return Err(CategoryError::NotComposable(format!("Z^{} does not match Z^{}", f.cod.rank, g.dom.rank)));
        }
        Ok(LatMorphism { dom: f.dom.clone(), cod: g.cod.clone(), matrix: g.matrix.mul(&f.matrix).expect("dims agree") })
    }

    fn add(&self, f: &LatMorphism, g: &LatMorphism) -> Result<LatMorphism, CategoryError> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(CategoryError::EndpointMismatch("sum of maps with different endpoints".into()));
        }
        Ok(LatMorphism { dom: f.dom.clone(), cod: f.cod.clone(), matrix: f.matrix.add(&g.matrix).expect("same shape") })
    }

    fn negate(&self, f: &LatMorphism) -> LatMorphism {
        LatMorphism { dom: f.dom.clone(), cod: f.cod.clone(), matrix: f.matrix.neg() }
    }

    fn biproduct(&self, a: &LatObject, b: &LatObject) -> Biproduct<LatObject, LatMorphism> {
        let object = lat(a.rank + b.rank);
        let inj1 = RatMatrix::identity(a.rank).vstack(&RatMatrix::zeros(b.rank, a.rank)).expect("cols agree");
        let inj2 = RatMatrix::zeros(a.rank, b.rank).vstack(&RatMatrix::identity(b.rank)).expect("cols agree");
        let mk = |dom: &LatObject, cod: &LatObject, m: RatMatrix| LatMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix: m,
        };
        Biproduct {
            proj1: mk(&object, a, inj1.transpose()),
            proj2: mk(&object, b, inj2.transpose()),
            inj1: mk(a, &object, inj1),
            inj2: mk(b, &object, inj2),
            object,
        }
    }

    fn kernel(&self, f: &LatMorphism) -> Cone<LatObject, LatMorphism> {
        let k = integer_kernel(&f.matrix).expect("integral matrix");
        let apex = lat(k.cols());
        Cone { kind: ConeKind::Kernel, leg: LatMorphism { dom: apex.clone(), cod: f.dom.clone(), matrix: k }, apex }
    }

    fn cokernel(&self, f: &LatMorphism) -> Cone<LatObject, LatMorphism> {
        let q = integer_kernel(&f.matrix.transpose()).expect("integral matrix").transpose();
        let apex = lat(q.rows());
        Cone { kind: ConeKind::Cokernel, leg: LatMorphism { dom: f.cod.clone(), cod: apex.clone(), matrix: q }, apex }
    }

    fn lift(&self, mono: &LatMorphism, x: &LatMorphism) -> Option<LatMorphism> {
        if mono.cod != x.cod {
            return None;
        }
        let u = mono.matrix.solve_right(&x.matrix).ok()?;
        LatMorphism::new(x.dom.clone(), mono.dom.clone(), u).ok()
    }

    fn descend(&self, epi: &LatMorphism, x: &LatMorphism) -> Option<LatMorphism> {
        if epi.dom != x.dom {
            return None;
        }
        let vt = epi.matrix.transpose().solve_right(&x.matrix.transpose()).ok()?;
        LatMorphism::new(epi.cod.clone(), x.cod.clone(), vt.transpose()).ok()
    }

    fn inverse(&self, f: &LatMorphism) -> Option<LatMorphism> {
        let inv = f.matrix.inverse()?;
        LatMorphism::new(f.cod.clone(), f.dom.clone(), inv).ok()
    }

    fn check_morphism(&self, f: &LatMorphism) -> Result<(), CategoryError> {
        LatMorphism::new(f.dom.clone(), f.cod.clone(), f.matrix.clone()).map(|_| ())
    }

    fn random_object(&self, size_bound: usize, rng: &mut SampleRng) -> LatObject {
        if size_bound == 0 || rng.gen_bool(0.1) {
            return lat(0);
        }
        lat(rng.gen_range(1..=size_bound))
    }

    fn random_morphism(&self, a: &LatObject, b: &LatObject, rng: &mut SampleRng) -> LatMorphism {
        let matrix = if rng.gen_bool(STRUCTURAL_BIAS) {
            structural_matrix(rng, b.rank, a.rank)
        } else {
            RatMatrix::from_fn(b.rank, a.rank, |_, _| small_entry(rng, 3))
        };
        LatMorphism { dom: a.clone(), cod: b.clone(), matrix }
    }
}

impl MatrixCategory for LatticeCategory {
    fn object_dim(&self, a: &LatObject) -> usize {
        a.rank
    }

    fn matrix<'a>(&self, f: &'a LatMorphism) -> &'a RatMatrix {
        &f.matrix
    }

    fn make_morphism(&self, dom: &LatObject, cod: &LatObject, matrix: RatMatrix) -> Result<LatMorphism, CategoryError> {
        LatMorphism::new(dom.clone(), cod.clone(), matrix)
    }

    fn delete_coordinate(&self, a: &LatObject, _k: usize, _mode: DeleteMode) -> LatObject {
        lat(a.rank - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::classify;
    use crate::linalg::Rational;

    #[test]
    fn rejects_fractional_matrix() {
        let c = LatticeCategory;
        let m = RatMatrix::from_fn(1, 1, |_, _| Rational::new(1, 2));
        assert!(matches!(c.make_morphism(&lat(1), &lat(1), m), Err(CategoryError::ConstraintViolation(_))));
    }

    #[test]
    fn doubling_is_a_non_strict_bimorphism() {
        let c = LatticeCategory;
        let two = c.make_morphism(&lat(1), &lat(1), RatMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(c.cokernel(&two).apex, lat(0));
        assert_eq!(c.kernel(&two).apex, lat(0));
        let cls = classify(&c, &two).unwrap();
        assert!(cls.mono && cls.epi && !cls.iso && !cls.strict);
    }

    #[test]
    fn cokernel_quotients_by_saturation() {
        // image of (2, 4) saturates to span (1, 2); the quotient is Z via (2, -1)
        let c = LatticeCategory;
        let f = c.make_morphism(&lat(1), &lat(2), RatMatrix::from_i64(&[&[2], &[4]])).unwrap();
        let q = c.cokernel(&f);
        assert_eq!(q.apex, lat(1));
        // representative-dependent up to sign, which the check below allows for
        let row = q.leg.matrix().row(0).to_vec();
        assert!(
            row == [Rational::from_integer(2), Rational::from_integer(-1)]
                || row == [Rational::from_integer(-2), Rational::from_integer(1)]
        );
    }

    #[test]
    fn lift_requires_integrality() {
        let c = LatticeCategory;
        let two = c.make_morphism(&lat(1), &lat(1), RatMatrix::from_i64(&[&[2]])).unwrap();
        let one = c.identity(&lat(1));
        assert!(c.lift(&two, &one).is_none());
        assert!(c.descend(&two, &one).is_none());
        assert!(c.inverse(&two).is_none());
    }
}
