//! Vector spaces carrying a flag of subspaces, with layer-preserving maps.
//!
//! Kernels carry the induced (intersected) flag and cokernels the image flag:
//! for `F : (X, V_i) -> (Y, W_i)`,
//! `Ker F = (ker F, V_i ∩ ker F)` and `Cok F = (Y / F(X), image of W_i)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{random_vector, structural_matrix, DeleteMode, MatrixCategory, STRUCTURAL_BIAS};
use crate::category::{Biproduct, Category, CategoryError, Cone, ConeKind, SampleRng};
use crate::linalg::{RatMatrix, Rational, Subspace};

/// `Q^dim` with subspaces `flag[0] ⊆ flag[1] ⊆ …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FlagObjectRepr", into = "FlagObjectRepr")]
pub struct FlagObject {
    dim: usize,
    flag: Vec<Subspace>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagObjectRepr {
    dim: usize,
    #[serde(default)]
    flag: Vec<Subspace>,
}

impl TryFrom<FlagObjectRepr> for FlagObject {
    type Error = CategoryError;
    fn try_from(r: FlagObjectRepr) -> Result<Self, Self::Error> {
        FlagObject::new(r.dim, r.flag)
    }
}

impl From<FlagObject> for FlagObjectRepr {
    fn from(o: FlagObject) -> Self {
        FlagObjectRepr { dim: o.dim, flag: o.flag }
    }
}

impl FlagObject {
    pub fn new(dim: usize, flag: Vec<Subspace>) -> Result<Self, CategoryError> {
        if let Some(s) = flag.iter().find(|s| s.ambient_dim() != dim) {
            return Err(CategoryError::ConstraintViolation(format!(
                "flag layer lives in Q^{} but the object is Q^{dim}",
                s.ambient_dim()
            )));
        }
        for w in flag.windows(2) {
            if !w[1].contains(&w[0]).expect("same ambient") {
                return Err(CategoryError::ConstraintViolation("flag layers are not nested".into()));
            }
        }
        Ok(FlagObject { dim, flag })
    }

    /// `Q^dim` with every layer zero.
    pub fn bare(dim: usize, depth: usize) -> Self {
        FlagObject { dim, flag: vec![Subspace::zero(dim); depth] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.flag.len()
    }

    pub fn flag(&self) -> &[Subspace] {
        &self.flag
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FlagMorphismRepr", into = "FlagMorphismRepr")]
pub struct FlagMorphism {
    dom: FlagObject,
    cod: FlagObject,
    matrix: RatMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagMorphismRepr {
    dom: FlagObject,
    cod: FlagObject,
    matrix: RatMatrix,
}

impl TryFrom<FlagMorphismRepr> for FlagMorphism {
    type Error = CategoryError;
    fn try_from(r: FlagMorphismRepr) -> Result<Self, Self::Error> {
        FlagMorphism::new(r.dom, r.cod, r.matrix)
    }
}

impl From<FlagMorphism> for FlagMorphismRepr {
    fn from(m: FlagMorphism) -> Self {
        FlagMorphismRepr { dom: m.dom, cod: m.cod, matrix: m.matrix }
    }
}

impl FlagMorphism {
    /// Validates shape, flag depth and `F(V_i) ⊆ W_i` for every layer.
    pub fn new(dom: FlagObject, cod: FlagObject, matrix: RatMatrix) -> Result<Self, CategoryError> {
        if matrix.shape() != (cod.dim, dom.dim) {
            return Err(CategoryError::ConstraintViolation(format!(
                "matrix is {}x{} but the map goes Q^{} -> Q^{}",
                matrix.rows(),
                matrix.cols(),
                dom.dim,
                cod.dim
            )));
        }
        if dom.depth() != cod.depth() {
            return Err(CategoryError::ConstraintViolation("flags of different depth".into()));
        }
        for (i, (v, w)) in dom.flag.iter().zip(&cod.flag).enumerate() {
            let image = v.pushforward(&matrix).expect("shape checked");
            if !w.contains(&image).expect("shape checked") {
                return Err(CategoryError::ConstraintViolation(format!(
                    "layer {i} is not carried into the target layer"
                )));
            }
        }
        Ok(FlagMorphism { dom, cod, matrix })
    }

    pub fn dom(&self) -> &FlagObject {
        &self.dom
    }

    pub fn cod(&self) -> &FlagObject {
        &self.cod
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }
}

/// `VectQ` (depth 0), `SubVect` (depth 1) or `FiltVect_n` (depth n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlagCategory {
    depth: usize,
}

impl FlagCategory {
    pub fn new(depth: usize) -> Self {
        FlagCategory { depth }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn object(&self, dim: usize, flag: Vec<Subspace>) -> Result<FlagObject, CategoryError> {
        if flag.len() != self.depth {
            return Err(CategoryError::ConstraintViolation(format!(
                "{} objects carry {} layers, got {}",
                self.name(),
                self.depth,
                flag.len()
            )));
        }
        FlagObject::new(dim, flag)
    }

    /// Basis of the domain adapted to its flag: columns tagged with the first
    /// layer containing them, `depth` for vectors outside every layer.
    fn adapted_basis(&self, a: &FlagObject) -> (RatMatrix, Vec<usize>) {
        let mut cols: Vec<Vec<Rational>> = Vec::new();
        let mut tags = Vec::new();
        let mut span = Subspace::zero(a.dim);
        let standard = Subspace::full(a.dim);
        for (tag, layer) in a.flag.iter().chain(std::iter::once(&standard)).enumerate() {
            for j in 0..layer.dim() {
                let v = layer.basis().column(j);
                if !span.contains_vector(&v) {
                    span = span
                        .sum(&Subspace::span(&RatMatrix::from_columns(a.dim, std::slice::from_ref(&v))))
                        .expect("same ambient");
                    cols.push(v);
                    tags.push(tag);
                }
            }
        }
        (RatMatrix::from_columns(a.dim, &cols), tags)
    }
}

impl Category for FlagCategory {
    type Object = FlagObject;
    type Morphism = FlagMorphism;

    fn name(&self) -> String {
        match self.depth {
            0 => "VectQ".to_string(),
            1 => "SubVect".to_string(),
            n => format!("FiltVect_{n}"),
        }
    }

    fn dom<'a>(&self, f: &'a FlagMorphism) -> &'a FlagObject {
        &f.dom
    }

    fn cod<'a>(&self, f: &'a FlagMorphism) -> &'a FlagObject {
        &f.cod
    }

    fn identity(&self, a: &FlagObject) -> FlagMorphism {
        FlagMorphism { dom: a.clone(), cod: a.clone(), matrix: RatMatrix::identity(a.dim) }
    }

    fn zero_morphism(&self, a: &FlagObject, b: &FlagObject) -> FlagMorphism {
        FlagMorphism { dom: a.clone(), cod: b.clone(), matrix: RatMatrix::zeros(b.dim, a.dim) }
    }

    fn zero_object(&self) -> FlagObject {
        FlagObject::bare(0, self.depth)
    }

    fn is_zero_object(&self, a: &FlagObject) -> bool {
        a.dim == 0
    }

    fn compose(&self, g: &FlagMorphism, f: &FlagMorphism) -> Result<FlagMorphism, CategoryError> {
        if f.cod != g.dom {
            return Err(CategoryError::NotComposable(format!(
                "codomain of the first map (dim {}) differs from domain of the second (dim {})",
                f.cod.dim, g.dom.dim
            )));
        }
        Ok(FlagMorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            matrix: g.matrix.mul(&f.matrix).expect("dims agree"),
        })
    }

    fn add(&self, f: &FlagMorphism, g: &FlagMorphism) -> Result<FlagMorphism, CategoryError> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(CategoryError::EndpointMismatch("sum of maps with different endpoints".into()));
        }
        Ok(FlagMorphism {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            matrix: f.matrix.add(&g.matrix).expect("same shape"),
        })
    }

    fn negate(&self, f: &FlagMorphism) -> FlagMorphism {
        FlagMorphism { dom: f.dom.clone(), cod: f.cod.clone(), matrix: f.matrix.neg() }
    }

    fn biproduct(&self, a: &FlagObject, b: &FlagObject) -> Biproduct<FlagObject, FlagMorphism> {
        let flag = a.flag.iter().zip(&b.flag).map(|(x, y)| Subspace::span(&x.basis().block_diag(y.basis()))).collect();
        let object = FlagObject { dim: a.dim + b.dim, flag };
        let n = object.dim;
        let inj1 = RatMatrix::identity(a.dim).vstack(&RatMatrix::zeros(b.dim, a.dim)).expect("cols agree");
        let inj2 = RatMatrix::zeros(a.dim, b.dim).vstack(&RatMatrix::identity(b.dim)).expect("cols agree");
        let mk = |dom: &FlagObject, cod: &FlagObject, m: RatMatrix| FlagMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            matrix: m,
        };
        debug_assert_eq!(inj1.rows(), n);
        Biproduct {
            proj1: mk(&object, a, inj1.transpose()),
            proj2: mk(&object, b, inj2.transpose()),
            inj1: mk(a, &object, inj1),
            inj2: mk(b, &object, inj2),
            object,
        }
    }

    fn kernel(&self, f: &FlagMorphism) -> Cone<FlagObject, FlagMorphism> {
        let k = Subspace::kernel_of(&f.matrix).basis().clone();
        let flag = f.dom.flag.iter().map(|v| v.preimage(&k).expect("shape")).collect();
        let apex = FlagObject { dim: k.cols(), flag };
        Cone { kind: ConeKind::Kernel, leg: FlagMorphism { dom: apex.clone(), cod: f.dom.clone(), matrix: k }, apex }
    }

    fn cokernel(&self, f: &FlagMorphism) -> Cone<FlagObject, FlagMorphism> {
        let q = Subspace::image_of(&f.matrix).quotient_map();
        let flag = f.cod.flag.iter().map(|w| w.pushforward(&q).expect("shape")).collect();
        let apex = FlagObject { dim: q.rows(), flag };
        Cone { kind: ConeKind::Cokernel, leg: FlagMorphism { dom: f.cod.clone(), cod: apex.clone(), matrix: q }, apex }
    }

    fn lift(&self, mono: &FlagMorphism, x: &FlagMorphism) -> Option<FlagMorphism> {
        if mono.cod != x.cod {
            return None;
        }
        let u = mono.matrix.solve_right(&x.matrix).ok()?;
        FlagMorphism::new(x.dom.clone(), mono.dom.clone(), u).ok()
    }

    fn descend(&self, epi: &FlagMorphism, x: &FlagMorphism) -> Option<FlagMorphism> {
        if epi.dom != x.dom {
            return None;
        }
        let vt = epi.matrix.transpose().solve_right(&x.matrix.transpose()).ok()?;
        FlagMorphism::new(epi.cod.clone(), x.cod.clone(), vt.transpose()).ok()
    }

    fn inverse(&self, f: &FlagMorphism) -> Option<FlagMorphism> {
        let inv = f.matrix.inverse()?;
        FlagMorphism::new(f.cod.clone(), f.dom.clone(), inv).ok()
    }

    fn check_morphism(&self, f: &FlagMorphism) -> Result<(), CategoryError> {
        if f.dom.depth() != self.depth || f.cod.depth() != self.depth {
            return Err(CategoryError::ConstraintViolation(format!(
                "{} objects carry {} layers",
                self.name(),
                self.depth
            )));
        }
        FlagMorphism::new(f.dom.clone(), f.cod.clone(), f.matrix.clone()).map(|_| ())
    }

    fn random_object(&self, size_bound: usize, rng: &mut SampleRng) -> FlagObject {
        if size_bound == 0 || rng.gen_bool(0.1) {
            return self.zero_object();
        }
        let dim = rng.gen_range(1..=size_bound);
        let mut current = Subspace::zero(dim);
        let mut flag = Vec::with_capacity(self.depth);
        for _ in 0..self.depth {
            let target = match rng.gen_range(0..10) {
                0 => dim,
                1 => current.dim(),
                _ => rng.gen_range(current.dim()..=dim),
            };
            let mut attempts = 0;
            while current.dim() < target {
                let v = if attempts < 20 {
                    random_vector(rng, dim, 2)
                } else {
                    // fall back to a standard basis vector outside the span
                    let j = (0..dim)
                        .find(|&j| !current.contains_vector(&RatMatrix::identity(dim).column(j)))
                        .expect("proper subspace misses some e_j");
                    RatMatrix::identity(dim).column(j)
                };
                attempts += 1;
                if !current.contains_vector(&v) {
                    current = current.sum(&Subspace::span(&RatMatrix::from_columns(dim, &[v]))).expect("same ambient");
                }
            }
            flag.push(current.clone());
        }
        FlagObject { dim, flag }
    }

    fn random_morphism(&self, a: &FlagObject, b: &FlagObject, rng: &mut SampleRng) -> FlagMorphism {
        if rng.gen_bool(STRUCTURAL_BIAS) {
            let m = structural_matrix(rng, b.dim, a.dim);
            if let Ok(f) = FlagMorphism::new(a.clone(), b.clone(), m) {
                return f;
            }
        }
        let (basis, tags) = self.adapted_basis(a);
        let full = Subspace::full(b.dim);
        let images: Vec<Vec<Rational>> = tags
            .iter()
            .map(|&t| {
                let target = if t < self.depth { &b.flag[t] } else { &full };
                let coeffs = RatMatrix::from_columns(target.dim(), &[random_vector(rng, target.dim(), 2)]);
                target.basis().mul(&coeffs).expect("shape").column(0)
            })
            .collect();
        let images = RatMatrix::from_columns(b.dim, &images);
        let matrix = images.mul(&basis.inverse().expect("adapted basis is a basis")).expect("shape");
        FlagMorphism::new(a.clone(), b.clone(), matrix).expect("layers mapped into layers by construction")
    }
}

impl MatrixCategory for FlagCategory {
    fn object_dim(&self, a: &FlagObject) -> usize {
        a.dim
    }

    fn matrix<'a>(&self, f: &'a FlagMorphism) -> &'a RatMatrix {
        &f.matrix
    }

    fn make_morphism(
        &self,
        dom: &FlagObject,
        cod: &FlagObject,
        matrix: RatMatrix,
    ) -> Result<FlagMorphism, CategoryError> {
        let f = FlagMorphism::new(dom.clone(), cod.clone(), matrix)?;
        self.check_morphism(&f)?;
        Ok(f)
    }

    fn delete_coordinate(&self, a: &FlagObject, k: usize, mode: DeleteMode) -> FlagObject {
        let keep = RatMatrix::identity(a.dim).remove_column(k);
        let flag = a
            .flag
            .iter()
            .map(|v| match mode {
                DeleteMode::Restrict => v.preimage(&keep).expect("shape"),
                DeleteMode::Project => v.pushforward(&keep.transpose()).expect("shape"),
            })
            .collect();
        FlagObject { dim: a.dim - 1, flag }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{classify, decompose, pullback};
    use rand::SeedableRng;

    fn line(v: &[i64]) -> Subspace {
        Subspace::span(&RatMatrix::from_fn(v.len(), 1, |i, _| Rational::from_integer(v[i])))
    }

    fn subvect() -> FlagCategory {
        FlagCategory::new(1)
    }

    #[test]
    fn make_morphism_checks_constraints() {
        let c = subvect();
        let zero_pair = c.object(2, vec![Subspace::zero(2)]).unwrap();
        let full_pair = c.object(2, vec![Subspace::full(2)]).unwrap();
        assert!(c.make_morphism(&zero_pair, &full_pair, RatMatrix::identity(2)).is_ok());
        assert!(matches!(
            c.make_morphism(&full_pair, &zero_pair, RatMatrix::identity(2)),
            Err(CategoryError::ConstraintViolation(_))
        ));
        assert!(c.object(2, vec![]).is_err());
        assert!(FlagObject::new(2, vec![Subspace::full(2), line(&[1, 0])]).is_err());
    }

    #[test]
    fn subvect_kernel_example() {
        // f : (Q^2, span e1) -> (Q^1, Q^1), matrix [1 0]
        let c = subvect();
        let a = c.object(2, vec![line(&[1, 0])]).unwrap();
        let b = c.object(1, vec![Subspace::full(1)]).unwrap();
        let f = c.make_morphism(&a, &b, RatMatrix::from_i64(&[&[1, 0]])).unwrap();
        let k = c.kernel(&f);
        // ker F = span e2, and span e1 ∩ span e2 = 0
        // representative-dependent: pins the canonical basis chosen for the kernel
        assert_eq!(k.apex, c.object(1, vec![Subspace::zero(1)]).unwrap());
        assert_eq!(k.leg.matrix(), &RatMatrix::from_i64(&[&[0], &[1]]));
    }

    #[test]
    fn non_strict_identity() {
        let c = subvect();
        let v0 = c.object(2, vec![Subspace::zero(2)]).unwrap();
        let vv = c.object(2, vec![Subspace::full(2)]).unwrap();
        let f = c.make_morphism(&v0, &vv, RatMatrix::identity(2)).unwrap();
        let d = decompose(&c, &f).unwrap();
        // coim = (V,0) identity, im = (V,V) identity, fbar = id matrix (V,0)->(V,V)
        assert_eq!(d.coim, c.identity(&v0));
        assert_eq!(d.im, c.identity(&vv));
        assert_eq!(d.fbar, f);
        let cls = classify(&c, &f).unwrap();
        assert!(cls.mono && cls.epi && cls.bimorphism);
        assert!(!cls.iso && !cls.strict && !cls.is_kernel && !cls.is_cokernel);
    }

    #[test]
    fn pullback_of_inclusions_is_intersection() {
        let c = subvect();
        let amb = c.object(3, vec![Subspace::full(3)]).unwrap();
        let p1 = Subspace::span(&RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]));
        let p2 = Subspace::span(&RatMatrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]));
        let incl = |p: &Subspace| {
            let o = c.object(p.dim(), vec![Subspace::full(p.dim())]).unwrap();
            c.make_morphism(&o, &amb, p.basis().clone()).unwrap()
        };
        let sq = pullback(&c, &incl(&p1), &incl(&p2)).unwrap();
        let corner = c.dom(&sq.top);
        assert_eq!(corner.dim(), 1);
        let joint = c.compose(&sq.bottom, &sq.left).unwrap();
        assert_eq!(Subspace::image_of(joint.matrix()), p1.intersect(&p2).unwrap());
    }

    #[test]
    fn random_morphisms_respect_flags() {
        let c = FlagCategory::new(3);
        let mut rng = SampleRng::seed_from_u64(7);
        for _ in 0..100 {
            let a = c.random_object(4, &mut rng);
            let b = c.random_object(4, &mut rng);
            let f = c.random_morphism(&a, &b, &mut rng);
            c.check_morphism(&f).unwrap();
        }
    }

    #[test]
    fn json_rejects_invalid_morphism() {
        let c = subvect();
        let v0 = c.object(1, vec![Subspace::zero(1)]).unwrap();
        let vv = c.object(1, vec![Subspace::full(1)]).unwrap();
        let good = c.make_morphism(&v0, &vv, RatMatrix::identity(1)).unwrap();
        let text = serde_json::to_string(&good).unwrap();
        assert_eq!(serde_json::from_str::<FlagMorphism>(&text).unwrap(), good);
        let bad = text.replace("\"dom\"", "\"tmp\"").replace("\"cod\"", "\"dom\"").replace("\"tmp\"", "\"cod\"");
        assert!(serde_json::from_str::<FlagMorphism>(&bad).is_err());
    }
}
