use serde::{Deserialize, Serialize};

use super::{Biproduct, Category, CategoryError, Cone, Provenance, Square};

type Result<T> = std::result::Result<T, CategoryError>;

fn law(msg: &str) -> CategoryError {
    CategoryError::LawViolation(msg.to_string())
}

/// `f = im ∘ fbar ∘ coim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition<M> {
    pub coim: M,
    pub fbar: M,
    pub im: M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismClass {
    pub mono: bool,
    pub epi: bool,
    pub bimorphism: bool,
    pub iso: bool,
    pub strict: bool,
    pub is_kernel: bool,
    pub is_cokernel: bool,
}

/// `[f; g] : X -> A ⊕ B` for `f : X -> A`, `g : X -> B`.
pub fn column<C: Category>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Result<C::Morphism> {
    if cat.dom(f) != cat.dom(g) {
        return Err(CategoryError::EndpointMismatch("column entries need a common domain".into()));
    }
    let bp = cat.biproduct(cat.cod(f), cat.cod(g));
    cat.add(&cat.compose(&bp.inj1, f)?, &cat.compose(&bp.inj2, g)?)
}

/// `[f, g] : A ⊕ B -> Y` for `f : A -> Y`, `g : B -> Y`.
pub fn row<C: Category>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Result<C::Morphism> {
    if cat.cod(f) != cat.cod(g) {
        return Err(CategoryError::EndpointMismatch("row entries need a common codomain".into()));
    }
    let bp = cat.biproduct(cat.dom(f), cat.dom(g));
    cat.add(&cat.compose(f, &bp.proj1)?, &cat.compose(g, &bp.proj2)?)
}

struct Full<O, M> {
    kernel: Cone<O, M>,
    cokernel: Cone<O, M>,
    decomposition: Decomposition<M>,
}

fn decompose_full<C: Category>(cat: &C, f: &C::Morphism) -> Result<Full<C::Object, C::Morphism>> {
    let kernel = cat.kernel(f);
    let coim = cat.cokernel(&kernel.leg);
    let cokernel = cat.cokernel(f);
    let im = cat.kernel(&cokernel.leg);
    // f kills ker f, so it descends along coim; the result is killed by cok f
    // because coim is epi, so it lifts through im
    let through_coim = coim.factor(cat, f).ok_or_else(|| law("f does not factor through coim f"))?;
    let fbar = im.factor(cat, &through_coim).ok_or_else(|| law("f does not factor through im f"))?;
    Ok(Full { kernel, cokernel, decomposition: Decomposition { coim: coim.leg, fbar, im: im.leg } })
}

/// The canonical decomposition of `f`.
pub fn decompose<C: Category>(cat: &C, f: &C::Morphism) -> Result<Decomposition<C::Morphism>> {
    Ok(decompose_full(cat, f)?.decomposition)
}

pub fn classify<C: Category>(cat: &C, f: &C::Morphism) -> Result<MorphismClass> {
    let full = decompose_full(cat, f)?;
    let mono = cat.is_zero_object(&full.kernel.apex);
    let epi = cat.is_zero_object(&full.cokernel.apex);
    let iso = cat.inverse(f).is_some();
    let strict = cat.inverse(&full.decomposition.fbar).is_some();
    Ok(MorphismClass {
        mono,
        epi,
        bimorphism: mono && epi,
        iso,
        strict,
        is_kernel: mono && strict,
        is_cokernel: epi && strict,
    })
}

type BiproductCone<C> = (
    Biproduct<<C as Category>::Object, <C as Category>::Morphism>,
    Cone<<C as Category>::Object, <C as Category>::Morphism>,
);

fn pushout_cone<C: Category>(cat: &C, alpha: &C::Morphism, g: &C::Morphism) -> Result<BiproductCone<C>> {
    let bp = cat.biproduct(cat.cod(alpha), cat.cod(g));
    let diff = column(cat, alpha, &cat.negate(g))?;
    Ok((bp, cat.cokernel(&diff)))
}

fn pullback_cone<C: Category>(cat: &C, f: &C::Morphism, t: &C::Morphism) -> Result<BiproductCone<C>> {
    let bp = cat.biproduct(cat.dom(f), cat.dom(t));
    let diff = row(cat, f, &cat.negate(t))?;
    Ok((bp, cat.kernel(&diff)))
}

/// Pushout of the span `A <-alpha- C -g-> D`, as the cokernel of
/// `[alpha; -g] : C -> A ⊕ D`.
pub fn pushout<C: Category>(cat: &C, alpha: &C::Morphism, g: &C::Morphism) -> Result<Square<C::Morphism>> {
    let (bp, q) = pushout_cone(cat, alpha, g)?;
    let bottom = cat.compose(&q.leg, &bp.inj1)?;
    let right = cat.compose(&q.leg, &bp.inj2)?;
    Square::new(cat, g.clone(), alpha.clone(), bottom, right, Provenance::Pushout)
}

/// Pullback of the cospan `E -f-> F <-t- G`, as the kernel of
/// `[f, -t] : E ⊕ G -> F`.
pub fn pullback<C: Category>(cat: &C, f: &C::Morphism, t: &C::Morphism) -> Result<Square<C::Morphism>> {
    let (bp, k) = pullback_cone(cat, f, t)?;
    let left = cat.compose(&bp.proj1, &k.leg)?;
    let top = cat.compose(&bp.proj2, &k.leg)?;
    Square::new(cat, top, left, f.clone(), t.clone(), Provenance::Pullback)
}

/// The unique `a` with `left ∘ ker(top) = ker(bottom) ∘ a`.
pub fn induced_kernel_map<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<C::Morphism> {
    let kg = cat.kernel(&sq.top);
    let kf = cat.kernel(&sq.bottom);
    let x = cat.compose(&sq.left, &kg.leg)?;
    kf.factor(cat, &x).ok_or_else(|| law("left ∘ ker(top) does not factor through ker(bottom)"))
}

/// The unique `b` with `cok(bottom) ∘ right = b ∘ cok(top)`.
pub fn induced_cokernel_map<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<C::Morphism> {
    let cg = cat.cokernel(&sq.top);
    let cf = cat.cokernel(&sq.bottom);
    let x = cat.compose(&cf.leg, &sq.right)?;
    cg.factor(cat, &x).ok_or_else(|| law("cok(bottom) ∘ right does not factor through cok(top)"))
}

/// Whether the comparison map from the square's corner into the constructed
/// pullback of `(bottom, right)` is an isomorphism.
pub fn is_pullback<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<bool> {
    let (_, k) = pullback_cone(cat, &sq.bottom, &sq.right)?;
    let cone = column(cat, &sq.left, &sq.top)?;
    let u = k.factor(cat, &cone).ok_or_else(|| law("commutative square does not map into the pullback"))?;
    Ok(cat.inverse(&u).is_some())
}

/// Whether the comparison map out of the constructed pushout of
/// `(left, top)` into the square's corner is an isomorphism.
pub fn is_pushout<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<bool> {
    let (_, q) = pushout_cone(cat, &sq.left, &sq.top)?;
    let cocone = row(cat, &sq.bottom, &sq.right)?;
    let v = q.factor(cat, &cocone).ok_or_else(|| law("commutative square does not receive the pushout"))?;
    Ok(cat.inverse(&v).is_some())
}
