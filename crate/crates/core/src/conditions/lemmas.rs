use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{to_json, Outcome};
use crate::category::{classify, decompose, pullback, pushout, Category, CategoryError, SampleRng};

type Result<T> = std::result::Result<T, CategoryError>;

/// Parameters of a semi-stability probe: how many pushouts (pullbacks) to
/// try, the seed for the test maps, and the size bound for their far ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeParams {
    pub samples: usize,
    pub seed: u64,
    pub dim_bound: usize,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams { samples: 50, seed: 0, dim_bound: 3 }
    }
}

pub(super) fn strict<C: Category>(cat: &C, f: &C::Morphism) -> Result<Outcome> {
    let c = classify(cat, f)?;
    Ok(Outcome::expect(
        c.strict,
        "f is strict",
        "f is not strict",
        || json!({ "class": to_json(&c), "fbar": to_json(&decompose(cat, f).map(|d| d.fbar).ok()) }),
    ))
}

pub(super) fn semi_abelian<C: Category>(cat: &C, f: &C::Morphism) -> Result<Outcome> {
    let d = decompose(cat, f)?;
    let mono = cat.is_zero_object(&cat.kernel(&d.fbar).apex);
    let epi = cat.is_zero_object(&cat.cokernel(&d.fbar).apex);
    Ok(Outcome::expect(
        mono && epi,
        "fbar is a bimorphism",
        "fbar is not a bimorphism",
        || json!({ "fbar": to_json(&d.fbar), "fbar_mono": mono, "fbar_epi": epi }),
    ))
}

/// `cok(g∘im f) ≅ cok(g∘f)` and `ker((coim g)∘f) ≅ ker(g∘f)`, each through
/// the unique comparison map.
pub(super) fn lemma2<C: Category>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Result<Outcome> {
    let gf = cat.compose(g, f)?;
    let df = decompose(cat, f)?;
    let dg = decompose(cat, g)?;

    let cok_gf = cat.cokernel(&gf);
    let cok_g_imf = cat.cokernel(&cat.compose(g, &df.im)?);
    let u = cok_gf.factor(cat, &cok_g_imf.leg);
    if u.as_ref().and_then(|u| cat.inverse(u)).is_none() {
        return Ok(Outcome::fail(
            "cok(g∘im f) is not canonically isomorphic to cok(g∘f)",
            json!({ "cok_gf": to_json(&cok_gf.leg), "cok_g_imf": to_json(&cok_g_imf.leg), "u": to_json(&u) }),
        ));
    }

    let ker_gf = cat.kernel(&gf);
    let ker_coimg_f = cat.kernel(&cat.compose(&dg.coim, f)?);
    let v = ker_coimg_f.factor(cat, &ker_gf.leg);
    if v.as_ref().and_then(|v| cat.inverse(v)).is_none() {
        return Ok(Outcome::fail(
            "ker((coim g)∘f) is not canonically isomorphic to ker(g∘f)",
            json!({ "ker_gf": to_json(&ker_gf.leg), "ker_coimg_f": to_json(&ker_coimg_f.leg), "v": to_json(&v) }),
        ));
    }
    Ok(Outcome::pass("both comparison maps are isomorphisms"))
}

/// For a kernel `g`: `im(g∘f) ≅ g∘im f`.
pub(super) fn corollary3_kernels<C: Category>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Result<Outcome> {
    if !classify(cat, g)?.is_kernel {
        return Ok(Outcome::vacuous("g is not a kernel"));
    }
    let g_imf = cat.compose(g, &decompose(cat, f)?.im)?;
    let im_gf = decompose(cat, &cat.compose(g, f)?)?.im;
    let w = cat.lift(&im_gf, &g_imf);
    Ok(Outcome::expect(
        w.as_ref().and_then(|w| cat.inverse(w)).is_some(),
        "im(g∘f) ≅ g∘im f",
        "im(g∘f) is not canonically isomorphic to g∘im f",
        || json!({ "im_gf": to_json(&im_gf), "g_imf": to_json(&g_imf), "w": to_json(&w) }),
    ))
}

/// For a cokernel `f`: `coim(g∘f) ≅ (coim g)∘f`.
pub(super) fn corollary3_cokernels<C: Category>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Result<Outcome> {
    if !classify(cat, f)?.is_cokernel {
        return Ok(Outcome::vacuous("f is not a cokernel"));
    }
    let coimg_f = cat.compose(&decompose(cat, g)?.coim, f)?;
    let coim_gf = decompose(cat, &cat.compose(g, f)?)?.coim;
    let w = cat.descend(&coim_gf, &coimg_f);
    Ok(Outcome::expect(
        w.as_ref().and_then(|w| cat.inverse(w)).is_some(),
        "coim(g∘f) ≅ (coim g)∘f",
        "coim(g∘f) is not canonically isomorphic to (coim g)∘f",
        || json!({ "coim_gf": to_json(&coim_gf), "coimg_f": to_json(&coimg_f), "w": to_json(&w) }),
    ))
}

/// Pushes the kernel `f` out along random maps and looks for a pushed-out
/// leg that is no longer a kernel. A pass only means none was found.
pub(super) fn probe_semistable_kernel<C: Category>(cat: &C, f: &C::Morphism, p: &ProbeParams) -> Result<Outcome> {
    if !classify(cat, f)?.is_kernel {
        return Ok(Outcome::vacuous("f is not a kernel"));
    }
    let mut rng = SampleRng::seed_from_u64(p.seed);
    for s in 0..p.samples {
        let a = cat.random_object(p.dim_bound, &mut rng);
        let alpha = cat.random_morphism(cat.dom(f), &a, &mut rng);
        let sq = pushout(cat, &alpha, f)?;
        if !classify(cat, &sq.bottom)?.is_kernel {
            return Ok(Outcome::fail(
                format!("pushout {s} of the kernel is not a kernel"),
                json!({ "sample": s, "alpha": to_json(&alpha), "pushed_out": to_json(&sq.bottom) }),
            ));
        }
    }
    Ok(Outcome::pass(format!("no counterexample in {} pushouts", p.samples)))
}

/// Pulls the cokernel `f` back along random maps; dual of
/// [`probe_semistable_kernel`].
pub(super) fn probe_semistable_cokernel<C: Category>(cat: &C, f: &C::Morphism, p: &ProbeParams) -> Result<Outcome> {
    if !classify(cat, f)?.is_cokernel {
        return Ok(Outcome::vacuous("f is not a cokernel"));
    }
    let mut rng = SampleRng::seed_from_u64(p.seed);
    for s in 0..p.samples {
        let d = cat.random_object(p.dim_bound, &mut rng);
        let t = cat.random_morphism(&d, cat.cod(f), &mut rng);
        let sq = pullback(cat, f, &t)?;
        if !classify(cat, &sq.top)?.is_cokernel {
            return Ok(Outcome::fail(
                format!("pullback {s} of the cokernel is not a cokernel"),
                json!({ "sample": s, "t": to_json(&t), "pulled_back": to_json(&sq.top) }),
            ));
        }
    }
    Ok(Outcome::pass(format!("no counterexample in {} pullbacks", p.samples)))
}
