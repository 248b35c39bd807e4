use serde_json::json;

use super::{to_json, Index, Instance, Outcome};
use crate::category::{
    classify, decompose, induced_kernel_map, is_pullback, is_pushout, Category, CategoryError, Provenance, Square,
};

type Result<T> = std::result::Result<T, CategoryError>;

pub(super) fn check<C: Category>(cat: &C, index: Index, inst: &Instance<C::Morphism>) -> Result<Outcome> {
    match (index, inst) {
        (Index::I, Instance::Morphism { f }) => fbar_epi(cat, f),
        (Index::Ii, Instance::Pair { h, l }) => composite_kernel_gives_kernel(cat, h, l),
        (Index::Iii, Instance::Square(sq)) => pushout_along_kernel_is_pullback(cat, sq),
        (Index::Iv, Instance::Square(sq)) => pushout_along_kernel_is_mono(cat, sq, false),
        (Index::V, Instance::Square(sq)) => pushout_along_kernel_is_mono(cat, sq, true),
        (Index::Vi, Instance::Pair { h, l }) => kernels_compose(cat, h, l),
        (Index::Vii, Instance::Square(sq)) => induced_kernel_map_epi(cat, sq),
        _ => unreachable!("shape checked by caller"),
    }
}

pub(super) fn is_pushout_square<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<bool> {
    Ok(sq.provenance == Provenance::Pushout || is_pushout(cat, sq)?)
}

fn fbar_epi<C: Category>(cat: &C, f: &C::Morphism) -> Result<Outcome> {
    let d = decompose(cat, f)?;
    let cok = cat.cokernel(&d.fbar);
    Ok(Outcome::expect(
        cat.is_zero_object(&cok.apex),
        "fbar is an epimorphism",
        "fbar is not an epimorphism",
        || json!({ "fbar": to_json(&d.fbar), "cok_fbar": to_json(&cok.leg) }),
    ))
}

fn composite_kernel_gives_kernel<C: Category>(cat: &C, h: &C::Morphism, l: &C::Morphism) -> Result<Outcome> {
    let hl = cat.compose(h, l)?;
    if !classify(cat, &hl)?.is_kernel {
        return Ok(Outcome::vacuous("h∘l is not a kernel"));
    }
    let cl = classify(cat, l)?;
    Ok(Outcome::expect(
        cl.is_kernel,
        "l is a kernel",
        "h∘l is a kernel but l is not",
        || json!({ "l_class": to_json(&cl), "fbar_l": to_json(&decompose(cat, l).map(|d| d.fbar).ok()) }),
    ))
}

/// The shared hypothesis of (iii)–(v): a pushout square whose top leg is a kernel.
fn pushout_along_kernel<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<Option<Outcome>> {
    if !classify(cat, &sq.top)?.is_kernel {
        return Ok(Some(Outcome::vacuous("g is not a kernel")));
    }
    if !is_pushout_square(cat, sq)? {
        return Ok(Some(Outcome::vacuous("square is not a pushout")));
    }
    Ok(None)
}

fn pushout_along_kernel_is_pullback<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<Outcome> {
    if let Some(v) = pushout_along_kernel(cat, sq)? {
        return Ok(v);
    }
    Ok(Outcome::expect(
        is_pullback(cat, sq)?,
        "square is a pullback",
        "pushout along a kernel is not a pullback",
        || json!({ "square": to_json(sq) }),
    ))
}

fn pushout_along_kernel_is_mono<C: Category>(
    cat: &C,
    sq: &Square<C::Morphism>,
    need_cokernel_beta: bool,
) -> Result<Outcome> {
    if need_cokernel_beta && !classify(cat, &sq.right)?.is_cokernel {
        return Ok(Outcome::vacuous("β is not a cokernel"));
    }
    if let Some(v) = pushout_along_kernel(cat, sq)? {
        return Ok(v);
    }
    let k = cat.kernel(&sq.bottom);
    Ok(Outcome::expect(
        cat.is_zero_object(&k.apex),
        "f is a monomorphism",
        "f is not a monomorphism",
        || json!({ "ker_f": to_json(&k.leg) }),
    ))
}

fn kernels_compose<C: Category>(cat: &C, h: &C::Morphism, l: &C::Morphism) -> Result<Outcome> {
    if !classify(cat, l)?.is_kernel || !classify(cat, h)?.is_kernel {
        return Ok(Outcome::vacuous("l and h are not both kernels"));
    }
    let hl = cat.compose(h, l)?;
    let c = classify(cat, &hl)?;
    Ok(Outcome::expect(
        c.is_kernel,
        "h∘l is a kernel",
        "h∘l is not a kernel",
        || json!({ "hl": to_json(&hl), "hl_class": to_json(&c) }),
    ))
}

fn induced_kernel_map_epi<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<Outcome> {
    if !classify(cat, &sq.top)?.strict {
        return Ok(Outcome::vacuous("g is not strict"));
    }
    if !is_pushout_square(cat, sq)? {
        return Ok(Outcome::vacuous("square is not a pushout"));
    }
    let a = induced_kernel_map(cat, sq)?;
    let cok = cat.cokernel(&a);
    Ok(Outcome::expect(
        cat.is_zero_object(&cok.apex),
        "α̂ is an epimorphism",
        "α̂ is not an epimorphism",
        || json!({ "alpha_hat": to_json(&a), "cok_alpha_hat": to_json(&cok.leg) }),
    ))
}
