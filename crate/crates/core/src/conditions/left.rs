//! The left-side conditions spelled out in the original category.

use serde_json::json;

use super::{to_json, Index, Instance, Outcome};
use crate::category::{
    classify, decompose, induced_cokernel_map, is_pullback, is_pushout, Category, CategoryError, Provenance, Square,
};

type Result<T> = std::result::Result<T, CategoryError>;

pub(super) fn check<C: Category>(cat: &C, index: Index, inst: &Instance<C::Morphism>) -> Result<Outcome> {
    match (index, inst) {
        (Index::I, Instance::Morphism { f }) => fbar_mono(cat, f),
        (Index::Ii, Instance::Pair { h, l }) => composite_cokernel_gives_cokernel(cat, h, l),
        (Index::Iii, Instance::Square(sq)) => pullback_along_cokernel_is_pushout(cat, sq),
        (Index::Iv, Instance::Square(sq)) => pullback_along_cokernel_is_epi(cat, sq, false),
        (Index::V, Instance::Square(sq)) => pullback_along_cokernel_is_epi(cat, sq, true),
        (Index::Vi, Instance::Pair { h, l }) => cokernels_compose(cat, h, l),
        (Index::Vii, Instance::Square(sq)) => induced_cokernel_map_mono(cat, sq),
        _ => unreachable!("shape checked by caller"),
    }
}

fn is_pullback_square<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<bool> {
    Ok(sq.provenance == Provenance::Pullback || is_pullback(cat, sq)?)
}

fn fbar_mono<C: Category>(cat: &C, f: &C::Morphism) -> Result<Outcome> {
    let d = decompose(cat, f)?;
    let ker = cat.kernel(&d.fbar);
    Ok(Outcome::expect(
        cat.is_zero_object(&ker.apex),
        "fbar is a monomorphism",
        "fbar is not a monomorphism",
        || json!({ "fbar": to_json(&d.fbar), "ker_fbar": to_json(&ker.leg) }),
    ))
}

fn composite_cokernel_gives_cokernel<C: Category>(cat: &C, h: &C::Morphism, l: &C::Morphism) -> Result<Outcome> {
    let hl = cat.compose(h, l)?;
    if !classify(cat, &hl)?.is_cokernel {
        return Ok(Outcome::vacuous("h∘l is not a cokernel"));
    }
    let ch = classify(cat, h)?;
    Ok(Outcome::expect(
        ch.is_cokernel,
        "h is a cokernel",
        "h∘l is a cokernel but h is not",
        || json!({ "h_class": to_json(&ch), "fbar_h": to_json(&decompose(cat, h).map(|d| d.fbar).ok()) }),
    ))
}

fn pullback_along_cokernel<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<Option<Outcome>> {
    if !classify(cat, &sq.bottom)?.is_cokernel {
        return Ok(Some(Outcome::vacuous("f is not a cokernel")));
    }
    if !is_pullback_square(cat, sq)? {
        return Ok(Some(Outcome::vacuous("square is not a pullback")));
    }
    Ok(None)
}

fn pullback_along_cokernel_is_pushout<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<Outcome> {
    if let Some(v) = pullback_along_cokernel(cat, sq)? {
        return Ok(v);
    }
    Ok(Outcome::expect(
        is_pushout(cat, sq)?,
        "square is a pushout",
        "pullback along a cokernel is not a pushout",
        || json!({ "square": to_json(sq) }),
    ))
}

fn pullback_along_cokernel_is_epi<C: Category>(
    cat: &C,
    sq: &Square<C::Morphism>,
    need_kernel_alpha: bool,
) -> Result<Outcome> {
    if need_kernel_alpha && !classify(cat, &sq.left)?.is_kernel {
        return Ok(Outcome::vacuous("α is not a kernel"));
    }
    if let Some(v) = pullback_along_cokernel(cat, sq)? {
        return Ok(v);
    }
    let c = cat.cokernel(&sq.top);
    Ok(Outcome::expect(
        cat.is_zero_object(&c.apex),
        "g is an epimorphism",
        "g is not an epimorphism",
        || json!({ "cok_g": to_json(&c.leg) }),
    ))
}

fn cokernels_compose<C: Category>(cat: &C, h: &C::Morphism, l: &C::Morphism) -> Result<Outcome> {
    if !classify(cat, l)?.is_cokernel || !classify(cat, h)?.is_cokernel {
        return Ok(Outcome::vacuous("l and h are not both cokernels"));
    }
    let hl = cat.compose(h, l)?;
    let c = classify(cat, &hl)?;
    Ok(Outcome::expect(
        c.is_cokernel,
        "h∘l is a cokernel",
        "h∘l is not a cokernel",
        || json!({ "hl": to_json(&hl), "hl_class": to_json(&c) }),
    ))
}

fn induced_cokernel_map_mono<C: Category>(cat: &C, sq: &Square<C::Morphism>) -> Result<Outcome> {
    if !classify(cat, &sq.bottom)?.strict {
        return Ok(Outcome::vacuous("f is not strict"));
    }
    if !is_pullback_square(cat, sq)? {
        return Ok(Outcome::vacuous("square is not a pullback"));
    }
    let b = induced_cokernel_map(cat, sq)?;
    let ker = cat.kernel(&b);
    Ok(Outcome::expect(
        cat.is_zero_object(&ker.apex),
        "β̂ is a monomorphism",
        "β̂ is not a monomorphism",
        || json!({ "beta_hat": to_json(&b), "ker_beta_hat": to_json(&ker.leg) }),
    ))
}
