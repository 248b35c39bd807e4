//! Instance generators, one per check, biased towards instances that meet
//! the check's hypothesis.
//!
//! Conditional shapes are built from kernel and cokernel legs of random maps
//! so that hypotheses such as "g is a kernel" hold by construction. A share
//! of each stream is drawn without that bias so vacuous instances still show
//! up in the tallies. Left-side and cokernel-flavoured checks are generated
//! as their duals in the opposite category and transported back.

use rand::Rng;

use crate::category::{classify, column, pushout, row, Category, Opposite, Provenance, SampleRng};
use crate::conditions::{Check, ConditionId, Index, Instance, Side};

/// How often a construction that needs rejection sampling is retried.
pub const RETRY_BUDGET: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no instance of the required shape within the retry budget")]
pub struct GenerationExhausted;

type Gen<M> = Result<Instance<M>, GenerationExhausted>;

/// A random instance for `check`, deterministic in `rng`.
pub fn generate_instance<C: Category>(
    cat: &C,
    check: Check,
    dim_bound: usize,
    rng: &mut SampleRng,
) -> Gen<C::Morphism> {
    let dual = |c: Check, rng: &mut SampleRng| Ok(direct(&Opposite(cat.clone()), c, dim_bound, rng)?.from_opposite());
    match check {
        Check::Condition(ConditionId { side: Side::Left, index }) => {
            dual(Check::Condition(ConditionId::right(index)), rng)
        }
        Check::Corollary3Cokernels => dual(Check::Corollary3Kernels, rng),
        Check::SemistableCokernel => dual(Check::SemistableKernel, rng),
        _ => direct(cat, check, dim_bound, rng),
    }
}

/// Generators for the checks that are not built as duals.
fn direct<C: Category>(cat: &C, check: Check, dim_bound: usize, rng: &mut SampleRng) -> Gen<C::Morphism> {
    match check {
        Check::Condition(ConditionId { side: Side::Right, index }) => right(cat, index, dim_bound, rng),
        Check::Lemma2 => {
            let f = any_arrow(cat, dim_bound, rng);
            let g = arrow_from(cat, cat.cod(&f), dim_bound, rng);
            Ok(Instance::Pair { h: g, l: f })
        }
        Check::Corollary3Kernels => {
            let g = kernel_leg(cat, None, dim_bound, rng);
            let f = arrow_into(cat, cat.dom(&g), dim_bound, rng);
            Ok(Instance::Pair { h: g, l: f })
        }
        Check::SemistableKernel => Ok(Instance::Morphism { f: kernel_leg(cat, None, dim_bound, rng) }),
        _ => Ok(Instance::Morphism { f: any_arrow(cat, dim_bound, rng) }),
    }
}

fn any_arrow<C: Category>(cat: &C, dim_bound: usize, rng: &mut SampleRng) -> C::Morphism {
    let a = cat.random_object(dim_bound, rng);
    arrow_from(cat, &a, dim_bound, rng)
}

fn arrow_from<C: Category>(cat: &C, a: &C::Object, dim_bound: usize, rng: &mut SampleRng) -> C::Morphism {
    let b = cat.random_object(dim_bound, rng);
    cat.random_morphism(a, &b, rng)
}

fn arrow_into<C: Category>(cat: &C, b: &C::Object, dim_bound: usize, rng: &mut SampleRng) -> C::Morphism {
    let a = cat.random_object(dim_bound, rng);
    cat.random_morphism(&a, b, rng)
}

/// `ker φ` for a random `φ` out of `target` (or out of a random object).
fn kernel_leg<C: Category>(cat: &C, target: Option<&C::Object>, dim_bound: usize, rng: &mut SampleRng) -> C::Morphism {
    let d = match target {
        Some(d) => d.clone(),
        None => cat.random_object(dim_bound, rng),
    };
    // a small codomain makes the kernel nontrivial more often
    let e = cat.random_object(dim_bound.min(2), rng);
    let phi = cat.random_morphism(&d, &e, rng);
    cat.kernel(&phi).leg
}

/// `cok ψ` for a random `ψ` into `source`.
fn cokernel_leg<C: Category>(cat: &C, source: &C::Object, dim_bound: usize, rng: &mut SampleRng) -> C::Morphism {
    let x = cat.random_object(dim_bound.min(2), rng);
    let psi = cat.random_morphism(&x, source, rng);
    cat.cokernel(&psi).leg
}

fn right<C: Category>(cat: &C, index: Index, dim_bound: usize, rng: &mut SampleRng) -> Gen<C::Morphism> {
    match index {
        Index::I => Ok(Instance::Morphism { f: any_arrow(cat, dim_bound, rng) }),
        Index::Ii => Ok(composite_kernel_pair(cat, dim_bound, rng)),
        Index::Vi => {
            let h = kernel_leg(cat, None, dim_bound, rng);
            let l = if rng.gen_bool(0.9) {
                kernel_leg(cat, Some(cat.dom(&h)), dim_bound, rng)
            } else {
                arrow_into(cat, cat.dom(&h), dim_bound, rng)
            };
            Ok(Instance::Pair { h, l })
        }
        Index::Iii | Index::Iv | Index::V => {
            let g =
                if rng.gen_bool(0.9) { kernel_leg(cat, None, dim_bound, rng) } else { any_arrow(cat, dim_bound, rng) };
            let alpha = if index == Index::V && rng.gen_bool(0.8) {
                cokernel_leg(cat, cat.dom(&g), dim_bound, rng)
            } else {
                arrow_from(cat, cat.dom(&g), dim_bound, rng)
            };
            pushout_instance(cat, &alpha, &g, rng)
        }
        Index::Vii => {
            let g = strict_arrow(cat, dim_bound, rng)?;
            let alpha = arrow_from(cat, cat.dom(&g), dim_bound, rng);
            pushout_instance(cat, &alpha, &g, rng)
        }
    }
}

/// The pushout of `α` and `g`; one in ten is handed over as a merely
/// commutative square so the checker has to verify the pushout property.
fn pushout_instance<C: Category>(
    cat: &C,
    alpha: &C::Morphism,
    g: &C::Morphism,
    rng: &mut SampleRng,
) -> Gen<C::Morphism> {
    let mut sq = pushout(cat, alpha, g).map_err(|_| GenerationExhausted)?;
    if rng.gen_bool(0.1) {
        sq.provenance = Provenance::Commutative;
    }
    Ok(Instance::Square(sq))
}

fn strict_arrow<C: Category>(
    cat: &C,
    dim_bound: usize,
    rng: &mut SampleRng,
) -> Result<C::Morphism, GenerationExhausted> {
    for _ in 0..RETRY_BUDGET {
        let g = match rng.gen_range(0..4) {
            0 => kernel_leg(cat, None, dim_bound, rng),
            1 => {
                let d = cat.random_object(dim_bound, rng);
                cokernel_leg(cat, &d, dim_bound, rng)
            }
            2 => {
                // a cokernel followed by a split kernel [id; m]
                let d = cat.random_object(dim_bound, rng);
                let q = cokernel_leg(cat, &d, dim_bound, rng);
                let y = cat.random_object(dim_bound, rng);
                let m = cat.random_morphism(cat.cod(&q), &y, rng);
                let k = column(cat, &cat.identity(cat.cod(&q)), &m).expect("common domain");
                cat.compose(&k, &q).expect("composable by construction")
            }
            _ => any_arrow(cat, dim_bound, rng),
        };
        if classify(cat, &g).map(|c| c.strict).unwrap_or(false) {
            return Ok(g);
        }
    }
    Err(GenerationExhausted)
}

/// A pair aimed at `h ∘ l` being a kernel, from one of three recipes:
/// a split factorization of a kernel `k` through `X ⊕ Y`, a kernel `h` after
/// an arbitrary `l`, or two kernels.
fn composite_kernel_pair<C: Category>(cat: &C, dim_bound: usize, rng: &mut SampleRng) -> Instance<C::Morphism> {
    match rng.gen_range(0..3) {
        0 => {
            // l = [id; m] : X -> X ⊕ Y and h = [k - n∘m, n] : X ⊕ Y -> Z, so h∘l = k
            let k = kernel_leg(cat, None, dim_bound, rng);
            let x = cat.dom(&k).clone();
            let y = cat.random_object(dim_bound, rng);
            let m = cat.random_morphism(&x, &y, rng);
            let n = cat.random_morphism(&y, cat.cod(&k), rng);
            let nm = cat.compose(&n, &m).expect("composable by construction");
            let l = column(cat, &cat.identity(&x), &m).expect("common domain");
            let h = row(cat, &cat.add(&k, &cat.negate(&nm)).expect("parallel"), &n).expect("common codomain");
            Instance::Pair { h, l }
        }
        1 => {
            let h = kernel_leg(cat, None, dim_bound, rng);
            let l = arrow_into(cat, cat.dom(&h), dim_bound, rng);
            Instance::Pair { h, l }
        }
        _ => {
            let h = kernel_leg(cat, None, dim_bound, rng);
            let l = kernel_leg(cat, Some(cat.dom(&h)), dim_bound, rng);
            Instance::Pair { h, l }
        }
    }
}
