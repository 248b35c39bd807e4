//! Greedy shrinking of failing instances.
//!
//! An instance is taken apart into a small diagram of objects and matrix
//! arrows. Squares that were built as pushouts (pullbacks) are kept as their
//! span (cospan) and rebuilt after every move, so a shrunk square is still a
//! pushout (pullback). Moves delete a coordinate of an object, zero an entry,
//! replace an entry by its sign, or move an integer entry one step towards
//! zero. A move is kept only if the rebuilt instance is valid, still fails,
//! and is strictly smaller in the order (total dimension, sum of entry
//! heights, nonzero entries).

use crate::backends::{DeleteMode, MatrixCategory};
use crate::category::{pullback, pushout, Provenance, Square};
use crate::conditions::Instance;
use crate::linalg::{RatMatrix, Rational};

/// `(total dimension, sum of entry heights, nonzero entries)`, compared
/// lexicographically.
pub type SizeMetric = (usize, u64, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Morphism,
    Pair,
    Span,
    Cospan,
    Square,
}

#[derive(Debug, Clone)]
struct Arrow {
    dom: usize,
    cod: usize,
    matrix: RatMatrix,
}

#[derive(Debug, Clone)]
struct Diagram<O> {
    layout: Layout,
    objects: Vec<O>,
    arrows: Vec<Arrow>,
}

fn decompose<C: MatrixCategory>(cat: &C, inst: &Instance<C::Morphism>) -> Diagram<C::Object> {
    let arrow = |m: &C::Morphism, dom, cod| Arrow { dom, cod, matrix: cat.matrix(m).clone() };
    match inst {
        Instance::Morphism { f } => Diagram {
            layout: Layout::Morphism,
            objects: vec![cat.dom(f).clone(), cat.cod(f).clone()],
            arrows: vec![arrow(f, 0, 1)],
        },
        Instance::Pair { h, l } => Diagram {
            layout: Layout::Pair,
            objects: vec![cat.dom(l).clone(), cat.cod(l).clone(), cat.cod(h).clone()],
            arrows: vec![arrow(l, 0, 1), arrow(h, 1, 2)],
        },
        Instance::Square(sq) => match sq.provenance {
            Provenance::Pushout => Diagram {
                layout: Layout::Span,
                objects: vec![cat.dom(&sq.top).clone(), cat.cod(&sq.left).clone(), cat.cod(&sq.top).clone()],
                arrows: vec![arrow(&sq.left, 0, 1), arrow(&sq.top, 0, 2)],
            },
            Provenance::Pullback => Diagram {
                layout: Layout::Cospan,
                objects: vec![cat.dom(&sq.bottom).clone(), cat.dom(&sq.right).clone(), cat.cod(&sq.bottom).clone()],
                arrows: vec![arrow(&sq.bottom, 0, 2), arrow(&sq.right, 1, 2)],
            },
            Provenance::Commutative => Diagram {
                layout: Layout::Square,
                objects: vec![
                    cat.dom(&sq.top).clone(),
                    cat.cod(&sq.top).clone(),
                    cat.cod(&sq.left).clone(),
                    cat.cod(&sq.bottom).clone(),
                ],
                arrows: vec![
                    arrow(&sq.top, 0, 1),
                    arrow(&sq.left, 0, 2),
                    arrow(&sq.bottom, 2, 3),
                    arrow(&sq.right, 1, 3),
                ],
            },
        },
    }
}

fn rebuild<C: MatrixCategory>(cat: &C, d: &Diagram<C::Object>) -> Option<Instance<C::Morphism>> {
    let ms: Vec<C::Morphism> = d
        .arrows
        .iter()
        .map(|a| cat.make_morphism(&d.objects[a.dom], &d.objects[a.cod], a.matrix.clone()))
        .collect::<Result<_, _>>()
        .ok()?;
    let inst = match d.layout {
        Layout::Morphism => Instance::Morphism { f: ms[0].clone() },
        Layout::Pair => Instance::Pair { h: ms[1].clone(), l: ms[0].clone() },
        Layout::Span => Instance::Square(pushout(cat, &ms[0], &ms[1]).ok()?),
        Layout::Cospan => Instance::Square(pullback(cat, &ms[0], &ms[1]).ok()?),
        Layout::Square => Instance::Square(
            Square::new(cat, ms[0].clone(), ms[1].clone(), ms[2].clone(), ms[3].clone(), Provenance::Commutative)
                .ok()?,
        ),
    };
    Some(inst)
}

fn diagram_metric<C: MatrixCategory>(cat: &C, d: &Diagram<C::Object>) -> SizeMetric {
    let dim = d.objects.iter().map(|o| cat.object_dim(o)).sum();
    let entries = d.arrows.iter().flat_map(|a| a.matrix.entries());
    let height = entries.clone().filter(|x| !x.is_zero()).map(|x| x.height()).fold(0u64, u64::saturating_add);
    let nonzero = entries.filter(|x| !x.is_zero()).count();
    (dim, height, nonzero)
}

/// The size of an instance in the shrinking order.
pub fn instance_metric<C: MatrixCategory>(cat: &C, inst: &Instance<C::Morphism>) -> SizeMetric {
    diagram_metric(cat, &decompose(cat, inst))
}

fn candidates<C: MatrixCategory>(cat: &C, d: &Diagram<C::Object>) -> Vec<Diagram<C::Object>> {
    let mut out = Vec::new();
    for (i, obj) in d.objects.iter().enumerate() {
        for k in 0..cat.object_dim(obj) {
            for mode in [DeleteMode::Restrict, DeleteMode::Project] {
                let mut c = d.clone();
                c.objects[i] = cat.delete_coordinate(obj, k, mode);
                for a in &mut c.arrows {
                    if a.cod == i {
                        a.matrix = a.matrix.remove_row(k);
                    }
                    if a.dom == i {
                        a.matrix = a.matrix.remove_column(k);
                    }
                }
                out.push(c);
            }
        }
    }
    for (ai, a) in d.arrows.iter().enumerate() {
        for r in 0..a.matrix.rows() {
            for s in 0..a.matrix.cols() {
                let x = &a.matrix[(r, s)];
                if x.is_zero() {
                    continue;
                }
                let sign = Rational::from_integer(x.signum() as i64);
                let mut replacements = vec![Rational::zero()];
                if x.abs() != Rational::one() {
                    replacements.push(sign.clone());
                }
                if x.is_integer() && x.abs() > Rational::from_integer(2) {
                    replacements.push(x - &sign);
                }
                for y in replacements {
                    let mut c = d.clone();
                    c.arrows[ai].matrix[(r, s)] = y;
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Shrinks `inst` while `still_fails` holds, evaluating `still_fails` at
/// most `budget` times. Returns `inst` itself when no move applies.
pub fn shrink<C, F>(cat: &C, inst: &Instance<C::Morphism>, budget: usize, still_fails: F) -> Instance<C::Morphism>
where
    C: MatrixCategory,
    F: Fn(&Instance<C::Morphism>) -> bool,
{
    let mut best = inst.clone();
    let mut diagram = decompose(cat, inst);
    let mut metric = diagram_metric(cat, &diagram);
    let mut budget = budget;
    'outer: loop {
        for cand in candidates(cat, &diagram) {
            let m = diagram_metric(cat, &cand);
            if m >= metric {
                continue;
            }
            let Some(rebuilt) = rebuild(cat, &cand) else { continue };
            if budget == 0 {
                break 'outer;
            }
            budget -= 1;
            if still_fails(&rebuilt) {
                best = rebuilt;
                diagram = cand;
                metric = m;
                continue 'outer;
            }
        }
        break;
    }
    best
}
