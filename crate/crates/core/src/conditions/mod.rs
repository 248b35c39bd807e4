//! Per-instance checkers for the right/left semi-abelian conditions, the
//! supporting lemmas and the semi-stability probe.
//!
//! Right-side conditions take a morphism, a composable pair `h ∘ l`, or a
//! square laid out as in [`Square`]. Left-side conditions are the right-side
//! checkers run in [`Opposite`]; [`check_left_direct`] is an independently
//! written dual used to cross-check that route.

mod left;
mod lemmas;
mod right;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::category::{Category, CategoryError, Op, Opposite, Square};

pub use lemmas::ProbeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
}

impl Index {
    pub const ALL: [Index; 7] = [Index::I, Index::Ii, Index::Iii, Index::Iv, Index::V, Index::Vi, Index::Vii];

    pub fn roman(self) -> &'static str {
        match self {
            Index::I => "i",
            Index::Ii => "ii",
            Index::Iii => "iii",
            Index::Iv => "iv",
            Index::V => "v",
            Index::Vi => "vi",
            Index::Vii => "vii",
        }
    }

    /// Whether the condition has a hypothesis that sampled instances can miss.
    pub fn is_conditional(self) -> bool {
        self != Index::I
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionId {
    pub side: Side,
    pub index: Index,
}

impl ConditionId {
    pub fn right(index: Index) -> Self {
        ConditionId { side: Side::Right, index }
    }

    pub fn left(index: Index) -> Self {
        ConditionId { side: Side::Left, index }
    }

    /// All fourteen conditions, right side first.
    pub fn all() -> impl Iterator<Item = ConditionId> {
        [Side::Right, Side::Left]
            .into_iter()
            .flat_map(|side| Index::ALL.into_iter().map(move |index| ConditionId { side, index }))
    }
}

/// Every check the tool can run on a single instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Condition(ConditionId),
    Strict,
    SemiAbelian,
    Lemma2,
    Corollary3Kernels,
    Corollary3Cokernels,
    SemistableKernel,
    SemistableCokernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Morphism,
    Pair,
    Square,
}

impl Check {
    pub fn all() -> Vec<Check> {
        let mut v: Vec<Check> = ConditionId::all().map(Check::Condition).collect();
        v.extend([
            Check::Strict,
            Check::SemiAbelian,
            Check::Lemma2,
            Check::Corollary3Kernels,
            Check::Corollary3Cokernels,
            Check::SemistableKernel,
            Check::SemistableCokernel,
        ]);
        v
    }

    pub fn shape(self) -> Shape {
        match self {
            Check::Condition(c) => match c.index {
                Index::I => Shape::Morphism,
                Index::Ii | Index::Vi => Shape::Pair,
                Index::Iii | Index::Iv | Index::V | Index::Vii => Shape::Square,
            },
            Check::Strict | Check::SemiAbelian | Check::SemistableKernel | Check::SemistableCokernel => Shape::Morphism,
            Check::Lemma2 | Check::Corollary3Kernels | Check::Corollary3Cokernels => Shape::Pair,
        }
    }

    pub fn is_probe(self) -> bool {
        matches!(self, Check::SemistableKernel | Check::SemistableCokernel)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Condition(c) => {
                let side = if c.side == Side::Right { "right" } else { "left" };
                write!(f, "{side}_{}", c.index.roman())
            }
            Check::Strict => f.write_str("strict"),
            Check::SemiAbelian => f.write_str("semi_abelian"),
            Check::Lemma2 => f.write_str("lemma2"),
            Check::Corollary3Kernels => f.write_str("corollary3_kernels"),
            Check::Corollary3Cokernels => f.write_str("corollary3_cokernels"),
            Check::SemistableKernel => f.write_str("semistable_kernel"),
            Check::SemistableCokernel => f.write_str("semistable_cokernel"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown check {0:?}")]
pub struct UnknownCheck(pub String);

impl FromStr for Check {
    type Err = UnknownCheck;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::all().into_iter().find(|c| c.to_string() == s).ok_or_else(|| UnknownCheck(s.to_string()))
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Check {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The data a check runs on. A pair `{h, l}` stands for the composite
/// `h ∘ l`; the lemma checks read it as `g = h`, `f = l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance<M> {
    Morphism { f: M },
    Pair { h: M, l: M },
    Square(Square<M>),
}

impl<M: Clone + PartialEq> Instance<M> {
    pub fn shape(&self) -> Shape {
        match self {
            Instance::Morphism { .. } => Shape::Morphism,
            Instance::Pair { .. } => Shape::Pair,
            Instance::Square(_) => Shape::Square,
        }
    }

    /// Checks every morphism against `cat` and re-checks composability and
    /// commutativity, for instances read from outside.
    pub fn validate<C: Category<Morphism = M>>(&self, cat: &C) -> Result<(), CategoryError> {
        match self {
            Instance::Morphism { f } => cat.check_morphism(f),
            Instance::Pair { h, l } => {
                cat.check_morphism(h)?;
                cat.check_morphism(l)?;
                cat.compose(h, l).map(|_| ())
            }
            Instance::Square(sq) => {
                for m in [&sq.top, &sq.left, &sq.bottom, &sq.right] {
                    cat.check_morphism(m)?;
                }
                Square::new(cat, sq.top.clone(), sq.left.clone(), sq.bottom.clone(), sq.right.clone(), sq.provenance)
                    .map(|_| ())
            }
        }
    }

    /// The same diagram read in the opposite category. A pair `h ∘ l`
    /// becomes `l ∘ h` reversed; a square is reflected through its diagonal
    /// from the top-left to the bottom-right corner, so pushouts become
    /// pullbacks. This is an involution up to the `Op` wrapper.
    pub fn to_opposite(&self) -> Instance<Op<M>> {
        match self {
            Instance::Morphism { f } => Instance::Morphism { f: Op(f.clone()) },
            Instance::Pair { h, l } => Instance::Pair { h: Op(l.clone()), l: Op(h.clone()) },
            Instance::Square(sq) => Instance::Square(Square {
                top: Op(sq.bottom.clone()),
                left: Op(sq.right.clone()),
                bottom: Op(sq.top.clone()),
                right: Op(sq.left.clone()),
                provenance: sq.provenance.dual(),
            }),
        }
    }
}

impl<M: Clone + PartialEq> Instance<Op<M>> {
    /// Inverse of [`Instance::to_opposite`].
    pub fn from_opposite(&self) -> Instance<M> {
        match self {
            Instance::Morphism { f } => Instance::Morphism { f: f.0.clone() },
            Instance::Pair { h, l } => Instance::Pair { h: l.0.clone(), l: h.0.clone() },
            Instance::Square(sq) => Instance::Square(Square {
                top: sq.bottom.0.clone(),
                left: sq.right.0.clone(),
                bottom: sq.top.0.clone(),
                right: sq.left.0.clone(),
                provenance: sq.provenance.dual(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The instance misses the condition's hypothesis.
    Vacuous,
}

/// What a checker found. `datum` carries the violating universal-property
/// data on failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<serde_json::Value>,
}

impl Outcome {
    pub(crate) fn pass(detail: impl Into<String>) -> Self {
        Outcome { verdict: Verdict::Pass, detail: detail.into(), datum: None }
    }

    pub(crate) fn vacuous(detail: impl Into<String>) -> Self {
        Outcome { verdict: Verdict::Vacuous, detail: detail.into(), datum: None }
    }

    pub(crate) fn fail(detail: impl Into<String>, datum: serde_json::Value) -> Self {
        Outcome { verdict: Verdict::Fail, detail: detail.into(), datum: Some(datum) }
    }

    /// `pass` when `ok`, otherwise a failure with the datum built lazily.
    pub(crate) fn expect(ok: bool, pass: &str, fail: &str, datum: impl FnOnce() -> serde_json::Value) -> Self {
        if ok {
            Outcome::pass(pass)
        } else {
            Outcome::fail(fail, datum())
        }
    }
}

/// A replayable record of one check on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: Check,
    pub backend: String,
    pub instance: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeParams>,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("{check} expects a {expected:?} instance, got {got:?}")]
    WrongShape { check: Check, expected: Shape, got: Shape },
    #[error(transparent)]
    Invalid(#[from] CategoryError),
}

pub(crate) fn to_json<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("payloads serialize")
}

fn law_violation(e: CategoryError) -> Outcome {
    Outcome::fail(format!("universal construction broke down: {e}"), serde_json::Value::Null)
}

fn ensure_shape<M: Clone + PartialEq>(check: Check, inst: &Instance<M>) -> Result<(), CheckError> {
    if check.shape() != inst.shape() {
        return Err(CheckError::WrongShape { check, expected: check.shape(), got: inst.shape() });
    }
    Ok(())
}

/// A right-side condition on an instance of matching shape.
pub fn check_right<C: Category>(cat: &C, index: Index, inst: &Instance<C::Morphism>) -> Result<Outcome, CheckError> {
    ensure_shape(Check::Condition(ConditionId::right(index)), inst)?;
    Ok(right::check(cat, index, inst).unwrap_or_else(law_violation))
}

/// A left-side condition, computed as the right-side condition of the
/// transported instance in the opposite category.
pub fn check_left<C: Category>(cat: &C, index: Index, inst: &Instance<C::Morphism>) -> Result<Outcome, CheckError> {
    check_right(&Opposite(cat.clone()), index, &inst.to_opposite())
}

/// A left-side condition written out directly in `cat`, without the
/// opposite adapter.
pub fn check_left_direct<C: Category>(
    cat: &C,
    index: Index,
    inst: &Instance<C::Morphism>,
) -> Result<Outcome, CheckError> {
    ensure_shape(Check::Condition(ConditionId::left(index)), inst)?;
    Ok(left::check(cat, index, inst).unwrap_or_else(law_violation))
}

/// Runs any check. `probe` is only read by the semi-stability checks.
pub fn run_check<C: Category>(
    cat: &C,
    check: Check,
    inst: &Instance<C::Morphism>,
    probe: &ProbeParams,
) -> Result<Outcome, CheckError> {
    ensure_shape(check, inst)?;
    let out = match (check, inst) {
        (Check::Condition(c), _) => {
            return match c.side {
                Side::Right => check_right(cat, c.index, inst),
                Side::Left => check_left(cat, c.index, inst),
            }
        }
        (Check::Strict, Instance::Morphism { f }) => lemmas::strict(cat, f),
        (Check::SemiAbelian, Instance::Morphism { f }) => lemmas::semi_abelian(cat, f),
        (Check::Lemma2, Instance::Pair { h, l }) => lemmas::lemma2(cat, l, h),
        (Check::Corollary3Kernels, Instance::Pair { h, l }) => lemmas::corollary3_kernels(cat, l, h),
        (Check::Corollary3Cokernels, Instance::Pair { h, l }) => lemmas::corollary3_cokernels(cat, l, h),
        (Check::SemistableKernel, Instance::Morphism { f }) => lemmas::probe_semistable_kernel(cat, f, probe),
        (Check::SemistableCokernel, Instance::Morphism { f }) => lemmas::probe_semistable_cokernel(cat, f, probe),
        _ => unreachable!("shape checked above"),
    };
    Ok(out.unwrap_or_else(law_violation))
}

/// Runs a check and packages the result with its serialized instance.
pub fn check_result<C: Category>(
    cat: &C,
    check: Check,
    inst: &Instance<C::Morphism>,
    probe: &ProbeParams,
) -> Result<CheckResult, CheckError> {
    let out = run_check(cat, check, inst, probe)?;
    Ok(CheckResult {
        check,
        backend: cat.name(),
        instance: to_json(inst),
        probe: check.is_probe().then(|| probe.clone()),
        verdict: out.verdict,
        detail: out.detail,
        datum: out.datum,
    })
}
