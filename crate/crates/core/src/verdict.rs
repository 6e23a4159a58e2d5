//! Outcomes of property checks, with witnesses that can be replayed.

use serde::Serialize;

use crate::fincat::{CommSquare, Mor, Obj};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

/// Evidence for a failed check. Morphism and object indices refer to the
/// category the checker was run on unless the variant says otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The square `q ∘ top = bottom ∘ j` has no diagonal filler.
    NoLift { j: Mor, q: Mor, top: Mor, bottom: Mor },
    /// `morphism` should belong to `class` but does not.
    Missing { morphism: Mor, class: String },
    /// `morphism` belongs to `class` but should not.
    Unexpected { morphism: Mor, class: String },
    /// No factorization of `morphism` through the required classes.
    Unfactorable { morphism: Mor },
    /// Exactly two of `first`, `second` and `second ∘ first` are weak equivalences.
    TwoOutOfThree { first: Mor, second: Mor, composite: Mor },
    /// A functor sends `morphism` to `image`, which is outside `class`.
    /// For fiberwise checks `base` names the base morphism and the indices are
    /// local to the fibers.
    NotPreserved { base: Option<Mor>, morphism: Mor, image: Mor, class: String },
    /// `image` is a weak equivalence but `morphism` is not.
    NotConservative { base: Option<Mor>, morphism: Mor, image: Mor },
    /// A mate component that is not a fiber weak equivalence. `component` is a
    /// morphism of the total category.
    MateComponent { square: CommSquare, object: Obj, component: Mor },
    /// `morphism` of the total category and two admissible base
    /// factorizations whose middle factors disagree on weak equivalence.
    MiddleFactor { morphism: Mor, first: (Mor, Mor), second: (Mor, Mor) },
    /// A pushout or pullback in a lattice that is not a weak equivalence.
    /// `morphism` is the source arrow, `along` the object it is pushed along
    /// or pulled back to, `result` the arrow obtained.
    BaseChange { morphism: Mor, along: Obj, result: Mor },
    /// No cartesian or cocartesian lift of `base` at `object`.
    NoLiftOf { base: Mor, object: Obj, cartesian: bool },
    /// A single object with no further detail.
    Object { object: Obj },
    /// A failing sub-check.
    Nested { verdict: Box<Verdict> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub condition: String,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub trace: Vec<String>,
}

impl Verdict {
    pub fn pass(condition: impl Into<String>) -> Self {
        Verdict { condition: condition.into(), outcome: Outcome::Pass, witness: None, trace: Vec::new() }
    }

    pub fn fail(condition: impl Into<String>, witness: Witness) -> Self {
        Verdict { condition: condition.into(), outcome: Outcome::Fail, witness: Some(witness), trace: Vec::new() }
    }

    pub fn not_applicable(condition: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict {
            condition: condition.into(),
            outcome: Outcome::NotApplicable,
            witness: None,
            trace: vec![reason.into()],
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    pub fn with_trace(mut self, line: impl Into<String>) -> Self {
        self.trace.push(line.into());
        self
    }

    /// Pass unless `witness` is present.
    pub fn from_option(condition: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            None => Verdict::pass(condition),
            Some(w) => Verdict::fail(condition, w),
        }
    }

    /// Wrap a failing verdict as the witness of a new one.
    pub fn nest(condition: impl Into<String>, inner: Verdict) -> Self {
        if inner.passed() {
            let mut v = Verdict::pass(condition);
            v.trace = inner.trace;
            v
        } else {
            let outcome = inner.outcome;
            Verdict {
                condition: condition.into(),
                outcome,
                witness: Some(Witness::Nested { verdict: Box::new(inner) }),
                trace: Vec::new(),
            }
        }
    }

    /// The innermost witness when witnesses are nested.
    pub fn root_witness(&self) -> Option<&Witness> {
        match &self.witness {
            Some(Witness::Nested { verdict }) => verdict.root_witness(),
            w => w.as_ref(),
        }
    }

    /// Short single-line rendering.
    pub fn summary(&self) -> String {
        let tag = match self.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::NotApplicable => "n/a",
        };
        format!("{}: {}", self.condition, tag)
    }
}

/// A construction that declined to produce a result, with the check that
/// blocked it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub reason: String,
    pub verdict: Verdict,
}

/// Either a built value or a refusal carrying its reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum Construction<T> {
    Built(T),
    Refused(Refusal),
}

impl<T> Construction<T> {
    pub fn built(&self) -> Option<&T> {
        match self {
            Construction::Built(t) => Some(t),
            Construction::Refused(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            Construction::Built(_) => None,
            Construction::Refused(r) => Some(r),
        }
    }

    pub fn is_built(&self) -> bool {
        matches!(self, Construction::Built(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Construction<U> {
        match self {
            Construction::Built(t) => Construction::Built(f(t)),
            Construction::Refused(r) => Construction::Refused(r),
        }
    }
}
