//! Command reports with human-readable and machine-readable witnesses.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use qbif_core::class::MorClass;
use qbif_core::fincat::{CommSquare, FinCat, Mor, Obj};
use qbif_core::model::ModelStructure;
use qbif_core::verdict::{Outcome, Verdict, Witness};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: &str = "qbif-report 1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub fn digest(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    let mut s = String::from("sha256:");
    for b in d.iter() {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Categories that indices in witnesses refer to.
#[derive(Clone, Debug, Default)]
pub struct Labels {
    pub cat: Option<Arc<FinCat>>,
    /// Base category, for witnesses naming base morphisms.
    pub base: Option<Arc<FinCat>>,
}

impl Labels {
    pub fn of(cat: &Arc<FinCat>) -> Self {
        Labels { cat: Some(cat.clone()), base: None }
    }

    pub fn with_base(cat: &Arc<FinCat>, base: &Arc<FinCat>) -> Self {
        Labels { cat: Some(cat.clone()), base: Some(base.clone()) }
    }

    fn mor(&self, m: Mor) -> String {
        match &self.cat {
            Some(c) if m < c.num_morphisms() => format!("{}[#{m}]", c.mor_label(m)),
            _ => format!("#{m}"),
        }
    }

    fn obj(&self, o: Obj) -> String {
        match &self.cat {
            Some(c) if o < c.num_objects() => format!("{}[#{o}]", c.obj_label(o)),
            _ => format!("#{o}"),
        }
    }

    fn base_mor(&self, m: Mor) -> String {
        match &self.base {
            Some(c) if m < c.num_morphisms() => format!("{}[#{m}]", c.mor_label(m)),
            _ => format!("#{m}"),
        }
    }

    fn square(&self, s: &CommSquare, base: bool) -> String {
        let f = |m| if base { self.base_mor(m) } else { self.mor(m) };
        format!("top {} left {} right {} bottom {}", f(s.top), f(s.left), f(s.right), f(s.bottom))
    }
}

/// One line describing a witness.
pub fn describe(w: &Witness, l: &Labels) -> String {
    match w {
        Witness::NoLift { j, q, top, bottom } => {
            format!("no diagonal for {} against {} in the square with top {} and bottom {}", l.mor(*j), l.mor(*q), l.mor(*top), l.mor(*bottom))
        }
        Witness::Missing { morphism, class } => format!("{} is not in {class}", l.mor(*morphism)),
        Witness::Unexpected { morphism, class } => format!("{} is in {class} but should not be", l.mor(*morphism)),
        Witness::Unfactorable { morphism } => format!("{} has no factorization through the required classes", l.mor(*morphism)),
        Witness::TwoOutOfThree { first, second, composite } => format!(
            "two of {}, {} and their composite {} are weak equivalences, the third is not",
            l.mor(*first),
            l.mor(*second),
            l.mor(*composite)
        ),
        Witness::NotPreserved { base: None, morphism, image, class } => {
            format!("{} is sent to {}, outside {class}", l.mor(*morphism), l.mor(*image))
        }
        Witness::NotPreserved { base: Some(u), morphism, image, class } => {
            format!("along base {}: fiber morphism #{morphism} is sent to #{image}, outside {class}", l.base_mor(*u))
        }
        Witness::NotConservative { base: None, morphism, image } => {
            format!("{} is sent to the weak equivalence {} but is not one", l.mor(*morphism), l.mor(*image))
        }
        Witness::NotConservative { base: Some(u), morphism, image } => {
            format!("along base {}: fiber morphism #{morphism} is sent to the weak equivalence #{image} but is not one", l.base_mor(*u))
        }
        Witness::MateComponent { square, object, component } => format!(
            "mate of the square ({}) at {} has component {}, not a fiber weak equivalence",
            l.square(square, true),
            l.obj(*object),
            l.mor(*component)
        ),
        Witness::MiddleFactor { morphism, first, second } => format!(
            "{} has middle factors through base factorizations ({}, {}) and ({}, {}) that disagree",
            l.mor(*morphism),
            l.base_mor(first.0),
            l.base_mor(first.1),
            l.base_mor(second.0),
            l.base_mor(second.1)
        ),
        Witness::BaseChange { morphism, along, result } => {
            format!("base change of {} along {} gives {}, not a weak equivalence", l.mor(*morphism), l.obj(*along), l.mor(*result))
        }
        Witness::NoLiftOf { base, object, cartesian } => format!(
            "no {} lift of base {} at {}",
            if *cartesian { "cartesian" } else { "cocartesian" },
            l.base_mor(*base),
            l.obj(*object)
        ),
        Witness::Object { object } => format!("at {}", l.obj(*object)),
        Witness::Nested { verdict } => match &verdict.witness {
            Some(inner) => format!("{}: {}", verdict.condition, describe(inner, l)),
            None => format!("{} {}", verdict.condition, outcome_name(verdict.outcome)),
        },
    }
}

pub fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::NotApplicable => "n/a",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictRecord {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Human-readable form of the witness.
    pub description: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntityResult {
    pub entity: String,
    pub kind: String,
    pub verdicts: Vec<VerdictRecord>,
    pub details: BTreeMap<String, Value>,
    #[serde(skip)]
    pub labels: Labels,
}

impl EntityResult {
    pub fn new(entity: &str, kind: &str, labels: Labels) -> Self {
        EntityResult { entity: entity.into(), kind: kind.into(), verdicts: Vec::new(), details: BTreeMap::new(), labels }
    }

    pub fn verdict(&mut self, v: Verdict) -> &mut Self {
        let description = v.witness.as_ref().map(|w| describe(w, &self.labels));
        self.verdicts.push(VerdictRecord { verdict: v, description });
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.details.insert(key.into(), serde_json::to_value(value).expect("plain data serializes"));
        self
    }

    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.verdict.failed())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub input_digest: String,
    pub results: Vec<EntityResult>,
    pub error: Option<String>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, input_digest: String, results: Vec<EntityResult>) -> Self {
        let exit_code = if results.iter().any(EntityResult::failed) { EXIT_FAIL } else { EXIT_PASS };
        Report { schema: REPORT_SCHEMA, command: command.into(), input_digest, results, error: None, exit_code }
    }

    pub fn input_error(command: &str, input_digest: String, error: String) -> Self {
        Report { schema: REPORT_SCHEMA, command: command.into(), input_digest, results: Vec::new(), error: Some(error), exit_code: EXIT_INPUT }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{REPORT_SCHEMA}\ncommand: {}\ninput: {}", self.command, self.input_digest);
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        for r in &self.results {
            let _ = writeln!(s, "[{}] {}", r.kind, r.entity);
            for v in &r.verdicts {
                let _ = writeln!(s, "  {:<5} {}", outcome_name(v.verdict.outcome), v.verdict.condition);
                if let Some(d) = &v.description {
                    let _ = writeln!(s, "        witness: {d}");
                }
                if let Some(w) = &v.verdict.witness {
                    let _ = writeln!(s, "        data: {}", serde_json::to_string(w).expect("witness serializes"));
                }
                for t in &v.verdict.trace {
                    let _ = writeln!(s, "        trace: {t}");
                }
            }
            for (k, v) in &r.details {
                let _ = writeln!(s, "  {k}: {}", serde_json::to_string(v).expect("detail serializes"));
            }
        }
        let failing = self.results.iter().filter(|r| r.failed()).count();
        let _ = writeln!(s, "summary: {} checked, {failing} failing\nexit: {}", self.results.len(), self.exit_code);
        s
    }
}

pub fn class_labels(cat: &FinCat, c: &MorClass) -> Vec<String> {
    c.iter().map(|m| cat.mor_label(m).to_string()).collect()
}

pub fn model_json(cat: &FinCat, ms: &ModelStructure) -> Value {
    json!({
        "cof": class_labels(cat, &ms.cof),
        "weak": class_labels(cat, &ms.weak),
        "fib": class_labels(cat, &ms.fib),
    })
}
