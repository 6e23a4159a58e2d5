//! The checks behind each command.

use std::sync::Arc;

use clap::ValueEnum;
use qbif_core::bifib::{build_cleavage, TieBreak};
use qbif_core::fincat::{CommSquare, FinCat};
use qbif_core::lifting::check_wfs;
use qbif_core::model::{check_model_structure, enumerate_model_structures, enumerate_wfs, ModelStructure, DEFAULT_BUDGET};
use qbif_core::quillen::{
    check_hbc, check_hp_conditions, check_rs_conditions, grothendieck_model, hbc_squares, verify_main_theorem, QuillenError, QuillenSetup,
};
use qbif_core::reedy::{bigluing, check_matching_preservation, check_shulman, reedy_construct, reedy_step_setup, reedy_triple, ReedyError};
use qbif_core::verdict::{Construction, Outcome, Verdict, Witness};
use rayon::prelude::*;
use serde_json::json;

use crate::report::{class_labels, model_json, EntityResult, Labels, Report};
use crate::workspace::{Entity, SetupError, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Wfs,
    Model,
    Bifib,
    Mates,
    Construct,
    Theorem,
    Reedy,
    Bigluing,
    Enumerate,
    CompareRsHp,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub size_guard: usize,
    /// Overrides the tie-break recorded in setups and Reedy instances.
    pub tie_break: Option<TieBreak>,
    /// Restrict the run to one named entity.
    pub entity: Option<String>,
    pub parallel: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { size_guard: qbif_core::fincat::DEFAULT_SIZE_GUARD, tie_break: None, entity: None, parallel: 1 }
    }
}

fn failure(condition: &str, message: impl Into<String>) -> Verdict {
    Verdict { condition: condition.into(), outcome: Outcome::Fail, witness: None, trace: vec![message.into()] }
}

fn setup_failure(e: SetupError) -> Verdict {
    match e {
        SetupError::NotBifibration(r) => Verdict::nest("bifibration", r.verdict).with_trace(r.reason),
        SetupError::Quillen(q) => quillen_failure("setup", q),
    }
}

fn quillen_failure(condition: &str, e: QuillenError) -> Verdict {
    match e {
        QuillenError::InvalidSetup(v) | QuillenError::HypothesisNotMet(v) => Verdict::nest(condition, v),
        QuillenError::InvariantViolated(m) => failure(condition, m),
    }
}

fn reedy_failure(condition: &str, e: ReedyError) -> Verdict {
    match e {
        ReedyError::StepRefused { degree, refusal } => {
            Verdict::nest(condition, refusal.verdict).with_trace(format!("refused at degree {degree}: {}", refusal.reason))
        }
        ReedyError::NotBifibration(r) => Verdict::nest(condition, r.verdict).with_trace(r.reason),
        other => failure(condition, other.to_string()),
    }
}

fn square_json(cat: &FinCat, s: &CommSquare) -> serde_json::Value {
    let l = |m| cat.mor_label(m).to_string();
    json!({ "top": l(s.top), "left": l(s.left), "right": l(s.right), "bottom": l(s.bottom) })
}

fn setup_labels(s: &QuillenSetup) -> Labels {
    Labels::with_base(s.bifib.total(), s.bifib.base())
}

/// Run `cmd` over every relevant entity, in parallel when requested, and
/// collect results in declaration order.
pub fn run(cmd: Command, ws: &Workspace, input_digest: String, opts: &Options) -> Report {
    let selected: Vec<&(String, Entity)> =
        ws.entries().iter().filter(|(n, _)| opts.entity.as_ref().is_none_or(|e| e == n)).collect();
    let work = || selected.par_iter().filter_map(|(n, e)| check(cmd, ws, n, e, opts)).collect::<Vec<_>>();
    let results = if opts.parallel > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(opts.parallel).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        }
    } else {
        selected.iter().filter_map(|(n, e)| check(cmd, ws, n, e, opts)).collect()
    };
    let mut report = Report::new(&cmd.name(), input_digest, results);
    if let Some(e) = &opts.entity {
        if !ws.contains(e) {
            report.error = Some(format!("no entity named `{e}`"));
            report.exit_code = crate::report::EXIT_INPUT;
        }
    }
    report
}

fn check(cmd: Command, ws: &Workspace, name: &str, e: &Entity, opts: &Options) -> Option<EntityResult> {
    match cmd {
        Command::Validate => Some(validate(ws, name, e, opts)),
        Command::Wfs => match e {
            Entity::Wfs(w) => {
                let cat = &ws.category(&w.cat).expect("resolved").cat;
                let mut r = EntityResult::new(name, e.kind(), Labels::of(cat));
                r.verdict(check_wfs(cat, &w.wfs));
                Some(r)
            }
            _ => None,
        },
        Command::Model => match e {
            Entity::Model(m) => {
                let cat = &ws.category(&m.cat).expect("resolved").cat;
                let mut r = EntityResult::new(name, e.kind(), Labels::of(cat));
                r.verdict(check_model_structure(cat, &m.model));
                Some(r)
            }
            _ => None,
        },
        Command::Bifib => match e {
            Entity::Functor(f) => {
                let p = &f.functor;
                let mut r = EntityResult::new(name, e.kind(), Labels::with_base(p.dom(), p.cod()));
                match build_cleavage(p, opts.tie_break.unwrap_or_default()) {
                    Construction::Built(b) => {
                        r.verdict(Verdict::pass("bifibration"));
                        r.detail("fibers", b.fibers().iter().map(|v| v.cat.num_objects()).collect::<Vec<_>>());
                    }
                    Construction::Refused(refusal) => {
                        r.verdict(Verdict::nest("bifibration", refusal.verdict).with_trace(refusal.reason));
                    }
                }
                Some(r)
            }
            _ => None,
        },
        Command::Mates | Command::Construct | Command::Theorem => match e {
            Entity::Setup(s) => Some(setup_command(cmd, ws, name, e.kind(), s, opts)),
            _ => None,
        },
        Command::Reedy => match e {
            Entity::ReedyInstance(_) => Some(reedy_command(ws, name, e, opts)),
            _ => None,
        },
        Command::Bigluing => match e {
            Entity::Bigluing(b) => {
                let data = ws.gluing_data(b);
                let mut r = EntityResult::new(name, e.kind(), Labels::of(data.target.cat()));
                let m = &ws.model(&b.source_model).expect("resolved").model;
                let n = &ws.model(&b.target_model).expect("resolved").model;
                match check_shulman(&data, m, n, opts.size_guard) {
                    Ok(rep) => {
                        let hyp_passed = rep.hypotheses.passed();
                        r.verdict(rep.hypotheses);
                        r.verdict(rep.verdict);
                        r.detail("built", rep.built.is_some());
                        r.detail("built-matches-expected", rep.built.as_ref() == Some(&rep.expected));
                        r.detail("hypotheses-hold", hyp_passed);
                        if let Ok(gl) = bigluing(data.left(), data.right(), &data.alpha, opts.size_guard) {
                            r.detail("objects", gl.cat.num_objects());
                            r.detail("morphisms", gl.cat.num_morphisms());
                            r.detail("expected", model_json(&gl.cat, &rep.expected));
                        }
                    }
                    Err(err) => {
                        r.verdict(reedy_failure("bigluing", err));
                    }
                }
                Some(r)
            }
            _ => None,
        },
        Command::Enumerate => match e {
            Entity::Category(c) => {
                let mut r = EntityResult::new(name, e.kind(), Labels::of(&c.cat));
                match (enumerate_wfs(&c.cat, DEFAULT_BUDGET), enumerate_model_structures(&c.cat, DEFAULT_BUDGET)) {
                    (Ok(w), Ok(ms)) => {
                        r.detail("wfs-count", w.len());
                        r.detail("model-count", ms.len());
                        r.detail("models", ms.iter().map(|m| model_json(&c.cat, m)).collect::<Vec<_>>());
                    }
                    (Err(err), _) | (_, Err(err)) => {
                        r.verdict(Verdict::not_applicable("enumeration", err.to_string()));
                    }
                }
                Some(r)
            }
            _ => None,
        },
        Command::CompareRsHp => match e {
            Entity::Setup(s) => {
                let mut r = EntityResult::new(name, e.kind(), Labels::default());
                match ws.build_setup(s, opts.tie_break) {
                    Ok(setup) => {
                        r.labels = setup_labels(&setup);
                        compare_one(&mut r, &setup, None);
                    }
                    Err(err) => {
                        r.verdict(setup_failure(err));
                    }
                }
                Some(r)
            }
            Entity::ReedyInstance(ri) => {
                let reedy = &ws.reedy(&ri.reedy).expect("resolved").reedy;
                let lat = ws.lattice(&ri.lattice).expect("resolved");
                let ms = &ws.model(&ri.model).expect("resolved").model;
                let mut r = EntityResult::new(name, e.kind(), Labels::default());
                let tie = opts.tie_break.unwrap_or(ri.tie_break);
                let mut any = false;
                for mu in reedy.degrees() {
                    match reedy_step_setup(reedy, lat, ms, mu, opts.size_guard, tie) {
                        Ok((_, setup)) => {
                            r.labels = setup_labels(&setup);
                            any |= compare_one(&mut r, &setup, Some(mu));
                        }
                        Err(err) => {
                            r.verdict(reedy_failure(&format!("degree-{mu}"), err));
                        }
                    }
                }
                r.detail("separates", any);
                Some(r)
            }
            _ => None,
        },
    }
}

/// Main theorem, RS and HP on one setup. Returns whether the instance
/// separates the criteria: a valid total structure while RS or HP fails.
fn compare_one(r: &mut EntityResult, setup: &QuillenSetup, degree: Option<usize>) -> bool {
    let prefix = degree.map(|d| format!("degree-{d}.")).unwrap_or_default();
    let rs = check_rs_conditions(setup);
    let hp = check_hp_conditions(setup);
    let report = match verify_main_theorem(setup) {
        Ok(t) => t,
        Err(err) => {
            r.verdict(quillen_failure(&format!("{prefix}main-theorem"), err));
            return false;
        }
    };
    let mut v = report.verdict();
    v.condition = format!("{prefix}{}", v.condition);
    r.verdict(v);
    let separates = report.total_is_model && (!rs.passed() || !hp.passed());
    r.detail(&format!("{prefix}total-is-model"), report.total_is_model);
    r.detail(&format!("{prefix}rs"), rs);
    r.detail(&format!("{prefix}hp"), hp);
    r.detail(&format!("{prefix}separates"), separates);
    separates
}

fn setup_command(cmd: Command, ws: &Workspace, name: &str, kind: &str, s: &crate::workspace::SetupEntry, opts: &Options) -> EntityResult {
    let mut r = EntityResult::new(name, kind, Labels::default());
    let setup = match ws.build_setup(s, opts.tie_break) {
        Ok(x) => x,
        Err(err) => {
            r.verdict(setup_failure(err));
            return r;
        }
    };
    r.labels = setup_labels(&setup);
    let total = setup.bifib.total().clone();
    match cmd {
        Command::Mates => {
            let base = setup.bifib.base();
            let squares: Vec<_> = hbc_squares(&setup)
                .iter()
                .map(|sq| {
                    let comps = setup.bifib.mate(sq).map(|m| class_labels_of(&total, m.components()));
                    json!({ "square": square_json(base, sq), "components": comps.unwrap_or_default() })
                })
                .collect();
            r.detail("squares", squares);
            r.verdict(check_hbc(&setup));
        }
        Command::Construct => match grothendieck_model(&setup) {
            Ok(Construction::Built(ms)) => {
                r.verdict(Verdict::pass("grothendieck-model"));
                r.detail("model", model_json(&total, &ms));
                if let Some(x) = &s.expect {
                    let expected = &ws.model(x).expect("resolved").model;
                    r.verdict(compare_models(&ms, expected));
                }
            }
            Ok(Construction::Refused(refusal)) => {
                r.verdict(Verdict::nest("grothendieck-model", refusal.verdict).with_trace(refusal.reason));
            }
            Err(err) => {
                r.verdict(quillen_failure("grothendieck-model", err));
            }
        },
        Command::Theorem => match verify_main_theorem(&setup) {
            Ok(t) => {
                r.verdict(t.hcon.clone());
                r.verdict(t.hbc.clone());
                r.verdict(t.model_check.clone());
                r.verdict(t.verdict());
                r.detail("total-is-model", t.total_is_model);
                r.detail("candidate", model_json(&total, &t.candidate));
            }
            Err(err) => {
                r.verdict(quillen_failure("Q", err));
            }
        },
        _ => unreachable!("only setup commands reach here"),
    }
    r
}

fn class_labels_of(cat: &Arc<FinCat>, ms: &[usize]) -> Vec<String> {
    ms.iter().map(|&m| cat.mor_label(m).to_string()).collect()
}

/// Equality of two structures, with the first differing morphism as witness.
pub fn compare_models(built: &ModelStructure, expected: &ModelStructure) -> Verdict {
    for (class, b, x) in [("cof", &built.cof, &expected.cof), ("weak", &built.weak, &expected.weak), ("fib", &built.fib, &expected.fib)] {
        if let Some(m) = x.first_outside(b) {
            return Verdict::fail("matches-expected", Witness::Missing { morphism: m, class: class.into() });
        }
        if let Some(m) = b.first_outside(x) {
            return Verdict::fail("matches-expected", Witness::Unexpected { morphism: m, class: class.into() });
        }
    }
    Verdict::pass("matches-expected")
}

fn reedy_command(ws: &Workspace, name: &str, e: &Entity, opts: &Options) -> EntityResult {
    let Entity::ReedyInstance(ri) = e else { unreachable!() };
    let reedy = &ws.reedy(&ri.reedy).expect("resolved").reedy;
    let lat = ws.lattice(&ri.lattice).expect("resolved");
    let ms = &ws.model(&ri.model).expect("resolved").model;
    let mut r = EntityResult::new(name, e.kind(), Labels::default());
    match reedy_construct(reedy, lat, ms, opts.size_guard, opts.tie_break.unwrap_or(ri.tie_break)) {
        Ok(c) => {
            r.labels = Labels::of(&c.category.cat);
            for st in &c.stages {
                let cond = format!("degree-{}", st.degree);
                r.verdict(if !st.matches_triple {
                    failure(&cond, "stage structure differs from the latching/matching description")
                } else if !st.extensions_ok {
                    failure(&cond, "extensions are not in bijection with latching/matching intervals")
                } else {
                    Verdict::pass(cond)
                });
            }
            r.verdict(compare_models(&c.model, &reedy_triple(reedy, lat, ms, &c.category)));
            r.verdict(check_matching_preservation(reedy, lat, ms, &c.category));
            r.detail("diagrams", c.category.cat.num_objects());
            r.detail("maps", c.category.cat.num_morphisms());
            r.detail("class-sizes", json!({ "cof": c.model.cof.count(), "weak": c.model.weak.count(), "fib": c.model.fib.count() }));
        }
        Err(err) => {
            r.verdict(reedy_failure("reedy-construct", err));
        }
    }
    r
}

fn validate(ws: &Workspace, name: &str, e: &Entity, opts: &Options) -> EntityResult {
    let mut r = EntityResult::new(name, e.kind(), Labels::default());
    match e {
        Entity::Category(c) => {
            r.labels = Labels::of(&c.cat);
            r.verdict(Verdict::pass("category-axioms"));
            r.detail("objects", c.cat.num_objects());
            r.detail("morphisms", c.cat.num_morphisms());
        }
        Entity::Functor(_) => {
            r.verdict(Verdict::pass("functor-laws"));
        }
        Entity::Transformation(_) => {
            r.verdict(Verdict::pass("naturality"));
        }
        Entity::Class(k) => {
            r.detail("members", class_labels(&ws.category(&k.cat).expect("resolved").cat, &k.class));
            r.verdict(Verdict::pass("resolved"));
        }
        Entity::Model(_) | Entity::Wfs(_) | Entity::ReedyInstance(_) => {
            r.verdict(Verdict::pass("resolved"));
        }
        Entity::Reedy(_) => {
            r.verdict(Verdict::pass("reedy-factorizations"));
        }
        Entity::Setup(s) => match ws.build_setup(s, opts.tie_break) {
            Ok(setup) => {
                r.labels = setup_labels(&setup);
                r.verdict(Verdict::pass("setup"));
                r.detail("fibers", setup.bifib.fibers().len());
            }
            Err(err) => {
                r.verdict(setup_failure(err));
            }
        },
        Entity::Bigluing(b) => {
            let data = ws.gluing_data(b);
            match bigluing(data.left(), data.right(), &data.alpha, opts.size_guard) {
                Ok(gl) => {
                    r.verdict(Verdict::pass("bigluing"));
                    r.detail("objects", gl.cat.num_objects());
                }
                Err(err) => {
                    r.verdict(failure("bigluing", err.to_string()));
                }
            }
        }
    }
    r
}
