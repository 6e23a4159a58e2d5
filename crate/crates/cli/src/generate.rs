//! Deterministic corpus generators writing workspaces.

use clap::ValueEnum;
use qbif_core::bifib::TieBreak;
use qbif_core::corpus::{
    arrow_setup, collage_setups, injective_model, product_model, product_setup, projective_model, random_lattice_setups,
    random_square_setups, ArrowEnd, CorpusEntry, CorpusError, LatticeStock,
};
use qbif_core::fincat::ValidationError;
use qbif_core::model::{enumerate_model_structures, ModelError, ModelStructure, DEFAULT_BUDGET};
use qbif_core::quillen::{check_hp_conditions, check_rs_conditions, verify_main_theorem, QuillenSetup};
use qbif_core::reedy::{reedy_step_setup, FinLattice, ReedyCat, ReedyError};
use thiserror::Error;

use crate::workspace::{CategoryEntry, CatKind, Entity, ReedyEntry, ReedyInstanceEntry, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Product,
    Cod,
    Dom,
    Collage,
    RandomLatticeBifib,
    /// Random lattice setups over the commutative square base.
    RandomSquareBifib,
    Reedy,
}

/// Which generated instances to keep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    #[default]
    All,
    /// hCon and hBC both hold.
    Passing,
    HconFail,
    /// hCon holds and hBC fails.
    HbcFail,
    /// The total structure is a model structure while RS or HP fails.
    Separating,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("unknown lattice `{0}`; use chainN (1 ≤ N ≤ 6) or diamond")]
    UnknownLattice(String),
    #[error("unknown Reedy category `{0}`; use point, chainN, chainNop or span3")]
    UnknownReedy(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Reedy(#[from] ReedyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Clone, Debug)]
pub struct GenerateOptions {
    pub kind: CorpusKind,
    /// Fiber or target lattice.
    pub lattice: String,
    /// Base lattice of product setups.
    pub base: String,
    /// Lattices over the two ends of a collage.
    pub left: String,
    pub right: String,
    pub reedy: String,
    /// Cap on kept instances; random kinds draw this many.
    pub count: Option<usize>,
    /// Every enumerated structure instead of the trivial one.
    pub all_structures: bool,
    pub seed: u64,
    pub tie_break: TieBreak,
    pub filter: Filter,
    pub size_guard: usize,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            kind: CorpusKind::Product,
            lattice: "chain2".into(),
            base: "chain2".into(),
            left: "chain2".into(),
            right: "chain3".into(),
            reedy: "chain2".into(),
            count: None,
            all_structures: false,
            seed: 0,
            tie_break: TieBreak::Smallest,
            filter: Filter::All,
            size_guard: qbif_core::fincat::DEFAULT_SIZE_GUARD,
        }
    }
}

pub fn named_lattice(name: &str) -> Result<FinLattice, GenerateError> {
    if name == "diamond" {
        return Ok(FinLattice::diamond());
    }
    match name.strip_prefix("chain").and_then(|n| n.parse::<usize>().ok()) {
        Some(n @ 1..=6) => Ok(FinLattice::chain(n)),
        _ => Err(GenerateError::UnknownLattice(name.into())),
    }
}

pub fn named_reedy(name: &str) -> Result<ReedyCat, GenerateError> {
    let bad = || GenerateError::UnknownReedy(name.into());
    match name {
        "point" => Ok(ReedyCat::point()),
        "span3" => Ok(ReedyCat::span_of_three()),
        _ => {
            let rest = name.strip_prefix("chain").ok_or_else(bad)?;
            let (digits, op) = match rest.strip_suffix("op") {
                Some(d) => (d, true),
                None => (rest, false),
            };
            let n: usize = digits.parse().map_err(|_| bad())?;
            if !(1..=4).contains(&n) {
                return Err(bad());
            }
            let r = ReedyCat::direct_chain(n);
            Ok(if op { r.opposite() } else { r })
        }
    }
}

/// `(index, structure)` pairs: the trivial structure alone or every
/// enumerated one with its enumeration index.
fn structures(l: &FinLattice, all: bool) -> Result<Vec<(String, ModelStructure)>, GenerateError> {
    if all {
        Ok(enumerate_model_structures(l.cat(), DEFAULT_BUDGET)?.into_iter().enumerate().map(|(i, m)| (format!("ms{i}"), m)).collect())
    } else {
        Ok(vec![("trivial".into(), ModelStructure::trivial(l.cat()))])
    }
}

fn separates(setup: &QuillenSetup) -> bool {
    match verify_main_theorem(setup) {
        Ok(t) => t.total_is_model && (!check_rs_conditions(setup).passed() || !check_hp_conditions(setup).passed()),
        Err(_) => false,
    }
}

fn keep(setup: &QuillenSetup, filter: Filter) -> bool {
    if filter == Filter::All {
        return true;
    }
    if filter == Filter::Separating {
        return separates(setup);
    }
    let Ok(t) = verify_main_theorem(setup) else { return false };
    match filter {
        Filter::Passing => t.hypotheses_hold(),
        Filter::HconFail => !t.hcon.passed(),
        Filter::HbcFail => t.hcon.passed() && !t.hbc.passed(),
        Filter::All | Filter::Separating => unreachable!(),
    }
}

pub fn generate(opts: &GenerateOptions) -> Result<Workspace, GenerateError> {
    let mut ws = Workspace::new();
    let cap = opts.count.unwrap_or(usize::MAX);
    let mut kept = 0;
    let mut push = |ws: &mut Workspace, name: &str, setup: &QuillenSetup, expect: Option<&ModelStructure>| -> Result<(), GenerateError> {
        if kept < cap && keep(setup, opts.filter) {
            kept += 1;
            ws.add_quillen_setup(name, setup, expect)?;
        }
        Ok(())
    };
    match opts.kind {
        CorpusKind::Product => {
            let m = named_lattice(&opts.lattice)?;
            let b = named_lattice(&opts.base)?;
            for (i, mm) in structures(&m, opts.all_structures)? {
                for (j, bm) in structures(&b, opts.all_structures)? {
                    let (prod, setup) = product_setup(m.cat(), &mm, b.cat(), &bm, opts.size_guard, opts.tie_break)?;
                    let expected = product_model(&prod, &mm, &bm);
                    push(&mut ws, &format!("product-{}-{}-{i}-{j}", opts.lattice, opts.base), &setup, Some(&expected))?;
                }
            }
        }
        CorpusKind::Cod | CorpusKind::Dom => {
            let l = named_lattice(&opts.lattice)?;
            let end = if opts.kind == CorpusKind::Cod { ArrowEnd::Codomain } else { ArrowEnd::Domain };
            for (i, ms) in structures(&l, opts.all_structures)? {
                let (fc, setup) = arrow_setup(&l, &ms, end, opts.size_guard, opts.tie_break)?;
                let (tag, expected) = match end {
                    ArrowEnd::Codomain => ("cod", injective_model(&fc, &l, &ms)),
                    ArrowEnd::Domain => ("dom", projective_model(&fc, &l, &ms)),
                };
                push(&mut ws, &format!("{tag}-{}-{i}", opts.lattice), &setup, Some(&expected))?;
            }
        }
        CorpusKind::Collage => {
            let stock = LatticeStock::small()?;
            let find = |n: &str| stock.lattices.iter().position(|l| l.0 == n).ok_or_else(|| GenerateError::UnknownLattice(n.into()));
            let (li, ri) = (find(&opts.left)?, find(&opts.right)?);
            for e in collage_setups(&stock, li, ri, opts.tie_break)? {
                push(&mut ws, &e.name, &e.setup, None)?;
            }
        }
        CorpusKind::RandomLatticeBifib | CorpusKind::RandomSquareBifib => {
            let stock = LatticeStock::small()?;
            let n = opts.count.unwrap_or(20);
            let entries: Vec<CorpusEntry> = if opts.kind == CorpusKind::RandomLatticeBifib {
                random_lattice_setups(&stock, opts.seed, n, opts.tie_break)?
            } else {
                random_square_setups(&stock, opts.seed, n, opts.tie_break)?
            };
            for e in entries {
                push(&mut ws, &e.name, &e.setup, None)?;
            }
        }
        CorpusKind::Reedy => {
            let reedy = named_reedy(&opts.reedy)?;
            let lat = named_lattice(&opts.lattice)?;
            let mut kept = 0;
            let shape = format!("{}.shape", opts.reedy);
            ws.add(&shape, Entity::Category(CategoryEntry { cat: reedy.cat.clone(), kind: CatKind::Category, lattice: None }))?;
            ws.add(&opts.reedy, Entity::Reedy(ReedyEntry { cat: shape, reedy: reedy.clone() }))?;
            ws.add_lattice(&opts.lattice, lat.clone())?;
            for (i, ms) in structures(&lat, opts.all_structures)? {
                if kept >= cap {
                    break;
                }
                if opts.filter != Filter::All {
                    let mut hit = false;
                    for mu in reedy.degrees() {
                        let (_, setup) = reedy_step_setup(&reedy, &lat, &ms, mu, opts.size_guard, opts.tie_break)?;
                        hit |= keep(&setup, opts.filter);
                    }
                    if !hit {
                        continue;
                    }
                }
                kept += 1;
                let model = format!("{}.{i}", opts.lattice);
                ws.add_model(&model, &opts.lattice, ms)?;
                let inst = ReedyInstanceEntry { reedy: opts.reedy.clone(), lattice: opts.lattice.clone(), model, tie_break: opts.tie_break };
                ws.add(format!("reedy-{}-{}-{i}", opts.reedy, opts.lattice), Entity::ReedyInstance(inst))?;
            }
        }
    }
    Ok(ws)
}
