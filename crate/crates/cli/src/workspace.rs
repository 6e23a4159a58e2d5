//! Named entities loaded from, and saved to, the text format.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use qbif_core::bifib::{build_cleavage, TieBreak};
use qbif_core::class::MorClass;
use qbif_core::fincat::{validate_category, validate_functor, FinCat, Functor, Mor, NatTransformation, Obj, RawCategory, RawMorphism, ValidationError};
use qbif_core::lifting::Wfs;
use qbif_core::model::ModelStructure;
use qbif_core::quillen::{QuillenError, QuillenSetup};
use qbif_core::reedy::{validate_reedy, FinLattice, GluingData, ReedyCat};
use qbif_core::verdict::{Construction, Refusal};
use thiserror::Error;

use crate::format::{blocks, quote, tokenize, Block, Line, ParseError, Token, HEADER};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {source}")]
    Validation { line: usize, source: ValidationError },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatKind {
    Category,
    Poset,
    Lattice,
}

#[derive(Clone, Debug)]
pub struct CategoryEntry {
    pub cat: Arc<FinCat>,
    pub kind: CatKind,
    pub lattice: Option<FinLattice>,
}

#[derive(Clone, Debug)]
pub struct FunctorEntry {
    pub dom: String,
    pub cod: String,
    pub functor: Functor,
}

#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub cat: String,
    pub class: MorClass,
}

#[derive(Clone, Debug)]
pub struct ModelEntry {
    pub cat: String,
    pub model: ModelStructure,
}

#[derive(Clone, Debug)]
pub struct WfsEntry {
    pub cat: String,
    pub wfs: Wfs,
}

#[derive(Clone, Debug)]
pub struct SetupEntry {
    pub functor: String,
    pub base_model: String,
    /// Model on the total category whose vertical part gives the fiber structures.
    pub fiber_model: String,
    pub tie_break: TieBreak,
    /// Model on the total category the built structure is compared with.
    pub expect: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ReedyEntry {
    pub cat: String,
    pub reedy: ReedyCat,
}

#[derive(Clone, Debug)]
pub struct ReedyInstanceEntry {
    pub reedy: String,
    pub lattice: String,
    pub model: String,
    pub tie_break: TieBreak,
}

#[derive(Clone, Debug)]
pub struct TransformationEntry {
    pub src: String,
    pub tgt: String,
    pub alpha: NatTransformation,
}

#[derive(Clone, Debug)]
pub struct BigluingEntry {
    pub source: String,
    pub target: String,
    pub alpha: String,
    pub source_model: String,
    pub target_model: String,
}

#[derive(Clone, Debug)]
pub enum Entity {
    Category(CategoryEntry),
    Functor(FunctorEntry),
    Class(ClassEntry),
    Model(ModelEntry),
    Wfs(WfsEntry),
    Setup(SetupEntry),
    Reedy(ReedyEntry),
    ReedyInstance(ReedyInstanceEntry),
    Transformation(TransformationEntry),
    Bigluing(BigluingEntry),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Category(c) => match c.kind {
                CatKind::Category => "category",
                CatKind::Poset => "poset",
                CatKind::Lattice => "lattice",
            },
            Entity::Functor(_) => "functor",
            Entity::Class(_) => "class",
            Entity::Model(_) => "model",
            Entity::Wfs(_) => "wfs",
            Entity::Setup(_) => "setup",
            Entity::Reedy(_) => "reedy",
            Entity::ReedyInstance(_) => "reedy-instance",
            Entity::Transformation(_) => "transformation",
            Entity::Bigluing(_) => "bigluing",
        }
    }
}

/// Why a setup entry does not yield a [`QuillenSetup`].
#[derive(Debug, Clone, Error)]
pub enum SetupError {
    #[error("functor is not a bifibration: {}", .0.reason)]
    NotBifibration(Box<Refusal>),
    #[error(transparent)]
    Quillen(#[from] QuillenError),
}

/// Entities in declaration order; names are unique across all kinds.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    entries: Vec<(String, Entity)>,
    index: HashMap<String, usize>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, Entity)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.index.get(name).map(|&i| &self.entries[i].1)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn add(&mut self, name: impl Into<String>, entity: Entity) -> Result<(), ValidationError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(ValidationError::DuplicateName { name });
        }
        self.index.insert(name.clone(), self.entries.len());
        self.entries.push((name, entity));
        Ok(())
    }

    pub fn category(&self, name: &str) -> Option<&CategoryEntry> {
        match self.get(name) {
            Some(Entity::Category(c)) => Some(c),
            _ => None,
        }
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorEntry> {
        match self.get(name) {
            Some(Entity::Functor(f)) => Some(f),
            _ => None,
        }
    }

    pub fn model(&self, name: &str) -> Option<&ModelEntry> {
        match self.get(name) {
            Some(Entity::Model(m)) => Some(m),
            _ => None,
        }
    }

    pub fn reedy(&self, name: &str) -> Option<&ReedyEntry> {
        match self.get(name) {
            Some(Entity::Reedy(r)) => Some(r),
            _ => None,
        }
    }

    pub fn transformation(&self, name: &str) -> Option<&TransformationEntry> {
        match self.get(name) {
            Some(Entity::Transformation(t)) => Some(t),
            _ => None,
        }
    }

    pub fn add_category(&mut self, name: &str, cat: Arc<FinCat>) -> Result<(), ValidationError> {
        self.add(name, Entity::Category(CategoryEntry { kind: category_kind(&cat), cat, lattice: None }))
    }

    pub fn add_lattice(&mut self, name: &str, lattice: FinLattice) -> Result<(), ValidationError> {
        let cat = lattice.cat().clone();
        self.add(name, Entity::Category(CategoryEntry { cat, kind: CatKind::Lattice, lattice: Some(lattice) }))
    }

    pub fn add_model(&mut self, name: &str, cat: &str, model: ModelStructure) -> Result<(), ValidationError> {
        self.add(name, Entity::Model(ModelEntry { cat: cat.into(), model }))
    }

    /// Register a setup with its categories, projection and models under
    /// names derived from `name`.
    pub fn add_quillen_setup(&mut self, name: &str, setup: &QuillenSetup, expect: Option<&ModelStructure>) -> Result<(), ValidationError> {
        let (total, base) = (format!("{name}.total"), format!("{name}.base"));
        self.add_category(&total, setup.bifib.total().clone())?;
        self.add_category(&base, setup.bifib.base().clone())?;
        let functor = format!("{name}.p");
        self.add(&functor, Entity::Functor(FunctorEntry { dom: total.clone(), cod: base.clone(), functor: setup.bifib.functor().clone() }))?;
        let base_model = format!("{name}.base-model");
        self.add_model(&base_model, &base, setup.base_model.clone())?;
        let fiber_model = format!("{name}.fibers");
        self.add_model(&fiber_model, &total, setup.vertical_classes())?;
        let expect = match expect {
            Some(ms) => {
                let n = format!("{name}.expected");
                self.add_model(&n, &total, ms.clone())?;
                Some(n)
            }
            None => None,
        };
        self.add(name, Entity::Setup(SetupEntry { functor, base_model, fiber_model, tie_break: setup.bifib.tie_break(), expect }))
    }

    /// Cleave the functor and attach the models. `tie_break` overrides the
    /// entry's own choice.
    pub fn build_setup(&self, entry: &SetupEntry, tie_break: Option<TieBreak>) -> Result<QuillenSetup, SetupError> {
        let p = &self.functor(&entry.functor).expect("resolved at load").functor;
        let bifib = match build_cleavage(p, tie_break.unwrap_or(entry.tie_break)) {
            Construction::Built(b) => b,
            Construction::Refused(r) => return Err(SetupError::NotBifibration(Box::new(r))),
        };
        let base = self.model(&entry.base_model).expect("resolved at load").model.clone();
        let fibers = &self.model(&entry.fiber_model).expect("resolved at load").model;
        Ok(QuillenSetup::from_vertical_classes(bifib, base, fibers)?)
    }

    pub fn lattice(&self, name: &str) -> Option<&FinLattice> {
        self.category(name).and_then(|c| c.lattice.as_ref())
    }

    pub fn gluing_data(&self, entry: &BigluingEntry) -> GluingData {
        let alpha = self.transformation(&entry.alpha).expect("resolved at load").alpha.clone();
        let source = self.lattice(&entry.source).expect("resolved at load").clone();
        let target = self.lattice(&entry.target).expect("resolved at load").clone();
        GluingData::new(source, target, alpha)
    }

    pub fn load_file(path: &std::path::Path) -> Result<(Workspace, Vec<u8>), LoadError> {
        let bytes = std::fs::read(path).map_err(|e| LoadError::Io { path: path.display().to_string(), message: e.to_string() })?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|e| LoadError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Ok((Workspace::parse(&text)?, bytes))
    }

    pub fn parse(src: &str) -> Result<Workspace, LoadError> {
        let mut ws = Workspace::new();
        for block in blocks(tokenize(src)?)? {
            let name_tok = &block.header.tokens[1];
            if ws.contains(&name_tok.text) {
                return Err(ParseError::at(name_tok, format!("duplicate name `{}`", name_tok.text)).into());
            }
            let entity = ws.parse_block(&block)?;
            ws.add(name_tok.text.clone(), entity).expect("checked above");
        }
        Ok(ws)
    }

    fn parse_block(&self, block: &Block) -> Result<Entity, LoadError> {
        let h = &block.header;
        let line = h.number;
        let args = &h.tokens[2..];
        let nargs = |n: usize| -> Result<(), LoadError> {
            if args.len() != n {
                let at = args.get(n).cloned().unwrap_or_else(|| h.end_position());
                return Err(ParseError::at(&at, format!("block `{}` takes {n} argument(s) after its name", h.head())).into());
            }
            Ok(())
        };
        match h.head() {
            "category" => {
                nargs(0)?;
                self.parse_category(block)
            }
            "poset" | "lattice" => {
                nargs(0)?;
                let (labels, leq) = elements_and_order(&block.body)?;
                let cat = Arc::new(FinCat::from_preorder(&labels, &leq).map_err(|source| LoadError::Validation { line, source })?);
                if h.head() == "poset" {
                    Ok(Entity::Category(CategoryEntry { cat, kind: CatKind::Poset, lattice: None }))
                } else {
                    lattice_entry(cat, line)
                }
            }
            "chain" => {
                nargs(1)?;
                no_body(block)?;
                let n: usize = args[0].text.parse().map_err(|_| ParseError::at(&args[0], "expected a length"))?;
                if n == 0 {
                    return Err(ParseError::at(&args[0], "a chain needs at least one element").into());
                }
                let l = FinLattice::chain(n);
                Ok(Entity::Category(CategoryEntry { cat: l.cat().clone(), kind: CatKind::Lattice, lattice: Some(l) }))
            }
            "diamond" => {
                nargs(0)?;
                no_body(block)?;
                let l = FinLattice::diamond();
                Ok(Entity::Category(CategoryEntry { cat: l.cat().clone(), kind: CatKind::Lattice, lattice: Some(l) }))
            }
            "functor" => {
                nargs(2)?;
                let (dom, cod) = (self.need_category(&args[0])?, self.need_category(&args[1])?);
                let functor = parse_functor(&block.body, &dom.cat, &cod.cat, line)?;
                Ok(Entity::Functor(FunctorEntry { dom: args[0].text.clone(), cod: args[1].text.clone(), functor }))
            }
            "class" => {
                nargs(1)?;
                let cat = self.need_category(&args[0])?;
                let mut class = MorClass::empty(cat.cat.num_morphisms());
                for l in &block.body {
                    expect_head(l, &["members"])?;
                    class = class.union(&self.class_spec(l.args(), &args[0].text, &cat.cat)?);
                }
                Ok(Entity::Class(ClassEntry { cat: args[0].text.clone(), class }))
            }
            "model" => {
                nargs(1)?;
                let cat = self.need_category(&args[0])?;
                let mut fields = Fields::new(&block.body, &["cof", "weak", "fib"])?;
                let mut get = |k: &str| -> Result<MorClass, LoadError> {
                    let l = fields.take_required(k, h)?;
                    Ok(self.class_spec(l.args(), &args[0].text, &cat.cat)?)
                };
                let model = ModelStructure::new(get("cof")?, get("weak")?, get("fib")?);
                Ok(Entity::Model(ModelEntry { cat: args[0].text.clone(), model }))
            }
            "wfs" => {
                nargs(1)?;
                let cat = self.need_category(&args[0])?;
                let mut fields = Fields::new(&block.body, &["left", "right"])?;
                let mut get = |k: &str| -> Result<MorClass, LoadError> {
                    let l = fields.take_required(k, h)?;
                    Ok(self.class_spec(l.args(), &args[0].text, &cat.cat)?)
                };
                let wfs = Wfs::new(get("left")?, get("right")?);
                Ok(Entity::Wfs(WfsEntry { cat: args[0].text.clone(), wfs }))
            }
            "transformation" => {
                nargs(2)?;
                let src = self.need_functor(&args[0])?;
                let tgt = self.need_functor(&args[1])?;
                if src.dom != tgt.dom || src.cod != tgt.cod {
                    return Err(ParseError::at(&args[1], "functors are not parallel").into());
                }
                let alpha = parse_transformation(&block.body, &src.functor, &tgt.functor, line)?;
                Ok(Entity::Transformation(TransformationEntry { src: args[0].text.clone(), tgt: args[1].text.clone(), alpha }))
            }
            "setup" => {
                nargs(1)?;
                let p = self.need_functor(&args[0])?;
                let mut fields = Fields::new(&block.body, &["base-model", "fiber-model", "tie-break", "expect"])?;
                let base_model = self.model_on(fields.take_required("base-model", h)?, &p.cod)?;
                let fiber_model = self.model_on(fields.take_required("fiber-model", h)?, &p.dom)?;
                let tie_break = parse_tie_break(fields.take("tie-break"))?;
                let expect = fields.take("expect").map(|l| self.model_on(l, &p.dom)).transpose()?;
                Ok(Entity::Setup(SetupEntry { functor: args[0].text.clone(), base_model, fiber_model, tie_break, expect }))
            }
            "reedy" => {
                nargs(1)?;
                let cat = self.need_category(&args[0])?.cat.clone();
                let cat_name = &args[0].text;
                let mut degree: Vec<Option<usize>> = vec![None; cat.num_objects()];
                let (mut plus, mut minus) = (None, None);
                for l in &block.body {
                    match l.head() {
                        "degree" => {
                            let a = l.expect_args(2)?;
                            let o = find_object(&cat, &a[0], cat_name)?;
                            let d = a[1].text.parse().map_err(|_| ParseError::at(&a[1], "expected a degree"))?;
                            if degree[o].replace(d).is_some() {
                                return Err(ParseError::at(&a[0], "degree given twice").into());
                            }
                        }
                        "plus" | "minus" => {
                            let slot = if l.head() == "plus" { &mut plus } else { &mut minus };
                            if slot.is_some() {
                                return Err(ParseError::at(&l.tokens[0], format!("`{}` given twice", l.head())).into());
                            }
                            *slot = Some(self.class_spec(l.args(), cat_name, &cat)?);
                        }
                        _ => return Err(unknown_field(l, &["degree", "plus", "minus"]).into()),
                    }
                }
                let degree = degree
                    .into_iter()
                    .enumerate()
                    .map(|(o, d)| d.ok_or_else(|| LoadError::Invalid { line, message: format!("object `{}` has no degree", cat.obj_label(o)) }))
                    .collect::<Result<Vec<_>, _>>()?;
                let missing = |k: &str| LoadError::Invalid { line, message: format!("missing `{k}`") };
                let plus = plus.ok_or_else(|| missing("plus"))?;
                let minus = minus.ok_or_else(|| missing("minus"))?;
                let reedy = validate_reedy(&cat, degree, plus, minus).map_err(|e| LoadError::Invalid { line, message: e.to_string() })?;
                Ok(Entity::Reedy(ReedyEntry { cat: cat_name.clone(), reedy }))
            }
            "reedy-instance" => {
                nargs(2)?;
                self.reedy(&args[0].text).ok_or_else(|| ParseError::at(&args[0], format!("unknown reedy category `{}`", args[0].text)))?;
                self.need_lattice(&args[1])?;
                let mut fields = Fields::new(&block.body, &["model", "tie-break"])?;
                let model = self.model_on(fields.take_required("model", h)?, &args[1].text)?;
                let tie_break = parse_tie_break(fields.take("tie-break"))?;
                Ok(Entity::ReedyInstance(ReedyInstanceEntry { reedy: args[0].text.clone(), lattice: args[1].text.clone(), model, tie_break }))
            }
            "bigluing" => {
                nargs(0)?;
                let mut fields = Fields::new(&block.body, &["source", "target", "alpha", "source-model", "target-model"])?;
                let one = |l: &Line| -> Result<Token, LoadError> { Ok(l.expect_args(1)?[0].clone()) };
                let source = one(fields.take_required("source", h)?)?;
                let target = one(fields.take_required("target", h)?)?;
                let alpha = one(fields.take_required("alpha", h)?)?;
                let sl = self.need_lattice(&source)?;
                let tl = self.need_lattice(&target)?;
                let t = self.transformation(&alpha.text).ok_or_else(|| ParseError::at(&alpha, format!("unknown transformation `{}`", alpha.text)))?;
                if !Arc::ptr_eq(t.alpha.src().dom(), sl.cat()) || !Arc::ptr_eq(t.alpha.src().cod(), tl.cat()) {
                    return Err(ParseError::at(&alpha, "transformation does not run between the given lattices").into());
                }
                let source_model = self.model_on(fields.take_required("source-model", h)?, &source.text)?;
                let target_model = self.model_on(fields.take_required("target-model", h)?, &target.text)?;
                Ok(Entity::Bigluing(BigluingEntry { source: source.text, target: target.text, alpha: alpha.text, source_model, target_model }))
            }
            other => Err(ParseError::at(&h.tokens[0], format!("unknown block kind `{other}`")).into()),
        }
    }

    fn parse_category(&self, block: &Block) -> Result<Entity, LoadError> {
        let mut raw = RawCategory::default();
        let mut is_lattice = false;
        for l in &block.body {
            match l.head() {
                "object" => raw.objects.extend(l.args().iter().map(|t| t.text.clone())),
                "morphism" => {
                    let a = l.expect_args(3)?;
                    raw.morphisms.push(RawMorphism { name: a[0].text.clone(), src: a[1].text.clone(), tgt: a[2].text.clone() });
                }
                "identity" => {
                    let a = l.expect_args(2)?;
                    raw.identities.push((a[0].text.clone(), a[1].text.clone()));
                }
                "compose" => {
                    let a = l.expect_args(3)?;
                    raw.compositions.push((a[0].text.clone(), a[1].text.clone(), a[2].text.clone()));
                }
                "is-lattice" => {
                    l.expect_args(0)?;
                    is_lattice = true;
                }
                _ => return Err(unknown_field(l, &["object", "morphism", "identity", "compose", "is-lattice"]).into()),
            }
        }
        let with_identity: Vec<String> = raw.identities.iter().map(|(o, _)| o.clone()).collect();
        for o in raw.objects.clone() {
            if !with_identity.contains(&o) {
                let id = format!("id_{o}");
                raw.morphisms.push(RawMorphism { name: id.clone(), src: o.clone(), tgt: o.clone() });
                raw.identities.push((o, id));
            }
        }
        let line = block.header.number;
        let cat = Arc::new(validate_category(&raw).map_err(|source| LoadError::Validation { line, source })?);
        if is_lattice {
            lattice_entry(cat, line)
        } else {
            Ok(Entity::Category(CategoryEntry { kind: category_kind(&cat), cat, lattice: None }))
        }
    }

    fn need_category(&self, tok: &Token) -> Result<&CategoryEntry, ParseError> {
        self.category(&tok.text).ok_or_else(|| ParseError::at(tok, format!("unknown category `{}`", tok.text)))
    }

    fn need_lattice(&self, tok: &Token) -> Result<&FinLattice, ParseError> {
        self.lattice(&tok.text).ok_or_else(|| ParseError::at(tok, format!("unknown lattice `{}`", tok.text)))
    }

    fn need_functor(&self, tok: &Token) -> Result<&FunctorEntry, ParseError> {
        self.functor(&tok.text).ok_or_else(|| ParseError::at(tok, format!("unknown functor `{}`", tok.text)))
    }

    /// Name of a model on category `cat`, from a one-argument line.
    fn model_on(&self, l: &Line, cat: &str) -> Result<String, LoadError> {
        let tok = &l.expect_args(1)?[0];
        let m = self.model(&tok.text).ok_or_else(|| ParseError::at(tok, format!("unknown model `{}`", tok.text)))?;
        if m.cat != cat {
            return Err(ParseError::at(tok, format!("model `{}` lives on `{}`, expected `{cat}`", tok.text, m.cat)).into());
        }
        Ok(tok.text.clone())
    }

    /// Morphism names, `:all`, `:isos`, `:identities`, `:none` or `@class`.
    fn class_spec(&self, toks: &[Token], cat_name: &str, cat: &FinCat) -> Result<MorClass, ParseError> {
        let mut c = MorClass::empty(cat.num_morphisms());
        for t in toks {
            let part = match t.text.as_str() {
                ":all" => cat.all(),
                ":isos" => cat.isos(),
                ":identities" => MorClass::identities(cat),
                ":none" => MorClass::empty(cat.num_morphisms()),
                s if s.starts_with('@') => match self.get(&s[1..]) {
                    Some(Entity::Class(k)) if k.cat == cat_name => k.class.clone(),
                    Some(Entity::Class(k)) => return Err(ParseError::at(t, format!("class `{}` lives on `{}`", &s[1..], k.cat))),
                    _ => return Err(ParseError::at(t, format!("unknown class `{}`", &s[1..]))),
                },
                s => {
                    let m = cat.find_morphism(s).ok_or_else(|| ParseError::at(t, format!("unknown morphism `{s}` in `{cat_name}`")))?;
                    MorClass::from_members(cat.num_morphisms(), [m])
                }
            };
            c = c.union(&part);
        }
        Ok(c)
    }

    /// The canonical text of the workspace; loading it gives index-identical
    /// entities.
    pub fn save(&self) -> String {
        let mut out = format!("{HEADER}\n");
        for (name, e) in &self.entries {
            out.push('\n');
            self.write_entity(&mut out, name, e);
        }
        out
    }

    fn write_entity(&self, out: &mut String, name: &str, e: &Entity) {
        let q = quote;
        let cat_of = |n: &str| self.category(n).expect("resolved").cat.clone();
        let members = |c: &MorClass, cat: &FinCat| -> String {
            c.iter().map(|m| format!(" {}", q(cat.mor_label(m)))).collect()
        };
        match e {
            Entity::Category(c) => write_category(out, name, c),
            Entity::Functor(f) => {
                let (d, c) = (cat_of(&f.dom), cat_of(&f.cod));
                let _ = writeln!(out, "functor {} {} {}", q(name), q(&f.dom), q(&f.cod));
                for o in d.objects() {
                    let _ = writeln!(out, "  obj {} {}", q(d.obj_label(o)), q(c.obj_label(f.functor.obj(o))));
                }
                for m in d.morphisms() {
                    let _ = writeln!(out, "  mor {} {}", q(d.mor_label(m)), q(c.mor_label(f.functor.mor(m))));
                }
            }
            Entity::Class(k) => {
                let cat = cat_of(&k.cat);
                let _ = writeln!(out, "class {} {}\n  members{}", q(name), q(&k.cat), members(&k.class, &cat));
            }
            Entity::Model(m) => {
                let cat = cat_of(&m.cat);
                let _ = writeln!(out, "model {} {}", q(name), q(&m.cat));
                let _ = writeln!(out, "  cof{}\n  weak{}\n  fib{}", members(&m.model.cof, &cat), members(&m.model.weak, &cat), members(&m.model.fib, &cat));
            }
            Entity::Wfs(w) => {
                let cat = cat_of(&w.cat);
                let _ = writeln!(out, "wfs {} {}\n  left{}\n  right{}", q(name), q(&w.cat), members(&w.wfs.left, &cat), members(&w.wfs.right, &cat));
            }
            Entity::Transformation(t) => {
                let src = self.functor(&t.src).expect("resolved");
                let (d, c) = (cat_of(&src.dom), cat_of(&src.cod));
                let _ = writeln!(out, "transformation {} {} {}", q(name), q(&t.src), q(&t.tgt));
                for o in d.objects() {
                    let _ = writeln!(out, "  component {} {}", q(d.obj_label(o)), q(c.mor_label(t.alpha.component(o))));
                }
            }
            Entity::Setup(s) => {
                let _ = writeln!(out, "setup {} {}", q(name), q(&s.functor));
                let _ = writeln!(out, "  base-model {}\n  fiber-model {}\n  tie-break {}", q(&s.base_model), q(&s.fiber_model), tie_break_name(s.tie_break));
                if let Some(x) = &s.expect {
                    let _ = writeln!(out, "  expect {}", q(x));
                }
            }
            Entity::Reedy(r) => {
                let cat = &r.reedy.cat;
                let _ = writeln!(out, "reedy {} {}", q(name), q(&r.cat));
                for o in cat.objects() {
                    let _ = writeln!(out, "  degree {} {}", q(cat.obj_label(o)), r.reedy.degree[o]);
                }
                let _ = writeln!(out, "  plus{}\n  minus{}", members(&r.reedy.plus, cat), members(&r.reedy.minus, cat));
            }
            Entity::ReedyInstance(r) => {
                let _ = writeln!(out, "reedy-instance {} {} {}", q(name), q(&r.reedy), q(&r.lattice));
                let _ = writeln!(out, "  model {}\n  tie-break {}", q(&r.model), tie_break_name(r.tie_break));
            }
            Entity::Bigluing(b) => {
                let _ = writeln!(out, "bigluing {}", q(name));
                let _ = writeln!(out, "  source {}\n  target {}\n  alpha {}", q(&b.source), q(&b.target), q(&b.alpha));
                let _ = writeln!(out, "  source-model {}\n  target-model {}", q(&b.source_model), q(&b.target_model));
            }
        }
        out.push_str("end\n");
    }
}

pub fn tie_break_name(t: TieBreak) -> &'static str {
    match t {
        TieBreak::Smallest => "smallest",
        TieBreak::Largest => "largest",
    }
}

fn parse_tie_break(l: Option<&Line>) -> Result<TieBreak, ParseError> {
    let Some(l) = l else { return Ok(TieBreak::Smallest) };
    let t = &l.expect_args(1)?[0];
    match t.text.as_str() {
        "smallest" => Ok(TieBreak::Smallest),
        "largest" => Ok(TieBreak::Largest),
        _ => Err(ParseError::at(t, "tie-break is `smallest` or `largest`")),
    }
}

fn is_antisymmetric(cat: &FinCat) -> bool {
    cat.objects().all(|a| cat.objects().all(|b| a == b || cat.hom(a, b).is_empty() || cat.hom(b, a).is_empty()))
}

/// Non-identity relations of a poset, as `(source, target)` pairs.
fn order_pairs(cat: &FinCat) -> Vec<(Obj, Obj)> {
    cat.morphisms().filter(|&m| !cat.is_identity(m)).map(|m| (cat.src(m), cat.tgt(m))).collect()
}

/// Whether the element/order form rebuilds exactly this category.
fn order_form_matches(cat: &FinCat) -> bool {
    let labels: Vec<String> = cat.objects().map(|o| cat.obj_label(o).to_string()).collect();
    match FinCat::from_preorder(&labels, &order_pairs(cat)) {
        Ok(r) => r.to_raw() == cat.to_raw(),
        Err(_) => false,
    }
}

fn write_category(out: &mut String, name: &str, c: &CategoryEntry) {
    let q = quote;
    let cat = &c.cat;
    if c.kind != CatKind::Category && order_form_matches(cat) {
        let kw = if c.kind == CatKind::Lattice { "lattice" } else { "poset" };
        let _ = writeln!(out, "{kw} {}", q(name));
        let elems: String = cat.objects().map(|o| format!(" {}", q(cat.obj_label(o)))).collect();
        let _ = writeln!(out, "  element{elems}");
        for (a, b) in order_pairs(cat) {
            let _ = writeln!(out, "  leq {} {}", q(cat.obj_label(a)), q(cat.obj_label(b)));
        }
        return;
    }
    let raw = cat.to_raw();
    let _ = writeln!(out, "category {}", q(name));
    if !raw.objects.is_empty() {
        let objs: String = raw.objects.iter().map(|o| format!(" {}", q(o))).collect();
        let _ = writeln!(out, "  object{objs}");
    }
    for m in &raw.morphisms {
        let _ = writeln!(out, "  morphism {} {} {}", q(&m.name), q(&m.src), q(&m.tgt));
    }
    for (o, m) in &raw.identities {
        let _ = writeln!(out, "  identity {} {}", q(o), q(m));
    }
    for (g, f, h) in &raw.compositions {
        let _ = writeln!(out, "  compose {} {} {}", q(g), q(f), q(h));
    }
    if c.kind == CatKind::Lattice {
        out.push_str("  is-lattice\n");
    }
}

fn category_kind(cat: &FinCat) -> CatKind {
    if cat.is_thin() && is_antisymmetric(cat) {
        CatKind::Poset
    } else {
        CatKind::Category
    }
}

fn lattice_entry(cat: Arc<FinCat>, line: usize) -> Result<Entity, LoadError> {
    let l = FinLattice::from_poset(cat.clone()).map_err(|e| LoadError::Invalid { line, message: e.to_string() })?;
    Ok(Entity::Category(CategoryEntry { cat, kind: CatKind::Lattice, lattice: Some(l) }))
}

fn no_body(block: &Block) -> Result<(), ParseError> {
    match block.body.first() {
        Some(l) => Err(ParseError::at(&l.tokens[0], format!("block `{}` has no body", block.header.head()))),
        None => Ok(()),
    }
}

fn unknown_field(l: &Line, allowed: &[&str]) -> ParseError {
    ParseError::at(&l.tokens[0], format!("unknown line `{}`; expected one of {}", l.head(), allowed.join(", ")))
}

fn expect_head(l: &Line, allowed: &[&str]) -> Result<(), ParseError> {
    if allowed.contains(&l.head()) {
        Ok(())
    } else {
        Err(unknown_field(l, allowed))
    }
}

/// Body lines keyed by their first token, each key at most once.
struct Fields<'a> {
    map: HashMap<&'a str, &'a Line>,
}

impl<'a> Fields<'a> {
    fn new(body: &'a [Line], allowed: &[&str]) -> Result<Self, ParseError> {
        let mut map = HashMap::new();
        for l in body {
            expect_head(l, allowed)?;
            if map.insert(l.tokens[0].text.as_str(), l).is_some() {
                return Err(ParseError::at(&l.tokens[0], format!("`{}` given twice", l.head())));
            }
        }
        Ok(Fields { map })
    }

    fn take(&mut self, key: &str) -> Option<&'a Line> {
        self.map.remove(key)
    }

    fn take_required(&mut self, key: &str, header: &Line) -> Result<&'a Line, ParseError> {
        self.take(key).ok_or_else(|| ParseError::at(&header.tokens[0], format!("block `{}` is missing `{key}`", header.tokens[1].text)))
    }
}

fn elements_and_order(body: &[Line]) -> Result<(Vec<String>, Vec<(usize, usize)>), ParseError> {
    let mut labels: Vec<String> = Vec::new();
    let mut pending = Vec::new();
    for l in body {
        match l.head() {
            "element" => {
                for t in l.args() {
                    if labels.contains(&t.text) {
                        return Err(ParseError::at(t, format!("duplicate element `{}`", t.text)));
                    }
                    labels.push(t.text.clone());
                }
            }
            "leq" => {
                if l.args().len() < 2 {
                    return Err(ParseError::at(&l.end_position(), "`leq` needs at least two elements"));
                }
                pending.push(l);
            }
            _ => return Err(unknown_field(l, &["element", "leq"])),
        }
    }
    let find = |t: &Token| labels.iter().position(|x| *x == t.text).ok_or_else(|| ParseError::at(t, format!("unknown element `{}`", t.text)));
    let mut leq = Vec::new();
    for l in pending {
        for w in l.args().windows(2) {
            leq.push((find(&w[0])?, find(&w[1])?));
        }
    }
    Ok((labels, leq))
}

fn find_object(cat: &FinCat, t: &Token, cat_name: &str) -> Result<Obj, ParseError> {
    cat.find_object(&t.text).ok_or_else(|| ParseError::at(t, format!("unknown object `{}` in `{cat_name}`", t.text)))
}

fn find_morphism(cat: &FinCat, t: &Token) -> Result<Mor, ParseError> {
    cat.find_morphism(&t.text).ok_or_else(|| ParseError::at(t, format!("unknown morphism `{}`", t.text)))
}

/// Object and morphism maps; an unlisted morphism goes to the only morphism
/// between the images of its endpoints, if there is exactly one.
fn parse_functor(body: &[Line], dom: &Arc<FinCat>, cod: &Arc<FinCat>, line: usize) -> Result<Functor, LoadError> {
    let mut om: Vec<Option<Obj>> = vec![None; dom.num_objects()];
    let mut mm: Vec<Option<Mor>> = vec![None; dom.num_morphisms()];
    for l in body {
        let a = match l.head() {
            "obj" | "mor" => l.expect_args(2)?,
            _ => return Err(unknown_field(l, &["obj", "mor"]).into()),
        };
        let slot_taken = if l.head() == "obj" {
            om[find_object(dom, &a[0], "domain")?].replace(find_object(cod, &a[1], "codomain")?).is_some()
        } else {
            mm[find_morphism(dom, &a[0])?].replace(find_morphism(cod, &a[1])?).is_some()
        };
        if slot_taken {
            return Err(ParseError::at(&a[0], format!("`{}` mapped twice", a[0].text)).into());
        }
    }
    let om = om
        .into_iter()
        .enumerate()
        .map(|(o, x)| x.ok_or_else(|| LoadError::Validation { line, source: ValidationError::MapNotTotal { name: dom.obj_label(o).into() } }))
        .collect::<Result<Vec<_>, _>>()?;
    let mm = mm
        .into_iter()
        .enumerate()
        .map(|(m, x)| {
            x.or_else(|| match cod.hom(om[dom.src(m)], om[dom.tgt(m)]) {
                [only] => Some(*only),
                _ => None,
            })
            .ok_or_else(|| LoadError::Validation { line, source: ValidationError::MapNotTotal { name: dom.mor_label(m).into() } })
        })
        .collect::<Result<Vec<_>, _>>()?;
    validate_functor(dom, cod, om, mm).map_err(|source| LoadError::Validation { line, source })
}

fn parse_transformation(body: &[Line], src: &Functor, tgt: &Functor, line: usize) -> Result<NatTransformation, LoadError> {
    let (dom, cod) = (src.dom(), src.cod());
    let mut comps: Vec<Option<Mor>> = vec![None; dom.num_objects()];
    for l in body {
        expect_head(l, &["component"])?;
        let a = l.expect_args(2)?;
        if comps[find_object(dom, &a[0], "domain")?].replace(find_morphism(cod, &a[1])?).is_some() {
            return Err(ParseError::at(&a[0], "component given twice").into());
        }
    }
    let comps = comps
        .into_iter()
        .enumerate()
        .map(|(o, c)| {
            c.or_else(|| match cod.hom(src.obj(o), tgt.obj(o)) {
                [only] => Some(*only),
                _ => None,
            })
            .ok_or_else(|| LoadError::Validation { line, source: ValidationError::MapNotTotal { name: dom.obj_label(o).into() } })
        })
        .collect::<Result<Vec<_>, _>>()?;
    NatTransformation::new(src.clone(), tgt.clone(), comps).map_err(|source| LoadError::Validation { line, source })
}
