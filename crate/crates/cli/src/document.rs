//! Name resolution and validation of parsed documents.
//!
//! Items may only refer to items defined earlier in the same file. A site or
//! a clan can stand wherever a category is expected and then means its base.
//! Structural validity (category laws, functoriality, naturality, cocone
//! commutation, space axioms, bundle functoriality) is checked here; the
//! topology and clan axioms are left to the `topology` and `clan` commands,
//! which report them as verdicts.

use std::collections::HashMap;
use std::sync::Arc;

use guk_core::clans::Clan;
use guk_core::limits::Cocone;
use guk_core::sites::{open_set_site, PullbackChoice, Site, Space};
use guk_core::topos::SheafOfModels;
use guk_core::{
    validate_category, validate_functor, validate_set_functor, validate_set_nat, CategoryBuilder,
    CategoryPresentation, Error as EngineError, FinCategory, Functor, Generator, MorId, ObjId, SetFunctor,
    SetNat, Verdict, Witness,
};

use crate::error::DslError;
use crate::syntax::*;

#[derive(Clone, Debug)]
pub enum Value {
    Category(Arc<FinCategory>),
    Functor(Functor),
    SetFunctor {
        functor: SetFunctor,
        presheaf: bool,
        /// Name of the category the item was declared on.
        on: String,
    },
    Transformation {
        source: String,
        target: String,
        nat: SetNat,
    },
    Cocone {
        diagram: String,
        cocone: Cocone,
    },
    Space(Space),
    Site(Site),
    Clan(Clan),
    Bundle(SheafOfModels),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub kind: &'static str,
    pub pos: Pos,
    pub value: Value,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub syntax: Syntax,
    entries: Vec<Entry>,
    index: HashMap<String, usize>,
    /// Opposites of referenced categories, shared by every presheaf on them.
    opposites: HashMap<String, Arc<FinCategory>>,
}

/// Parses, resolves and validates a document.
pub fn parse(text: &str) -> Result<Document, DslError> {
    let syntax = parse_syntax(text)?;
    let mut doc = Document {
        syntax: Syntax::default(),
        entries: Vec::new(),
        index: HashMap::new(),
        opposites: HashMap::new(),
    };
    for item in &syntax.items {
        let name = item.name();
        if let Some(&i) = doc.index.get(&name.name) {
            return Err(DslError::NameClash {
                name: name.name.clone(),
                at: name.pos,
                first: doc.entries[i].pos,
            });
        }
        let value = doc.resolve(item)?;
        doc.index.insert(name.name.clone(), doc.entries.len());
        doc.entries.push(Entry {
            name: name.name.clone(),
            kind: item.kind(),
            pos: name.pos,
            value,
        });
    }
    doc.syntax = syntax;
    Ok(doc)
}

fn unresolved<T>(kind: &str, id: &Ident) -> Result<T, DslError> {
    Err(DslError::UnresolvedReference {
        kind: kind.into(),
        name: id.name.clone(),
        at: id.pos,
    })
}

fn invalid<T>(item: &Ident, witness: Witness) -> Result<T, DslError> {
    Err(DslError::ValidationFailed {
        item: item.name.clone(),
        witness,
    })
}

fn check(item: &Ident, v: Verdict) -> Result<(), DslError> {
    match v {
        Verdict::Pass => Ok(()),
        Verdict::Fail(w) => invalid(item, w),
    }
}

fn engine(item: &Ident) -> impl Fn(EngineError) -> DslError + '_ {
    move |source| DslError::Engine {
        item: item.name.clone(),
        source,
    }
}

fn check_unique(names: &[Ident]) -> Result<(), DslError> {
    let mut seen: HashMap<&str, Pos> = HashMap::new();
    for n in names {
        if let Some(&first) = seen.get(n.name.as_str()) {
            return Err(DslError::NameClash {
                name: n.name.clone(),
                at: n.pos,
                first,
            });
        }
        seen.insert(&n.name, n.pos);
    }
    Ok(())
}

pub fn object(c: &FinCategory, id: &Ident) -> Result<ObjId, DslError> {
    c.obj(&id.name).or_else(|_| unresolved("object", id))
}

pub fn morphism(c: &FinCategory, id: &Ident) -> Result<MorId, DslError> {
    c.mor(&id.name).or_else(|_| unresolved("morphism", id))
}

/// Fills undeclared entries of a per-morphism table from declared ones,
/// using `combine(g, f)` for `g ∘ f`, until nothing changes.
fn complete<T: Clone>(
    c: &FinCategory,
    table: &mut [Option<T>],
    combine: impl Fn(MorId, &T, MorId, &T) -> Option<T>,
) {
    loop {
        let mut changed = false;
        for g in c.morphisms() {
            for f in c.morphisms() {
                let Some(h) = c.try_compose(g, f) else { continue };
                if table[h.0].is_some() {
                    continue;
                }
                if let (Some(tg), Some(tf)) = (&table[g.0], &table[f.0]) {
                    if let Some(v) = combine(g, tg, f, tf) {
                        table[h.0] = Some(v);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

impl Document {
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    fn lookup(&self, kind: &str, id: &Ident) -> Result<&Entry, DslError> {
        self.get(&id.name).map_or_else(|| unresolved(kind, id), Ok)
    }

    /// A category, or the base of a site or clan.
    pub fn category(&self, id: &Ident) -> Result<Arc<FinCategory>, DslError> {
        match &self.lookup("category", id)?.value {
            Value::Category(c) => Ok(c.clone()),
            Value::Site(s) => Ok(s.base.clone()),
            Value::Clan(k) => Ok(k.base.clone()),
            _ => unresolved("category", id),
        }
    }

    pub fn functor(&self, id: &Ident) -> Result<&Functor, DslError> {
        match &self.lookup("functor", id)?.value {
            Value::Functor(f) => Ok(f),
            _ => unresolved("functor", id),
        }
    }

    pub fn set_functor(&self, id: &Ident) -> Result<(&SetFunctor, bool), DslError> {
        match &self.lookup("setfunctor", id)?.value {
            Value::SetFunctor {
                functor, presheaf, ..
            } => Ok((functor, *presheaf)),
            _ => unresolved("setfunctor", id),
        }
    }

    pub fn transformation(&self, id: &Ident) -> Result<(&str, &str, &SetNat), DslError> {
        match &self.lookup("transformation", id)?.value {
            Value::Transformation { source, target, nat } => Ok((source, target, nat)),
            _ => unresolved("transformation", id),
        }
    }

    pub fn cocone(&self, id: &Ident) -> Result<(&str, &Cocone), DslError> {
        match &self.lookup("cocone", id)?.value {
            Value::Cocone { diagram, cocone } => Ok((diagram, cocone)),
            _ => unresolved("cocone", id),
        }
    }

    pub fn space(&self, id: &Ident) -> Result<&Space, DslError> {
        match &self.lookup("space", id)?.value {
            Value::Space(s) => Ok(s),
            _ => unresolved("space", id),
        }
    }

    pub fn site(&self, id: &Ident) -> Result<&Site, DslError> {
        match &self.lookup("site", id)?.value {
            Value::Site(s) => Ok(s),
            _ => unresolved("site", id),
        }
    }

    pub fn clan(&self, id: &Ident) -> Result<&Clan, DslError> {
        match &self.lookup("clan", id)?.value {
            Value::Clan(k) => Ok(k),
            _ => unresolved("clan", id),
        }
    }

    pub fn bundle(&self, id: &Ident) -> Result<&SheafOfModels, DslError> {
        match &self.lookup("bundle", id)?.value {
            Value::Bundle(b) => Ok(b),
            _ => unresolved("bundle", id),
        }
    }

    fn opposite_of(&mut self, id: &Ident) -> Result<Arc<FinCategory>, DslError> {
        if let Value::Site(s) = &self.lookup("category", id)?.value {
            return Ok(s.op.clone());
        }
        if let Some(op) = self.opposites.get(&id.name) {
            return Ok(op.clone());
        }
        let op = Arc::new(self.category(id)?.opposite());
        self.opposites.insert(id.name.clone(), op.clone());
        Ok(op)
    }

    fn resolve(&mut self, item: &Item) -> Result<Value, DslError> {
        match item {
            Item::Category(d) => self.resolve_category(d),
            Item::Presentation(d) => self.resolve_presentation(d),
            Item::Functor(d) => self.resolve_functor(d),
            Item::SetFunctor(d) => self.resolve_set_functor(d),
            Item::Transformation(d) => self.resolve_transformation(d),
            Item::Cocone(d) => self.resolve_cocone(d),
            Item::Space(d) => self.resolve_space(d),
            Item::Site(d) => self.resolve_site(d),
            Item::Clan(d) => self.resolve_clan(d),
            Item::Bundle(d) => self.resolve_bundle(d),
        }
    }

    fn declared_arrows(objects: &[Ident], arrows: &[(Ident, Ident, Ident)]) -> Result<(), DslError> {
        check_unique(objects)?;
        let mut names: Vec<Ident> = objects
            .iter()
            .map(|o| Ident {
                name: format!("id_{}", o.name),
                pos: o.pos,
            })
            .collect();
        names.extend(arrows.iter().map(|(n, _, _)| n.clone()));
        check_unique(&names)?;
        for (_, s, t) in arrows {
            for end in [s, t] {
                if !objects.contains(end) {
                    return unresolved("object", end);
                }
            }
        }
        Ok(())
    }

    fn resolve_category(&mut self, d: &CategoryDecl) -> Result<Value, DslError> {
        Self::declared_arrows(&d.objects, &d.arrows)?;
        let mut b = CategoryBuilder::new().objects(d.objects.iter().map(|o| o.name.clone()));
        for (n, s, t) in &d.arrows {
            b = b.arrow(&n.name, &s.name, &t.name);
        }
        let declared = |m: &Ident| {
            d.arrows.iter().any(|(n, _, _)| n == m)
                || d.objects.iter().any(|o| m.name == format!("id_{}", o.name))
        };
        for (g, f, h) in &d.composites {
            for m in [g, f, h] {
                if !declared(m) {
                    return unresolved("morphism", m);
                }
            }
            b = b.compose(&g.name, &f.name, &h.name);
        }
        let c = b.build().map_err(engine(&d.name))?;
        check(&d.name, validate_category(&c))?;
        Ok(Value::Category(Arc::new(c)))
    }

    fn resolve_presentation(&mut self, d: &PresentationDecl) -> Result<Value, DslError> {
        Self::declared_arrows(&d.objects, &d.arrows)?;
        let generators = d
            .arrows
            .iter()
            .map(|(n, s, t)| Generator {
                name: n.name.clone(),
                src: s.name.clone(),
                tgt: t.name.clone(),
            })
            .collect();
        let mut p = CategoryPresentation::new(d.objects.iter().map(|o| o.name.clone()).collect(), generators);
        for (l, r) in &d.relations {
            for m in l.iter().chain(r) {
                let known = d.arrows.iter().any(|(n, _, _)| n == m)
                    || d.objects.iter().any(|o| m.name == format!("id_{}", o.name));
                if !known {
                    return unresolved("morphism", m);
                }
            }
            let l: Vec<&str> = l.iter().map(|i| i.name.as_str()).collect();
            let r: Vec<&str> = r.iter().map(|i| i.name.as_str()).collect();
            p = p.relation(&l, &r);
        }
        if let Some(bound) = d.bound {
            p = p.bound(bound);
        }
        let c = p.compile().map_err(engine(&d.name))?;
        check(&d.name, validate_category(&c))?;
        Ok(Value::Category(Arc::new(c)))
    }

    fn resolve_functor(&mut self, d: &FunctorDecl) -> Result<Value, DslError> {
        let (dom, cod) = (self.category(&d.dom)?, self.category(&d.cod)?);
        let mut omap = vec![None; dom.num_objects()];
        for (a, x) in &d.objects {
            omap[object(&dom, a)?.0] = Some(object(&cod, x)?);
        }
        let mut omap_full = Vec::new();
        for a in dom.objects() {
            match omap[a.0] {
                Some(x) => omap_full.push(x),
                None => {
                    return invalid(
                        &d.name,
                        Witness::new("missing-image").with("object", dom.obj_name(a)),
                    )
                }
            }
        }
        let mut mmap: Vec<Option<MorId>> = vec![None; dom.num_morphisms()];
        for a in dom.objects() {
            mmap[dom.id(a).0] = Some(cod.id(omap_full[a.0]));
        }
        for (f, u) in &d.arrows {
            mmap[morphism(&dom, f)?.0] = Some(morphism(&cod, u)?);
        }
        complete(&dom, &mut mmap, |_, &g, _, &f| cod.try_compose(g, f));
        let mut full = Vec::new();
        for f in dom.morphisms() {
            match mmap[f.0] {
                Some(u) => full.push(u),
                None => {
                    return invalid(
                        &d.name,
                        Witness::new("missing-image").with("morphism", dom.mor_name(f)),
                    )
                }
            }
        }
        let fun = Functor::new(dom, cod, omap_full, full).map_err(engine(&d.name))?;
        check(&d.name, validate_functor(&fun))?;
        Ok(Value::Functor(fun))
    }

    fn resolve_set_functor(&mut self, d: &SetFunctorDecl) -> Result<Value, DslError> {
        let dom = if d.presheaf {
            self.opposite_of(&d.dom)?
        } else {
            self.category(&d.dom)?
        };
        let mut labels: Vec<Option<Vec<String>>> = vec![None; dom.num_objects()];
        for (a, elems) in &d.carriers {
            let i = object(&dom, a)?.0;
            if labels[i].is_some() {
                return Err(DslError::NameClash {
                    name: a.name.clone(),
                    at: a.pos,
                    first: d.carriers.iter().find(|(b, _)| b == a).unwrap().0.pos,
                });
            }
            check_unique(elems)?;
            labels[i] = Some(elems.iter().map(|e| e.name.clone()).collect());
        }
        let labels: Vec<Vec<String>> = labels.into_iter().map(Option::unwrap_or_default).collect();
        let elem = |a: ObjId, id: &Ident| -> Result<usize, DslError> {
            labels[a.0]
                .iter()
                .position(|l| *l == id.name)
                .map_or_else(|| unresolved("element", id), Ok)
        };
        let mut action: Vec<Option<Vec<usize>>> = vec![None; dom.num_morphisms()];
        for a in dom.objects() {
            action[dom.id(a).0] = Some((0..labels[a.0].len()).collect());
        }
        for (f, pairs) in &d.maps {
            let m = morphism(&dom, f)?;
            let (s, t) = (dom.src(m), dom.tgt(m));
            let mut table: Vec<Option<usize>> = vec![None; labels[s.0].len()];
            for (x, y) in pairs {
                table[elem(s, x)?] = Some(elem(t, y)?);
            }
            match table.iter().position(Option::is_none) {
                Some(x) => {
                    return invalid(
                        &d.name,
                        Witness::new("totality")
                            .with("morphism", dom.mor_name(m))
                            .with("element", &labels[s.0][x]),
                    )
                }
                None => action[m.0] = Some(table.into_iter().flatten().collect()),
            }
        }
        complete(&dom, &mut action, |_, g, _, f| {
            Some(f.iter().map(|&x| g[x]).collect())
        });
        let mut full = Vec::new();
        for f in dom.morphisms() {
            match action[f.0].take() {
                Some(t) => full.push(t),
                None if labels[dom.src(f).0].is_empty() => full.push(Vec::new()),
                None => {
                    return invalid(
                        &d.name,
                        Witness::new("missing-map").with("morphism", dom.mor_name(f)),
                    )
                }
            }
        }
        let functor = SetFunctor::new(dom, labels, full).map_err(engine(&d.name))?;
        check(&d.name, validate_set_functor(&functor))?;
        Ok(Value::SetFunctor {
            functor,
            presheaf: d.presheaf,
            on: d.dom.name.clone(),
        })
    }

    fn resolve_transformation(&mut self, d: &TransformationDecl) -> Result<Value, DslError> {
        let (source, _) = self.set_functor(&d.source)?;
        let (target, _) = self.set_functor(&d.target)?;
        if *source.dom != *target.dom {
            return invalid(&d.name, Witness::new("parallel-functors"));
        }
        let c = source.dom.clone();
        let mut components: Vec<Option<Vec<usize>>> = vec![None; c.num_objects()];
        for (a, pairs) in &d.components {
            let a = object(&c, a)?;
            let mut table = vec![None; source.size(a)];
            for (x, y) in pairs {
                let xi = source
                    .element(a, &x.name)
                    .map_or_else(|| unresolved("element", x), Ok)?;
                let yi = target
                    .element(a, &y.name)
                    .map_or_else(|| unresolved("element", y), Ok)?;
                table[xi] = Some(yi);
            }
            if let Some(x) = table.iter().position(Option::is_none) {
                return invalid(
                    &d.name,
                    Witness::new("component-totality")
                        .with("object", c.obj_name(a))
                        .with("element", source.label(a, x)),
                );
            }
            components[a.0] = Some(table.into_iter().flatten().collect());
        }
        let mut full = Vec::new();
        for a in c.objects() {
            match components[a.0].take() {
                Some(t) => full.push(t),
                None if source.size(a) == 0 => full.push(Vec::new()),
                None => {
                    return invalid(
                        &d.name,
                        Witness::new("component-totality").with("object", c.obj_name(a)),
                    )
                }
            }
        }
        let nat = SetNat { components: full };
        check(&d.name, validate_set_nat(source, target, &nat))?;
        Ok(Value::Transformation {
            source: d.source.name.clone(),
            target: d.target.name.clone(),
            nat,
        })
    }

    fn resolve_cocone(&mut self, d: &CoconeDecl) -> Result<Value, DslError> {
        let diagram = self.functor(&d.diagram)?;
        let (j, c) = (&*diagram.dom, &*diagram.cod);
        let apex = object(c, &d.apex)?;
        let mut legs = vec![None; j.num_objects()];
        for (i, u) in &d.legs {
            legs[object(j, i)?.0] = Some(morphism(c, u)?);
        }
        let mut full = Vec::new();
        for i in j.objects() {
            let Some(u) = legs[i.0] else {
                return invalid(&d.name, Witness::new("cocone-leg").with("object", j.obj_name(i)));
            };
            if c.src(u) != diagram.ob(i) || c.tgt(u) != apex {
                return invalid(
                    &d.name,
                    Witness::new("leg-typing")
                        .with("object", j.obj_name(i))
                        .with("leg", c.mor_name(u)),
                );
            }
            full.push(u);
        }
        for u in j.morphisms() {
            if c.compose(full[j.tgt(u).0], diagram.mor(u)) != full[j.src(u).0] {
                return invalid(
                    &d.name,
                    Witness::new("cocone-commutation").with("morphism", j.mor_name(u)),
                );
            }
        }
        Ok(Value::Cocone {
            diagram: d.diagram.name.clone(),
            cocone: Cocone { apex, legs: full },
        })
    }

    fn resolve_space(&mut self, d: &SpaceDecl) -> Result<Value, DslError> {
        check_unique(&d.points)?;
        for p in d.opens.iter().flatten() {
            if !d.points.contains(p) {
                return unresolved("point", p);
            }
        }
        let points = d.points.iter().map(|p| p.name.clone()).collect();
        let opens: Vec<Vec<&str>> = d
            .opens
            .iter()
            .map(|o| o.iter().map(|p| p.name.as_str()).collect())
            .collect();
        let space = Space::from_open_sets(points, &opens).map_err(engine(&d.name))?;
        Ok(Value::Space(space))
    }

    fn resolve_site(&mut self, d: &SiteDecl) -> Result<Value, DslError> {
        let site = match &d.body {
            SiteBody::FromSpace(s) => open_set_site(self.space(s)?).map_err(engine(&d.name))?,
            SiteBody::Covers {
                base,
                chaotic,
                covers,
                pullbacks,
            } => {
                let base = self.category(base)?;
                let choice = match pullbacks {
                    Some(PullbackPick::Last) => PullbackChoice::Last,
                    _ => PullbackChoice::First,
                };
                let mut cov = vec![Vec::new(); base.num_objects()];
                if *chaotic {
                    if let Some((a, _)) = covers.first() {
                        return Err(engine(&d.name)(EngineError::Malformed(format!(
                            "chaotic site also lists a cover of `{}`",
                            a.name
                        ))));
                    }
                    let chaotic = Site::chaotic(base.clone()).map_err(engine(&d.name))?;
                    for a in base.objects() {
                        cov[a.0] = chaotic.covers(a).to_vec();
                    }
                } else {
                    for (a, fam) in covers {
                        let a = object(&base, a)?;
                        let fam = fam.iter().map(|f| morphism(&base, f)).collect::<Result<_, _>>()?;
                        cov[a.0].push(fam);
                    }
                }
                Site::with_choice(base, cov, choice).map_err(engine(&d.name))?
            }
        };
        Ok(Value::Site(site))
    }

    fn resolve_clan(&mut self, d: &ClanDecl) -> Result<Value, DslError> {
        let base = self.category(&d.base)?;
        let terminal = d.terminal.as_ref().map(|t| object(&base, t)).transpose()?;
        let display = d
            .display
            .iter()
            .map(|f| morphism(&base, f))
            .collect::<Result<_, _>>()?;
        let clan = Clan::new(base, terminal, display).map_err(engine(&d.name))?;
        Ok(Value::Clan(clan))
    }

    fn resolve_bundle(&mut self, d: &BundleDecl) -> Result<Value, DslError> {
        let index = self.category(&d.index)?;
        let site = self.category(&d.site)?;
        let mut at: Vec<Option<(String, SetFunctor)>> = vec![None; index.num_objects()];
        for (a, p) in &d.at {
            let (f, _) = self.set_functor(p)?;
            at[object(&index, a)?.0] = Some((p.name.clone(), f.clone()));
        }
        let mut names = Vec::new();
        let mut presheaves = Vec::new();
        for a in index.objects() {
            let Some((n, p)) = at[a.0].take() else {
                return invalid(
                    &d.name,
                    Witness::new("missing-component").with("object", index.obj_name(a)),
                );
            };
            names.push(n);
            presheaves.push(p);
        }
        let mut maps: Vec<Option<SetNat>> = vec![None; index.num_morphisms()];
        for a in index.objects() {
            maps[index.id(a).0] = Some(SetNat::identity(&presheaves[a.0]));
        }
        for (u, alpha) in &d.maps {
            let u_id = morphism(&index, u)?;
            let (source, target, nat) = self.transformation(alpha)?;
            let (want_s, want_t) = (&names[index.src(u_id).0], &names[index.tgt(u_id).0]);
            if source != want_s || target != want_t {
                return invalid(
                    &d.name,
                    Witness::new("transformation-endpoints")
                        .with("morphism", &u.name)
                        .with("transformation", &alpha.name),
                );
            }
            maps[u_id.0] = Some(nat.clone());
        }
        complete(&index, &mut maps, |_, g, _, f| Some(g.after(f)));
        let mut full = Vec::new();
        for u in index.morphisms() {
            match maps[u.0].take() {
                Some(m) => full.push(m),
                None => {
                    return invalid(
                        &d.name,
                        Witness::new("missing-map").with("morphism", index.mor_name(u)),
                    )
                }
            }
        }
        let (bundle, verdict) = SheafOfModels::new(index, site, presheaves, full).map_err(engine(&d.name))?;
        check(&d.name, verdict)?;
        Ok(Value::Bundle(bundle))
    }
}

/// `name` if it is a valid identifier, otherwise a fresh `prefix<k>`.
fn ident_or(name: &str, prefix: &str, k: usize, taken: &[String]) -> String {
    if is_ident(name) && !taken.iter().any(|t| t == name) {
        name.to_string()
    } else {
        let mut i = k;
        loop {
            let cand = format!("{prefix}{i}");
            if !taken.contains(&cand) {
                return cand;
            }
            i += 1;
        }
    }
}

fn relabel(names: impl Iterator<Item = String>, prefix: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for (k, n) in names.enumerate() {
        let fresh = ident_or(&n, prefix, k, &out);
        out.push(fresh);
    }
    out
}

/// The category as a `category` item. Object and morphism names that are
/// not identifiers are replaced; identities are written as `id_<object>`.
pub fn export_category(name: &str, c: &FinCategory) -> Item {
    let objects = relabel(c.objects().map(|a| c.obj_name(a).to_string()), "o");
    let mut taken: Vec<String> = objects.iter().map(|o| format!("id_{o}")).collect();
    let mut mor = vec![String::new(); c.num_morphisms()];
    for a in c.objects() {
        mor[c.id(a).0] = format!("id_{}", objects[a.0]);
    }
    for (k, f) in c.morphisms().filter(|&f| !c.is_identity(f)).enumerate() {
        let n = ident_or(c.mor_name(f), "m", k, &taken);
        taken.push(n.clone());
        mor[f.0] = n;
    }
    let id = |s: &str| Ident::new(s);
    let arrows = c
        .morphisms()
        .filter(|&f| !c.is_identity(f))
        .map(|f| (id(&mor[f.0]), id(&objects[c.src(f).0]), id(&objects[c.tgt(f).0])))
        .collect();
    let mut composites = Vec::new();
    for g in c.morphisms().filter(|&g| !c.is_identity(g)) {
        for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
            if let Some(h) = c.try_compose(g, f) {
                composites.push((id(&mor[g.0]), id(&mor[f.0]), id(&mor[h.0])));
            }
        }
    }
    Item::Category(CategoryDecl {
        name: id(name),
        objects: objects.iter().map(|o| id(o)).collect(),
        arrows,
        composites,
    })
}

/// The set-functor as a `setfunctor` (or `presheaf`) item declared on
/// `on`. Element labels that are not identifiers are replaced by `e<k>`.
pub fn export_set_functor(name: &str, on: &str, f: &SetFunctor, presheaf: bool) -> Item {
    let c = &*f.dom;
    let labels: Vec<Vec<String>> = c
        .objects()
        .map(|a| relabel(f.labels[a.0].iter().cloned(), "e"))
        .collect();
    let id = |s: &str| Ident::new(s);
    let carriers = c
        .objects()
        .map(|a| (id(c.obj_name(a)), labels[a.0].iter().map(|l| id(l)).collect()))
        .collect();
    let maps = c
        .morphisms()
        .filter(|&m| !c.is_identity(m) && f.size(c.src(m)) > 0)
        .map(|m| {
            let (s, t) = (c.src(m), c.tgt(m));
            let pairs = (0..f.size(s))
                .map(|x| (id(&labels[s.0][x]), id(&labels[t.0][f.apply(m, x)])))
                .collect();
            (id(c.mor_name(m)), pairs)
        })
        .collect();
    Item::SetFunctor(SetFunctorDecl {
        name: id(name),
        presheaf,
        dom: id(on),
        carriers,
        maps,
    })
}
