//! Functors between finite categories, set-valued functors (presheaves when
//! the domain is an opposite category) and natural transformations.

use std::sync::Arc;

use crate::budget;
use crate::category::{Arrow, FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::verdict::{Verdict, Witness};

/// A functor between tabulated categories, stored as object and morphism maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub dom: Arc<FinCategory>,
    pub cod: Arc<FinCategory>,
    pub omap: Vec<ObjId>,
    pub mmap: Vec<MorId>,
}

impl Functor {
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        omap: Vec<ObjId>,
        mmap: Vec<MorId>,
    ) -> Result<Self> {
        if omap.len() != dom.num_objects() || mmap.len() != dom.num_morphisms() {
            return Err(Error::Malformed("functor tables do not cover the domain".into()));
        }
        if omap.iter().any(|o| o.0 >= cod.num_objects()) || mmap.iter().any(|f| f.0 >= cod.num_morphisms()) {
            return Err(Error::Malformed("functor maps outside its codomain".into()));
        }
        Ok(Functor { dom, cod, omap, mmap })
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        Functor {
            omap: c.objects().collect(),
            mmap: c.morphisms().collect(),
            dom: c.clone(),
            cod: c,
        }
    }

    pub fn ob(&self, a: ObjId) -> ObjId {
        self.omap[a.0]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mmap[f.0]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Functor) -> Functor {
        Functor {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            omap: self.omap.iter().map(|&o| next.ob(o)).collect(),
            mmap: self.mmap.iter().map(|&f| next.mor(f)).collect(),
        }
    }

    /// The same tables read as a functor between opposite categories.
    pub fn opposite(&self) -> Functor {
        Functor {
            dom: Arc::new(self.dom.opposite()),
            cod: Arc::new(self.cod.opposite()),
            omap: self.omap.clone(),
            mmap: self.mmap.clone(),
        }
    }
}

pub fn validate_functor(fun: &Functor) -> Verdict {
    let (c, d) = (&*fun.dom, &*fun.cod);
    for f in c.morphisms() {
        let img = fun.mor(f);
        if d.src(img) != fun.ob(c.src(f)) || d.tgt(img) != fun.ob(c.tgt(f)) {
            return Verdict::Fail(
                Witness::new("endpoint-preservation")
                    .with("morphism", c.mor_name(f))
                    .with("image", d.mor_name(img)),
            );
        }
    }
    for a in c.objects() {
        if fun.mor(c.id(a)) != d.id(fun.ob(a)) {
            return Verdict::Fail(Witness::new("identity-preservation").with("object", c.obj_name(a)));
        }
    }
    for g in c.morphisms() {
        for f in c.morphisms().filter(|&f| c.tgt(f) == c.src(g)) {
            if fun.mor(c.compose(g, f)) != d.compose(fun.mor(g), fun.mor(f)) {
                return Verdict::Fail(
                    Witness::new("composition-preservation")
                        .with("g", c.mor_name(g))
                        .with("f", c.mor_name(f)),
                );
            }
        }
    }
    Verdict::Pass
}

/// A functor into finite sets.
///
/// Elements of the carrier at `a` are `0..size(a)` with display labels;
/// `action[f][x]` is the image of `x` under the function assigned to `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor {
    pub dom: Arc<FinCategory>,
    pub labels: Vec<Vec<String>>,
    pub action: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(dom: Arc<FinCategory>, labels: Vec<Vec<String>>, action: Vec<Vec<usize>>) -> Result<Self> {
        if labels.len() != dom.num_objects() || action.len() != dom.num_morphisms() {
            return Err(Error::Malformed(
                "set-functor tables do not cover the domain".into(),
            ));
        }
        Ok(SetFunctor { dom, labels, action })
    }

    /// Carriers labelled `0..n`.
    pub fn from_sizes(dom: Arc<FinCategory>, sizes: &[usize], action: Vec<Vec<usize>>) -> Result<Self> {
        let labels = sizes
            .iter()
            .map(|&n| (0..n).map(|i| i.to_string()).collect())
            .collect();
        Self::new(dom, labels, action)
    }

    /// The constant functor at an `n`-element set.
    pub fn constant(dom: Arc<FinCategory>, n: usize) -> Self {
        let sizes = vec![n; dom.num_objects()];
        let action = vec![(0..n).collect(); dom.num_morphisms()];
        Self::from_sizes(dom, &sizes, action).unwrap()
    }

    pub fn size(&self, a: ObjId) -> usize {
        self.labels[a.0].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn label(&self, a: ObjId, x: usize) -> &str {
        &self.labels[a.0][x]
    }

    pub fn element(&self, a: ObjId, label: &str) -> Option<usize> {
        self.labels[a.0].iter().position(|l| l == label)
    }

    pub fn apply(&self, f: MorId, x: usize) -> usize {
        self.action[f.0][x]
    }

    /// `self ∘ d` for a diagram `d` into the domain of `self`.
    pub fn precompose(&self, d: &Functor) -> SetFunctor {
        SetFunctor {
            dom: d.dom.clone(),
            labels: d.omap.iter().map(|&o| self.labels[o.0].clone()).collect(),
            action: d.mmap.iter().map(|&f| self.action[f.0].clone()).collect(),
        }
    }
}

fn same_domain(a: &FinCategory, b: &FinCategory) -> bool {
    std::ptr::eq(a, b) || a == b
}

pub fn validate_set_functor(fun: &SetFunctor) -> Verdict {
    let c = &*fun.dom;
    for f in c.morphisms() {
        let (s, t) = (c.src(f), c.tgt(f));
        let table = &fun.action[f.0];
        if table.len() != fun.size(s) || table.iter().any(|&y| y >= fun.size(t)) {
            return Verdict::Fail(Witness::new("totality").with("morphism", c.mor_name(f)));
        }
    }
    for a in c.objects() {
        let id = &fun.action[c.id(a).0];
        if id.iter().enumerate().any(|(x, &y)| x != y) {
            return Verdict::Fail(Witness::new("identity-action").with("object", c.obj_name(a)));
        }
    }
    for g in c.morphisms() {
        for f in c.morphisms().filter(|&f| c.tgt(f) == c.src(g)) {
            let gf = c.compose(g, f);
            for x in 0..fun.size(c.src(f)) {
                if fun.apply(gf, x) != fun.apply(g, fun.apply(f, x)) {
                    return Verdict::Fail(
                        Witness::new("composition-action")
                            .with("g", c.mor_name(g))
                            .with("f", c.mor_name(f))
                            .with("element", fun.label(c.src(f), x)),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// Natural transformation between two functors into a tabulated category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    pub source: Functor,
    pub target: Functor,
    pub components: Vec<MorId>,
}

pub fn validate_nat(alpha: &NatTransform) -> Verdict {
    let (f, g) = (&alpha.source, &alpha.target);
    if !same_domain(&f.dom, &g.dom) || !same_domain(&f.cod, &g.cod) {
        return Verdict::Fail(Witness::new("parallel-functors"));
    }
    let (c, d) = (&*f.dom, &*f.cod);
    for a in c.objects() {
        let k = alpha.components[a.0];
        if d.src(k) != f.ob(a) || d.tgt(k) != g.ob(a) {
            return Verdict::Fail(Witness::new("component-typing").with("object", c.obj_name(a)));
        }
    }
    for m in c.morphisms() {
        let (a, b) = (c.src(m), c.tgt(m));
        let lhs = d.compose(alpha.components[b.0], f.mor(m));
        let rhs = d.compose(g.mor(m), alpha.components[a.0]);
        if lhs != rhs {
            return Verdict::Fail(
                Witness::new("naturality")
                    .with("morphism", c.mor_name(m))
                    .with("from", c.obj_name(a))
                    .with("to", c.obj_name(b)),
            );
        }
    }
    Verdict::Pass
}

/// Natural transformation between set-valued functors: one function table
/// per object of the shared domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetNat {
    pub components: Vec<Vec<usize>>,
}

impl SetNat {
    pub fn identity(f: &SetFunctor) -> SetNat {
        SetNat {
            components: f.sizes().into_iter().map(|n| (0..n).collect()).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SetNat) -> SetNat {
        SetNat {
            components: first
                .components
                .iter()
                .zip(&self.components)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    pub fn apply(&self, a: ObjId, x: usize) -> usize {
        self.components[a.0][x]
    }

    pub fn is_invertible(&self, target: &SetFunctor) -> bool {
        self.components.iter().enumerate().all(|(a, comp)| {
            comp.len() == target.size(ObjId(a)) && {
                let mut seen = vec![false; comp.len()];
                comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            }
        })
    }
}

pub fn validate_set_nat(source: &SetFunctor, target: &SetFunctor, alpha: &SetNat) -> Verdict {
    if !same_domain(&source.dom, &target.dom) {
        return Verdict::Fail(Witness::new("parallel-functors"));
    }
    let c = &*source.dom;
    for a in c.objects() {
        let comp = &alpha.components[a.0];
        if comp.len() != source.size(a) || comp.iter().any(|&y| y >= target.size(a)) {
            return Verdict::Fail(Witness::new("component-totality").with("object", c.obj_name(a)));
        }
    }
    for f in c.morphisms() {
        let (a, b) = (c.src(f), c.tgt(f));
        for x in 0..source.size(a) {
            if alpha.apply(b, source.apply(f, x)) != target.apply(f, alpha.apply(a, x)) {
                return Verdict::Fail(
                    Witness::new("naturality")
                        .with("morphism", c.mor_name(f))
                        .with("from", c.obj_name(a))
                        .with("to", c.obj_name(b))
                        .with("element", source.label(a, x)),
                );
            }
        }
    }
    Verdict::Pass
}

/// `C(−, a)` as a functor on the opposite of `c`: the carrier at `b` is
/// `hom(b, a)` and a morphism acts by precomposition.
pub fn yoneda(c: &FinCategory, a: ObjId) -> Result<SetFunctor> {
    if a.0 >= c.num_objects() {
        return Err(Error::UnknownObject(a.to_string()));
    }
    let op = Arc::new(c.opposite());
    let labels = c
        .objects()
        .map(|b| c.hom(b, a).iter().map(|&h| c.mor_name(h).to_string()).collect())
        .collect();
    let action = c
        .morphisms()
        .map(|f| {
            // f: s → t in c acts as hom(t, a) → hom(s, a).
            let (s, t) = (c.src(f), c.tgt(f));
            c.hom(t, a)
                .iter()
                .map(|&h| position(c.hom(s, a), c.compose(h, f)))
                .collect()
        })
        .collect();
    SetFunctor::new(op, labels, action)
}

/// `C(a, −)`: the carrier at `b` is `hom(a, b)`, morphisms act by
/// postcomposition.
pub fn covariant_hom(c: &Arc<FinCategory>, a: ObjId) -> Result<SetFunctor> {
    if a.0 >= c.num_objects() {
        return Err(Error::UnknownObject(a.to_string()));
    }
    let labels = c
        .objects()
        .map(|b| c.hom(a, b).iter().map(|&h| c.mor_name(h).to_string()).collect())
        .collect();
    let action = c
        .morphisms()
        .map(|f| {
            let (s, t) = (c.src(f), c.tgt(f));
            c.hom(a, s)
                .iter()
                .map(|&h| position(c.hom(a, t), c.compose(f, h)))
                .collect()
        })
        .collect();
    SetFunctor::new(c.clone(), labels, action)
}

fn position(list: &[MorId], f: MorId) -> usize {
    list.iter().position(|&g| g == f).expect("hom-set lookup")
}

/// Pass iff every induced hom-map `hom(a, b) → hom(Fa, Fb)` is a bijection.
pub fn check_fully_faithful(fun: &Functor) -> Verdict {
    let (c, d) = (&*fun.dom, &*fun.cod);
    for a in c.objects() {
        for b in c.objects() {
            let source = c.hom(a, b);
            let target = d.hom(fun.ob(a), fun.ob(b));
            let mut image: Vec<MorId> = source.iter().map(|&f| fun.mor(f)).collect();
            image.sort();
            image.dedup();
            let reason = if image.len() < source.len() {
                Some("not-injective")
            } else if image.len() < target.len() {
                Some("not-surjective")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Verdict::Fail(
                    Witness::new("full-faithfulness")
                        .with("from", c.obj_name(a))
                        .with("to", c.obj_name(b))
                        .with("reason", reason)
                        .with("source-count", source.len().to_string())
                        .with("target-count", target.len().to_string()),
                );
            }
        }
    }
    Verdict::Pass
}

/// Every natural transformation `source ⇒ target`, in lexicographic order of
/// the flattened component tables.
pub fn nat_transforms_between(source: &SetFunctor, target: &SetFunctor) -> Result<Vec<SetNat>> {
    enumerate_nats(source, target, false, usize::MAX)
}

/// The first natural isomorphism `source ⇒ target`, if any.
pub fn find_nat_iso(source: &SetFunctor, target: &SetFunctor) -> Result<Option<SetNat>> {
    if source.sizes() != target.sizes() {
        return Ok(None);
    }
    Ok(enumerate_nats(source, target, true, 1)?.into_iter().next())
}

pub fn naturally_isomorphic(a: &SetFunctor, b: &SetFunctor) -> Result<bool> {
    Ok(find_nat_iso(a, b)?.is_some())
}

fn enumerate_nats(
    source: &SetFunctor,
    target: &SetFunctor,
    bijective: bool,
    limit: usize,
) -> Result<Vec<SetNat>> {
    if !same_domain(&source.dom, &target.dom) {
        return Err(Error::PreconditionFailed(
            "natural transformations need a shared domain".into(),
        ));
    }
    let c = &*source.dom;
    // One variable per (object, element), object-major.
    let mut offset = Vec::with_capacity(c.num_objects() + 1);
    let mut owner = Vec::new();
    offset.push(0);
    for a in c.objects() {
        owner.extend(std::iter::repeat_n(a, source.size(a)));
        offset.push(owner.len());
    }
    let var = |a: ObjId, x: usize| offset[a.0] + x;
    // Constraint (u, v, f): value[v] == target(f)(value[u]), checked once
    // both are assigned.
    let mut checks: Vec<Vec<(usize, usize, MorId)>> = vec![Vec::new(); owner.len()];
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        let (a, b) = (c.src(f), c.tgt(f));
        for x in 0..source.size(a) {
            let (u, v) = (var(a, x), var(b, source.apply(f, x)));
            checks[u.max(v)].push((u, v, f));
        }
    }
    struct Search<'a> {
        target: &'a SetFunctor,
        owner: Vec<ObjId>,
        offset: Vec<usize>,
        checks: Vec<Vec<(usize, usize, MorId)>>,
        bijective: bool,
        limit: usize,
        value: Vec<usize>,
        out: Vec<SetNat>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize) -> Result<()> {
            if self.out.len() >= self.limit {
                return Ok(());
            }
            if i == self.owner.len() {
                let components = (0..self.offset.len() - 1)
                    .map(|a| self.value[self.offset[a]..self.offset[a + 1]].to_vec())
                    .collect();
                self.out.push(SetNat { components });
                return Ok(());
            }
            let a = self.owner[i];
            for y in 0..self.target.size(a) {
                budget::tick(1)?;
                if self.bijective && self.value[self.offset[a.0]..i].contains(&y) {
                    continue;
                }
                self.value[i] = y;
                let ok = self.checks[i]
                    .iter()
                    .all(|&(u, v, f)| self.value[v] == self.target.apply(f, self.value[u]));
                if ok {
                    self.go(i + 1)?;
                }
            }
            Ok(())
        }
    }
    let n = owner.len();
    let mut s = Search {
        target,
        owner,
        offset,
        checks,
        bijective,
        limit,
        value: vec![0; n],
        out: Vec::new(),
    };
    s.go(0)?;
    Ok(s.out)
}

/// A finite full subcategory of a functor category, tabulated: objects are
/// the given set-functors, morphisms every natural transformation between
/// them.
#[derive(Clone, Debug)]
pub struct FunctorFragment {
    pub category: Arc<FinCategory>,
    pub functors: Vec<SetFunctor>,
    /// Natural transformation behind each morphism of `category`.
    pub transforms: Vec<SetNat>,
}

impl FunctorFragment {
    /// Tabulates `functors` (which must share a domain) under the given
    /// object names.
    pub fn tabulate(names: Vec<String>, functors: Vec<SetFunctor>) -> Result<Self> {
        let n = functors.len();
        let mut arrows = Vec::new();
        let mut transforms: Vec<SetNat> = Vec::new();
        let mut homs: Vec<Vec<usize>> = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, nat) in nat_transforms_between(&functors[i], &functors[j])?
                    .into_iter()
                    .enumerate()
                {
                    homs[i * n + j].push(arrows.len());
                    arrows.push(Arrow {
                        name: format!("{}_{}_{}", names[i], names[j], k),
                        src: ObjId(i),
                        tgt: ObjId(j),
                    });
                    transforms.push(nat);
                }
            }
        }
        let lookup = |i: usize, j: usize, nat: &SetNat| {
            homs[i * n + j]
                .iter()
                .copied()
                .find(|&k| &transforms[k] == nat)
                .map(MorId)
        };
        let mut identities = Vec::with_capacity(n);
        for (i, f) in functors.iter().enumerate() {
            identities.push(
                lookup(i, i, &SetNat::identity(f))
                    .ok_or_else(|| Error::Malformed("identity transformation missing".into()))?,
            );
        }
        let m = arrows.len();
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if arrows[f].tgt == arrows[g].src {
                    let h = transforms[g].after(&transforms[f]);
                    comp[g * m + f] = lookup(arrows[f].src.0, arrows[g].tgt.0, &h);
                }
            }
        }
        let category = FinCategory::from_tables(names, arrows, identities, comp)?;
        Ok(FunctorFragment {
            category: Arc::new(category),
            functors,
            transforms,
        })
    }

    /// The morphism of the fragment carrying `nat` from object `i` to `j`.
    pub fn morphism_for(&self, i: ObjId, j: ObjId, nat: &SetNat) -> Option<MorId> {
        self.category
            .hom(i, j)
            .iter()
            .copied()
            .find(|&k| &self.transforms[k.0] == nat)
    }
}

/// The Yoneda embedding `c → [cᵒᵖ, Set]` corestricted to the tabulated
/// fragment on the representables.
pub fn yoneda_embedding(c: &Arc<FinCategory>) -> Result<(FunctorFragment, Functor)> {
    let reps = c.objects().map(|a| yoneda(c, a)).collect::<Result<Vec<_>>>()?;
    // All representables share one opposite category.
    let op = reps.first().map(|r| r.dom.clone());
    let reps = reps
        .into_iter()
        .map(|mut r| {
            r.dom = op.clone().unwrap();
            r
        })
        .collect();
    let names = c.object_names().iter().map(|o| format!("y{o}")).collect();
    let frag = FunctorFragment::tabulate(names, reps)?;
    let mut mmap = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let (a, b) = (c.src(f), c.tgt(f));
        // y(f) postcomposes with f.
        let nat = SetNat {
            components: c
                .objects()
                .map(|x| {
                    c.hom(x, a)
                        .iter()
                        .map(|&h| position(c.hom(x, b), c.compose(f, h)))
                        .collect()
                })
                .collect(),
        };
        mmap.push(
            frag.morphism_for(a, b, &nat)
                .ok_or_else(|| Error::Malformed("y(f) is not natural".into()))?,
        );
    }
    let fun = Functor::new(c.clone(), frag.category.clone(), c.objects().collect(), mmap)?;
    Ok((frag, fun))
}

/// Every set-functor on `c` with carriers of size at most `max`, in
/// canonical order (carrier sizes lexicographic, then action tables).
pub fn enumerate_set_functors(c: &Arc<FinCategory>, max: usize) -> Result<Vec<SetFunctor>> {
    let mut out = Vec::new();
    let n = c.num_objects();
    let mut sizes = vec![0; n];
    loop {
        enumerate_actions(c, &sizes, &mut |f| {
            out.push(f);
            Ok(())
        })?;
        // Next size vector, last object fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if sizes[i] < max {
                sizes[i] += 1;
                sizes[i + 1..].iter_mut().for_each(|s| *s = 0);
                break;
            }
        }
    }
}

/// Calls `emit` with every functorial action on the given carrier sizes.
pub fn enumerate_actions(
    c: &Arc<FinCategory>,
    sizes: &[usize],
    emit: &mut dyn FnMut(SetFunctor) -> Result<()>,
) -> Result<()> {
    let free: Vec<MorId> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let mut action: Vec<Option<Vec<usize>>> = vec![None; c.num_morphisms()];
    for a in c.objects() {
        action[c.id(a).0] = Some((0..sizes[a.0]).collect());
    }
    fn consistent(c: &FinCategory, action: &[Option<Vec<usize>>], f: MorId) -> bool {
        // Every composition triple involving f whose tables are all present.
        for g in c.morphisms() {
            for (x, y) in [(g, f), (f, g)] {
                let Some(h) = c.try_compose(x, y) else { continue };
                if let (Some(tx), Some(ty), Some(th)) = (&action[x.0], &action[y.0], &action[h.0]) {
                    if ty.iter().zip(th).any(|(&v, &w)| tx[v] != w) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(
        c: &Arc<FinCategory>,
        sizes: &[usize],
        free: &[MorId],
        i: usize,
        action: &mut Vec<Option<Vec<usize>>>,
        emit: &mut dyn FnMut(SetFunctor) -> Result<()>,
    ) -> Result<()> {
        if i == free.len() {
            let labels = sizes
                .iter()
                .map(|&n| (0..n).map(|i| i.to_string()).collect())
                .collect();
            let table = action.iter().map(|t| t.clone().unwrap()).collect();
            return emit(SetFunctor::new(c.clone(), labels, table)?);
        }
        let f = free[i];
        let (m, n) = (sizes[c.src(f).0], sizes[c.tgt(f).0]);
        let count = n.checked_pow(m as u32).unwrap_or(usize::MAX);
        for code in 0..count {
            budget::tick(1)?;
            let mut table = vec![0; m];
            let mut k = code;
            for slot in table.iter_mut().rev() {
                *slot = k % n;
                k /= n;
            }
            action[f.0] = Some(table);
            if consistent(c, action, f) {
                go(c, sizes, free, i + 1, action, emit)?;
            }
        }
        action[f.0] = None;
        Ok(())
    }
    go(c, sizes, &free, 0, &mut action, emit)
}
