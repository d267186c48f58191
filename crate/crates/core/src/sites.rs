//! Grothendieck topologies on finite categories, the sheaf condition and
//! sheafification.
//!
//! A covering family is a finite *set* of morphisms with a common target,
//! stored sorted. Presheaves are [`SetFunctor`]s on the opposite of the base
//! category; since opposites share morphism ids, restricting `x ∈ F(A)` along
//! `f: B → A` is `F.apply(f, x)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::budget;
use crate::category::{FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::functor::{enumerate_set_functors, nat_transforms_between, Functor, SetFunctor, SetNat};
use crate::limits::{self, check_lex_functor, has_all_finite_limits, Pullback};
use crate::union_find::UnionFind;
use crate::verdict::{Verdict, Witness};

pub type Family = Vec<MorId>;

/// For each member of a cover, its position in a coarser cover and the
/// factor through that member.
type Refinement = Vec<(usize, MorId)>;

fn normalize(mut fam: Family) -> Family {
    fam.sort();
    fam.dedup();
    fam
}

pub fn family_string(c: &FinCategory, fam: &[MorId]) -> String {
    let names: Vec<&str> = fam.iter().map(|&f| c.mor_name(f)).collect();
    format!("{{{}}}", names.join(", "))
}

/// A finite topological space: points plus open sets as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub points: Vec<String>,
    /// Sorted by cardinality, then by mask.
    pub opens: Vec<u64>,
}

impl Space {
    pub fn new(points: Vec<String>, opens: Vec<u64>) -> Result<Space> {
        if points.len() > 63 {
            return Err(Error::NotATopology("more than 63 points".into()));
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::NotATopology(format!("duplicate point `{p}`")));
            }
        }
        let full = (1u64 << points.len()) - 1;
        let mut opens: Vec<u64> = opens.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if opens.iter().any(|&u| u & !full != 0) {
            return Err(Error::NotATopology("open set mentions an unknown point".into()));
        }
        let set: HashSet<u64> = opens.iter().copied().collect();
        let space = |mask| {
            Space {
                points: points.clone(),
                opens: vec![],
            }
            .set_name(mask)
        };
        if !set.contains(&0) {
            return Err(Error::NotATopology("the empty set is not open".into()));
        }
        if !set.contains(&full) {
            return Err(Error::NotATopology("the whole space is not open".into()));
        }
        for &u in &opens {
            for &v in &opens {
                for (what, w) in [("union", u | v), ("intersection", u & v)] {
                    if !set.contains(&w) {
                        return Err(Error::NotATopology(format!(
                            "{what} of {} and {} is not open",
                            space(u),
                            space(v)
                        )));
                    }
                }
            }
        }
        opens.sort_by_key(|&u| (u.count_ones(), u));
        Ok(Space { points, opens })
    }

    /// Builds a space from open sets listed by point name.
    pub fn from_open_sets<S: AsRef<str>>(points: Vec<String>, opens: &[Vec<S>]) -> Result<Space> {
        let mut masks = Vec::new();
        for open in opens {
            let mut mask = 0u64;
            for p in open {
                let i = points
                    .iter()
                    .position(|q| q == p.as_ref())
                    .ok_or_else(|| Error::NotATopology(format!("unknown point `{}`", p.as_ref())))?;
                mask |= 1 << i;
            }
            masks.push(mask);
        }
        Space::new(points, masks)
    }

    pub fn discrete(n: usize) -> Space {
        let points = (0..n).map(point_name).collect();
        Space::new(points, (0..1u64 << n).collect()).unwrap()
    }

    /// Points `a`, `b` with opens `∅`, `{a}`, `{a, b}`.
    pub fn sierpinski() -> Space {
        Space::new(vec!["a".into(), "b".into()], vec![0, 1, 3]).unwrap()
    }

    pub fn point() -> Space {
        Space::new(vec!["a".into()], vec![0, 1]).unwrap()
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.points.len()) - 1
    }

    /// `U0` for the empty set, otherwise `U_` followed by the points.
    pub fn set_name(&self, mask: u64) -> String {
        if mask == 0 {
            return "U0".into();
        }
        let mut name = String::from("U");
        for (i, p) in self.points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                name.push('_');
                name.push_str(p);
            }
        }
        name
    }

    /// Every topology on `n` points (named `a`, `b`, …), by brute force.
    pub fn all_topologies(n: usize) -> Vec<Space> {
        let full = (1u64 << n) - 1;
        let middle: Vec<u64> = (1..full).collect();
        let mut out = Vec::new();
        for choice in 0u64..1 << middle.len() {
            let mut opens = vec![0, full];
            opens.extend(
                (0..middle.len())
                    .filter(|i| choice >> i & 1 == 1)
                    .map(|i| middle[i]),
            );
            let points = (0..n).map(point_name).collect();
            if let Ok(s) = Space::new(points, opens) {
                out.push(s);
            }
        }
        out
    }
}

fn point_name(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PullbackChoice {
    /// The first universal cone in search order.
    #[default]
    First,
    /// The last universal cone in search order.
    Last,
}

/// A finite category with covering families and a fixed table of chosen
/// pullbacks of every covering morphism along every morphism into its
/// target.
#[derive(Clone, Debug)]
pub struct Site {
    pub base: Arc<FinCategory>,
    pub op: Arc<FinCategory>,
    cov: Vec<Vec<Family>>,
    index: Vec<HashMap<Family, usize>>,
    pullbacks: HashMap<(MorId, MorId), Pullback>,
    pub choice: PullbackChoice,
}

impl Site {
    pub fn new(base: Arc<FinCategory>, cov: Vec<Vec<Family>>) -> Result<Site> {
        Site::with_choice(base, cov, PullbackChoice::First)
    }

    pub fn with_choice(
        base: Arc<FinCategory>,
        cov: Vec<Vec<Family>>,
        choice: PullbackChoice,
    ) -> Result<Site> {
        if cov.len() != base.num_objects() {
            return Err(Error::Malformed("one list of covers per object expected".into()));
        }
        let mut clean = Vec::with_capacity(cov.len());
        let mut index = Vec::with_capacity(cov.len());
        for (a, fams) in base.objects().zip(cov) {
            let mut list: Vec<Family> = Vec::new();
            let mut map = HashMap::new();
            for fam in fams {
                let fam = normalize(fam);
                if let Some(&f) = fam.iter().find(|&&f| base.tgt(f) != a) {
                    return Err(Error::Malformed(format!(
                        "`{}` in a covering family of `{}` has target `{}`",
                        base.mor_name(f),
                        base.obj_name(a),
                        base.obj_name(base.tgt(f))
                    )));
                }
                if !map.contains_key(&fam) {
                    map.insert(fam.clone(), list.len());
                    list.push(fam);
                }
            }
            clean.push(list);
            index.push(map);
        }
        let mut pullbacks = HashMap::new();
        for (a, fams) in base.objects().zip(&clean) {
            let members: BTreeSet<MorId> = fams.iter().flatten().copied().collect();
            for &f in &members {
                for &h in &base.into_object(a) {
                    let pb = match choice {
                        PullbackChoice::First => limits::find_pullback(&base, f, h)?,
                        PullbackChoice::Last => limits::all_pullbacks(&base, f, h)?.pop(),
                    };
                    let pb = pb.ok_or_else(|| Error::MissingPullback {
                        f: base.mor_name(f).into(),
                        g: base.mor_name(h).into(),
                    })?;
                    pullbacks.insert((f, h), pb);
                }
            }
        }
        let op = Arc::new(base.opposite());
        Ok(Site {
            base,
            op,
            cov: clean,
            index,
            pullbacks,
            choice,
        })
    }

    pub fn covers(&self, a: ObjId) -> &[Family] {
        &self.cov[a.0]
    }

    pub fn cover_index(&self, a: ObjId, fam: &[MorId]) -> Option<usize> {
        self.index[a.0].get(&normalize(fam.to_vec())).copied()
    }

    pub fn is_cover(&self, a: ObjId, fam: &[MorId]) -> bool {
        self.cover_index(a, fam).is_some()
    }

    /// Chosen pullback of a covering morphism `f` along `h`: `p1` lands in
    /// the source of `f`, `p2` in the source of `h`.
    pub fn pullback(&self, f: MorId, h: MorId) -> &Pullback {
        &self.pullbacks[&(f, h)]
    }

    /// The family `h*F` of second projections of the chosen pullbacks.
    pub fn pull_family(&self, fam: &[MorId], h: MorId) -> Family {
        normalize(fam.iter().map(|&f| self.pullback(f, h).p2).collect())
    }

    /// The coarsest topology: a family covers iff it contains a split
    /// epimorphism. In a poset that means it contains the identity.
    pub fn chaotic(base: Arc<FinCategory>) -> Result<Site> {
        let mut cov = Vec::new();
        for a in base.objects() {
            let into = base.into_object(a);
            if into.len() > 20 {
                return Err(Error::PreconditionFailed(format!(
                    "`{}` has too many incoming morphisms to tabulate its covers",
                    base.obj_name(a)
                )));
            }
            let split: Vec<bool> = into
                .iter()
                .map(|&g| {
                    base.hom(a, base.src(g))
                        .iter()
                        .any(|&s| base.compose(g, s) == base.id(a))
                })
                .collect();
            let mut fams = Vec::new();
            for mask in 0u32..1 << into.len() {
                budget::tick(1)?;
                if (0..into.len()).any(|i| mask >> i & 1 == 1 && split[i]) {
                    fams.push(
                        (0..into.len())
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| into[i])
                            .collect(),
                    );
                }
            }
            cov.push(fams);
        }
        Site::new(base, cov)
    }
}

/// The poset of open sets with `Cov(U)` all families of opens below `U`
/// whose union is `U`. Objects are named by [`Space::set_name`], inclusions
/// `i_<V>_to_<U>`.
pub fn open_set_site(space: &Space) -> Result<Site> {
    let names: Vec<String> = space.opens.iter().map(|&u| space.set_name(u)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let opens = &space.opens;
    let base = Arc::new(crate::fixtures::poset_named(
        &refs,
        |i, j| opens[i] & !opens[j] == 0,
        |v, u| format!("i_{v}_to_{u}"),
    ));
    let mut cov = Vec::new();
    for u in base.objects() {
        let below = base.into_object(u);
        if below.len() > 24 {
            return Err(Error::PreconditionFailed(
                "too many opens to tabulate covers".into(),
            ));
        }
        let mut fams = Vec::new();
        for mask in 0u32..1 << below.len() {
            budget::tick(1)?;
            let members: Family = (0..below.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| below[i])
                .collect();
            let union = members.iter().fold(0, |acc, &f| acc | opens[base.src(f).0]);
            if union == opens[u.0] {
                fams.push(members);
            }
        }
        cov.push(fams);
    }
    Site::new(base, cov)
}

/// Checks the isomorphism, pullback-stability, composition and
/// monotonicity axioms in that order.
pub fn validate_topology(site: &Site) -> Result<Verdict> {
    let c = &*site.base;
    let fail = |law: &str, a: ObjId, fam: &[MorId]| {
        Witness::new(law)
            .with("object", c.obj_name(a))
            .with("family", family_string(c, fam))
    };
    for f in c.morphisms() {
        if c.is_iso(f) && !site.is_cover(c.tgt(f), &[f]) {
            return Ok(Verdict::Fail(fail("isomorphism", c.tgt(f), &[f])));
        }
    }
    for a in c.objects() {
        for fam in site.covers(a) {
            for h in c.into_object(a) {
                budget::tick(1)?;
                let pulled = site.pull_family(fam, h);
                if !site.is_cover(c.src(h), &pulled) {
                    return Ok(Verdict::Fail(
                        fail("pullback-stability", a, fam)
                            .with("along", c.mor_name(h))
                            .with("pulled-back", family_string(c, &pulled)),
                    ));
                }
            }
        }
    }
    for a in c.objects() {
        for fam in site.covers(a) {
            let mut reachable: BTreeSet<Family> = BTreeSet::from([Vec::new()]);
            for &f in fam {
                let mut next = BTreeSet::new();
                for r in &reachable {
                    for sub in site.covers(c.src(f)) {
                        budget::tick(1)?;
                        let mut comp = r.clone();
                        comp.extend(sub.iter().map(|&g| c.compose(f, g)));
                        next.insert(normalize(comp));
                    }
                }
                reachable = next;
            }
            if let Some(bad) = reachable.iter().find(|r| !site.is_cover(a, r)) {
                return Ok(Verdict::Fail(
                    fail("composition", a, fam).with("composite", family_string(c, bad)),
                ));
            }
        }
    }
    for a in c.objects() {
        let into = c.into_object(a);
        if into.len() > 62 {
            return Err(Error::PreconditionFailed("too many incoming morphisms".into()));
        }
        // through[f] = members g of `into` that f factors through.
        let through: HashMap<MorId, u64> = into
            .iter()
            .map(|&f| {
                let mask = into
                    .iter()
                    .enumerate()
                    .filter(|&(_, &g)| c.factors_through(f, g))
                    .fold(0u64, |m, (i, _)| m | 1 << i);
                (f, mask)
            })
            .collect();
        for g in 0u64..1 << into.len() {
            budget::tick(1)?;
            let fam: Family = (0..into.len())
                .filter(|i| g >> i & 1 == 1)
                .map(|i| into[i])
                .collect();
            if site.is_cover(a, &fam) {
                continue;
            }
            if let Some(refining) = site
                .covers(a)
                .iter()
                .find(|f| f.iter().all(|m| through[m] & g != 0))
            {
                return Ok(Verdict::Fail(
                    fail("monotonicity", a, &fam).with("refined-by", family_string(c, refining)),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

fn require_presheaf(f: &SetFunctor, site: &Site) -> Result<()> {
    if *f.dom != *site.op {
        return Err(Error::PreconditionFailed(
            "presheaf is not defined on the opposite of the site's base".into(),
        ));
    }
    Ok(())
}

/// Every compatible family of elements of `f` over `fam`, in lexicographic
/// order: tuples `(x_i)` whose restrictions along each chosen pullback
/// `A_i ×_A A_j` agree.
pub fn compatible_families(f: &SetFunctor, site: &Site, fam: &[MorId]) -> Result<Vec<Vec<usize>>> {
    let c = &*site.base;
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(fam.len());
    fn go(
        f: &SetFunctor,
        site: &Site,
        c: &FinCategory,
        fam: &[MorId],
        tuple: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let i = tuple.len();
        if i == fam.len() {
            out.push(tuple.clone());
            return Ok(());
        }
        for x in 0..f.size(c.src(fam[i])) {
            budget::tick(1)?;
            tuple.push(x);
            let ok = (0..=i).all(|j| {
                let pb = site.pullback(fam[i], fam[j]);
                f.apply(pb.p1, x) == f.apply(pb.p2, tuple[j])
            });
            if ok {
                go(f, site, c, fam, tuple, out)?;
            }
            tuple.pop();
        }
        Ok(())
    }
    go(f, site, c, fam, &mut tuple, &mut out)?;
    Ok(out)
}

fn restrict_all(f: &SetFunctor, fam: &[MorId], x: usize) -> Vec<usize> {
    fam.iter().map(|&m| f.apply(m, x)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheafStatus {
    Sheaf,
    SeparatedOnly,
    Neither,
}

impl SheafStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SheafStatus::Sheaf => "sheaf",
            SheafStatus::SeparatedOnly => "separated-only",
            SheafStatus::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafVerdict {
    pub status: SheafStatus,
    pub counterexample: Option<Witness>,
}

fn separation_defect(f: &SetFunctor, site: &Site) -> Result<Option<Witness>> {
    let c = &*site.base;
    for a in c.objects() {
        for fam in site.covers(a) {
            let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
            for x in 0..f.size(a) {
                budget::tick(1)?;
                let image = restrict_all(f, fam, x);
                if let Some(&y) = seen.get(&image) {
                    return Ok(Some(
                        Witness::new("separation")
                            .with("object", c.obj_name(a))
                            .with("family", family_string(c, fam))
                            .with("first", f.label(a, y))
                            .with("second", f.label(a, x)),
                    ));
                }
                seen.insert(image, x);
            }
        }
    }
    Ok(None)
}

fn describe_tuple(f: &SetFunctor, c: &FinCategory, fam: &[MorId], t: &[usize]) -> String {
    let parts: Vec<String> = fam
        .iter()
        .zip(t)
        .map(|(&m, &x)| format!("{}={}", c.mor_name(m), f.label(c.src(m), x)))
        .collect();
    format!("[{}]", parts.join(", "))
}

pub fn check_sheaf(f: &SetFunctor, site: &Site) -> Result<SheafVerdict> {
    require_presheaf(f, site)?;
    if let Some(w) = separation_defect(f, site)? {
        return Ok(SheafVerdict {
            status: SheafStatus::Neither,
            counterexample: Some(w),
        });
    }
    let c = &*site.base;
    for a in c.objects() {
        for fam in site.covers(a) {
            let images: HashSet<Vec<usize>> = (0..f.size(a)).map(|x| restrict_all(f, fam, x)).collect();
            for t in compatible_families(f, site, fam)? {
                if !images.contains(&t) {
                    return Ok(SheafVerdict {
                        status: SheafStatus::SeparatedOnly,
                        counterexample: Some(
                            Witness::new("gluing")
                                .with("object", c.obj_name(a))
                                .with("family", family_string(c, fam))
                                .with("compatible", describe_tuple(f, c, fam, &t)),
                        ),
                    });
                }
            }
        }
    }
    Ok(SheafVerdict {
        status: SheafStatus::Sheaf,
        counterexample: None,
    })
}

pub fn check_separated(f: &SetFunctor, site: &Site) -> Result<Verdict> {
    require_presheaf(f, site)?;
    Ok(separation_defect(f, site)?.into())
}

/// Pass iff `psi` is lex and sends every covering family to a covering
/// family of the image object.
pub fn check_continuous(psi: &Functor, from: &Site, to: &Site) -> Result<Verdict> {
    if *psi.dom != *from.base || *psi.cod != *to.base {
        return Err(Error::PreconditionFailed(
            "functor does not run between the site bases".into(),
        ));
    }
    if let Verdict::Fail(w) = has_all_finite_limits(&psi.dom)? {
        return Err(Error::NotLex(w.to_string()));
    }
    if let Verdict::Fail(w) = check_lex_functor(psi)? {
        return Ok(Verdict::Fail(w));
    }
    let (c, d) = (&*from.base, &*to.base);
    for a in c.objects() {
        for fam in from.covers(a) {
            let image: Family = normalize(fam.iter().map(|&f| psi.mor(f)).collect());
            if !to.is_cover(psi.ob(a), &image) {
                return Ok(Verdict::Fail(
                    Witness::new("cover-preservation")
                        .with("object", c.obj_name(a))
                        .with("family", family_string(c, fam))
                        .with("image", family_string(d, &image)),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// One plus construction: `F⁺(U)` is the set of compatible families over
/// covers of `U`, identified when they agree on a common refining cover.
/// Returns `F⁺` and the unit `F ⇒ F⁺`.
pub fn plus_construction(f: &SetFunctor, site: &Site) -> Result<(SetFunctor, SetNat)> {
    require_presheaf(f, site)?;
    let c = &*site.base;
    // Elements per object: (cover index, compatible tuple).
    let mut elements: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for a in c.objects() {
        let covers = site.covers(a);
        let mut elems = Vec::new();
        for (k, fam) in covers.iter().enumerate() {
            for t in compatible_families(f, site, fam)? {
                elems.push((k, t));
            }
        }
        // refine[t][r] = for each member of cover t, a (position in r,
        // factor) with r_pos ∘ factor = member, when t refines r.
        let refine: Vec<Vec<Option<Refinement>>> = covers
            .iter()
            .map(|t| {
                covers
                    .iter()
                    .map(|r| {
                        t.iter()
                            .map(|&m| {
                                r.iter().enumerate().find_map(|(i, &g)| {
                                    c.hom(c.src(m), c.src(g))
                                        .iter()
                                        .find(|&&s| c.compose(g, s) == m)
                                        .map(|&s| (i, s))
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut uf = UnionFind::new(elems.len());
        let mut keys: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        for (e, (k, t)) in elems.iter().enumerate() {
            for (ti, row) in refine.iter().enumerate() {
                budget::tick(1)?;
                let Some(factors) = &row[*k] else { continue };
                let restricted: Vec<usize> = factors.iter().map(|&(i, s)| f.apply(s, t[i])).collect();
                match keys.entry((ti, restricted)) {
                    std::collections::hash_map::Entry::Occupied(o) => {
                        uf.union(*o.get(), e);
                    }
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(e);
                    }
                }
            }
        }
        let (count, class) = uf.classes();
        let mut rep = vec![usize::MAX; count];
        for (e, &k) in class.iter().enumerate() {
            if rep[k] == usize::MAX {
                rep[k] = e;
            }
        }
        elements.push(elems);
        classes.push(class);
        reps.push(rep);
    }
    let lookup: Vec<HashMap<(usize, Vec<usize>), usize>> = elements
        .iter()
        .map(|es| es.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    // Unit: x ↦ class of the identity-cover family (x).
    let mut unit = Vec::new();
    for a in c.objects() {
        let k = site.cover_index(a, &[c.id(a)]).ok_or_else(|| {
            Error::PreconditionFailed(format!("identity does not cover `{}`", c.obj_name(a)))
        })?;
        unit.push(
            (0..f.size(a))
                .map(|x| classes[a.0][lookup[a.0][&(k, vec![x])]])
                .collect::<Vec<_>>(),
        );
    }
    let mut action = Vec::with_capacity(c.num_morphisms());
    for h in c.morphisms() {
        let (v, u) = (c.src(h), c.tgt(h));
        let mut table = Vec::with_capacity(reps[u.0].len());
        for &e in &reps[u.0] {
            let (k, t) = &elements[u.0][e];
            let fam = &site.covers(u)[*k];
            let mut pulled: Vec<(MorId, usize)> = fam
                .iter()
                .zip(t)
                .map(|(&m, &x)| {
                    let pb = site.pullback(m, h);
                    (pb.p2, f.apply(pb.p1, x))
                })
                .collect();
            pulled.sort();
            pulled.dedup();
            let members: Family = pulled.iter().map(|&(m, _)| m).collect();
            let values: Vec<usize> = pulled.iter().map(|&(_, x)| x).collect();
            let bad = || {
                Error::PreconditionFailed(format!(
                    "restriction along `{}` leaves the covers; validate the topology first",
                    c.mor_name(h)
                ))
            };
            if normalize(members.clone()).len() != members.len() {
                return Err(bad());
            }
            let k2 = site.cover_index(v, &members).ok_or_else(bad)?;
            let e2 = lookup[v.0].get(&(k2, values)).ok_or_else(bad)?;
            table.push(classes[v.0][*e2]);
        }
        action.push(table);
    }
    let labels = c
        .objects()
        .map(|a| {
            let n = reps[a.0].len();
            let mut labels: Vec<Option<String>> = vec![None; n];
            for (x, &k) in unit[a.0].iter().enumerate() {
                if labels[k].is_none() {
                    labels[k] = Some(f.label(a, x).to_string());
                }
            }
            let mut used: HashSet<String> = labels.iter().flatten().cloned().collect();
            labels
                .into_iter()
                .enumerate()
                .map(|(k, l)| {
                    l.unwrap_or_else(|| {
                        let mut name = format!("+{k}");
                        while used.contains(&name) {
                            name.push('\'');
                        }
                        used.insert(name.clone());
                        name
                    })
                })
                .collect()
        })
        .collect();
    let plus = SetFunctor::new(site.op.clone(), labels, action)?;
    Ok((plus, SetNat { components: unit }))
}

#[derive(Clone, Debug)]
pub struct Sheafification {
    pub sheaf: SetFunctor,
    pub unit: SetNat,
}

/// The associated sheaf by the double plus construction.
pub fn sheafify(f: &SetFunctor, site: &Site) -> Result<Sheafification> {
    let (p1, u1) = plus_construction(f, site)?;
    let (p2, u2) = plus_construction(&p1, site)?;
    Ok(Sheafification {
        sheaf: p2,
        unit: u2.after(&u1),
    })
}

/// Every sheaf on the site with carriers of size at most `max`.
pub fn enumerate_sheaves(site: &Site, max: usize) -> Result<Vec<SetFunctor>> {
    let mut out = Vec::new();
    for f in enumerate_set_functors(&site.op, max)? {
        if check_sheaf(&f, site)?.status == SheafStatus::Sheaf {
            out.push(f);
        }
    }
    Ok(out)
}

/// Pass iff precomposition with the unit is a bijection
/// `Nat(aF, G) → Nat(F, G)` for every `G` in `sheaves`.
pub fn check_sheafification_universal(
    f: &SetFunctor,
    a: &Sheafification,
    sheaves: &[SetFunctor],
) -> Result<Verdict> {
    for (i, g) in sheaves.iter().enumerate() {
        let from_sheaf = nat_transforms_between(&a.sheaf, g)?;
        let from_f = nat_transforms_between(f, g)?;
        let mut images: Vec<SetNat> = from_sheaf.iter().map(|n| n.after(&a.unit)).collect();
        images.sort_by(|x, y| x.components.cmp(&y.components));
        images.dedup();
        if images.len() != from_sheaf.len() || images.len() != from_f.len() {
            return Ok(Verdict::Fail(
                Witness::new("sheafification-universality")
                    .with("sheaf-index", i.to_string())
                    .with("from-associated", from_sheaf.len().to_string())
                    .with("from-presheaf", from_f.len().to_string()),
            ));
        }
    }
    Ok(Verdict::Pass)
}
