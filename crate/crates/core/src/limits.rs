//! Finite limits and colimits.
//!
//! In a tabulated category limits are found by enumerating every cone and
//! keeping the first one through which every other cone factors uniquely.
//! Universality is always established by that search, never assumed. In
//! finite sets limits are tuple filters and colimits are union-find
//! quotients. The words "projective limit", "left limit" and "limit" are
//! synonyms here.

use std::sync::Arc;

use crate::budget;
use crate::category::{CategoryBuilder, FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::functor::{Functor, SetFunctor};
use crate::union_find::UnionFind;
use crate::verdict::{Verdict, Witness};

/// Reported alongside lex-completeness checks.
pub const FINITE_LIMIT_REDUCTION: &str =
    "finite limits checked as terminal object + binary products + equalizers";

/// Legs `apex → D(j)`, one per shape object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// Legs `D(j) → apex`, one per shape object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cocone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// Every cone over `d` (a functor into its codomain), ordered by apex and
/// then lexicographically by legs.
pub fn all_cones(d: &Functor) -> Result<Vec<Cone>> {
    let c = &*d.cod;
    let mut out = Vec::new();
    for apex in c.objects() {
        cones_at(d, apex, &mut out)?;
    }
    Ok(out)
}

fn cones_at(d: &Functor, apex: ObjId, out: &mut Vec<Cone>) -> Result<()> {
    let (j, c) = (&*d.dom, &*d.cod);
    let n = j.num_objects();
    // Shape morphisms checked once their later endpoint has a leg.
    let mut checks: Vec<Vec<MorId>> = vec![Vec::new(); n];
    for u in j.morphisms().filter(|&u| !j.is_identity(u)) {
        let last = j.src(u).max(j.tgt(u));
        checks[last.0].push(u);
    }
    fn go(
        d: &Functor,
        c: &FinCategory,
        j: &FinCategory,
        apex: ObjId,
        checks: &[Vec<MorId>],
        legs: &mut Vec<MorId>,
        out: &mut Vec<Cone>,
    ) -> Result<()> {
        let k = legs.len();
        if k == j.num_objects() {
            out.push(Cone {
                apex,
                legs: legs.clone(),
            });
            return Ok(());
        }
        for &leg in c.hom(apex, d.ob(ObjId(k))) {
            budget::tick(1)?;
            legs.push(leg);
            let ok = checks[k]
                .iter()
                .all(|&u| c.compose(d.mor(u), legs[j.src(u).0]) == legs[j.tgt(u).0]);
            if ok {
                go(d, c, j, apex, checks, legs, out)?;
            }
            legs.pop();
        }
        Ok(())
    }
    go(d, c, &d.dom, apex, &checks, &mut Vec::with_capacity(n), out)
}

pub fn is_cone(d: &Functor, cone: &Cone) -> bool {
    let (j, c) = (&*d.dom, &*d.cod);
    cone.legs.len() == j.num_objects()
        && j.objects().all(|k| {
            let leg = cone.legs[k.0];
            c.src(leg) == cone.apex && c.tgt(leg) == d.ob(k)
        })
        && j.morphisms()
            .all(|u| c.compose(d.mor(u), cone.legs[j.src(u).0]) == cone.legs[j.tgt(u).0])
}

/// Morphisms `other.apex → cone.apex` commuting with the legs.
pub fn mediators(d: &Functor, cone: &Cone, other: &Cone) -> Vec<MorId> {
    let c = &*d.cod;
    c.hom(other.apex, cone.apex)
        .iter()
        .copied()
        .filter(|&m| {
            cone.legs
                .iter()
                .zip(&other.legs)
                .all(|(&l, &k)| c.compose(l, m) == k)
        })
        .collect()
}

fn universal_among(d: &Functor, cone: &Cone, cones: &[Cone]) -> Result<bool> {
    for other in cones {
        budget::tick(1)?;
        if mediators(d, cone, other).len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is `cone` a limit cone over `d`? Checked against every cone.
pub fn is_limit_cone(d: &Functor, cone: &Cone) -> Result<bool> {
    if !is_cone(d, cone) {
        return Ok(false);
    }
    universal_among(d, cone, &all_cones(d)?)
}

/// The first universal cone in canonical order, if any.
pub fn find_limit(d: &Functor) -> Result<Option<Cone>> {
    let cones = all_cones(d)?;
    for cone in &cones {
        if universal_among(d, cone, &cones)? {
            return Ok(Some(cone.clone()));
        }
    }
    Ok(None)
}

/// Every universal cone, in canonical order.
pub fn all_limit_cones(d: &Functor) -> Result<Vec<Cone>> {
    let cones = all_cones(d)?;
    let mut out = Vec::new();
    for cone in &cones {
        if universal_among(d, cone, &cones)? {
            out.push(cone.clone());
        }
    }
    Ok(out)
}

pub fn find_colimit(d: &Functor) -> Result<Option<Cocone>> {
    Ok(find_limit(&d.opposite())?.map(|c| Cocone {
        apex: c.apex,
        legs: c.legs,
    }))
}

pub fn all_colimit_cocones(d: &Functor) -> Result<Vec<Cocone>> {
    Ok(all_limit_cones(&d.opposite())?
        .into_iter()
        .map(|c| Cocone {
            apex: c.apex,
            legs: c.legs,
        })
        .collect())
}

pub fn is_colimit_cocone(d: &Functor, cocone: &Cocone) -> Result<bool> {
    is_limit_cone(
        &d.opposite(),
        &Cone {
            apex: cocone.apex,
            legs: cocone.legs.clone(),
        },
    )
}

fn diagram(shape: FinCategory, c: &Arc<FinCategory>, omap: Vec<ObjId>, mmap: Vec<MorId>) -> Functor {
    Functor::new(Arc::new(shape), c.clone(), omap, mmap).expect("shape diagram")
}

/// The empty diagram.
pub fn empty_diagram(c: &Arc<FinCategory>) -> Functor {
    diagram(crate::fixtures::empty(), c, vec![], vec![])
}

/// Discrete diagram on two objects.
pub fn pair_diagram(c: &Arc<FinCategory>, a: ObjId, b: ObjId) -> Functor {
    diagram(
        crate::fixtures::discrete(2),
        c,
        vec![a, b],
        vec![c.id(a), c.id(b)],
    )
}

/// Parallel pair `f, g: A → B`.
pub fn parallel_diagram(c: &Arc<FinCategory>, f: MorId, g: MorId) -> Functor {
    let (a, b) = (c.src(f), c.tgt(f));
    diagram(
        crate::fixtures::parallel_pair(),
        c,
        vec![a, b],
        vec![c.id(a), c.id(b), f, g],
    )
}

/// Cospan `A --f--> C <--g-- B`.
pub fn cospan_diagram(c: &Arc<FinCategory>, f: MorId, g: MorId) -> Functor {
    let (a, b, t) = (c.src(f), c.src(g), c.tgt(f));
    diagram(
        CategoryBuilder::new()
            .objects(["a", "b", "c"])
            .arrow("f", "a", "c")
            .arrow("g", "b", "c")
            .build()
            .unwrap(),
        c,
        vec![a, b, t],
        vec![c.id(a), c.id(b), c.id(t), f, g],
    )
}

/// Chosen pullback `P` of `f: A → C` and `g: B → C`, with projections
/// `p1: P → A`, `p2: P → B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub apex: ObjId,
    pub p1: MorId,
    pub p2: MorId,
}

pub fn find_pullback(c: &Arc<FinCategory>, f: MorId, g: MorId) -> Result<Option<Pullback>> {
    if c.tgt(f) != c.tgt(g) {
        return Err(Error::Malformed(format!(
            "`{}` and `{}` do not share a target",
            c.mor_name(f),
            c.mor_name(g)
        )));
    }
    Ok(find_limit(&cospan_diagram(c, f, g))?.map(|cone| Pullback {
        apex: cone.apex,
        p1: cone.legs[0],
        p2: cone.legs[1],
    }))
}

/// Every universal pullback cone of `f` and `g`.
pub fn all_pullbacks(c: &Arc<FinCategory>, f: MorId, g: MorId) -> Result<Vec<Pullback>> {
    Ok(all_limit_cones(&cospan_diagram(c, f, g))?
        .into_iter()
        .map(|cone| Pullback {
            apex: cone.apex,
            p1: cone.legs[0],
            p2: cone.legs[1],
        })
        .collect())
}

pub fn terminal_object(c: &Arc<FinCategory>) -> Result<Option<ObjId>> {
    Ok(find_limit(&empty_diagram(c))?.map(|cone| cone.apex))
}

/// One instance of the finite-limit reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitInstance {
    Terminal,
    Product(ObjId, ObjId),
    Equalizer(MorId, MorId),
}

impl LimitInstance {
    pub fn describe(&self, c: &FinCategory) -> Witness {
        match *self {
            LimitInstance::Terminal => Witness::new("terminal"),
            LimitInstance::Product(a, b) => Witness::new("product")
                .with("left", c.obj_name(a))
                .with("right", c.obj_name(b)),
            LimitInstance::Equalizer(f, g) => Witness::new("equalizer")
                .with("f", c.mor_name(f))
                .with("g", c.mor_name(g)),
        }
    }

    pub fn diagram(&self, c: &Arc<FinCategory>) -> Functor {
        match *self {
            LimitInstance::Terminal => empty_diagram(c),
            LimitInstance::Product(a, b) => pair_diagram(c, a, b),
            LimitInstance::Equalizer(f, g) => parallel_diagram(c, f, g),
        }
    }
}

/// Terminal object, products of every unordered pair (including squares)
/// and equalizers of every pair of distinct parallel morphisms.
pub fn lex_instances(c: &FinCategory) -> Vec<LimitInstance> {
    let mut out = vec![LimitInstance::Terminal];
    for a in c.objects() {
        for b in c.objects().filter(|&b| b >= a) {
            out.push(LimitInstance::Product(a, b));
        }
    }
    for f in c.morphisms() {
        for g in c.morphisms().filter(|&g| g > f) {
            if c.src(f) == c.src(g) && c.tgt(f) == c.tgt(g) {
                out.push(LimitInstance::Equalizer(f, g));
            }
        }
    }
    out
}

/// Pass iff every instance of [`lex_instances`] has a limit; the witness is
/// the first missing one.
pub fn has_all_finite_limits(c: &Arc<FinCategory>) -> Result<Verdict> {
    for inst in lex_instances(c) {
        if find_limit(&inst.diagram(c))?.is_none() {
            return Ok(Verdict::Fail(inst.describe(c).with("missing", "limit")));
        }
    }
    Ok(Verdict::Pass)
}

fn require_lex(c: &Arc<FinCategory>) -> Result<()> {
    match has_all_finite_limits(c)? {
        Verdict::Pass => Ok(()),
        Verdict::Fail(w) => Err(Error::PreconditionFailed(format!(
            "domain lacks a finite limit: {w}"
        ))),
    }
}

/// Pass iff the functor sends the chosen limit cone of every instance to a
/// limit cone of its codomain.
pub fn check_lex_functor(f: &Functor) -> Result<Verdict> {
    require_lex(&f.dom)?;
    for inst in lex_instances(&f.dom) {
        let d = inst.diagram(&f.dom);
        let cone = find_limit(&d)?.expect("lex domain");
        let image = d.then(f);
        let mapped = Cone {
            apex: f.ob(cone.apex),
            legs: cone.legs.iter().map(|&l| f.mor(l)).collect(),
        };
        if !is_limit_cone(&image, &mapped)? {
            return Ok(Verdict::Fail(
                inst.describe(&f.dom)
                    .with("image-apex", f.cod.obj_name(mapped.apex)),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// Set-valued version of [`check_lex_functor`]: the comparison map from the
/// image of the chosen apex to the limit in sets must be a bijection.
pub fn check_lex_set_functor(f: &SetFunctor) -> Result<Verdict> {
    require_lex(&f.dom)?;
    for inst in lex_instances(&f.dom) {
        let d = inst.diagram(&f.dom);
        let cone = find_limit(&d)?.expect("lex domain");
        if let Some(reason) = comparison_defect(f, &d, &cone)? {
            return Ok(Verdict::Fail(inst.describe(&f.dom).with("reason", reason)));
        }
    }
    Ok(Verdict::Pass)
}

/// Why `F(apex) → lim F∘d` fails to be a bijection, if it does.
pub fn comparison_defect(f: &SetFunctor, d: &Functor, cone: &Cone) -> Result<Option<&'static str>> {
    let lim = set_limit(&f.precompose(d))?;
    let mut hit = vec![false; lim.tuples.len()];
    for x in 0..f.size(cone.apex) {
        let tuple: Vec<usize> = cone.legs.iter().map(|&l| f.apply(l, x)).collect();
        let t = lim
            .position(&tuple)
            .expect("the image of a cone lands in the limit");
        if std::mem::replace(&mut hit[t], true) {
            return Ok(Some("comparison-not-injective"));
        }
    }
    if hit.iter().any(|h| !h) {
        return Ok(Some("comparison-not-surjective"));
    }
    Ok(None)
}

/// Limit of a set-valued diagram: compatible tuples, lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCone {
    pub labels: Vec<String>,
    pub tuples: Vec<Vec<usize>>,
}

impl SetCone {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }

    /// Projection to the `j`-th shape object.
    pub fn leg(&self, j: ObjId) -> Vec<usize> {
        self.tuples.iter().map(|t| t[j.0]).collect()
    }
}

pub fn set_limit(d: &SetFunctor) -> Result<SetCone> {
    let j = &*d.dom;
    let n = j.num_objects();
    let mut checks: Vec<Vec<MorId>> = vec![Vec::new(); n];
    for u in j.morphisms().filter(|&u| !j.is_identity(u)) {
        checks[j.src(u).max(j.tgt(u)).0].push(u);
    }
    fn go(
        d: &SetFunctor,
        j: &FinCategory,
        checks: &[Vec<MorId>],
        tuple: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let k = tuple.len();
        if k == j.num_objects() {
            out.push(tuple.clone());
            return Ok(());
        }
        for x in 0..d.size(ObjId(k)) {
            budget::tick(1)?;
            tuple.push(x);
            if checks[k]
                .iter()
                .all(|&u| d.apply(u, tuple[j.src(u).0]) == tuple[j.tgt(u).0])
            {
                go(d, j, checks, tuple, out)?;
            }
            tuple.pop();
        }
        Ok(())
    }
    let mut tuples = Vec::new();
    go(d, j, &checks, &mut Vec::with_capacity(n), &mut tuples)?;
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().enumerate().map(|(k, &x)| d.label(ObjId(k), x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(SetCone { labels, tuples })
}

/// Colimit of a set-valued diagram: the disjoint union of the carriers
/// modulo the generated equivalence. Classes are ordered by their smallest
/// member `(object, element)`, which is also the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCocone {
    pub labels: Vec<String>,
    pub representatives: Vec<(ObjId, usize)>,
    /// `legs[j][x]` is the class of `(j, x)`.
    pub legs: Vec<Vec<usize>>,
}

impl SetCocone {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub(crate) fn from_classes(d: &SetFunctor, offsets: &[usize], uf: &mut UnionFind) -> Self {
        let (count, class) = uf.classes();
        let mut representatives = vec![(ObjId(0), 0); count];
        let mut seen = vec![false; count];
        let mut legs = Vec::with_capacity(d.dom.num_objects());
        for a in d.dom.objects() {
            let mut leg = Vec::with_capacity(d.size(a));
            for x in 0..d.size(a) {
                let k = class[offsets[a.0] + x];
                if !std::mem::replace(&mut seen[k], true) {
                    representatives[k] = (a, x);
                }
                leg.push(k);
            }
            legs.push(leg);
        }
        let labels = representatives
            .iter()
            .map(|&(a, x)| format!("{}:{}", d.dom.obj_name(a), d.label(a, x)))
            .collect();
        SetCocone {
            labels,
            representatives,
            legs,
        }
    }
}

pub(crate) fn offsets(d: &SetFunctor) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(d.dom.num_objects() + 1);
    let mut total = 0;
    for a in d.dom.objects() {
        offsets.push(total);
        total += d.size(a);
    }
    offsets.push(total);
    offsets
}

pub fn set_colimit(d: &SetFunctor) -> Result<SetCocone> {
    let j = &*d.dom;
    let offsets = offsets(d);
    let mut uf = UnionFind::new(*offsets.last().unwrap());
    for u in j.morphisms().filter(|&u| !j.is_identity(u)) {
        let (a, b) = (j.src(u), j.tgt(u));
        for x in 0..d.size(a) {
            budget::tick(1)?;
            uf.union(offsets[a.0] + x, offsets[b.0] + d.apply(u, x));
        }
    }
    Ok(SetCocone::from_classes(d, &offsets, &mut uf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::functor::covariant_hom;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    #[test]
    fn terminal_of_the_arrow_category() {
        let c = arc(fixtures::arrow());
        assert_eq!(terminal_object(&c).unwrap(), Some(ObjId(1)));
        assert_eq!(terminal_object(&arc(fixtures::discrete(2))).unwrap(), None);
    }

    #[test]
    fn square_of_the_initial_object() {
        let c = arc(fixtures::arrow());
        let cone = find_limit(&pair_diagram(&c, ObjId(0), ObjId(0)))
            .unwrap()
            .unwrap();
        assert_eq!(cone.apex, ObjId(0));
        assert_eq!(cone.legs, vec![c.id(ObjId(0)), c.id(ObjId(0))]);
    }

    #[test]
    fn lex_completeness() {
        assert!(has_all_finite_limits(&arc(fixtures::arrow())).unwrap().is_pass());
        assert!(has_all_finite_limits(&arc(fixtures::terminal()))
            .unwrap()
            .is_pass());
        let w = has_all_finite_limits(&arc(fixtures::discrete(2))).unwrap();
        assert_eq!(w.witness().unwrap().law, "terminal");
        // The parallel pair has no terminal object either.
        assert!(!has_all_finite_limits(&arc(fixtures::parallel_pair()))
            .unwrap()
            .is_pass());
        assert!(has_all_finite_limits(&arc(fixtures::powerset2()))
            .unwrap()
            .is_pass());
        assert!(has_all_finite_limits(&arc(fixtures::chain(3))).unwrap().is_pass());
    }

    #[test]
    fn set_limit_examples() {
        let d2 = arc(fixtures::discrete(2));
        let prod = SetFunctor::from_sizes(d2, &[2, 3], vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(set_limit(&prod).unwrap().len(), 6);

        // Equalizer of id and the constant at 1 on a 3-element set.
        let pp = arc(fixtures::parallel_pair());
        let eq = SetFunctor::from_sizes(
            pp,
            &[3, 3],
            vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2], vec![1, 1, 1]],
        )
        .unwrap();
        let lim = set_limit(&eq).unwrap();
        assert_eq!(lim.tuples, vec![vec![1, 1]]);

        let empty = SetFunctor::from_sizes(arc(fixtures::empty()), &[], vec![]).unwrap();
        assert_eq!(set_limit(&empty).unwrap().labels, vec!["()".to_string()]);
    }

    #[test]
    fn set_colimit_examples() {
        let d2 = arc(fixtures::discrete(2));
        let coprod = SetFunctor::from_sizes(d2, &[2, 3], vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(set_colimit(&coprod).unwrap().len(), 5);

        // a: 0 → 1 merging a 2-element set into one point of a 3-element set.
        let arrow = arc(fixtures::arrow());
        let merge =
            SetFunctor::from_sizes(arrow, &[2, 3], vec![vec![0, 1], vec![0, 1, 2], vec![1, 1]]).unwrap();
        let colim = set_colimit(&merge).unwrap();
        assert_eq!(colim.len(), 3);
        assert_eq!(colim.legs, vec![vec![0, 0], vec![1, 0, 2]]);

        let cospan = arc(fixtures::cospan());
        let constant = SetFunctor::constant(cospan, 2);
        assert_eq!(set_colimit(&constant).unwrap().len(), 2);
    }

    #[test]
    fn representables_are_lex() {
        for (_, c) in fixtures::corpus() {
            let c = arc(c);
            if !has_all_finite_limits(&c).unwrap().is_pass() {
                assert!(matches!(
                    check_lex_set_functor(&SetFunctor::constant(c.clone(), 1)),
                    Err(Error::PreconditionFailed(_))
                ));
                continue;
            }
            for a in c.objects() {
                let h = covariant_hom(&c, a).unwrap();
                assert!(check_lex_set_functor(&h).unwrap().is_pass());
            }
            assert!(check_lex_set_functor(&SetFunctor::constant(c.clone(), 1))
                .unwrap()
                .is_pass());
        }
    }

    #[test]
    fn non_lex_set_functor_fails_at_the_square() {
        let c = arc(fixtures::arrow());
        let f = SetFunctor::from_sizes(c, &[2, 1], vec![vec![0, 1], vec![0], vec![0, 0]]).unwrap();
        let w = check_lex_set_functor(&f).unwrap().witness().cloned().unwrap();
        assert_eq!(w.law, "product");
        assert_eq!((w.get("left"), w.get("right")), (Some("0"), Some("0")));
        assert_eq!(w.get("reason"), Some("comparison-not-surjective"));
    }

    #[test]
    fn identity_functor_is_lex() {
        let c = arc(fixtures::powerset2());
        assert!(check_lex_functor(&Functor::identity(c)).unwrap().is_pass());
    }

    #[test]
    fn limit_cones_are_uniquely_isomorphic() {
        for (_, c) in fixtures::corpus() {
            let c = arc(c);
            for inst in lex_instances(&c) {
                let d = inst.diagram(&c);
                let cones = all_limit_cones(&d).unwrap();
                for x in &cones {
                    for y in &cones {
                        let m = mediators(&d, x, y);
                        assert_eq!(m.len(), 1);
                        assert!(c.is_iso(m[0]));
                    }
                }
            }
        }
    }

    #[test]
    fn pullbacks_in_the_powerset() {
        let c = arc(fixtures::powerset2());
        let (a_ab, b_ab) = (c.mor("a_ab").unwrap(), c.mor("b_ab").unwrap());
        let pb = find_pullback(&c, a_ab, b_ab).unwrap().unwrap();
        assert_eq!(c.obj_name(pb.apex), "e");
    }

    #[test]
    fn colimits_in_the_arrow_category() {
        let c = arc(fixtures::arrow());
        // Initial object is the colimit of the empty diagram.
        let init = find_colimit(&empty_diagram(&c)).unwrap().unwrap();
        assert_eq!(init.apex, ObjId(0));
        let coprod = find_colimit(&pair_diagram(&c, ObjId(0), ObjId(1)))
            .unwrap()
            .unwrap();
        assert_eq!(coprod.apex, ObjId(1));
        assert!(is_colimit_cocone(&pair_diagram(&c, ObjId(0), ObjId(1)), &coprod).unwrap());
    }
}
