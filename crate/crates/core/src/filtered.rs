//! Filtered categories, directed posets, filtered colimits of sets and
//! witness-based finite-presentability checks.

use std::sync::Arc;

use crate::budget;
use crate::category::{CategoryBuilder, FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::functor::{covariant_hom, Functor, SetFunctor};
use crate::limits::{self, offsets, Cocone, SetCocone};
use crate::union_find::UnionFind;
use crate::verdict::{Verdict, Witness};

/// Caveat attached to every [`FpVerdict`].
pub const FP_CAVEAT: &str = "witness over supplied diagrams; not a proof of finite presentability";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCocone {
    pub i: ObjId,
    pub j: ObjId,
    pub k: ObjId,
    pub fi: MorId,
    pub fj: MorId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coequalizing {
    pub f: MorId,
    pub g: MorId,
    pub w: MorId,
}

/// Evidence that a shape is filtered: a cocone for every pair of objects
/// and a coequalizing arrow for every pair of distinct parallel arrows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterednessWitness {
    pub cocones: Vec<PairCocone>,
    pub coequalizers: Vec<Coequalizing>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCheck {
    pub verdict: Verdict,
    pub witness: Option<FilterednessWitness>,
}

pub fn is_filtered(j: &FinCategory) -> FilteredCheck {
    let fail = |w: Witness| FilteredCheck {
        verdict: Verdict::Fail(w),
        witness: None,
    };
    if j.num_objects() == 0 {
        return fail(Witness::new("nonempty"));
    }
    let mut witness = FilterednessWitness::default();
    for a in j.objects() {
        for b in j.objects().filter(|&b| b >= a) {
            let found = j.objects().find_map(|k| {
                let fi = *j.hom(a, k).first()?;
                let fj = *j.hom(b, k).first()?;
                Some(PairCocone {
                    i: a,
                    j: b,
                    k,
                    fi,
                    fj,
                })
            });
            match found {
                Some(c) => witness.cocones.push(c),
                None => {
                    return fail(
                        Witness::new("pair-cocone")
                            .with("i", j.obj_name(a))
                            .with("j", j.obj_name(b)),
                    )
                }
            }
        }
    }
    for f in j.morphisms() {
        for g in j.morphisms().filter(|&g| g > f) {
            if j.src(f) != j.src(g) || j.tgt(f) != j.tgt(g) {
                continue;
            }
            let t = j.tgt(f);
            let w = j.objects().find_map(|k| {
                j.hom(t, k)
                    .iter()
                    .copied()
                    .find(|&w| j.compose(w, f) == j.compose(w, g))
            });
            match w {
                Some(w) => witness.coequalizers.push(Coequalizing { f, g, w }),
                None => {
                    return fail(
                        Witness::new("coequalizing-arrow")
                            .with("f", j.mor_name(f))
                            .with("g", j.mor_name(g)),
                    )
                }
            }
        }
    }
    FilteredCheck {
        verdict: Verdict::Pass,
        witness: Some(witness),
    }
}

/// Requires a thin, antisymmetric category; pass iff it is nonempty and
/// every pair has an upper bound.
pub fn is_directed_poset(p: &FinCategory) -> Result<Verdict> {
    for a in p.objects() {
        for b in p.objects() {
            if p.hom(a, b).len() > 1 {
                return Err(Error::NotAPoset(format!(
                    "two arrows {} → {}",
                    p.obj_name(a),
                    p.obj_name(b)
                )));
            }
            if a != b && !p.hom(a, b).is_empty() && !p.hom(b, a).is_empty() {
                return Err(Error::NotAPoset(format!(
                    "{} and {} are distinct but equivalent",
                    p.obj_name(a),
                    p.obj_name(b)
                )));
            }
        }
    }
    if p.num_objects() == 0 {
        return Ok(Verdict::Fail(Witness::new("nonempty")));
    }
    for a in p.objects() {
        for b in p.objects().filter(|&b| b > a) {
            let bounded = p
                .objects()
                .any(|k| !p.hom(a, k).is_empty() && !p.hom(b, k).is_empty());
            if !bounded {
                return Ok(Verdict::Fail(
                    Witness::new("upper-bound")
                        .with("x", p.obj_name(a))
                        .with("y", p.obj_name(b)),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Colimit of a set-valued diagram over a filtered shape. Two elements are
/// identified iff they become equal at some common stage, which over a
/// filtered shape is already an equivalence relation.
pub fn filtered_colimit(d: &SetFunctor) -> Result<SetCocone> {
    let j = &*d.dom;
    if let Verdict::Fail(w) = is_filtered(j).verdict {
        return Err(Error::PreconditionFailed(format!("shape is not filtered: {w}")));
    }
    let offsets = offsets(d);
    let mut uf = UnionFind::new(*offsets.last().unwrap());
    for a in j.objects() {
        for b in j.objects().filter(|&b| b >= a) {
            for x in 0..d.size(a) {
                for y in 0..d.size(b) {
                    budget::tick(1)?;
                    let meet = j.objects().any(|k| {
                        j.hom(a, k)
                            .iter()
                            .any(|&u| j.hom(b, k).iter().any(|&v| d.apply(u, x) == d.apply(v, y)))
                    });
                    if meet {
                        uf.union(offsets[a.0] + x, offsets[b.0] + y);
                    }
                }
            }
        }
    }
    Ok(SetCocone::from_classes(d, &offsets, &mut uf))
}

/// Pass iff `C(a, −)` sends the colimit cocone `colim` of the filtered
/// diagram `d` to a colimit cocone of sets.
pub fn check_hom_preserves_filtered_colimit(
    c: &Arc<FinCategory>,
    a: ObjId,
    d: &Functor,
    colim: &Cocone,
) -> Result<Verdict> {
    if let Verdict::Fail(w) = is_filtered(&d.dom).verdict {
        return Err(Error::PreconditionFailed(format!("shape is not filtered: {w}")));
    }
    if !limits::is_colimit_cocone(d, colim)? {
        return Err(Error::PreconditionFailed(
            "supplied cocone is not a colimit".into(),
        ));
    }
    let hom = covariant_hom(c, a)?.precompose(d);
    let quotient = filtered_colimit(&hom)?;
    let target = c.hom(a, colim.apex);
    let mut image = vec![None; quotient.len()];
    for j in d.dom.objects() {
        for (x, &h) in c.hom(a, d.ob(j)).iter().enumerate() {
            let k = quotient.legs[j.0][x];
            let m = c.compose(colim.legs[j.0], h);
            match image[k] {
                None => image[k] = Some(m),
                Some(prev) if prev != m => unreachable!("cocone legs are compatible"),
                _ => {}
            }
        }
    }
    let mut hit: Vec<MorId> = image.iter().map(|m| m.unwrap()).collect();
    hit.sort();
    let distinct = {
        let mut h = hit.clone();
        h.dedup();
        h.len()
    };
    if distinct < hit.len() {
        return Ok(Verdict::Fail(
            Witness::new("hom-comparison")
                .with("object", c.obj_name(a))
                .with("reason", "not-injective"),
        ));
    }
    if distinct < target.len() {
        let missing = target.iter().find(|m| !hit.contains(m)).unwrap();
        return Ok(Verdict::Fail(
            Witness::new("hom-comparison")
                .with("object", c.obj_name(a))
                .with("reason", "not-surjective")
                .with("missing", c.mor_name(*missing)),
        ));
    }
    Ok(Verdict::Pass)
}

/// Aggregated hom-preservation evidence for one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpVerdict {
    pub object: ObjId,
    pub entries: Vec<Verdict>,
    pub overall: Verdict,
    /// Set when no diagram was supplied, making the pass vacuous.
    pub vacuous: bool,
    pub caveat: &'static str,
}

pub fn fp_witness(c: &Arc<FinCategory>, a: ObjId, diagrams: &[(Functor, Cocone)]) -> Result<FpVerdict> {
    let mut entries = Vec::with_capacity(diagrams.len());
    let mut overall = Verdict::Pass;
    for (i, (d, colim)) in diagrams.iter().enumerate() {
        let v = check_hom_preserves_filtered_colimit(c, a, d, colim)?;
        if let (Verdict::Pass, Verdict::Fail(w)) = (&overall, &v) {
            overall = Verdict::Fail(w.clone().with("diagram", i.to_string()));
        }
        entries.push(v);
    }
    Ok(FpVerdict {
        object: a,
        entries,
        overall,
        vacuous: diagrams.is_empty(),
        caveat: FP_CAVEAT,
    })
}

/// Every filtered diagram `shape → c` (over `shapes`) that has a colimit in
/// `c`, paired with its chosen colimit cocone.
pub fn filtered_diagrams_with_colimits(
    c: &Arc<FinCategory>,
    shapes: &[Arc<FinCategory>],
) -> Result<Vec<(Functor, Cocone)>> {
    let mut out = Vec::new();
    for shape in shapes {
        if !is_filtered(shape).verdict.is_pass() {
            continue;
        }
        for d in enumerate_functors(shape, c)? {
            if let Some(colim) = limits::find_colimit(&d)? {
                out.push((d, colim));
            }
        }
    }
    Ok(out)
}

/// Every functor `j → c`, ordered by object map then morphism map.
pub fn enumerate_functors(j: &Arc<FinCategory>, c: &Arc<FinCategory>) -> Result<Vec<Functor>> {
    let mut out = Vec::new();
    let n = j.num_objects();
    let free: Vec<MorId> = j.morphisms().filter(|&u| !j.is_identity(u)).collect();
    let mut omap = vec![ObjId(0); n];
    fn objects(
        j: &Arc<FinCategory>,
        c: &Arc<FinCategory>,
        free: &[MorId],
        k: usize,
        omap: &mut Vec<ObjId>,
        out: &mut Vec<Functor>,
    ) -> Result<()> {
        if k == omap.len() {
            let mut mmap: Vec<Option<MorId>> = vec![None; j.num_morphisms()];
            for a in j.objects() {
                mmap[j.id(a).0] = Some(c.id(omap[a.0]));
            }
            return morphisms(j, c, free, 0, omap, &mut mmap, out);
        }
        for o in c.objects() {
            budget::tick(1)?;
            omap[k] = o;
            objects(j, c, free, k + 1, omap, out)?;
        }
        Ok(())
    }
    fn morphisms(
        j: &Arc<FinCategory>,
        c: &Arc<FinCategory>,
        free: &[MorId],
        k: usize,
        omap: &[ObjId],
        mmap: &mut Vec<Option<MorId>>,
        out: &mut Vec<Functor>,
    ) -> Result<()> {
        if k == free.len() {
            let mm = mmap.iter().map(|m| m.unwrap()).collect();
            out.push(Functor::new(j.clone(), c.clone(), omap.to_vec(), mm)?);
            return Ok(());
        }
        let u = free[k];
        for &img in c.hom(omap[j.src(u).0], omap[j.tgt(u).0]) {
            budget::tick(1)?;
            mmap[u.0] = Some(img);
            let ok = j.morphisms().all(|v| {
                [(u, v), (v, u)].iter().all(|&(g, f)| match j.try_compose(g, f) {
                    Some(h) => match (mmap[g.0], mmap[f.0], mmap[h.0]) {
                        (Some(a), Some(b), Some(ab)) => c.compose(a, b) == ab,
                        _ => true,
                    },
                    None => true,
                })
            });
            if ok {
                morphisms(j, c, free, k + 1, omap, mmap, out)?;
            }
        }
        mmap[u.0] = None;
        Ok(())
    }
    objects(j, c, &free, 0, &mut omap, &mut out)?;
    Ok(out)
}

/// Partial orders on `n` points, one per isomorphism class.
pub fn posets_up_to_iso(n: usize) -> Vec<FinCategory> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                leq[i * n + j] = true;
            }
        }
        let transitive = (0..n)
            .all(|i| (0..n).all(|j| (0..n).all(|k| !(leq[i * n + j] && leq[j * n + k]) || leq[i * n + k])));
        if !transitive {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = vec![false; n * n];
                for i in 0..n {
                    for j in 0..n {
                        m[p[i] * n + p[j]] = leq[i * n + j];
                    }
                }
                m
            })
            .min()
            .unwrap_or_default();
        if seen.insert(canon) {
            let names: Vec<String> = (0..n).map(|i| format!("j{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            out.push(crate::fixtures::poset(&refs, |i, j| leq[i * n + j]));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub const DEFAULT_SHAPE_OBJECTS: usize = 4;
pub const DEFAULT_SHAPE_MORPHISMS: usize = 12;

/// Filtered shapes within the given bounds: every filtered poset up to
/// isomorphism, the idempotent monoid, and a parallel pair followed by a
/// coequalizing arrow.
pub fn filtered_shape_corpus(max_objects: usize, max_morphisms: usize) -> Vec<Arc<FinCategory>> {
    let mut out: Vec<FinCategory> = Vec::new();
    for n in 1..=max_objects {
        out.extend(posets_up_to_iso(n));
    }
    out.push(crate::fixtures::idempotent());
    out.push(
        CategoryBuilder::new()
            .objects(["A", "B", "C"])
            .arrow("f", "A", "B")
            .arrow("g", "A", "B")
            .arrow("h", "B", "C")
            .arrow("hf", "A", "C")
            .compose("h", "f", "hf")
            .compose("h", "g", "hf")
            .build()
            .unwrap(),
    );
    out.into_iter()
        .filter(|s| s.num_objects() <= max_objects && s.num_morphisms() <= max_morphisms)
        .filter(|s| is_filtered(s).verdict.is_pass())
        .map(Arc::new)
        .collect()
}
