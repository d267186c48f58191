//! Lex set-models of a finite lex category and fragment-restricted checks of
//! the duality between a lex category and its category of models.
//!
//! Only finite shadows are computed: the models with carriers up to a size
//! bound, the natural transformations between them, and the evaluation and
//! hom functors restricted to that fragment. Every report carries a caveat
//! saying so.

use std::sync::Arc;

use crate::category::{Arrow, FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::filtered::{self, filtered_colimit};
use crate::functor::{
    check_fully_faithful, covariant_hom, enumerate_actions, find_nat_iso, Functor, FunctorFragment,
    SetFunctor, SetNat,
};
use crate::limits::{self, comparison_defect, has_all_finite_limits, lex_instances, LimitInstance};
use crate::verdict::{Verdict, Witness};

pub const DEFAULT_MAX_SIZE: usize = 3;

/// Lex models with carriers of size at most `max_size`, one per natural
/// isomorphism class, tabulated with every natural transformation between
/// them.
#[derive(Clone, Debug)]
pub struct ModelFragment {
    pub base: Arc<FinCategory>,
    pub max_size: usize,
    pub models: Vec<SetFunctor>,
    pub fragment: FunctorFragment,
}

impl ModelFragment {
    pub fn category(&self) -> &Arc<FinCategory> {
        &self.fragment.category
    }

    pub fn caveat(&self) -> String {
        format!("fragment-restricted, maxSize = {}", self.max_size)
    }
}

fn require_lex(c: &Arc<FinCategory>) -> Result<()> {
    match has_all_finite_limits(c)? {
        Verdict::Pass => Ok(()),
        Verdict::Fail(w) => Err(Error::NotLex(w.to_string())),
    }
}

pub fn enumerate_lex_models(c: &Arc<FinCategory>, max_size: usize) -> Result<ModelFragment> {
    if max_size == 0 {
        return Err(Error::PreconditionFailed("maxSize must be at least 1".into()));
    }
    require_lex(c)?;
    let instances: Vec<(LimitInstance, Functor, limits::Cone)> = lex_instances(c)
        .into_iter()
        .map(|inst| {
            let d = inst.diagram(c);
            let cone = limits::find_limit(&d)?.expect("lex category");
            Ok((inst, d, cone))
        })
        .collect::<Result<_>>()?;
    // Cardinality constraints forced by terminal and product preservation.
    let size_ok = |sizes: &[usize]| {
        instances.iter().all(|(inst, _, cone)| match *inst {
            LimitInstance::Terminal => sizes[cone.apex.0] == 1,
            LimitInstance::Product(a, b) => sizes[cone.apex.0] == sizes[a.0] * sizes[b.0],
            LimitInstance::Equalizer(..) => true,
        })
    };
    let n = c.num_objects();
    let mut models: Vec<SetFunctor> = Vec::new();
    let mut sizes = vec![0; n];
    loop {
        if size_ok(&sizes) {
            let mut found = Vec::new();
            enumerate_actions(c, &sizes, &mut |f| {
                for (_, d, cone) in &instances {
                    if comparison_defect(&f, d, cone)?.is_some() {
                        return Ok(());
                    }
                }
                found.push(f);
                Ok(())
            })?;
            for f in found {
                let mut fresh = true;
                for m in &models {
                    if find_nat_iso(m, &f)?.is_some() {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    models.push(f);
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                let names = (0..models.len()).map(|k| format!("M{k}")).collect();
                let fragment = FunctorFragment::tabulate(names, models.clone())?;
                return Ok(ModelFragment {
                    base: c.clone(),
                    max_size,
                    models,
                    fragment,
                });
            }
            i -= 1;
            if sizes[i] < max_size {
                sizes[i] += 1;
                sizes[i + 1..].iter_mut().for_each(|s| *s = 0);
                break;
            }
        }
    }
}

/// Evaluation at `a` as a set-functor on the tabulated fragment.
pub fn evaluation_functor(frag: &ModelFragment, a: ObjId) -> SetFunctor {
    let cat = frag.category();
    let labels = frag.models.iter().map(|m| m.labels[a.0].clone()).collect();
    let action = cat
        .morphisms()
        .map(|k| frag.fragment.transforms[k.0].components[a.0].clone())
        .collect();
    SetFunctor::new(cat.clone(), labels, action).expect("evaluation tables")
}

/// Pass iff evaluation at `a` sends every terminal object, binary product
/// and equalizer existing in the fragment, and every colimit of a filtered
/// diagram into the fragment (shapes from the default corpus, at most three
/// objects), to the corresponding (co)limit of sets.
pub fn evaluation_preservation_check(frag: &ModelFragment, a: ObjId) -> Result<Verdict> {
    let cat = frag.category();
    let ev = evaluation_functor(frag, a);
    for inst in lex_instances(cat) {
        let d = inst.diagram(cat);
        if let Some(cone) = limits::find_limit(&d)? {
            if let Some(reason) = comparison_defect(&ev, &d, &cone)? {
                return Ok(Verdict::Fail(inst.describe(cat).with("reason", reason)));
            }
        }
    }
    let shapes = filtered::filtered_shape_corpus(3, filtered::DEFAULT_SHAPE_MORPHISMS);
    for (d, colim) in filtered::filtered_diagrams_with_colimits(cat, &shapes)? {
        let quotient = filtered_colimit(&ev.precompose(&d))?;
        let mut image: Vec<Option<usize>> = vec![None; quotient.len()];
        for j in d.dom.objects() {
            for x in 0..ev.size(d.ob(j)) {
                let k = quotient.legs[j.0][x];
                let y = ev.apply(colim.legs[j.0], x);
                match image[k] {
                    Some(prev) if prev != y => unreachable!("cocone legs are compatible"),
                    _ => image[k] = Some(y),
                }
            }
        }
        let mut hit: Vec<usize> = image.into_iter().map(Option::unwrap).collect();
        hit.sort();
        hit.dedup();
        if hit.len() != quotient.len() || hit.len() != ev.size(colim.apex) {
            let names: Vec<&str> = d.omap.iter().map(|&o| cat.obj_name(o)).collect();
            return Ok(Verdict::Fail(
                Witness::new("filtered-colimit")
                    .with("diagram", names.join(" "))
                    .with("apex", cat.obj_name(colim.apex)),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// Pass iff every morphism `f` whose post-composition maps
/// `hom(K, src f) → hom(K, tgt f)` are bijective for all `K` in
/// `collection` is an isomorphism.
pub fn check_conservative(c: &FinCategory, collection: &[ObjId]) -> Verdict {
    for f in c.morphisms() {
        let (a, b) = (c.src(f), c.tgt(f));
        let premise = collection.iter().all(|&k| {
            let mut image: Vec<MorId> = c.hom(k, a).iter().map(|&h| c.compose(f, h)).collect();
            image.sort();
            image.dedup();
            image.len() == c.hom(k, a).len() && image.len() == c.hom(k, b).len()
        });
        if premise && !c.is_iso(f) {
            return Verdict::Fail(
                Witness::new("conservativity")
                    .with("morphism", c.mor_name(f))
                    .with("from", c.obj_name(a))
                    .with("to", c.obj_name(b)),
            );
        }
    }
    Verdict::Pass
}

/// The comma category of `sub`-objects over `a`, its projection diagram into
/// `c` and the canonical cocone (whose legs are the structure maps).
pub fn comma_diagram(c: &Arc<FinCategory>, sub: &[ObjId], a: ObjId) -> Result<(Functor, limits::Cocone)> {
    let mut objects: Vec<(ObjId, MorId)> = Vec::new();
    for &k in sub {
        for &h in c.hom(k, a) {
            objects.push((k, h));
        }
    }
    let names: Vec<String> = objects
        .iter()
        .map(|&(k, h)| format!("{}:{}", c.obj_name(k), c.mor_name(h)))
        .collect();
    let mut arrows = Vec::new();
    let mut under = Vec::new();
    for (i, &(k, h)) in objects.iter().enumerate() {
        for (j, &(k2, h2)) in objects.iter().enumerate() {
            for &u in c.hom(k, k2) {
                if c.compose(h2, u) == h {
                    arrows.push(Arrow {
                        name: format!("{}@{}", c.mor_name(u), names[i]),
                        src: ObjId(i),
                        tgt: ObjId(j),
                    });
                    under.push(u);
                }
            }
        }
    }
    let m = arrows.len();
    let find = |s: ObjId, t: ObjId, u: MorId| {
        (0..m)
            .find(|&x| arrows[x].src == s && arrows[x].tgt == t && under[x] == u)
            .map(MorId)
    };
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(k, _))| find(ObjId(i), ObjId(i), c.id(k)).unwrap())
        .collect();
    let mut comp = vec![None; m * m];
    for g in 0..m {
        for f in 0..m {
            if arrows[f].tgt == arrows[g].src {
                comp[g * m + f] = find(arrows[f].src, arrows[g].tgt, c.compose(under[g], under[f]));
            }
        }
    }
    let shape = Arc::new(FinCategory::from_tables(names, arrows, identities, comp)?);
    let d = Functor::new(shape, c.clone(), objects.iter().map(|&(k, _)| k).collect(), under)?;
    let cocone = limits::Cocone {
        apex: a,
        legs: objects.iter().map(|&(_, h)| h).collect(),
    };
    Ok((d, cocone))
}

/// Pass iff every object is the colimit of its comma diagram over the full
/// subcategory on `sub`, via the canonical cocone. The chosen colimit of
/// the comma diagram must exist and mediate isomorphically onto the object.
pub fn check_dense(c: &Arc<FinCategory>, sub: &[ObjId]) -> Result<Verdict> {
    for a in c.objects() {
        let (d, canonical) = comma_diagram(c, sub, a)?;
        let fail = |reason: &str| {
            Ok(Verdict::Fail(
                Witness::new("density")
                    .with("object", c.obj_name(a))
                    .with("reason", reason),
            ))
        };
        let Some(colim) = limits::find_colimit(&d)? else {
            return fail("no-colimit");
        };
        let mediating: Vec<MorId> = c
            .hom(colim.apex, a)
            .iter()
            .copied()
            .filter(|&m| {
                colim
                    .legs
                    .iter()
                    .zip(&canonical.legs)
                    .all(|(&l, &k)| c.compose(m, l) == k)
            })
            .collect();
        match mediating.as_slice() {
            [m] if c.is_iso(*m) => {}
            [_] => return fail("comparison-not-iso"),
            _ => return fail("no-unique-comparison"),
        }
    }
    Ok(Verdict::Pass)
}

/// One check of a [`DualityReport`] with its supporting evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowCheck {
    pub verdict: Verdict,
    pub evidence: Vec<(String, String)>,
}

/// Hom-count row for the ε-shadow `A ↦ ev_A` read as a functor
/// `Cᵒᵖ → [Mod, Set]ᵒᵖ`: morphisms `A → B` there are natural
/// transformations `ev_B ⇒ ev_A`, to be matched with `hom_C(B, A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCount {
    pub a: ObjId,
    pub b: ObjId,
    pub nat_count: usize,
    pub hom_count: usize,
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub model_count: usize,
    pub epsilon: ShadowCheck,
    pub epsilon_counts: Vec<HomCount>,
    pub hom_embedding: ShadowCheck,
    pub conservative: ShadowCheck,
    pub dense: ShadowCheck,
    pub caveats: Vec<String>,
}

impl DualityReport {
    pub fn all_pass(&self) -> bool {
        [
            &self.epsilon,
            &self.hom_embedding,
            &self.conservative,
            &self.dense,
        ]
        .iter()
        .all(|c| c.verdict.is_pass())
    }
}

/// Models in the fragment isomorphic to a representable `C(a, −)`, with
/// the object each represents.
pub fn representable_models(frag: &ModelFragment) -> Result<(Vec<ObjId>, Vec<ObjId>)> {
    let c = &frag.base;
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for a in c.objects() {
        let h = covariant_hom(c, a)?;
        let mut hit = None;
        for (i, m) in frag.models.iter().enumerate() {
            let m = SetFunctor {
                dom: h.dom.clone(),
                ..m.clone()
            };
            if find_nat_iso(&h, &m)?.is_some() {
                hit = Some(ObjId(i));
                break;
            }
        }
        match hit {
            Some(i) if !found.contains(&i) => found.push(i),
            Some(_) => {}
            None => missing.push(a),
        }
    }
    Ok((found, missing))
}

pub fn duality_report(c: &Arc<FinCategory>, max_size: usize) -> Result<DualityReport> {
    let frag = enumerate_lex_models(c, max_size)?;
    let mut caveats = vec![
        frag.caveat(),
        "infinite sides of the duality are represented only through this fragment".to_string(),
    ];

    // ε-shadow: evaluation functors, tabulated.
    let evs: Vec<SetFunctor> = c.objects().map(|a| evaluation_functor(&frag, a)).collect();
    let ev_names = c.object_names().iter().map(|o| format!("ev_{o}")).collect();
    let ev_frag = FunctorFragment::tabulate(ev_names, evs)?;
    let mut mmap = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let nat = SetNat {
            components: frag.models.iter().map(|m| m.action[f.0].clone()).collect(),
        };
        mmap.push(
            ev_frag
                .morphism_for(c.src(f), c.tgt(f), &nat)
                .ok_or_else(|| Error::Malformed("evaluation along f is not natural".into()))?,
        );
    }
    let eps = Functor::new(c.clone(), ev_frag.category.clone(), c.objects().collect(), mmap)?;
    let mut epsilon_counts = Vec::new();
    for a in c.objects() {
        for b in c.objects() {
            epsilon_counts.push(HomCount {
                a,
                b,
                nat_count: ev_frag.category.hom(b, a).len(),
                hom_count: c.hom(b, a).len(),
            });
        }
    }
    let epsilon = ShadowCheck {
        verdict: check_fully_faithful(&eps),
        evidence: vec![("functor".into(), "A -> ev_A, C^op -> [Mod, Set]^op".into())],
    };

    // h-shadow: A ↦ C(A, −) from Cᵒᵖ into set-functors on C.
    let homs = c
        .objects()
        .map(|a| covariant_hom(c, a))
        .collect::<Result<Vec<_>>>()?;
    let h_names = c.object_names().iter().map(|o| format!("h_{o}")).collect();
    let h_frag = FunctorFragment::tabulate(h_names, homs)?;
    let op = Arc::new(c.opposite());
    let mut mmap = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        // f: B → A in C induces C(A, −) ⇒ C(B, −), h ↦ h ∘ f.
        let (b, a) = (c.src(f), c.tgt(f));
        let nat = SetNat {
            components: c
                .objects()
                .map(|x| {
                    c.hom(a, x)
                        .iter()
                        .map(|&h| {
                            let hf = c.compose(h, f);
                            c.hom(b, x).iter().position(|&k| k == hf).unwrap()
                        })
                        .collect()
                })
                .collect(),
        };
        mmap.push(
            h_frag
                .morphism_for(a, b, &nat)
                .ok_or_else(|| Error::Malformed("precomposition is not natural".into()))?,
        );
    }
    let h = Functor::new(op, h_frag.category.clone(), c.objects().collect(), mmap)?;
    let hom_embedding = ShadowCheck {
        verdict: check_fully_faithful(&h),
        evidence: vec![("functor".into(), "A -> C(A, -), C^op -> [C, Set]".into())],
    };

    // Representable models generate the fragment.
    let (generators, missing) = representable_models(&frag)?;
    if !missing.is_empty() {
        let names: Vec<&str> = missing.iter().map(|&a| c.obj_name(a)).collect();
        caveats.push(format!(
            "representables exceed maxSize and are absent: {}",
            names.join(" ")
        ));
    }
    let cat = frag.category();
    let gen_names: Vec<&str> = generators.iter().map(|&g| cat.obj_name(g)).collect();
    let evidence = vec![("generators".to_string(), gen_names.join(" "))];
    let conservative = ShadowCheck {
        verdict: check_conservative(cat, &generators),
        evidence: evidence.clone(),
    };
    let dense = ShadowCheck {
        verdict: check_dense(cat, &generators)?,
        evidence,
    };
    Ok(DualityReport {
        model_count: frag.models.len(),
        epsilon,
        epsilon_counts,
        hom_embedding,
        conservative,
        dense,
        caveats,
    })
}
