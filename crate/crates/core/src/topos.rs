//! Sheaves of models over a finite site: functors from a lex index category
//! into presheaves on the site, their global sections and their stalks at
//! the canonical points given by the site's objects.

use std::sync::Arc;

use crate::budget;
use crate::category::{FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::functor::{nat_transforms_between, validate_set_functor, validate_set_nat, SetFunctor, SetNat};
use crate::limits::{check_lex_set_functor, has_all_finite_limits, set_limit};
use crate::verdict::{Verdict, Witness};

/// A functor `index → [siteᵒᵖ, Set]` stored as one presheaf per index object
/// and one natural transformation per index morphism.
#[derive(Clone, Debug)]
pub struct SheafOfModels {
    pub index: Arc<FinCategory>,
    pub site: Arc<FinCategory>,
    pub site_op: Arc<FinCategory>,
    pub presheaves: Vec<SetFunctor>,
    pub maps: Vec<SetNat>,
}

impl SheafOfModels {
    /// Assembles and validates. Presheaves must be defined on `site_op`
    /// (structurally equal to the opposite of `site`).
    pub fn new(
        index: Arc<FinCategory>,
        site: Arc<FinCategory>,
        presheaves: Vec<SetFunctor>,
        maps: Vec<SetNat>,
    ) -> Result<(SheafOfModels, Verdict)> {
        if presheaves.len() != index.num_objects() || maps.len() != index.num_morphisms() {
            return Err(Error::Malformed(
                "bundle tables do not cover the index category".into(),
            ));
        }
        let site_op = Arc::new(site.opposite());
        if presheaves.iter().any(|p| *p.dom != *site_op) {
            return Err(Error::Malformed("component is not a presheaf on the site".into()));
        }
        let presheaves = presheaves
            .into_iter()
            .map(|p| SetFunctor {
                dom: site_op.clone(),
                ..p
            })
            .collect();
        let f = SheafOfModels {
            index,
            site,
            site_op,
            presheaves,
            maps,
        };
        let v = f.validate();
        Ok((f, v))
    }

    /// Component presheaves and transformations valid, identities sent to
    /// identities, composites to composites.
    pub fn validate(&self) -> Verdict {
        let c = &*self.index;
        for a in c.objects() {
            if let Verdict::Fail(w) = validate_set_functor(&self.presheaves[a.0]) {
                return Verdict::Fail(w.with("component", c.obj_name(a)));
            }
        }
        for u in c.morphisms() {
            let (p, q) = (&self.presheaves[c.src(u).0], &self.presheaves[c.tgt(u).0]);
            let shape_ok = self.maps[u.0].components.len() == self.site.num_objects()
                && self.site.objects().all(|x| {
                    let comp = &self.maps[u.0].components[x.0];
                    comp.len() == p.size(x) && comp.iter().all(|&y| y < q.size(x))
                });
            if !shape_ok {
                return Verdict::Fail(Witness::new("transformation-shape").with("morphism", c.mor_name(u)));
            }
            if let Verdict::Fail(w) = validate_set_nat(p, q, &self.maps[u.0]) {
                return Verdict::Fail(w.with("index-morphism", c.mor_name(u)));
            }
        }
        for a in c.objects() {
            if self.maps[c.id(a).0] != SetNat::identity(&self.presheaves[a.0]) {
                return Verdict::Fail(Witness::new("bundle-identity").with("object", c.obj_name(a)));
            }
        }
        for g in c.morphisms() {
            for f in c.morphisms() {
                if let Some(h) = c.try_compose(g, f) {
                    if self.maps[g.0].after(&self.maps[f.0]) != self.maps[h.0] {
                        return Verdict::Fail(
                            Witness::new("bundle-composition")
                                .with("first", c.mor_name(f))
                                .with("second", c.mor_name(g)),
                        );
                    }
                }
            }
        }
        Verdict::Pass
    }

    /// The bundle sending every index object to the terminal presheaf.
    pub fn terminal(index: Arc<FinCategory>, site: Arc<FinCategory>) -> SheafOfModels {
        let site_op = Arc::new(site.opposite());
        let one = SetFunctor::constant(site_op.clone(), 1);
        let id = SetNat::identity(&one);
        SheafOfModels {
            presheaves: vec![one; index.num_objects()],
            maps: vec![id; index.num_morphisms()],
            index,
            site,
            site_op,
        }
    }
}

fn tuple_label(p: &SetFunctor, t: &[usize]) -> String {
    let parts: Vec<&str> = p.dom.objects().zip(t).map(|(x, &e)| p.label(x, e)).collect();
    format!("({})", parts.join(","))
}

/// `Γ ∘ F` with `Γ(P)` the limit of `P` over the opposite of the site,
/// computed by tuple filtering. Elements are matching tuples, one entry per
/// site object.
pub fn global_sections(f: &SheafOfModels) -> Result<SetFunctor> {
    let c = &*f.index;
    let limits = f.presheaves.iter().map(set_limit).collect::<Result<Vec<_>>>()?;
    let labels = c
        .objects()
        .map(|a| {
            limits[a.0]
                .tuples
                .iter()
                .map(|t| tuple_label(&f.presheaves[a.0], t))
                .collect()
        })
        .collect();
    let action = c
        .morphisms()
        .map(|u| {
            let (s, t) = (c.src(u), c.tgt(u));
            limits[s.0]
                .tuples
                .iter()
                .map(|tuple| {
                    let image: Vec<usize> = f
                        .site
                        .objects()
                        .map(|x| f.maps[u.0].apply(x, tuple[x.0]))
                        .collect();
                    limits[t.0]
                        .position(&image)
                        .expect("natural maps preserve matching tuples")
                })
                .collect()
        })
        .collect();
    SetFunctor::new(f.index.clone(), labels, action)
}

/// `Γ(P)` computed as `Nat(1, P)`, returned as matching tuples in
/// lexicographic order.
pub fn sections_via_terminal(p: &SetFunctor) -> Result<Vec<Vec<usize>>> {
    let one = SetFunctor::constant(p.dom.clone(), 1);
    let mut out: Vec<Vec<usize>> = nat_transforms_between(&one, p)?
        .into_iter()
        .map(|n| n.components.iter().map(|c| c[0]).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Pass iff the tuple-filter limit and `Nat(1, −)` give identical sets of
/// sections for every component presheaf.
pub fn check_gamma_routes(f: &SheafOfModels) -> Result<Verdict> {
    for a in f.index.objects() {
        let p = &f.presheaves[a.0];
        let mut direct = set_limit(p)?.tuples;
        direct.sort();
        if direct != sections_via_terminal(p)? {
            return Ok(Verdict::Fail(
                Witness::new("gamma-routes").with("object", f.index.obj_name(a)),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// The stalk at the point of the site object `c`: evaluation at `c`.
pub fn stalk(f: &SheafOfModels, c: ObjId) -> Result<SetFunctor> {
    if c.0 >= f.site.num_objects() {
        return Err(Error::UnknownObject(c.to_string()));
    }
    let idx = &*f.index;
    let labels = idx
        .objects()
        .map(|a| f.presheaves[a.0].labels[c.0].clone())
        .collect();
    let action = idx
        .morphisms()
        .map(|u| f.maps[u.0].components[c.0].clone())
        .collect();
    SetFunctor::new(f.index.clone(), labels, action)
}

pub fn stalk_named(f: &SheafOfModels, c: &str) -> Result<SetFunctor> {
    stalk(f, f.site.obj(c)?)
}

/// Limit of the stalks over the opposite of the site, computed objectwise:
/// tuples `(x_c)` with `x_c = γ*(x_{c'})` for every `γ: c → c'`.
fn limit_of_stalks(f: &SheafOfModels) -> Result<Vec<Vec<Vec<usize>>>> {
    let d = &*f.site;
    let stalks = d.objects().map(|c| stalk(f, c)).collect::<Result<Vec<_>>>()?;
    let transitions: Vec<MorId> = d.morphisms().filter(|&g| !d.is_identity(g)).collect();
    let mut out = Vec::new();
    for a in f.index.objects() {
        let sizes: Vec<usize> = stalks.iter().map(|s| s.size(a)).collect();
        let mut tuples = Vec::new();
        if sizes.iter().all(|&n| n > 0) || sizes.is_empty() {
            let mut t = vec![0; sizes.len()];
            loop {
                budget::tick(1)?;
                // The transition for γ: c → c' maps the stalk at c' to the stalk at c.
                let p = &f.presheaves[a.0];
                if transitions
                    .iter()
                    .all(|&g| p.apply(g, t[d.tgt(g).0]) == t[d.src(g).0])
                {
                    tuples.push(t.clone());
                }
                let mut i = sizes.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    t[i] += 1;
                    if t[i] < sizes[i] {
                        break;
                    }
                    t[i] = 0;
                }
                if i == 0 && t.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
        out.push(tuples);
    }
    Ok(out)
}

/// Pass iff global sections are naturally in bijection with the limit of
/// the stalk diagram. The witness names the first index object or
/// morphism where the comparison fails.
pub fn gamma_is_limit_of_stalks(f: &SheafOfModels) -> Result<Verdict> {
    let gamma = global_sections(f)?;
    let limit = limit_of_stalks(f)?;
    let c = &*f.index;
    let gamma_limits = f.presheaves.iter().map(set_limit).collect::<Result<Vec<_>>>()?;
    for a in c.objects() {
        let mut ours = gamma_limits[a.0].tuples.clone();
        ours.sort();
        if ours != limit[a.0] || gamma.size(a) != limit[a.0].len() {
            return Ok(Verdict::Fail(
                Witness::new("gamma-limit")
                    .with("object", c.obj_name(a))
                    .with("gamma-count", gamma.size(a).to_string())
                    .with("limit-count", limit[a.0].len().to_string()),
            ));
        }
    }
    for u in c.morphisms() {
        let (s, t) = (c.src(u), c.tgt(u));
        for (x, tuple) in gamma_limits[s.0].tuples.iter().enumerate() {
            let via_stalks: Vec<usize> = f
                .site
                .objects()
                .map(|site_obj| f.maps[u.0].apply(site_obj, tuple[site_obj.0]))
                .collect();
            if gamma_limits[t.0].tuples[gamma.apply(u, x)] != via_stalks {
                return Ok(Verdict::Fail(
                    Witness::new("gamma-limit-naturality").with("morphism", c.mor_name(u)),
                ));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Pass iff global sections and every stalk are lex functors on the index
/// category.
pub fn check_lex_composite(f: &SheafOfModels) -> Result<Verdict> {
    if let Verdict::Fail(w) = has_all_finite_limits(&f.index)? {
        return Err(Error::NotLex(w.to_string()));
    }
    if let Verdict::Fail(w) = check_lex_set_functor(&global_sections(f)?)? {
        return Ok(Verdict::Fail(w.with("functor", "gamma")));
    }
    for c in f.site.objects() {
        if let Verdict::Fail(w) = check_lex_set_functor(&stalk(f, c)?)? {
            return Ok(Verdict::Fail(
                w.with("functor", format!("stalk:{}", f.site.obj_name(c))),
            ));
        }
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Presheaf on the arrow category with `P(1) = {x, y}`, `P(0) = {u}`.
    fn arrow_presheaf(op: &Arc<FinCategory>) -> SetFunctor {
        let labels = vec![vec!["u".to_string()], vec!["x".to_string(), "y".to_string()]];
        let a = op.mor("a").unwrap();
        let mut action = vec![vec![]; op.num_morphisms()];
        action[op.id(ObjId(0)).0] = vec![0];
        action[op.id(ObjId(1)).0] = vec![0, 1];
        action[a.0] = vec![0, 0];
        SetFunctor::new(op.clone(), labels, action).unwrap()
    }

    fn single(site: Arc<FinCategory>, p: SetFunctor) -> SheafOfModels {
        let index = Arc::new(fixtures::terminal());
        let id = SetNat::identity(&p);
        let (f, v) = SheafOfModels::new(index, site, vec![p], vec![id]).unwrap();
        assert!(v.is_pass());
        f
    }

    #[test]
    fn gamma_over_arrow_site() {
        let site = Arc::new(fixtures::arrow());
        let op = Arc::new(site.opposite());
        let f = single(site.clone(), arrow_presheaf(&op));
        let g = global_sections(&f).unwrap();
        assert_eq!(g.size(ObjId(0)), 2);
        assert!(check_gamma_routes(&f).unwrap().is_pass());
        assert!(gamma_is_limit_of_stalks(&f).unwrap().is_pass());
        assert_eq!(stalk(&f, ObjId(0)).unwrap().size(ObjId(0)), 1);
        assert_eq!(stalk(&f, ObjId(1)).unwrap().size(ObjId(0)), 2);
        // Over the terminal index, lex means singleton-valued.
        let v = check_lex_composite(&f).unwrap();
        assert_eq!(v.witness().unwrap().get("functor"), Some("gamma"));
    }

    #[test]
    fn terminal_bundle() {
        let index = Arc::new(fixtures::arrow());
        let site = Arc::new(fixtures::chain(3));
        let f = SheafOfModels::terminal(index, site.clone());
        assert!(f.validate().is_pass());
        let g = global_sections(&f).unwrap();
        assert!(g.sizes().iter().all(|&n| n == 1));
        for c in site.objects() {
            assert!(stalk(&f, c).unwrap().sizes().iter().all(|&n| n == 1));
        }
        assert!(gamma_is_limit_of_stalks(&f).unwrap().is_pass());
        assert!(check_lex_composite(&f).unwrap().is_pass());
        assert!(matches!(stalk(&f, ObjId(9)), Err(Error::UnknownObject(_))));
    }
}
