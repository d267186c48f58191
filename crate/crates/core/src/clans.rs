//! Clans: a category with a terminal object and a class of display maps
//! closed under pullback and composition, containing the isomorphisms and
//! the terminal projections.
//!
//! The axioms read much like those of a Grothendieck topology. The example
//! below runs both validators on the open sets of the Sierpiński space,
//! where every morphism is a display map and the covers are the families
//! with union equal to their target:
//!
//! ```
//! use std::sync::Arc;
//! use guk_core::clans::{validate_clan, Clan};
//! use guk_core::sites::{open_set_site, validate_topology, Space};
//!
//! let site = open_set_site(&Space::sierpinski()).unwrap();
//! let clan = Clan::new(site.base.clone(), None, site.base.morphisms().collect()).unwrap();
//! let reports = [
//!     ("topology", validate_topology(&site).unwrap()),
//!     ("clan", validate_clan(&clan).unwrap()),
//! ];
//! for (what, verdict) in &reports {
//!     assert!(verdict.is_pass(), "{what}: {verdict:?}");
//! }
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::category::{FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::limits::{find_pullback, terminal_object};
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Debug)]
pub struct Clan {
    pub base: Arc<FinCategory>,
    pub terminal: ObjId,
    display: Vec<bool>,
}

impl Clan {
    /// `terminal` defaults to the first terminal object in canonical order.
    pub fn new(base: Arc<FinCategory>, terminal: Option<ObjId>, display: Vec<MorId>) -> Result<Clan> {
        let terminal = match terminal {
            Some(t) => {
                let is_terminal = base.objects().all(|a| base.hom(a, t).len() == 1);
                if !is_terminal {
                    return Err(Error::PreconditionFailed(format!(
                        "`{}` is not terminal",
                        base.obj_name(t)
                    )));
                }
                t
            }
            None => terminal_object(&base)?
                .ok_or_else(|| Error::PreconditionFailed("no terminal object".into()))?,
        };
        let mut mask = vec![false; base.num_morphisms()];
        for f in display {
            if f.0 >= mask.len() {
                return Err(Error::UnknownMorphism(f.to_string()));
            }
            mask[f.0] = true;
        }
        Ok(Clan {
            base,
            terminal,
            display: mask,
        })
    }

    pub fn is_display(&self, f: MorId) -> bool {
        self.display[f.0]
    }

    pub fn display_maps(&self) -> Vec<MorId> {
        self.base.morphisms().filter(|&f| self.display[f.0]).collect()
    }

    /// The terminal projection `!_a`.
    pub fn bang(&self, a: ObjId) -> MorId {
        self.base.hom(a, self.terminal)[0]
    }
}

/// Checks, in order: pullbacks of display maps exist and are display,
/// closure under composition, isomorphisms, terminal projections.
pub fn validate_clan(k: &Clan) -> Result<Verdict> {
    let c = &k.base;
    for d in k.display_maps() {
        for h in c.into_object(c.tgt(d)) {
            let pb = find_pullback(c, d, h)?.ok_or_else(|| Error::MissingPullback {
                f: c.mor_name(d).into(),
                g: c.mor_name(h).into(),
            })?;
            // p2 is the projection onto the source of h, parallel to d.
            if !k.is_display(pb.p2) {
                return Ok(Verdict::Fail(
                    Witness::new("pullback")
                        .with("display", c.mor_name(d))
                        .with("along", c.mor_name(h))
                        .with("projection", c.mor_name(pb.p2)),
                ));
            }
        }
    }
    for f in k.display_maps() {
        for g in k.display_maps() {
            if let Some(gf) = c.try_compose(g, f) {
                if !k.is_display(gf) {
                    return Ok(Verdict::Fail(
                        Witness::new("composition")
                            .with("first", c.mor_name(f))
                            .with("second", c.mor_name(g))
                            .with("composite", c.mor_name(gf)),
                    ));
                }
            }
        }
    }
    for f in c.morphisms() {
        if c.is_iso(f) && !k.is_display(f) {
            return Ok(Verdict::Fail(
                Witness::new("isomorphism").with("morphism", c.mor_name(f)),
            ));
        }
    }
    for a in c.objects() {
        let bang = k.bang(a);
        if !k.is_display(bang) {
            return Ok(Verdict::Fail(
                Witness::new("terminal-projection")
                    .with("object", c.obj_name(a))
                    .with("morphism", c.mor_name(bang)),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// The least display class containing `generators`, the isomorphisms and
/// the terminal projections, closed under composition and pullback.
pub fn display_closure(base: &Arc<FinCategory>, generators: &[MorId]) -> Result<Vec<MorId>> {
    let seed = Clan::new(base.clone(), None, Vec::new())?;
    let c = &**base;
    let mut set: BTreeSet<MorId> = generators.iter().copied().collect();
    set.extend(c.morphisms().filter(|&f| c.is_iso(f)));
    set.extend(c.objects().map(|a| seed.bang(a)));
    loop {
        let mut next = set.clone();
        for &f in &set {
            for &g in &set {
                if let Some(gf) = c.try_compose(g, f) {
                    next.insert(gf);
                }
            }
            for h in c.into_object(c.tgt(f)) {
                let pb = find_pullback(base, f, h)?.ok_or_else(|| Error::MissingPullback {
                    f: c.mor_name(f).into(),
                    g: c.mor_name(h).into(),
                })?;
                next.insert(pb.p2);
            }
        }
        if next == set {
            return Ok(set.into_iter().collect());
        }
        set = next;
    }
}

/// For `r: A → B` with `!_B ∘ r = !_A`, pass iff the composite is display.
pub fn check_section_composite(k: &Clan, r: MorId) -> Result<Verdict> {
    let c = &k.base;
    let (a, b) = (c.src(r), c.tgt(r));
    let composite = c.compose(k.bang(b), r);
    if composite != k.bang(a) {
        return Err(Error::TriangleDoesNotCommute(c.mor_name(r).into()));
    }
    if k.is_display(composite) {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail(
            Witness::new("section-composite")
                .with("morphism", c.mor_name(r))
                .with("composite", c.mor_name(composite)),
        ))
    }
}
