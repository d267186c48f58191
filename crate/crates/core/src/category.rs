//! Explicitly tabulated finite categories.
//!
//! A [`FinCategory`] stores its full composition table. Objects and morphisms
//! are addressed by dense indices ([`ObjId`], [`MorId`]) in canonical order;
//! names are kept alongside for input and reporting.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::verdict::{Verdict, Witness};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A finite category given by its full composition table.
///
/// `comp[g * m + f]` holds `g ∘ f` when defined. The table is *data*: a value
/// of this type may violate the category laws, which is what
/// [`FinCategory::validate`] reports. Every other operation assumes a valid
/// category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<MorId>,
    comp: Vec<Option<MorId>>,
    homs: Vec<Vec<MorId>>,
}

impl FinCategory {
    /// Assembles a category from raw tables, checking only that indices are
    /// in range and names are unique. Category laws are not checked.
    pub fn from_tables(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<MorId>,
        comp: Vec<Option<MorId>>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = arrows.len();
        unique_names(objects.iter(), "object")?;
        unique_names(arrows.iter().map(|a| &a.name), "morphism")?;
        if identities.len() != n {
            return Err(Error::Malformed(format!(
                "{} identities for {} objects",
                identities.len(),
                n
            )));
        }
        if comp.len() != m * m {
            return Err(Error::Malformed(format!(
                "composition table has {} entries, expected {}",
                comp.len(),
                m * m
            )));
        }
        for a in &arrows {
            if a.src.0 >= n || a.tgt.0 >= n {
                return Err(Error::Malformed(format!(
                    "morphism `{}` has an out-of-range endpoint",
                    a.name
                )));
            }
        }
        if identities.iter().chain(comp.iter().flatten()).any(|f| f.0 >= m) {
            return Err(Error::Malformed("morphism index out of range".into()));
        }
        let mut homs = vec![Vec::new(); n * n];
        for (i, a) in arrows.iter().enumerate() {
            homs[a.src.0 * n + a.tgt.0].push(MorId(i));
        }
        Ok(FinCategory {
            objects,
            arrows,
            identities,
            comp,
            homs,
        })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl DoubleEndedIterator<Item = ObjId> + ExactSizeIterator + Clone {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl DoubleEndedIterator<Item = MorId> + ExactSizeIterator + Clone {
        (0..self.arrows.len()).map(MorId)
    }

    pub fn obj_name(&self, a: ObjId) -> &str {
        &self.objects[a.0]
    }

    pub fn mor_name(&self, f: MorId) -> &str {
        &self.arrows[f.0].name
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn obj(&self, name: &str) -> Result<ObjId> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(ObjId)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn mor(&self, name: &str) -> Result<MorId> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .map(MorId)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.arrows[f.0].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.arrows[f.0].tgt
    }

    pub fn id(&self, a: ObjId) -> MorId {
        self.identities[a.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    /// `g ∘ f` if the table defines it.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.comp[g.0 * self.arrows.len() + f.0]
    }

    /// `g ∘ f`.
    ///
    /// Panics if the pair is not composable; callers work with validated
    /// categories only.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "`{}` and `{}` are not composable",
                self.mor_name(g),
                self.mor_name(f)
            )
        })
    }

    /// Composes a path given in application order (first applied first).
    pub fn compose_path(&self, path: &[MorId]) -> MorId {
        let (first, rest) = path.split_first().expect("empty path");
        rest.iter().fold(*first, |acc, &g| self.compose(g, acc))
    }

    /// Morphisms `a → b` in canonical order.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a.0 * self.objects.len() + b.0]
    }

    /// Like [`FinCategory::hom`], rejecting unknown objects.
    pub fn hom_set(&self, a: ObjId, b: ObjId) -> Result<&[MorId]> {
        for x in [a, b] {
            if x.0 >= self.objects.len() {
                return Err(Error::UnknownObject(x.to_string()));
            }
        }
        Ok(self.hom(a, b))
    }

    /// All morphisms with target `a`, in canonical order.
    pub fn into_object(&self, a: ObjId) -> Vec<MorId> {
        self.morphisms().filter(|&f| self.tgt(f) == a).collect()
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.hom(self.tgt(f), self.src(f)).iter().copied().find(|&g| {
            self.compose(g, f) == self.id(self.src(f)) && self.compose(f, g) == self.id(self.tgt(f))
        })
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Does `f = g ∘ s` for some `s`?
    pub fn factors_through(&self, f: MorId, g: MorId) -> bool {
        self.tgt(f) == self.tgt(g)
            && self
                .hom(self.src(f), self.src(g))
                .iter()
                .any(|&s| self.compose(g, s) == f)
    }

    /// The opposite category: same ids, endpoints swapped, composition
    /// arguments flipped. Applying it twice gives back an identical table.
    pub fn opposite(&self) -> FinCategory {
        let m = self.arrows.len();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                src: a.tgt,
                tgt: a.src,
            })
            .collect();
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                comp[g * m + f] = self.comp[f * m + g];
            }
        }
        FinCategory::from_tables(self.objects.clone(), arrows, self.identities.clone(), comp)
            .expect("opposite of a well-formed table is well-formed")
    }

    /// Returns a copy with one composition-table entry overwritten.
    pub fn with_composite(mut self, g: MorId, f: MorId, value: Option<MorId>) -> Self {
        let m = self.arrows.len();
        self.comp[g.0 * m + f.0] = value;
        self
    }

    /// Full subcategory on `objects` (kept in the given order), together
    /// with the morphism embedding into `self`.
    pub fn full_subcategory(&self, objects: &[ObjId]) -> (FinCategory, Vec<MorId>) {
        let index: HashMap<ObjId, usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let embed: Vec<MorId> = self
            .morphisms()
            .filter(|&f| index.contains_key(&self.src(f)) && index.contains_key(&self.tgt(f)))
            .collect();
        let back: HashMap<MorId, MorId> = embed.iter().enumerate().map(|(i, &f)| (f, MorId(i))).collect();
        let arrows = embed
            .iter()
            .map(|&f| Arrow {
                name: self.mor_name(f).to_string(),
                src: ObjId(index[&self.src(f)]),
                tgt: ObjId(index[&self.tgt(f)]),
            })
            .collect();
        let identities = objects.iter().map(|&o| back[&self.id(o)]).collect();
        let m = embed.len();
        let mut comp = vec![None; m * m];
        for (gi, &g) in embed.iter().enumerate() {
            for (fi, &f) in embed.iter().enumerate() {
                comp[gi * m + fi] = self.try_compose(g, f).map(|h| back[&h]);
            }
        }
        let names = objects.iter().map(|&o| self.obj_name(o).to_string()).collect();
        let sub = FinCategory::from_tables(names, arrows, identities, comp)
            .expect("full subcategory of a well-formed table");
        (sub, embed)
    }

    /// Checks identity typing, definedness of composition, the unit laws,
    /// typing of composites and associativity, in that order.
    pub fn validate(&self) -> Verdict {
        validate_category(self)
    }
}

fn unique_names<'a>(names: impl Iterator<Item = &'a String>, what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Malformed(format!("duplicate {what} name `{n}`")));
        }
    }
    Ok(())
}

/// Pass iff every category law holds; the witness names the first violated
/// law and the offending ids.
pub fn validate_category(c: &FinCategory) -> Verdict {
    let name = |f: MorId| c.mor_name(f).to_string();
    for a in c.objects() {
        let i = c.id(a);
        if c.src(i) != a || c.tgt(i) != a {
            return Verdict::Fail(
                Witness::new("identity-typing")
                    .with("object", c.obj_name(a))
                    .with("identity", name(i)),
            );
        }
    }
    for g in c.morphisms() {
        for f in c.morphisms() {
            let composable = c.tgt(f) == c.src(g);
            if composable != c.try_compose(g, f).is_some() {
                let law = if composable {
                    "composition-undefined"
                } else {
                    "composition-spurious"
                };
                return Verdict::Fail(Witness::new(law).with("g", name(g)).with("f", name(f)));
            }
        }
    }
    for f in c.morphisms() {
        let (a, b) = (c.src(f), c.tgt(f));
        if c.compose(c.id(b), f) != f {
            return Verdict::Fail(
                Witness::new("left-unit")
                    .with("g", name(c.id(b)))
                    .with("f", name(f)),
            );
        }
        if c.compose(f, c.id(a)) != f {
            return Verdict::Fail(
                Witness::new("right-unit")
                    .with("g", name(f))
                    .with("f", name(c.id(a))),
            );
        }
    }
    for g in c.morphisms() {
        for f in c.morphisms() {
            if let Some(h) = c.try_compose(g, f) {
                if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) {
                    return Verdict::Fail(
                        Witness::new("composite-typing")
                            .with("g", name(g))
                            .with("f", name(f))
                            .with("composite", name(h)),
                    );
                }
            }
        }
    }
    for f in c.morphisms() {
        for g in c.morphisms().filter(|&g| c.src(g) == c.tgt(f)) {
            let gf = c.compose(g, f);
            for h in c.morphisms().filter(|&h| c.src(h) == c.tgt(g)) {
                if c.compose(h, gf) != c.compose(c.compose(h, g), f) {
                    return Verdict::Fail(
                        Witness::new("associativity")
                            .with("h", name(h))
                            .with("g", name(g))
                            .with("f", name(f)),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// Incremental construction by name. Identities (`id_<object>`) and the unit
/// laws are filled in automatically; every other composite must be declared.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<(String, String, String)>,
    composites: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: impl Into<String>) -> Self {
        self.objects.push(name.into());
        self
    }

    pub fn objects<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.objects.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn arrow(mut self, name: impl Into<String>, src: impl Into<String>, tgt: impl Into<String>) -> Self {
        self.arrows.push((name.into(), src.into(), tgt.into()));
        self
    }

    /// Declares `g ∘ f = h`.
    pub fn compose(mut self, g: impl Into<String>, f: impl Into<String>, h: impl Into<String>) -> Self {
        self.composites.push((g.into(), f.into(), h.into()));
        self
    }

    pub fn build(self) -> Result<FinCategory> {
        let objects = self.objects;
        let obj = |n: &str| {
            objects
                .iter()
                .position(|o| o == n)
                .map(ObjId)
                .ok_or_else(|| Error::UnknownObject(n.to_string()))
        };
        let mut arrows: Vec<Arrow> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Arrow {
                name: format!("id_{o}"),
                src: ObjId(i),
                tgt: ObjId(i),
            })
            .collect();
        for (name, s, t) in &self.arrows {
            arrows.push(Arrow {
                name: name.clone(),
                src: obj(s)?,
                tgt: obj(t)?,
            });
        }
        let m = arrows.len();
        let mor = |n: &str| {
            arrows
                .iter()
                .position(|a| a.name == n)
                .map(MorId)
                .ok_or_else(|| Error::UnknownMorphism(n.to_string()))
        };
        let mut comp = vec![None; m * m];
        for (f, a) in arrows.iter().enumerate() {
            comp[a.tgt.0 * m + f] = Some(MorId(f));
            comp[f * m + a.src.0] = Some(MorId(f));
        }
        for (g, f, h) in &self.composites {
            let (g, f, h) = (mor(g)?, mor(f)?, mor(h)?);
            comp[g.0 * m + f.0] = Some(h);
        }
        let identities = (0..objects.len()).map(MorId).collect();
        FinCategory::from_tables(objects, arrows, identities, comp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn terminal_and_arrow_are_valid() {
        assert!(fixtures::terminal().validate().is_pass());
        assert!(fixtures::arrow().validate().is_pass());
    }

    #[test]
    fn broken_unit_law_is_flagged_at_that_entry() {
        let c = fixtures::arrow();
        let (a, id1) = (c.mor("a").unwrap(), c.mor("id_1").unwrap());
        let broken = c.with_composite(id1, a, Some(id1));
        let w = broken.validate().witness().cloned().expect("must fail");
        assert_eq!(w.law, "left-unit");
        assert_eq!(w.get("g"), Some("id_1"));
        assert_eq!(w.get("f"), Some("a"));
    }

    #[test]
    fn missing_composite_is_flagged() {
        let c = CategoryBuilder::new()
            .objects(["A", "B", "C"])
            .arrow("f", "A", "B")
            .arrow("g", "B", "C")
            .build()
            .unwrap();
        let w = c.validate().witness().cloned().unwrap();
        assert_eq!(w.law, "composition-undefined");
        assert_eq!((w.get("g"), w.get("f")), (Some("g"), Some("f")));
    }

    #[test]
    fn non_associative_table_is_flagged() {
        // Monoid {1, x, y} on one object with x·x = y, x·y = x, y·x = y, y·y = y.
        // (x·x)·y = y·y = y but x·(x·y) = x·x = y; (x·y)·x = x·x = y, x·(y·x) = x·y = x.
        let c = CategoryBuilder::new()
            .object("A")
            .arrow("x", "A", "A")
            .arrow("y", "A", "A")
            .compose("x", "x", "y")
            .compose("x", "y", "x")
            .compose("y", "x", "y")
            .compose("y", "y", "y")
            .build()
            .unwrap();
        assert_eq!(c.validate().witness().unwrap().law, "associativity");
    }

    #[test]
    fn hom_sets_of_the_arrow_category() {
        let c = fixtures::arrow();
        let (o0, o1) = (c.obj("0").unwrap(), c.obj("1").unwrap());
        assert_eq!(c.hom(o0, o1), &[c.mor("a").unwrap()]);
        assert!(c.hom(o1, o0).is_empty());
        assert!(c.hom_set(o0, ObjId(7)).is_err());
    }

    #[test]
    fn opposite_flips_endpoints() {
        let c = fixtures::arrow();
        let op = c.opposite();
        let a = op.mor("a").unwrap();
        assert_eq!(op.obj_name(op.src(a)), "1");
        assert_eq!(op.obj_name(op.tgt(a)), "0");
        assert!(op.validate().is_pass());
        assert_eq!(fixtures::terminal().opposite(), fixtures::terminal());
    }

    #[test]
    fn hom_sets_partition_morphisms() {
        for (_, c) in fixtures::corpus() {
            let total: usize = c
                .objects()
                .flat_map(|a| c.objects().map(move |b| (a, b)))
                .map(|(a, b)| c.hom(a, b).len())
                .sum();
            assert_eq!(total, c.num_morphisms());
        }
    }
}
