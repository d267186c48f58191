//! One function per subcommand. Each returns the outcome, the report body
//! and any caveats; errors become `error` reports in the driver.

use std::sync::Arc;

use guk_core::clans::{display_closure, validate_clan};
use guk_core::filtered::{
    filtered_diagrams_with_colimits, filtered_shape_corpus, fp_witness, is_directed_poset, is_filtered,
    DEFAULT_SHAPE_MORPHISMS,
};
use guk_core::limits::{
    find_colimit, find_limit, has_all_finite_limits, set_colimit, set_limit, FINITE_LIMIT_REDUCTION,
};
use guk_core::models::{duality_report, enumerate_lex_models, ShadowCheck};
use guk_core::sites::{
    check_continuous, check_separated, check_sheaf, check_sheafification_universal, enumerate_sheaves,
    family_string, sheafify, validate_topology, SheafStatus,
};
use guk_core::topos::{check_gamma_routes, gamma_is_limit_of_stalks, global_sections, stalk_named};
use guk_core::{Error as EngineError, FinCategory, SetFunctor, SetNat, Verdict};

use crate::document::{export_set_functor, morphism, object, Document, Value};
use crate::error::DslError;
use crate::report::{Node, Outcome};
use crate::syntax::{render_item, Ident};

pub type CommandResult = Result<(Outcome, Node, Vec<String>), DslError>;

fn flag(name: &str) -> Ident {
    Ident::new(name)
}

fn verdict_outcome(v: &Verdict) -> Outcome {
    if v.is_pass() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn with_verdict(body: Node, v: &Verdict) -> Node {
    match v {
        Verdict::Pass => body,
        Verdict::Fail(w) => body.with("counterexample", w),
    }
}

/// Carriers and non-identity maps of a set-valued functor.
fn set_functor_node(f: &SetFunctor) -> Node {
    let c = &*f.dom;
    let carriers = Node::Map(
        c.objects()
            .map(|a| {
                (
                    c.obj_name(a).to_string(),
                    Node::list(f.labels[a.0].iter().map(String::as_str)),
                )
            })
            .collect(),
    );
    let maps = Node::Map(
        c.morphisms()
            .filter(|&m| !c.is_identity(m))
            .map(|m| {
                let (s, t) = (c.src(m), c.tgt(m));
                let pairs =
                    (0..f.size(s)).map(|x| format!("{} -> {}", f.label(s, x), f.label(t, f.apply(m, x))));
                (c.mor_name(m).to_string(), Node::list(pairs))
            })
            .collect(),
    );
    Node::map().with("carriers", carriers).with("maps", maps)
}

fn nat_node(source: &SetFunctor, target: &SetFunctor, n: &SetNat) -> Node {
    let c = &*source.dom;
    Node::Map(
        c.objects()
            .map(|a| {
                let pairs = (0..source.size(a))
                    .map(|x| format!("{} -> {}", source.label(a, x), target.label(a, n.apply(a, x))));
                (c.obj_name(a).to_string(), Node::list(pairs))
            })
            .collect(),
    )
}

pub fn check(doc: &Document, item: Option<&str>) -> CommandResult {
    let entries: Vec<_> = match item {
        Some(name) => vec![doc.get(name).map_or_else(
            || {
                Err(DslError::UnresolvedReference {
                    kind: "item".into(),
                    name: name.into(),
                    at: Default::default(),
                })
            },
            Ok,
        )?],
        None => doc.entries().iter().collect(),
    };
    let mut rows = Vec::new();
    let mut overall = Verdict::Pass;
    for e in entries {
        let (verdict, summary) = match &e.value {
            Value::Category(c) => (
                Verdict::Pass,
                Node::map()
                    .with("objects", c.num_objects())
                    .with("morphisms", c.num_morphisms()),
            ),
            Value::Functor(f) => (
                Verdict::Pass,
                Node::map()
                    .with("domain-objects", f.dom.num_objects())
                    .with("codomain-objects", f.cod.num_objects()),
            ),
            Value::SetFunctor { functor, on, .. } => (
                Verdict::Pass,
                Node::map().with("on", on.as_str()).with(
                    "sizes",
                    Node::Map(
                        functor
                            .dom
                            .objects()
                            .map(|a| (functor.dom.obj_name(a).to_string(), functor.size(a).into()))
                            .collect(),
                    ),
                ),
            ),
            Value::Transformation { source, target, .. } => (
                Verdict::Pass,
                Node::map()
                    .with("source", source.as_str())
                    .with("target", target.as_str()),
            ),
            Value::Cocone { diagram, cocone } => {
                let apex = doc.functor(&flag(diagram))?.cod.obj_name(cocone.apex).to_string();
                (
                    Verdict::Pass,
                    Node::map().with("diagram", diagram.as_str()).with("apex", apex),
                )
            }
            Value::Space(s) => (
                Verdict::Pass,
                Node::map()
                    .with("points", s.points.len())
                    .with("opens", s.opens.len()),
            ),
            Value::Site(s) => (
                validate_topology(s)?,
                Node::map().with("objects", s.base.num_objects()).with(
                    "covers",
                    s.base.objects().map(|a| s.covers(a).len()).sum::<usize>(),
                ),
            ),
            Value::Clan(k) => (
                validate_clan(k)?,
                Node::map()
                    .with("terminal", k.base.obj_name(k.terminal))
                    .with("display", k.display_maps().len()),
            ),
            Value::Bundle(b) => (
                Verdict::Pass,
                Node::map()
                    .with("index-objects", b.index.num_objects())
                    .with("site-objects", b.site.num_objects()),
            ),
        };
        let row = Node::map()
            .with("item", e.name.as_str())
            .with("kind", e.kind)
            .with("verdict", verdict_outcome(&verdict).as_str())
            .with("summary", summary);
        rows.push(with_verdict(row, &verdict));
        if overall.is_pass() {
            if let Verdict::Fail(w) = verdict {
                overall = Verdict::Fail(w.with("item", &e.name));
            }
        }
    }
    Ok((
        verdict_outcome(&overall),
        Node::map().with("items", Node::List(rows)),
        vec![],
    ))
}

/// `check` on a document whose item failed structural validation.
pub fn check_failed_validation(item: &str, witness: &guk_core::Witness) -> CommandResult {
    let row = Node::map()
        .with("item", item)
        .with("verdict", "fail")
        .with("counterexample", witness);
    Ok((
        Outcome::Fail,
        Node::map().with("items", Node::list([row])),
        vec![],
    ))
}

pub fn limit(doc: &Document, diagram: &str, colimit: bool) -> CommandResult {
    let id = flag(diagram);
    let word = if colimit { "colimit" } else { "limit" };
    match doc.get(diagram).map(|e| &e.value) {
        Some(Value::Functor(d)) => {
            let (j, c) = (&*d.dom, &*d.cod);
            let found = if colimit {
                find_colimit(d)?.map(|k| (k.apex, k.legs))
            } else {
                find_limit(d)?.map(|k| (k.apex, k.legs))
            };
            let body = Node::map().with("diagram", diagram);
            match found {
                None => Ok((
                    Outcome::Fail,
                    body.with("counterexample", &guk_core::Witness::new(format!("no-{word}"))),
                    vec![],
                )),
                Some((apex, legs)) => {
                    let legs = Node::Map(
                        j.objects()
                            .map(|i| (j.obj_name(i).to_string(), Node::text(c.mor_name(legs[i.0]))))
                            .collect(),
                    );
                    Ok((
                        Outcome::Value,
                        body.with("apex", c.obj_name(apex)).with("legs", legs),
                        vec![],
                    ))
                }
            }
        }
        Some(Value::SetFunctor { functor: d, .. }) => {
            let j = &*d.dom;
            let (labels, legs): (Vec<String>, Vec<Vec<usize>>) = if colimit {
                let k = set_colimit(d)?;
                (k.labels, k.legs)
            } else {
                let k = set_limit(d)?;
                let legs = j.objects().map(|a| k.leg(a)).collect();
                (k.labels, legs)
            };
            let legs = Node::Map(
                j.objects()
                    .map(|a| {
                        let pairs: Vec<String> = if colimit {
                            (0..d.size(a))
                                .map(|x| format!("{} -> {}", d.label(a, x), labels[legs[a.0][x]]))
                                .collect()
                        } else {
                            (0..labels.len())
                                .map(|t| format!("{} -> {}", labels[t], d.label(a, legs[a.0][t])))
                                .collect()
                        };
                        (j.obj_name(a).to_string(), Node::list(pairs))
                    })
                    .collect(),
            );
            let body = Node::map()
                .with("diagram", diagram)
                .with("size", labels.len())
                .with("elements", Node::list(labels.iter().map(String::as_str)))
                .with("legs", legs);
            Ok((Outcome::Value, body, vec![]))
        }
        _ => Err(DslError::UnresolvedReference {
            kind: "diagram".into(),
            name: id.name,
            at: id.pos,
        }),
    }
}

pub fn filtered(doc: &Document, category: &str, directed: bool) -> CommandResult {
    let c = doc.category(&flag(category))?;
    let body = Node::map().with("category", category);
    if directed {
        let v = is_directed_poset(&c)?;
        return Ok((
            verdict_outcome(&v),
            with_verdict(body.with("property", "directed"), &v),
            vec![],
        ));
    }
    let check = is_filtered(&c);
    let mut body = body.with("property", "filtered");
    if let Some(w) = &check.witness {
        body = body
            .with("pair-cocones", w.cocones.len())
            .with("coequalizing-arrows", w.coequalizers.len());
    }
    Ok((
        verdict_outcome(&check.verdict),
        with_verdict(body, &check.verdict),
        vec![],
    ))
}

pub fn fp(doc: &Document, category: &str, obj: &str, cocones: &[String]) -> CommandResult {
    let c = doc.category(&flag(category))?;
    let a = object(&c, &flag(obj))?;
    let diagrams = if cocones.is_empty() {
        filtered_diagrams_with_colimits(&c, &filtered_shape_corpus(3, DEFAULT_SHAPE_MORPHISMS))?
    } else {
        let mut out = Vec::new();
        for k in cocones {
            let (diagram, cocone) = doc.cocone(&flag(k))?;
            let d = doc.functor(&flag(diagram))?;
            if *d.cod != *c {
                return Err(EngineError::PreconditionFailed(format!(
                    "diagram `{diagram}` does not land in `{category}`"
                ))
                .into());
            }
            let d = guk_core::Functor {
                cod: c.clone(),
                ..d.clone()
            };
            out.push((d, cocone.clone()));
        }
        out
    };
    let v = fp_witness(&c, a, &diagrams)?;
    let body = Node::map()
        .with("category", category)
        .with("object", obj)
        .with("diagrams", diagrams.len())
        .with("vacuous", v.vacuous)
        .with(
            "entries",
            Node::list(v.entries.iter().map(|e| verdict_outcome(e).as_str())),
        );
    let caveats = vec![v.caveat.to_string()];
    Ok((
        verdict_outcome(&v.overall),
        with_verdict(body, &v.overall),
        caveats,
    ))
}

pub fn models(doc: &Document, category: &str, max_size: usize, export: bool) -> CommandResult {
    let c = doc.category(&flag(category))?;
    let frag = enumerate_lex_models(&c, max_size)?;
    let names = frag.category().object_names().to_vec();
    let list = frag
        .models
        .iter()
        .zip(&names)
        .map(|(m, n)| set_functor_node(m).with_front("name", n.as_str()));
    let mut body = Node::map()
        .with("category", category)
        .with("max-size", max_size)
        .with("count", frag.models.len())
        .with("models", Node::list(list));
    if export {
        let text: Vec<String> = frag
            .models
            .iter()
            .zip(&names)
            .map(|(m, n)| render_item(&export_set_functor(n, category, m, false)))
            .collect();
        body = body.with("export", text.join("\n"));
    }
    Ok((Outcome::Value, body, vec![frag.caveat()]))
}

fn shadow_node(s: &ShadowCheck) -> Node {
    let evidence = Node::Map(
        s.evidence
            .iter()
            .map(|(k, v)| (k.clone(), Node::text(v)))
            .collect(),
    );
    with_verdict(
        Node::map()
            .with("verdict", verdict_outcome(&s.verdict).as_str())
            .with("evidence", evidence),
        &s.verdict,
    )
}

pub fn duality(doc: &Document, category: &str, max_size: usize) -> CommandResult {
    let c = doc.category(&flag(category))?;
    let r = duality_report(&c, max_size)?;
    let counts = r.epsilon_counts.iter().map(|h| {
        Node::map()
            .with("a", c.obj_name(h.a))
            .with("b", c.obj_name(h.b))
            .with("nat", h.nat_count)
            .with("hom", h.hom_count)
    });
    let body = Node::map()
        .with("category", category)
        .with("model-count", r.model_count)
        .with("epsilon", shadow_node(&r.epsilon))
        .with("epsilon-hom-counts", Node::list(counts))
        .with("hom-embedding", shadow_node(&r.hom_embedding))
        .with("conservative", shadow_node(&r.conservative))
        .with("dense", shadow_node(&r.dense));
    let outcome = if r.all_pass() {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok((outcome, body, r.caveats))
}

pub fn lex(doc: &Document, category: &str) -> CommandResult {
    let c = doc.category(&flag(category))?;
    let v = has_all_finite_limits(&c)?;
    let body = Node::map().with("category", category);
    Ok((
        verdict_outcome(&v),
        with_verdict(body, &v),
        vec![FINITE_LIMIT_REDUCTION.to_string()],
    ))
}

pub fn topology(doc: &Document, site: &str) -> CommandResult {
    let s = doc.site(&flag(site))?;
    let v = validate_topology(s)?;
    let c = &s.base;
    let covers = Node::Map(
        c.objects()
            .map(|a| {
                let fams = s.covers(a).iter().map(|f| family_string(c, f));
                (c.obj_name(a).to_string(), Node::list(fams))
            })
            .collect(),
    );
    let body = Node::map().with("site", site).with("covers", covers);
    Ok((verdict_outcome(&v), with_verdict(body, &v), vec![]))
}

pub fn sheaf(doc: &Document, site: &str, presheaf: &str, separated_only: bool) -> CommandResult {
    let s = doc.site(&flag(site))?;
    let (p, _) = doc.set_functor(&flag(presheaf))?;
    let body = Node::map().with("site", site).with("presheaf", presheaf);
    if separated_only {
        let v = check_separated(p, s)?;
        return Ok((verdict_outcome(&v), with_verdict(body, &v), vec![]));
    }
    let v = check_sheaf(p, s)?;
    let mut body = body.with("status", v.status.as_str());
    if let Some(w) = &v.counterexample {
        body = body.with("counterexample", w);
    }
    let outcome = if v.status == SheafStatus::Sheaf {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok((outcome, body, vec![]))
}

pub fn sheafify_cmd(
    doc: &Document,
    site: &str,
    presheaf: &str,
    universal_max: Option<usize>,
) -> CommandResult {
    let s = doc.site(&flag(site))?;
    let (p, _) = doc.set_functor(&flag(presheaf))?;
    let on = match &doc.get(presheaf).map(|e| &e.value) {
        Some(Value::SetFunctor { on, .. }) => on.clone(),
        _ => site.to_string(),
    };
    let a = sheafify(p, s)?;
    let status = check_sheaf(&a.sheaf, s)?;
    let bijective = s.op.objects().all(|x| {
        let mut img = a.unit.components[x.0].clone();
        img.sort();
        img.dedup();
        img.len() == p.size(x) && img.len() == a.sheaf.size(x)
    });
    let name = format!("{presheaf}_sheafified");
    let mut body = Node::map()
        .with("site", site)
        .with("presheaf", presheaf)
        .with("sheaf", set_functor_node(&a.sheaf))
        .with("unit", nat_node(p, &a.sheaf, &a.unit))
        .with("unit-bijective", bijective)
        .with("status", status.status.as_str());
    let mut verdict = match status.counterexample {
        Some(w) if status.status != SheafStatus::Sheaf => Verdict::Fail(w),
        _ => Verdict::Pass,
    };
    let mut caveats = Vec::new();
    if let Some(max) = universal_max {
        let sheaves = enumerate_sheaves(s, max)?;
        let u = check_sheafification_universal(p, &a, &sheaves)?;
        body = body.with("universality-sheaves", sheaves.len());
        caveats.push(format!(
            "universal property checked against sheaves with carriers <= {max}"
        ));
        if verdict.is_pass() {
            verdict = u;
        }
    }
    body = body.with(
        "export",
        render_item(&export_set_functor(&name, &on, &a.sheaf, true)),
    );
    let outcome = if verdict.is_pass() {
        Outcome::Value
    } else {
        Outcome::Fail
    };
    Ok((outcome, with_verdict(body, &verdict), caveats))
}

pub fn continuous(doc: &Document, functor: &str, from: &str, to: &str) -> CommandResult {
    let f = doc.functor(&flag(functor))?;
    let (s, t) = (doc.site(&flag(from))?, doc.site(&flag(to))?);
    if *f.dom != *s.base || *f.cod != *t.base {
        return Err(EngineError::PreconditionFailed(format!(
            "`{functor}` does not run from the base of `{from}` to the base of `{to}`"
        ))
        .into());
    }
    let f = guk_core::Functor {
        dom: s.base.clone(),
        cod: t.base.clone(),
        ..f.clone()
    };
    let v = check_continuous(&f, s, t)?;
    let body = Node::map()
        .with("functor", functor)
        .with("from", from)
        .with("to", to);
    Ok((
        verdict_outcome(&v),
        with_verdict(body, &v),
        vec![FINITE_LIMIT_REDUCTION.to_string()],
    ))
}

pub fn gamma(doc: &Document, bundle: &str) -> CommandResult {
    let b = doc.bundle(&flag(bundle))?;
    let g = global_sections(b)?;
    let routes = check_gamma_routes(b)?;
    let body = Node::map()
        .with("bundle", bundle)
        .with("sections", set_functor_node(&g))
        .with("routes-agree", routes.is_pass());
    let outcome = if routes.is_pass() {
        Outcome::Value
    } else {
        Outcome::Fail
    };
    Ok((outcome, with_verdict(body, &routes), vec![]))
}

pub fn stalk(doc: &Document, bundle: &str, at: &str) -> CommandResult {
    let b = doc.bundle(&flag(bundle))?;
    object(&b.site, &flag(at))?;
    let s = stalk_named(b, at)?;
    let body = Node::map()
        .with("bundle", bundle)
        .with("at", at)
        .with("stalk", set_functor_node(&s));
    Ok((Outcome::Value, body, vec![]))
}

pub fn gamma_limit(doc: &Document, bundle: &str) -> CommandResult {
    let b = doc.bundle(&flag(bundle))?;
    let v = gamma_is_limit_of_stalks(b)?;
    let body = Node::map().with("bundle", bundle);
    Ok((verdict_outcome(&v), with_verdict(body, &v), vec![]))
}

pub fn clan(doc: &Document, clan: &str) -> CommandResult {
    let k = doc.clan(&flag(clan))?;
    let v = validate_clan(k)?;
    let c = &k.base;
    let body = Node::map()
        .with("clan", clan)
        .with("terminal", c.obj_name(k.terminal))
        .with(
            "display",
            Node::list(k.display_maps().into_iter().map(|f| c.mor_name(f))),
        );
    Ok((verdict_outcome(&v), with_verdict(body, &v), vec![]))
}

pub fn clan_closure(doc: &Document, category: &str, generators: &[String]) -> CommandResult {
    let c: Arc<FinCategory> = doc.category(&flag(category))?;
    let gens = generators
        .iter()
        .map(|g| morphism(&c, &flag(g)))
        .collect::<Result<Vec<_>, _>>()?;
    let closure = display_closure(&c, &gens)?;
    let body = Node::map()
        .with("category", category)
        .with("generators", Node::list(generators.iter().map(String::as_str)))
        .with("size", closure.len())
        .with("display", Node::list(closure.into_iter().map(|f| c.mor_name(f))));
    Ok((Outcome::Value, body, vec![]))
}

trait Front {
    fn with_front(self, key: &str, value: impl Into<Node>) -> Node;
}

impl Front for Node {
    fn with_front(self, key: &str, value: impl Into<Node>) -> Node {
        match self {
            Node::Map(mut entries) => {
                entries.insert(0, (key.to_string(), value.into()));
                Node::Map(entries)
            }
            other => other,
        }
    }
}
