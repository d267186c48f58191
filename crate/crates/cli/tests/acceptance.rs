//! Acceptance suite. Prints one `PASS` or `FAIL` line per criterion and
//! exits non-zero if any criterion fails. Every derived quantity is compared
//! against a brute-force oracle written here, independent of the engine code
//! path under test.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use guk_cli::document::Value;
use guk_cli::Document;
use guk_core::clans::{display_closure, validate_clan, Clan};
use guk_core::filtered::{filtered_colimit, filtered_shape_corpus, is_filtered, DEFAULT_SHAPE_MORPHISMS};
use guk_core::fixtures;
use guk_core::functor::enumerate_set_functors;
use guk_core::limits::{has_all_finite_limits, set_colimit, set_limit};
use guk_core::models::{check_conservative, duality_report, enumerate_lex_models};
use guk_core::sites::{
    check_sheaf, check_sheafification_universal, enumerate_sheaves, open_set_site, sheafify,
    validate_topology, SheafStatus, Site, Space,
};
use guk_core::topos::{check_gamma_routes, gamma_is_limit_of_stalks, global_sections, SheafOfModels};
use guk_core::{nat_transforms_between, yoneda, FinCategory, MorId, ObjId, SetFunctor, SetNat, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(out)
}

fn load(fixture: &str) -> Document {
    let text = std::fs::read_to_string(common::fixture_dir().join(fixture)).unwrap();
    guk_cli::parse(&text).unwrap_or_else(|e| panic!("{fixture}: {e}"))
}

fn site_of<'a>(doc: &'a Document, name: &str) -> &'a Site {
    match &doc.get(name).unwrap().value {
        Value::Site(s) => s,
        _ => panic!("{name} is not a site"),
    }
}

fn presheaf_of(doc: &Document, name: &str) -> SetFunctor {
    match &doc.get(name).unwrap().value {
        Value::SetFunctor { functor, .. } => functor.clone(),
        _ => panic!("{name} is not a presheaf"),
    }
}

/// Every tuple in the product of `0..n_i`, in lexicographic order.
fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 1: lex model counts.

/// A covariant functor `C → FinSet` as carrier sizes plus one table per
/// morphism.
#[derive(Clone)]
struct Model {
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

/// Every functor with carriers of size at most `max`, with no pruning: all
/// size vectors, all tables for non-identity morphisms, then a full
/// functoriality check.
fn all_functors(c: &FinCategory, max: usize) -> Vec<Model> {
    let mut out = Vec::new();
    let non_ids: Vec<MorId> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    for sizes in tuples(&vec![max + 1; c.num_objects()]) {
        // One table per non-identity morphism, each a tuple over the source.
        let choices: Vec<Vec<Vec<usize>>> = non_ids
            .iter()
            .map(|&f| tuples(&vec![sizes[c.tgt(f).0]; sizes[c.src(f).0]]))
            .collect();
        let counts: Vec<usize> = choices.iter().map(Vec::len).collect();
        for pick in tuples(&counts) {
            let mut action: Vec<Vec<usize>> =
                c.morphisms().map(|f| (0..sizes[c.src(f).0]).collect()).collect();
            for (k, &f) in non_ids.iter().enumerate() {
                action[f.0] = choices[k][pick[k]].clone();
            }
            let m = Model {
                sizes: sizes.clone(),
                action,
            };
            if is_functor(c, &m) {
                out.push(m);
            }
        }
    }
    out
}

fn is_functor(c: &FinCategory, m: &Model) -> bool {
    c.morphisms().all(|g| {
        c.morphisms().all(|f| match c.try_compose(g, f) {
            None => true,
            Some(gf) => {
                (0..m.sizes[c.src(f).0]).all(|x| m.action[gf.0][x] == m.action[g.0][m.action[f.0][x]])
            }
        })
    })
}

fn unique_mediator(c: &FinCategory, from: ObjId, to: ObjId, ok: impl Fn(MorId) -> bool) -> bool {
    c.hom(from, to).iter().filter(|&&m| ok(m)).count() == 1
}

fn terminal_objects(c: &FinCategory) -> Vec<ObjId> {
    c.objects()
        .filter(|&t| c.objects().all(|a| c.hom(a, t).len() == 1))
        .collect()
}

fn product(c: &FinCategory, a: ObjId, b: ObjId) -> Option<(ObjId, MorId, MorId)> {
    for p in c.objects() {
        for &pa in c.hom(p, a) {
            for &pb in c.hom(p, b) {
                let universal = c.objects().all(|q| {
                    c.hom(q, a).iter().all(|&qa| {
                        c.hom(q, b).iter().all(|&qb| {
                            unique_mediator(c, q, p, |m| c.compose(pa, m) == qa && c.compose(pb, m) == qb)
                        })
                    })
                });
                if universal {
                    return Some((p, pa, pb));
                }
            }
        }
    }
    None
}

fn equalizer(c: &FinCategory, f: MorId, g: MorId) -> Option<MorId> {
    let a = c.src(f);
    for e_src in c.objects() {
        for &e in c.hom(e_src, a) {
            if c.compose(f, e) != c.compose(g, e) {
                continue;
            }
            let universal = c.objects().all(|q| {
                c.hom(q, a)
                    .iter()
                    .filter(|&&h| c.compose(f, h) == c.compose(g, h))
                    .all(|&h| unique_mediator(c, q, e_src, |m| c.compose(e, m) == h))
            });
            if universal {
                return Some(e);
            }
        }
    }
    None
}

fn injective(table: &[usize]) -> bool {
    table.iter().collect::<BTreeSet<_>>().len() == table.len()
}

/// Preservation of the terminal object, binary products and equalizers,
/// which generate all finite limits.
fn is_lex(c: &FinCategory, m: &Model) -> Result<bool, String> {
    let t = *terminal_objects(c).first().ok_or("no terminal object")?;
    if m.sizes[t.0] != 1 {
        return Ok(false);
    }
    for a in c.objects() {
        for b in c.objects() {
            let (p, pa, pb) = product(c, a, b).ok_or("missing product")?;
            let pairs: Vec<usize> = (0..m.sizes[p.0])
                .map(|x| m.action[pa.0][x] * m.sizes[b.0] + m.action[pb.0][x])
                .collect();
            if !injective(&pairs) || m.sizes[p.0] != m.sizes[a.0] * m.sizes[b.0] {
                return Ok(false);
            }
        }
    }
    for f in c.morphisms() {
        for g in c.morphisms() {
            if c.src(f) != c.src(g) || c.tgt(f) != c.tgt(g) {
                continue;
            }
            let e = equalizer(c, f, g).ok_or("missing equalizer")?;
            let image: BTreeSet<usize> = m.action[e.0].iter().copied().collect();
            let agree: BTreeSet<usize> = (0..m.sizes[c.src(f).0])
                .filter(|&x| m.action[f.0][x] == m.action[g.0][x])
                .collect();
            if !injective(&m.action[e.0]) || image != agree {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn isomorphic(c: &FinCategory, x: &Model, y: &Model) -> bool {
    if x.sizes != y.sizes {
        return false;
    }
    let per_object: Vec<Vec<Vec<usize>>> = x.sizes.iter().map(|&n| permutations(n)).collect();
    let counts: Vec<usize> = per_object.iter().map(Vec::len).collect();
    tuples(&counts).into_iter().any(|pick| {
        let phi = |a: ObjId, v: usize| per_object[a.0][pick[a.0]][v];
        c.morphisms().all(|f| {
            (0..x.sizes[c.src(f).0])
                .all(|v| phi(c.tgt(f), x.action[f.0][v]) == y.action[f.0][phi(c.src(f), v)])
        })
    })
}

fn oracle_model_count(c: &FinCategory, max: usize) -> Result<usize, String> {
    let mut classes: Vec<Model> = Vec::new();
    for m in all_functors(c, max) {
        if is_lex(c, &m)? && !classes.iter().any(|k| isomorphic(c, k, &m)) {
            classes.push(m);
        }
    }
    Ok(classes.len())
}

fn criterion_1() -> Outcome {
    let limit = Duration::from_secs(1);
    let cases = [
        ("terminal", fixtures::terminal(), 1, 1),
        ("arrow", fixtures::arrow(), 1, 2),
        ("arrow", fixtures::arrow(), 2, 2),
        ("arrow", fixtures::arrow(), 3, 2),
    ];
    let mut notes = Vec::new();
    for (name, c, max, expected) in cases {
        let c = Arc::new(c);
        let frag = timed(limit, &format!("models({name}, {max})"), || {
            enumerate_lex_models(&c, max)
        })?
        .map_err(|e| e.to_string())?;
        let oracle = oracle_model_count(&c, max)?;
        ensure(frag.models.len() == expected && oracle == expected, || {
            format!(
                "{name} maxSize {max}: engine {} oracle {oracle} expected {expected}",
                frag.models.len()
            )
        })?;
        notes.push(format!("{name}@{max}={expected}"));
    }
    Ok(notes.join(" "))
}

// ---------------------------------------------------------------------------
// Criterion 2: Yoneda.

fn criterion_2() -> Outcome {
    let mut checked = 0usize;
    timed(
        Duration::from_secs(60),
        "Yoneda sweep",
        || -> Result<(), String> {
            for (name, c) in fixtures::corpus() {
                if c.num_morphisms() > 6 {
                    continue;
                }
                let op = Arc::new(c.opposite());
                let presheaves = enumerate_set_functors(&op, 3).map_err(|e| e.to_string())?;
                for a in c.objects() {
                    let y = yoneda(&c, a).map_err(|e| e.to_string())?;
                    for p in &presheaves {
                        let p = SetFunctor {
                            dom: y.dom.clone(),
                            ..p.clone()
                        };
                        let nats = nat_transforms_between(&y, &p).map_err(|e| e.to_string())?;
                        ensure(nats.len() == p.size(a), || {
                            format!(
                                "{name} at {}: |Nat| = {} but |P(A)| = {}",
                                c.obj_name(a),
                                nats.len(),
                                p.size(a)
                            )
                        })?;
                        checked += 1;
                    }
                }
            }
            Ok(())
        },
    )??;
    Ok(format!("{checked} (category, object, presheaf) triples"))
}

// ---------------------------------------------------------------------------
// Criterion 3: set limits and colimits against oracles.

fn oracle_limit(d: &SetFunctor) -> Vec<Vec<usize>> {
    let j = &*d.dom;
    tuples(&d.sizes())
        .into_iter()
        .filter(|t| j.morphisms().all(|u| d.apply(u, t[j.src(u).0]) == t[j.tgt(u).0]))
        .collect()
}

/// The generated equivalence on the disjoint union as a boolean matrix,
/// closed by iterating symmetric and transitive steps to a fixpoint.
fn oracle_congruence(d: &SetFunctor) -> (Vec<(ObjId, usize)>, Vec<Vec<bool>>) {
    let j = &*d.dom;
    let elems: Vec<(ObjId, usize)> = j
        .objects()
        .flat_map(|a| (0..d.size(a)).map(move |x| (a, x)))
        .collect();
    let index = |a: ObjId, x: usize| elems.iter().position(|&e| e == (a, x)).unwrap();
    let n = elems.len();
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for u in j.morphisms() {
        for x in 0..d.size(j.src(u)) {
            rel[index(j.src(u), x)][index(j.tgt(u), d.apply(u, x))] = true;
        }
    }
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in 0..n {
                if rel[p][q] && !rel[q][p] {
                    rel[q][p] = true;
                    changed = true;
                }
                for r in 0..n {
                    if rel[p][q] && rel[q][r] && !rel[p][r] {
                        rel[p][r] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return (elems, rel);
        }
    }
}

fn colimit_matches(d: &SetFunctor, legs: &[Vec<usize>], count: usize) -> bool {
    let (elems, rel) = oracle_congruence(d);
    let classes = (0..elems.len()).filter(|&p| (0..p).all(|q| !rel[p][q])).count();
    let class = |e: (ObjId, usize)| legs[e.0 .0][e.1];
    classes == count
        && elems.iter().enumerate().all(|(p, &ep)| {
            elems
                .iter()
                .enumerate()
                .all(|(q, &eq)| rel[p][q] == (class(ep) == class(eq)))
        })
}

fn criterion_3() -> Outcome {
    let mut shapes: Vec<Arc<FinCategory>> =
        fixtures::corpus().into_iter().map(|(_, c)| Arc::new(c)).collect();
    shapes.extend(filtered_shape_corpus(3, DEFAULT_SHAPE_MORPHISMS));
    let pools: Vec<Vec<SetFunctor>> = shapes
        .iter()
        .map(|s| {
            let max = if s.num_objects() <= 2 { 3 } else { 2 };
            enumerate_set_functors(s, max).unwrap()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
    let mut filtered_count = 0;
    for trial in 0..200 {
        let k = rng.gen_range(0..shapes.len());
        let d = pools[k].choose(&mut rng).unwrap();
        let lim = set_limit(d).map_err(|e| e.to_string())?;
        ensure(lim.tuples == oracle_limit(d), || {
            format!("trial {trial}: limit differs from tuple filter")
        })?;
        let colim = set_colimit(d).map_err(|e| e.to_string())?;
        ensure(colimit_matches(d, &colim.legs, colim.len()), || {
            format!("trial {trial}: colimit differs from congruence fixpoint")
        })?;
        if is_filtered(&shapes[k]).verdict.is_pass() {
            filtered_count += 1;
            let f = filtered_colimit(d).map_err(|e| e.to_string())?;
            ensure(
                f.len() == colim.len() && colimit_matches(d, &f.legs, f.len()),
                || format!("trial {trial}: filtered_colimit differs from set_colimit"),
            )?;
        }
    }
    ensure(filtered_count > 0, || "no filtered instance was drawn".into())?;
    Ok(format!("200 diagrams, {filtered_count} filtered"))
}

// ---------------------------------------------------------------------------
// Criterion 4: sheaf verdicts against a direct gluing search.

/// Compatibility is tested on every commuting span into the family, so no
/// chosen pullbacks are involved.
fn gluing_oracle(f: &SetFunctor, site: &Site) -> SheafStatus {
    let c = &*site.base;
    let mut separated = true;
    for u in c.objects() {
        for fam in site.covers(u) {
            let sizes: Vec<usize> = fam.iter().map(|&m| f.size(c.src(m))).collect();
            for t in tuples(&sizes) {
                let compatible = fam.iter().enumerate().all(|(i, &fi)| {
                    fam.iter().enumerate().all(|(k, &fk)| {
                        c.objects().all(|w| {
                            c.hom(w, c.src(fi)).iter().all(|&g| {
                                c.hom(w, c.src(fk)).iter().all(|&h| {
                                    c.compose(fi, g) != c.compose(fk, h)
                                        || f.apply(g, t[i]) == f.apply(h, t[k])
                                })
                            })
                        })
                    })
                });
                if !compatible {
                    continue;
                }
                let gluings = (0..f.size(u))
                    .filter(|&x| fam.iter().enumerate().all(|(i, &fi)| f.apply(fi, x) == t[i]))
                    .count();
                if gluings > 1 {
                    return SheafStatus::Neither;
                }
                if gluings == 0 {
                    separated = false;
                }
            }
        }
    }
    if separated {
        SheafStatus::Sheaf
    } else {
        SheafStatus::SeparatedOnly
    }
}

fn criterion_4() -> Outcome {
    let doc = load("sites.guk");
    let disc2 = site_of(&doc, "Disc2");
    let expected = [
        ("Fun", SheafStatus::Sheaf),
        ("Big", SheafStatus::Neither),
        ("Const2", SheafStatus::SeparatedOnly),
    ];
    timed(
        Duration::from_secs(1),
        "sheaf verdicts",
        || -> Result<(), String> {
            for (name, want) in expected {
                let got = check_sheaf(&presheaf_of(&doc, name), disc2)
                    .map_err(|e| e.to_string())?
                    .status;
                ensure(got == want, || {
                    format!("{name}: {} expected {}", got.as_str(), want.as_str())
                })?;
            }
            Ok(())
        },
    )??;
    let mut cases: Vec<(String, SetFunctor, &Site)> = Vec::new();
    for site in ["Disc2", "Chaotic2"] {
        for (name, _) in expected {
            cases.push((
                format!("{name}@{site}"),
                presheaf_of(&doc, name),
                site_of(&doc, site),
            ));
        }
    }
    let sier = site_of(&doc, "Sier");
    for (i, p) in enumerate_set_functors(&sier.op, 2)
        .unwrap()
        .into_iter()
        .enumerate()
    {
        cases.push((format!("presheaf#{i}@Sier"), p, sier));
    }
    for (label, p, site) in &cases {
        let engine = check_sheaf(p, site).map_err(|e| e.to_string())?.status;
        let oracle = gluing_oracle(p, site);
        ensure(engine == oracle, || {
            format!("{label}: engine {} oracle {}", engine.as_str(), oracle.as_str())
        })?;
    }
    Ok(format!(
        "3 fixture verdicts, {} presheaves against the gluing oracle",
        cases.len()
    ))
}

// ---------------------------------------------------------------------------
// Criterion 5: every finite topology.

fn brute_topologies(n: usize) -> Vec<Vec<u64>> {
    let full: u64 = (1 << n) - 1;
    let subsets: Vec<u64> = (0..=full).collect();
    let mut out = Vec::new();
    for choice in 0u64..1 << subsets.len() {
        let opens: Vec<u64> = subsets
            .iter()
            .copied()
            .filter(|&s| choice >> s & 1 == 1)
            .collect();
        let has = |s: u64| opens.contains(&s);
        let closed = opens
            .iter()
            .all(|&x| opens.iter().all(|&y| has(x | y) && has(x & y)));
        if has(0) && has(full) && closed {
            out.push(opens);
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut counts = Vec::new();
    timed(
        Duration::from_secs(30),
        "topology sweep",
        || -> Result<(), String> {
            for n in 0..=3 {
                let brute = brute_topologies(n);
                let engine: BTreeSet<Vec<u64>> = Space::all_topologies(n)
                    .into_iter()
                    .map(|s| {
                        s.opens
                            .iter()
                            .copied()
                            .collect::<BTreeSet<_>>()
                            .into_iter()
                            .collect()
                    })
                    .collect();
                let brute_set: BTreeSet<Vec<u64>> = brute.iter().cloned().collect();
                ensure(engine == brute_set, || format!("{n} points: enumerations differ"))?;
                for opens in brute {
                    let points = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
                    let space = Space::new(points, opens.clone()).map_err(|e| e.to_string())?;
                    let site = open_set_site(&space).map_err(|e| e.to_string())?;
                    let v = validate_topology(&site).map_err(|e| e.to_string())?;
                    ensure(v.is_pass(), || format!("{n} points, opens {opens:?}: {v:?}"))?;
                }
                counts.push(brute_set.len().to_string());
            }
            Ok(())
        },
    )??;
    Ok(format!("topologies on 0..=3 points: {}", counts.join(", ")))
}

// ---------------------------------------------------------------------------
// Criterion 6: sheafification.

fn criterion_6() -> Outcome {
    let doc = load("sites.guk");
    let site = site_of(&doc, "Disc2");
    let sheaves = enumerate_sheaves(site, 3).map_err(|e| e.to_string())?;
    for (i, g) in sheaves.iter().enumerate() {
        let a = sheafify(g, site).map_err(|e| e.to_string())?;
        let bijective = a
            .unit
            .components
            .iter()
            .zip(g.sizes().iter().zip(a.sheaf.sizes()))
            .all(|(table, (&n, m))| n == m && injective(table));
        ensure(bijective, || format!("sheaf #{i}: unit is not a bijection"))?;
    }
    for name in ["Fun", "Const2", "Big"] {
        let f = presheaf_of(&doc, name);
        let a = sheafify(&f, site).map_err(|e| e.to_string())?;
        let v = check_sheafification_universal(&f, &a, &sheaves).map_err(|e| e.to_string())?;
        ensure(v.is_pass(), || format!("{name}: {v:?}"))?;
        for g in &sheaves {
            let left = nat_transforms_between(&a.sheaf, g).unwrap().len();
            let right = nat_transforms_between(&f, g).unwrap().len();
            ensure(left == right, || {
                format!("{name}: |Nat(aF,G)| = {left}, |Nat(F,G)| = {right}")
            })?;
        }
    }
    Ok(format!("{} sheaves with carriers <= 3", sheaves.len()))
}

// ---------------------------------------------------------------------------
// Criterion 7: global sections as a limit of stalks.

/// Maps from each open set into a two-element set, encoded as bitmasks over
/// the points of the open set.
fn function_presheaf(space: &Space, site: &Site) -> SetFunctor {
    let c = &*site.base;
    let width = |u: ObjId| space.opens[u.0].count_ones() as usize;
    let sizes: Vec<usize> = c.objects().map(|u| 1 << width(u)).collect();
    let action = c
        .morphisms()
        .map(|f| {
            let (v, u) = (space.opens[c.src(f).0], space.opens[c.tgt(f).0]);
            let u_points: Vec<usize> = (0..space.points.len()).filter(|p| u >> p & 1 == 1).collect();
            let v_points: Vec<usize> = (0..space.points.len()).filter(|p| v >> p & 1 == 1).collect();
            (0..1usize << u_points.len())
                .map(|x| {
                    v_points.iter().enumerate().fold(0, |acc, (bit, p)| {
                        let pos = u_points.iter().position(|q| q == p).unwrap();
                        acc | (x >> pos & 1) << bit
                    })
                })
                .collect()
        })
        .collect();
    SetFunctor::from_sizes(site.op.clone(), &sizes, action).unwrap()
}

fn oracle_sections(p: &SetFunctor) -> usize {
    let j = &*p.dom;
    tuples(&p.sizes())
        .iter()
        .filter(|t| j.morphisms().all(|u| p.apply(u, t[j.src(u).0]) == t[j.tgt(u).0]))
        .count()
}

fn check_bundle(label: &str, f: &SheafOfModels) -> Result<(), String> {
    ensure(f.validate().is_pass(), || format!("{label}: invalid bundle"))?;
    let routes = check_gamma_routes(f).map_err(|e| e.to_string())?;
    ensure(routes.is_pass(), || format!("{label}: {routes:?}"))?;
    let gamma = global_sections(f).map_err(|e| e.to_string())?;
    for (i, p) in f.presheaves.iter().enumerate() {
        let want = oracle_sections(p);
        ensure(gamma.size(ObjId(i)) == want, || {
            format!(
                "{label}: |Γ| at index {i} is {} but {want} matching families exist",
                gamma.size(ObjId(i))
            )
        })?;
    }
    let v = gamma_is_limit_of_stalks(f).map_err(|e| e.to_string())?;
    ensure(v.is_pass(), || format!("{label}: {v:?}"))
}

fn criterion_7() -> Outcome {
    let doc = load("topos.guk");
    let mut bundles: Vec<(String, SheafOfModels)> = Vec::new();
    for name in ["Single", "Pair"] {
        match &doc.get(name).unwrap().value {
            Value::Bundle(b) => bundles.push((name.to_string(), b.clone())),
            _ => return Err(format!("{name} is not a bundle")),
        }
    }
    let index_t = Arc::new(fixtures::terminal());
    let index_a = Arc::new(fixtures::arrow());
    for n in 1..=3 {
        for space in Space::all_topologies(n)
            .into_iter()
            .filter(|s| s.opens.len() <= 4)
        {
            let site = open_set_site(&space).map_err(|e| e.to_string())?;
            let label = format!("{:?}", space.opens);
            let fun = function_presheaf(&space, &site);
            let one = SetFunctor::constant(site.op.clone(), 1);
            let to_one = SetNat {
                components: fun.sizes().iter().map(|&k| vec![0; k]).collect(),
            };
            let (single, _) = SheafOfModels::new(
                index_t.clone(),
                site.base.clone(),
                vec![fun.clone()],
                vec![SetNat::identity(&fun)],
            )
            .map_err(|e| e.to_string())?;
            let (pair, _) = SheafOfModels::new(
                index_a.clone(),
                site.base.clone(),
                vec![fun.clone(), one.clone()],
                vec![SetNat::identity(&fun), SetNat::identity(&one), to_one],
            )
            .map_err(|e| e.to_string())?;
            bundles.push((
                format!("terminal over {label}"),
                SheafOfModels::terminal(index_a.clone(), site.base.clone()),
            ));
            bundles.push((format!("functions over {label}"), single));
            bundles.push((format!("functions to point over {label}"), pair));
        }
    }
    timed(
        Duration::from_secs(5),
        "gamma checks",
        || -> Result<(), String> {
            for (label, f) in &bundles {
                check_bundle(label, f)?;
            }
            Ok(())
        },
    )??;
    Ok(format!("{} bundles", bundles.len()))
}

// ---------------------------------------------------------------------------
// Criterion 8: duality shadows.

fn criterion_8() -> Outcome {
    timed(
        Duration::from_secs(10),
        "duality checks",
        || -> Result<String, String> {
            for (name, c) in [("terminal", fixtures::terminal()), ("arrow", fixtures::arrow())] {
                let c = Arc::new(c);
                let r = duality_report(&c, 3).map_err(|e| e.to_string())?;
                ensure(r.all_pass(), || format!("{name}: {r:?}"))?;
                ensure(r.epsilon_counts.len() == c.num_objects().pow(2), || {
                    format!("{name}: missing ε rows")
                })?;
                for h in &r.epsilon_counts {
                    let want = c.hom(h.b, h.a).len();
                    ensure(h.nat_count == want && h.hom_count == want, || {
                        format!(
                            "{name} ({}, {}): nat {} hom {} expected {want}",
                            c.obj_name(h.a),
                            c.obj_name(h.b),
                            h.nat_count,
                            h.hom_count
                        )
                    })?;
                }
            }
            for (name, c) in fixtures::corpus() {
                let all: Vec<ObjId> = c.objects().collect();
                let v = check_conservative(&c, &all);
                ensure(v.is_pass(), || {
                    format!("{name}: full collection not conservative: {v:?}")
                })?;
            }
            let arrow = fixtures::arrow();
            match check_conservative(&arrow, &[]) {
                Verdict::Fail(w) if w.law == "conservativity" && w.detail.iter().any(|(_, v)| v == "a") => {}
                other => return Err(format!("empty collection on arrow: {other:?}")),
            }
            Ok("terminal and arrow reports pass; empty collection fails at a".into())
        },
    )?
}

// ---------------------------------------------------------------------------
// Criterion 9: clans.

fn criterion_9() -> Outcome {
    let lex: Vec<(&str, Arc<FinCategory>)> = fixtures::corpus()
        .into_iter()
        .map(|(n, c)| (n, Arc::new(c)))
        .filter(|(_, c)| has_all_finite_limits(c).map(|v| v.is_pass()).unwrap_or(false))
        .collect();
    ensure(!lex.is_empty(), || "no lex corpus base".into())?;
    for (name, c) in &lex {
        let k = Clan::new(c.clone(), None, c.morphisms().collect()).map_err(|e| e.to_string())?;
        let v = validate_clan(&k).map_err(|e| e.to_string())?;
        ensure(v.is_pass(), || {
            format!("{name} with every morphism display: {v:?}")
        })?;
    }
    let arrow = Arc::new(fixtures::arrow());
    let m = |s: &str| arrow.mor(s).unwrap();
    let with_a =
        Clan::new(arrow.clone(), None, vec![m("id_0"), m("id_1"), m("a")]).map_err(|e| e.to_string())?;
    let v = validate_clan(&with_a).map_err(|e| e.to_string())?;
    ensure(v.is_pass(), || format!("arrow with {{id0, id1, a}}: {v:?}"))?;
    let without = Clan::new(arrow.clone(), None, vec![m("id_0"), m("id_1")]).map_err(|e| e.to_string())?;
    match validate_clan(&without).map_err(|e| e.to_string())? {
        Verdict::Fail(w) if w.law == "terminal-projection" && w.get("morphism") == Some("a") => {}
        other => return Err(format!("arrow with {{id0, id1}}: {other:?}")),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0009);
    for trial in 0..50 {
        let (name, base) = &lex[rng.gen_range(0..lex.len())];
        let gens: Vec<MorId> = base.morphisms().filter(|_| rng.gen_bool(0.3)).collect();
        let once = display_closure(base, &gens).map_err(|e| e.to_string())?;
        let twice = display_closure(base, &once).map_err(|e| e.to_string())?;
        ensure(once == twice, || {
            format!("trial {trial} on {name}: closure not idempotent")
        })?;
        ensure(gens.iter().all(|g| once.contains(g)), || {
            format!("trial {trial} on {name}: generators lost")
        })?;
        let k = Clan::new(base.clone(), None, once).map_err(|e| e.to_string())?;
        let v = validate_clan(&k).map_err(|e| e.to_string())?;
        ensure(v.is_pass(), || {
            format!("trial {trial} on {name}: closure is not a clan: {v:?}")
        })?;
    }
    Ok(format!("3 examples, {} lex bases, 50 closures", lex.len()))
}

// ---------------------------------------------------------------------------
// Criterion 10: CLI goldens and exit codes.

fn criterion_10() -> Outcome {
    let bad = common::golden_mismatches();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let mut commands: BTreeSet<&str> = BTreeSet::new();
    for case in common::CASES {
        commands.insert(case.args[0]);
    }
    for cmd in &commands {
        for code in [0, 2] {
            ensure(
                common::CASES.iter().any(|c| c.args[0] == *cmd && c.code == code),
                || format!("`{cmd}` has no exit-{code} case"),
            )?;
        }
    }
    let failing = common::CASES.iter().filter(|c| c.code == 1).count();
    Ok(format!(
        "{} cases over {} commands ({failing} failing verdicts)",
        common::CASES.len(),
        commands.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("lex model counts", criterion_1),
        ("Yoneda lemma", criterion_2),
        ("limit and colimit oracles", criterion_3),
        ("sheaf verdicts", criterion_4),
        ("topology axioms", criterion_5),
        ("sheafification", criterion_6),
        ("global sections via stalks", criterion_7),
        ("duality shadows", criterion_8),
        ("clans", criterion_9),
        ("CLI goldens and exit codes", criterion_10),
    ];
    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(note) => println!("criterion {:>2} PASS  {title}: {note} [{ms} ms]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {title}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
