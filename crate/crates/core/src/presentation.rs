//! Generators-and-relations presentations, compiled eagerly into tables.
//!
//! Compilation enumerates the right Cayley graph of the presented category
//! breadth-first from the identities, imposing every relation at every node
//! and merging coincident nodes. The graph is complete once every node has
//! all its outgoing generator edges; if that does not happen before the
//! shortest representatives exceed the saturation bound the presentation is
//! reported as [`Error::NotFinitelyClosed`].

use std::collections::VecDeque;

use crate::budget;
use crate::category::{Arrow, FinCategory, MorId, ObjId};
use crate::error::{Error, Result};

pub const DEFAULT_BOUND: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// A word in written (composition) order: `["g", "f"]` means `g ∘ f`.
/// `id_X` stands for the empty path at `X`.
pub type Word = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryPresentation {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<(Word, Word)>,
    pub bound: usize,
}

impl CategoryPresentation {
    pub fn new(objects: Vec<String>, generators: Vec<Generator>) -> Self {
        CategoryPresentation {
            objects,
            generators,
            relations: Vec::new(),
            bound: DEFAULT_BOUND,
        }
    }

    pub fn relation(mut self, lhs: &[&str], rhs: &[&str]) -> Self {
        let w = |s: &[&str]| s.iter().map(|x| x.to_string()).collect();
        self.relations.push((w(lhs), w(rhs)));
        self
    }

    pub fn bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn compile(&self) -> Result<FinCategory> {
        compile_presentation(self)
    }
}

/// A path in application order.
#[derive(Clone, Debug)]
struct Path {
    src: ObjId,
    tgt: ObjId,
    gens: Vec<usize>,
}

struct Resolved {
    objects: Vec<String>,
    gen_src: Vec<ObjId>,
    gen_tgt: Vec<ObjId>,
    relations: Vec<(Path, Path)>,
}

fn resolve(p: &CategoryPresentation) -> Result<Resolved> {
    let obj = |n: &str| {
        p.objects
            .iter()
            .position(|o| o == n)
            .map(ObjId)
            .ok_or_else(|| Error::UnknownObject(n.to_string()))
    };
    let mut gen_src = Vec::new();
    let mut gen_tgt = Vec::new();
    for g in &p.generators {
        gen_src.push(obj(&g.src)?);
        gen_tgt.push(obj(&g.tgt)?);
    }
    let word = |w: &Word| -> Result<Path> {
        let mut gens = Vec::new();
        let mut ends: Option<(ObjId, ObjId)> = None;
        for sym in w.iter().rev() {
            let (s, t, g) = if let Some(i) = p.generators.iter().position(|g| &g.name == sym) {
                (gen_src[i], gen_tgt[i], Some(i))
            } else if let Some(o) = sym.strip_prefix("id_") {
                let o = obj(o)?;
                (o, o, None)
            } else {
                return Err(Error::UnknownMorphism(sym.clone()));
            };
            ends = match ends {
                None => Some((s, t)),
                Some((s0, t0)) if t0 == s => Some((s0, t)),
                Some(_) => {
                    return Err(Error::Malformed(format!(
                        "word `{}` is not composable",
                        w.join(" . ")
                    )))
                }
            };
            gens.extend(g);
        }
        let (src, tgt) = ends.ok_or_else(|| Error::Malformed("empty word".into()))?;
        Ok(Path { src, tgt, gens })
    };
    let mut relations = Vec::new();
    for (l, r) in &p.relations {
        let (l, r) = (word(l)?, word(r)?);
        if (l.src, l.tgt) != (r.src, r.tgt) {
            return Err(Error::Malformed("relation sides are not parallel".into()));
        }
        relations.push((l, r));
    }
    Ok(Resolved {
        objects: p.objects.clone(),
        gen_src,
        gen_tgt,
        relations,
    })
}

struct Node {
    src: ObjId,
    tgt: ObjId,
    depth: usize,
    next: Vec<Option<usize>>,
}

struct Graph<'a> {
    res: &'a Resolved,
    nodes: Vec<Node>,
    parent: Vec<usize>,
}

impl Graph<'_> {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn step(&mut self, x: usize, g: usize) -> Option<usize> {
        let y = self.nodes[x].next[g]?;
        Some(self.find(y))
    }

    fn trace(&mut self, x: usize, gens: &[usize]) -> Option<usize> {
        gens.iter().try_fold(x, |at, &g| self.step(at, g))
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut pending = vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            self.nodes[keep].depth = self.nodes[keep].depth.min(self.nodes[drop].depth);
            for g in 0..self.res.gen_src.len() {
                match (self.nodes[keep].next[g], self.nodes[drop].next[g]) {
                    (Some(x), Some(y)) => pending.push((x, y)),
                    (None, Some(y)) => self.nodes[keep].next[g] = Some(y),
                    _ => {}
                }
            }
        }
    }

    /// Imposes every relation at every live node until nothing merges.
    fn deduce(&mut self) -> Result<()> {
        loop {
            let mut merged = false;
            for x in 0..self.nodes.len() {
                if self.find(x) != x {
                    continue;
                }
                for r in 0..self.res.relations.len() {
                    let (l, rr) = &self.res.relations[r];
                    if l.src != self.nodes[x].tgt {
                        continue;
                    }
                    budget::tick(1)?;
                    let (lg, rg) = (l.gens.clone(), rr.gens.clone());
                    if let (Some(a), Some(b)) = (self.trace(x, &lg), self.trace(x, &rg)) {
                        if a != b {
                            self.merge(a, b);
                            merged = true;
                        }
                    }
                }
            }
            if !merged {
                return Ok(());
            }
        }
    }
}

/// Quotient of the free category on the generator graph by the relation
/// congruence, with morphisms in shortest-then-lexicographic order.
pub fn compile_presentation(p: &CategoryPresentation) -> Result<FinCategory> {
    let res = resolve(p)?;
    let ngen = res.gen_src.len();
    let mut g = Graph {
        res: &res,
        nodes: Vec::new(),
        parent: Vec::new(),
    };
    for o in 0..res.objects.len() {
        g.nodes.push(Node {
            src: ObjId(o),
            tgt: ObjId(o),
            depth: 0,
            next: vec![None; ngen],
        });
        g.parent.push(o);
    }
    g.deduce()?;
    let mut cursor = 0;
    while cursor < g.nodes.len() {
        let x = cursor;
        cursor += 1;
        for gen in 0..ngen {
            if g.find(x) != x {
                break;
            }
            if res.gen_src[gen] != g.nodes[x].tgt || g.nodes[x].next[gen].is_some() {
                continue;
            }
            let depth = g.nodes[x].depth + 1;
            if depth > p.bound + 1 {
                return Err(Error::NotFinitelyClosed { bound: p.bound });
            }
            budget::tick(1)?;
            let y = g.nodes.len();
            g.nodes.push(Node {
                src: g.nodes[x].src,
                tgt: res.gen_tgt[gen],
                depth,
                next: vec![None; ngen],
            });
            g.parent.push(y);
            g.nodes[x].next[gen] = Some(y);
            g.deduce()?;
        }
    }
    let live: Vec<usize> = (0..g.nodes.len()).filter(|&x| g.find(x) == x).collect();
    if live.iter().any(|&x| g.nodes[x].depth > p.bound) {
        return Err(Error::NotFinitelyClosed { bound: p.bound });
    }

    // Shortlex representatives by ordered breadth-first search.
    let mut rep: Vec<Option<Vec<usize>>> = vec![None; g.nodes.len()];
    let mut order = Vec::new();
    let mut queue: VecDeque<usize> = (0..res.objects.len()).map(|o| g.find(o)).collect();
    for &x in &queue {
        rep[x] = Some(Vec::new());
    }
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for gen in 0..ngen {
            if let Some(y) = g.step(x, gen) {
                if rep[y].is_none() {
                    let mut w = rep[x].clone().unwrap();
                    w.push(gen);
                    rep[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut index = vec![usize::MAX; g.nodes.len()];
    for (i, &x) in order.iter().enumerate() {
        index[x] = i;
    }
    let mut used = std::collections::HashSet::new();
    let arrows: Vec<Arrow> = order
        .iter()
        .map(|&x| {
            let w = rep[x].as_ref().unwrap();
            let base = if w.is_empty() {
                format!("id_{}", res.objects[g.nodes[x].src.0])
            } else {
                w.iter()
                    .rev()
                    .map(|&i| p.generators[i].name.as_str())
                    .collect::<Vec<_>>()
                    .join("_")
            };
            let mut name = base.clone();
            let mut k = 1;
            while !used.insert(name.clone()) {
                name = format!("{base}_{k}");
                k += 1;
            }
            Arrow {
                name,
                src: g.nodes[x].src,
                tgt: g.nodes[x].tgt,
            }
        })
        .collect();
    let m = order.len();
    let mut comp = vec![None; m * m];
    for (fi, &f) in order.iter().enumerate() {
        for (gi, &gx) in order.iter().enumerate() {
            if g.nodes[gx].src != g.nodes[f].tgt {
                continue;
            }
            let path = rep[gx].clone().unwrap();
            let h = g.trace(f, &path).expect("complete graph");
            comp[gi * m + fi] = Some(MorId(index[h]));
        }
    }
    let identities = (0..res.objects.len()).map(|o| MorId(index[g.find(o)])).collect();
    FinCategory::from_tables(res.objects.clone(), arrows, identities, comp)
}
