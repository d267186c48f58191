//! Small named categories used throughout the tests, the shape corpus and
//! the CLI examples.

use crate::category::{Arrow, CategoryBuilder, FinCategory, MorId, ObjId};

/// One object, one identity.
pub fn terminal() -> FinCategory {
    CategoryBuilder::new().object("0").build().unwrap()
}

/// Objects `0`, `1` and a single arrow `a: 0 → 1`.
pub fn arrow() -> FinCategory {
    CategoryBuilder::new()
        .objects(["0", "1"])
        .arrow("a", "0", "1")
        .build()
        .unwrap()
}

pub fn discrete(n: usize) -> FinCategory {
    CategoryBuilder::new()
        .objects((0..n).map(|i| i.to_string()))
        .build()
        .unwrap()
}

pub fn empty() -> FinCategory {
    discrete(0)
}

/// Thin category on `names` with an arrow `x → y` iff `leq(x, y)`.
/// Non-identity arrows are named `<x>_<y>`.
pub fn poset(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> FinCategory {
    poset_named(names, leq, |x, y| format!("{x}_{y}"))
}

/// Thin category with non-identity arrows named by `arrow_name(x, y)`.
pub fn poset_named(
    names: &[&str],
    leq: impl Fn(usize, usize) -> bool,
    arrow_name: impl Fn(&str, &str) -> String,
) -> FinCategory {
    let n = names.len();
    let mut arrows: Vec<Arrow> = (0..n)
        .map(|i| Arrow {
            name: format!("id_{}", names[i]),
            src: ObjId(i),
            tgt: ObjId(i),
        })
        .collect();
    let mut index = vec![None; n * n];
    for i in 0..n {
        index[i * n + i] = Some(MorId(i));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) {
                index[i * n + j] = Some(MorId(arrows.len()));
                arrows.push(Arrow {
                    name: arrow_name(names[i], names[j]),
                    src: ObjId(i),
                    tgt: ObjId(j),
                });
            }
        }
    }
    let m = arrows.len();
    let mut comp = vec![None; m * m];
    for (gi, g) in arrows.iter().enumerate() {
        for (fi, f) in arrows.iter().enumerate() {
            if f.tgt == g.src {
                comp[gi * m + fi] = index[f.src.0 * n + g.tgt.0];
            }
        }
    }
    let identities = (0..n).map(MorId).collect();
    FinCategory::from_tables(
        names.iter().map(|s| s.to_string()).collect(),
        arrows,
        identities,
        comp,
    )
    .expect("poset tables are well-formed")
}

/// The chain `0 ≤ 1 ≤ … ≤ n-1`.
pub fn chain(n: usize) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    poset(&refs, |i, j| i <= j)
}

/// `a → c ← b`.
pub fn cospan() -> FinCategory {
    CategoryBuilder::new()
        .objects(["a", "b", "c"])
        .arrow("f", "a", "c")
        .arrow("g", "b", "c")
        .build()
        .unwrap()
}

/// `a ← c → b`.
pub fn span() -> FinCategory {
    CategoryBuilder::new()
        .objects(["a", "b", "c"])
        .arrow("p", "c", "a")
        .arrow("q", "c", "b")
        .build()
        .unwrap()
}

/// Two parallel arrows `f, g: A → B`.
pub fn parallel_pair() -> FinCategory {
    CategoryBuilder::new()
        .objects(["A", "B"])
        .arrow("f", "A", "B")
        .arrow("g", "A", "B")
        .build()
        .unwrap()
}

/// One object with an idempotent `e`.
pub fn idempotent() -> FinCategory {
    CategoryBuilder::new()
        .object("A")
        .arrow("e", "A", "A")
        .compose("e", "e", "e")
        .build()
        .unwrap()
}

/// The group of order two as a one-object category.
pub fn z2() -> FinCategory {
    CategoryBuilder::new()
        .object("A")
        .arrow("s", "A", "A")
        .compose("s", "s", "id_A")
        .build()
        .unwrap()
}

/// Subsets of `{a, b}` ordered by inclusion.
pub fn powerset2() -> FinCategory {
    let sets = [0u8, 1, 2, 3];
    poset(&["e", "a", "b", "ab"], |i, j| sets[i] & !sets[j] == 0)
}

/// The full subcategory of finite sets on `{}`, `{0}`, `{0,1}`, `{0,1,2}`.
///
/// Objects are named `s0`…`s3`; the function `m → n` with values
/// `v0 v1 …` is named `f<m><n>_<v0><v1>…`.
pub fn finset3() -> FinCategory {
    finset(3)
}

pub fn finset(max: usize) -> FinCategory {
    let mut funcs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for m in 0..=max {
        for n in 0..=max {
            let total = n.pow(m as u32);
            for code in 0..total {
                let mut vals = Vec::with_capacity(m);
                let mut c = code;
                for _ in 0..m {
                    vals.push(c % n);
                    c /= n;
                }
                vals.reverse();
                funcs.push((m, n, vals));
            }
        }
    }
    let index = |m: usize, n: usize, vals: &[usize]| {
        funcs
            .iter()
            .position(|(a, b, v)| *a == m && *b == n && v == vals)
            .map(MorId)
            .unwrap()
    };
    let arrows: Vec<Arrow> = funcs
        .iter()
        .map(|(m, n, vals)| Arrow {
            name: format!(
                "f{m}{n}_{}",
                vals.iter().map(|v| v.to_string()).collect::<String>()
            ),
            src: ObjId(*m),
            tgt: ObjId(*n),
        })
        .collect();
    let k = arrows.len();
    let mut comp = vec![None; k * k];
    for (gi, (gm, gn, gv)) in funcs.iter().enumerate() {
        for (fi, (fm, fn_, fv)) in funcs.iter().enumerate() {
            if fn_ == gm {
                let vals: Vec<usize> = fv.iter().map(|&x| gv[x]).collect();
                comp[gi * k + fi] = Some(index(*fm, *gn, &vals));
            }
        }
    }
    let identities = (0..=max)
        .map(|n| index(n, n, &(0..n).collect::<Vec<_>>()))
        .collect();
    FinCategory::from_tables(
        (0..=max).map(|i| format!("s{i}")).collect(),
        arrows,
        identities,
        comp,
    )
    .unwrap()
}

/// Named corpus of small valid categories.
pub fn corpus() -> Vec<(&'static str, FinCategory)> {
    vec![
        ("terminal", terminal()),
        ("arrow", arrow()),
        ("discrete2", discrete(2)),
        ("chain3", chain(3)),
        ("cospan", cospan()),
        ("span", span()),
        ("parallel", parallel_pair()),
        ("idempotent", idempotent()),
        ("z2", z2()),
        ("powerset2", powerset2()),
    ]
}
