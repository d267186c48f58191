//! The CLI fixture suite shared by the golden, exit-code and acceptance
//! tests. Each case is an id, the arguments after the program name (the
//! second one is a fixture file name) and the expected exit code.

#![allow(dead_code)]

use std::path::PathBuf;

pub struct Case {
    pub id: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

macro_rules! case {
    ($id:literal, $code:literal, [$($a:literal),* $(,)?]) => {
        Case { id: $id, args: &[$($a),*], code: $code }
    };
}

pub const CASES: &[Case] = &[
    case!("check_arrow", 0, ["check", "basics.guk", "--item", "C2"]),
    case!("check_all_basics", 0, ["check", "basics.guk"]),
    case!("check_invalid", 1, ["check", "invalid.guk"]),
    case!("check_clans", 1, ["check", "clans.guk"]),
    case!("check_unknown_item", 2, ["check", "basics.guk", "--item", "Nope"]),
    case!("parse_error", 2, ["check", "parse_error.guk"]),
    case!("name_clash", 2, ["check", "clash.guk"]),
    case!("unresolved", 2, ["check", "unresolved.guk"]),
    case!("render_basics", 0, ["render", "basics.guk"]),
    case!("render_parse_error", 2, ["render", "parse_error.guk"]),
    case!("limit_meet", 0, ["limit", "basics.guk", "--diagram", "Meet"]),
    case!("limit_corner", 0, ["limit", "basics.guk", "--diagram", "Corner"]),
    case!("limit_none", 1, ["limit", "basics.guk", "--diagram", "NoProd"]),
    case!("limit_sets", 0, ["limit", "basics.guk", "--diagram", "Span"]),
    case!("limit_unknown", 2, ["limit", "basics.guk", "--diagram", "C2"]),
    case!("colimit_meet", 0, ["colimit", "basics.guk", "--diagram", "Meet"]),
    case!("colimit_none", 1, ["colimit", "basics.guk", "--diagram", "Twice"]),
    case!("colimit_sets", 0, ["colimit", "basics.guk", "--diagram", "Span"]),
    case!(
        "colimit_invalid_doc",
        2,
        ["colimit", "invalid.guk", "--diagram", "X"]
    ),
    case!(
        "filtered_chain",
        0,
        ["filtered", "basics.guk", "--category", "Ch"]
    ),
    case!(
        "filtered_parallel",
        1,
        ["filtered", "basics.guk", "--category", "Par"]
    ),
    case!(
        "directed_lattice",
        0,
        ["filtered", "basics.guk", "--category", "Sq", "--directed"]
    ),
    case!(
        "directed_not_poset",
        2,
        ["filtered", "basics.guk", "--category", "Idem", "--directed"]
    ),
    case!(
        "fp_cocone",
        0,
        [
            "fp",
            "basics.guk",
            "--category",
            "C2",
            "--object",
            "A",
            "--cocone",
            "K"
        ]
    ),
    case!(
        "fp_all_shapes",
        0,
        ["fp", "basics.guk", "--category", "C2", "--object", "B"]
    ),
    case!(
        "fp_bad_object",
        2,
        ["fp", "basics.guk", "--category", "C2", "--object", "Q"]
    ),
    case!("models_terminal", 0, ["models", "basics.guk", "--category", "T"]),
    case!(
        "models_arrow",
        0,
        ["models", "basics.guk", "--category", "C2", "--max-size", "3"]
    ),
    case!(
        "models_export",
        0,
        [
            "models",
            "basics.guk",
            "--category",
            "C2",
            "--max-size",
            "2",
            "--export"
        ]
    ),
    case!("models_not_lex", 2, ["models", "basics.guk", "--category", "Par"]),
    case!(
        "duality_terminal",
        0,
        ["duality", "basics.guk", "--category", "T"]
    ),
    case!("duality_arrow", 0, ["duality", "basics.guk", "--category", "C2"]),
    case!(
        "duality_not_lex",
        2,
        ["duality", "basics.guk", "--category", "Par"]
    ),
    case!("lex_lattice", 0, ["lex", "basics.guk", "--category", "Sq"]),
    case!("lex_parallel", 1, ["lex", "basics.guk", "--category", "Par"]),
    case!("lex_unknown", 2, ["lex", "basics.guk", "--category", "Nope"]),
    case!("topology_disc2", 0, ["topology", "sites.guk", "--site", "Disc2"]),
    case!(
        "topology_sierpinski",
        0,
        ["topology", "sites.guk", "--site", "Sier"]
    ),
    case!(
        "topology_chaotic",
        0,
        ["topology", "sites.guk", "--site", "Chaotic2"]
    ),
    case!(
        "topology_broken",
        1,
        ["topology", "sites.guk", "--site", "NoIdentity"]
    ),
    case!("topology_not_site", 2, ["topology", "sites.guk", "--site", "C2"]),
    case!(
        "sheaf_functions",
        0,
        ["sheaf", "sites.guk", "--site", "Disc2", "--presheaf", "Fun"]
    ),
    case!(
        "sheaf_constant",
        1,
        ["sheaf", "sites.guk", "--site", "Disc2", "--presheaf", "Const2"]
    ),
    case!(
        "sheaf_big",
        1,
        ["sheaf", "sites.guk", "--site", "Disc2", "--presheaf", "Big"]
    ),
    case!(
        "sheaf_chaotic",
        0,
        ["sheaf", "sites.guk", "--site", "Chaotic2", "--presheaf", "Big"]
    ),
    case!(
        "sheaf_wrong_site",
        2,
        ["sheaf", "sites.guk", "--site", "Sier", "--presheaf", "Fun"]
    ),
    case!(
        "separated_constant",
        0,
        [
            "separated",
            "sites.guk",
            "--site",
            "Disc2",
            "--presheaf",
            "Const2"
        ]
    ),
    case!(
        "separated_big",
        1,
        ["separated", "sites.guk", "--site", "Disc2", "--presheaf", "Big"]
    ),
    case!(
        "separated_missing",
        2,
        ["separated", "sites.guk", "--site", "Disc2", "--presheaf", "Nope"]
    ),
    case!(
        "sheafify_constant",
        0,
        [
            "sheafify",
            "sites.guk",
            "--site",
            "Disc2",
            "--presheaf",
            "Const2",
            "--universal-max",
            "2"
        ]
    ),
    case!(
        "sheafify_big",
        0,
        ["sheafify", "sites.guk", "--site", "Disc2", "--presheaf", "Big"]
    ),
    case!(
        "sheafify_sheaf",
        0,
        ["sheafify", "sites.guk", "--site", "Disc2", "--presheaf", "Fun"]
    ),
    case!(
        "sheafify_wrong_site",
        2,
        [
            "sheafify",
            "sites.guk",
            "--site",
            "NoIdentity",
            "--presheaf",
            "Fun"
        ]
    ),
    case!(
        "continuous_identity",
        0,
        [
            "continuous",
            "sites.guk",
            "--functor",
            "Same",
            "--from",
            "Disc2",
            "--to",
            "Disc2"
        ]
    ),
    case!(
        "continuous_coarsening",
        1,
        [
            "continuous",
            "sites.guk",
            "--functor",
            "Same",
            "--from",
            "Disc2",
            "--to",
            "Chaotic2"
        ]
    ),
    case!(
        "continuous_mismatch",
        2,
        [
            "continuous",
            "sites.guk",
            "--functor",
            "Same",
            "--from",
            "Sier",
            "--to",
            "Disc2"
        ]
    ),
    case!("gamma_single", 0, ["gamma", "topos.guk", "--bundle", "Single"]),
    case!("gamma_pair", 0, ["gamma", "topos.guk", "--bundle", "Pair"]),
    case!("gamma_missing", 2, ["gamma", "topos.guk", "--bundle", "P"]),
    case!(
        "stalk_x",
        0,
        ["stalk", "topos.guk", "--bundle", "Pair", "--at", "X"]
    ),
    case!(
        "stalk_y",
        0,
        ["stalk", "topos.guk", "--bundle", "Single", "--at", "Y"]
    ),
    case!(
        "stalk_unknown",
        2,
        ["stalk", "topos.guk", "--bundle", "Pair", "--at", "Nope"]
    ),
    case!(
        "gamma_limit_single",
        0,
        ["gamma-limit-check", "topos.guk", "--bundle", "Single"]
    ),
    case!(
        "gamma_limit_pair",
        0,
        ["gamma-limit-check", "topos.guk", "--bundle", "Pair"]
    ),
    case!(
        "gamma_limit_missing",
        2,
        ["gamma-limit-check", "topos.guk", "--bundle", "Nope"]
    ),
    case!("clan_all", 0, ["clan", "clans.guk", "--clan", "All"]),
    case!(
        "clan_projections",
        0,
        ["clan", "clans.guk", "--clan", "Projections"]
    ),
    case!(
        "clan_identities",
        1,
        ["clan", "clans.guk", "--clan", "IdentitiesOnly"]
    ),
    case!("clan_lattice", 0, ["clan", "clans.guk", "--clan", "Lattice"]),
    case!("clan_missing", 2, ["clan", "clans.guk", "--clan", "Sq"]),
    case!(
        "closure_empty",
        0,
        ["clan-closure", "clans.guk", "--category", "C2"]
    ),
    case!(
        "closure_lattice",
        0,
        [
            "clan-closure",
            "clans.guk",
            "--category",
            "Sq",
            "--generators",
            "l"
        ]
    ),
    case!(
        "closure_unknown",
        2,
        [
            "clan-closure",
            "clans.guk",
            "--category",
            "Sq",
            "--generators",
            "zz"
        ]
    ),
    case!("missing_file", 2, ["check", "does_not_exist.guk"]),
];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Arguments with the fixture name replaced by its full path.
pub fn resolved_args(case: &Case) -> Vec<String> {
    case.args
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if i == 1 {
                fixture_dir().join(a).display().to_string()
            } else {
                a.to_string()
            }
        })
        .collect()
}

/// Runs a case in-process with the default work cap.
pub fn run(case: &Case, machine: bool) -> guk_cli::Output {
    let mut args = vec!["guk".to_string()];
    if machine {
        args.push("--format".into());
        args.push("machine".into());
    }
    args.extend(resolved_args(case));
    guk_cli::execute_with_limit(args, None)
}

pub fn golden_path(case: &Case, machine: bool) -> PathBuf {
    let ext = if machine { "json" } else { "txt" };
    golden_dir().join(format!("{}.{ext}", case.id))
}

/// Mismatches between current output and the golden files, one line each.
/// With `GUK_BLESS=1` set the golden files are rewritten instead.
pub fn golden_mismatches() -> Vec<String> {
    let bless = std::env::var("GUK_BLESS").is_ok_and(|v| v == "1");
    let mut bad = Vec::new();
    for case in CASES {
        for machine in [false, true] {
            let out = run(case, machine);
            if out.code != case.code {
                bad.push(format!("{}: exit {} (expected {})", case.id, out.code, case.code));
            }
            let path = golden_path(case, machine);
            if bless {
                std::fs::create_dir_all(golden_dir()).unwrap();
                std::fs::write(&path, &out.stdout).unwrap();
                continue;
            }
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == out.stdout => {}
                Ok(_) => bad.push(format!("{}: output differs from {}", case.id, path.display())),
                Err(_) => bad.push(format!("{}: missing golden file {}", case.id, path.display())),
            }
        }
    }
    bad
}
