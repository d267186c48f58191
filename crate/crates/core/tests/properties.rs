//! Property tests: verdicts that must not depend on incidental choices.

use std::sync::Arc;

use proptest::prelude::*;

use guk_core::clans::{validate_clan, Clan};
use guk_core::fixtures;
use guk_core::functor::enumerate_set_functors;
use guk_core::limits::has_all_finite_limits;
use guk_core::sites::{
    check_sheaf, open_set_site, sheafify, validate_topology, PullbackChoice, SheafStatus, Site, Space,
};
use guk_core::{Arrow, FinCategory, MorId, ObjId, SetFunctor, Verdict};

/// Sites whose chosen pullbacks are not all forced: the chaotic topology on
/// categories with non-identity automorphisms or parallel arrows.
fn choice_sites() -> Vec<(Site, Site)> {
    let mut out = Vec::new();
    for c in [
        fixtures::z2(),
        fixtures::arrow(),
        fixtures::discrete(2),
        fixtures::span(),
    ] {
        let base = Arc::new(c);
        let Ok(first) = Site::chaotic(base.clone()) else {
            continue;
        };
        let cov = base.objects().map(|a| first.covers(a).to_vec()).collect();
        let last = Site::with_choice(base, cov, PullbackChoice::Last).unwrap();
        out.push((first, last));
    }
    out
}

fn sierpinski_presheaves() -> (Site, Vec<SetFunctor>) {
    let site = open_set_site(&Space::sierpinski()).unwrap();
    let all = enumerate_set_functors(&site.op, 2).unwrap();
    (site, all)
}

/// The same category with objects and morphisms renumbered.
fn relabel(c: &FinCategory, obj_perm: &[usize], mor_perm: &[usize]) -> FinCategory {
    let mut objects = vec![String::new(); c.num_objects()];
    for a in c.objects() {
        objects[obj_perm[a.0]] = c.obj_name(a).to_string();
    }
    let mut arrows = vec![None; c.num_morphisms()];
    for f in c.morphisms() {
        arrows[mor_perm[f.0]] = Some(Arrow {
            name: c.mor_name(f).to_string(),
            src: ObjId(obj_perm[c.src(f).0]),
            tgt: ObjId(obj_perm[c.tgt(f).0]),
        });
    }
    let m = c.num_morphisms();
    let mut comp = vec![None; m * m];
    for g in c.morphisms() {
        for f in c.morphisms() {
            if let Some(gf) = c.try_compose(g, f) {
                comp[mor_perm[g.0] * m + mor_perm[f.0]] = Some(MorId(mor_perm[gf.0]));
            }
        }
    }
    let mut identities = vec![MorId(0); c.num_objects()];
    for a in c.objects() {
        identities[obj_perm[a.0]] = MorId(mor_perm[c.id(a).0]);
    }
    FinCategory::from_tables(
        objects,
        arrows.into_iter().map(Option::unwrap).collect(),
        identities,
        comp,
    )
    .unwrap()
}

fn lex_bases() -> Vec<Arc<FinCategory>> {
    fixtures::corpus()
        .into_iter()
        .map(|(_, c)| Arc::new(c))
        .filter(|c| has_all_finite_limits(c).unwrap().is_pass())
        .collect()
}

fn law(v: &Verdict) -> Option<String> {
    v.witness().map(|w| w.law.clone())
}

#[test]
fn topology_verdict_ignores_pullback_choice() {
    for (first, last) in choice_sites() {
        assert_eq!(
            validate_topology(&first).unwrap().is_pass(),
            validate_topology(&last).unwrap().is_pass(),
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sheaf_status_ignores_pullback_choice(site_pick in any::<prop::sample::Index>(), f_pick in any::<prop::sample::Index>()) {
        let sites = choice_sites();
        let (first, last) = &sites[site_pick.index(sites.len())];
        let presheaves = enumerate_set_functors(&first.op, 2).unwrap();
        let f = &presheaves[f_pick.index(presheaves.len())];
        let a = check_sheaf(f, first).unwrap().status;
        let b = check_sheaf(f, last).unwrap().status;
        prop_assert_eq!(a, b);
        prop_assert_eq!(sheafify(f, first).unwrap().sheaf.sizes(), sheafify(f, last).unwrap().sheaf.sizes());
    }

    #[test]
    fn sheafification_is_a_sheaf(pick in any::<prop::sample::Index>()) {
        let (site, all) = sierpinski_presheaves();
        let f = &all[pick.index(all.len())];
        let a = sheafify(f, &site).unwrap();
        prop_assert_eq!(check_sheaf(&a.sheaf, &site).unwrap().status, SheafStatus::Sheaf);
        if check_sheaf(f, &site).unwrap().status == SheafStatus::Sheaf {
            prop_assert!(a.unit.is_invertible(&a.sheaf));
        }
    }

    #[test]
    fn clan_verdict_is_invariant_under_relabelling(
        base_pick in any::<prop::sample::Index>(),
        display_bits in prop::collection::vec(any::<bool>(), 16),
        obj_seed in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle(),
        mor_seed in Just((0..16usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let bases = lex_bases();
        let c = &bases[base_pick.index(bases.len())];
        prop_assume!(c.num_objects() <= 8 && c.num_morphisms() <= 16);
        // Restrict the shuffled ranges to permutations of the right size.
        let obj_perm: Vec<usize> = obj_seed.into_iter().filter(|&i| i < c.num_objects()).collect();
        let mor_perm: Vec<usize> = mor_seed.into_iter().filter(|&i| i < c.num_morphisms()).collect();
        let display: Vec<MorId> = c.morphisms().filter(|f| display_bits[f.0]).collect();
        let moved = Arc::new(relabel(c, &obj_perm, &mor_perm));
        prop_assert!(moved.validate().is_pass());
        let moved_display: Vec<MorId> = display.iter().map(|f| MorId(mor_perm[f.0])).collect();

        let before = validate_clan(&Clan::new(c.clone(), None, display).unwrap()).unwrap();
        let after = validate_clan(&Clan::new(moved, None, moved_display).unwrap()).unwrap();
        prop_assert_eq!(before.is_pass(), after.is_pass());
        prop_assert_eq!(law(&before), law(&after));
    }
}
