use proptest::prelude::*;

use super::counting::POSITIVE;
use super::*;
use crate::semantics::{Evaluator, Scope};
use crate::surface::{inline_term, load_theory, Theory};
use crate::theories::{bundle_source, load_bundle, BundleId, BundleOptions, EssenceVariant};

fn scope(n: usize, m: usize) -> Scope {
    Scope::new(n, m).unwrap()
}

fn family_ty() -> LogicType {
    LogicType::fun(LogicType::property(), LogicType::Prop)
}

fn model_with(family: &PropertyFamily, access: &[(usize, usize)]) -> KripkeModel {
    let mut m = KripkeModel::universal(family.scope).with_access(access);
    m.interpret(POSITIVE, family_ty(), family.to_value()).unwrap();
    m
}

fn total(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|w| (0..n).map(move |v| (w, v))).collect()
}

/// Classical ultrafilter on the subsets of `{0..m}`, written without any
/// of the modal machinery.
fn classical_ultrafilter(m: usize, member: &[bool]) -> bool {
    let full = (1usize << m) - 1;
    if !member[full] || member[0] {
        return false;
    }
    for a in 0..=full {
        if !member[a] {
            if !member[full ^ a] {
                return false;
            }
            continue;
        }
        for b in 0..=full {
            if a & b == a && !member[b] {
                return false;
            }
            if member[b] && !member[a & b] {
                return false;
            }
        }
    }
    true
}

#[test]
fn one_world_ultrafilters_match_the_classical_definition() {
    for m in 1..=3 {
        let s = scope(1, m);
        let sets = 1usize << m;
        let mut count = 0;
        for bits in 0u64..1 << sets {
            let member: Vec<bool> = (0..sets).map(|i| bits >> i & 1 == 1).collect();
            let family = PropertyFamily::from_fn(s, |p| member[p.0 as usize] as u64).unwrap();
            let model = model_with(&family, &[(0, 0)]);
            let expected = classical_ultrafilter(m, &member);
            for mode in [UltrafilterMode::Intension, UltrafilterMode::Extension] {
                assert_eq!(is_modal_ultrafilter(&model, &family, mode).unwrap().global, expected, "m={m} {bits:b}");
            }
            count += expected as usize;
        }
        assert_eq!(count, m);
    }
}

#[test]
fn principal_families_are_ultrafilters() {
    let s = scope(2, 3);
    for e in 0..3 {
        // Sets containing e at every world.
        let family = PropertyFamily::from_fn(s, |p| if (0..2).all(|w| p.contains(e, w, &s)) { 0b11 } else { 0 }).unwrap();
        let model = model_with(&family, &total(2));
        assert!(is_modal_filter(&model, &family).unwrap().global);
    }
    let s1 = scope(1, 3);
    let principal = PropertyFamily::from_fn(s1, |p| p.contains(1, 0, &s1) as u64).unwrap();
    let model = model_with(&principal, &[(0, 0)]);
    assert!(is_modal_ultrafilter(&model, &principal, UltrafilterMode::Intension).unwrap().global);
    // The sets containing both 1 and 2 form a filter below it, not an ultrafilter.
    let smaller = PropertyFamily::from_fn(s1, |p| (p.contains(1, 0, &s1) && p.contains(2, 0, &s1)) as u64).unwrap();
    assert!(is_modal_filter(&model, &smaller).unwrap().global);
    assert!(!is_modal_ultrafilter(&model, &smaller, UltrafilterMode::Intension).unwrap().global);
}

#[test]
fn degenerate_families_are_not_filters() {
    let s = scope(2, 2);
    let empty = PropertyFamily::from_fn(s, |_| 0).unwrap();
    let model = model_with(&empty, &total(2));
    assert_eq!(is_modal_filter(&model, &empty).unwrap().per_world, vec![false, false]);
    let everything = PropertyFamily::from_fn(s, |_| 0b11).unwrap();
    assert!(!is_modal_filter(&model, &everything).unwrap().global);
}

#[test]
fn family_scope_must_match_the_model() {
    let family = PropertyFamily::from_fn(scope(1, 2), |_| 1).unwrap();
    let model = KripkeModel::universal(scope(2, 2));
    assert!(matches!(is_modal_filter(&model, &family), Err(AnalysisError::ScopeMismatch(_))));
    assert!(matches!(
        PropertyFamily::from_value(&SemValue::table(vec![]), scope(1, 1)),
        Err(AnalysisError::ScopeMismatch(_))
    ));
}

fn filter_theory() -> Theory {
    let src = format!(
        "{}\ngoal f: Filter Phi\ngoal u: Ultrafilter Phi\ngoal ue: UltrafilterExt Phi\n",
        bundle_source(BundleId::Filters, &BundleOptions::default())
    );
    load_theory(&src).unwrap()
}

fn arb_family_model() -> impl Strategy<Value = (PropertyFamily, KripkeModel)> {
    prop_oneof![Just((1usize, 2usize)), Just((2, 1)), Just((2, 2))].prop_flat_map(|(n, m)| {
        let sets = 1usize << (n * m);
        (
            prop::collection::vec(0u64..1 << n, sets),
            prop::collection::vec(any::<bool>(), n * n),
            any::<bool>(),
        )
            .prop_map(move |(mut membership, r, upward)| {
                let s = Scope::new(n, m).unwrap();
                if upward {
                    // Bias towards filters: close under supersets world-wise.
                    for p in 0..sets {
                        for q in 0..sets {
                            if p & q == p {
                                membership[q] |= membership[p];
                            }
                        }
                    }
                }
                let family = PropertyFamily { scope: s, membership };
                let pairs: Vec<(usize, usize)> =
                    (0..n * n).filter(|&i| r[i]).map(|i| (i / n, i % n)).collect();
                let model = model_with(&family, &pairs);
                let mut with_phi = model.clone();
                with_phi.interpret("Phi", family_ty(), family.to_value()).unwrap();
                (family, with_phi)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mask_checks_agree_with_the_theory_definitions((family, model) in arb_family_model()) {
        let th = filter_theory();
        let mut ev = Evaluator::new(&model).unwrap();
        let mask = |r: &FilterReport| r.per_world.iter().enumerate().fold(0u64, |acc, (w, &b)| acc | (b as u64) << w);
        let mut dsl = |g: &str| ev.prop_mask(&inline_term(&th, &th.goal(g).unwrap().term)).unwrap();
        prop_assert_eq!(dsl("f"), mask(&is_modal_filter(&model, &family).unwrap()));
        prop_assert_eq!(dsl("u"), mask(&is_modal_ultrafilter(&model, &family, UltrafilterMode::Intension).unwrap()));
        prop_assert_eq!(dsl("ue"), mask(&is_modal_ultrafilter(&model, &family, UltrafilterMode::Extension).unwrap()));
    }

    #[test]
    fn ultrafilters_are_filters((family, model) in arb_family_model()) {
        let uf = is_modal_ultrafilter(&model, &family, UltrafilterMode::Intension).unwrap();
        let f = is_modal_filter(&model, &family).unwrap();
        for (u, f) in uf.per_world.iter().zip(&f.per_world) {
            prop_assert!(!u || *f);
        }
    }

    #[test]
    fn diagonal_escapes_every_map(n in 1usize..=2, m in 1usize..=2, seed in any::<u64>()) {
        let s = Scope::new(n, m).unwrap();
        let model = KripkeModel::universal(s);
        let sets = 1u64 << (n * m);
        let f: Vec<ModalSet> = (0..m).map(|x| ModalSet((seed >> (x * 8)) % sets)).collect();
        let d = diagonal_witness(&model, &f).unwrap();
        prop_assert!(d.outside_range);
        for (x, fx) in f.iter().enumerate() {
            for w in 0..n {
                prop_assert_ne!(d.set.contains(x, w, &s), fx.contains(x, w, &s));
            }
        }
    }
}

#[test]
fn counting_reads_the_positive_constant() {
    let s = scope(2, 2);
    let full = ModalSet::full(&s);
    let only_full = PropertyFamily::from_fn(s, |p| if p == full { 0b11 } else { 0 }).unwrap();
    let model = model_with(&only_full, &total(2));
    assert_eq!(distinct_positive_count(&model, CountMode::default()).unwrap(), 1);
    assert_eq!(distinct_positive_count(&model, CountMode::AllWorlds).unwrap(), 1);
    assert_eq!(positive_extensions(&model, 1).unwrap(), 1);
    // Positive only at world 1.
    let later = PropertyFamily::from_fn(s, |p| if p == full { 0b10 } else { 0 }).unwrap();
    let model = model_with(&later, &total(2));
    assert_eq!(distinct_positive_count(&model, CountMode::Designated(0)).unwrap(), 0);
    assert_eq!(distinct_positive_count(&model, CountMode::Designated(1)).unwrap(), 1);
    assert_eq!(distinct_positive_count(&model, CountMode::AllWorlds).unwrap(), 0);
    assert!(distinct_positive_count(&KripkeModel::universal(s), CountMode::default()).is_err());
}

#[test]
fn equipollence_examples() {
    let s = scope(1, 3);
    let model = KripkeModel::universal(s);
    let one = ModalSet::rigid(0b001, &s);
    let two = ModalSet::rigid(0b011, &s);
    let other_two = ModalSet::rigid(0b110, &s);
    assert!(equipollent(&model, two, two).unwrap());
    assert!(!equipollent(&model, one, two).unwrap());
    assert!(equipollent(&model, two, other_two).unwrap());
}

#[test]
fn equipollence_is_equal_size_at_each_world() {
    for (n, m) in [(1, 3), (2, 2)] {
        let s = scope(n, m);
        let model = KripkeModel::universal(s);
        let sets: Vec<ModalSet> = ModalSet::all(&s).unwrap().collect();
        for &p in &sets {
            for &q in &sets {
                let expected = (0..n).all(|w| p.extension(w, &s).count_ones() == q.extension(w, &s).count_ones());
                assert_eq!(equipollent(&model, p, q).unwrap(), expected);
            }
        }
    }
}

#[test]
fn equipollence_agrees_with_the_theory_definition() {
    let src = format!(
        "{}\nconst p q : i > prop\ngoal e: Equip p q\n",
        bundle_source(BundleId::ModalMath, &BundleOptions::default())
    );
    let th = load_theory(&src).unwrap();
    let goal = inline_term(&th, &th.goal("e").unwrap().term);
    let s = scope(2, 2);
    let sets: Vec<ModalSet> = ModalSet::all(&s).unwrap().collect();
    for &p in &sets {
        for &q in &sets {
            let mut model = KripkeModel::universal(s);
            model.interpret("p", LogicType::property(), p.to_value(&s)).unwrap();
            model.interpret("q", LogicType::property(), q.to_value(&s)).unwrap();
            let mask = Evaluator::new(&model).unwrap().prop_mask(&goal).unwrap();
            for w in 0..2 {
                assert_eq!(mask >> w & 1 == 1, equipollent_at(&model, p, q, w).unwrap());
            }
        }
    }
}

#[test]
fn successor_of_k_is_k_plus_one() {
    for m in 1..=3 {
        for n in 1..=2 {
            let model = KripkeModel::universal(scope(n, m));
            for k in 0..m {
                assert!(successor_cardinal_check(&model, k).unwrap(), "k={k} at ({n},{m})");
            }
            assert_eq!(
                successor_cardinal_check(&model, m),
                Err(AnalysisError::SuccessorOutOfScope { k: m, entities: m })
            );
        }
    }
}

#[test]
fn too_many_positives_admit_no_surjection() {
    let s = scope(1, 2);
    // Three of the four sets are positive.
    let family = PropertyFamily::from_fn(s, |p| (p.0 != 0) as u64).unwrap();
    let model = model_with(&family, &[(0, 0)]);
    let r = surjection_exists(&model, CountMode::default()).unwrap();
    assert_eq!(r.positives.len(), 3);
    assert!(!r.exists);
    assert_eq!(r.maps_checked, 9);
    let two = PropertyFamily::from_fn(s, |p| p.contains(0, 0, &s) as u64).unwrap();
    let r = surjection_exists(&model_with(&two, &[(0, 0)]), CountMode::default()).unwrap();
    assert!(r.exists);
    let w = r.witness.unwrap();
    assert!(w.contains(&r.positives[0]) && w.contains(&r.positives[1]));
}

#[test]
fn goedel_minimum_positive_counts() {
    let th = load_bundle(BundleId::Goedel, BundleOptions::default()).unwrap().theory;
    let opts = CountOptions::default();
    let two = min_positive_count(&th, scope(1, 2), &opts).unwrap();
    assert!(two.complete && !two.empty);
    assert_eq!(two.min, 2);
    let three = min_positive_count(&th, scope(1, 3), &opts).unwrap();
    assert!(three.complete);
    assert_eq!(three.min, 4);
    let w = three.witness.unwrap();
    assert_eq!(distinct_positive_count(&w, CountMode::default()).unwrap(), 4);
    assert!(!surjection_exists(&w, CountMode::default()).unwrap().exists);
    for mode in [UltrafilterMode::Intension, UltrafilterMode::Extension] {
        let family = PropertyFamily::from_model(&w, POSITIVE).unwrap();
        assert!(is_modal_ultrafilter(&w, &family, mode).unwrap().global);
    }
}

#[test]
fn minimum_is_monotone_under_extra_axioms() {
    let b = load_bundle(BundleId::Goedel, BundleOptions::default()).unwrap();
    let stronger = load_theory(&format!("{}\naxiom extra: forallA x. G x\n", b.source)).unwrap();
    let opts = CountOptions::default();
    for s in [scope(1, 2), scope(1, 3), scope(2, 1)] {
        let base = min_positive_count(&b.theory, s, &opts).unwrap();
        let more = min_positive_count(&stronger, s, &opts).unwrap();
        assert!(more.counted <= base.counted);
        assert!(more.empty || more.min >= base.min, "{s}");
    }
}

#[test]
fn inconsistent_theory_counts_as_empty() {
    let th = load_bundle(
        BundleId::Goedel,
        BundleOptions {
            essence: EssenceVariant::Goedel1970,
            ..BundleOptions::default()
        },
    )
    .unwrap()
    .theory;
    let r = min_positive_count(&th, scope(1, 2), &CountOptions::default()).unwrap();
    assert_eq!((r.min, r.empty, r.complete, r.models), (0, true, true, 0));
}

#[test]
fn actualist_reading_filters_models_by_existence() {
    let th = load_bundle(BundleId::Goedel, BundleOptions::default()).unwrap().theory;
    let all = min_positive_count(&th, scope(1, 3), &CountOptions::default()).unwrap();
    let opts = CountOptions {
        existing: Some(2),
        ..CountOptions::default()
    };
    let r = min_positive_count(&th, scope(1, 3), &opts).unwrap();
    assert!(r.counted > 0 && r.counted < all.counted);
    assert!(r.min >= all.min);
}
