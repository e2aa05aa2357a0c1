use homlkit_core::semantics::exhaustive::{find_countermodel, relations, DEFAULT_WORK_LIMIT};
use homlkit_core::semantics::{
    denotation_size, enumerate_denotation, eval, holds_at, index_of, mvalid, value_at, KripkeModel, Scope, SemValue,
};
use homlkit_core::surface::{elaborate, load_theory, FrameFlags, LogicType, Term, Theory};
use proptest::prelude::*;

const SIGNATURE: &str = "const p q : prop\nconst P : i > prop\nconst a b : i\n";

fn theory_with(goal: &str) -> Theory {
    load_theory(&format!("{SIGNATURE}goal g: {goal}")).unwrap_or_else(|e| panic!("{goal}: {e}"))
}

fn formula(text: &str) -> Term {
    theory_with(text).goals[0].term.clone()
}

fn prop_ty() -> LogicType {
    LogicType::Prop
}

fn pred_ty() -> LogicType {
    LogicType::property()
}

/// A model with the test signature; `p`, `q`, `P`, `a`, `b` given by index.
#[allow(clippy::too_many_arguments)]
fn model(access: &[Vec<bool>], exists: u64, p: u64, q: u64, pred: u64, a: usize, b: usize, m: usize) -> KripkeModel {
    let n = access.len();
    let scope = Scope::new(n, m).unwrap();
    let mut model = KripkeModel::universal(scope);
    model.access = access.to_vec();
    for e in 0..m {
        for w in 0..n {
            model.exists_at[e][w] = exists >> (e * n + w) & 1 == 1;
        }
    }
    model.interpret("p", prop_ty(), value_at(&prop_ty(), p, &scope).unwrap()).unwrap();
    model.interpret("q", prop_ty(), value_at(&prop_ty(), q, &scope).unwrap()).unwrap();
    model.interpret("P", pred_ty(), value_at(&pred_ty(), pred, &scope).unwrap()).unwrap();
    model.interpret("a", LogicType::Ind, SemValue::Entity(a)).unwrap();
    model.interpret("b", LogicType::Ind, SemValue::Entity(b)).unwrap();
    model
}

fn arb_model() -> impl Strategy<Value = KripkeModel> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), n),
            0u64..1 << (n * m),
            0u64..1 << n,
            0u64..1 << n,
            0u64..1 << (n * m),
            0..m,
            0..m,
        )
            .prop_map(move |(r, ex, p, q, pred, a, b)| model(&r, ex, p, q, pred, a, b, m))
    })
}

fn arb_formula() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("p".to_string()),
        Just("q".to_string()),
        Just("true".to_string()),
        Just("false".to_string()),
        Just("P a".to_string()),
        Just("P b".to_string()),
        Just("a == b".to_string()),
        Just("p == q".to_string()),
        Just("existsA x. P x".to_string()),
        Just("forallP x : i. P x".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("~({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) & ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) | ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) -> ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) <-> ({b})")),
            inner.clone().prop_map(|a| format!("box ({a})")),
            inner.prop_map(|a| format!("dia ({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn necessitation(m in arb_model(), f in arb_formula()) {
        let phi = formula(&f);
        if mvalid(&m, &phi).unwrap() {
            prop_assert!(mvalid(&m, &Term::boxed(phi)).unwrap());
        }
    }

    #[test]
    fn evaluation_is_deterministic(m in arb_model(), f in arb_formula()) {
        let phi = formula(&f);
        prop_assert_eq!(eval(&m, &[], &phi).unwrap(), eval(&m, &[], &phi).unwrap());
    }

    #[test]
    fn elaboration_preserves_meaning(m in arb_model(), f in arb_formula()) {
        let th = theory_with(&f);
        let core = elaborate(&th);
        prop_assert!(core.is_elaborated());
        // Expanding `p == q` quantifies over prop > prop, which is beyond
        // the cap at three worlds.
        prop_assume!(m.scope.worlds < 3);
        prop_assert_eq!(eval(&m, &[], &th.goals[0].term).unwrap(), eval(&m, &[], &core.goals[0].term).unwrap());
    }

    #[test]
    fn diamond_is_dual_to_box(m in arb_model(), f in arb_formula()) {
        let phi = formula(&f);
        let dual = Term::not(Term::boxed(Term::not(phi.clone())));
        prop_assert_eq!(eval(&m, &[], &Term::diamond(phi)).unwrap(), eval(&m, &[], &dual).unwrap());
    }

    #[test]
    fn denotations_enumerate_without_duplicates(ty in arb_type(), n in 1usize..=2, m in 1usize..=2) {
        let scope = Scope::with_cap(n, m, 1 << 12).unwrap();
        if let Ok(size) = denotation_size(&ty, &scope) {
            let all = enumerate_denotation(&ty, &scope).unwrap();
            prop_assert_eq!(all.len() as u64, size);
            for (i, v) in all.iter().enumerate() {
                prop_assert_eq!(index_of(&ty, v, &scope).unwrap(), i as u64);
            }
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), all.len());
        }
    }
}

fn arb_type() -> impl Strategy<Value = LogicType> {
    let leaf = prop_oneof![Just(LogicType::Ind), Just(LogicType::Prop)];
    leaf.prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| LogicType::fun(a, b)))
}

/// Every model at `n` worlds under `frame`, with `p` and `q` ranging over
/// all propositions; `P`, `a`, `b` and existence fixed.
fn each_frame_model(n: usize, m: usize, frame: FrameFlags, mut f: impl FnMut(&KripkeModel)) {
    for r in relations(n, frame) {
        for p in 0..1 << n {
            for q in 0..1 << n {
                f(&model(&r, u64::MAX >> (64 - n * m), p, q, 0, 0, 0, m));
            }
        }
    }
}

#[test]
fn k_is_valid_up_to_two_worlds() {
    let k = formula("box (p -> q) -> box p -> box q");
    for n in 1..=2 {
        for m in 1..=2 {
            each_frame_model(n, m, FrameFlags::K, |model| assert!(mvalid(model, &k).unwrap()));
        }
    }
}

#[test]
fn reflexive_frames_validate_t() {
    let t = formula("box p -> p");
    for n in 1..=3 {
        each_frame_model(n, 2, FrameFlags::T, |model| assert!(mvalid(model, &t).unwrap()));
    }
    let mut failures = 0;
    each_frame_model(2, 1, FrameFlags::K, |model| failures += !mvalid(model, &t).unwrap() as usize);
    assert!(failures > 0);
}

#[test]
fn equivalence_frames_validate_five() {
    let five = formula("dia p -> box dia p");
    for n in 1..=3 {
        each_frame_model(n, 2, FrameFlags::S5, |model| {
            let r = &model.access;
            for x in 0..n {
                assert!(r[x][x]);
                for y in 0..n {
                    assert_eq!(r[x][y], r[y][x]);
                    for z in 0..n {
                        assert!(!(r[x][y] && r[y][z]) || r[x][z]);
                    }
                }
            }
            assert!(mvalid(model, &five).unwrap());
        });
    }
    // Equivalence relations on three worlds are the five set partitions.
    assert_eq!(relations(3, FrameFlags::S5).len(), 5);
}

#[test]
fn leibniz_equality_on_individuals_is_identity() {
    let eq = formula("a == b");
    let expanded = elaborate(&theory_with("a == b")).goals[0].term.clone();
    assert!(!expanded.has_sugar());
    for n in 1..=2 {
        for m in 1..=3 {
            for a in 0..m {
                for b in 0..m {
                    let model = model(&vec![vec![true; n]; n], 0, 0, 0, 0, a, b, m);
                    assert_eq!(mvalid(&model, &eq).unwrap(), a == b);
                    assert_eq!(mvalid(&model, &expanded).unwrap(), a == b);
                }
            }
        }
    }
}

#[test]
fn two_world_model_separates_agreement_from_identity() {
    // Two worlds, total access, p false at both, q true only at the second.
    let model = model(&[vec![true, true], vec![true, true]], 0, 0b00, 0b10, 0, 0, 0, 1);
    assert!(holds_at(&model, &formula("p <-> q"), 0).unwrap());
    assert!(!holds_at(&model, &formula("p <-> q"), 1).unwrap());
    assert_ne!(eval(&model, &[], &formula("p")).unwrap(), eval(&model, &[], &formula("q")).unwrap());
    assert!(!holds_at(&model, &formula("p == q"), 0).unwrap());
}

#[test]
fn barcan_direction_is_possibilist_only() {
    let scope = Scope::new(2, 2).unwrap();
    let possibilist = theory_with("(forallP x : i. box P x) -> box forallP x : i. P x");
    let actualist = theory_with("(forallA x. box P x) -> box forallA x. P x");
    let g = |t: &Theory| t.goals[0].term.clone();
    assert!(find_countermodel(&possibilist, &g(&possibilist), scope, DEFAULT_WORK_LIMIT)
        .unwrap()
        .is_none());
    let (m, w) = find_countermodel(&actualist, &g(&actualist), scope, DEFAULT_WORK_LIMIT)
        .unwrap()
        .expect("varying domains refute the actualist form");
    assert!(!holds_at(&m, &g(&actualist), w).unwrap());
}
