use proptest::prelude::*;

use super::*;
use crate::semantics::exhaustive::{self, DEFAULT_WORK_LIMIT};
use crate::semantics::{holds_at, mvalid, satisfies_theory};
use crate::surface::{elaborate, load_theory, Binder, FrameFlags, LogicType};

fn scope(n: usize, m: usize) -> Scope {
    Scope::new(n, m).unwrap()
}

fn opts() -> GroundOptions {
    GroundOptions::default()
}

fn th(src: &str) -> Theory {
    load_theory(src).unwrap()
}

#[test]
fn falsum_axiom_is_unsatisfiable() {
    let t = th("axiom false");
    let p = ground(&t, scope(2, 1)).unwrap();
    assert!(p.cnf.clauses().iter().any(Vec::is_empty));
    assert_eq!(solve(&p, DEFAULT_BUDGET).unwrap(), None);
}

#[test]
fn reflexive_frame_forces_diagonal() {
    let t = th("frame refl");
    let p = ground(&t, scope(2, 1)).unwrap();
    for w in 0..2 {
        assert!(p.cnf.clauses().contains(&vec![p.layout.access[w][w]]));
    }
}

#[test]
fn k_is_valid_and_t_needs_reflexivity() {
    let k = th("goal forallP p q:prop. box (p -> q) -> box p -> box q");
    assert_eq!(
        check_validity_bounded(&k, &k.goals[0].term, scope(2, 1), &opts()).unwrap(),
        Verdict::ValidUpToScope(scope(2, 1))
    );
    let t = th("goal forallP p:prop. box p -> p");
    match check_validity_bounded(&t, &t.goals[0].term, scope(2, 1), &opts()).unwrap() {
        Verdict::Countermodel { model, world } => {
            assert!(!model.access[world][world]);
            assert!(!holds_at(&model, &t.goals[0].term, world).unwrap());
        }
        other => panic!("{other:?}"),
    }
    let t = th("frame refl\ngoal forallP p:prop. box p -> p");
    assert!(matches!(
        check_validity_bounded(&t, &t.goals[0].term, scope(2, 1), &opts()).unwrap(),
        Verdict::ValidUpToScope(_)
    ));
}

#[test]
fn enumeration_counts_free_choices() {
    // r (1 bit) x existsAt (1 bit) x c (1 bit) at one world, one entity.
    let t = th("const c : prop");
    let e = enumerate_models(&t, scope(1, 1), 100, &opts()).unwrap();
    assert!(e.exhausted);
    assert_eq!(e.models.len(), 8);
    for (i, a) in e.models.iter().enumerate() {
        for b in &e.models[i + 1..] {
            assert_ne!(a, b);
        }
    }
    let t = th("frame refl\nconst c : prop");
    assert_eq!(enumerate_models(&t, scope(1, 1), 100, &opts()).unwrap().models.len(), 4);
    let t = th("const c : prop\naxiom c");
    let e = enumerate_models(&t, scope(1, 1), 100, &opts()).unwrap();
    assert_eq!(e.models.len(), 4);
    for m in &e.models {
        assert_eq!(m.constant("c").unwrap().value, SemValue::prop(1, 1));
    }
}

#[test]
fn enumeration_limit_is_reported() {
    let t = th("const c : prop");
    let e = enumerate_models(&t, scope(1, 1), 3, &opts()).unwrap();
    assert_eq!(e.models.len(), 3);
    assert!(!e.exhausted);
}

#[test]
fn individual_constants_decode_to_entities() {
    let t = th("const c d : i\nconst f : i > i\naxiom ~(c == d) & f c == d & f d == c");
    let m = find_model(&t, scope(1, 2), &opts()).unwrap().expect("a model exists");
    assert!(satisfies_theory(&m, &elaborate(&t)).unwrap());
    assert!(find_model(&t, scope(1, 1), &opts()).unwrap().is_none());
}

#[test]
fn higher_order_constant_applied_to_symbolic_property() {
    // `P` must hold of the (unknown) extension of existsAt.
    let t = th("const P : (i > prop) > prop\naxiom P existsAt & ~P (\\x:i. true) & existsP x:i. existsAt x");
    let m = find_model(&t, scope(1, 2), &opts()).unwrap().expect("a model exists");
    assert!(satisfies_theory(&m, &elaborate(&t)).unwrap());
    let ex = m.exists_at_value();
    assert_ne!(ex, SemValue::table(vec![SemValue::prop(1, 1); 2]));
}

#[test]
fn unsupported_constant_order() {
    let ty = "((((i > prop) > prop) > prop) > prop)";
    let t = th(&format!("const Z : {ty}"));
    assert!(matches!(ground(&t, scope(1, 1)), Err(GroundError::Unsupported { .. })));
}

#[test]
fn cap_is_enforced_for_constants() {
    let t = th("const P : ((i > prop) > prop) > prop");
    assert!(matches!(
        ground(&t, scope(2, 2)),
        Err(GroundError::Semantics(SemanticsError::ScopeTooLarge { .. }))
    ));
}

#[test]
fn budget_exhaustion_is_an_error() {
    // Seven individuals pairwise distinct in a six-entity domain.
    let names: Vec<String> = (0..7).map(|i| format!("c{i}")).collect();
    let mut src = format!("const {} : i\n", names.join(" "));
    for i in 0..7 {
        for j in i + 1..7 {
            src.push_str(&format!("axiom ~({} == {})\n", names[i], names[j]));
        }
    }
    let t = th(&src);
    let tight = GroundOptions {
        budget: 2,
        ..GroundOptions::default()
    };
    assert_eq!(
        find_model(&t, scope(1, 6), &tight).unwrap_err(),
        GroundError::BudgetExhausted { budget: 2 }
    );
    assert_eq!(find_model(&t, scope(1, 6), &opts()).unwrap(), None);
}

#[test]
fn symmetry_breaking_preserves_existence() {
    let cases = [
        "goal forallP p:prop. box p -> p",
        "frame refl symm\nconst p : prop\naxiom dia p & dia ~p",
        "frame refl trans\ngoal forallP p:prop. dia p -> box dia p",
        "const p : prop\naxiom box false & dia true",
    ];
    let sb = GroundOptions {
        symmetry_breaking: true,
        ..GroundOptions::default()
    };
    for src in cases {
        let t = th(src);
        for n in 1..=3 {
            let s = scope(n, 1);
            let (plain, broken) = match t.goals.first() {
                Some(g) => (
                    check_validity_bounded(&t, &g.term, s, &opts()).unwrap().label(),
                    check_validity_bounded(&t, &g.term, s, &sb).unwrap().label(),
                ),
                None => (
                    check_satisfiable(&t, s, &opts()).unwrap().label(),
                    check_satisfiable(&t, s, &sb).unwrap().label(),
                ),
            };
            assert_eq!(plain, broken, "{src} at {s}");
        }
    }
    let t = th("const c : prop");
    let all = enumerate_models(&t, scope(2, 1), 1000, &opts()).unwrap().models.len();
    let fewer = enumerate_models(&t, scope(2, 1), 1000, &sb).unwrap().models.len();
    assert!(fewer < all);
}

#[test]
fn determinism() {
    let t = th("frame refl\nconst P : i > prop\nconst c : i\naxiom dia P c\ngoal box P c");
    let a = check_validity_bounded(&t, &t.goals[0].term, scope(2, 2), &opts()).unwrap();
    let b = check_validity_bounded(&t, &t.goals[0].term, scope(2, 2), &opts()).unwrap();
    assert_eq!(a, b);
    let p1 = export_dimacs(&ground(&t, scope(2, 2)).unwrap());
    let p2 = export_dimacs(&ground(&t, scope(2, 2)).unwrap());
    assert_eq!(p1, p2);
}

#[test]
fn barcan_possibilist_valid_actualist_not() {
    let t = th("const P : i > prop\ngoal (forallP x:i. box P x) -> box forallP x:i. P x");
    let a = th("const P : i > prop\ngoal (forallA x. box P x) -> box forallA x. P x");
    let s = scope(2, 2);
    assert!(matches!(
        check_validity_bounded(&t, &t.goals[0].term, s, &opts()).unwrap(),
        Verdict::ValidUpToScope(_)
    ));
    match check_validity_bounded(&a, &a.goals[0].term, s, &opts()).unwrap() {
        Verdict::Countermodel { model, world } => {
            let g = elaborate(&a).goals[0].term.clone();
            assert!(!holds_at(&model, &g, world).unwrap());
        }
        other => panic!("{other:?}"),
    }
    // Same answers from exhaustive enumeration.
    let te = elaborate(&t);
    assert!(exhaustive::find_countermodel(&te, &te.goals[0].term, s, DEFAULT_WORK_LIMIT)
        .unwrap()
        .is_none());
    let ae = elaborate(&a);
    assert!(exhaustive::find_countermodel(&ae, &ae.goals[0].term, s, DEFAULT_WORK_LIMIT)
        .unwrap()
        .is_some());
}

// ---------------------------------------------------------------------------
// DIMACS round trip against an independent naive solver.

fn parse_dimacs(text: &str) -> (usize, Vec<Vec<i64>>) {
    let mut vars = 0;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        if line.starts_with('c') {
            continue;
        }
        if let Some(header) = line.strip_prefix("p cnf ") {
            vars = header.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        for tok in line.split_whitespace() {
            let d: i64 = tok.parse().unwrap();
            if d == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(d);
            }
        }
    }
    (vars, clauses)
}

/// Plain recursive DPLL with unit propagation over integer literals.
fn naive_dpll(clauses: &[Vec<i64>], assignment: &mut Vec<i64>) -> bool {
    loop {
        let mut unit = None;
        for c in clauses {
            if c.iter().any(|l| assignment.contains(l)) {
                continue;
            }
            let open: Vec<i64> = c.iter().copied().filter(|l| !assignment.contains(&-l)).collect();
            match open.len() {
                0 => return false,
                1 => {
                    unit = Some(open[0]);
                    break;
                }
                _ => {}
            }
        }
        match unit {
            Some(l) => assignment.push(l),
            None => break,
        }
    }
    let free = clauses
        .iter()
        .filter(|c| !c.iter().any(|l| assignment.contains(l)))
        .flat_map(|c| c.iter().copied())
        .find(|l| !assignment.contains(&-l));
    match free {
        None => true,
        Some(l) => {
            for choice in [l, -l] {
                let mut next = assignment.clone();
                next.push(choice);
                if naive_dpll(clauses, &mut next) {
                    *assignment = next;
                    return true;
                }
            }
            false
        }
    }
}

#[test]
fn dimacs_round_trip_agrees_with_solver() {
    let cases = [
        ("goal forallP p:prop. box p -> p", scope(2, 1)),
        ("frame refl\ngoal forallP p:prop. box p -> p", scope(2, 1)),
        ("const c : prop\naxiom c & ~c", scope(1, 1)),
        ("frame refl symm trans\nconst P : i > prop\naxiom dia existsP x:i. P x & ~existsAt x", scope(2, 1)),
        ("const c d : i\naxiom ~(c == d)", scope(1, 2)),
        ("const c d : i\naxiom ~(c == d)", scope(1, 1)),
    ];
    for (src, s) in cases {
        let t = th(src);
        let p = ground_with(&t, s, t.goals.first().map(|g| &g.term), &opts()).unwrap();
        let text = export_dimacs(&p);
        let (vars, clauses) = parse_dimacs(&text);
        assert_eq!(vars, p.cnf.num_vars());
        assert_eq!(clauses.len(), p.cnf.clauses().len());
        let external = naive_dpll(&clauses, &mut Vec::new());
        assert_eq!(external, solve(&p, DEFAULT_BUDGET).unwrap().is_some(), "{src}");
    }
}

// ---------------------------------------------------------------------------
// Oracle equivalence on random formulas.

#[derive(Clone, Debug)]
enum Shape {
    Leaf(u8),
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
    Or(Box<Shape>, Box<Shape>),
    Implies(Box<Shape>, Box<Shape>),
    Box(Box<Shape>),
    Dia(Box<Shape>),
    ForallInd(Box<Shape>),
    ExistsInd(Box<Shape>),
    ForallProp(Box<Shape>),
    ExistsActual(Box<Shape>),
    Pred(u8, u8),
    Same(u8, u8),
}

fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        any::<u8>().prop_map(Shape::Leaf),
        (any::<u8>(), any::<u8>()).prop_map(|(a, b)| Shape::Pred(a, b)),
        (any::<u8>(), any::<u8>()).prop_map(|(a, b)| Shape::Same(a, b)),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        let b = || inner.clone().prop_map(Box::new);
        prop_oneof![
            b().prop_map(Shape::Not),
            (b(), b()).prop_map(|(x, y)| Shape::And(x, y)),
            (b(), b()).prop_map(|(x, y)| Shape::Or(x, y)),
            (b(), b()).prop_map(|(x, y)| Shape::Implies(x, y)),
            b().prop_map(Shape::Box),
            b().prop_map(Shape::Dia),
            b().prop_map(Shape::ForallInd),
            b().prop_map(Shape::ExistsInd),
            b().prop_map(Shape::ForallProp),
            b().prop_map(Shape::ExistsActual),
        ]
    })
}

/// Builds a well-typed formula over {p, q : prop, P : i > prop, c : i}.
fn build(s: &Shape, ctx: &mut Vec<LogicType>) -> Term {
    let pick = |ctx: &Vec<LogicType>, want: &LogicType, k: u8, consts: Vec<Term>| -> Term {
        let mut options = consts;
        for (depth, ty) in ctx.iter().rev().enumerate() {
            if ty == want {
                options.push(Term::Var(depth));
            }
        }
        options[k as usize % options.len()].clone()
    };
    let bind = |ty: LogicType, body: &Shape, ctx: &mut Vec<LogicType>| {
        ctx.push(ty);
        let t = build(body, ctx);
        ctx.pop();
        t
    };
    match s {
        Shape::Leaf(k) => pick(
            ctx,
            &LogicType::Prop,
            *k,
            vec![
                Term::constant("p", LogicType::Prop),
                Term::constant("q", LogicType::Prop),
                Term::Top,
                Term::Bottom,
            ],
        ),
        Shape::Pred(f, x) => {
            let arg = pick(ctx, &LogicType::Ind, *x, vec![Term::constant("c", LogicType::Ind)]);
            let head = if f % 2 == 0 {
                Term::constant("P", LogicType::property())
            } else {
                Term::exists_at()
            };
            Term::app(head, arg)
        }
        Shape::Same(a, b) => {
            let c = || vec![Term::constant("c", LogicType::Ind)];
            Term::LeibnizEq(
                LogicType::Ind,
                Box::new(pick(ctx, &LogicType::Ind, *a, c())),
                Box::new(pick(ctx, &LogicType::Ind, *b, c())),
            )
        }
        Shape::Not(a) => Term::not(build(a, ctx)),
        Shape::And(a, b) => Term::and(build(a, ctx), build(b, ctx)),
        Shape::Or(a, b) => Term::or(build(a, ctx), build(b, ctx)),
        Shape::Implies(a, b) => Term::implies(build(a, ctx), build(b, ctx)),
        Shape::Box(a) => Term::boxed(build(a, ctx)),
        Shape::Dia(a) => Term::diamond(build(a, ctx)),
        Shape::ForallInd(a) => Term::forall(Binder::new("x", LogicType::Ind), bind(LogicType::Ind, a, ctx)),
        Shape::ExistsInd(a) => Term::exists(Binder::new("x", LogicType::Ind), bind(LogicType::Ind, a, ctx)),
        Shape::ForallProp(a) => Term::forall(Binder::new("r", LogicType::Prop), bind(LogicType::Prop, a, ctx)),
        Shape::ExistsActual(a) => Term::ExistsA(Binder::new("x", LogicType::Ind), Box::new(bind(LogicType::Ind, a, ctx))),
    }
}

fn random_theory(axioms: &[Shape], goal: &Shape, frame: u8) -> Theory {
    let mut t = th("const p q : prop\nconst P : i > prop\nconst c : i");
    t.frame = FrameFlags {
        refl: frame & 1 != 0,
        symm: frame & 2 != 0,
        trans: frame & 4 != 0,
    };
    for (i, a) in axioms.iter().enumerate() {
        t.axioms.push(crate::surface::Formula {
            name: format!("a{i}"),
            term: build(a, &mut Vec::new()),
        });
    }
    t.goals.push(crate::surface::Formula {
        name: "g".into(),
        term: build(goal, &mut Vec::new()),
    });
    elaborate(&t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn grounder_agrees_with_exhaustive_semantics(
        axioms in prop::collection::vec(shape(), 0..3),
        goal in shape(),
        frame in 0u8..8,
        dims in prop_oneof![Just((1usize, 1usize)), Just((1, 2)), Just((2, 1))],
    ) {
        let t = random_theory(&axioms, &goal, frame);
        let s = scope(dims.0, dims.1);
        let g = &t.goals[0].term;

        let model = find_model(&t, s, &opts()).unwrap();
        let oracle = exhaustive::find_model(&t, s, DEFAULT_WORK_LIMIT).unwrap();
        prop_assert_eq!(model.is_some(), oracle.is_some());
        if let Some(m) = &model {
            prop_assert!(satisfies_theory(m, &t).unwrap());
        }

        let verdict = check_validity_bounded(&t, g, s, &opts()).unwrap();
        let oracle = exhaustive::find_countermodel(&t, g, s, DEFAULT_WORK_LIMIT).unwrap();
        match &verdict {
            Verdict::Countermodel { model, world } => {
                prop_assert!(oracle.is_some());
                prop_assert!(satisfies_theory(model, &t).unwrap());
                prop_assert!(!holds_at(model, g, *world).unwrap());
            }
            Verdict::ValidUpToScope(_) => prop_assert!(oracle.is_none()),
            other => prop_assert!(false, "unexpected verdict {:?}", other),
        }
    }

    #[test]
    fn enumeration_count_matches_exhaustive_count(
        axioms in prop::collection::vec(shape(), 1..3),
        frame in 0u8..8,
        dims in prop_oneof![Just((1usize, 1usize)), Just((2, 1))],
    ) {
        let t = random_theory(&axioms, &Shape::Leaf(2), frame);
        let s = scope(dims.0, dims.1);
        let e = enumerate_models(&t, s, 100_000, &opts()).unwrap();
        prop_assert!(e.exhausted);
        // Enumeration blocks on every decision variable, so compare against
        // the exhaustive count over the full candidate space (all constants
        // and existsAt varied).
        let mut full = t.clone();
        full.axioms.push(crate::surface::Formula {
            name: "touch".into(),
            term: build(&Shape::Or(
                Box::new(Shape::Or(Box::new(Shape::Leaf(0)), Box::new(Shape::Leaf(1)))),
                Box::new(Shape::Or(
                    Box::new(Shape::Or(Box::new(Shape::Pred(0, 0)), Box::new(Shape::Pred(1, 0)))),
                    Box::new(Shape::Same(0, 0)),
                )),
            ), &mut Vec::new()),
        });
        // The touch axiom is a tautology at every world (c == c), so it only
        // makes every constant count as used.
        let oracle = exhaustive::count_models(&full, s, DEFAULT_WORK_LIMIT).unwrap();
        prop_assert_eq!(e.models.len() as u64, oracle);
        for m in &e.models {
            prop_assert!(mvalid(m, &t.axioms[0].term).unwrap());
        }
    }
}
