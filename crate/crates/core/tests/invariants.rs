use bareprover::calculus::{generate, paramodulate, subsumes, InferenceOutcome};
use bareprover::features::{featurize, FeatureConfig, FeatureVector};
use bareprover::guidance::e0_strategy;
use bareprover::logic::{
    clause_weight, is_variant, match_onto, parse_problem, rename_apart, unify, Atom, Clause, ClauseId, Literal, Orientation, Problem,
    Role, Term,
};
use bareprover::saturation::{replay, saturate, verify_proof, Limits, SaturationStatus};
use num_rational::Rational64;
use proptest::prelude::*;

fn term_text(depth: u32) -> impl Strategy<Value = String> {
    let leaf = prop::sample::select(vec!["a", "b", "X", "Y", "Z"]).prop_map(String::from);
    leaf.prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| format!("f({t})")),
            (inner.clone(), inner).prop_map(|(s, t)| format!("g({s}, {t})")),
        ]
    })
}

fn literal_text() -> impl Strategy<Value = String> {
    (any::<bool>(), 0..3u8, term_text(2), term_text(2)).prop_map(|(neg, kind, s, t)| {
        let sign = if neg { "~" } else { "" };
        match kind {
            0 => format!("{sign}p({s})"),
            1 => format!("{sign}q({s}, {t})"),
            _ if neg => format!("{s} != {t}"),
            _ => format!("{s} = {t}"),
        }
    })
}

fn clause_text() -> impl Strategy<Value = String> {
    prop::collection::vec(literal_text(), 1..4).prop_map(|lits| lits.join(" | "))
}

fn problem(clauses: &[String]) -> Problem {
    let text: String = clauses
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let role = if i + 1 == clauses.len() { "negated_conjecture" } else { "axiom" };
            format!("cnf(c{i}, {role}, {c}).\n")
        })
        .collect();
    parse_problem(&text).unwrap()
}

fn one_term(text: &str) -> Term {
    let p = parse_problem(&format!("cnf(t, axiom, p({text})).")).unwrap();
    match &p.clauses[0].literals[0].atom {
        Atom::Pred(_, args) => args[0].clone(),
        Atom::Eq(..) => unreachable!(),
    }
}

fn with_id(c: &Clause, id: u32) -> Clause {
    Clause::input(ClauseId(id), "c", Role::Axiom, c.literals.clone())
}

fn rename(lits: &[Literal], offset: u32) -> Vec<Literal> {
    lits.iter().map(|l| l.map_vars(&mut |v| Term::Var(v + offset))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unifier_equates_both_sides(s in term_text(3), t in term_text(3)) {
        let (s, t) = (one_term(&s), one_term(&t));
        if let Some(sigma) = unify(&s, &t) {
            prop_assert_eq!(sigma.apply(&s), sigma.apply(&t));
            prop_assert!(sigma.is_idempotent());
        }
    }

    #[test]
    fn match_implies_unify_against_fresh_copy(s in term_text(3), t in term_text(3)) {
        let p = parse_problem(&format!("cnf(a, axiom, p({s})).\ncnf(b, axiom, p({t})).")).unwrap();
        let arg = |c: &Clause| match &c.literals[0].atom {
            Atom::Pred(_, xs) => xs[0].clone(),
            Atom::Eq(..) => unreachable!(),
        };
        let (pattern, target) = (arg(&p.clauses[0]), arg(&p.clauses[1]));
        if match_onto(&pattern, &target).is_some() {
            let fresh = target.map_vars(&mut |v| Term::Var(v + 100));
            prop_assert!(unify(&pattern, &fresh).is_some());
        }
    }

    #[test]
    fn weight_ignores_renaming_and_order(c in clause_text(), shift in 1u32..20, rot in 0usize..4) {
        let p = problem(&[c]);
        let lits = &p.clauses[0].literals;
        let mut moved = rename(lits, shift);
        let k = rot % moved.len();
        moved.rotate_left(k);
        let one = Rational64::from_integer(1);
        prop_assert_eq!(clause_weight(lits, 1, 1, one), clause_weight(&moved, 1, 1, one));
        prop_assert_eq!(clause_weight(lits, 2, 1, Rational64::new(3, 2)), clause_weight(&moved, 2, 1, Rational64::new(3, 2)));
    }

    #[test]
    fn tptp_round_trip(cs in prop::collection::vec(clause_text(), 1..4)) {
        let p = problem(&cs);
        let q = parse_problem(&p.to_tptp()).unwrap();
        prop_assert_eq!(p.clauses.len(), q.clauses.len());
        for (x, y) in p.clauses.iter().zip(&q.clauses) {
            prop_assert!(is_variant(&x.literals, &y.literals));
            prop_assert_eq!(x.role, y.role);
        }
    }

    #[test]
    fn subsumption_is_reflexive_and_survives_weakening(c in clause_text(), extra in literal_text(), shift in 1u32..9) {
        let p = problem(&[c.clone(), format!("{c} | {extra}")]);
        let (c, weaker) = (&p.clauses[0].literals, &p.clauses[1].literals);
        prop_assert!(subsumes(c, c));
        prop_assert!(subsumes(&rename(c, shift), weaker));
    }

    #[test]
    fn inferences_replay_and_are_deterministic(a in clause_text(), b in clause_text()) {
        let p = problem(&[a, b]);
        let (x, y) = (with_id(&p.clauses[0], 0), with_id(&p.clauses[1], 1));
        let out = generate(&x, [&y]);
        prop_assert_eq!(&out, &generate(&x, [&y]));
        let lits = [&x.literals, &y.literals];
        for o in &out {
            let parents: Vec<&Vec<Literal>> = o.premises().iter().map(|id| lits[id.0 as usize]).collect();
            let again = replay(&o.step, &parents);
            prop_assert!(again.is_some_and(|r| is_variant(&r, &o.conclusion)));
        }
    }

    #[test]
    fn paramodulation_orientation_is_symmetric(l in term_text(2), r in term_text(2), into in clause_text()) {
        let p = problem(&[format!("{l} = {r}"), format!("{r} = {l}"), into]);
        let (lr, rl) = (with_id(&p.clauses[0], 0), with_id(&p.clauses[1], 1));
        // the rule functions expect variable-disjoint premises
        let target = rename_apart(&lr, &rename_apart(&rl, &with_id(&p.clauses[2], 2)));
        let lr_eq = lr.literals.iter().position(Literal::is_equation).unwrap();
        let rl_eq = rl.literals.iter().position(Literal::is_equation).unwrap();
        // normalization may store either equation flipped, so compare both pairings
        for (i, lit) in target.literals.iter().enumerate() {
            for path in lit.non_var_positions() {
                let a = paramodulate(&lr, lr_eq, Orientation::LeftToRight, &target, i, &path).unwrap();
                let b = paramodulate(&rl, rl_eq, Orientation::RightToLeft, &target, i, &path).unwrap();
                let c = paramodulate(&lr, lr_eq, Orientation::RightToLeft, &target, i, &path).unwrap();
                let d = paramodulate(&rl, rl_eq, Orientation::LeftToRight, &target, i, &path).unwrap();
                let same = |u: &Option<InferenceOutcome>, v: &Option<InferenceOutcome>| match (u, v) {
                    (None, None) => true,
                    (Some(u), Some(v)) => is_variant(&u.conclusion, &v.conclusion),
                    _ => false,
                };
                prop_assert!(same(&a, &b) && same(&c, &d) || same(&a, &d) && same(&c, &b));
            }
        }
    }

    #[test]
    fn featurize_ignores_renaming_and_order(c in clause_text(), shift in 1u32..20, bits in 5u32..=16) {
        let p = problem(&[c]);
        let cfg = FeatureConfig::new(bits).unwrap();
        let lits = &p.clauses[0].literals;
        let mut moved = rename(lits, shift);
        moved.reverse();
        let conj = FeatureVector::empty(cfg);
        let f1 = featurize(&Clause::from_literals(lits.clone()), &p.signature, &conj, cfg).unwrap();
        let f2 = featurize(&Clause::from_literals(moved), &p.signature, &conj, cfg).unwrap();
        prop_assert!(f1.entries().iter().all(|&(slot, _)| slot < cfg.dimension()));
        prop_assert_eq!(f1, f2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn saturation_is_reproducible_and_sound(cs in prop::collection::vec(clause_text(), 2..6), budget in 1usize..25) {
        let p = problem(&cs);
        let limits = Limits::selections(budget);
        let r1 = saturate(&p, &e0_strategy(), &limits);
        let r2 = saturate(&p, &e0_strategy(), &limits);
        prop_assert_eq!(&r1.trace, &r2.trace);
        prop_assert_eq!(&r1.status, &r2.status);
        prop_assert!(r1.trace.len() <= budget);
        if let SaturationStatus::Unsatisfiable { .. } = r1.status {
            let dag = r1.proof().unwrap();
            prop_assert!(verify_proof(&dag, &p).is_ok());
        }
    }
}
