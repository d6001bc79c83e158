//! The given-clause loop: weighted round-robin selection over evaluation
//! queues, forward simplification, eager empty-clause detection, and proof
//! extraction/checking.

mod proof;
mod state;
mod strategy;

pub use proof::{extract_proof, proof_listing, replay, verify_proof, ProofDag, ProofError, VerifyError};
pub use state::{
    saturate, ClauseStatus, DiscardReason, ProofState, SaturationResult, SaturationStatus, Simplification, Statistics,
};
pub use strategy::{ClauseEvaluator, ClauseWeight, EvalQueue, Fifo, Limits, Strategy, StrategyError};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_problem, Provenance, Role};
    use num_rational::Rational64;

    fn e0() -> Strategy {
        Strategy::new(vec![EvalQueue::new(5, ClauseWeight::default()), EvalQueue::new(1, Fifo)], true).unwrap()
    }

    fn fifo_only() -> Strategy {
        Strategy::new(vec![EvalQueue::new(1, Fifo)], false).unwrap()
    }

    #[test]
    fn complementary_units() {
        let p = parse_problem("cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        assert!(r.status.is_unsat());
        assert!(r.trace.len() <= 2);
        let dag = r.proof().unwrap();
        assert_eq!(dag.len(), 3);
        verify_proof(&dag, &p).unwrap();
    }

    #[test]
    fn single_unit_saturates() {
        let p = parse_problem("cnf(a, axiom, p(a)).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        assert_eq!(r.status, SaturationStatus::Satisfiable);
    }

    #[test]
    fn equational_three_step_proof() {
        let p = parse_problem("cnf(e, axiom, a = b).\ncnf(x, axiom, p(a)).\ncnf(g, negated_conjecture, ~p(b)).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        assert!(r.status.is_unsat(), "{:?}", r.status);
        let dag = r.proof().unwrap();
        verify_proof(&dag, &p).unwrap();
        // a=b, p(a), ~p(b) plus at most two intermediates and the root
        assert!(dag.len() <= 6 && dag.len() >= 4, "{}", proof_listing(&dag, &p));
    }

    #[test]
    fn empty_input_clause_is_its_own_proof() {
        let p = parse_problem("cnf(a, axiom, p).\ncnf(f, axiom, $false).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        let SaturationStatus::Unsatisfiable { empty_clause } = r.status else { panic!() };
        let dag = extract_proof(&r.clauses, empty_clause).unwrap();
        assert_eq!(dag.ids().len(), 1);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn budget_exhaustion_is_resource_out() {
        let p = parse_problem("cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | p(f(X))).\ncnf(g, negated_conjecture, ~q).").unwrap();
        let r = saturate(&p, &e0(), &Limits::selections(20));
        assert_eq!(r.status, SaturationStatus::ResourceOut);
        assert_eq!(r.trace.len(), 20);
    }

    #[test]
    fn no_starvation_without_budget() {
        let p = parse_problem("cnf(a, axiom, p(X) | q(X)).\ncnf(b, axiom, ~p(a)).\ncnf(c, axiom, ~q(a)).").unwrap();
        let r = saturate(&p, &e0(), &Limits { max_selections: None, wall_seconds: Some(30.0) });
        assert!(r.status.is_unsat());
    }

    #[test]
    fn forward_simplify_cases() {
        let p = parse_problem("cnf(a, axiom, p(X)).\ncnf(b, axiom, p(a)).\ncnf(c, axiom, q(a)).\ncnf(d, axiom, r | ~r).").unwrap();
        let s = fifo_only();
        let mut st = ProofState::new(&p.signature, &s);
        assert_eq!(st.forward_simplify(&p.clauses[3].literals), Simplification::Discard(DiscardReason::Tautology));
        let id = st
            .insert(&s, p.clauses[0].literals.clone(), Role::Axiom, p.clauses[0].provenance.clone())
            .unwrap();
        assert_eq!(st.select_next(&s), Some(id));
        st.mark_processed(id);
        assert_eq!(st.forward_simplify(&p.clauses[1].literals), Simplification::Discard(DiscardReason::Subsumed));
        assert_eq!(st.forward_simplify(&p.clauses[2].literals), Simplification::Keep);
    }

    #[test]
    fn weight_queue_pops_lightest_and_initial_first() {
        let p = parse_problem("cnf(a, axiom, p(f(f(f(a))))).\ncnf(b, axiom, p(a)).").unwrap();
        let s = Strategy::new(vec![EvalQueue::new(1, ClauseWeight::default())], true).unwrap();
        let mut st = ProofState::new(&p.signature, &s);
        let heavy = st.insert(&s, p.clauses[0].literals.clone(), Role::Axiom, p.clauses[0].provenance.clone()).unwrap();
        let light = st
            .insert(&s, p.clauses[1].literals.clone(), Role::Derived, Provenance::Input { name: "d".into() })
            .unwrap();
        assert!(ClauseWeight::default().evaluate(st.clause(light), &p.signature) < Rational64::from_integer(5));
        // derived weight 2 loses to initial weight 5
        assert_eq!(st.select_next(&s), Some(heavy));
        st.mark_processed(heavy);
        assert_eq!(st.select_next(&s), Some(light));
        st.mark_processed(light);
        assert_eq!(st.select_next(&s), None);
    }

    #[test]
    fn fifo_trace_ages_increase() {
        let p = parse_problem(
            "cnf(a, axiom, p(a)).\ncnf(b, axiom, ~p(X) | q(X)).\ncnf(c, axiom, ~q(X) | r(X)).\ncnf(d, negated_conjecture, ~r(b)).",
        )
        .unwrap();
        let r = saturate(&p, &fifo_only(), &Limits::default());
        assert_eq!(r.stats.discarded_subsumed + r.stats.discarded_tautology, 0);
        let ages: Vec<u64> = r.trace.iter().map(|id| r.clauses[id.0 as usize].age).collect();
        assert!(ages.windows(2).all(|w| w[0] < w[1]), "{ages:?}");
    }

    #[test]
    fn verify_rejects_tampered_conclusion() {
        let p = parse_problem("cnf(a, axiom, p(X) | q(X)).\ncnf(b, axiom, ~p(a)).\ncnf(c, axiom, ~q(a)).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        let dag = r.proof().unwrap();
        verify_proof(&dag, &p).unwrap();
        let mut bad = dag.clone();
        let victim = *bad
            .nodes
            .iter()
            .find(|(_, c)| matches!(c.provenance, Provenance::Inferred(_)) && !c.is_empty())
            .unwrap()
            .0;
        bad.nodes.get_mut(&victim).unwrap().literals.pop();
        let err = verify_proof(&bad, &p).unwrap_err();
        assert_eq!(err.node, victim);
    }

    #[test]
    fn verify_rejects_swapped_paramodulation_parents() {
        use crate::logic::Step;
        let p = parse_problem("cnf(e, axiom, a = b).\ncnf(x, axiom, p(a)).\ncnf(g, negated_conjecture, ~p(b)).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        let dag = r.proof().unwrap();
        let mut bad = dag.clone();
        let mut swapped = false;
        for c in bad.nodes.values_mut() {
            if let Provenance::Inferred(Step::Paramodulation { from, into, .. }) = &mut c.provenance {
                std::mem::swap(from, into);
                swapped = true;
            }
        }
        assert!(swapped, "{}", proof_listing(&dag, &p));
        assert!(verify_proof(&bad, &p).is_err());
    }

    #[test]
    fn extract_reports_missing_parent() {
        use crate::logic::Step;
        let p = parse_problem("cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).").unwrap();
        let r = saturate(&p, &e0(), &Limits::default());
        let SaturationStatus::Unsatisfiable { empty_clause } = r.status else { panic!() };
        let mut clauses = r.clauses.clone();
        if let Provenance::Inferred(Step::Resolution { right, .. }) = &mut clauses[empty_clause.0 as usize].provenance {
            *right = crate::logic::ClauseId(99);
        } else {
            panic!("expected a resolution step");
        }
        assert_eq!(
            extract_proof(&clauses, empty_clause),
            Err(ProofError::MissingParent {
                child: empty_clause,
                parent: crate::logic::ClauseId(99)
            })
        );
        assert_eq!(
            extract_proof(&clauses, crate::logic::ClauseId(77)),
            Err(ProofError::MissingRoot(crate::logic::ClauseId(77)))
        );
    }

    #[test]
    fn saturation_is_deterministic() {
        let p = parse_problem(
            "cnf(a, axiom, f(X) = g(X)).\ncnf(b, axiom, p(f(a)) | q(X)).\ncnf(c, axiom, ~q(b)).\ncnf(d, negated_conjecture, ~p(g(a))).",
        )
        .unwrap();
        let a = saturate(&p, &e0(), &Limits::selections(50));
        let b = saturate(&p, &e0(), &Limits::selections(50));
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.status, b.status);
        assert_eq!(a.stats, b.stats);
    }
}
