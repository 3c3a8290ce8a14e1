mod common;

use proptest::prelude::*;
use tlsg::mwis::{maximal_independent_sets, solve, solve_mwis, Mode, SolverConfig, DEFAULT_ENUMERATION_CAP};
use tlsg::{Configuration, WeightedGraph};

fn graph_strategy() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=12, 0.0f64..0.8, 1i64..6, any::<u64>())
        .prop_map(|(n, p, wmax, seed)| common::random_graph(seed, n, p, wmax))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solver_matches_brute_force(g in graph_strategy()) {
        let (best, sols) = common::brute_mwis(&g);
        let got = solve_mwis(&g).unwrap();
        prop_assert_eq!(got.weight, best);
        prop_assert_eq!(&got.solutions, &sols);
        let one = solve(&g, Mode::One, SolverConfig::default()).unwrap();
        prop_assert_eq!(one.weight, best);
        prop_assert!(sols.contains(&one.solutions[0]));
    }

    #[test]
    fn maximal_sets_match_brute_force(g in graph_strategy()) {
        let got = maximal_independent_sets(&g, DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert_eq!(got.len(), common::brute_maximal(&g).len());
        prop_assert_eq!(got, common::brute_maximal(&g));
    }

    #[test]
    fn optima_are_maximal(g in graph_strategy()) {
        let mis = maximal_independent_sets(&g, DEFAULT_ENUMERATION_CAP).unwrap();
        for s in solve_mwis(&g).unwrap().solutions {
            prop_assert_eq!(g.violation_count(&s), 0);
            prop_assert!(mis.contains(&s));
            // adding any vertex creates a conflict
            for v in (0..g.n()).filter(|&v| !s.get(v)) {
                let mut t = s.clone();
                t.set(v, true);
                prop_assert!(g.violation_count(&t) > 0);
            }
        }
    }
}

fn bits(s: &[&str]) -> Vec<Configuration> {
    s.iter().map(|b| b.parse().unwrap()).collect()
}

#[test]
fn named_examples() {
    let not = WeightedGraph::unweighted(2, [(0, 1)]).unwrap();
    let r = solve_mwis(&not).unwrap();
    assert_eq!((r.weight, r.solutions), (1, bits(&["01", "10"])));

    let wire = WeightedGraph::new(vec![1, 2, 2, 2, 1], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let r = solve_mwis(&wire).unwrap();
    assert_eq!((r.weight, r.solutions), (4, bits(&["01010", "10101"])));

    let free = WeightedGraph::new(vec![3, 5], []).unwrap();
    let r = solve_mwis(&free).unwrap();
    assert_eq!((r.weight, r.solutions), (8, bits(&["11"])));
}

#[test]
fn node_budget_reports_bounds() {
    let g = common::random_graph(7, 60, 0.1, 5);
    let cfg = SolverConfig { node_budget: 1, max_solutions: 10 };
    match solve(&g, Mode::One, cfg) {
        Err(tlsg::Error::NodeBudget { best_known, upper_bound, .. }) => assert!(best_known <= upper_bound),
        other => panic!("expected budget error, got {other:?}"),
    }
}
