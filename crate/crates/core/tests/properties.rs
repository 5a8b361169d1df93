use proptest::prelude::*;

use sethforge::decomposition::parse_td;
use sethforge::formula::{
    brute_force_sat, make_groups, pad_to_even, parse_dimacs, Assignment, CnfFormula, Rounding,
};
use sethforge::graph::{parse_gr, Graph};
use sethforge::reductions::{check_solution, reduce, Problem};
use sethforge::solvers::{brute_force, solve_instance, DpOptions};

fn formula() -> impl Strategy<Value = CnfFormula> {
    (1usize..=4).prop_flat_map(|n| {
        let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
        prop::collection::vec(prop::collection::vec(lit, 1..=3), 1..=4).prop_map(move |cs| {
            let refs: Vec<&[i64]> = cs.iter().map(Vec::as_slice).collect();
            CnfFormula::from_dimacs_clauses(n, &refs)
        })
    })
}

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=9).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=2 * n).prop_map(move |es| {
            let mut g = Graph::with_vertices(n);
            for (u, v) in es {
                if u != v {
                    g.add_edge(u, v);
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimacs_text_round_trips(phi in formula()) {
        prop_assert_eq!(parse_dimacs(&phi.to_dimacs()).unwrap(), phi);
    }

    #[test]
    fn assignment_rank_round_trips(n in 1usize..=16, rank in any::<u64>()) {
        let rank = rank % (1 << n);
        prop_assert_eq!(Assignment::from_rank(n, rank).rank(), rank);
    }

    #[test]
    fn padding_preserves_satisfiability(phi in formula()) {
        let padded = pad_to_even(&phi);
        prop_assert!(padded.clauses.iter().all(|c| c.size() % 2 == 0));
        let sat = brute_force_sat(&phi).unwrap();
        let padded_sat = brute_force_sat(&padded).unwrap();
        prop_assert_eq!(sat.is_some(), padded_sat.is_some());
        if let Some(tau) = padded_sat {
            let restricted = Assignment::new(tau.values[..phi.num_vars].to_vec());
            prop_assert!(phi.evaluate(&restricted).unwrap());
        }
    }

    #[test]
    fn groups_partition_the_variables(n in 1usize..=40, base in 2u64..=5, p in 1u32..=3, ceil in any::<bool>()) {
        let rounding = if ceil { Rounding::Ceil } else { Rounding::Floor };
        let g = make_groups(n, base, p, rounding).unwrap();
        let flat: Vec<usize> = g.groups.iter().flatten().copied().collect();
        prop_assert_eq!(flat, (1..=n).collect::<Vec<_>>());
        prop_assert!(g.groups.iter().all(|grp| !grp.is_empty() && grp.len() <= g.group_size));
        prop_assert!((1u64 << g.group_size) <= base.pow(p) || rounding == Rounding::Ceil);
        for v in 1..=n {
            prop_assert!(g.groups[g.group_of(v)].contains(&v));
        }
    }

    #[test]
    fn group_restriction_inverts_unrank(n in 1usize..=10, rank in any::<u64>()) {
        let g = make_groups(n, 3, 1, Rounding::Floor).unwrap();
        let tau = Assignment::from_rank(n, rank % (1 << n));
        for i in 0..g.num_groups() {
            let r = g.restrict(i, &tau);
            prop_assert_eq!(g.unrank(i, r.rank), r);
        }
    }

    #[test]
    fn gr_text_round_trips(g in graph()) {
        let back = parse_gr(&g.to_gr()).unwrap();
        prop_assert_eq!(back.num_vertices(), g.num_vertices());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn reduction_certificates_validate(phi in formula(), which in 0usize..4) {
        let problem = [Problem::Is, Problem::MaxCut, Problem::Packing, Problem::Ds][which];
        let inst = reduce(problem, &phi, 1, 3).unwrap();
        let width = inst.decomposition.validate(&inst.graph).unwrap();
        prop_assert!(width <= inst.claimed_width_bound);
        let td = inst.decomposition.to_td(inst.graph.num_vertices());
        prop_assert_eq!(parse_td(&td).unwrap(), inst.decomposition.clone());
        let nice = inst.decomposition.nicify(&inst.graph).unwrap();
        prop_assert!(nice.max_live() <= width + 1);
        prop_assert!(nice.eager_forget(&inst.graph).max_live() <= nice.max_live());
    }

    #[test]
    fn dp_matches_brute_force_on_plain_graphs(g in graph(), which in 0usize..5) {
        use sethforge::reductions::{Instance, Kind};
        let kind = [Kind::IndependentSet, Kind::DominatingSet, Kind::MaxCut, Kind::OddCycleTransversal, Kind::TrianglePacking][which];
        let inst = Instance::from_graph(kind, g, None);
        let dp = solve_instance(&inst, &DpOptions { witness: true, ..Default::default() }).unwrap();
        let bf = brute_force(&inst).unwrap();
        prop_assert_eq!(dp.optimum, bf.optimum);
        let sol = dp.solution.unwrap();
        prop_assert!(check_solution(&inst, &sol).unwrap());
    }
}
