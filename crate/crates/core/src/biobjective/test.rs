use super::*;
use crate::instance::{generate_instance, GeneratorParams, Instance};
use crate::models::{reference_warm_start, Formulation, ViLevel};
use crate::registry::{method, variant, BuildOptions};

fn tiny(seed: u64, users: usize, trips: usize, tasks: usize) -> Instance {
    generate_instance(
        &GeneratorParams {
            n_users: users,
            trips_per_user: 1..=trips,
            tasks_per_trip: 1..=tasks,
            n_depots: 2,
            area: 4_000,
        },
        seed,
    )
    .unwrap()
}

fn run(
    instance: &Instance,
    variant_name: &str,
    method_name: &str,
    vi: ViLevel,
    propagate: bool,
) -> Frontier {
    let strategy = variant(variant_name).unwrap();
    let out = strategy
        .build(instance, &BuildOptions { vi, reduce: true })
        .unwrap();
    let inputs = FrontierInputs {
        problem: &out.problem,
        graph: &out.graph,
        instance,
    };
    let config = EnumerateConfig {
        propagate_cuts: propagate,
        warm_start: reference_warm_start(&out.problem, &out.graph, instance),
        ..Default::default()
    };
    let frontier = method(method_name).unwrap().enumerate(&inputs, &config);
    assert!(!frontier.truncated);
    verify_frontier(&frontier, &out.graph).expect("frontier verification");
    frontier
}

#[test]
fn verify_frontier_detects_dominance_violation() {
    let mk = |pairs: &[(i64, i64)]| Frontier {
        points: pairs
            .iter()
            .map(|&(cost, pref)| ParetoPoint {
                cost,
                pref,
                legs: Vec::new(),
                solve_seconds: 0.0,
                cuts_user: 0,
                cuts_car: 0,
                cuts_sync: 0,
                trips_car: 0,
                trips_bike: 0,
                trips_public: 0,
            })
            .collect(),
        ..Default::default()
    };
    let instance = tiny(1, 1, 1, 1);
    let graph = crate::multigraph::build_graph_m1(&instance);
    assert!(verify_frontier(&mk(&[(1, 3), (2, 2), (3, 1)]), &graph).is_ok());
    assert!(verify_frontier(&mk(&[(1, 3), (2, 3)]), &graph).is_err());
}

#[test]
fn csv_round_trip_and_header_check() {
    let instance = tiny(2, 1, 1, 1);
    let frontier = run(&instance, "m1", "eps-cost", ViLevel::None, false);
    let mut buf = Vec::new();
    write_frontier_csv(&mut buf, &frontier).unwrap();
    let read = read_frontier_csv(std::io::BufReader::new(&buf[..])).unwrap();
    assert_eq!(read.objective_pairs(), frontier.objective_pairs());
    let bad = b"wrong,header\n1,2\n";
    assert!(read_frontier_csv(std::io::BufReader::new(&bad[..])).is_err());
}

#[test]
fn single_point_problems_have_singleton_frontiers() {
    // one user, no car at the depot, one mode strictly dominating: make
    // all modes equal so cost and preference cannot trade off
    let mut instance = tiny(3, 1, 1, 1);
    for d in &mut instance.depots {
        d.car_start = 0;
    }
    let eps_c = run(&instance, "m1", "eps-cost", ViLevel::None, false);
    let eps_p = run(&instance, "m1", "eps-pref", ViLevel::None, false);
    assert!(!eps_c.points.is_empty());
    assert_eq!(eps_c.objective_pairs(), eps_p.objective_pairs());
}

#[test]
fn epsilon_directions_agree() {
    for seed in [5, 6] {
        let instance = tiny(seed, 2, 2, 2);
        for v in ["m1", "m3"] {
            let a = run(&instance, v, "eps-cost", ViLevel::None, false);
            let b = run(&instance, v, "eps-pref", ViLevel::None, false);
            assert_eq!(a.objective_pairs(), b.objective_pairs(), "variant {v} seed {seed}");
        }
    }
}

#[test]
fn weighting_search_matches_epsilon() {
    for seed in [7, 8] {
        let instance = tiny(seed, 2, 1, 2);
        for v in ["m1", "m3", "m4b"] {
            let eps = run(&instance, v, "eps-cost", ViLevel::M3Set, true);
            let wbs = run(&instance, v, "wbs", ViLevel::M3Set, true);
            assert_eq!(eps.objective_pairs(), wbs.objective_pairs(), "variant {v} seed {seed}");
        }
    }
}

#[test]
fn extreme_points_anchor_the_frontier() {
    let instance = tiny(9, 2, 1, 2);
    let frontier = run(&instance, "m3", "eps-cost", ViLevel::None, false);
    let first = frontier.points.first().unwrap();
    let last = frontier.points.last().unwrap();
    assert!(first.cost <= last.cost);
    assert!(first.pref >= last.pref);
    // anchors equal the two lexicographic optima
    let pref_first = run(&instance, "m3", "eps-pref", ViLevel::None, false);
    assert_eq!(
        frontier.points.first().unwrap().objectives(),
        pref_first.points.first().unwrap().objectives()
    );
    assert_eq!(
        frontier.points.last().unwrap().objectives(),
        pref_first.points.last().unwrap().objectives()
    );
}

#[test]
fn oracle_matches_solver_on_m1() {
    for seed in [11, 12, 13] {
        let instance = tiny(seed, 2, 2, 2);
        let oracle = brute_force_frontier(&instance, Formulation::M1).unwrap();
        let solver = run(&instance, "m1", "eps-cost", ViLevel::None, false);
        assert_eq!(
            oracle.objective_pairs(),
            solver.objective_pairs(),
            "seed {seed}"
        );
    }
}

#[test]
fn oracle_matches_solver_on_m3() {
    for seed in [14, 15] {
        let instance = tiny(seed, 2, 1, 2);
        let oracle = brute_force_frontier(&instance, Formulation::M3).unwrap();
        let solver = run(&instance, "m3", "eps-cost", ViLevel::M3Set, false);
        assert_eq!(
            oracle.objective_pairs(),
            solver.objective_pairs(),
            "seed {seed}"
        );
    }
}

#[test]
fn oracle_matches_branch_and_cut_on_m4b() {
    for seed in [16, 17] {
        let instance = tiny(seed, 2, 1, 2);
        let oracle = brute_force_frontier(&instance, Formulation::M4b).unwrap();
        let solver = run(&instance, "m4b", "eps-cost", ViLevel::M3Set, true);
        assert_eq!(
            oracle.objective_pairs(),
            solver.objective_pairs(),
            "seed {seed}"
        );
    }
}

#[test]
fn m4_and_m4b_frontiers_agree() {
    let instance = tiny(18, 2, 1, 1);
    let m4 = run(&instance, "m4", "eps-cost", ViLevel::M4Set, false);
    let m4b = run(&instance, "m4b", "eps-cost", ViLevel::M3Set, true);
    assert_eq!(m4.objective_pairs(), m4b.objective_pairs());
}

#[test]
fn cut_propagation_preserves_the_frontier() {
    let instance = tiny(19, 2, 2, 1);
    let with = run(&instance, "m4b", "eps-cost", ViLevel::M3Set, true);
    let without = run(&instance, "m4b", "eps-cost", ViLevel::M3Set, false);
    assert_eq!(with.objective_pairs(), without.objective_pairs());
}

#[test]
fn oracle_rejects_oversized_instances() {
    let instance = tiny(20, 3, 1, 1);
    assert!(brute_force_frontier(&instance, Formulation::M1).is_ok());
    let big = generate_instance(
        &GeneratorParams {
            n_users: 4,
            ..GeneratorParams::default()
        },
        0,
    )
    .unwrap();
    assert!(matches!(
        brute_force_frontier(&big, Formulation::M1),
        Err(OracleError::OverLimit(_))
    ));
}

#[test]
fn zero_car_capacity_prunes_cars_in_oracle() {
    let mut instance = tiny(21, 2, 1, 1);
    for d in &mut instance.depots {
        d.car_start = 0;
    }
    let oracle = brute_force_frontier(&instance, Formulation::M4).unwrap();
    for p in &oracle.points {
        assert_eq!(p.trips_car, 0);
    }
    let solver = run(&instance, "m4b", "eps-cost", ViLevel::M3Set, true);
    assert_eq!(oracle.objective_pairs(), solver.objective_pairs());
}
