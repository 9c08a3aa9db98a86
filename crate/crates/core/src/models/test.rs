use super::*;
use crate::instance::{generate_instance, GeneratorParams};
use crate::mip::{solve, MipStatus, SolveOptions};
use crate::multigraph::{build_graph_m1, build_graph_m3, build_graph_m4, reduce_graph};
use crate::testutil::{flat_periods, manual_instance};

fn min_cost(problem: &mut AssembledProblem) -> Option<i64> {
    problem.set_single_objective(Objective::Cost);
    let out = solve(&problem.model, None, None, &SolveOptions::default());
    match out.status {
        MipStatus::Optimal => Some(out.objective.unwrap() as i64),
        _ => None,
    }
}

#[test]
fn m1_picks_single_mode_path() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let graph = build_graph_m1(&instance);
    let mut problem = assemble_m1(&graph, &instance).unwrap();
    problem.set_single_objective(Objective::Cost);
    let out = solve(&problem.model, None, None, &SolveOptions::default());
    assert_eq!(out.status, MipStatus::Optimal);
    let selected = problem.selected_legs(&out.values.unwrap());
    assert_eq!(selected.len(), 4, "depot out, two hops, depot in");
    let mots: std::collections::HashSet<_> =
        selected.iter().map(|&l| graph.leg(l).mot).collect();
    assert_eq!(mots.len(), 1, "flow conservation forces one mode");
}

#[test]
fn zero_car_capacity_blocks_car_legs() {
    let mut instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    instance.depots[0].car_start = 0;
    // make the car otherwise irresistible
    instance.mots[0].distance_cost_rate = 0;
    instance.mots[0].time_cost_rate = 0;
    instance.mots[0].emission_cost_rate = 0;
    let graph = build_graph_m1(&instance);
    let mut problem = assemble_m1(&graph, &instance).unwrap();
    problem.set_single_objective(Objective::Cost);
    let out = solve(&problem.model, None, None, &SolveOptions::default());
    let selected = problem.selected_legs(&out.values.unwrap());
    assert!(selected
        .iter()
        .all(|&l| graph.leg(l).mot != Some(crate::instance::Mot::Car)));
}

#[test]
fn m3_single_task_trip_matches_m1_optimum() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let g1 = build_graph_m1(&instance);
    let g3 = build_graph_m3(&instance);
    let mut p1 = assemble_m1(&g1, &instance).unwrap();
    let mut p3 = assemble_m3(&g3, &instance).unwrap();
    assert_eq!(min_cost(&mut p1), min_cost(&mut p3));
}

#[test]
fn m3_unreachable_tasks_are_infeasible() {
    // tasks half a million meters out: no mode fits the horizon
    let instance = manual_instance(
        1,
        &[(0, 0, 0, vec![(500_000, 0, 10, 100), (0, 500_000, 10, 300)])],
    );
    let g3 = build_graph_m3(&instance);
    let mut p3 = assemble_m3(&g3, &instance).unwrap();
    p3.set_single_objective(Objective::Cost);
    let out = solve(&p3.model, None, None, &SolveOptions::default());
    assert_eq!(out.status, MipStatus::Infeasible);
}

#[test]
fn m4_degenerate_interval_matches_m3() {
    let mut instance = manual_instance(1, &[(0, 0, 0, vec![(600, 400, 10, 100)])]);
    instance.periods = flat_periods();
    instance.alpha = 720;
    let g3 = build_graph_m3(&instance);
    let g4 = build_graph_m4(&instance);
    let mut p3 = assemble_m3(&g3, &instance).unwrap();
    let mut p4 = assemble_m4(&g4, &instance).unwrap();
    assert_eq!(min_cost(&mut p3), min_cost(&mut p4));
}

#[test]
fn m4b_subtour_rows_exclude_two_cycles() {
    let mut instance = manual_instance(
        1,
        &[(0, 0, 0, vec![(400, 300, 10, 100), (700, 600, 10, 200)])],
    );
    instance.periods = flat_periods();
    let g4 = reduce_graph(&build_graph_m4(&instance));
    let problem = assemble_m4b(&g4, &instance).unwrap();
    // the q1<->q2 cycle row: all legs between the two tasks, rhs 1
    let q_pair_vars: std::collections::HashSet<usize> = g4
        .legs
        .iter()
        .filter(|l| {
            matches!(g4.node(l.from).kind, crate::multigraph::NodeKind::Task(_))
                && matches!(g4.node(l.to).kind, crate::multigraph::NodeKind::Task(_))
        })
        .map(|l| problem.x_vars[l.id.0].0)
        .collect();
    assert!(!q_pair_vars.is_empty());
    let found = problem.model.rows.iter().any(|r| {
        r.rhs == 1.0
            && r.coeffs.len() == q_pair_vars.len()
            && r.coeffs.iter().all(|(v, _)| q_pair_vars.contains(&v.0))
    });
    assert!(found, "missing two-cycle subtour row");
}

#[test]
fn m4b_all_zero_violates_cover() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let g4 = reduce_graph(&build_graph_m4(&instance));
    let problem = assemble_m4b(&g4, &instance).unwrap();
    let zeros = vec![0.0; problem.model.n_vars()];
    assert!(!problem.model.is_integer_feasible(&zeros));
}

#[test]
fn m4b_rejects_oversized_trips() {
    let tasks: Vec<(i64, i64, i64, i64)> =
        (0..9).map(|i| (100 + 10 * i, 200, 5, 60 + 40 * i)).collect();
    let instance = manual_instance(1, &[(0, 0, 0, tasks)]);
    let g4 = build_graph_m4(&instance);
    assert!(matches!(
        assemble_m4b(&g4, &instance),
        Err(AssembleError::TooManyTasks(_, 9, MAX_SEC_TASKS))
    ));
}

#[test]
fn valid_inequalities_leave_optimum_unchanged() {
    let instance = generate_instance(
        &GeneratorParams {
            n_users: 2,
            trips_per_user: 1..=2,
            tasks_per_trip: 1..=2,
            n_depots: 2,
            area: 4_000,
        },
        3,
    )
    .unwrap();
    let g3 = build_graph_m3(&instance);
    let mut plain = assemble_m3(&g3, &instance).unwrap();
    let mut with_vi = assemble_m3(&g3, &instance).unwrap();
    add_valid_inequalities(&mut with_vi, &g3, &instance, ViLevel::M3Set);
    assert!(with_vi.model.rows.len() > plain.model.rows.len());
    assert_eq!(min_cost(&mut plain), min_cost(&mut with_vi));

    plain.set_single_objective(Objective::Pref);
    with_vi.set_single_objective(Objective::Pref);
    let a = solve(&plain.model, None, None, &SolveOptions::default());
    let b = solve(&with_vi.model, None, None, &SolveOptions::default());
    assert_eq!(a.objective, b.objective);
}

#[test]
fn single_task_user_covers_exactly_four_legs() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let g3 = build_graph_m3(&instance);
    let mut problem = assemble_m3(&g3, &instance).unwrap();
    add_valid_inequalities(&mut problem, &g3, &instance, ViLevel::M3Set);
    problem.set_single_objective(Objective::Cost);
    let out = solve(&problem.model, None, None, &SolveOptions::default());
    let values = out.values.unwrap();
    let user_selected = g3
        .user_legs(crate::instance::UserId(0))
        .filter(|l| values[problem.x_vars[l.id.0].0].round() == 1.0)
        .count();
    assert_eq!(user_selected, 4);
}

#[test]
fn nested_interval_pair_row_present() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(900, 1200, 10, 100)])]);
    let g4 = reduce_graph(&build_graph_m4(&instance));
    let mut problem = assemble_m4b(&g4, &instance).unwrap();
    let before = problem.model.rows.len();
    add_valid_inequalities(&mut problem, &g4, &instance, ViLevel::M4Set);
    assert!(problem.model.rows.len() > before);

    // find a nested-decreasing incompatible pair and its pairwise row
    let mut checked = false;
    'outer: for v in g4.nodes.iter().filter(|n| n.trip.is_some()) {
        for g in g4.in_legs(v.id) {
            for l in g4.out_legs(v.id) {
                let nested = l.o < g.o && l.e < g.e;
                let unreachable = g.o + g.time + v.service_time > l.e;
                if nested && unreachable {
                    let (xa, xb) = (problem.x_vars[l.id.0].0, problem.x_vars[g.id.0].0);
                    let present = problem.model.rows.iter().any(|r| {
                        r.rhs == 1.0
                            && r.coeffs.len() == 2
                            && r.coeffs.iter().any(|(v, _)| v.0 == xa)
                            && r.coeffs.iter().any(|(v, _)| v.0 == xb)
                    });
                    assert!(present, "pairwise interval row missing");
                    checked = true;
                    break 'outer;
                }
            }
        }
    }
    assert!(checked, "no nested incompatible pair in the graph");
}

#[test]
fn reference_warm_start_is_feasible_everywhere() {
    let instance = generate_instance(
        &GeneratorParams {
            n_users: 3,
            trips_per_user: 1..=2,
            tasks_per_trip: 1..=2,
            n_depots: 2,
            area: 4_000,
        },
        8,
    )
    .unwrap();
    let g1 = build_graph_m1(&instance);
    let p1 = assemble_m1(&g1, &instance).unwrap();
    let w1 = reference_warm_start(&p1, &g1, &instance).unwrap();
    assert!(p1.model.is_integer_feasible(&w1));

    let g3 = build_graph_m3(&instance);
    let p3 = assemble_m3(&g3, &instance).unwrap();
    let w3 = reference_warm_start(&p3, &g3, &instance).unwrap();
    assert!(p3.model.is_integer_feasible(&w3));

    let g4 = reduce_graph(&build_graph_m4(&instance));
    let p4 = assemble_m4(&g4, &instance).unwrap();
    let w4 = reference_warm_start(&p4, &g4, &instance).unwrap();
    assert!(p4.model.is_integer_feasible(&w4));

    let p4b = assemble_m4b(&g4, &instance).unwrap();
    let w4b = reference_warm_start(&p4b, &g4, &instance).unwrap();
    assert!(p4b.model.is_integer_feasible(&w4b));
}
