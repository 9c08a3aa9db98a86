//! Weighting binary search: recursive weighted-sum solves between adjacent
//! known points, in integer-weight form.
//!
//! For an adjacent pair A (cheaper) and B (better preference), the weights
//! `w1 = pref(A) - pref(B)` and `w2 = cost(B) - cost(A)` reproduce the
//! fractional chord weighting up to positive scaling, so the two box bounds
//! `cost <= cost(B) - 1` and `pref <= pref(A) - 1` keep every solve inside
//! the open box and every optimum is a new nondominated point. A point
//! splits the box in two; infeasibility closes it. The queue is FIFO.

use super::driver::{Driver, EnumerateConfig, FrontierInputs, SolveOutcome};
use super::{Frontier, ParetoPoint};
use crate::models::Objective;
use std::collections::VecDeque;
use std::time::Instant;

pub fn weighting_binary_search(
    inputs: &FrontierInputs<'_>,
    config: &EnumerateConfig,
) -> Frontier {
    let started = Instant::now();
    let mut driver = Driver::new(inputs, config);
    let mut frontier = Frontier {
        method: "wbs".into(),
        ..Default::default()
    };

    driver.iteration = 1;
    let cost_extreme = match driver.lexicographic(Objective::Cost, None) {
        Err(_) => {
            frontier.truncated = true;
            return finish(frontier, driver, started);
        }
        Ok(None) => return finish(frontier, driver, started),
        Ok(Some(p)) => p,
    };
    driver.iteration += 1;
    let pref_extreme = match driver.lexicographic(Objective::Pref, None) {
        Err(_) => {
            frontier.truncated = true;
            frontier.points.push(cost_extreme);
            return finish(frontier, driver, started);
        }
        Ok(None) => unreachable!("one extreme exists, so both do"),
        Ok(Some(p)) => p,
    };

    let single = cost_extreme.objectives() == pref_extreme.objectives();
    frontier.points.push(cost_extreme.clone());
    if single {
        return finish(frontier, driver, started);
    }
    frontier.points.push(pref_extreme.clone());

    let mut queue: VecDeque<(ParetoPoint, ParetoPoint)> = VecDeque::new();
    queue.push_back((cost_extreme, pref_extreme));
    while let Some((a, b)) = queue.pop_front() {
        debug_assert!(a.cost < b.cost && a.pref > b.pref);
        driver.iteration += 1;
        driver.stage_counts = [0; 3];
        let w_pref = b.cost - a.cost;
        let w_cost = a.pref - b.pref;
        let bounds = vec![
            inputs.problem.objective_row(Objective::Cost, b.cost - 1),
            inputs.problem.objective_row(Objective::Pref, a.pref - 1),
            // dominance against the box corners floors both objectives
            inputs.problem.objective_floor(Objective::Cost, a.cost + 1),
            inputs.problem.objective_floor(Objective::Pref, b.pref + 1),
        ];
        let solve_started = Instant::now();
        match driver.solve_weighted(w_cost, w_pref, &bounds) {
            SolveOutcome::Infeasible => continue,
            SolveOutcome::Budget => {
                frontier.truncated = true;
                break;
            }
            SolveOutcome::Solved { values, .. } => {
                let point =
                    driver.point_from(&values, solve_started.elapsed().as_secs_f64());
                debug_assert!(
                    point.cost > a.cost && point.cost < b.cost,
                    "weighted solve escaped the box"
                );
                queue.push_back((a, point.clone()));
                queue.push_back((point.clone(), b));
                frontier.points.push(point);
            }
        }
    }
    finish(frontier, driver, started)
}

fn finish(mut frontier: Frontier, mut driver: Driver<'_>, started: Instant) -> Frontier {
    frontier.cut_events = std::mem::take(&mut driver.cut_events);
    frontier.mip_solves = driver.mip_solves;
    frontier.total_seconds = started.elapsed().as_secs_f64();
    frontier.normalize();
    frontier
}
