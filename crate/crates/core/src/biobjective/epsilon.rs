//! Epsilon-constraint enumeration: lexicographic solves with the secondary
//! objective bounded one unit below the previous point.

use super::driver::{Direction, Driver, EnumerateConfig, FrontierInputs};
use super::Frontier;
use crate::models::Objective;

/// Enumerate the full frontier from one end to the other. Objectives are
/// integral, so tightening the secondary bound by one per iteration visits
/// every nondominated point exactly once.
pub fn epsilon_constraint(
    inputs: &FrontierInputs<'_>,
    direction: Direction,
    config: &EnumerateConfig,
) -> Frontier {
    let started = std::time::Instant::now();
    let mut driver = Driver::new(inputs, config);
    let mut frontier = Frontier {
        method: format!(
            "eps-{}",
            match direction {
                Direction::CostFirst => "cost",
                Direction::PrefFirst => "pref",
            }
        ),
        ..Default::default()
    };
    let primary = direction.primary();
    let secondary = direction.secondary();
    let mut bound: Option<i64> = None;
    let mut floor: Option<i64> = None;
    loop {
        driver.iteration += 1;
        let mut extra = Vec::new();
        if let Some(b) = bound {
            extra.push(inputs.problem.objective_row(secondary, b - 1));
        }
        if let Some(f) = floor {
            // the next point must strictly exceed the previous primary,
            // otherwise it would dominate the previous point
            extra.push(inputs.problem.objective_floor(primary, f + 1));
        }
        let outcome = driver.lexicographic_rows(primary, extra);
        match outcome {
            Err(_) => {
                frontier.truncated = true;
                break;
            }
            Ok(None) => break,
            Ok(Some(point)) => {
                let (p, s) = match primary {
                    Objective::Cost => (point.cost, point.pref),
                    Objective::Pref => (point.pref, point.cost),
                };
                bound = Some(s);
                floor = Some(p);
                frontier.points.push(point);
            }
        }
    }
    frontier.cut_events = std::mem::take(&mut driver.cut_events);
    frontier.mip_solves = driver.mip_solves;
    frontier.total_seconds = started.elapsed().as_secs_f64();
    frontier.normalize();
    frontier
}
