//! Deterministic synthetic instance generator.
//!
//! Layout choices keep generated instances solvable end to end: consecutive
//! trips of a user chain through the same depot, the stored task order is
//! walkable by public transport with short waits, and depot car pools are
//! sized to the trips touching them. Every draw flows from the single seed.

use super::tables;
use super::{
    Depot, DepotId, Instance, MotAccess, MotParams, Mot, Point, TaskId, TaskSpec, TripId,
    TripSpec, User, UserId,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct GeneratorParams {
    pub n_users: usize,
    pub trips_per_user: RangeInclusive<usize>,
    pub tasks_per_trip: RangeInclusive<usize>,
    pub n_depots: usize,
    /// Side of the square service area, meters.
    pub area: i64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            n_users: 3,
            trips_per_user: 1..=2,
            tasks_per_trip: 1..=2,
            n_depots: 2,
            area: 5_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error("could not place a time-feasible schedule within {0} retries; parameters too tight")]
    RetryBudget(usize),
}

const RETRIES_PER_USER: usize = 64;
/// Keep a little room at the end of the day so stored schedules never touch
/// the horizon.
const DAY_MARGIN: i64 = 30;

pub fn generate_instance(params: &GeneratorParams, seed: u64) -> Result<Instance, GenerateError> {
    if params.n_users == 0 {
        return Err(GenerateError::BadParams("n_users must be >= 1".into()));
    }
    if params.n_depots == 0 {
        return Err(GenerateError::BadParams("n_depots must be >= 1".into()));
    }
    if params.trips_per_user.is_empty() || params.tasks_per_trip.is_empty() {
        return Err(GenerateError::BadParams("empty range".into()));
    }
    if params.area <= 0 {
        return Err(GenerateError::BadParams("area must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = 720;
    let max_wait = 30;

    let mots = default_mot_params();
    let public_speed = mots.iter().find(|m| m.mot == Mot::Public).unwrap().speed;

    let mut depots: Vec<Depot> = (0..params.n_depots)
        .map(|i| Depot {
            id: DepotId(i),
            location: random_point(&mut rng, params.area),
            car_start: 0,
            car_end: 0,
        })
        .collect();

    let mut users = Vec::with_capacity(params.n_users);
    let mut trips: Vec<TripSpec> = Vec::new();
    let mut next_task = 0usize;

    for u in 0..params.n_users {
        let access = MotAccess {
            walk: rng.gen_bool(0.5),
            bike: rng.gen_bool(0.5),
            car: rng.gen_bool(0.5),
            ecar: rng.gen_bool(0.5),
            public: rng.gen_bool(0.5),
        };
        let n_trips = rng.gen_range(params.trips_per_user.clone());

        // Retry the user's whole day until the public-transport walk of the
        // stored order fits the horizon with waits below max_wait.
        let mut placed = None;
        for attempt in 0..RETRIES_PER_USER {
            // Later attempts shrink the task counts toward the range minimum.
            let shrink = attempt >= RETRIES_PER_USER / 2;
            let day = place_user_day(
                &mut rng,
                params,
                &depots,
                public_speed,
                horizon - DAY_MARGIN,
                n_trips,
                shrink,
            );
            if let Some(day) = day {
                placed = Some(day);
                break;
            }
        }
        let day = placed.ok_or(GenerateError::RetryBudget(RETRIES_PER_USER))?;

        let mut trip_ids = Vec::new();
        for draft in day {
            let trip_id = TripId(trips.len());
            trip_ids.push(trip_id);
            let tasks = draft
                .tasks
                .into_iter()
                .map(|t| {
                    let id = TaskId(next_task);
                    next_task += 1;
                    TaskSpec {
                        id,
                        location: t.location,
                        service_time: t.service_time,
                        fixed_start: t.fixed_start,
                    }
                })
                .collect();
            trips.push(TripSpec {
                id: trip_id,
                user_id: UserId(u),
                start_depot: draft.start_depot,
                end_depot: draft.end_depot,
                tasks,
                given_order_is_reference: true,
            });
        }
        users.push(User {
            id: UserId(u),
            mot_access: access,
            trip_ids,
        });
    }

    // Pool sizes: one car per trip starting/ending at the depot. Covering
    // every trip by car stays feasible, which keeps the fixed-sequence
    // frontier reachable from the flexible variants.
    for trip in &trips {
        depots[trip.start_depot.0].car_start += 1;
        depots[trip.end_depot.0].car_end += 1;
    }

    let instance = Instance {
        users,
        depots,
        trips,
        periods: tables::default_periods(),
        mots,
        horizon,
        max_wait,
        alpha: 15,
    };
    debug_assert_eq!(instance.validate(), Ok(()));
    Ok(instance)
}

pub(crate) fn default_mot_params() -> Vec<MotParams> {
    vec![
        MotParams {
            mot: Mot::Car,
            speed: 500,
            distance_cost_rate: 350,
            time_cost_rate: 80,
            emission_cost_rate: 120,
        },
        MotParams {
            mot: Mot::Bike,
            speed: 300,
            distance_cost_rate: 40,
            time_cost_rate: 110,
            emission_cost_rate: 0,
        },
        MotParams {
            mot: Mot::Public,
            speed: 180,
            distance_cost_rate: 25,
            time_cost_rate: 60,
            emission_cost_rate: 15,
        },
    ]
}

struct DraftTask {
    location: Point,
    service_time: i64,
    fixed_start: i64,
}

struct DraftTrip {
    start_depot: DepotId,
    end_depot: DepotId,
    tasks: Vec<DraftTask>,
}

fn random_point(rng: &mut ChaCha8Rng, area: i64) -> Point {
    Point::new(rng.gen_range(0..=area), rng.gen_range(0..=area))
}

fn public_time(from: Point, to: Point, speed: i64) -> i64 {
    let d = from.distance(to);
    (d + speed - 1) / speed
}

/// Lay out one user's day: chained trips, tasks walked by public transport,
/// waits of at most 10 minutes baked into the fixed starts. Returns None if
/// the day does not fit the budgeted horizon.
fn place_user_day(
    rng: &mut ChaCha8Rng,
    params: &GeneratorParams,
    depots: &[Depot],
    public_speed: i64,
    latest_end: i64,
    n_trips: usize,
    shrink_tasks: bool,
) -> Option<Vec<DraftTrip>> {
    let mut clock = rng.gen_range(10..=90);
    let mut current_depot = DepotId(rng.gen_range(0..depots.len()));
    let mut day = Vec::with_capacity(n_trips);

    for _ in 0..n_trips {
        let n_tasks = if shrink_tasks {
            *params.tasks_per_trip.start()
        } else {
            rng.gen_range(params.tasks_per_trip.clone())
        };
        let start_depot = current_depot;
        let end_depot = DepotId(rng.gen_range(0..depots.len()));

        let mut tasks = Vec::with_capacity(n_tasks);
        let mut here = depots[start_depot.0].location;
        for _ in 0..n_tasks {
            let location = random_point(rng, params.area);
            let service_time = rng.gen_range(5..=15);
            clock += public_time(here, location, public_speed);
            // small slack so the reference schedule tolerates rounding
            clock += rng.gen_range(0..=10);
            if clock >= latest_end {
                return None;
            }
            tasks.push(DraftTask {
                location,
                service_time,
                fixed_start: clock,
            });
            clock += service_time;
            here = location;
        }
        clock += public_time(here, depots[end_depot.0].location, public_speed);
        if clock >= latest_end {
            return None;
        }
        day.push(DraftTrip {
            start_depot,
            end_depot,
            tasks,
        });

        // the user continues from where the trip ended
        current_depot = end_depot;
        clock += rng.gen_range(5..=25);
    }
    Some(day)
}
