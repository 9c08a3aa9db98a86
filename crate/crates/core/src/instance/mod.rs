//! Problem data model: users, depots, trips, tasks, time periods, modes of
//! transport, plus the deterministic instance generator and the textual
//! instance file format.
//!
//! All quantities are integers: coordinates and distances in meters, times in
//! minutes, cost rates in milli-units per meter or per minute, final costs in
//! whole cost units. Integer objectives are load-bearing: the frontier
//! enumeration tightens bounds by exactly 1 per iteration.

mod format;
pub(crate) mod generate;
pub mod tables;

pub use format::{load_instance, save_instance, ParseError};
pub use generate::{generate_instance, GenerateError, GeneratorParams};

use std::fmt;
use thiserror::Error;

/// Mode of transport. `Public` covers public transportation including
/// walking; e-cars share the `Car` weight class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mot {
    Car,
    Bike,
    Public,
}

impl Mot {
    pub const ALL: [Mot; 3] = [Mot::Car, Mot::Bike, Mot::Public];

    pub fn index(self) -> usize {
        match self {
            Mot::Car => 0,
            Mot::Bike => 1,
            Mot::Public => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mot::Car => "car",
            Mot::Bike => "bike",
            Mot::Public => "public",
        }
    }

    pub fn parse(s: &str) -> Option<Mot> {
        match s {
            "car" => Some(Mot::Car),
            "bike" => Some(Mot::Bike),
            "public" => Some(Mot::Public),
            _ => None,
        }
    }
}

impl fmt::Display for Mot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub usize);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(UserId);
id_type!(TripId);
id_type!(TaskId);
id_type!(DepotId);

/// Planar point in meters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    /// Euclidean distance rounded up to whole meters.
    pub fn distance(self, other: Point) -> i64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let d2 = dx * dx + dy * dy;
        ceil_sqrt(d2)
    }
}

/// Smallest s with s*s >= d2 (d2 >= 0).
fn ceil_sqrt(d2: i64) -> i64 {
    if d2 <= 0 {
        return 0;
    }
    let mut s = (d2 as f64).sqrt() as i64;
    while s * s < d2 {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= d2 {
        s -= 1;
    }
    s
}

/// Integer division rounding half up; `den > 0`, `num >= 0`.
pub(crate) fn div_round_half_up(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0 && num >= 0);
    (2 * num + den) / (2 * den)
}

/// Which modes a user personally has access to. Drives the preference-score
/// lookup; the solver itself may still assign any mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MotAccess {
    pub walk: bool,
    pub bike: bool,
    pub car: bool,
    pub ecar: bool,
    pub public: bool,
}

impl MotAccess {
    pub fn bits(self) -> [bool; 5] {
        [self.walk, self.bike, self.car, self.ecar, self.public]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct User {
    pub id: UserId,
    pub mot_access: MotAccess,
    /// The user's trips in stored (reference) order.
    pub trip_ids: Vec<TripId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    pub id: TaskId,
    pub location: Point,
    /// Service duration at the task, minutes.
    pub service_time: i64,
    /// Task start in the fixed reference schedule; used only by the
    /// fixed-sequence variants' weight evaluation.
    pub fixed_start: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripSpec {
    pub id: TripId,
    pub user_id: UserId,
    pub start_depot: DepotId,
    pub end_depot: DepotId,
    /// Tasks in stored order; the fixed sequence for m1/m2 and the warm
    /// start for m3/m4.
    pub tasks: Vec<TaskSpec>,
    pub given_order_is_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Depot {
    pub id: DepotId,
    pub location: Point,
    /// Shared cars available at the start of the horizon. Other modes are
    /// unbounded.
    pub car_start: i64,
    /// Cap on cars parked here at the end of the horizon.
    pub car_end: i64,
}

/// One period of the day with preference adjustments and cost/time factors
/// per mode. Deltas and betas are indexed by [`Mot::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimePeriod {
    pub index: usize,
    pub start: i64,
    pub end: i64,
    pub pref_delta: [i64; 3],
    pub beta_num: [i64; 3],
    pub beta_den: [i64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotParams {
    pub mot: Mot,
    /// Meters per minute.
    pub speed: i64,
    /// Milli-units per meter.
    pub distance_cost_rate: i64,
    /// Milli-units per minute.
    pub time_cost_rate: i64,
    /// Milli-units per meter.
    pub emission_cost_rate: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub users: Vec<User>,
    pub depots: Vec<Depot>,
    pub trips: Vec<TripSpec>,
    pub periods: Vec<TimePeriod>,
    pub mots: Vec<MotParams>,
    /// End of planning horizon, minutes.
    pub horizon: i64,
    /// Maximal waiting time at a node, minutes.
    pub max_wait: i64,
    /// Time discretization step for the expanded variants, minutes.
    pub alpha: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("horizon {0} is not a positive multiple of alpha {1}")]
    BadHorizon(i64, i64),
    #[error("period {0}: expected start {1}, found {2} (gap or overlap)")]
    PeriodGap(usize, i64, i64),
    #[error("periods end at {0}, horizon is {1}")]
    PeriodCoverage(i64, i64),
    #[error("period {0} is empty or reversed")]
    PeriodEmpty(usize),
    #[error("duplicate task id {0}")]
    DuplicateTask(TaskId),
    #[error("trip {0} has no tasks")]
    EmptyTrip(TripId),
    #[error("trip {0} references unknown depot {1}")]
    UnknownDepot(TripId, DepotId),
    #[error("trip {0} referenced by user {1} but owned by user {2}")]
    TripOwner(TripId, UserId, UserId),
    #[error("user {0} has no trips")]
    NoTrips(UserId),
    #[error("trip {0} is not referenced by its user {1}")]
    OrphanTrip(TripId, UserId),
    #[error("task {0}: service time {1} is negative")]
    NegativeService(TaskId, i64),
    #[error("task {0}: fixed start {1} outside [0, {2})")]
    FixedStartRange(TaskId, i64, i64),
    #[error("depot {0}: negative car count")]
    NegativeCars(DepotId),
    #[error("mot {0}: speed must be positive")]
    BadSpeed(Mot),
    #[error("expected parameters for exactly car, bike, public")]
    BadMotSet,
    #[error("duplicate {0} id {1}")]
    DuplicateId(&'static str, usize),
}

impl Instance {
    pub fn user(&self, id: UserId) -> &User {
        &self.users[id.0]
    }

    pub fn trip(&self, id: TripId) -> &TripSpec {
        &self.trips[id.0]
    }

    pub fn depot(&self, id: DepotId) -> &Depot {
        &self.depots[id.0]
    }

    pub fn mot_params(&self, mot: Mot) -> &MotParams {
        self.mots.iter().find(|m| m.mot == mot).expect("validated mot set")
    }

    /// The period containing minute `t`; times at or past the horizon fall
    /// into the last period.
    pub fn period_at(&self, t: i64) -> &TimePeriod {
        self.periods
            .iter()
            .find(|p| p.start <= t && t < p.end)
            .unwrap_or_else(|| self.periods.last().expect("nonempty periods"))
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.horizon <= 0 || self.alpha <= 0 || self.horizon % self.alpha != 0 {
            return Err(InstanceError::BadHorizon(self.horizon, self.alpha));
        }
        // ids must equal vector positions; the file format preserves this
        for (i, u) in self.users.iter().enumerate() {
            if u.id.0 != i {
                return Err(InstanceError::DuplicateId("user", u.id.0));
            }
        }
        for (i, d) in self.depots.iter().enumerate() {
            if d.id.0 != i {
                return Err(InstanceError::DuplicateId("depot", d.id.0));
            }
        }
        for (i, t) in self.trips.iter().enumerate() {
            if t.id.0 != i {
                return Err(InstanceError::DuplicateId("trip", t.id.0));
            }
        }
        if self.periods.is_empty() {
            return Err(InstanceError::PeriodCoverage(0, self.horizon));
        }
        let mut expect = 0;
        for p in &self.periods {
            if p.end <= p.start {
                return Err(InstanceError::PeriodEmpty(p.index));
            }
            if p.start != expect {
                return Err(InstanceError::PeriodGap(p.index, expect, p.start));
            }
            expect = p.end;
        }
        if expect != self.horizon {
            return Err(InstanceError::PeriodCoverage(expect, self.horizon));
        }
        {
            let mut kinds: Vec<Mot> = self.mots.iter().map(|m| m.mot).collect();
            kinds.sort();
            kinds.dedup();
            if kinds.len() != 3 || self.mots.len() != 3 {
                return Err(InstanceError::BadMotSet);
            }
        }
        for m in &self.mots {
            if m.speed <= 0 {
                return Err(InstanceError::BadSpeed(m.mot));
            }
        }
        for d in &self.depots {
            if d.car_start < 0 || d.car_end < 0 {
                return Err(InstanceError::NegativeCars(d.id));
            }
        }
        let mut seen_tasks = std::collections::HashSet::new();
        for trip in &self.trips {
            if trip.tasks.is_empty() {
                return Err(InstanceError::EmptyTrip(trip.id));
            }
            for d in [trip.start_depot, trip.end_depot] {
                if d.0 >= self.depots.len() {
                    return Err(InstanceError::UnknownDepot(trip.id, d));
                }
            }
            for task in &trip.tasks {
                if !seen_tasks.insert(task.id) {
                    return Err(InstanceError::DuplicateTask(task.id));
                }
                if task.service_time < 0 {
                    return Err(InstanceError::NegativeService(task.id, task.service_time));
                }
                if task.fixed_start < 0 || task.fixed_start >= self.horizon {
                    return Err(InstanceError::FixedStartRange(
                        task.id,
                        task.fixed_start,
                        self.horizon,
                    ));
                }
            }
            let owner = &self.users[trip.user_id.0];
            if !owner.trip_ids.contains(&trip.id) {
                return Err(InstanceError::OrphanTrip(trip.id, trip.user_id));
            }
        }
        for user in &self.users {
            if user.trip_ids.is_empty() {
                return Err(InstanceError::NoTrips(user.id));
            }
            for &t in &user.trip_ids {
                if t.0 >= self.trips.len() {
                    return Err(InstanceError::TripOwner(t, user.id, user.id));
                }
                let trip = &self.trips[t.0];
                if trip.user_id != user.id {
                    return Err(InstanceError::TripOwner(t, user.id, trip.user_id));
                }
            }
        }
        Ok(())
    }

    /// Base preference score (1..=10, lower is better) of a mode for a user.
    /// Exact table lookup on the user's access pattern; unknown patterns map
    /// to the all-zero row.
    pub fn base_preference(&self, user: &User, mot: Mot) -> i64 {
        tables::preference_scores(user.mot_access.bits())[mot.index()]
    }

    /// Time-dependent preference: base score plus the period delta, clamped
    /// to [1, 10].
    pub fn period_preference(&self, user: &User, mot: Mot, period: &TimePeriod) -> i64 {
        let raw = self.base_preference(user, mot) + period.pref_delta[mot.index()];
        raw.clamp(1, 10)
    }

    /// Distance (m), base travel time (min) and base cost between two points
    /// for a mode. Zero for coincident points.
    pub fn travel_metrics(&self, from: Point, to: Point, mot: Mot) -> (i64, i64, i64) {
        let params = self.mot_params(mot);
        let dist = from.distance(to);
        let time = (dist + params.speed - 1) / params.speed;
        let milli = dist * params.distance_cost_rate
            + time * params.time_cost_rate
            + dist * params.emission_cost_rate;
        let cost = div_round_half_up(milli, 1000);
        (dist, time, cost)
    }

    /// Scale base cost and time by the period's beta factor for the mode,
    /// rounding to nearest.
    pub fn apply_beta(&self, base_cost: i64, base_time: i64, mot: Mot, period: &TimePeriod) -> (i64, i64) {
        let num = period.beta_num[mot.index()];
        let den = period.beta_den[mot.index()];
        (
            div_round_half_up(base_cost * num, den),
            div_round_half_up(base_time * num, den),
        )
    }
}

#[cfg(test)]
mod test;
