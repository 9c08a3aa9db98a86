//! Line-oriented textual instance format.
//!
//! UTF-8, comma-separated fields, `#` starts a comment, blank lines ignored.
//! Sections in order:
//!
//! ```text
//! [params]   horizon,<min> / max_wait,<min> / alpha,<min>
//! [mots]     kind,speed,dist_rate,time_rate,emis_rate
//! [periods]  index,start,end,d_car,d_bike,d_public,
//!            b_car_num,b_car_den,b_bike_num,b_bike_den,b_public_num,b_public_den
//! [depots]   id,x,y,car_start,car_end
//! [users]    id,walk,bike,car,ecar,public,trip_ids(;-separated)
//! [trips]    id,user,start_depot,end_depot,ordered
//! [tasks]    id,trip,x,y,service,fixed_start      (order within trip = file order)
//! ```
//!
//! All integers are base 10. `load` rejects malformed text and invariant
//! violations with a line/field diagnostic; `load(save(i)) == i`.

use super::{
    Depot, DepotId, Instance, InstanceError, MotAccess, MotParams, Mot, Point, TaskId, TaskSpec,
    TimePeriod, TripId, TripSpec, User, UserId,
};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    Invalid(#[from] InstanceError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn save_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str("# mmcp instance\n[params]\n");
    let _ = writeln!(out, "horizon,{}", instance.horizon);
    let _ = writeln!(out, "max_wait,{}", instance.max_wait);
    let _ = writeln!(out, "alpha,{}", instance.alpha);

    out.push_str("[mots]\n");
    for m in &instance.mots {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            m.mot, m.speed, m.distance_cost_rate, m.time_cost_rate, m.emission_cost_rate
        );
    }

    out.push_str("[periods]\n");
    for p in &instance.periods {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            p.index,
            p.start,
            p.end,
            p.pref_delta[0],
            p.pref_delta[1],
            p.pref_delta[2],
            p.beta_num[0],
            p.beta_den[0],
            p.beta_num[1],
            p.beta_den[1],
            p.beta_num[2],
            p.beta_den[2],
        );
    }

    out.push_str("[depots]\n");
    for d in &instance.depots {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            d.id, d.location.x, d.location.y, d.car_start, d.car_end
        );
    }

    out.push_str("[users]\n");
    for u in &instance.users {
        let bits = u.mot_access.bits().map(|b| if b { "1" } else { "0" });
        let trips: Vec<String> = u.trip_ids.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            u.id,
            bits[0],
            bits[1],
            bits[2],
            bits[3],
            bits[4],
            trips.join(";")
        );
    }

    out.push_str("[trips]\n");
    for t in &instance.trips {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            t.id,
            t.user_id,
            t.start_depot,
            t.end_depot,
            if t.given_order_is_reference { 1 } else { 0 }
        );
    }

    out.push_str("[tasks]\n");
    for t in &instance.trips {
        for task in &t.tasks {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                task.id, t.id, task.location.x, task.location.y, task.service_time, task.fixed_start
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Params,
    Mots,
    Periods,
    Depots,
    Users,
    Trips,
    Tasks,
}

struct FieldReader<'a> {
    line: usize,
    fields: std::slice::Iter<'a, &'a str>,
    names: &'static [&'static str],
    taken: usize,
}

impl<'a> FieldReader<'a> {
    fn new(line: usize, fields: &'a [&'a str], names: &'static [&'static str]) -> Self {
        FieldReader {
            line,
            fields: fields.iter(),
            names,
            taken: 0,
        }
    }

    fn next_raw(&mut self) -> Result<&'a str, ParseError> {
        let name = self.names.get(self.taken).copied().unwrap_or("?");
        self.taken += 1;
        self.fields
            .next()
            .copied()
            .ok_or_else(|| syntax(self.line, format!("missing field `{name}`")))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let name = self.names.get(self.taken).copied().unwrap_or("?");
        let raw = self.next_raw()?;
        raw.trim()
            .parse::<i64>()
            .map_err(|_| syntax(self.line, format!("field `{name}`: expected integer, got `{raw}`")))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let v = self.int()?;
        if v < 0 {
            return Err(syntax(self.line, "negative id"));
        }
        Ok(v as usize)
    }

    fn flag(&mut self) -> Result<bool, ParseError> {
        let v = self.int()?;
        Ok(v != 0)
    }

    fn done(self) -> Result<(), ParseError> {
        let extra = self.fields.count();
        if extra > 0 {
            return Err(syntax(self.line, format!("{extra} extra field(s)")));
        }
        Ok(())
    }
}

pub fn load_instance(text: &str) -> Result<Instance, ParseError> {
    let mut section = Section::None;
    let mut horizon = None;
    let mut max_wait = None;
    let mut alpha = None;
    let mut mots: Vec<MotParams> = Vec::new();
    let mut periods: Vec<TimePeriod> = Vec::new();
    let mut depots: Vec<Depot> = Vec::new();
    let mut users: Vec<User> = Vec::new();
    let mut trips: Vec<TripSpec> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match name {
                "params" => Section::Params,
                "mots" => Section::Mots,
                "periods" => Section::Periods,
                "depots" => Section::Depots,
                "users" => Section::Users,
                "trips" => Section::Trips,
                "tasks" => Section::Tasks,
                other => return Err(syntax(line_no, format!("unknown section `[{other}]`"))),
            };
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        match section {
            Section::None => return Err(syntax(line_no, "data before first section header")),
            Section::Params => {
                let mut r = FieldReader::new(line_no, &fields, &["name", "value"]);
                let key = r.next_raw()?;
                let value = r.int()?;
                r.done()?;
                match key {
                    "horizon" => horizon = Some(value),
                    "max_wait" => max_wait = Some(value),
                    "alpha" => alpha = Some(value),
                    other => return Err(syntax(line_no, format!("unknown parameter `{other}`"))),
                }
            }
            Section::Mots => {
                let mut r = FieldReader::new(
                    line_no,
                    &fields,
                    &["kind", "speed", "dist_rate", "time_rate", "emis_rate"],
                );
                let kind = r.next_raw()?;
                let mot = Mot::parse(kind)
                    .ok_or_else(|| syntax(line_no, format!("unknown mot kind `{kind}`")))?;
                let speed = r.int()?;
                let distance_cost_rate = r.int()?;
                let time_cost_rate = r.int()?;
                let emission_cost_rate = r.int()?;
                r.done()?;
                mots.push(MotParams {
                    mot,
                    speed,
                    distance_cost_rate,
                    time_cost_rate,
                    emission_cost_rate,
                });
            }
            Section::Periods => {
                let mut r = FieldReader::new(
                    line_no,
                    &fields,
                    &[
                        "index", "start", "end", "d_car", "d_bike", "d_public", "b_car_num",
                        "b_car_den", "b_bike_num", "b_bike_den", "b_public_num", "b_public_den",
                    ],
                );
                let index = r.index()?;
                let start = r.int()?;
                let end = r.int()?;
                let pref_delta = [r.int()?, r.int()?, r.int()?];
                let mut beta_num = [0i64; 3];
                let mut beta_den = [0i64; 3];
                for k in 0..3 {
                    beta_num[k] = r.int()?;
                    beta_den[k] = r.int()?;
                    if beta_den[k] <= 0 {
                        return Err(syntax(line_no, "beta denominator must be positive"));
                    }
                }
                r.done()?;
                periods.push(TimePeriod {
                    index,
                    start,
                    end,
                    pref_delta,
                    beta_num,
                    beta_den,
                });
            }
            Section::Depots => {
                let mut r =
                    FieldReader::new(line_no, &fields, &["id", "x", "y", "car_start", "car_end"]);
                let id = DepotId(r.index()?);
                let location = Point::new(r.int()?, r.int()?);
                let car_start = r.int()?;
                let car_end = r.int()?;
                r.done()?;
                depots.push(Depot {
                    id,
                    location,
                    car_start,
                    car_end,
                });
            }
            Section::Users => {
                let mut r = FieldReader::new(
                    line_no,
                    &fields,
                    &["id", "walk", "bike", "car", "ecar", "public", "trip_ids"],
                );
                let id = UserId(r.index()?);
                let mot_access = MotAccess {
                    walk: r.flag()?,
                    bike: r.flag()?,
                    car: r.flag()?,
                    ecar: r.flag()?,
                    public: r.flag()?,
                };
                let trips_raw = r.next_raw()?;
                r.done()?;
                let mut trip_ids = Vec::new();
                for part in trips_raw.split(';').filter(|p| !p.is_empty()) {
                    let t = part.trim().parse::<usize>().map_err(|_| {
                        syntax(line_no, format!("field `trip_ids`: bad id `{part}`"))
                    })?;
                    trip_ids.push(TripId(t));
                }
                users.push(User {
                    id,
                    mot_access,
                    trip_ids,
                });
            }
            Section::Trips => {
                let mut r = FieldReader::new(
                    line_no,
                    &fields,
                    &["id", "user", "start_depot", "end_depot", "ordered"],
                );
                let id = TripId(r.index()?);
                let user_id = UserId(r.index()?);
                let start_depot = DepotId(r.index()?);
                let end_depot = DepotId(r.index()?);
                let given_order_is_reference = r.flag()?;
                r.done()?;
                trips.push(TripSpec {
                    id,
                    user_id,
                    start_depot,
                    end_depot,
                    tasks: Vec::new(),
                    given_order_is_reference,
                });
            }
            Section::Tasks => {
                let mut r = FieldReader::new(
                    line_no,
                    &fields,
                    &["id", "trip", "x", "y", "service", "fixed_start"],
                );
                let id = TaskId(r.index()?);
                let trip = r.index()?;
                let location = Point::new(r.int()?, r.int()?);
                let service_time = r.int()?;
                let fixed_start = r.int()?;
                r.done()?;
                let trip = trips
                    .get_mut(trip)
                    .ok_or_else(|| syntax(line_no, format!("task {id} references unknown trip {trip}")))?;
                trip.tasks.push(TaskSpec {
                    id,
                    location,
                    service_time,
                    fixed_start,
                });
            }
        }
    }

    let horizon = horizon.ok_or_else(|| syntax(0, "missing parameter `horizon`"))?;
    let max_wait = max_wait.ok_or_else(|| syntax(0, "missing parameter `max_wait`"))?;
    let alpha = alpha.ok_or_else(|| syntax(0, "missing parameter `alpha`"))?;

    let instance = Instance {
        users,
        depots,
        trips,
        periods,
        mots,
        horizon,
        max_wait,
        alpha,
    };
    instance.validate()?;
    Ok(instance)
}
