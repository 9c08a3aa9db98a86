//! Exact Pareto-frontier enumeration: the epsilon-constraint scheme and a
//! weighting binary search, both optionally carrying separation cuts forward
//! across iterations, plus the brute-force oracle and frontier checks.

mod brute;
mod driver;
mod epsilon;
mod weighting;

pub use brute::{brute_force_frontier, OracleError, ORACLE_LIMITS};
pub use driver::{Direction, EnumerateConfig, FrontierInputs};
pub use epsilon::epsilon_constraint;
pub use weighting::weighting_binary_search;

use crate::instance::Mot;
use crate::multigraph::{Graph, LegId, LegKind};
use crate::separation::CutEvent;
use std::io::{self, BufRead, Write};

/// One nondominated solution: integer objective pair, its leg selection and
/// solve telemetry.
#[derive(Debug, Clone)]
pub struct ParetoPoint {
    pub cost: i64,
    pub pref: i64,
    pub legs: Vec<LegId>,
    pub solve_seconds: f64,
    pub cuts_user: usize,
    pub cuts_car: usize,
    pub cuts_sync: usize,
    pub trips_car: usize,
    pub trips_bike: usize,
    pub trips_public: usize,
}

impl ParetoPoint {
    pub fn objectives(&self) -> (i64, i64) {
        (self.cost, self.pref)
    }
}

/// Frontier points ordered by increasing cost (hence decreasing preference).
#[derive(Debug, Clone, Default)]
pub struct Frontier {
    pub points: Vec<ParetoPoint>,
    pub method: String,
    /// Budget ran out; the points are a subset of the true frontier.
    pub truncated: bool,
    /// (iteration, event) per separation cut over the whole enumeration.
    pub cut_events: Vec<(usize, CutEvent)>,
    pub mip_solves: usize,
    pub total_seconds: f64,
}

impl Frontier {
    pub fn objective_pairs(&self) -> Vec<(i64, i64)> {
        self.points.iter().map(|p| p.objectives()).collect()
    }

    pub fn total_cuts(&self) -> usize {
        self.cut_events.len()
    }

    /// Sort by cost and drop dominated or duplicate points (defensive; the
    /// enumeration schemes only produce nondominated points).
    pub fn normalize(&mut self) {
        self.points.sort_by_key(|p| (p.cost, p.pref));
        let mut keep: Vec<ParetoPoint> = Vec::with_capacity(self.points.len());
        for p in self.points.drain(..) {
            match keep.last() {
                Some(last) if p.pref >= last.pref => {}
                _ => keep.push(p),
            }
        }
        self.points = keep;
    }
}

/// Re-check a frontier: strict ordering, mutual nondominance, and objective
/// values consistent with the graph weights of each selection.
pub fn verify_frontier(frontier: &Frontier, graph: &Graph) -> Result<(), String> {
    for pair in frontier.points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if !(a.cost < b.cost && a.pref > b.pref) {
            return Err(format!(
                "dominance violation between ({}, {}) and ({}, {})",
                a.cost, a.pref, b.cost, b.pref
            ));
        }
    }
    for p in &frontier.points {
        // points read back from CSV carry no selection; skip re-evaluation
        if !p.legs.is_empty() {
            let mut cost = 0;
            let mut pref = 0;
            for &l in &p.legs {
                let leg = graph.leg(l);
                cost += leg.cost;
                pref += leg.pref;
            }
            if (cost, pref) != (p.cost, p.pref) {
                return Err(format!(
                    "objective mismatch: stored ({}, {}), recomputed ({cost}, {pref})",
                    p.cost, p.pref
                ));
            }
        }
        if p.cost < 0 || p.pref < 0 {
            return Err("negative objective".into());
        }
    }
    Ok(())
}

/// Trips covered per mode in a selection (a trip's mode is the mode of its
/// trip legs).
pub fn trips_by_mot(graph: &Graph, legs: &[LegId]) -> [usize; 3] {
    let mut seen: std::collections::HashSet<(crate::instance::TripId, Mot)> =
        std::collections::HashSet::new();
    for &l in legs {
        let leg = graph.leg(l);
        if leg.kind == LegKind::Trip {
            if let (Some(trip), Some(mot)) = (graph.node(leg.from).trip, leg.mot) {
                seen.insert((trip, mot));
            }
        }
    }
    let mut counts = [0usize; 3];
    for (_, mot) in seen {
        counts[mot.index()] += 1;
    }
    counts
}

pub const FRONTIER_CSV_HEADER: &str =
    "cost,preference,solve_seconds,cuts_user,cuts_car,cuts_sync,trips_car,trips_bike,trips_public";

pub fn write_frontier_csv<W: Write>(mut w: W, frontier: &Frontier) -> io::Result<()> {
    writeln!(w, "{FRONTIER_CSV_HEADER}")?;
    for p in &frontier.points {
        writeln!(
            w,
            "{},{},{:.3},{},{},{},{},{},{}",
            p.cost,
            p.pref,
            p.solve_seconds,
            p.cuts_user,
            p.cuts_car,
            p.cuts_sync,
            p.trips_car,
            p.trips_bike,
            p.trips_public
        )?;
    }
    Ok(())
}

/// Read back a frontier CSV (objective columns and telemetry; leg
/// selections are not serialized).
pub fn read_frontier_csv<R: BufRead>(r: R) -> io::Result<Frontier> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "empty frontier file"))??;
    if header.trim() != FRONTIER_CSV_HEADER {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unexpected header: {header}"),
        ));
    }
    let mut frontier = Frontier::default();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {}: expected 9 fields, got {}", i + 2, fields.len()),
            ));
        }
        let int = |s: &str| -> io::Result<i64> {
            s.trim()
                .parse()
                .map_err(|_| io::Error::new(io::ErrorKind::InvalidData, format!("bad integer `{s}`")))
        };
        frontier.points.push(ParetoPoint {
            cost: int(fields[0])?,
            pref: int(fields[1])?,
            legs: Vec::new(),
            solve_seconds: fields[2].trim().parse().unwrap_or(0.0),
            cuts_user: int(fields[3])? as usize,
            cuts_car: int(fields[4])? as usize,
            cuts_sync: int(fields[5])? as usize,
            trips_car: int(fields[6])? as usize,
            trips_bike: int(fields[7])? as usize,
            trips_public: int(fields[8])? as usize,
        });
    }
    Ok(frontier)
}

#[cfg(test)]
mod test;
