//! Valid-inequality families. The base set strengthens the free-sequence
//! variants; the interval set adds incompatibility rows between timed legs.
//!
//! Interval rows are only emitted for pairs that are provably incompatible
//! under the sequencing semantics: arriving via `g` forces the departure on
//! `l` into `[o_g + t_g + s_v, e_g + t_g + s_v + h]`, so the pair is usable
//! iff that window meets `[o_l, e_l]`. The literal "nested interval" form
//! without this guard cuts off feasible boundary cases (zero travel times on
//! artificial legs, overlapping merged intervals), so every emitted row
//! carries the guard.

use super::AssembledProblem;
use crate::instance::{Instance, Mot};
use crate::mip::Row;
use crate::multigraph::{Graph, Leg, LegKind, NodeId};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ViLevel {
    #[default]
    None,
    /// Families valid on any free-sequence formulation.
    M3Set,
    /// M3Set plus the interval incompatibility families.
    M4Set,
}

impl fmt::Display for ViLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViLevel::None => "none",
            ViLevel::M3Set => "m3",
            ViLevel::M4Set => "m4",
        };
        f.write_str(s)
    }
}

impl ViLevel {
    pub fn parse(s: &str) -> Option<ViLevel> {
        match s {
            "none" => Some(ViLevel::None),
            "m3" | "m3_set" => Some(ViLevel::M3Set),
            "m4" | "m4_set" => Some(ViLevel::M4Set),
            _ => None,
        }
    }
}

/// Append the selected families as hard rows. Validity: every integer
/// solution of the plain model satisfies them, so optima are unchanged.
pub fn add_valid_inequalities(
    problem: &mut AssembledProblem,
    graph: &Graph,
    instance: &Instance,
    level: ViLevel,
) {
    if level == ViLevel::None {
        return;
    }
    let mut rows: Vec<Row> = Vec::new();
    base_families(problem, graph, instance, &mut rows);
    if level == ViLevel::M4Set {
        interval_families(problem, graph, instance, &mut rows);
    }
    // drop exact duplicates (families overlap on small nodes)
    let mut seen = HashSet::new();
    for row in rows {
        if seen.insert(row.dedup_key()) {
            problem.model.add_row(row);
        }
    }
    problem.vi_level = level;
}

fn base_families(
    problem: &AssembledProblem,
    graph: &Graph,
    instance: &Instance,
    rows: &mut Vec<Row>,
) {
    let x = |l: &Leg| problem.x_vars[l.id.0];
    let trip_nodes: Vec<_> = graph.nodes.iter().filter(|n| n.trip.is_some()).collect();

    // one mode leaves v, every other mode must not enter it
    for v in &trip_nodes {
        for k in Mot::ALL {
            let mut coeffs: Vec<_> = graph.out_mot(v.id, k).map(|l| (x(l), 1.0)).collect();
            for g in Mot::ALL {
                if g != k {
                    coeffs.extend(graph.in_mot(v.id, g).map(|l| (x(l), 1.0)));
                }
            }
            rows.push(Row::eq(coeffs, 1.0));
        }
    }

    // every trip node is also entered exactly once
    for v in &trip_nodes {
        let coeffs: Vec<_> = Mot::ALL
            .iter()
            .flat_map(|&k| graph.in_mot(v.id, k))
            .map(|l| (x(l), 1.0))
            .collect();
        rows.push(Row::eq(coeffs, 1.0));
    }

    // cars entering trip starts at least cover the cars leaving depots
    {
        let mut coeffs: Vec<_> = trip_nodes
            .iter()
            .filter(|n| n.is_trip_start())
            .flat_map(|n| graph.in_mot(n.id, Mot::Car))
            .map(|l| (x(l), 1.0))
            .collect();
        for d in graph.depot_nodes() {
            coeffs.extend(graph.out_mot(d.id, Mot::Car).map(|l| (x(l), -1.0)));
        }
        if !coeffs.is_empty() {
            rows.push(Row::ge(coeffs, 0.0));
        }
    }

    // the shortest user route has four legs; leg counts per user are known
    for user in &instance.users {
        let legs: Vec<_> = graph.user_legs(user.id).map(|l| (x(l), 1.0)).collect();
        rows.push(Row::ge(legs.clone(), 4.0));
        let n_nodes = 2 + user
            .trip_ids
            .iter()
            .map(|&r| instance.trip(r).tasks.len() + 2)
            .sum::<usize>();
        rows.push(Row::eq(legs, n_nodes as f64 - 1.0));
    }

    // per trip, the nodes on it are entered at least |G_r| - 1 times
    for trip in &instance.trips {
        let coeffs: Vec<_> = graph
            .nodes
            .iter()
            .filter(|n| n.trip == Some(trip.id))
            .flat_map(|n| graph.in_legs(n.id))
            .map(|l| (x(l), 1.0))
            .collect();
        rows.push(Row::ge(coeffs, (trip.tasks.len() + 2) as f64 - 1.0));
    }

    // cycle rows: for node pairs linked in both directions, at most one
    // direction is used
    {
        let mut pairs: HashSet<(NodeId, NodeId)> = HashSet::new();
        for leg in &graph.legs {
            let (u, w) = (leg.from.min(leg.to), leg.from.max(leg.to));
            pairs.insert((u, w));
        }
        for (u, w) in pairs {
            let fwd: Vec<_> = graph.legs_between(u, w).collect();
            let back: Vec<_> = graph.legs_between(w, u).collect();
            if fwd.is_empty() || back.is_empty() {
                continue;
            }
            let coeffs: Vec<_> = fwd
                .into_iter()
                .chain(back)
                .map(|l| (x(l), 1.0))
                .collect();
            rows.push(Row::le(coeffs, 1.0));
        }
    }
}

/// Departure window through in-leg `g` at a node with service `s_v`:
/// earliest `o_g + t_g + s_v`, latest `e_g + t_g + s_v + h`.
fn incompatible(g: &Leg, l: &Leg, s_v: i64, h: i64) -> bool {
    o_forced(g, s_v) > l.e || l.o > e_allowed(g, s_v, h)
}

fn o_forced(g: &Leg, s_v: i64) -> i64 {
    g.o + g.time + s_v
}

fn e_allowed(g: &Leg, s_v: i64, h: i64) -> i64 {
    g.e + g.time + s_v + h
}

fn interval_families(
    problem: &AssembledProblem,
    graph: &Graph,
    instance: &Instance,
    rows: &mut Vec<Row>,
) {
    let x = |l: &Leg| problem.x_vars[l.id.0];
    let h = instance.max_wait;
    for v in graph.nodes.iter().filter(|n| n.trip.is_some()) {
        let s_v = v.service_time;
        let ins: Vec<&Leg> = graph.in_legs(v.id).collect();
        let outs: Vec<&Leg> = graph.out_legs(v.id).collect();

        // pairwise rows for nested-decreasing pairs (guarded)
        for &g in &ins {
            for &l in &outs {
                if l.o < g.o && l.e < g.e && incompatible(g, l, s_v, h) {
                    rows.push(Row::le(vec![(x(l), 1.0), (x(g), 1.0)], 1.0));
                }
            }
        }

        // aggregated per anchor leg, split by flow family so each sum is
        // itself at most one in any solution
        let mot_outs: Vec<&Leg> = outs.iter().copied().filter(|l| l.is_mot_flow()).collect();
        let user_outs: Vec<&Leg> = outs
            .iter()
            .copied()
            .filter(|l| l.is_user_flow() && !matches!(l.kind, LegKind::Trip))
            .collect();
        let mot_ins: Vec<&Leg> = ins.iter().copied().filter(|l| l.is_mot_flow()).collect();
        let user_ins: Vec<&Leg> = ins
            .iter()
            .copied()
            .filter(|l| l.is_user_flow() && !matches!(l.kind, LegKind::Trip))
            .collect();

        for &g in &ins {
            for family in [&mot_outs, &user_outs] {
                // nested family and the two incompatibility families
                for pred in [
                    |g: &Leg, l: &Leg, s_v: i64, h: i64| {
                        l.o < g.o && l.e < g.e && incompatible(g, l, s_v, h)
                    },
                    |g: &Leg, l: &Leg, s_v: i64, h: i64| l.o > e_allowed(g, s_v, h),
                    |g: &Leg, l: &Leg, s_v: i64, _h: i64| o_forced(g, s_v) > l.e,
                ] {
                    let members: Vec<_> = family
                        .iter()
                        .filter(|l| l.id != g.id && pred(g, l, s_v, h))
                        .map(|l| (x(l), 1.0))
                        .collect();
                    if !members.is_empty() {
                        let mut coeffs = vec![(x(g), 1.0)];
                        coeffs.extend(members);
                        rows.push(Row::le(coeffs, 1.0));
                    }
                }
            }
        }
        for &l in &outs {
            for family in [&mot_ins, &user_ins] {
                for pred in [
                    |g: &Leg, l: &Leg, s_v: i64, h: i64| {
                        l.o < g.o && l.e < g.e && incompatible(g, l, s_v, h)
                    },
                    |g: &Leg, l: &Leg, s_v: i64, h: i64| l.o > e_allowed(g, s_v, h),
                    |g: &Leg, l: &Leg, s_v: i64, _h: i64| o_forced(g, s_v) > l.e,
                ] {
                    let members: Vec<_> = family
                        .iter()
                        .filter(|g| g.id != l.id && pred(g, l, s_v, h))
                        .map(|g| (x(g), 1.0))
                        .collect();
                    if !members.is_empty() {
                        let mut coeffs = vec![(x(l), 1.0)];
                        coeffs.extend(members);
                        rows.push(Row::le(coeffs, 1.0));
                    }
                }
            }
        }
    }
}
