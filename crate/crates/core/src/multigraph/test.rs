use super::*;
use crate::instance::{generate_instance, tables, GeneratorParams, Mot, TripId};

use crate::testutil::{flat_periods, manual_instance};

#[test]
fn weighted_value_point_and_constant() {
    let periods = tables::default_periods();
    let values = vec![9; 7];
    assert_eq!(weighted_leg_value(&periods, &values, 100, 0), 9);
    assert_eq!(weighted_leg_value(&periods, &values, 0, 720), 9);
}

#[test]
fn weighted_value_half_half_rounds_up() {
    // two equal overlaps of values 12 and 9: 10.5 rounds up to 11
    let periods = tables::default_periods();
    let mut values = vec![0; 7];
    values[0] = 12;
    values[1] = 9;
    // period 0 is [0,90): depart 80, 20 minutes -> 10 in p0, 10 in p1
    assert_eq!(weighted_leg_value(&periods, &values, 80, 20), 11);
}

#[test]
fn weighted_value_one_third_two_thirds() {
    let periods = tables::default_periods();
    let mut values = vec![0; 7];
    values[0] = 3;
    values[1] = 6;
    // depart 85: 5 minutes in p0 (value 3), 10 in p1 (value 6) -> 5
    assert_eq!(weighted_leg_value(&periods, &values, 85, 15), 5);
}

#[test]
fn weighted_value_extends_last_period_past_horizon() {
    let periods = tables::default_periods();
    let mut values = vec![0; 7];
    values[6] = 4;
    assert_eq!(weighted_leg_value(&periods, &values, 710, 30), 4);
}

#[test]
fn m1_single_trip_leg_count() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let g = build_graph_m1(&instance);
    // 3 mots x 2 hops + 3 depot-out + 3 depot-in, no connections
    assert_eq!(g.legs.len(), 12);
    assert_eq!(g.legs.iter().filter(|l| l.kind == LegKind::CarConnect).count(), 0);
    for leg in g.legs.iter().filter(|l| l.is_artificial()) {
        assert_eq!((leg.cost, leg.pref), (0, 0));
    }
}

#[test]
fn m1_single_eligible_connection_pair() {
    let instance = manual_instance(
        1,
        &[
            (0, 0, 0, vec![(400, 300, 10, 60)]),
            (1, 0, 0, vec![(600, 100, 10, 500)]),
        ],
    );
    let g = build_graph_m1(&instance);
    let conns: Vec<_> = g.legs.iter().filter(|l| l.kind == LegKind::CarConnect).collect();
    assert_eq!(conns.len(), 1);
    let conn = conns[0];
    assert_eq!(g.node(conn.from).kind, NodeKind::TripEnd(TripId(0)));
    assert_eq!(g.node(conn.to).kind, NodeKind::TripStart(TripId(1)));
    assert_eq!(conn.mot, Some(Mot::Car));
}

#[test]
fn m2_leg_inside_one_period_takes_period_values() {
    // task close to the depot, mid period 3 (the neutral one), plus a
    // second variant shifted into rush hour (period 1)
    for (fixed_start, period_idx) in [(300i64, 3usize), (120, 1)] {
        let instance = manual_instance(1, &[(0, 0, 0, vec![(600, 800, 10, fixed_start)])]);
        let g2 = build_graph_m2(&instance);
        let g1 = build_graph_m1(&instance);
        let period = &instance.periods[period_idx];
        let user = &instance.users[0];
        for (l2, l1) in g2.legs.iter().zip(&g1.legs) {
            if l2.kind != LegKind::Trip {
                continue;
            }
            let mot = l2.mot.unwrap();
            let (expect_cost, expect_time) = instance.apply_beta(l1.cost, l1.time, mot, period);
            assert_eq!(l2.cost, expect_cost, "cost of {:?} {:?}", l2.kind, mot);
            assert_eq!(l2.time, expect_time);
            assert_eq!(l2.pref, instance.period_preference(user, mot, period));
        }
    }
}

#[test]
fn m3_single_task_trip_matches_m1_topology() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let m1 = build_graph_m1(&instance);
    let m3 = build_graph_m3(&instance);
    let trip_legs_m1: Vec<_> = m1
        .legs
        .iter()
        .filter(|l| l.kind == LegKind::Trip)
        .map(|l| (l.from, l.to, l.mot, l.cost, l.pref))
        .collect();
    let mut trip_legs_m3: Vec<_> = m3
        .legs
        .iter()
        .filter(|l| l.kind == LegKind::Trip)
        .map(|l| (l.from, l.to, l.mot, l.cost, l.pref))
        .collect();
    trip_legs_m3.sort_by_key(|x| (x.0, x.1, x.2));
    let mut sorted_m1 = trip_legs_m1.clone();
    sorted_m1.sort_by_key(|x| (x.0, x.1, x.2));
    assert_eq!(sorted_m1, trip_legs_m3);
}

#[test]
fn m3_two_trip_user_structure_legs() {
    let instance = manual_instance(
        1,
        &[
            (0, 0, 0, vec![(400, 300, 10, 60)]),
            (0, 0, 0, vec![(600, 100, 10, 300)]),
        ],
    );
    let g = build_graph_m3(&instance);
    let kinds = |k: LegKind| g.legs.iter().filter(|l| l.kind == k).count();
    assert_eq!(kinds(LegKind::UserSource), 2);
    assert_eq!(kinds(LegKind::UserSink), 2);
    assert_eq!(kinds(LegKind::UserConnect), 2);
    // both car connection directions are co-located here, but only the
    // forward one is eligible in m1
    assert_eq!(kinds(LegKind::CarConnect), 2);
}

#[test]
fn every_m1_leg_has_m3_counterpart_with_equal_weights() {
    let instance = generate_instance(
        &GeneratorParams {
            n_users: 4,
            trips_per_user: 1..=2,
            tasks_per_trip: 1..=3,
            n_depots: 2,
            area: 6_000,
        },
        5,
    )
    .unwrap();
    let m1 = build_graph_m1(&instance);
    let m3 = build_graph_m3(&instance);
    for leg in &m1.legs {
        let found = m3.legs.iter().any(|l| {
            l.kind == leg.kind
                && l.from == leg.from
                && l.to == leg.to
                && l.mot == leg.mot
                && l.cost == leg.cost
                && l.pref == leg.pref
        });
        assert!(found, "m1 leg {:?} missing in m3", leg);
    }
}

#[test]
fn m4_expansion_counts_and_tiling() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let g = build_graph_m4(&instance);
    assert_eq!(g.legs.len(), g.base_count * 48);
    for base in 0..g.base_count {
        let dups: Vec<_> = g.duplicates_of(BaseLegId(base)).collect();
        assert_eq!(dups.len(), 48);
        let mut expect_o = 0;
        let mut total = 0;
        for d in &dups {
            assert_eq!(d.o, expect_o);
            assert_eq!(d.e, d.o + 15);
            total += d.e - d.o;
            expect_o = d.e;
        }
        assert_eq!(total, 720);
    }
}

#[test]
fn m4_degenerate_alpha_equals_m3_topology() {
    let mut instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    instance.alpha = 720;
    let m3 = build_graph_m3(&instance);
    let m4 = build_graph_m4(&instance);
    assert_eq!(m4.legs.len(), m3.legs.len());
    for leg in &m4.legs {
        assert_eq!((leg.o, leg.e), (0, 720));
    }
}

#[test]
fn reduce_merges_uniform_duplicates_to_single_leg() {
    let mut instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    instance.periods = flat_periods();
    let g = build_graph_m4(&instance);
    let r = reduce_graph(&g);
    // with flat periods every duplicate family collapses
    assert_eq!(r.legs.len(), r.base_count);
    for leg in &r.legs {
        assert_eq!((leg.o, leg.e), (0, 720));
    }
}

#[test]
fn reduce_splits_at_single_differing_period() {
    let mut instance = manual_instance(1, &[(0, 0, 0, vec![(1000, 0, 10, 100)])]);
    let mut periods = flat_periods();
    periods[2].pref_delta = [2, 2, 2]; // [150, 240) differs
    instance.periods = periods;
    let g = build_graph_m4(&instance);
    let r = reduce_graph(&g);
    for base in 0..r.base_count {
        let dups: Vec<_> = r.duplicates_of(BaseLegId(base)).collect();
        if dups[0].kind != LegKind::Trip {
            assert_eq!(dups.len(), 1);
            continue;
        }
        // runs: before period 2, inside, after (short legs do not straddle)
        assert!(dups.len() <= 3, "got {} runs", dups.len());
        assert_eq!(dups.iter().map(|d| d.e - d.o).sum::<i64>(), 720);
    }
}

#[test]
fn index_consistency() {
    let instance = generate_instance(&GeneratorParams::default(), 9).unwrap();
    for g in [
        build_graph_m1(&instance),
        build_graph_m3(&instance),
        build_graph_m4(&instance),
    ] {
        let out_total: usize = g.nodes.iter().map(|n| g.out_legs(n.id).count()).sum();
        let in_total: usize = g.nodes.iter().map(|n| g.in_legs(n.id).count()).sum();
        assert_eq!(out_total, g.legs.len());
        assert_eq!(in_total, g.legs.len());
    }
}

#[test]
fn twenty_user_scale_sanity() {
    let instance = generate_instance(
        &GeneratorParams {
            n_users: 20,
            trips_per_user: 1..=2,
            tasks_per_trip: 1..=3,
            n_depots: 2,
            area: 6_000,
        },
        0,
    )
    .unwrap();
    let m1 = build_graph_m1(&instance);
    assert!(
        (100..2000).contains(&m1.legs.len()),
        "m1 legs: {}",
        m1.legs.len()
    );
    let m3 = build_graph_m3(&instance);
    let ratio = m3.legs.len() as f64 / m1.legs.len() as f64;
    assert!((1.2..8.0).contains(&ratio), "m3/m1 ratio: {ratio}");
    let m4 = build_graph_m4(&instance);
    assert_eq!(m4.legs.len(), m3.legs.len() * 48);
    let reduced = reduce_graph(&m4);
    let shrink = m4.legs.len() as f64 / reduced.legs.len() as f64;
    assert!(shrink >= 2.0, "reduction ratio: {shrink}");
}

#[test]
fn legs_csv_dump_has_documented_columns() {
    let instance = manual_instance(1, &[(0, 0, 0, vec![(500, 500, 10, 100)])]);
    let g = build_graph_m1(&instance);
    let mut buf = Vec::new();
    g.write_legs_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,u,y,z,m,c,theta,t,o,e"));
    assert_eq!(lines.count(), g.legs.len());
}
