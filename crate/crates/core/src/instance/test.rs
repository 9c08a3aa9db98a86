use super::tables::{default_periods, BETA_TENTHS, PREFERENCE_SCORES, PREF_DELTAS};
use super::*;
use proptest::prelude::*;

fn tiny_instance() -> Instance {
    generate_instance(
        &GeneratorParams {
            n_users: 1,
            trips_per_user: 1..=1,
            tasks_per_trip: 1..=1,
            n_depots: 1,
            area: 3_000,
        },
        7,
    )
    .unwrap()
}

fn user_with(access: MotAccess) -> User {
    User {
        id: UserId(0),
        mot_access: access,
        trip_ids: vec![TripId(0)],
    }
}

#[test]
fn forced_counts_for_minimal_params() {
    let instance = tiny_instance();
    assert_eq!(instance.users.len(), 1);
    assert_eq!(instance.trips.len(), 1);
    assert_eq!(instance.trips[0].tasks.len(), 1);
    assert_eq!(instance.depots.len(), 1);
    assert_eq!(instance.validate(), Ok(()));
}

#[test]
fn generator_is_deterministic() {
    let params = GeneratorParams {
        n_users: 4,
        trips_per_user: 1..=2,
        tasks_per_trip: 1..=3,
        n_depots: 2,
        area: 6_000,
    };
    let a = generate_instance(&params, 11).unwrap();
    let b = generate_instance(&params, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(save_instance(&a), save_instance(&b));
    let c = generate_instance(&params, 12).unwrap();
    assert_ne!(save_instance(&a), save_instance(&c));
}

#[test]
fn base_preference_matches_score_table() {
    let walk_only = user_with(MotAccess {
        walk: true,
        ..Default::default()
    });
    let instance = tiny_instance();
    assert_eq!(instance.base_preference(&walk_only, Mot::Car), 7);

    let car_public = user_with(MotAccess {
        car: true,
        public: true,
        ..Default::default()
    });
    assert_eq!(instance.base_preference(&car_public, Mot::Car), 4);

    let none = user_with(MotAccess::default());
    assert_eq!(instance.base_preference(&none, Mot::Bike), 5);
}

#[test]
fn unknown_access_pattern_falls_back_to_zero_row() {
    // not a listed pattern
    let odd = user_with(MotAccess {
        walk: true,
        bike: false,
        car: false,
        ecar: true,
        public: true,
    });
    let instance = tiny_instance();
    assert_eq!(instance.base_preference(&odd, Mot::Public), 4);
    assert_eq!(instance.base_preference(&odd, Mot::Bike), 5);
    assert_eq!(instance.base_preference(&odd, Mot::Car), 5);
}

#[test]
fn period_preference_adds_delta_and_clamps() {
    let instance = tiny_instance();
    let car_user = user_with(MotAccess {
        walk: true,
        ..Default::default()
    });
    // base car score 7, rush hour delta +3, clamp at 10
    assert_eq!(
        instance.period_preference(&car_user, Mot::Car, &instance.periods[1]),
        10
    );
    // base public 4, delta 0 in the neutral period
    assert_eq!(
        instance.period_preference(&car_user, Mot::Public, &instance.periods[3]),
        4
    );
    // lower clamp: bike delta in period 4 is -3
    let bike_user = user_with(MotAccess {
        bike: true,
        car: true,
        public: true,
        ..Default::default()
    });
    let base = instance.base_preference(&bike_user, Mot::Bike);
    assert_eq!(base, 4);
    assert_eq!(
        instance.period_preference(&bike_user, Mot::Bike, &instance.periods[4]),
        1
    );
    // lower clamp with a synthetic delta pushing below 1
    let mut harsh = instance.periods[4].clone();
    harsh.pref_delta = [-9, -9, -9];
    assert_eq!(instance.period_preference(&bike_user, Mot::Bike, &harsh), 1);
}

#[test]
fn travel_metrics_zero_distance() {
    let instance = tiny_instance();
    let p = Point::new(100, 100);
    assert_eq!(instance.travel_metrics(p, p, Mot::Car), (0, 0, 0));
}

#[test]
fn travel_metrics_exact_division() {
    let mut instance = tiny_instance();
    instance.mots[0].speed = 500;
    let (d, t, _) = instance.travel_metrics(Point::new(0, 0), Point::new(3000, 0), Mot::Car);
    assert_eq!((d, t), (3000, 6));
}

#[test]
fn travel_cost_formula() {
    // rates 1 milli/m distance, 2000 milli/min time, 1 milli/m emissions:
    // (1000*1 + 4*2000 + 1000*1) / 1000 = 10
    let mut instance = tiny_instance();
    instance.mots[0] = MotParams {
        mot: Mot::Car,
        speed: 250,
        distance_cost_rate: 1,
        time_cost_rate: 2000,
        emission_cost_rate: 1,
    };
    let (d, t, c) = instance.travel_metrics(Point::new(0, 0), Point::new(1000, 0), Mot::Car);
    assert_eq!((d, t), (1000, 4));
    assert_eq!(c, 10);
}

#[test]
fn apply_beta_examples() {
    let instance = tiny_instance();
    // car rush hour: beta 1.4, cost 5 -> 7
    let rush = &instance.periods[1];
    assert_eq!(instance.apply_beta(5, 0, Mot::Car, rush), (7, 0));
    // identity factor leaves values unchanged
    let neutral = &instance.periods[3];
    assert_eq!(instance.apply_beta(5, 12, Mot::Car, neutral), (5, 12));
    // public early rush: beta 0.8, time 10 -> 8
    assert_eq!(instance.apply_beta(0, 10, Mot::Public, rush), (0, 8));
}

#[test]
fn preference_table_is_total_and_in_range() {
    let instance = tiny_instance();
    for bits in 0..32u32 {
        let access = MotAccess {
            walk: bits & 1 != 0,
            bike: bits & 2 != 0,
            car: bits & 4 != 0,
            ecar: bits & 8 != 0,
            public: bits & 16 != 0,
        };
        let user = user_with(access);
        for mot in Mot::ALL {
            let base = instance.base_preference(&user, mot);
            assert!((1..=10).contains(&base));
            for period in &instance.periods {
                let p = instance.period_preference(&user, mot, period);
                assert!((1..=10).contains(&p), "clamping failed: {p}");
            }
        }
    }
}

/// Transcribed appendix rows, asserted verbatim: 25 score rows, 7 delta rows,
/// 7 beta rows.
#[test]
fn score_and_beta_tables_fidelity() {
    let expected_scores: [([u8; 5], [i64; 3]); 25] = [
        ([1, 0, 0, 0, 0], [4, 6, 7]),
        ([0, 1, 0, 0, 0], [6, 4, 7]),
        ([0, 0, 0, 0, 1], [4, 6, 7]),
        ([0, 0, 1, 0, 0], [6, 7, 4]),
        ([0, 0, 0, 1, 0], [6, 7, 5]),
        ([1, 1, 0, 0, 0], [4, 4, 7]),
        ([0, 1, 0, 0, 1], [4, 4, 7]),
        ([0, 0, 1, 0, 1], [4, 5, 4]),
        ([0, 0, 1, 1, 0], [7, 7, 4]),
        ([1, 0, 0, 0, 1], [4, 6, 7]),
        ([0, 1, 1, 0, 0], [6, 4, 4]),
        ([0, 0, 0, 1, 1], [4, 7, 5]),
        ([1, 0, 1, 0, 0], [4, 5, 4]),
        ([0, 1, 0, 1, 0], [6, 5, 6]),
        ([1, 1, 0, 0, 1], [4, 4, 7]),
        ([1, 0, 0, 1, 0], [4, 7, 5]),
        ([0, 1, 1, 0, 1], [4, 4, 4]),
        ([0, 0, 1, 1, 1], [7, 7, 4]),
        ([1, 1, 1, 0, 1], [4, 4, 4]),
        ([0, 1, 1, 1, 1], [7, 4, 4]),
        ([1, 0, 1, 1, 1], [4, 7, 4]),
        ([1, 1, 1, 1, 0], [4, 4, 4]),
        ([1, 1, 0, 1, 1], [4, 4, 7]),
        ([1, 1, 1, 1, 1], [4, 4, 4]),
        ([0, 0, 0, 0, 0], [4, 5, 5]),
    ];
    assert_eq!(PREFERENCE_SCORES.len(), expected_scores.len());
    for (i, (bits, scores)) in expected_scores.iter().enumerate() {
        let want_bits: [bool; 5] = bits.map(|b| b != 0);
        assert_eq!(PREFERENCE_SCORES[i].0, want_bits, "row {i} pattern");
        assert_eq!(PREFERENCE_SCORES[i].1, *scores, "row {i} scores");
    }

    // deltas, columns (walk/public, bike, car) as printed
    let expected_deltas: [[i64; 3]; 7] = [
        [-3, -2, 1],
        [2, -2, 3],
        [-2, -1, -3],
        [0, 0, 0],
        [-2, -3, 1],
        [2, -2, 3],
        [-1, 2, -2],
    ];
    for (t, row) in expected_deltas.iter().enumerate() {
        assert_eq!(PREF_DELTAS[t][Mot::Public.index()], row[0], "delta t{t} public");
        assert_eq!(PREF_DELTAS[t][Mot::Bike.index()], row[1], "delta t{t} bike");
        assert_eq!(PREF_DELTAS[t][Mot::Car.index()], row[2], "delta t{t} car");
    }

    // betas, columns (car, walk/public, bike) in tenths as printed
    let expected_betas: [[i64; 3]; 7] = [
        [12, 11, 10],
        [14, 8, 11],
        [13, 9, 10],
        [10, 10, 10],
        [13, 10, 10],
        [14, 9, 11],
        [11, 13, 10],
    ];
    for (t, row) in expected_betas.iter().enumerate() {
        assert_eq!(BETA_TENTHS[t][Mot::Car.index()], row[0], "beta t{t} car");
        assert_eq!(BETA_TENTHS[t][Mot::Public.index()], row[1], "beta t{t} public");
        assert_eq!(BETA_TENTHS[t][Mot::Bike.index()], row[2], "beta t{t} bike");
    }

    let periods = default_periods();
    assert_eq!(periods.len(), 7);
    assert_eq!(periods[0].start, 0);
    assert_eq!(periods[6].end, 720);
}

#[test]
fn save_load_round_trip() {
    let params = GeneratorParams {
        n_users: 3,
        trips_per_user: 1..=2,
        tasks_per_trip: 1..=3,
        n_depots: 2,
        area: 6_000,
    };
    let instance = generate_instance(&params, 21).unwrap();
    let text = save_instance(&instance);
    let loaded = load_instance(&text).unwrap();
    assert_eq!(instance, loaded);
}

#[test]
fn load_rejects_period_overlap() {
    let instance = tiny_instance();
    let mut text = save_instance(&instance);
    // overlap period 1 into period 0
    text = text.replace("1,90,150,", "1,80,150,");
    let err = load_instance(&text).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("gap or overlap"), "got: {msg}");
}

#[test]
fn load_rejects_missing_car_end() {
    let instance = tiny_instance();
    let text = save_instance(&instance);
    // drop the final field of the first depot line
    let mut out = String::new();
    let mut in_depots = false;
    for line in text.lines() {
        if line.starts_with('[') {
            in_depots = line == "[depots]";
            out.push_str(line);
        } else if in_depots && !line.is_empty() {
            let upto = line.rfind(',').unwrap();
            out.push_str(&line[..upto]);
            in_depots = false; // only clip the first depot
        } else {
            out.push_str(line);
        }
        out.push('\n');
    }
    let err = load_instance(&out).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("car_end"), "diagnostic should name the field: {msg}");
}

#[test]
fn load_rejects_duplicate_task_ids() {
    let instance = generate_instance(
        &GeneratorParams {
            n_users: 1,
            trips_per_user: 1..=1,
            tasks_per_trip: 2..=2,
            n_depots: 1,
            area: 3_000,
        },
        3,
    )
    .unwrap();
    let text = save_instance(&instance);
    let text = text.replace("\n1,0,", "\n0,0,");
    assert!(matches!(
        load_instance(&text),
        Err(ParseError::Invalid(InstanceError::DuplicateTask(_)))
    ));
}

proptest! {
    #[test]
    fn round_trip_random_instances(seed in 0u64..500) {
        let params = GeneratorParams {
            n_users: 1 + (seed % 3) as usize,
            trips_per_user: 1..=2,
            tasks_per_trip: 1..=2,
            n_depots: 1 + (seed % 2) as usize,
            area: 4_000,
        };
        let instance = generate_instance(&params, seed).unwrap();
        prop_assert_eq!(load_instance(&save_instance(&instance)).unwrap(), instance);
    }

    #[test]
    fn ceil_sqrt_is_exact(v in 0i64..4_000_000) {
        let s = Point::new(0, 0).distance(Point::new(v, 0));
        prop_assert_eq!(s, v);
        let d = Point::new(0, 0).distance(Point::new(3, 4));
        prop_assert_eq!(d, 5);
    }
}
