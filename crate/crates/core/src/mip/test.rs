use super::*;
use proptest::prelude::*;

fn forced_cover_model() -> Model {
    let mut m = Model::new();
    let x1 = m.add_binary("x1", 1.0);
    let x2 = m.add_binary("x2", 1.0);
    m.add_row(Row::ge(vec![(x1, 1.0), (x2, 1.0)], 1.0));
    m
}

#[test]
fn forced_cover_has_objective_one() {
    let m = forced_cover_model();
    let out = solve(&m, None, None, &SolveOptions::default());
    assert_eq!(out.status, MipStatus::Optimal);
    assert_eq!(out.objective, Some(1.0));
}

#[test]
fn callback_cutting_everything_gives_infeasible() {
    let m = forced_cover_model();
    let mut cb = |values: &[f64]| {
        // no-good on the current binary assignment
        let mut coeffs = Vec::new();
        let mut ones = 0;
        for (j, &x) in values.iter().enumerate() {
            if x.round() == 1.0 {
                coeffs.push((VarId(j), 1.0));
                ones += 1;
            } else {
                coeffs.push((VarId(j), -1.0));
            }
        }
        vec![Row::le(coeffs, ones as f64 - 1.0)]
    };
    let out = solve(&m, Some(&mut cb), None, &SolveOptions::default());
    assert_eq!(out.status, MipStatus::Infeasible);
    assert!(out.cuts.len() >= 3, "every integer point must be cut off");
}

#[test]
fn equality_rows_are_respected() {
    let mut m = Model::new();
    let x1 = m.add_binary("x1", 1.0);
    let x2 = m.add_binary("x2", 0.0);
    m.add_row(Row::eq(vec![(x1, 1.0), (x2, 1.0)], 1.0));
    let out = solve(&m, None, None, &SolveOptions::default());
    assert_eq!(out.objective, Some(0.0));
    let vals = out.values.unwrap();
    assert_eq!(vals[0].round(), 0.0);
    assert_eq!(vals[1].round(), 1.0);
}

#[test]
fn continuous_lp_optimum() {
    let mut m = Model::new();
    let a = m.add_continuous("a", 2.0, 0.0, 20.0);
    let b = m.add_continuous("b", 3.0, 0.0, 20.0);
    m.add_row(Row::ge(vec![(a, 1.0), (b, 1.0)], 10.0));
    m.add_row(Row::le(vec![(a, 1.0)], 6.0));
    let out = solve(&m, None, None, &SolveOptions::default());
    assert_eq!(out.status, MipStatus::Optimal);
    assert!((out.objective.unwrap() - 24.0).abs() < 1e-6);
}

#[test]
fn lp_feasibility_examples() {
    // empty system
    let mut m = Model::new();
    m.add_continuous("t1", 0.0, 0.0, 100.0);
    assert!(lp_feasible(&m));
    // contradictory bounds via rows
    let mut m = Model::new();
    let t1 = m.add_continuous("t1", 0.0, 0.0, 100.0);
    m.add_row(Row::ge(vec![(t1, 1.0)], 5.0));
    m.add_row(Row::le(vec![(t1, 1.0)], 3.0));
    assert!(!lp_feasible(&m));
}

#[test]
fn infeasible_binary_model() {
    let mut m = Model::new();
    let x1 = m.add_binary("x1", 1.0);
    m.add_row(Row::ge(vec![(x1, 1.0)], 2.0));
    let out = solve(&m, None, None, &SolveOptions::default());
    assert_eq!(out.status, MipStatus::Infeasible);
}

#[test]
fn warm_start_feasible_seeds_incumbent() {
    let m = forced_cover_model();
    let warm = vec![1.0, 1.0];
    let out = solve(&m, None, Some(&warm), &SolveOptions::default());
    assert_eq!(out.objective, Some(1.0));
    // infeasible warm start must not corrupt the result
    let bad = vec![0.0, 0.0];
    let out = solve(&m, None, Some(&bad), &SolveOptions::default());
    assert_eq!(out.objective, Some(1.0));
}

#[test]
fn node_limit_reports_limit_status() {
    let mut m = Model::new();
    let vars: Vec<VarId> = (0..8).map(|i| m.add_binary(format!("x{i}"), 1.0)).collect();
    for w in vars.windows(2) {
        m.add_row(Row::ge(vec![(w[0], 1.0), (w[1], 1.0)], 1.0));
    }
    let out = solve(
        &m,
        None,
        None,
        &SolveOptions {
            node_limit: Some(0),
            ..Default::default()
        },
    );
    assert_eq!(out.status, MipStatus::Limit);
    assert!(out.best_bound <= 4.0);
}

#[test]
fn lp_dump_contains_sections() {
    let m = forced_cover_model();
    let mut buf = Vec::new();
    m.write_lp(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    for section in ["Minimize", "Subject To", "Bounds", "Binaries", "End"] {
        assert!(text.contains(section), "missing {section}: {text}");
    }
}

/// Exhaustive minimum over binary assignments, or None when infeasible.
fn enumerate_optimum(model: &Model) -> Option<i64> {
    let n = model.n_vars();
    let mut best: Option<i64> = None;
    for mask in 0u32..(1 << n) {
        let values: Vec<f64> = (0..n).map(|j| ((mask >> j) & 1) as f64).collect();
        if model.is_integer_feasible(&values) {
            let obj = model.integral_objective(&values);
            best = Some(best.map_or(obj, |b: i64| b.min(obj)));
        }
    }
    best
}

fn random_model(spec: &(u64, usize, usize)) -> Model {
    use rand::{Rng, SeedableRng};
    let (seed, n, m_rows) = *spec;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut m = Model::new();
    for j in 0..n {
        let c: i64 = rng.gen_range(-5..=5);
        m.add_binary(format!("x{j}"), c as f64);
    }
    for _ in 0..m_rows {
        let coeffs: Vec<(VarId, f64)> = (0..n)
            .filter_map(|j| {
                let c: i64 = rng.gen_range(-3..=3);
                (c != 0).then_some((VarId(j), c as f64))
            })
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        let rhs = rng.gen_range(-4..=8) as f64;
        let sense = match rng.gen_range(0..3) {
            0 => Sense::Le,
            1 => Sense::Ge,
            _ => Sense::Eq,
        };
        m.add_row(Row::new(coeffs, sense, rhs));
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Without a callback the solver is a correct pure MIP solver.
    #[test]
    fn matches_exhaustive_enumeration(seed in 0u64..10_000, n in 2usize..10, rows in 1usize..7) {
        let model = random_model(&(seed, n, rows));
        let expect = enumerate_optimum(&model);
        let out = solve(&model, None, None, &SolveOptions::default());
        match expect {
            None => prop_assert_eq!(out.status, MipStatus::Infeasible),
            Some(opt) => {
                prop_assert_eq!(out.status, MipStatus::Optimal);
                prop_assert_eq!(out.objective, Some(opt as f64));
                let vals = out.values.unwrap();
                prop_assert!(model.is_integer_feasible(&vals));
            }
        }
    }

    /// Branch order must not change the returned objective value.
    #[test]
    fn branch_rule_independent(seed in 0u64..5_000, n in 2usize..9, rows in 1usize..6) {
        let model = random_model(&(seed, n, rows));
        let a = solve(&model, None, None, &SolveOptions {
            branch_rule: BranchRule::MostFractional,
            ..Default::default()
        });
        let b = solve(&model, None, None, &SolveOptions {
            branch_rule: BranchRule::FirstFractional,
            ..Default::default()
        });
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.objective, b.objective);
    }

    /// Integral data yields integral optima.
    #[test]
    fn integral_objective_property(seed in 0u64..3_000) {
        let model = random_model(&(seed, 6, 4));
        prop_assert!(model.objective_is_integral());
        let out = solve(&model, None, None, &SolveOptions::default());
        if let Some(obj) = out.objective {
            prop_assert_eq!(obj.fract(), 0.0);
        }
    }
}
