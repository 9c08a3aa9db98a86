// quick scratch test
#[test]
fn seed18_oracle() {
    use mmcp_core::biobjective::brute_force_frontier;
    use mmcp_core::instance::{generate_instance, GeneratorParams};
    use mmcp_core::models::Formulation;
    let instance = generate_instance(
        &GeneratorParams {
            n_users: 2, trips_per_user: 1..=1, tasks_per_trip: 1..=1,
            n_depots: 2, area: 4_000,
        },
        18,
    ).unwrap();
    let oracle = brute_force_frontier(&instance, Formulation::M4).unwrap();
    println!("oracle: {:?}", oracle.objective_pairs());
}
