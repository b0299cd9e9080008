use ausolab::bounds::{bound_sheet, check_dehn_sommerville, check_unimodal, maxmin_bound};
use ausolab::orientations::{
    auso_to_string, dual_stacked_linear_auso, klee_minty_auso, random_linear_auso_cube, read_auso, validate,
};
use ausolab::polytopes::{build_dual_stacked, graph_to_string, read_graph};
use ausolab::walks::{expected_visits_exact, greatest_decrease_walk, monte_carlo, DpMode, PivotRule};
use ausolab::RngStream;
use num_traits::ToPrimitive;
use proptest::prelude::*;

#[test]
fn dual_stacked_survives_file_round_trip() {
    let (graph, geometry) = build_dual_stacked(4, 7, 3).unwrap();
    let (auso, _) = dual_stacked_linear_auso(&graph, &geometry, RngStream::new(3, 1)).unwrap();
    let graph_back = read_graph(graph_to_string(&graph).as_bytes()).unwrap();
    assert_eq!(graph_back, graph);
    let auso_back = read_auso(auso_to_string(&auso).as_bytes(), Some(&graph_back)).unwrap();
    assert_eq!(auso_back.ranks(), auso.ranks());
    assert!(validate(&auso_back).unwrap().pass());
    let h = auso_back.h_vector();
    assert!(check_dehn_sommerville(&h) && check_unimodal(&h));
}

#[test]
fn klee_minty_sheet_and_monte_carlo_agree() {
    let (km, _) = klee_minty_auso(6).unwrap();
    let sheet = bound_sheet(&km, "klee-minty", Some(DpMode::Exact), &[(2, 1), (2, 2)]).unwrap();
    assert!(sheet.violations().is_empty());
    let exact = sheet.exact_expected.unwrap().to_f64().unwrap();
    let stats = monte_carlo(&km, km.source(), PivotRule::RandomEdge, 50_000, 3).unwrap();
    assert!((stats.mean - exact).abs() <= 4.0 * stats.stderr);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_cube_instances_obey_the_chain(d in 2usize..8, seed in any::<u64>()) {
        let auso = random_linear_auso_cube(d, RngStream::new(seed, 0)).unwrap();
        prop_assert!(validate(&auso).unwrap().pass());
        let exact = expected_visits_exact(&auso).unwrap().swap_remove(auso.source());
        let maxmin = maxmin_bound(&auso.h_vector());
        prop_assert!(exact <= maxmin);
        let gd = greatest_decrease_walk(&auso, auso.source());
        prop_assert!((gd.len() as u64) <= auso.vertex_count() as u64);
    }

    #[test]
    fn dual_stacked_instances_validate(d in 2usize..5, cuts in 0usize..12, seed in any::<u64>()) {
        let (graph, geometry) = build_dual_stacked(d, cuts, seed).unwrap();
        prop_assert_eq!(graph.vertex_count(), d + 1 + cuts * (d - 1));
        let (auso, values) = dual_stacked_linear_auso(&graph, &geometry, RngStream::new(seed, 1)).unwrap();
        prop_assert!(values.consistent_with(&auso));
        prop_assert!(validate(&auso).unwrap().pass());
    }
}
