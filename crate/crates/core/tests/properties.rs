mod common;
mod props;

macro_rules! suite_tests {
    ($($name:ident => $suite:path),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                let cases = $suite().unwrap_or_else(|e| panic!("{e}"));
                assert!(cases >= 100);
            }
        )*
    };
}

suite_tests! {
    profit_is_revenue_minus_cost => props::profit_identity,
    travel_time_components_add_up => props::time_decomposition,
    timeline_is_causal_and_conserves_load => props::timeline_causality,
    decoded_schemes_are_structurally_valid => props::decode_structure,
    wrap_bounds_is_idempotent => props::wrap_idempotence,
    de_refinement_never_decreases_fitness => props::de_non_decrease,
    ewm_weights_are_scale_invariant => props::ewm_invariance,
    tent_map_is_uniform => props::tent_uniformity,
    quantile_inverts_cdf => props::quantile_round_trip,
    bpr_is_monotone => props::bpr_monotone,
}

#[test]
fn every_suite_is_wired() {
    assert_eq!(props::SUITES.len(), 10);
}

#[test]
fn tent_map_passes_fixed_seed_chi_square() {
    let chi2 = props::tent_chi2(100_000, 2024);
    assert!(chi2 < props::chi2_critical(0.01), "chi2 {chi2}");
}
