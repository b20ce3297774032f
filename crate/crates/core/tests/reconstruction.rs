use polarchan::equiv::normalized_diff_auto;
use polarchan::matkit::{frob_norm, hermitian_eig, random_density, random_unitary, real_inner};
use polarchan::tomo::{
    expected_budget, probe_states, reconstruct, state_tomography, ChannelOracle, Observable,
    RECONSTRUCTION_SOLVER,
};
use proptest::prelude::*;

#[test]
fn recovered_channel_matches_on_fresh_states() {
    for n in [2usize, 4, 8] {
        for seed in 0..20u64 {
            let hidden = random_unitary(n, 50 + seed);
            let oracle = ChannelOracle::new(hidden.clone()).unwrap();
            let report = reconstruct(
                &oracle,
                &random_density(n, 60 + seed),
                &RECONSTRUCTION_SOLVER,
            )
            .unwrap();
            assert!(report.verified());
            for k in 0..3 {
                let rho = random_density(n, 9_000 + k);
                let err = frob_norm(
                    &(&rho.conjugate_by(&hidden) - &rho.conjugate_by(&report.u_recovered)),
                );
                assert!(err < 1e-8, "n {n} seed {seed}: {err}");
            }
            assert!(normalized_diff_auto(&report.u_recovered, &hidden).unwrap() < 1e-8);
        }
    }
}

#[test]
fn probe_measurement_agrees_with_tomography() {
    let n = 5;
    let oracle = ChannelOracle::new(random_unitary(n, 3)).unwrap();
    let v = hermitian_eig(&random_density(n, 4)).unwrap().eigenvectors;
    let (plus, minus) = probe_states(&v, 0, 2, 1).unwrap();
    let w: Vec<_> = v.column(3);
    let obs = Observable::projector(&w);
    for probe in [plus, minus] {
        let direct = oracle.expectation(&probe, &obs);
        let image = state_tomography(&oracle, &probe);
        let via_tomography = real_inner(&obs.matrix, &image).unwrap();
        assert!((direct - via_tomography).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn budget_never_exceeds_ceiling(seed in 0u64..1_000, n in 1usize..7) {
        let oracle = ChannelOracle::new(random_unitary(n, seed)).unwrap();
        let report = reconstruct(&oracle, &random_density(n, seed + 1), &RECONSTRUCTION_SOLVER).unwrap();
        let n64 = n as u64;
        prop_assert_eq!(report.budget_used, expected_budget(n));
        prop_assert_eq!(oracle.queries(), report.budget_used);
        prop_assert!(report.budget_used <= n64 * n64 + 3 * n64);
    }

    #[test]
    fn tomography_is_exact(seed in 0u64..1_000, n in 1usize..9) {
        let u = random_unitary(n, seed);
        let oracle = ChannelOracle::new(u.clone()).unwrap();
        let rho = random_density(n, seed + 5);
        let est = state_tomography(&oracle, &rho);
        prop_assert!(est.max_abs_diff(&rho.conjugate_by(&u)) < 1e-12);
        prop_assert_eq!(oracle.queries(), (n * n + n) as u64);
    }
}
