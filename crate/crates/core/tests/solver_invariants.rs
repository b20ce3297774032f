use num_complex::Complex64;
use polarchan::equiv::{global_phase_align, is_equiv_under, normalized_diff, Pivot};
use polarchan::harness::example1_instance;
use polarchan::matkit::{frob_norm, hermitian_eig, random_density, random_unitary, ComplexMatrix};
use polarchan::search::{
    fixed_point_defect, solve, solve_with_observer, ChannelInstance, SolverConfig, Status,
};
use proptest::prelude::*;

fn quick() -> SolverConfig {
    SolverConfig {
        max_iters: 300,
        ..SolverConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_iterate_is_unitary(seed in 0u64..1_000, n in 1usize..9) {
        let ex = example1_instance(n, seed, 1 + (seed as usize % 3)).unwrap();
        let mut worst = 0.0f64;
        solve_with_observer(&ex.instance, &quick(), |_, u| {
            worst = worst.max(u.unitary_defect());
        })
        .unwrap();
        prop_assert!(worst < 1e-12, "unitary defect {worst}");
    }

    #[test]
    fn objective_never_increases_on_inconsistent_pairs(seed in 0u64..1_000, n in 2usize..7) {
        let instance = ChannelInstance::single(random_density(n, seed), random_density(n, seed + 1)).unwrap();
        let r = solve(&instance, &quick()).unwrap();
        prop_assert!(r.trace.is_non_increasing(1e-12));
    }

    #[test]
    fn observer_sees_the_recorded_trace(seed in 0u64..1_000) {
        let ex = example1_instance(4, seed, 2).unwrap();
        let mut seen = Vec::new();
        let r = solve_with_observer(&ex.instance, &quick(), |rec, _| seen.push(*rec)).unwrap();
        prop_assert_eq!(seen, r.trace.records);
    }

    #[test]
    fn phase_leaves_channel_unchanged(seed in 0u64..1_000, n in 1usize..8, theta in 0.0f64..std::f64::consts::TAU) {
        let u = random_unitary(n, seed);
        let rho = random_density(n, seed);
        let mu_u = u.scale(Complex64::from_polar(1.0, theta));
        prop_assert!(rho.conjugate_by(&u).max_abs_diff(&rho.conjugate_by(&mu_u)) < 1e-14);
        prop_assert!(normalized_diff(&u, &mu_u, Pivot::MaxModulus).unwrap() < 1e-12);
    }

    #[test]
    fn phase_alignment_is_left_invariant(seed in 0u64..1_000, n in 1usize..8) {
        let u = random_unitary(n, seed);
        let v = random_unitary(n, seed + 1);
        let w = random_unitary(n, seed + 2);
        let a = global_phase_align(&u, &v).unwrap().distance;
        let b = global_phase_align(&(&w * &u), &(&w * &v)).unwrap().distance;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn class_members_reproduce_sigma(seed in 0u64..1_000, n in 2usize..8) {
        let u = random_unitary(n, seed);
        let rho = random_density(n, seed + 3);
        let v = hermitian_eig(&rho).unwrap().eigenvectors;
        let d: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, (seed + k as u64) as f64)).collect();
        let member = &(&(&u * &v) * &ComplexMatrix::from_diagonal(&d)) * &v.adjoint();
        prop_assert!(is_equiv_under(&member, &u, &v, 1e-10));
        prop_assert!(rho.conjugate_by(&u).max_abs_diff(&rho.conjugate_by(&member)) < 1e-12);
    }
}

#[test]
fn normalized_diff_separates_unrelated_unitaries() {
    for seed in 0..10 {
        let u = random_unitary(4, seed);
        let v = random_unitary(4, seed + 100);
        assert!(normalized_diff(&u, &v, Pivot::MaxModulus).unwrap() > 0.1);
    }
}

#[test]
fn fixed_point_consistency_at_convergence() {
    for seed in 0..6 {
        let ex = example1_instance(6, seed, 2).unwrap();
        let r = solve(&ex.instance, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::ConvergedTol, "seed {seed}");
        assert!(fixed_point_defect(&r.u_hat, ex.instance.pairs()).unwrap() < 1e-8);
        assert!(r.final_residual() < 1e-8);
    }
}

#[test]
fn twenty_pair_instance_converges() {
    let ex = example1_instance(10, 0, 20).unwrap();
    let r = solve(
        &ex.instance,
        &SolverConfig {
            max_iters: 2000,
            ..SolverConfig::default()
        },
    )
    .unwrap();
    assert!(
        r.final_objective() < 1e-18,
        "objective {}",
        r.final_objective()
    );
    assert!(r.trace.is_non_increasing(1e-12));
    // several generic pairs pin the hidden unitary down to a global phase
    assert!(global_phase_align(&r.u_hat, &ex.hidden).unwrap().distance < 1e-6);
}

#[test]
fn identical_pair_exits_immediately() {
    let rho = random_density(5, 9);
    let instance = ChannelInstance::single(rho.clone(), rho).unwrap();
    let r = solve(&instance, &SolverConfig::default()).unwrap();
    assert!(r.status.is_converged());
    assert!(r.iterations() <= 1);
    assert!(frob_norm(&(&r.u_hat - &ComplexMatrix::identity(5))) < 1e-12);
}
