//! Property-based checks over randomly generated states, times, windows,
//! and impulse schedules.

use impulsewave::modal::{coeffs_from_samples, Field, MassMatrix, ModalState, SubInterval};
use impulsewave::{interior_grid, solve, Error, ImpulseEvent, ImpulseSchedule};
use proptest::prelude::*;

fn state_strategy(max_modes: usize) -> impl Strategy<Value = ModalState> {
    (1usize..=max_modes).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0..2.0f64, n),
            prop::collection::vec(-2.0..2.0f64, n),
        )
            .prop_map(|(pos, vel)| ModalState::new(pos, vel).unwrap())
    })
}

fn window_strategy() -> impl Strategy<Value = SubInterval> {
    (0.0..0.8f64, 0.05..0.2f64).prop_map(|(lo, len)| {
        let hi = (lo + len + 0.05).min(1.0);
        SubInterval::new(lo, hi).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_composition_is_a_group_law(
        state in state_strategy(6),
        s in -3.0..3.0f64,
        t in -3.0..3.0f64,
    ) {
        let two_step = state.propagate(s).unwrap().propagate(t).unwrap();
        let one_step = state.propagate(s + t).unwrap();
        for i in 0..state.n_modes() {
            prop_assert!(
                (two_step.position_coeffs()[i] - one_step.position_coeffs()[i]).abs() <= 1e-12
            );
            prop_assert!(
                (two_step.velocity_coeffs()[i] - one_step.velocity_coeffs()[i]).abs() <= 1e-12
            );
        }
    }

    #[test]
    fn free_flow_preserves_energy(state in state_strategy(6), t in -8.0..8.0f64) {
        let e0 = state.energy();
        let e = state.propagate(t).unwrap().energy();
        prop_assert!((e - e0).abs() <= 1e-12 * e0.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn synthesized_fields_vanish_on_the_boundary(state in state_strategy(6)) {
        for field in [Field::Position, Field::Velocity] {
            let vals = state.evaluate(&[0.0, 1.0], field).unwrap();
            prop_assert_eq!(vals[0], 0.0);
            prop_assert_eq!(vals[1], 0.0);
        }
        let outside = state.evaluate(&[1.5], Field::Position);
        let rejected = matches!(outside, Err(Error::PointOutsideDomain { .. }));
        prop_assert!(rejected);
    }

    #[test]
    fn coefficients_survive_a_sampling_round_trip(
        state in state_strategy(6),
        m in 64usize..=256,
    ) {
        let grid = interior_grid(m);
        let samples = state.evaluate(&grid, Field::Position).unwrap();
        let coeffs = coeffs_from_samples(&samples, state.n_modes()).unwrap();
        for (got, want) in coeffs.iter().zip(state.position_coeffs()) {
            prop_assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn impulse_jumps_close_to_machine_precision(
        state in state_strategy(5),
        time in 0.1..1.9f64,
        omega in window_strategy(),
        raw_profile in prop::collection::vec(-2.0..2.0f64, 5),
    ) {
        let n = state.n_modes();
        let profile = raw_profile[..n].to_vec();
        let schedule = ImpulseSchedule::new(
            2.0,
            vec![ImpulseEvent::new(time, profile, omega).unwrap()],
        )
        .unwrap();
        let traj = solve(&state, &schedule).unwrap();
        let (pos_res, vel_res) = traj.jump_residual(0).unwrap();
        prop_assert!(pos_res <= 1e-12, "position residual {pos_res}");
        prop_assert!(vel_res <= 1e-12, "velocity residual {vel_res}");
    }

    #[test]
    fn restricted_mass_matrix_is_symmetric_and_bounded(omega in window_strategy()) {
        let mass = MassMatrix::new(omega, 8);
        let len = omega.hi() - omega.lo();
        for i in 0..8 {
            // ∫_ω sin² never exceeds the window length, and the diagonal
            // dominates the energy budget of each mode.
            prop_assert!(mass.entry(i, i) >= 0.0);
            prop_assert!(mass.entry(i, i) <= len + 1e-15);
            for j in 0..8 {
                prop_assert_eq!(mass.entry(i, j), mass.entry(j, i));
            }
        }
    }
}
