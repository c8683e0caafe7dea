use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;

use qdot_turnstile::cavity::{cavity_state, cavity_state_quadrature, CavityGeometry};
use qdot_turnstile::entangle::{
    cascade_density, closed_concurrence_entropy, entanglement_report, pair_fraction, wootters_concurrence, PairMode,
};
use qdot_turnstile::kinetics::{
    build_rate_graph, cascade_closed_form, cascade_probabilities, generator_eigenvalues, no_tunnel_pair_fraction,
};
use qdot_turnstile::scheme::{
    classify_scheme, enumerate_states, level_energy, transition_frequencies, DotParameters, HalfInt,
    Level, LevelScheme, Symmetry,
};
use qdot_turnstile::thermal::{emission_spectrum_with, fermi_occupations, level_populations, Occupations};

fn dot() -> impl Strategy<Value = DotParameters> {
    (
        (-50.0..150.0f64, -50.0..150.0f64),
        (0.01..10.0f64, 0.01..10.0f64),
        (-10.0..0.0f64, -10.0..0.0f64),
        (-1.0..1.0f64, -1.0..1.0f64),
    )
        .prop_map(|((e_e, e_h), (v_ee, dv), (v_eh_s, v_eh_a), (v_x1, v_x2))| DotParameters {
            e_e,
            e_h,
            v_ee,
            v_hh: v_ee + dv,
            v_eh_s,
            v_eh_a,
            v_x1,
            v_x2,
            ..DotParameters::default()
        })
}

fn schemes() -> Vec<LevelScheme> {
    vec![
        LevelScheme::flat(),
        LevelScheme::tall(),
        classify_scheme(HalfInt::THREE_HALVES, HalfInt::THREE_HALVES, true, Symmetry::Axial),
        classify_scheme(HalfInt::HALF, HalfInt::HALF, false, Symmetry::None),
        classify_scheme(HalfInt::HALF, HalfInt::THREE_HALVES, true, Symmetry::None),
    ]
}

fn rates(gamma: f64) -> DotParameters {
    DotParameters {
        rad_rate: 1.0,
        rad_rate_2: 1.0,
        tunnel_rate: gamma,
        ..DotParameters::default()
    }
}

proptest! {
    #[test]
    fn frequency_sum_rule(p in dot()) {
        for sch in schemes() {
            let t = transition_frequencies(&p, &sch).unwrap();
            let scale = t.omega_1.abs() + t.omega_2.abs() + t.omega_3.abs() + t.omega_4.abs();
            prop_assert!((t.omega_1 + t.omega_2 - t.omega_3 - t.omega_4).abs() <= 8.0 * f64::EPSILON * scale);
        }
    }

    #[test]
    fn tall_frequency_ordering(p in dot()) {
        let t = transition_frequencies(&p, &LevelScheme::tall()).unwrap();
        prop_assert!(t.omega_1 - t.omega_2 > t.omega_3 - t.omega_4);
        prop_assert!(t.omega_3 - t.omega_4 > 0.0);
    }

    #[test]
    fn charged_doublets_are_degenerate(p in dot()) {
        let states = enumerate_states();
        prop_assert_eq!(states.len(), 16);
        for a in &states {
            for b in &states {
                if a.state == b.state {
                    prop_assert_eq!(level_energy(&p, &a.state).unwrap(), level_energy(&p, &b.state).unwrap());
                }
            }
        }
    }

    #[test]
    fn populations_sum_to_one(pe in 0.0..=1.0f64, ph in 0.0..=1.0f64) {
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let pops = level_populations(&Occupations::new(pe, ph).unwrap(), &sch);
            prop_assert!(pops.values().all(|&x| x >= 0.0));
            prop_assert!((pops.values().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn occupations_follow_the_voltages(bias in -50.0..250.0f64, gate in -30.0..30.0f64, kt in 0.5..20.0f64) {
        let p = DotParameters { bias, gate, kt, ..DotParameters::default() };
        let h = 1e-3;
        let base = fermi_occupations(&p).unwrap();
        let up_bias = fermi_occupations(&DotParameters { bias: bias + h, ..p }).unwrap();
        let up_gate = fermi_occupations(&DotParameters { gate: gate + h, ..p }).unwrap();
        prop_assert!(up_bias.p_e >= base.p_e && up_bias.p_h >= base.p_h);
        prop_assert!(up_gate.p_e >= base.p_e);
        prop_assert!(up_gate.p_h <= base.p_h);
    }

    #[test]
    fn intensities_ignore_energy_offsets(p in dot(), shift in -20.0..20.0f64, pe in 0.0..=1.0f64, ph in 0.0..=1.0f64) {
        let occ = Occupations::new(pe, ph).unwrap();
        let shifted = DotParameters { e_e: p.e_e + shift, ..p };
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let a = emission_spectrum_with(&p, &sch, &occ, &[0.0]).unwrap();
            let b = emission_spectrum_with(&shifted, &sch, &occ, &[0.0]).unwrap();
            for (x, y) in a.lines.iter().zip(&b.lines) {
                prop_assert_eq!(x.intensity, y.intensity);
                prop_assert!((y.omega - x.omega - shift).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn solve_matches_closed_form(log_gamma in -3.0..3.0f64) {
        let p = rates(10f64.powf(log_gamma));
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let g = build_rate_graph(&p, &sch, true).unwrap();
            let solved = cascade_probabilities(&g, Level::Biexciton).unwrap();
            prop_assert!(solved.max_abs_diff(&cascade_closed_form(&p, &sch).unwrap()) <= 1e-10);
            prop_assert!((solved.p(1) - (1.0 - solved.p(2) - 2.0 * solved.p(3))).abs() <= 1e-12);
            prop_assert!((solved.p(4) - solved.p(3)).abs() <= 1e-12);
            prop_assert!((solved.p1(1) + solved.p1(2) + 2.0 * solved.p1(3) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn generator_is_conservative_and_stable(log_gamma in -3.0..3.0f64, at_resonance: bool) {
        let p = rates(10f64.powf(log_gamma));
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let g = build_rate_graph(&p, &sch, at_resonance).unwrap();
            prop_assert!(g.edges.iter().all(|e| e.rate >= 0.0));
            for j in 0..g.generator.ncols() {
                prop_assert!(g.generator.column(j).sum().abs() <= 1e-12 * (1.0 + p.tunnel_rate));
            }
            let scale = g.generator.amax();
            prop_assert!(generator_eigenvalues(&g).iter().all(|z| z.re <= 1e-10 * scale));
        }
    }

    #[test]
    fn cascade_density_is_valid(delta in -5.0..5.0f64, rad in 0.01..10.0f64, gamma in 0.0..10.0f64, pf in 0.0..=1.0f64) {
        let rho = cascade_density(delta, rad, gamma, pf).unwrap();
        prop_assert!(rho.eigenvalues().iter().all(|&w| w >= -1e-10));
        prop_assert!((rho.parallel_population() - (pf + 0.5 * (1.0 - pf))).abs() <= 1e-12);
        let closed = closed_concurrence_entropy(delta, rad, gamma, pf).unwrap();
        prop_assert!((wootters_concurrence(&rho) - closed.concurrence).abs() <= 1e-10);
        prop_assert_eq!(closed.entropy == 0.0, closed.concurrence == 0.0);
    }

    #[test]
    fn entropy_decreases_with_splitting_and_tunneling(
        d1 in 0.0..3.0f64, dd in 0.0..3.0f64, g1 in 0.0..2.0f64, dg in 0.0..2.0f64
    ) {
        let e = |g: f64, d: f64, mode| entanglement_report(&rates(g), &LevelScheme::flat(), mode, d).unwrap().entropy;
        for mode in [PairMode::Unfiltered, PairMode::Filtered] {
            prop_assert!(e(g1, d1 + dd, mode) <= e(g1, d1, mode) + 1e-12);
        }
        prop_assert!(e(g1 + dg, d1, PairMode::Unfiltered) <= e(g1, d1, PairMode::Unfiltered) + 1e-12);
    }

    #[test]
    fn filtering_never_hurts(log_gamma in -3.0..3.0f64) {
        let p = rates(10f64.powf(log_gamma));
        let sch = LevelScheme::flat();
        let filtered = pair_fraction(PairMode::Filtered, &sch, &p).unwrap();
        let unfiltered = pair_fraction(PairMode::Unfiltered, &sch, &p).unwrap();
        prop_assert!(filtered >= unfiltered - 1e-12);
        prop_assert!((unfiltered - no_tunnel_pair_fraction(&p)).abs() == 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cavity_density_is_valid(
        theta in 0.0..(FRAC_PI_2 - 1e-3), phi in -3.2..3.2f64, delta in -1.0..1.0f64, gamma in 0.0..0.5f64
    ) {
        let geo = CavityGeometry { theta, phi, rad_rate: 1.0, delta, tunnel_rate: gamma };
        let state = cavity_state(&geo).unwrap();
        prop_assert!((state.density.matrix().trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(state.pair_fraction > 0.0 && state.pair_fraction <= 1.0 + 1e-12);
        prop_assert!(state.density.eigenvalues().iter().all(|&w| w >= -1e-10));
    }

    #[test]
    fn cavity_routes_agree(
        theta in 0.0..1.4f64, phi in -3.2..3.2f64, delta in -1.0..1.0f64, gamma in 0.0..0.5f64
    ) {
        let geo = CavityGeometry { theta, phi, rad_rate: 1.0, delta, tunnel_rate: gamma };
        let a = cavity_state(&geo).unwrap();
        let b = cavity_state_quadrature(&geo, 1e-11).unwrap();
        let diff = (a.density.matrix() - b.density.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-8, "difference {diff:e}");
    }
}
