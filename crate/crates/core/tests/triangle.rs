//! Closed forms, linear solve and Monte Carlo over a wide range of tunneling rates.

use qdot_turnstile::kinetics::{
    build_rate_graph, cascade_closed_form, cascade_probabilities, simulate_trajectories, Estimate, SimulationOptions,
};
use qdot_turnstile::scheme::{DotParameters, Level, LevelScheme};

const GRID: [f64; 7] = [1e-3, 1e-2, 0.1, 0.5, 1.0, 10.0, 1e3];

/// Binomial z-score against the hypothesized proportion `p0`.
fn z(e: &Estimate, p0: f64) -> f64 {
    let se = (p0 * (1.0 - p0) / e.samples as f64).sqrt();
    if se == 0.0 {
        if e.mean == p0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (e.mean - p0).abs() / se
    }
}

/// Trajectory cost grows with `γ/Γ`; the default run thins the fast-tunneling points.
fn reduced(gamma: f64) -> usize {
    if gamma <= 1.0 {
        1_000_000
    } else if gamma <= 10.0 {
        100_000
    } else {
        5_000
    }
}

#[test]
fn three_routes_agree() {
    three_routes(reduced);
}

#[test]
#[ignore = "full 10^6 trajectories at every grid point; several minutes on one core"]
fn three_routes_agree_full() {
    three_routes(|_| 1_000_000);
}

fn three_routes(trajectories: fn(f64) -> usize) {
    for (i, &gamma) in GRID.iter().enumerate() {
        let p = DotParameters {
            rad_rate: 1.0,
            rad_rate_2: 1.0,
            tunnel_rate: gamma,
            ..DotParameters::default()
        };
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let closed = cascade_closed_form(&p, &sch).unwrap();
            let g = build_rate_graph(&p, &sch, true).unwrap();
            let solved = cascade_probabilities(&g, Level::Biexciton).unwrap();
            assert!(solved.max_abs_diff(&closed) <= 1e-10, "gamma={gamma}");

            let opts = SimulationOptions {
                trajectories: trajectories(gamma),
                seed: 1000 + i as u64,
                steady_chains: 0,
                ..SimulationOptions::default()
            };
            let mc = simulate_trajectories(&g, Level::Biexciton, &opts).unwrap();
            for k in 1..4 {
                let zk = z(&mc.first[k], closed.first[k]);
                assert!(zk <= 3.0, "{:?} gamma={gamma} P{}: z={zk}", sch.scheme_class, k + 1);
            }
            for k in 0..3 {
                let zk = z(&mc.after_first[k], closed.after_first[k]);
                assert!(zk <= 3.0, "{:?} gamma={gamma} P1{}: z={zk}", sch.scheme_class, k + 1);
            }
        }
    }
}

#[test]
fn polarization_memory_survives_only_without_tunneling() {
    // a 1-then-2 pair keeps its polarization unless a tunneling event intervened
    let gamma = 0.2;
    let p = DotParameters {
        rad_rate: 1.0,
        tunnel_rate: gamma,
        ..DotParameters::default()
    };
    let g = build_rate_graph(&p, &LevelScheme::flat(), true).unwrap();
    let opts = SimulationOptions {
        trajectories: 400_000,
        seed: 99,
        steady_chains: 0,
        ..SimulationOptions::default()
    };
    let mc = simulate_trajectories(&g, Level::Biexciton, &opts).unwrap();
    let closed = cascade_closed_form(&p, &LevelScheme::flat()).unwrap();
    let immediate = 1.0 / (1.0 + 4.0 * gamma) / closed.p1(2);
    let expected = immediate + 0.5 * (1.0 - immediate);
    let agree = mc.polarization_agreement.unwrap();
    assert!(z(&agree, expected) <= 3.0, "agreement {} vs {expected}", agree.mean);
}
