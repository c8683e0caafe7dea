//! The invariant suite behind `validate`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdot_turnstile::cavity::{cavity_state, cavity_state_quadrature, CavityGeometry};
use qdot_turnstile::entangle::{
    cascade_density, closed_concurrence_entropy, entanglement_report, wootters_concurrence, PairMode,
};
use qdot_turnstile::kinetics::{
    build_rate_graph, cascade_closed_form, cascade_probabilities, generator_eigenvalues, mean_interphoton_time,
    mean_interphoton_time_steady, simulate_trajectories, Estimate, SimulationOptions,
};
use qdot_turnstile::scheme::{
    classify_scheme, enumerate_states, level_energy, transition_frequencies, DotParameters, ExcitonLabel, HalfInt,
    Level, LevelScheme, Symmetry,
};
use qdot_turnstile::thermal::{emission_spectrum_with, fermi_occupations, level_populations, Occupations};

use crate::commands;
use crate::config::RunConfig;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

const SAMPLES: usize = 500;
const TRIANGLE_GRID: [f64; 7] = [1e-3, 1e-2, 0.1, 0.5, 1.0, 10.0, 1e3];

fn random_dot(rng: &mut ChaCha8Rng, base: &DotParameters) -> DotParameters {
    let v_ee = rng.random_range(0.1..10.0);
    DotParameters {
        e_e: rng.random_range(50.0..150.0),
        e_h: rng.random_range(50.0..150.0),
        v_ee,
        v_hh: v_ee + rng.random_range(0.1..10.0),
        v_eh_s: -rng.random_range(0.0..10.0),
        v_eh_a: -rng.random_range(0.0..10.0),
        v_x1: rng.random_range(-1.0..1.0),
        v_x2: rng.random_range(-1.0..1.0),
        ..*base
    }
}

fn rates(base: &DotParameters, gamma_over_rad: f64) -> DotParameters {
    DotParameters {
        tunnel_rate: gamma_over_rad * base.rad_rate,
        ..*base
    }
}

fn cascade_schemes() -> [LevelScheme; 2] {
    [LevelScheme::flat(), LevelScheme::tall()]
}

fn binomial_z(e: &Estimate, p0: f64) -> f64 {
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

fn state_space() -> Result<Check> {
    let states = enumerate_states();
    let configs: BTreeSet<(u8, u8)> = states.iter().map(|b| (b.state.n_e, b.state.n_h)).collect();
    Ok(check(
        "scheme.state_space",
        states.len() == 16 && configs.len() == 9,
        format!("{} basis states in {} charge configurations", states.len(), configs.len()),
    ))
}

fn frequency_relations(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut violations = [0usize; 2];
    let mut example = None;
    for _ in 0..SAMPLES {
        let p = random_dot(&mut rng, &cfg.dot);
        for (k, sch) in cascade_schemes().iter().enumerate() {
            let t = transition_frequencies(&p, sch)?;
            let scale = t.omega_1.abs() + t.omega_2.abs() + t.omega_3.abs() + t.omega_4.abs();
            worst = worst.max((t.omega_1 + t.omega_2 - t.omega_3 - t.omega_4).abs() / scale);
            let (d12, d34) = (t.omega_1 - t.omega_2, t.omega_3 - t.omega_4);
            if !(d12 > d34 && d34 > 0.0) {
                violations[k] += 1;
                example.get_or_insert_with(|| {
                    format!(
                        "; e.g. {} V_ee={:.3} V_eh_a={:.3}: w1-w2={d12:.3}, w3-w4={d34:.3}",
                        sch.scheme_class.short_name(),
                        p.v_ee,
                        p.v_eh_a
                    )
                });
            }
        }
    }
    Ok(vec![
        check(
            "scheme.frequency_sum",
            worst <= 8.0 * f64::EPSILON,
            format!("max relative residual {worst:.1e} over {SAMPLES} samples x 2 schemes"),
        ),
        check(
            "scheme.frequency_ordering",
            violations == [0, 0],
            format!(
                "violations flat {}/{SAMPLES}, tall {}/{SAMPLES}{}",
                violations[0],
                violations[1],
                example.unwrap_or_default()
            ),
        ),
    ])
}

fn charged_doublets(cfg: &RunConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let states = enumerate_states();
    let mut split = 0;
    for _ in 0..SAMPLES {
        let p = random_dot(&mut rng, &cfg.dot);
        for a in states.iter().filter(|b| b.state.n_e + b.state.n_h == 1 || b.state.n_e + b.state.n_h == 3) {
            for b in states.iter().filter(|b| b.state == a.state && b.member != a.member) {
                if level_energy(&p, &a.state)? != level_energy(&p, &b.state)? {
                    split += 1;
                }
            }
        }
    }
    Ok(check(
        "scheme.charged_doublets",
        split == 0,
        format!("{split} split doublets over {SAMPLES} samples"),
    ))
}

fn high_m_dark() -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for me in (1..=7).step_by(2) {
        for mh in (1..=7).step_by(2) {
            let (m_e, m_h) = (HalfInt::from_twice(me).unwrap(), HalfInt::from_twice(mh).unwrap());
            if m_e.value() + m_h.value() <= 1.0 {
                continue;
            }
            cases += 1;
            let sch = classify_scheme(m_e, m_h, true, Symmetry::Axial);
            if !(sch.dark_excitons.contains(&ExcitonLabel::EH_EVEN) && sch.dark_excitons.contains(&ExcitonLabel::EH_ODD)) {
                failures.push(format!("({m_e}, {m_h})"));
            }
        }
    }
    check(
        "scheme.high_m_dark",
        failures.is_empty(),
        format!("|M| = m_e + m_h excitons dark in {}/{cases} cases {}", cases - failures.len(), failures.join(" ")),
    )
}

fn thermal_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    let mut worst: f64 = 0.0;
    let mut negative = 0;
    let mut offset_breaks = 0;
    for _ in 0..SAMPLES {
        let occ = Occupations::new(rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0))?;
        let p = random_dot(&mut rng, &cfg.dot);
        let shift = rng.random_range(-20.0..20.0);
        let shifted = DotParameters { e_e: p.e_e + shift, ..p };
        for sch in cascade_schemes() {
            let pops = level_populations(&occ, &sch);
            negative += pops.values().filter(|&&x| x < 0.0).count();
            worst = worst.max((pops.values().sum::<f64>() - 1.0).abs());
            let a = emission_spectrum_with(&p, &sch, &occ, &[0.0])?;
            let b = emission_spectrum_with(&shifted, &sch, &occ, &[0.0])?;
            offset_breaks += a
                .lines
                .iter()
                .zip(&b.lines)
                .filter(|(x, y)| x.intensity != y.intensity || (y.omega - x.omega - shift).abs() > 1e-9)
                .count();
        }
    }

    let h = 1e-3;
    let mut monotone_breaks = 0;
    let mut evaluated = 0;
    for i in 0..40 {
        for j in 0..20 {
            let p = DotParameters {
                bias: cfg.dot.bias + (i as f64 - 20.0) * cfg.dot.kt * 0.5,
                gate: cfg.dot.gate + (j as f64 - 10.0) * cfg.dot.kt * 0.5,
                ..cfg.dot
            };
            let base = fermi_occupations(&p)?;
            let up_bias = fermi_occupations(&DotParameters { bias: p.bias + h, ..p })?;
            let up_gate = fermi_occupations(&DotParameters { gate: p.gate + h, ..p })?;
            evaluated += 1;
            if !(up_bias.p_e >= base.p_e && up_bias.p_h >= base.p_h && up_gate.p_e >= base.p_e && up_gate.p_h <= base.p_h) {
                monotone_breaks += 1;
            }
        }
    }
    Ok(vec![
        check(
            "thermal.population_sum",
            worst <= 1e-12 && negative == 0,
            format!("max |sum - 1| = {worst:.1e}, {negative} negative populations"),
        ),
        check(
            "thermal.voltage_monotone",
            monotone_breaks == 0,
            format!("{monotone_breaks} of {evaluated} finite differences with the wrong sign"),
        ),
        check(
            "thermal.offset_invariance",
            offset_breaks == 0,
            format!("{offset_breaks} lines changed under an energy offset"),
        ),
    ])
}

fn triangle(cfg: &RunConfig) -> Result<Check> {
    let mut worst_solve: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    let mut runs = Vec::new();
    for (i, &x) in TRIANGLE_GRID.iter().enumerate() {
        let p = rates(&cfg.dot, x);
        // simulation cost grows with the number of tunnel events per photon
        let n = ((cfg.trajectories as f64 * x.recip().min(1.0)) as usize).max(1000.min(cfg.trajectories));
        runs.push(n);
        for sch in cascade_schemes() {
            let closed = cascade_closed_form(&p, &sch)?;
            let g = build_rate_graph(&p, &sch, true)?;
            worst_solve = worst_solve.max(cascade_probabilities(&g, Level::Biexciton)?.max_abs_diff(&closed));
            let opts = SimulationOptions {
                trajectories: n,
                seed: cfg.seed.wrapping_add(i as u64),
                steady_chains: 0,
                ..SimulationOptions::default()
            };
            let mc = simulate_trajectories(&g, Level::Biexciton, &opts)?;
            for k in 0..4 {
                worst_z = worst_z.max(binomial_z(&mc.first[k], closed.first[k]));
                worst_z = worst_z.max(binomial_z(&mc.after_first[k], closed.after_first[k]));
            }
        }
    }
    Ok(check(
        "kinetics.triangle",
        worst_solve <= 1e-10 && worst_z <= 3.0,
        format!(
            "max |solve - closed form| = {worst_solve:.1e}; max Monte Carlo z = {worst_z:.2} (trajectories per point {runs:?})"
        ),
    ))
}

fn generator(cfg: &RunConfig) -> Result<Check> {
    let mut worst_col: f64 = 0.0;
    let mut worst_re = f64::NEG_INFINITY;
    for x in [0.0, 1e-3, 0.1, 1.0, 10.0, 1e3] {
        let p = rates(&cfg.dot, x);
        for sch in cascade_schemes() {
            for at_resonance in [true, false] {
                let g = build_rate_graph(&p, &sch, at_resonance)?;
                let scale = g.generator.amax().max(1.0);
                for j in 0..g.generator.ncols() {
                    worst_col = worst_col.max(g.generator.column(j).sum().abs() / scale);
                }
                for z in generator_eigenvalues(&g) {
                    worst_re = worst_re.max(z.re / scale);
                }
            }
        }
    }
    Ok(check(
        "kinetics.generator",
        worst_col <= 1e-12 && worst_re <= 1e-10,
        format!("max |column sum| = {worst_col:.1e}, max Re(eigenvalue) = {worst_re:.1e} (relative)"),
    ))
}

fn pair_plateau(cfg: &RunConfig) -> Result<Check> {
    let p = rates(&cfg.dot, 0.05);
    let g = build_rate_graph(&p, &LevelScheme::flat(), true)?;
    let p12 = cascade_probabilities(&g, Level::Biexciton)?.p1(2);
    Ok(check("kinetics.pair_plateau", p12 > 0.9, format!("flat P12 at gamma = Gamma/20 is {p12:.5}")))
}

fn interphoton(cfg: &RunConfig) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for x in [0.1, 1.0, 10.0] {
        let p = rates(&cfg.dot, x);
        for sch in cascade_schemes() {
            let g = build_rate_graph(&p, &sch, true)?;
            let steady = mean_interphoton_time_steady(&g)?.finite();
            let closed = mean_interphoton_time(&p, &sch)?.finite();
            match (steady, closed) {
                (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
                _ => worst = f64::INFINITY,
            }
        }
    }
    Ok(check(
        "kinetics.interphoton_time",
        worst <= 1e-8,
        format!("max |1/flux - closed form| = {worst:.1e}"),
    ))
}

fn entangle_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(5));
    let mut worst_c: f64 = 0.0;
    let mut worst_parallel: f64 = 0.0;
    let mut invalid = 0;
    for _ in 0..SAMPLES {
        let delta = rng.random_range(0.0..5.0);
        let rad = rng.random_range(0.01..10.0);
        let gamma = rng.random_range(0.0..10.0);
        let frac = rng.random_range(0.0..=1.0);
        match cascade_density(delta, rad, gamma, frac) {
            Ok(rho) => {
                if rho.eigenvalues().iter().any(|&w| w < -1e-10) {
                    invalid += 1;
                }
                let closed = closed_concurrence_entropy(delta, rad, gamma, frac)?.concurrence;
                worst_c = worst_c.max((wootters_concurrence(&rho) - closed).abs());
                worst_parallel = worst_parallel.max((rho.parallel_population() - (frac + 0.5 * (1.0 - frac))).abs());
            }
            Err(_) => invalid += 1,
        }
    }

    let deltas = [0.0, 0.1, 0.2, 0.4, 0.8, 1.6];
    let gammas = [0.0, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0];
    let mut breaks = 0;
    let mut pairs = 0;
    for sch in cascade_schemes() {
        let e = |x: f64, d: f64, mode| -> Result<f64> {
            let p = rates(&cfg.dot, x);
            Ok(entanglement_report(&p, &sch, mode, d * p.rad_rate)?.entropy)
        };
        for mode in [PairMode::Unfiltered, PairMode::Filtered] {
            for &x in &gammas {
                for w in deltas.windows(2) {
                    pairs += 1;
                    breaks += usize::from(e(x, w[1], mode)? > e(x, w[0], mode)? + 1e-12);
                }
            }
        }
        for &d in &deltas {
            for w in gammas.windows(2) {
                pairs += 1;
                breaks += usize::from(e(w[1], d, PairMode::Unfiltered)? > e(w[0], d, PairMode::Unfiltered)? + 1e-12);
            }
        }
    }
    Ok(vec![
        check(
            "entangle.wootters_vs_closed_form",
            worst_c <= 1e-10,
            format!("max |difference| = {worst_c:.1e} over {SAMPLES} samples"),
        ),
        check(
            "entangle.density_valid",
            invalid == 0,
            format!("{invalid} of {SAMPLES} densities rejected"),
        ),
        check(
            "entangle.entropy_monotone",
            breaks == 0,
            format!("{breaks} increases among {pairs} neighbouring grid pairs"),
        ),
        check(
            "entangle.polarization_correlation",
            worst_parallel <= 1e-12,
            format!("max |<xx>+<yy> - (P + (1-P)/2)| = {worst_parallel:.1e}"),
        ),
    ])
}

fn cavity_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let rad = cfg.dot.rad_rate;
    let mut invalid = 0;
    let mut worst_trace: f64 = 0.0;
    let mut worst_routes: f64 = 0.0;
    let mut points = 0;
    for &d in &[0.0, 0.1, 0.4] {
        for &x in &[0.0, 0.01, 0.2] {
            for i in 0..24 {
                let geo = CavityGeometry {
                    theta: FRAC_PI_2 * i as f64 / 24.0,
                    phi: cfg.phi,
                    rad_rate: rad,
                    delta: d * rad,
                    tunnel_rate: x * rad,
                };
                points += 1;
                let state = match cavity_state(&geo) {
                    Ok(s) => s,
                    Err(_) => {
                        invalid += 1;
                        continue;
                    }
                };
                if state.density.eigenvalues().iter().any(|&w| w < -1e-10) || !(state.pair_fraction > 0.0) {
                    invalid += 1;
                }
                worst_trace = worst_trace.max((state.density.matrix().trace().re - 1.0).abs());
                if geo.theta <= 1.4 {
                    let q = cavity_state_quadrature(&geo, 1e-11)?;
                    let diff = (state.density.matrix() - q.density.matrix())
                        .iter()
                        .map(|z| z.norm())
                        .fold((state.pair_fraction - q.pair_fraction).abs(), f64::max);
                    worst_routes = worst_routes.max(diff);
                }
            }
        }
    }
    Ok(vec![
        check(
            "cavity.density_valid",
            invalid == 0,
            format!("{invalid} of {points} cavity states invalid"),
        ),
        check(
            "cavity.normalization",
            worst_trace <= 1e-10,
            format!("max |trace - 1| = {worst_trace:.1e}"),
        ),
        check(
            "cavity.routes_agree",
            worst_routes <= 1e-8,
            format!("max |eigenmode - quadrature| = {worst_routes:.1e}"),
        ),
    ])
}

fn deterministic(cfg: &RunConfig) -> Result<Check> {
    let small = RunConfig {
        trajectories: cfg.trajectories.min(2000),
        ..cfg.clone()
    };
    let run = || -> Result<Vec<Vec<u8>>> {
        let mut out = Vec::new();
        for tables in [commands::cascade(&small)?, commands::simulate(&small)?] {
            out.extend(tables.into_iter().map(|t| t.bytes));
        }
        Ok(out)
    };
    let (a, b) = (run()?, run()?);
    Ok(check(
        "cli.deterministic_output",
        a == b,
        format!("cascade and simulate tables {}", if a == b { "byte-identical" } else { "differ" }),
    ))
}

type Group = fn(&RunConfig) -> Result<Vec<Check>>;

/// Runs every check. Errors from the library are reported as failed checks.
pub fn run_all(cfg: &RunConfig) -> Vec<Check> {
    let groups: [(&'static str, Group); 12] = [
        ("scheme.state_space", |_| Ok(vec![state_space()?])),
        ("scheme.frequency", frequency_relations),
        ("scheme.charged_doublets", |c| Ok(vec![charged_doublets(c)?])),
        ("scheme.high_m_dark", |_| Ok(vec![high_m_dark()])),
        ("thermal", thermal_checks),
        ("kinetics.triangle", |c| Ok(vec![triangle(c)?])),
        ("kinetics.generator", |c| Ok(vec![generator(c)?])),
        ("kinetics.pair_plateau", |c| Ok(vec![pair_plateau(c)?])),
        ("kinetics.interphoton_time", |c| Ok(vec![interphoton(c)?])),
        ("entangle", entangle_checks),
        ("cavity", cavity_checks),
        ("cli.deterministic_output", |c| Ok(vec![deterministic(c)?])),
    ];
    let mut checks = Vec::new();
    for (name, group) in groups {
        match group(cfg) {
            Ok(cs) => checks.extend(cs),
            Err(e) => checks.push(check(name, false, format!("error: {e:#}"))),
        }
    }
    checks
}
