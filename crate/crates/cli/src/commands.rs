//! Table generation for each subcommand. Tables are built in memory so that
//! identical inputs can be compared byte for byte before anything is written.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use anyhow::{Context, Result};
use qdot_turnstile::cavity::{cavity_entanglement_sweep, CavityGeometry};
use qdot_turnstile::entangle::{entanglement_report, PairMode};
use qdot_turnstile::export::{
    write_cascade_sweep, write_cavity_sweep, write_entanglement_sweep, write_estimator_summary, write_photon_streams,
    CascadeRow, EntanglementRow,
};
use qdot_turnstile::kinetics::{
    build_rate_graph, cascade_probabilities, mean_interphoton_time_steady, no_tunnel_pair_fraction,
    simulate_trajectories, SimulationOptions,
};
use qdot_turnstile::scheme::{transition_frequencies, DotParameters, Level};
use qdot_turnstile::thermal::emission_spectrum;

use crate::config::RunConfig;

/// A named CSV file and its contents.
pub struct Table {
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Spectra for a bias series at the configured gate and a gate
/// series at the smallest bias offset.
pub fn spectrum(cfg: &RunConfig) -> Result<Vec<Table>> {
    let sch = cfg.scheme();
    let base = cfg.dot;
    let table = transition_frequencies(&base, &sch)?;
    let omegas: Vec<f64> = table.lines.iter().map(|l| l.omega).collect();
    let margin = 6.0 * base.rad_rate.max(1e-3);
    let lo = omegas.iter().copied().fold(f64::INFINITY, f64::min) - margin;
    let hi = omegas.iter().copied().fold(f64::NEG_INFINITY, f64::max) + margin;
    let n = cfg.spectrum_points;
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();

    let gate_bias = cfg.bias_offsets.iter().copied().fold(f64::INFINITY, f64::min);
    let mut cases: Vec<(&str, f64, f64)> = cfg.bias_offsets.iter().map(|&b| ("bias", b, 0.0)).collect();
    if gate_bias.is_finite() {
        cases.extend(cfg.gate_offsets.iter().map(|&g| ("gate", gate_bias, g)));
    }

    let s = cfg.unit_scale;
    let mut curve = csv_writer(Vec::new());
    curve.write_record(["series", "bias_offset_kT", "gate_offset_kT", "omega", "intensity"])?;
    let mut lines = csv_writer(Vec::new());
    lines.write_record(["series", "bias_offset_kT", "gate_offset_kT", "label", "omega", "strength"])?;
    for (series, b, g) in cases {
        let p = DotParameters {
            bias: base.bias + b * base.kt,
            gate: base.gate + g * base.kt,
            ..base
        };
        let spec = emission_spectrum(&p, &sch, &grid)?;
        for &(w, v) in &spec.curve {
            curve.write_record([series.to_string(), b.to_string(), g.to_string(), (w * s).to_string(), v.to_string()])?;
        }
        for l in &spec.lines {
            lines.write_record([
                series.to_string(),
                b.to_string(),
                g.to_string(),
                l.label.clone(),
                (l.omega * s).to_string(),
                l.intensity.to_string(),
            ])?;
        }
    }
    Ok(vec![
        Table {
            name: "spectrum.csv",
            bytes: curve.into_inner()?,
        },
        Table {
            name: "spectrum_lines.csv",
            bytes: lines.into_inner()?,
        },
    ])
}

/// Cascade probabilities over the configured `γ/Γ` sweep.
pub fn cascade(cfg: &RunConfig) -> Result<Vec<Table>> {
    let sch = cfg.scheme();
    let rows = cfg
        .sweep
        .points()
        .into_iter()
        .map(|x| {
            let p = cfg.with_gamma(x);
            let g = build_rate_graph(&p, &sch, true)?;
            Ok(CascadeRow {
                gamma_over_rad: x,
                probabilities: cascade_probabilities(&g, Level::Biexciton)?,
                no_tunnel_pair: no_tunnel_pair_fraction(&p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bytes = Vec::new();
    write_cascade_sweep(&mut bytes, &rows)?;
    Ok(vec![Table {
        name: "cascade.csv",
        bytes,
    }])
}

/// Entropy against `γ/Γ` for each splitting, with and without
/// filtering of charged-exciton photons.
pub fn entangle(cfg: &RunConfig) -> Result<Vec<Table>> {
    let sch = cfg.scheme();
    let mut rows = Vec::new();
    for mode in [PairMode::Unfiltered, PairMode::Filtered] {
        for &d in &cfg.delta_values {
            for x in cfg.sweep.points() {
                let p = cfg.with_gamma(x);
                rows.push(EntanglementRow {
                    gamma_over_rad: x,
                    delta_over_rad: d,
                    mode,
                    scheme: sch.scheme_class,
                    report: entanglement_report(&p, &sch, mode, d * p.rad_rate)?,
                });
            }
        }
    }
    let mut bytes = Vec::new();
    write_entanglement_sweep(&mut bytes, &rows)?;
    Ok(vec![Table {
        name: "entangle.csv",
        bytes,
    }])
}

/// Entropy against cavity misalignment for each splitting.
pub fn cavity(cfg: &RunConfig) -> Result<Vec<Table>> {
    let p = cfg.dot;
    let n = cfg.theta_steps;
    let mut grid = Vec::new();
    for &d in &cfg.delta_values {
        for i in 0..n {
            grid.push(CavityGeometry {
                theta: FRAC_PI_2 * i as f64 / n as f64,
                phi: cfg.phi,
                rad_rate: p.rad_rate,
                delta: d * p.rad_rate,
                tunnel_rate: p.tunnel_rate,
            });
        }
    }
    let points = cavity_entanglement_sweep(&grid)?;
    let mut bytes = Vec::new();
    write_cavity_sweep(&mut bytes, &points)?;
    Ok(vec![Table {
        name: "cavity.csv",
        bytes,
    }])
}

/// Photon streams from the biexciton and the estimator summary.
pub fn simulate(cfg: &RunConfig) -> Result<Vec<Table>> {
    let sch = cfg.scheme();
    let g = build_rate_graph(&cfg.dot, &sch, true)?;
    let opts = SimulationOptions {
        trajectories: cfg.trajectories,
        seed: cfg.seed,
        keep_streams: true,
        ..SimulationOptions::default()
    };
    let stats = simulate_trajectories(&g, Level::Biexciton, &opts).context("trajectory simulation failed")?;
    let reference = cascade_probabilities(&g, Level::Biexciton)?;
    let interphoton = mean_interphoton_time_steady(&g)?.finite();
    let mut streams = Vec::new();
    write_photon_streams(&mut streams, &stats)?;
    let mut summary = Vec::new();
    write_estimator_summary(&mut summary, &stats, Some(&reference), interphoton)?;
    Ok(vec![
        Table {
            name: "photon_streams.csv",
            bytes: streams,
        },
        Table {
            name: "estimators.csv",
            bytes: summary,
        },
    ])
}
