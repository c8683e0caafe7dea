//! CSV tables for spectra, photon statistics and entanglement sweeps.

use std::io::{self, Write};

use crate::cavity::CavityPoint;
use crate::entangle::{EntanglementReport, PairMode};
use crate::kinetics::{CascadeProbabilities, Estimate, TrajectoryStats};
use crate::scheme::SchemeClass;
use crate::thermal::Spectrum;

fn writer<W: Write>(w: W, header: &[&str]) -> io::Result<csv::Writer<W>> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(header)?;
    Ok(out)
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_spectrum_curve<W: Write>(w: W, spectrum: &Spectrum) -> io::Result<()> {
    let mut out = writer(w, &["omega", "intensity"])?;
    for &(omega, intensity) in &spectrum.curve {
        out.write_record([num(omega), num(intensity)])?;
    }
    out.flush()
}

pub fn write_spectrum_lines<W: Write>(w: W, spectrum: &Spectrum) -> io::Result<()> {
    let mut out = writer(w, &["label", "omega", "strength"])?;
    for line in &spectrum.lines {
        out.write_record([line.label.clone(), num(line.omega), num(line.intensity)])?;
    }
    out.flush()
}

pub fn write_photon_streams<W: Write>(w: W, stats: &TrajectoryStats) -> io::Result<()> {
    let mut out = writer(w, &["trajectory_id", "time", "transition"])?;
    for (id, stream) in stats.streams.iter().enumerate() {
        for rec in stream {
            out.write_record([id.to_string(), num(rec.time), rec.transition.to_string()])?;
        }
    }
    out.flush()
}

/// One row per estimator, with the linear-solve value for comparison when given.
pub fn write_estimator_summary<W: Write>(
    w: W,
    stats: &TrajectoryStats,
    reference: Option<&CascadeProbabilities>,
    reference_interphoton: Option<f64>,
) -> io::Result<()> {
    let mut out = writer(w, &["quantity", "mean", "std_error", "samples", "reference"])?;
    let mut row = |name: String, e: &Estimate, r: Option<f64>| {
        out.write_record([
            name,
            num(e.mean),
            num(e.std_error),
            e.samples.to_string(),
            r.map(num).unwrap_or_default(),
        ])
    };
    for k in 0..4 {
        row(format!("P{}", k + 1), &stats.first[k], reference.map(|c| c.first[k]))?;
    }
    for k in 0..4 {
        row(format!("P1{}", k + 1), &stats.after_first[k], reference.map(|c| c.after_first[k]))?;
    }
    if let Some(e) = &stats.polarization_agreement {
        row("polarization_agreement".into(), e, None)?;
    }
    if let Some(e) = &stats.mean_interphoton {
        row("mean_interphoton_time".into(), e, reference_interphoton)?;
    }
    out.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeRow {
    pub gamma_over_rad: f64,
    pub probabilities: CascadeProbabilities,
    pub no_tunnel_pair: f64,
}

pub fn write_cascade_sweep<W: Write>(w: W, rows: &[CascadeRow]) -> io::Result<()> {
    let mut out = writer(w, &["gamma_over_Gamma", "P1", "P2", "P3", "P11", "P12", "P13", "Pstar12"])?;
    for r in rows {
        let c = &r.probabilities;
        out.write_record([
            num(r.gamma_over_rad),
            num(c.p(1)),
            num(c.p(2)),
            num(c.p(3)),
            num(c.p1(1)),
            num(c.p1(2)),
            num(c.p1(3)),
            num(r.no_tunnel_pair),
        ])?;
    }
    out.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementRow {
    pub gamma_over_rad: f64,
    pub delta_over_rad: f64,
    pub mode: PairMode,
    pub scheme: SchemeClass,
    pub report: EntanglementReport,
}

pub fn write_entanglement_sweep<W: Write>(w: W, rows: &[EntanglementRow]) -> io::Result<()> {
    let mut out = writer(w, &["gamma_over_Gamma", "Delta_over_Gamma", "mode", "scheme", "P", "C", "E"])?;
    for r in rows {
        out.write_record([
            num(r.gamma_over_rad),
            num(r.delta_over_rad),
            r.mode.name().to_string(),
            r.scheme.short_name().to_string(),
            num(r.report.pair_fraction),
            num(r.report.concurrence),
            num(r.report.entropy),
        ])?;
    }
    out.flush()
}

pub fn write_cavity_sweep<W: Write>(w: W, points: &[CavityPoint]) -> io::Result<()> {
    let mut out = writer(w, &["theta", "phi", "Delta_over_Gamma", "gamma_over_Gamma", "P", "C", "E"])?;
    for p in points {
        let g = &p.geometry;
        out.write_record([
            num(g.theta),
            num(g.phi),
            num(g.delta / g.rad_rate),
            num(g.tunnel_rate / g.rad_rate),
            num(p.report.pair_fraction),
            num(p.report.concurrence),
            num(p.report.entropy),
        ])?;
    }
    out.flush()
}
