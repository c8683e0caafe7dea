//! Strong-tunneling thermal equilibrium: Fermi-Dirac occupations of the dot
//! levels, multiplet populations, emission spectra and the mean emission time.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scheme::{
    transition_frequencies, DotParameters, Level, LevelScheme, LineSource,
};

/// Independent occupation probabilities of the electron and hole levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupations {
    pub p_e: f64,
    pub p_h: f64,
}

impl Occupations {
    pub fn new(p_e: f64, p_h: f64) -> Result<Self> {
        for (name, value) in [("p_e", p_e), ("p_h", p_h)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "occupation must lie in [0, 1]",
                });
            }
        }
        Ok(Self { p_e, p_h })
    }
}

/// Expected time until the next photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanTime {
    Finite(f64),
    /// No photon is ever emitted (zero emission rate).
    Never,
}

impl MeanTime {
    pub fn from_rate(rate: f64) -> Self {
        if rate > 0.0 {
            MeanTime::Finite(1.0 / rate)
        } else {
            MeanTime::Never
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            MeanTime::Finite(t) => Some(t),
            MeanTime::Never => None,
        }
    }
}

fn logistic(x: f64) -> f64 {
    // 1 / (1 + e^x) without overflow
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Fermi-Dirac occupations of the dot levels in contact with the leads.
pub fn fermi_occupations(p: &DotParameters) -> Result<Occupations> {
    if !(p.kt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "T",
            value: p.kt,
            reason: "k_B T must be positive",
        });
    }
    let p_e = logistic((p.e_e - p.gate - 0.5 * p.bias) / p.kt);
    let p_h = logistic((p.e_h + p.gate - 0.5 * p.bias) / p.kt);
    Ok(Occupations { p_e, p_h })
}

/// Populations of the lumped levels from independent single-particle occupations.
pub fn level_populations(occ: &Occupations, sch: &LevelScheme) -> BTreeMap<Level, f64> {
    let (pe, ph) = (occ.p_e, occ.p_h);
    let (qe, qh) = (1.0 - pe, 1.0 - ph);
    let bright = sch.bright_excitons.len() as f64;
    let dark = sch.dark_excitons.len() as f64;
    let x = pe * qe * ph * qh;
    BTreeMap::from([
        (Level::Ground, qe * qe * qh * qh),
        (Level::Electron, 2.0 * pe * qe * qh * qh),
        (Level::Hole, 2.0 * ph * qh * qe * qe),
        (Level::TwoElectrons, pe * pe * qh * qh),
        (Level::TwoHoles, ph * ph * qe * qe),
        (Level::BrightExciton, bright * x),
        (Level::DarkExciton, dark * x),
        (Level::NegativeTrion, 2.0 * pe * pe * ph * qh),
        (Level::PositiveTrion, 2.0 * pe * qe * ph * ph),
        (Level::Biexciton, pe * pe * ph * ph),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLine {
    pub label: String,
    pub omega: f64,
    /// Population of the source level times the radiative rate of the line.
    pub intensity: f64,
    /// Full width at half maximum used for rendering.
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub lines: Vec<SpectrumLine>,
    /// `(omega, intensity)` samples of the rendered curve.
    pub curve: Vec<(f64, f64)>,
}

/// Area-normalized Lorentzian with full width `width`.
pub fn lorentzian(omega: f64, center: f64, width: f64) -> f64 {
    let half = 0.5 * width;
    half / PI / ((omega - center).powi(2) + half * half)
}

/// Emission lines weighted by thermal populations, rendered as Lorentzians of
/// width `Γ` on `grid`.
pub fn emission_spectrum(p: &DotParameters, sch: &LevelScheme, grid: &[f64]) -> Result<Spectrum> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let occ = fermi_occupations(p)?;
    emission_spectrum_with(p, sch, &occ, grid)
}

/// As [`emission_spectrum`] with explicitly given occupations.
pub fn emission_spectrum_with(
    p: &DotParameters,
    sch: &LevelScheme,
    occ: &Occupations,
    grid: &[f64],
) -> Result<Spectrum> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let table = transition_frequencies(p, sch)?;
    let pops = level_populations(occ, sch);
    let rates = sch.member_rates(p);
    let group_rate = |i: usize| -> f64 {
        table.groups[i]
            .members
            .iter()
            .map(|m| rates.iter().find(|(l, _)| l == m).map_or(0.0, |(_, r)| *r))
            .sum()
    };
    let per_member_exciton = pops[&Level::BrightExciton] / sch.bright_excitons.len() as f64;
    let width = p.rad_rate;
    let lines: Vec<SpectrumLine> = table
        .lines
        .iter()
        .map(|line| {
            let intensity = match line.source {
                LineSource::Biexciton(i) => pops[&Level::Biexciton] * group_rate(i),
                LineSource::Exciton(i) => per_member_exciton * group_rate(i),
                LineSource::PositiveTrion => pops[&Level::PositiveTrion] * sch.trion_rate(p),
                LineSource::NegativeTrion => pops[&Level::NegativeTrion] * sch.trion_rate(p),
            };
            SpectrumLine {
                label: line.label.clone(),
                omega: line.omega,
                intensity,
                width,
            }
        })
        .collect();
    let curve = grid
        .iter()
        .map(|&w| {
            let v = lines
                .iter()
                .map(|l| l.intensity * lorentzian(w, l.omega, l.width))
                .sum();
            (w, v)
        })
        .collect();
    Ok(Spectrum { lines, curve })
}

/// Mean time between photons in thermal equilibrium, `1 / (R p_e p_h)` with
/// `R` the biexciton decay rate (`2Γ` flat, `2(Γ₁+Γ₂)` tall).
pub fn mean_emission_time_thermal(p: &DotParameters, sch: &LevelScheme) -> Result<MeanTime> {
    let occ = fermi_occupations(p)?;
    Ok(mean_emission_time_with(p, sch, &occ))
}

pub fn mean_emission_time_with(p: &DotParameters, sch: &LevelScheme, occ: &Occupations) -> MeanTime {
    MeanTime::from_rate(sch.total_bright_rate(p) * occ.p_e * occ.p_h)
}

/// Total photon emission rate summed over all populated levels.
pub fn total_emission_rate(p: &DotParameters, sch: &LevelScheme, occ: &Occupations) -> f64 {
    let pops = level_populations(occ, sch);
    pops[&Level::Biexciton] * sch.total_bright_rate(p)
        + pops[&Level::BrightExciton] / sch.bright_excitons.len().max(1) as f64
            * sch.total_bright_rate(p)
        + (pops[&Level::PositiveTrion] + pops[&Level::NegativeTrion]) * sch.trion_rate(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resonant() -> DotParameters {
        DotParameters::default()
    }

    #[test]
    fn half_filling_at_resonance() {
        let occ = fermi_occupations(&resonant()).unwrap();
        assert!((occ.p_e - 0.5).abs() < 1e-15);
        assert!((occ.p_h - 0.5).abs() < 1e-15);
    }

    #[test]
    fn one_kt_above_the_fermi_level() {
        let mut p = resonant();
        p.gate -= p.kt; // Ẽ_e - eΦ - eV/2 = k_B T
        let occ = fermi_occupations(&p).unwrap();
        assert!((occ.p_e - 1.0 / (1.0 + std::f64::consts::E)).abs() < 1e-15);
        assert!((occ.p_e - 0.26894).abs() < 1e-5);
    }

    #[test]
    fn deep_bias_saturates() {
        let p = DotParameters {
            bias: 1e6,
            ..resonant()
        };
        let occ = fermi_occupations(&p).unwrap();
        assert_eq!((occ.p_e, occ.p_h), (1.0, 1.0));
    }

    #[test]
    fn zero_temperature_is_rejected() {
        let p = DotParameters { kt: 0.0, ..resonant() };
        assert!(fermi_occupations(&p).is_err());
    }

    #[test]
    fn populations_at_half_filling() {
        let occ = Occupations::new(0.5, 0.5).unwrap();
        let flat = level_populations(&occ, &LevelScheme::flat());
        assert_eq!(flat[&Level::Biexciton], 1.0 / 16.0);
        assert_eq!(flat[&Level::BrightExciton], 1.0 / 8.0);
        assert_eq!(flat[&Level::PositiveTrion], 1.0 / 8.0);
        assert_eq!(flat[&Level::NegativeTrion], 1.0 / 8.0);
        let tall = level_populations(&occ, &LevelScheme::tall());
        assert_eq!(tall[&Level::BrightExciton], 3.0 / 16.0);
    }

    #[test]
    fn saturated_dot_is_pure_biexciton() {
        let occ = Occupations::new(1.0, 1.0).unwrap();
        let pops = level_populations(&occ, &LevelScheme::flat());
        for (level, pop) in pops {
            let expected = if level == Level::Biexciton { 1.0 } else { 0.0 };
            assert_eq!(pop, expected, "{level:?}");
        }
    }

    #[test]
    fn populations_sum_to_one() {
        for &(pe, ph) in &[(0.1, 0.9), (0.5, 0.5), (0.33, 0.77), (0.999, 0.001)] {
            let occ = Occupations::new(pe, ph).unwrap();
            for sch in [LevelScheme::flat(), LevelScheme::tall()] {
                let total: f64 = level_populations(&occ, &sch).values().sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn saturated_spectrum_has_only_the_biexciton_line() {
        let p = resonant();
        let occ = Occupations::new(1.0, 1.0).unwrap();
        let s = emission_spectrum_with(&p, &LevelScheme::flat(), &occ, &[0.0]).unwrap();
        let nonzero: Vec<_> = s.lines.iter().filter(|l| l.intensity > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].label, "1");
    }

    #[test]
    fn empty_grid_is_an_error() {
        assert_eq!(
            emission_spectrum(&resonant(), &LevelScheme::flat(), &[]),
            Err(Error::EmptyGrid)
        );
    }

    #[test]
    fn mean_emission_times() {
        let p = DotParameters {
            rad_rate: 1.0,
            rad_rate_2: 1.0,
            ..resonant()
        };
        let full = Occupations::new(1.0, 1.0).unwrap();
        let half = Occupations::new(0.5, 0.5).unwrap();
        assert_eq!(mean_emission_time_with(&p, &LevelScheme::flat(), &full), MeanTime::Finite(0.5));
        assert_eq!(mean_emission_time_with(&p, &LevelScheme::flat(), &half), MeanTime::Finite(2.0));
        assert_eq!(mean_emission_time_with(&p, &LevelScheme::tall(), &full), MeanTime::Finite(0.25));
        let empty = Occupations::new(0.0, 0.7).unwrap();
        assert_eq!(mean_emission_time_with(&p, &LevelScheme::flat(), &empty), MeanTime::Never);
    }

    #[test]
    fn mean_time_is_inverse_total_rate() {
        let p = DotParameters {
            rad_rate_2: 0.3,
            ..resonant()
        };
        let occ = Occupations::new(0.37, 0.81).unwrap();
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let t = mean_emission_time_with(&p, &sch, &occ).finite().unwrap();
            assert!((t * total_emission_rate(&p, &sch, &occ) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lorentzian_is_normalized() {
        let w = 0.7;
        let n = 400_000;
        let h = 4000.0 / n as f64;
        let area: f64 = (0..n).map(|i| lorentzian(-2000.0 + (i as f64 + 0.5) * h, 0.0, w) * h).sum();
        assert!((area - 1.0).abs() < 1e-3);
        assert!((lorentzian(0.35, 0.0, w) / lorentzian(0.0, 0.0, w) - 0.5).abs() < 1e-12);
    }
}
