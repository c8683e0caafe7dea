use super::CascadeProbabilities;
use crate::error::{Error, Result};
use crate::scheme::{DotParameters, LevelScheme, SchemeClass};
use crate::thermal::MeanTime;

/// Emission probabilities of a flat dot with radiative rate `rad` and tunneling rate `gamma`.
pub fn flat_cascade(rad: f64, gamma: f64) -> CascadeProbabilities {
    let d = 2.0 * rad * rad + 15.0 * rad * gamma + 24.0 * gamma * gamma;
    let p2 = 6.0 * gamma * gamma / d;
    let p3 = (2.0 * rad * gamma + 6.0 * gamma * gamma) / d;
    let p11 = 6.0 * gamma * gamma / d;
    let p13 = (3.0 * rad * gamma + 6.0 * gamma * gamma) / d;
    CascadeProbabilities {
        first: [1.0 - p2 - 2.0 * p3, p2, p3, p3],
        after_first: [p11, 1.0 - p11 - 2.0 * p13, p13, p13],
    }
}

/// Emission probabilities of a tall dot with total radiative rate `rad_total = Γ₁ + Γ₂`.
pub fn tall_cascade(rad_total: f64, gamma: f64) -> CascadeProbabilities {
    let gt = rad_total;
    let d = gt * gt + 9.0 * gt * gamma + 16.0 * gamma * gamma;
    let p2 = 4.0 * gamma * gamma / d;
    let p3 = (gt * gamma + 4.0 * gamma * gamma) / d;
    let p13 = (2.0 * gt * gamma + 4.0 * gamma * gamma) / d;
    CascadeProbabilities {
        first: [1.0 - p2 - 2.0 * p3, p2, p3, p3],
        after_first: [p2, 1.0 - p2 - 2.0 * p13, p13, p13],
    }
}

pub fn cascade_closed_form(p: &DotParameters, sch: &LevelScheme) -> Result<CascadeProbabilities> {
    match sch.scheme_class {
        SchemeClass::FlatCylindrical => Ok(flat_cascade(p.rad_rate, p.tunnel_rate)),
        SchemeClass::TallCylindrical => Ok(tall_cascade(p.total_rad_rate(), p.tunnel_rate)),
        other => Err(Error::UnsupportedScheme(other)),
    }
}

/// Probability that the second cascade photon follows the first without any
/// tunneling event, `Γ / (Γ + 4γ)` (`Γ = Γ₁` for tall dots).
pub fn no_tunnel_pair_fraction(p: &DotParameters) -> f64 {
    p.rad_rate / (p.rad_rate + 4.0 * p.tunnel_rate)
}

pub fn flat_mean_interphoton_time(rad: f64, gamma: f64) -> MeanTime {
    if gamma > 0.0 {
        MeanTime::Finite(1.0 / gamma + 2.0 / rad)
    } else {
        MeanTime::Never
    }
}

pub fn tall_mean_interphoton_time(rad_total: f64, gamma: f64) -> MeanTime {
    if gamma > 0.0 {
        let gt = rad_total;
        MeanTime::Finite(
            8.0 / (9.0 * gamma)
                + 2.0 / gt
                + 2.0 / 9.0 * (5.0 * gt + 24.0 * gamma)
                    / (3.0 * gt * gt + 28.0 * gt * gamma + 48.0 * gamma * gamma),
        )
    } else {
        MeanTime::Never
    }
}

/// Average time between subsequent photons in the resonant steady state.
pub fn mean_interphoton_time(p: &DotParameters, sch: &LevelScheme) -> Result<MeanTime> {
    match sch.scheme_class {
        SchemeClass::FlatCylindrical => Ok(flat_mean_interphoton_time(p.rad_rate, p.tunnel_rate)),
        SchemeClass::TallCylindrical => {
            Ok(tall_mean_interphoton_time(p.total_rad_rate(), p.tunnel_rate))
        }
        other => Err(Error::UnsupportedScheme(other)),
    }
}
