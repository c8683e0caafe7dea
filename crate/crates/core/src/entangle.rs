//! Polarization state of the two cascade photons.
//!
//! Basis order is `xx, xy, yx, yy` (index `2a + b` for photon-1 polarization
//! `a` and photon-2 polarization `b`).

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinetics::{build_rate_graph, cascade_probabilities, no_tunnel_pair_fraction};
use crate::scheme::{DotParameters, Level, LevelScheme, SchemeClass};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

const XX: usize = 0;
const YY: usize = 3;

/// Validated two-photon polarization density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationDensity {
    rho: Matrix4<Complex64>,
}

impl PolarizationDensity {
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        let deviation = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(deviation <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = rho.trace().re;
        if !((trace - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::NotNormalized { trace });
        }
        let min_eigenvalue = hermitian_eigenvalues(&rho).iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { rho })
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.rho[(row, col)]
    }

    /// Probability that both photons have the same linear polarization.
    pub fn parallel_population(&self) -> f64 {
        self.rho[(XX, XX)].re + self.rho[(YY, YY)].re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.rho)
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: Matrix4::<Complex64>::identity().scale(0.25),
        }
    }
}

fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let h = (m + m.adjoint()).scale(0.5);
    let ev = h.symmetric_eigenvalues();
    [ev[0], ev[1], ev[2], ev[3]]
}

fn check_rates(gamma_rad: f64, gamma: f64, delta: f64) -> Result<()> {
    if !(gamma_rad > 0.0 && gamma_rad.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "Gamma",
            value: gamma_rad,
            reason: "radiative rate must be positive and finite",
        });
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "tunneling rate must be non-negative and finite",
        });
    }
    if !delta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "Delta",
            value: delta,
            reason: "splitting must be finite",
        });
    }
    Ok(())
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: p,
            reason: "must lie in [0, 1]",
        })
    }
}

/// `1 / (1 + iΔ/(Γ + 4γ))`
fn coherence(delta: f64, gamma_rad: f64, gamma: f64) -> Complex64 {
    Complex64::new(1.0, delta / (gamma_rad + 4.0 * gamma)).inv()
}

/// Time-averaged pair state: a fraction `p` of Bell pairs dephased by the
/// exciton splitting during the radiative lifetime, the rest fully mixed.
pub fn cascade_density(delta: f64, gamma_rad: f64, gamma: f64, p: f64) -> Result<PolarizationDensity> {
    check_rates(gamma_rad, gamma, delta)?;
    check_probability("P", p)?;
    let mut rho = Matrix4::<Complex64>::identity().scale(0.25 * (1.0 - p));
    rho[(XX, XX)] += 0.5 * p;
    rho[(YY, YY)] += 0.5 * p;
    let c = coherence(delta, gamma_rad, gamma) * (0.5 * p);
    rho[(XX, YY)] = c;
    rho[(YY, XX)] = c.conj();
    PolarizationDensity::new(rho)
}

/// Entanglement of formation in ebits for concurrence `c`.
pub fn entropy_from_concurrence(c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let x = 0.5 + 0.5 * (1.0 - c.min(1.0).powi(2)).sqrt();
    let h = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
    h(x) + h(1.0 - x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub concurrence: f64,
    pub entropy: f64,
    pub pair_fraction: f64,
}

impl EntanglementReport {
    pub fn from_concurrence(concurrence: f64, pair_fraction: f64) -> Self {
        let concurrence = concurrence.clamp(0.0, 1.0);
        Self {
            concurrence,
            entropy: entropy_from_concurrence(concurrence),
            pair_fraction,
        }
    }

    /// Report for an arbitrary state using the general concurrence.
    pub fn from_density(rho: &PolarizationDensity, pair_fraction: f64) -> Self {
        Self::from_concurrence(wootters_concurrence(rho), pair_fraction)
    }
}

/// Closed-form concurrence and entropy of [`cascade_density`].
pub fn closed_concurrence_entropy(delta: f64, gamma_rad: f64, gamma: f64, p: f64) -> Result<EntanglementReport> {
    check_rates(gamma_rad, gamma, delta)?;
    check_probability("P", p)?;
    let c = p * coherence(delta, gamma_rad, gamma).norm() - 0.5 * (1.0 - p);
    Ok(EntanglementReport::from_concurrence(c.max(0.0), p))
}

/// Two-qubit concurrence from the spin-flipped state.
///
/// With `ρ = V V†` the square roots of the eigenvalues of `ρ ρ̃` are the
/// singular values of `Vᵀ (σ_y⊗σ_y) V`. Eigenvalues of `ρ` below `1e-13`
/// are treated as zero.
pub fn wootters_concurrence(rho: &PolarizationDensity) -> f64 {
    // σ_y ⊗ σ_y: anti-diagonal with signs (-1, 1, 1, -1)
    let flip = Matrix4::from_fn(|i, j| {
        if i + j == 3 {
            Complex64::from(if i == 0 || i == 3 { -1.0 } else { 1.0 })
        } else {
            Complex64::from(0.0)
        }
    });
    let eig = rho.matrix().symmetric_eigen();
    let kept: Vec<usize> = (0..4).filter(|&i| eig.eigenvalues[i] > 1e-13).collect();
    let v = DMatrix::from_fn(4, kept.len(), |r, c| {
        eig.eigenvectors[(r, kept[c])] * eig.eigenvalues[kept[c]].sqrt()
    });
    let flip = DMatrix::from_fn(4, 4, |r, c| flip[(r, c)]);
    let t = v.transpose() * flip * &v;
    let mut lambda: Vec<f64> = t.singular_values().iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    match lambda.split_first() {
        Some((first, rest)) => (first - rest.iter().sum::<f64>()).max(0.0),
        None => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairMode {
    Unfiltered,
    /// Photons of transitions 3 and 4 are rejected.
    Filtered,
}

impl PairMode {
    pub fn name(self) -> &'static str {
        match self {
            PairMode::Unfiltered => "unfiltered",
            PairMode::Filtered => "filtered",
        }
    }
}

/// Fraction `P` of detected photon-2 events belonging to an undisturbed pair.
pub fn pair_fraction(mode: PairMode, sch: &LevelScheme, p: &DotParameters) -> Result<f64> {
    if !sch.entanglement_capable {
        return Err(Error::NotEntanglementCapable(sch.scheme_class));
    }
    check_rates(p.rad_rate, p.tunnel_rate, 0.0)?;
    let star = no_tunnel_pair_fraction(p);
    match mode {
        PairMode::Unfiltered => Ok(star),
        PairMode::Filtered => {
            let g = build_rate_graph(p, sch, true)?;
            let p12 = cascade_probabilities(&g, Level::Biexciton)?.p1(2);
            if p12 <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "P12",
                    value: p12,
                    reason: "no transition-2 photon follows transition 1",
                });
            }
            match sch.scheme_class {
                SchemeClass::FlatCylindrical => Ok(star / p12),
                SchemeClass::TallCylindrical => Ok(3.0 * star / (2.0 * p12 + star)),
                other => Err(Error::UnsupportedScheme(other)),
            }
        }
    }
}

/// Pair fraction, concurrence and entropy for a dot with exciton splitting `delta`.
pub fn entanglement_report(
    p: &DotParameters,
    sch: &LevelScheme,
    mode: PairMode,
    delta: f64,
) -> Result<EntanglementReport> {
    let frac = pair_fraction(mode, sch, p)?;
    closed_concurrence_entropy(delta, p.rad_rate, p.tunnel_rate, frac)
}
