//! Pair state when the exciton-to-ground photon couples to a misaligned cavity.
//!
//! The cavity enhances decay into one linear polarization `v` and suppresses
//! the orthogonal one `u` by `cos²θ`. With `u = x cosφ + y sinφ` and
//! `v = y cosφ − x sinφ`, photon 2 evolves under
//! `A = −iH − G/2` with `H = Δ|x⟩⟨x|` and `G = Γcos²θ|u⟩⟨u| + Γ|v⟩⟨v|`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::entangle::{wootters_concurrence, EntanglementReport, PolarizationDensity};
use crate::error::{Error, Result};
use crate::quad;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    /// Misalignment polar angle in `[0, π/2]`.
    pub theta: f64,
    pub phi: f64,
    /// Γ
    pub rad_rate: f64,
    /// Δ
    pub delta: f64,
    /// γ
    pub tunnel_rate: f64,
}

impl CavityGeometry {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| Err(Error::InvalidParameter { name, value, reason });
        if !(0.0..=FRAC_PI_2 + 1e-15).contains(&self.theta) {
            return bad("theta", self.theta, "misalignment angle must lie in [0, pi/2]");
        }
        if !self.phi.is_finite() {
            return bad("phi", self.phi, "azimuth must be finite");
        }
        if !(self.rad_rate > 0.0 && self.rad_rate.is_finite()) {
            return bad("Gamma", self.rad_rate, "radiative rate must be positive and finite");
        }
        if !(self.tunnel_rate >= 0.0 && self.tunnel_rate.is_finite()) {
            return bad("gamma", self.tunnel_rate, "tunneling rate must be non-negative and finite");
        }
        if !self.delta.is_finite() {
            return bad("Delta", self.delta, "splitting must be finite");
        }
        if self.theta.cos() <= 1e-12 {
            return Err(Error::DegenerateCavityMode { theta: self.theta });
        }
        Ok(())
    }

    fn uv(&self) -> (Matrix2<C>, Matrix2<C>) {
        let (s, c) = self.phi.sin_cos();
        let u = nalgebra::Vector2::new(c, s);
        let v = nalgebra::Vector2::new(-s, c);
        ((u * u.transpose()).map(C::from), (v * v.transpose()).map(C::from))
    }

    /// `(A, √G)` on the photon-2 polarization space.
    fn operators(&self) -> (Matrix2<C>, Matrix2<C>) {
        let (pu, pv) = self.uv();
        let cos2 = self.theta.cos().powi(2);
        let g = pu.scale(self.rad_rate * cos2) + pv.scale(self.rad_rate);
        let sqrt_g = pu.scale((self.rad_rate * cos2).sqrt()) + pv.scale(self.rad_rate.sqrt());
        let mut h = Matrix2::zeros();
        h[(0, 0)] = C::from(self.delta);
        let a = h * C::new(0.0, -1.0) - g.scale(0.5);
        (a, sqrt_g)
    }
}

/// Density operator together with the weight `P` of its undisturbed-pair part.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityState {
    pub density: PolarizationDensity,
    pub pair_fraction: f64,
}

/// `I ⊗ m` on the two-photon space.
fn on_second(m: &Matrix2<C>) -> Matrix4<C> {
    Matrix4::from_fn(|i, j| if i / 2 == j / 2 { m[(i % 2, j % 2)] } else { C::from(0.0) })
}

fn bell() -> Vector4<C> {
    let r = C::from(0.5f64.sqrt());
    Vector4::new(r, C::from(0.0), C::from(0.0), r)
}

/// Integral term by modal decomposition of `A`; `None` if its eigenvalues nearly coincide.
fn integral_modal(geo: &CavityGeometry) -> Option<Matrix4<C>> {
    let (a, sqrt_g) = geo.operators();
    let half_tr = (a[(0, 0)] + a[(1, 1)]) * 0.5;
    let half_diff = (a[(0, 0)] - a[(1, 1)]) * 0.5;
    let disc = (half_diff * half_diff + a[(0, 1)] * a[(1, 0)]).sqrt();
    let lambda = [half_tr + disc, half_tr - disc];
    let scale = geo.rad_rate + geo.delta.abs();
    if (lambda[0] - lambda[1]).norm() < 1e-6 * scale {
        return None;
    }
    let id = Matrix2::<C>::identity();
    let proj = [
        (a - id * lambda[1]) / (lambda[0] - lambda[1]),
        (a - id * lambda[0]) / (lambda[1] - lambda[0]),
    ];
    let psi = bell();
    let phi: Vec<Vector4<C>> = proj.iter().map(|pk| on_second(&(sqrt_g * pk)) * psi).collect();
    let damping = C::from(4.0 * geo.tunnel_rate);
    let mut rho = Matrix4::zeros();
    for k in 0..2 {
        for l in 0..2 {
            rho += phi[k] * phi[l].adjoint() / (damping - lambda[k] - lambda[l].conj());
        }
    }
    Some(rho)
}

/// Integral term from the Lyapunov equation `M X + X M† = −σ`, `M = I⊗A − 2γ`.
fn integral_lyapunov(geo: &CavityGeometry) -> Result<Matrix4<C>> {
    let (a, sqrt_g) = geo.operators();
    let m = on_second(&a) - Matrix4::identity() * C::from(2.0 * geo.tunnel_rate);
    let id = Matrix4::<C>::identity();
    let op: SMatrix<C, 16, 16> = id.kronecker(&m) + m.conjugate().kronecker(&id);
    let psi = bell();
    let sigma = psi * psi.adjoint();
    let rhs = SMatrix::<C, 16, 1>::from_iterator(sigma.iter().map(|z| -z));
    let x = op
        .lu()
        .solve(&rhs)
        .ok_or(Error::DegenerateCavityMode { theta: geo.theta })?;
    let x = Matrix4::from_column_slice(x.as_slice());
    let s = on_second(&sqrt_g);
    Ok(s * x * s)
}

fn assemble(integral: Matrix4<C>) -> Result<CavityState> {
    let integral = (integral + integral.adjoint()) * C::from(0.5);
    let p = integral.trace().re;
    let rho = integral + Matrix4::identity() * C::from(0.25 * (1.0 - p));
    Ok(CavityState {
        density: PolarizationDensity::new(rho)?,
        pair_fraction: p,
    })
}

/// Pair state by modal decomposition of the photon-2 evolution, falling back
/// to a Lyapunov solve when the two modes are degenerate.
pub fn cavity_state(geo: &CavityGeometry) -> Result<CavityState> {
    geo.validate()?;
    let integral = match integral_modal(geo) {
        Some(m) => m,
        None => integral_lyapunov(geo)?,
    };
    assemble(integral)
}

pub fn cavity_density(geo: &CavityGeometry) -> Result<PolarizationDensity> {
    cavity_state(geo).map(|s| s.density)
}

/// `e^{M}` by scaling and squaring of a truncated Taylor series.
fn expm2(m: &Matrix2<C>) -> Matrix2<C> {
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / C::from(2f64.powi(squarings as i32));
    let mut term = Matrix2::<C>::identity();
    let mut sum = term;
    for k in 1..=18 {
        term = term * scaled / C::from(k as f64);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Same state by direct adaptive quadrature of the time integral.
pub fn cavity_state_quadrature(geo: &CavityGeometry, rel_tol: f64) -> Result<CavityState> {
    geo.validate()?;
    let (a, sqrt_g) = geo.operators();
    let psi = bell();
    let damping = 4.0 * geo.tunnel_rate;
    let integrand = |u: f64| -> Vec<f64> {
        let t = u / (1.0 - u);
        let jac = 1.0 / ((1.0 - u) * (1.0 - u));
        let phi = on_second(&(sqrt_g * expm2(&(a * C::from(t))))) * psi;
        let w = (-damping * t).exp() * jac;
        let z = phi * phi.adjoint();
        if !w.is_finite() || w == 0.0 {
            return vec![0.0; 32];
        }
        z.iter().flat_map(|c| [c.re * w, c.im * w]).collect()
    };
    let flat = quad::integrate(integrand, 0.0, 1.0, rel_tol, 1e-15)?;
    let integral = Matrix4::from_iterator(flat.chunks(2).map(|p| C::new(p[0], p[1])));
    assemble(integral)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityPoint {
    pub geometry: CavityGeometry,
    pub report: EntanglementReport,
}

/// Concurrence and entropy at every geometry of the grid, in input order.
pub fn cavity_entanglement_sweep(grid: &[CavityGeometry]) -> Result<Vec<CavityPoint>> {
    grid.par_iter()
        .map(|geo| {
            let state = cavity_state(geo)?;
            Ok(CavityPoint {
                geometry: *geo,
                report: EntanglementReport::from_concurrence(wootters_concurrence(&state.density), state.pair_fraction),
            })
        })
        .collect()
}
