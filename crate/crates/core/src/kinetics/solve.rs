use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::graph::{EdgeKind, RateGraph};
use super::CascadeProbabilities;
use crate::error::{Error, Result};
use crate::scheme::Level;
use crate::thermal::MeanTime;

/// Levels reachable from `initial` through tunnel edges.
fn transient_set(g: &RateGraph, initial: Level) -> Vec<Level> {
    let mut seen = vec![initial];
    let mut stack = vec![initial];
    while let Some(l) = stack.pop() {
        for e in g.outgoing(l).filter(|e| e.kind == EdgeKind::Tunnel) {
            if !seen.contains(&e.target) {
                seen.push(e.target);
                stack.push(e.target);
            }
        }
    }
    seen.sort();
    seen
}

/// Probability that the first photon after starting in `initial` is on
/// transition `k` (`[P_1, P_2, P_3, P_4]`).
///
/// The expected occupation time of each level follows from one solve
/// `Q_loss x = -e_initial` restricted to the levels reachable by tunneling.
pub fn emission_probabilities(g: &RateGraph, initial: Level) -> Result<[f64; 4]> {
    let set = transient_set(g, initial);
    let q = g.loss_only_generator();
    let n = set.len();
    let sub = DMatrix::from_fn(n, n, |i, j| q[(g.index(set[i]), g.index(set[j]))]);
    let mut rhs = DVector::zeros(n);
    let start = set.iter().position(|&l| l == initial).unwrap();
    rhs[start] = -1.0;
    let singular = |detail: String| Error::SingularGenerator { initial, detail };
    let occupancy = sub
        .lu()
        .solve(&rhs)
        .ok_or_else(|| singular(format!("levels {set:?} contain a closed class without photon loss")))?;
    if occupancy.iter().any(|x| !x.is_finite() || *x < -1e-9) {
        return Err(singular(format!("occupation times {occupancy:?} are not finite and non-negative")));
    }
    let mut probs = [0.0; 4];
    for e in g.photon_edges() {
        if let (EdgeKind::Photon(k), Some(i)) = (e.kind, set.iter().position(|&l| l == e.source)) {
            probs[usize::from(k) - 1] += e.rate * occupancy[i];
        }
    }
    Ok(probs)
}

/// `P_k` from `initial` and `P_1k` from the level reached by a transition-1 photon.
pub fn cascade_probabilities(g: &RateGraph, initial: Level) -> Result<CascadeProbabilities> {
    let first = emission_probabilities(g, initial)?;
    let after = g
        .photon_edges()
        .find(|e| e.kind == EdgeKind::Photon(1))
        .map(|e| e.target)
        .unwrap_or(Level::BrightExciton);
    let after_first = emission_probabilities(g, after)?;
    Ok(CascadeProbabilities { first, after_first })
}

/// Stationary distribution of the full generator (photon edges included).
pub fn stationary_distribution(g: &RateGraph) -> Result<DVector<f64>> {
    let n = g.levels.len();
    let mut a = g.generator.clone();
    for j in 0..n {
        a[(0, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[0] = 1.0;
    let p = a.lu().solve(&rhs).ok_or_else(|| Error::SingularGenerator {
        initial: Level::Ground,
        detail: "full generator has no unique stationary state".into(),
    })?;
    if p.iter().any(|x| !x.is_finite() || *x < -1e-12) {
        return Err(Error::SingularGenerator {
            initial: Level::Ground,
            detail: format!("stationary vector {p:?} is not a distribution"),
        });
    }
    Ok(p)
}

/// Total photon emission rate in the stationary state.
pub fn stationary_photon_flux(g: &RateGraph) -> Result<f64> {
    let p = stationary_distribution(g)?;
    Ok(g.photon_edges().map(|e| e.rate * p[g.index(e.source)]).sum())
}

/// Mean time between subsequent photons in the stationary state, the inverse
/// of the total stationary photon flux.
pub fn mean_interphoton_time_steady(g: &RateGraph) -> Result<MeanTime> {
    if !g.edges.iter().any(|e| e.kind == EdgeKind::Tunnel) {
        // without tunneling the dot empties after one cascade
        return Ok(MeanTime::Never);
    }
    Ok(MeanTime::from_rate(stationary_photon_flux(g)?))
}

pub fn generator_eigenvalues(g: &RateGraph) -> Vec<Complex64> {
    g.generator.complex_eigenvalues().iter().copied().collect()
}
