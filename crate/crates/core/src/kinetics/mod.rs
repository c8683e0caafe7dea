//! Classical jump statistics of the dot after biexciton preparation.
//!
//! Multiplet members are lumped into levels; tunneling and photon emission
//! are incoherent jumps between them. Emission probabilities follow from a
//! linear solve against the generator with photon jumps treated as pure loss,
//! steady-state quantities from the null vector of the full generator, and
//! [`simulate`] samples the same chain as an independent check.

mod closed_form;
mod graph;
pub mod simulate;
mod solve;

pub use closed_form::{
    cascade_closed_form, flat_cascade, flat_mean_interphoton_time, mean_interphoton_time,
    no_tunnel_pair_fraction, tall_cascade, tall_mean_interphoton_time,
};
pub use graph::{build_rate_graph, build_rate_graph_with, Edge, EdgeKind, RateGraph, TunnelRates};
pub use simulate::{
    simulate_trajectories, Estimate, GammaSchedule, PhotonRecord, Polarization, SimulationOptions,
    TrajectoryStats,
};
pub use solve::{
    cascade_probabilities, emission_probabilities, generator_eigenvalues,
    mean_interphoton_time_steady, stationary_distribution, stationary_photon_flux,
};

/// Probabilities of the first photon after preparation (`first[k-1] = P_k`)
/// and of the photon following a transition-1 photon (`after_first[k-1] = P_1k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeProbabilities {
    pub first: [f64; 4],
    pub after_first: [f64; 4],
}

impl CascadeProbabilities {
    /// `P_k`, `k` in 1..=4.
    pub fn p(&self, k: usize) -> f64 {
        self.first[k - 1]
    }

    /// `P_1k`, `k` in 1..=4.
    pub fn p1(&self, k: usize) -> f64 {
        self.after_first[k - 1]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.first
            .iter()
            .chain(&self.after_first)
            .zip(other.first.iter().chain(&other.after_first))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
