//! Exact jump sampling of the rate graph.
//!
//! Every trajectory draws from its own ChaCha stream derived from the master
//! seed and its index, so results do not depend on how trajectories are
//! distributed over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::graph::{EdgeKind, RateGraph};
use crate::error::{Error, Result};
use crate::scheme::{Level, SchemeClass};

/// Linear polarization of a cascade photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonRecord {
    pub time: f64,
    /// Cascade transition 1..=4.
    pub transition: u8,
    /// Set for transitions 1 and 2 of flat dots.
    pub polarization: Option<Polarization>,
}

/// Piecewise-constant multiplier on every tunneling rate. After the last
/// segment the multiplier returns to 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaSchedule {
    /// `(duration, multiplier)` segments starting at t = 0.
    pub segments: Vec<(f64, f64)>,
}

impl GammaSchedule {
    fn multiplier_at(&self, t: f64) -> (f64, Option<f64>) {
        let mut start = 0.0;
        for &(duration, mult) in &self.segments {
            let end = start + duration;
            if t < end {
                return (mult, Some(end));
            }
            start = end;
        }
        (1.0, None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions {
    pub trajectories: usize,
    pub seed: u64,
    /// Photons recorded per trajectory before it stops.
    pub photons_per_trajectory: usize,
    pub schedule: Option<GammaSchedule>,
    pub keep_streams: bool,
    /// Independent stationary chains used for the interphoton-time estimate.
    pub steady_chains: usize,
    /// Photons per stationary chain; `0` uses `trajectories / steady_chains`.
    pub steady_photons_per_chain: usize,
    pub steady_burn_in: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            trajectories: 100_000,
            seed: 0,
            photons_per_trajectory: 2,
            schedule: None,
            keep_streams: false,
            steady_chains: 64,
            steady_photons_per_chain: 0,
            steady_burn_in: 50,
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn proportion(hits: usize, samples: usize) -> Self {
        let mean = if samples > 0 { hits as f64 / samples as f64 } else { f64::NAN };
        Self {
            mean,
            std_error: (mean * (1.0 - mean) / samples as f64).sqrt(),
            samples,
        }
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            std_error: (var / n).sqrt(),
            samples: xs.len(),
        }
    }

    /// Distance from `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == value {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - value).abs() / self.std_error
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats {
    pub trajectories: usize,
    /// Photon streams in trajectory order (empty unless requested).
    pub streams: Vec<Vec<PhotonRecord>>,
    /// Empirical `P_k` of the first photon.
    pub first: [Estimate; 4],
    /// Empirical `P_1k` over trajectories whose first photon is on transition 1.
    pub after_first: [Estimate; 4],
    /// Fraction of 1-then-2 pairs with equal polarization (flat dots).
    pub polarization_agreement: Option<Estimate>,
    /// Stationary mean time between photons (requires tunneling).
    pub mean_interphoton: Option<Estimate>,
}

struct Compiled {
    levels: Vec<Level>,
    /// Per level: `(target, rate, kind)`.
    out: Vec<Vec<(usize, f64, EdgeKind)>>,
    polarized: bool,
}

impl Compiled {
    fn new(g: &RateGraph) -> Result<Self> {
        let levels: Vec<Level> = g.levels.iter().map(|(l, _)| *l).collect();
        let mut out = vec![Vec::new(); levels.len()];
        for e in &g.edges {
            if !(e.rate.is_finite() && e.rate >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "rate",
                    value: e.rate,
                    reason: "edge rates must be finite and non-negative",
                });
            }
            out[g.index(e.source)].push((g.index(e.target), e.rate, e.kind));
        }
        Ok(Self {
            levels,
            out,
            polarized: g.scheme == SchemeClass::FlatCylindrical,
        })
    }
}

fn polarization(rng: &mut ChaCha8Rng) -> Polarization {
    if rng.random::<bool>() {
        Polarization::X
    } else {
        Polarization::Y
    }
}

fn exp_sample(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return -u.ln() / rate;
        }
    }
}

struct Walker<'a> {
    graph: &'a Compiled,
    schedule: Option<&'a GammaSchedule>,
    level: usize,
    time: f64,
    /// Polarization carried by the bright exciton since the last transition-1 photon.
    memory: Option<Polarization>,
}

impl Walker<'_> {
    /// Advances to the next photon.
    fn next_photon(&mut self, rng: &mut ChaCha8Rng, trajectory: u64) -> Result<PhotonRecord> {
        loop {
            let (mult, boundary) = self
                .schedule
                .map_or((1.0, None), |s| s.multiplier_at(self.time));
            let edges = &self.graph.out[self.level];
            let rate_of = |&(_, r, k): &(usize, f64, EdgeKind)| {
                if k == EdgeKind::Tunnel {
                    r * mult
                } else {
                    r
                }
            };
            let total: f64 = edges.iter().map(rate_of).sum();
            if total <= 0.0 {
                match boundary {
                    Some(b) => {
                        self.time = b;
                        continue;
                    }
                    None => {
                        return Err(Error::StalledTrajectory {
                            trajectory,
                            level: self.graph.levels[self.level],
                            time: self.time,
                        })
                    }
                }
            }
            let dt = exp_sample(rng, total);
            if let Some(b) = boundary {
                if self.time + dt >= b {
                    self.time = b;
                    continue;
                }
            }
            self.time += dt;
            let mut pick = rng.random::<f64>() * total;
            let mut chosen = edges.len() - 1;
            for (i, e) in edges.iter().enumerate() {
                let r = rate_of(e);
                if pick < r {
                    chosen = i;
                    break;
                }
                pick -= r;
            }
            let (target, _, kind) = edges[chosen];
            self.level = target;
            match kind {
                EdgeKind::Tunnel => self.memory = None,
                EdgeKind::Photon(k) => {
                    let pol = if self.graph.polarized {
                        match k {
                            1 => {
                                let p = polarization(rng);
                                self.memory = Some(p);
                                Some(p)
                            }
                            2 => Some(self.memory.take().unwrap_or_else(|| polarization(rng))),
                            _ => None,
                        }
                    } else {
                        None
                    };
                    return Ok(PhotonRecord {
                        time: self.time,
                        transition: k,
                        polarization: pol,
                    });
                }
            }
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const STEADY_STREAM_OFFSET: u64 = 1 << 48;

/// Samples `opts.trajectories` independent photon streams from `initial`
/// and a set of stationary chains, returning empirical emission statistics.
pub fn simulate_trajectories(g: &RateGraph, initial: Level, opts: &SimulationOptions) -> Result<TrajectoryStats> {
    if opts.trajectories == 0 {
        return Err(Error::InvalidParameter {
            name: "trajectories",
            value: 0.0,
            reason: "at least one trajectory is required",
        });
    }
    let compiled = Compiled::new(g)?;
    let start = g.index(initial);
    let n_photons = opts.photons_per_trajectory.max(1);

    let streams: Vec<Vec<PhotonRecord>> = (0..opts.trajectories as u64)
        .into_par_iter()
        .map(|id| {
            let mut rng = rng_for(opts.seed, id);
            let mut walker = Walker {
                graph: &compiled,
                schedule: opts.schedule.as_ref(),
                level: start,
                time: 0.0,
                memory: None,
            };
            (0..n_photons)
                .map(|_| walker.next_photon(&mut rng, id))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut first = [0usize; 4];
    let mut after = [0usize; 4];
    let mut pairs = 0usize;
    let mut agree = 0usize;
    for s in &streams {
        first[usize::from(s[0].transition) - 1] += 1;
        if s[0].transition == 1 {
            if let Some(second) = s.get(1) {
                after[usize::from(second.transition) - 1] += 1;
                if second.transition == 2 {
                    if let (Some(a), Some(b)) = (s[0].polarization, second.polarization) {
                        pairs += 1;
                        agree += usize::from(a == b);
                    }
                }
            }
        }
    }
    let n = streams.len();
    let n_after: usize = after.iter().sum();
    let first = first.map(|c| Estimate::proportion(c, n));
    let after_first = after.map(|c| Estimate::proportion(c, n_after));
    let polarization_agreement = (pairs > 0).then(|| Estimate::proportion(agree, pairs));

    let has_tunneling = g.edges.iter().any(|e| e.kind == EdgeKind::Tunnel);
    let mean_interphoton = if has_tunneling && opts.steady_chains >= 2 {
        Some(steady_interphoton(&compiled, g, opts)?)
    } else {
        None
    };

    Ok(TrajectoryStats {
        trajectories: n,
        streams: if opts.keep_streams { streams } else { Vec::new() },
        first,
        after_first,
        polarization_agreement,
        mean_interphoton,
    })
}

fn steady_interphoton(compiled: &Compiled, g: &RateGraph, opts: &SimulationOptions) -> Result<Estimate> {
    let chains = opts.steady_chains;
    let per_chain = if opts.steady_photons_per_chain > 0 {
        opts.steady_photons_per_chain
    } else {
        (opts.trajectories / chains).max(100)
    };
    let start = g.index(Level::Ground);
    let means: Vec<f64> = (0..chains as u64)
        .into_par_iter()
        .map(|c| {
            let id = STEADY_STREAM_OFFSET + c;
            let mut rng = rng_for(opts.seed, id);
            let mut walker = Walker {
                graph: compiled,
                schedule: None,
                level: start,
                time: 0.0,
                memory: None,
            };
            for _ in 0..opts.steady_burn_in {
                walker.next_photon(&mut rng, id)?;
            }
            let t0 = walker.time;
            for _ in 0..per_chain {
                walker.next_photon(&mut rng, id)?;
            }
            Ok((walker.time - t0) / per_chain as f64)
        })
        .collect::<Result<_>>()?;
    Ok(Estimate::from_samples(&means))
}
