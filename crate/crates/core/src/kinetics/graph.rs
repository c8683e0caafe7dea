use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scheme::{DotParameters, Level, LevelScheme, SchemeClass};
use crate::thermal::fermi_occupations;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Tunnel,
    /// Photon on cascade transition 1..=4.
    Photon(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: Level,
    pub target: Level,
    pub rate: f64,
    pub kind: EdgeKind,
}

/// Tunneling rate per single-particle state, into and out of the dot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelRates {
    pub electron_in: f64,
    pub electron_out: f64,
    pub hole_in: f64,
    pub hole_out: f64,
}

impl TunnelRates {
    pub fn symmetric(gamma: f64) -> Self {
        Self {
            electron_in: gamma,
            electron_out: gamma,
            hole_in: gamma,
            hole_out: gamma,
        }
    }
}

/// Continuous-time Markov chain over the lumped levels.
///
/// `generator[(i, j)]` is the rate from level `j` to level `i`; columns sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RateGraph {
    pub scheme: SchemeClass,
    /// Lumped levels with their number of member states.
    pub levels: Vec<(Level, u8)>,
    pub edges: Vec<Edge>,
    pub generator: DMatrix<f64>,
}

impl RateGraph {
    pub fn index(&self, level: Level) -> usize {
        self.levels
            .iter()
            .position(|(l, _)| *l == level)
            .expect("every lumped level is present")
    }

    /// Generator in which photon edges only remove probability.
    pub fn loss_only_generator(&self) -> DMatrix<f64> {
        let mut q = self.generator.clone();
        for e in self.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Photon(_))) {
            q[(self.index(e.target), self.index(e.source))] -= e.rate;
        }
        q
    }

    pub fn outgoing(&self, level: Level) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.source == level)
    }

    pub fn photon_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::Photon(_)))
    }
}

fn level_of(n_e: u8, n_h: u8) -> Level {
    match (n_e, n_h) {
        (0, 0) => Level::Ground,
        (1, 0) => Level::Electron,
        (0, 1) => Level::Hole,
        (2, 0) => Level::TwoElectrons,
        (0, 2) => Level::TwoHoles,
        (2, 1) => Level::NegativeTrion,
        (1, 2) => Level::PositiveTrion,
        (2, 2) => Level::Biexciton,
        _ => unreachable!("(1, 1) is split into bright and dark excitons"),
    }
}

/// Builds the lumped rate graph of a flat or tall cylindrical dot.
///
/// Each empty single-particle state fills at the in-rate and each occupied
/// one empties at the out-rate; at resonance both equal `γ`. Jumps into the
/// one-exciton multiplet are shared between bright and dark members in
/// proportion to their number.
pub fn build_rate_graph(p: &DotParameters, sch: &LevelScheme, at_resonance: bool) -> Result<RateGraph> {
    let tunnel = if at_resonance {
        TunnelRates::symmetric(p.tunnel_rate)
    } else {
        let occ = fermi_occupations(p)?;
        let g = p.tunnel_rate;
        TunnelRates {
            electron_in: 2.0 * g * occ.p_e,
            electron_out: 2.0 * g * (1.0 - occ.p_e),
            hole_in: 2.0 * g * occ.p_h,
            hole_out: 2.0 * g * (1.0 - occ.p_h),
        }
    };
    build_rate_graph_with(p, sch, tunnel)
}

pub fn build_rate_graph_with(p: &DotParameters, sch: &LevelScheme, tunnel: TunnelRates) -> Result<RateGraph> {
    if !matches!(
        sch.scheme_class,
        SchemeClass::FlatCylindrical | SchemeClass::TallCylindrical
    ) {
        return Err(Error::UnsupportedScheme(sch.scheme_class));
    }
    let n_bright = sch.bright_excitons.len();
    let bright_share = n_bright as f64 / 4.0;
    let levels: Vec<(Level, u8)> = Level::ALL
        .iter()
        .map(|&l| {
            let mult = match l {
                Level::BrightExciton => n_bright as u8,
                Level::DarkExciton => (4 - n_bright) as u8,
                other => {
                    let (n_e, n_h) = other.occupation();
                    if (n_e + n_h) % 2 == 1 {
                        2
                    } else {
                        1
                    }
                }
            };
            (l, mult)
        })
        .collect();

    let mut edges = Vec::new();
    let mut push = |source: Level, n_e: u8, n_h: u8, rate: f64| {
        if rate <= 0.0 {
            return;
        }
        if (n_e, n_h) == (1, 1) {
            for (target, share) in [
                (Level::BrightExciton, bright_share),
                (Level::DarkExciton, 1.0 - bright_share),
            ] {
                if share > 0.0 {
                    edges.push(Edge {
                        source,
                        target,
                        rate: rate * share,
                        kind: EdgeKind::Tunnel,
                    });
                }
            }
        } else {
            edges.push(Edge {
                source,
                target: level_of(n_e, n_h),
                rate,
                kind: EdgeKind::Tunnel,
            });
        }
    };
    for &(source, _) in &levels {
        let (n_e, n_h) = source.occupation();
        if n_e < 2 {
            push(source, n_e + 1, n_h, f64::from(2 - n_e) * tunnel.electron_in);
        }
        if n_e > 0 {
            push(source, n_e - 1, n_h, f64::from(n_e) * tunnel.electron_out);
        }
        if n_h < 2 {
            push(source, n_e, n_h + 1, f64::from(2 - n_h) * tunnel.hole_in);
        }
        if n_h > 0 {
            push(source, n_e, n_h - 1, f64::from(n_h) * tunnel.hole_out);
        }
    }

    let total = sch.total_bright_rate(p);
    let trion = sch.trion_rate(p);
    for (source, target, rate, k) in [
        (Level::Biexciton, Level::BrightExciton, total, 1),
        (Level::BrightExciton, Level::Ground, total / n_bright as f64, 2),
        (Level::PositiveTrion, Level::Hole, trion, 3),
        (Level::NegativeTrion, Level::Electron, trion, 4),
    ] {
        if rate > 0.0 {
            edges.push(Edge {
                source,
                target,
                rate,
                kind: EdgeKind::Photon(k),
            });
        }
    }

    let n = levels.len();
    let idx = |l: Level| levels.iter().position(|(x, _)| *x == l).unwrap();
    let mut generator = DMatrix::zeros(n, n);
    for e in &edges {
        let (i, j) = (idx(e.target), idx(e.source));
        generator[(i, j)] += e.rate;
        generator[(j, j)] -= e.rate;
    }
    Ok(RateGraph {
        scheme: sch.scheme_class,
        levels,
        edges,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64) -> DotParameters {
        DotParameters {
            rad_rate: 1.0,
            rad_rate_2: 1.0,
            tunnel_rate: gamma,
            ..DotParameters::default()
        }
    }

    #[test]
    fn no_tunneling_leaves_only_the_cascade() {
        let g = build_rate_graph(&params(0.0), &LevelScheme::flat(), true).unwrap();
        assert!(g.edges.iter().all(|e| matches!(e.kind, EdgeKind::Photon(_))));
        let cascade: Vec<_> = g
            .edges
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::Photon(1 | 2)))
            .map(|e| (e.source, e.target))
            .collect();
        assert_eq!(
            cascade,
            vec![
                (Level::Biexciton, Level::BrightExciton),
                (Level::BrightExciton, Level::Ground)
            ]
        );
    }

    #[test]
    fn flat_rates_are_thin_or_thick() {
        let (rad, gamma) = (1.0, 0.37);
        let g = build_rate_graph(&params(gamma), &LevelScheme::flat(), true).unwrap();
        for e in &g.edges {
            let ok = [gamma, 2.0 * gamma, rad, 2.0 * rad]
                .iter()
                .any(|r| (e.rate - r).abs() < 1e-15);
            assert!(ok, "unexpected rate {} on {:?}", e.rate, e);
        }
    }

    #[test]
    fn tunnel_edges_change_one_carrier() {
        let g = build_rate_graph(&params(0.2), &LevelScheme::tall(), true).unwrap();
        for e in g.edges.iter().filter(|e| e.kind == EdgeKind::Tunnel) {
            let (a, b) = (e.source.occupation(), e.target.occupation());
            let d = (a.0 as i32 - b.0 as i32).abs() + (a.1 as i32 - b.1 as i32).abs();
            assert_eq!(d, 1, "{e:?}");
        }
    }

    #[test]
    fn exciton_multiplet_loses_four_gamma() {
        let gamma = 0.3;
        for sch in [LevelScheme::flat(), LevelScheme::tall()] {
            let g = build_rate_graph(&params(gamma), &sch, true).unwrap();
            for x in [Level::BrightExciton, Level::DarkExciton] {
                let out: f64 = g.outgoing(x).filter(|e| e.kind == EdgeKind::Tunnel).map(|e| e.rate).sum();
                assert!((out - 4.0 * gamma).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn columns_sum_to_zero() {
        let g = build_rate_graph(&params(0.7), &LevelScheme::tall(), true).unwrap();
        for j in 0..g.generator.ncols() {
            assert!(g.generator.column(j).sum().abs() < 1e-12);
        }
        let q = g.loss_only_generator();
        let bx = g.index(Level::BrightExciton);
        assert!((q.column(bx).sum() + 2.0 * 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn off_resonance_rates_follow_occupations() {
        let mut p = params(1.0);
        p.bias += 2.0 * p.kt;
        let g = build_rate_graph(&p, &LevelScheme::flat(), false).unwrap();
        let into: f64 = g
            .outgoing(Level::Ground)
            .filter(|e| e.target == Level::Electron)
            .map(|e| e.rate)
            .sum();
        let out: f64 = g
            .outgoing(Level::Electron)
            .filter(|e| e.target == Level::Ground)
            .map(|e| e.rate)
            .sum();
        assert!(into > 2.0 * out);
    }

    #[test]
    fn unsupported_scheme() {
        let s = crate::scheme::classify_scheme(
            crate::scheme::HalfInt::THREE_HALVES,
            crate::scheme::HalfInt::THREE_HALVES,
            true,
            crate::scheme::Symmetry::Axial,
        );
        assert!(matches!(
            build_rate_graph(&params(0.1), &s, true),
            Err(Error::UnsupportedScheme(SchemeClass::HighM))
        ));
    }
}
