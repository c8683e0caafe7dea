//! Dot parameters, the sixteen-state configuration space and the optical
//! selection rules of cylindrical dots.
//!
//! A dot state is labelled by the number of electrons `n_e` in the upper
//! level, the number of holes `n_h` in the lower level and, for the
//! one-exciton multiplet only, the pair type `s` (`+1` for `|eh>`, `-1` for
//! `|e h̄>`) and the time-reversal parity `t`. All energies are measured from
//! the quasi-particle vacuum and are dimensionless (units of the radiative
//! rate) unless a caller rescales them for display.

use std::fmt;

use crate::error::{Error, Result};

/// Physical inputs of the dot model.
///
/// Electron-hole direct elements (`v_eh_s`, `v_eh_a`) are entered as
/// attractive, i.e. non-positive, values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotParameters {
    /// Quasi-particle electron energy `Ẽ_e`.
    pub e_e: f64,
    /// Quasi-particle hole energy `Ẽ_h`.
    pub e_h: f64,
    /// Electron-electron repulsion `V_{eēeē}`.
    pub v_ee: f64,
    /// Hole-hole repulsion `V_{hh̄hh̄}`.
    pub v_hh: f64,
    /// Direct element for the `|eh>` pair, `V_{eheh}`.
    pub v_eh_s: f64,
    /// Direct element for the `|eh̄>` pair, `V_{eh̄eh̄}`.
    pub v_eh_a: f64,
    /// Exchange element `V_{ehēh̄}`.
    pub v_x1: f64,
    /// Exchange element `V_{eh̄ēh}`.
    pub v_x2: f64,
    /// Radiative rate `Γ` (`Γ₁` for tall dots).
    pub rad_rate: f64,
    /// Second radiative rate `Γ₂` of tall dots.
    pub rad_rate_2: f64,
    /// Single-channel tunneling rate `γ`.
    pub tunnel_rate: f64,
    /// Thermal energy `k_B T`.
    pub kt: f64,
    /// Bias energy `eV`.
    pub bias: f64,
    /// Gate energy `eΦ`.
    pub gate: f64,
}

impl Default for DotParameters {
    fn default() -> Self {
        let e_e = 100.0;
        let e_h = 100.0;
        Self {
            e_e,
            e_h,
            v_ee: 4.0,
            v_hh: 6.0,
            v_eh_s: -3.0,
            v_eh_a: -2.5,
            v_x1: 0.0,
            v_x2: 0.0,
            rad_rate: 1.0,
            rad_rate_2: 1.0,
            tunnel_rate: 0.01,
            kt: 5.0,
            // resonance: Ẽ_e - eΦ = Ẽ_h + eΦ = eV/2
            bias: e_e + e_h,
            gate: 0.5 * (e_e - e_h),
        }
    }
}

/// Non-fatal findings of [`DotParameters::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParameterWarning {
    /// `V_hh > V_ee > 0` does not hold.
    RepulsionOrdering { v_ee: f64, v_hh: f64 },
    /// An electron-hole direct element is repulsive.
    RepulsiveElectronHole { name: &'static str, value: f64 },
}

impl fmt::Display for ParameterWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RepulsionOrdering { v_ee, v_hh } => {
                write!(f, "expected V_hh > V_ee > 0, got V_ee={v_ee}, V_hh={v_hh}")
            }
            Self::RepulsiveElectronHole { name, value } => {
                write!(f, "{name}={value} is repulsive; electron-hole elements are entered as <= 0")
            }
        }
    }
}

impl DotParameters {
    /// Total tall-dot radiative rate `Γ_t = Γ₁ + Γ₂`.
    pub fn total_rad_rate(&self) -> f64 {
        self.rad_rate + self.rad_rate_2
    }

    /// Checks hard constraints and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<ParameterWarning>> {
        for (name, value) in [
            ("Gamma", self.rad_rate),
            ("Gamma_2", self.rad_rate_2),
            ("gamma", self.tunnel_rate),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "rates must be finite and non-negative",
                });
            }
        }
        if !(self.kt > 0.0 && self.kt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "T",
                value: self.kt,
                reason: "k_B T must be positive",
            });
        }
        let mut warnings = Vec::new();
        if !(self.v_hh > self.v_ee && self.v_ee > 0.0) {
            warnings.push(ParameterWarning::RepulsionOrdering {
                v_ee: self.v_ee,
                v_hh: self.v_hh,
            });
        }
        for (name, value) in [("V_eh_s", self.v_eh_s), ("V_eh_a", self.v_eh_a)] {
            if value > 0.0 {
                warnings.push(ParameterWarning::RepulsiveElectronHole { name, value });
            }
        }
        Ok(warnings)
    }
}

/// Configuration `(n_e, n_h, s, t)` of the dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DotState {
    pub n_e: u8,
    pub n_h: u8,
    pub s: i8,
    pub t: i8,
}

impl DotState {
    pub fn new(n_e: u8, n_h: u8, s: i8, t: i8) -> Result<Self> {
        let st = Self { n_e, n_h, s, t };
        st.check()?;
        Ok(st)
    }

    /// A state outside the one-exciton multiplet (`s = t = 0`).
    pub fn charged(n_e: u8, n_h: u8) -> Result<Self> {
        Self::new(n_e, n_h, 0, 0)
    }

    pub fn exciton(label: ExcitonLabel) -> Self {
        Self {
            n_e: 1,
            n_h: 1,
            s: label.s,
            t: label.t,
        }
    }

    fn check(&self) -> Result<()> {
        let fail = |reason| {
            Err(Error::InvalidState {
                n_e: self.n_e,
                n_h: self.n_h,
                s: self.s,
                t: self.t,
                reason,
            })
        };
        if self.n_e > 2 || self.n_h > 2 {
            return fail("occupation numbers range over 0..=2");
        }
        if self.n_e == 1 && self.n_h == 1 {
            if self.s.abs() != 1 || self.t.abs() != 1 {
                return fail("one-exciton states need s, t in {-1, +1}");
            }
        } else if self.s != 0 || self.t != 0 {
            return fail("s and t must vanish outside the one-exciton multiplet");
        }
        Ok(())
    }

    /// Number of degenerate members sharing this label (Kramers doublets for charge ±1).
    pub fn multiplicity(&self) -> u8 {
        if (self.n_e + self.n_h) % 2 == 1 {
            2
        } else {
            1
        }
    }
}

/// One of the sixteen basis states: a configuration plus its doublet member index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub state: DotState,
    pub member: u8,
}

/// All sixteen basis states of the one-electron-level / one-hole-level model.
pub fn enumerate_states() -> Vec<BasisState> {
    let mut out = Vec::with_capacity(16);
    for n_e in 0..=2u8 {
        for n_h in 0..=2u8 {
            let configs: Vec<DotState> = if n_e == 1 && n_h == 1 {
                ExcitonLabel::ALL.iter().map(|&l| DotState::exciton(l)).collect()
            } else {
                vec![DotState {
                    n_e,
                    n_h,
                    s: 0,
                    t: 0,
                }]
            };
            for state in configs {
                for member in 0..state.multiplicity() {
                    out.push(BasisState { state, member });
                }
            }
        }
    }
    out
}

/// Energy of a dot state relative to the ground state.
///
/// The closed expression is evaluated term by term as published, including
/// its `s = -1` branch, which yields `-V_eh_s - 2 V_eh_a` for the direct part
/// of the `|e h̄>` excitons rather than `V_eh_a`.
pub fn level_energy(p: &DotParameters, st: &DotState) -> Result<f64> {
    st.check()?;
    let n_e = f64::from(st.n_e);
    let n_h = f64::from(st.n_h);
    let s = f64::from(st.s);
    let t = f64::from(st.t);
    Ok(p.e_e * n_e
        + p.e_h * n_h
        + 0.5 * (n_e - 1.0) * n_e * p.v_ee
        + 0.5 * (n_h - 1.0) * n_h * p.v_hh
        + (s - 0.5 * n_e * n_h) * (p.v_eh_s + p.v_eh_a)
        + 0.5 * s * s * (p.v_eh_s - p.v_eh_a)
        + 0.5 * (1.0 + s) * t * p.v_x1
        + 0.5 * (1.0 - s) * t * p.v_x2)
}

/// Positive half-integer quantum number, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(u32);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);
    pub const THREE_HALVES: HalfInt = HalfInt(3);

    /// From twice the value; must be odd.
    pub fn from_twice(twice: u32) -> Option<Self> {
        (twice % 2 == 1).then_some(Self(twice))
    }

    pub fn from_f64(value: f64) -> Option<Self> {
        let twice = 2.0 * value;
        if twice.is_finite() && twice > 0.0 && (twice - twice.round()).abs() < 1e-9 {
            Self::from_twice(twice.round() as u32)
        } else {
            None
        }
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Axial,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeClass {
    /// `|m_e - m_h| = 1`: bright doublet and dark doublet.
    FlatCylindrical,
    /// `m_e = m_h = 1/2`: bright doublet, bright singlet, dark singlet.
    TallCylindrical,
    /// `m_e = m_h > 1/2`: a single bright singlet.
    HighM,
    /// Spin is a good quantum number: bright spin singlet, dark triplet.
    NoSpinOrbit,
    /// Only time-reversal symmetry: every exciton is bright.
    GenericTimeReversal,
    /// `|m_e - m_h| > 1`: no dipole-allowed exciton decay.
    DipoleForbidden,
}

impl SchemeClass {
    pub fn short_name(self) -> &'static str {
        match self {
            SchemeClass::FlatCylindrical => "flat",
            SchemeClass::TallCylindrical => "tall",
            SchemeClass::HighM => "high_m",
            SchemeClass::NoSpinOrbit => "no_spin_orbit",
            SchemeClass::GenericTimeReversal => "generic",
            SchemeClass::DipoleForbidden => "dipole_forbidden",
        }
    }
}

/// One-exciton state `|eh t>` (`s = +1`) or `|e h̄ t>` (`s = -1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExcitonLabel {
    pub s: i8,
    pub t: i8,
}

impl ExcitonLabel {
    pub const EH_EVEN: Self = Self { s: 1, t: 1 };
    pub const EH_ODD: Self = Self { s: 1, t: -1 };
    pub const EHBAR_EVEN: Self = Self { s: -1, t: 1 };
    pub const EHBAR_ODD: Self = Self { s: -1, t: -1 };
    pub const ALL: [Self; 4] = [Self::EH_EVEN, Self::EH_ODD, Self::EHBAR_EVEN, Self::EHBAR_ODD];
}

impl fmt::Display for ExcitonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = if self.s > 0 { "eh" } else { "ehbar" };
        let parity = if self.t > 0 { '+' } else { '-' };
        write!(f, "{pair}{parity}")
    }
}

/// Lumped multiplet levels used by the population and rate models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Ground,
    Electron,
    Hole,
    TwoElectrons,
    TwoHoles,
    BrightExciton,
    DarkExciton,
    /// `e ē h`
    NegativeTrion,
    /// `e h h̄`
    PositiveTrion,
    Biexciton,
}

impl Level {
    pub const ALL: [Level; 10] = [
        Level::Ground,
        Level::Electron,
        Level::Hole,
        Level::TwoElectrons,
        Level::TwoHoles,
        Level::BrightExciton,
        Level::DarkExciton,
        Level::NegativeTrion,
        Level::PositiveTrion,
        Level::Biexciton,
    ];

    /// `(n_e, n_h)` of the level.
    pub fn occupation(self) -> (u8, u8) {
        match self {
            Level::Ground => (0, 0),
            Level::Electron => (1, 0),
            Level::Hole => (0, 1),
            Level::TwoElectrons => (2, 0),
            Level::TwoHoles => (0, 2),
            Level::BrightExciton | Level::DarkExciton => (1, 1),
            Level::NegativeTrion => (2, 1),
            Level::PositiveTrion => (1, 2),
            Level::Biexciton => (2, 2),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Level::Ground => "G",
            Level::Electron => "e",
            Level::Hole => "h",
            Level::TwoElectrons => "ee",
            Level::TwoHoles => "hh",
            Level::BrightExciton => "X_bright",
            Level::DarkExciton => "X_dark",
            Level::NegativeTrion => "X-",
            Level::PositiveTrion => "X+",
            Level::Biexciton => "XX",
        }
    }
}

/// Classified exciton multiplet of a dot.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelScheme {
    pub scheme_class: SchemeClass,
    pub m_e: HalfInt,
    pub m_h: HalfInt,
    pub bright_excitons: Vec<ExcitonLabel>,
    pub dark_excitons: Vec<ExcitonLabel>,
    pub entanglement_capable: bool,
}

/// Group of bright excitons emitting at one frequency: a degenerate doublet
/// (both parities of one pair type) or a singlet.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitonGroup {
    pub members: Vec<ExcitonLabel>,
}

impl LevelScheme {
    pub fn flat() -> Self {
        classify_scheme(HalfInt::HALF, HalfInt::THREE_HALVES, true, Symmetry::Axial)
    }

    pub fn tall() -> Self {
        classify_scheme(HalfInt::HALF, HalfInt::HALF, true, Symmetry::Axial)
    }

    pub fn is_bright(&self, label: ExcitonLabel) -> bool {
        self.bright_excitons.contains(&label)
    }

    /// Bright excitons grouped into doublets (pair type `eh` first) and singlets.
    pub fn bright_groups(&self) -> Vec<ExcitonGroup> {
        let mut groups = Vec::new();
        for s in [1i8, -1] {
            let even = ExcitonLabel { s, t: 1 };
            let odd = ExcitonLabel { s, t: -1 };
            match (self.is_bright(even), self.is_bright(odd)) {
                (true, true) => groups.push(ExcitonGroup {
                    members: vec![even, odd],
                }),
                (true, false) => groups.push(ExcitonGroup {
                    members: vec![even],
                }),
                (false, true) => groups.push(ExcitonGroup { members: vec![odd] }),
                (false, false) => {}
            }
        }
        // doublets first so the cascade-relevant exciton leads
        groups.sort_by_key(|g| std::cmp::Reverse(g.members.len()));
        groups
    }

    /// Radiative decay rate of each bright exciton member.
    ///
    /// Tall dots: the in-plane doublet decays at `Γ₁` per member and the bright
    /// singlet at `2Γ₂`, so the triplet carries `2Γ_t` in total. Every other
    /// scheme uses `Γ` per bright member.
    pub fn member_rates(&self, p: &DotParameters) -> Vec<(ExcitonLabel, f64)> {
        self.bright_excitons
            .iter()
            .map(|&label| {
                let rate = match self.scheme_class {
                    SchemeClass::TallCylindrical if label.s < 0 => 2.0 * p.rad_rate_2,
                    _ => p.rad_rate,
                };
                (label, rate)
            })
            .collect()
    }

    /// Sum of the bright member rates; equals the biexciton decay rate.
    pub fn total_bright_rate(&self, p: &DotParameters) -> f64 {
        self.member_rates(p).iter().map(|(_, r)| r).sum()
    }

    /// Per-member radiative rate of the charged excitons (half the biexciton rate).
    pub fn trion_rate(&self, p: &DotParameters) -> f64 {
        0.5 * self.total_bright_rate(p)
    }
}

/// Projected angular momentum `|M|` of an exciton in an axial dot.
fn exciton_abs_m(label: ExcitonLabel, m_e: HalfInt, m_h: HalfInt) -> u32 {
    let (a, b) = (m_e.twice(), m_h.twice());
    if label.s > 0 {
        (a + b) / 2
    } else {
        a.abs_diff(b) / 2
    }
}

/// Assigns the scheme class and the bright/dark excitons.
pub fn classify_scheme(
    m_e: HalfInt,
    m_h: HalfInt,
    spin_orbit: bool,
    symmetry: Symmetry,
) -> LevelScheme {
    let (scheme_class, bright): (SchemeClass, Vec<ExcitonLabel>) = match (symmetry, spin_orbit) {
        (Symmetry::None, true) => (SchemeClass::GenericTimeReversal, ExcitonLabel::ALL.to_vec()),
        (_, false) => (SchemeClass::NoSpinOrbit, vec![ExcitonLabel::EHBAR_EVEN]),
        (Symmetry::Axial, true) => {
            let class = match m_e.twice().abs_diff(m_h.twice()) {
                0 if m_e == HalfInt::HALF => SchemeClass::TallCylindrical,
                0 => SchemeClass::HighM,
                2 => SchemeClass::FlatCylindrical,
                _ => SchemeClass::DipoleForbidden,
            };
            let bright = ExcitonLabel::ALL
                .into_iter()
                .filter(|&l| match exciton_abs_m(l, m_e, m_h) {
                    1 => true,
                    // M = 0 to M = 0 dipole: only the time-even state couples
                    0 => l.t > 0,
                    _ => false,
                })
                .collect();
            (class, bright)
        }
    };
    let dark = ExcitonLabel::ALL
        .into_iter()
        .filter(|l| !bright.contains(l))
        .collect();
    LevelScheme {
        scheme_class,
        m_e,
        m_h,
        bright_excitons: bright,
        dark_excitons: dark,
        entanglement_capable: matches!(
            scheme_class,
            SchemeClass::FlatCylindrical | SchemeClass::TallCylindrical
        ),
    }
}

/// Where an emission line originates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineSource {
    /// Biexciton decay into bright group `i`.
    Biexciton(usize),
    /// Decay of bright group `i` to the ground state.
    Exciton(usize),
    PositiveTrion,
    NegativeTrion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionLine {
    pub label: String,
    /// Cascade transition number 1..=4.
    pub transition: u8,
    pub omega: f64,
    pub source: LineSource,
}

/// Photon frequencies of the four transitions plus every bright emission line.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    pub omega_1: f64,
    pub omega_2: f64,
    pub omega_3: f64,
    pub omega_4: f64,
    pub groups: Vec<ExcitonGroup>,
    pub lines: Vec<EmissionLine>,
}

/// Mean energy of an exciton group (doublet centroid).
fn group_energy(p: &DotParameters, group: &ExcitonGroup) -> f64 {
    let sum: f64 = group
        .members
        .iter()
        .map(|&l| level_energy(p, &DotState::exciton(l)).expect("exciton labels are valid"))
        .sum();
    sum / group.members.len() as f64
}

/// Photon frequencies. `ω₁, ω₂` belong to the leading bright group (the
/// doublet when there is one); `ω₃` is the positive-trion decay
/// `e h h̄ -> h` and `ω₄` the negative-trion decay `e ē h -> e`.
pub fn transition_frequencies(p: &DotParameters, sch: &LevelScheme) -> Result<TransitionTable> {
    let groups = sch.bright_groups();
    if groups.is_empty() {
        return Err(Error::NoBrightExciton(sch.scheme_class));
    }
    let e = |n_e, n_h| level_energy(p, &DotState::charged(n_e, n_h).expect("charged state"));
    let e_xx = e(2, 2)?;
    let omega_3 = e(1, 2)? - e(0, 1)?;
    let omega_4 = e(2, 1)? - e(1, 0)?;

    let mut lines = Vec::new();
    let mut principal = None;
    for (i, group) in groups.iter().enumerate() {
        let e_x = group_energy(p, group);
        principal.get_or_insert(e_x);
        let suffix = if i == 0 {
            String::new()
        } else {
            format!("[{}]", group.members[0])
        };
        lines.push(EmissionLine {
            label: format!("1{suffix}"),
            transition: 1,
            omega: e_xx - e_x,
            source: LineSource::Biexciton(i),
        });
        lines.push(EmissionLine {
            label: format!("2{suffix}"),
            transition: 2,
            omega: e_x,
            source: LineSource::Exciton(i),
        });
    }
    lines.push(EmissionLine {
        label: "3".into(),
        transition: 3,
        omega: omega_3,
        source: LineSource::PositiveTrion,
    });
    lines.push(EmissionLine {
        label: "4".into(),
        transition: 4,
        omega: omega_4,
        source: LineSource::NegativeTrion,
    });
    let e_x = principal.expect("non-empty groups");
    Ok(TransitionTable {
        omega_1: e_xx - e_x,
        omega_2: e_x,
        omega_3,
        omega_4,
        groups,
        lines,
    })
}

/// Splitting `Δ` of the bright doublet: `2 V_x1` for flat dots, `2 V_x2` for tall dots.
pub fn exciton_splitting(p: &DotParameters, sch: &LevelScheme) -> Result<f64> {
    match sch.scheme_class {
        SchemeClass::FlatCylindrical => Ok(2.0 * p.v_x1),
        SchemeClass::TallCylindrical => Ok(2.0 * p.v_x2),
        other => Err(Error::NotEntanglementCapable(other)),
    }
}
