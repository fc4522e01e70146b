//! Full 1-D energy evaluation, the closed-form alternating-layer families,
//! optimal layer counts and widths, and the sharp linear-in-mass lower bound.
//!
//! The energy of an admissible pair is the surface-tension-weighted interface
//! count plus the squared H^-1 norm of u - v. For a connected structure of n
//! monolayers (outer blocks of width m, inner blocks 2m, mass M = n m) the
//! energy has a closed form per family, computed here independently of the
//! block evaluator so the two act as cross-checks.

use crate::config::{Block, BlockConfig, Domain, InterfaceKind, Phase};
use crate::params::Params;
use crate::potential::hminus_norm_sq;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum EnergyError {
    InvalidConfig(crate::config::ConfigError),
    ParityMismatch { kind: FamilyKind, n: u32 },
    BadFamily(&'static str),
    ZeroDuv,
}

impl std::fmt::Display for EnergyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnergyError::InvalidConfig(e) => write!(f, "{e}"),
            EnergyError::ParityMismatch { kind, n } => {
                write!(f, "family {kind:?} requires n {} but n = {n}", kind.parity_name())
            }
            EnergyError::BadFamily(msg) => write!(f, "{msg}"),
            EnergyError::ZeroDuv => write!(f, "d_uv = 0: no preferred layer width exists"),
        }
    }
}

impl std::error::Error for EnergyError {}

impl From<crate::config::ConfigError> for EnergyError {
    fn from(e: crate::config::ConfigError) -> Self {
        EnergyError::InvalidConfig(e)
    }
}

/// Interface counts per type plus the two energy components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub count_u0: u32,
    pub count_v0: u32,
    pub count_uv: u32,
    pub interfacial: f64,
    pub nonlocal: f64,
    pub total: f64,
}

/// Evaluates the full energy of a validated block configuration.
///
/// On the line, the two outer boundaries of the support count as interfaces
/// against the implicit H phase, which produces the 2(c0 + ...) offsets of
/// the closed-form families.
pub fn total_energy(config: &BlockConfig, params: &Params) -> Result<EnergyBreakdown, EnergyError> {
    let mut count_u0 = 0u32;
    let mut count_v0 = 0u32;
    let mut count_uv = 0u32;
    for i in config.interfaces() {
        match i.kind {
            InterfaceKind::U0 => count_u0 += 1,
            InterfaceKind::V0 => count_v0 += 1,
            InterfaceKind::UV => count_uv += 1,
        }
    }
    let interfacial = params.d_u0 * f64::from(count_u0)
        + params.d_v0 * f64::from(count_v0)
        + params.d_uv * f64::from(count_uv);
    let nonlocal = hminus_norm_sq(config)?;
    Ok(EnergyBreakdown {
        count_u0,
        count_v0,
        count_uv,
        interfacial,
        nonlocal,
        total: interfacial + nonlocal,
    })
}

/// The three connected alternating families, named by their outer blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// V U V ... V: both outer blocks V (n even).
    OuterVv,
    /// V U V ... U: mixed outer blocks (n odd); n = 1 is the plain monolayer.
    OuterVu,
    /// U V U ... U: both outer blocks U (n even).
    OuterUu,
}

impl FamilyKind {
    /// Multiplicities (k1, k2) of d_u0 and d_v0 in the family offset.
    pub fn end_counts(self) -> (f64, f64) {
        match self {
            FamilyKind::OuterVv => (0.0, 2.0),
            FamilyKind::OuterVu => (1.0, 1.0),
            FamilyKind::OuterUu => (2.0, 0.0),
        }
    }

    fn parity_ok(self, n: u32) -> bool {
        match self {
            FamilyKind::OuterVv | FamilyKind::OuterUu => n >= 2 && n % 2 == 0,
            FamilyKind::OuterVu => n % 2 == 1,
        }
    }

    fn parity_name(self) -> &'static str {
        match self {
            FamilyKind::OuterVv | FamilyKind::OuterUu => "even",
            FamilyKind::OuterVu => "odd",
        }
    }

    fn first_phase(self) -> Phase {
        match self {
            FamilyKind::OuterVv | FamilyKind::OuterVu => Phase::V,
            FamilyKind::OuterUu => Phase::U,
        }
    }
}

/// An n-monolayer family member: n monolayers of outer width m (mass M = n m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: u32,
    pub m: f64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: u32, m: f64) -> Result<Self, EnergyError> {
        if n < 1 {
            return Err(EnergyError::BadFamily("family needs n >= 1 monolayers"));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(EnergyError::BadFamily("outer width m must be positive"));
        }
        if !kind.parity_ok(n) {
            return Err(EnergyError::ParityMismatch { kind, n });
        }
        Ok(FamilySpec { kind, n, m })
    }

    pub fn mass(&self) -> f64 {
        self.n as f64 * self.m
    }

    /// The explicit block configuration: outer blocks of width m, interior
    /// blocks of width 2m, phases alternating from the family's first phase.
    pub fn config(&self) -> BlockConfig {
        let b = self.n as usize + 1;
        let mut blocks = Vec::with_capacity(b);
        let mut phase = self.kind.first_phase();
        for i in 0..b {
            let width = if i == 0 || i == b - 1 { self.m } else { 2.0 * self.m };
            blocks.push(Block { phase, width });
            phase = phase.swapped();
        }
        BlockConfig::new(Domain::Line, blocks).expect("family configurations are admissible")
    }
}

/// Closed-form family energy:
///   outer offset + n d_uv + (2n/3) m^3,
/// with offset 2 d_v0, d_u0 + d_v0, or 2 d_u0 by family. Computed from the
/// formula, never from the evaluator, so the two are independent.
pub fn family_energy(spec: &FamilySpec, params: &Params) -> f64 {
    let (k1, k2) = spec.kind.end_counts();
    let n = spec.n as f64;
    k1 * params.d_u0 + k2 * params.d_v0 + n * params.d_uv
        + 2.0 * n / 3.0 * spec.m * spec.m * spec.m
}

/// Sharp lower bound for any 1-D structure of mass M:
///   2 (c0 + min(cu, cv)) + (9/2)^(1/3) d_uv^(2/3) M.
pub fn lower_bound(mass: f64, params: &Params) -> f64 {
    2.0 * (params.c0 + params.cu.min(params.cv))
        + (4.5f64).cbrt() * params.d_uv.powf(2.0 / 3.0) * mass
}

/// Energy per unit mass in the limit of large mass: (9/2)^(1/3) d_uv^(2/3).
pub fn asymptotic_energy_per_mass(params: &Params) -> f64 {
    (4.5f64).cbrt() * params.d_uv.powf(2.0 / 3.0)
}

/// Real-valued optimal monolayer count at mass M: n0^3 = (4/3) M^3 / d_uv.
pub fn optimal_monolayer_count(mass: f64, params: &Params) -> Result<f64, EnergyError> {
    if params.d_uv <= 0.0 {
        return Err(EnergyError::ZeroDuv);
    }
    Ok(mass * (4.0 / (3.0 * params.d_uv)).cbrt())
}

/// Energy-per-mass-optimal outer width at fixed n:
///   m0^3 = 3 (k1 d_u0 + k2 d_v0 + n d_uv) / (4 n).
/// As n grows the inner width 2 m0 tends to (6 d_uv)^(1/3).
pub fn optimal_outer_width(kind: FamilyKind, n: u32, params: &Params) -> Result<f64, EnergyError> {
    if params.d_uv <= 0.0 {
        return Err(EnergyError::ZeroDuv);
    }
    let (k1, k2) = kind.end_counts();
    let n = n as f64;
    Ok((3.0 * (k1 * params.d_u0 + k2 * params.d_v0 + n * params.d_uv) / (4.0 * n)).cbrt())
}

/// Family kind of an alternating U/V pattern, by its outer blocks.
pub fn pattern_kind(pattern: &[Phase]) -> Result<FamilyKind, EnergyError> {
    if pattern.len() < 2 {
        return Err(EnergyError::BadFamily("pattern needs at least two blocks"));
    }
    if pattern.iter().any(|p| *p == Phase::H) {
        return Err(EnergyError::BadFamily("pattern must alternate U and V"));
    }
    for w in pattern.windows(2) {
        if w[0] == w[1] {
            return Err(EnergyError::BadFamily("pattern must alternate U and V"));
        }
    }
    Ok(match (pattern[0], pattern[pattern.len() - 1]) {
        (Phase::V, Phase::V) => FamilyKind::OuterVv,
        (Phase::U, Phase::U) => FamilyKind::OuterUu,
        _ => FamilyKind::OuterVu,
    })
}
