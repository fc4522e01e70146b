//! Pattern enumeration, energy-per-mass curves, and the global envelope.
//!
//! Every connected alternating pattern with n monolayers carries a closed
//! form for its energy at mass M (outer width m = M/n at stationarity), so a
//! curve F/M over a mass grid is a pointwise formula. The envelope is the
//! pointwise minimum over patterns; where the best pattern changes, the
//! crossover mass is located by bisection on the difference of the two
//! adjacent curves.

use crate::config::Phase;
use crate::energy::{family_energy, pattern_kind, EnergyError, FamilySpec};
use crate::params::Params;
use serde::Serialize;

/// All alternating U/V patterns with up to `n_max` monolayers (a pattern of
/// b blocks has b - 1 monolayers), deduplicated under mirroring, in
/// deterministic order: by monolayer count, U-leading first.
pub fn enumerate_patterns(n_max: u32) -> Vec<Vec<Phase>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let blocks = n as usize + 1;
        for first in [Phase::U, Phase::V] {
            let mut pattern = Vec::with_capacity(blocks);
            let mut phase = first;
            for _ in 0..blocks {
                pattern.push(phase);
                phase = phase.swapped();
            }
            // For odd n the V-leading pattern is the mirror of the U-leading
            // one; keep the U-leading representative.
            let mirrored: Vec<Phase> = pattern.iter().rev().copied().collect();
            if out.contains(&mirrored) {
                continue;
            }
            out.push(pattern);
        }
    }
    out
}

pub fn pattern_name(pattern: &[Phase]) -> String {
    pattern.iter().map(|p| p.to_string()).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    pub mass: f64,
    pub energy_per_mass: f64,
}

/// Energy per unit mass of one pattern along a mass grid, using the family
/// closed form at the pattern's stationary widths (m = M/n).
pub fn curve_for_pattern(
    pattern: &[Phase],
    params: &Params,
    mass_grid: &[f64],
) -> Result<Vec<CurvePoint>, EnergyError> {
    if params.d_uv <= 0.0 {
        return Err(EnergyError::ZeroDuv);
    }
    let kind = pattern_kind(pattern)?;
    let n = pattern.len() as u32 - 1;
    mass_grid
        .iter()
        .map(|&mass| {
            let spec = FamilySpec::new(kind, n, mass / n as f64)?;
            Ok(CurvePoint {
                mass,
                energy_per_mass: family_energy(&spec, params) / mass,
            })
        })
        .collect()
}

fn per_mass(pattern: &[Phase], params: &Params, mass: f64) -> f64 {
    let kind = pattern_kind(pattern).expect("enumerated patterns are alternating");
    let n = pattern.len() as u32 - 1;
    let spec = FamilySpec::new(kind, n, mass / n as f64).expect("positive mass");
    family_energy(&spec, params) / mass
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnvelopePoint {
    pub mass: f64,
    /// Index into `Envelope::patterns`.
    pub pattern: usize,
    pub energy_per_mass: f64,
}

/// A mass where the optimal pattern changes, refined by bisection.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Crossover {
    pub mass: f64,
    /// Optimal below the crossover.
    pub before: usize,
    /// Optimal above.
    pub after: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub patterns: Vec<String>,
    pub points: Vec<EnvelopePoint>,
    pub crossovers: Vec<Crossover>,
}

/// Default mass grid: 400 log-spaced points in [0.05, 100], wide enough to
/// show both the small-mass blow-up and the large-mass plateau.
pub fn default_mass_grid() -> Vec<f64> {
    crate::numeric::log_grid(0.05, 100.0, 400)
}

/// Pointwise minimum of the per-pattern curves plus the crossover masses
/// between patterns adjacent in the envelope (bisection to 1e-8 in M).
pub fn global_envelope(
    params: &Params,
    mass_grid: &[f64],
    n_max: u32,
) -> Result<Envelope, EnergyError> {
    if params.d_uv <= 0.0 {
        return Err(EnergyError::ZeroDuv);
    }
    let patterns = enumerate_patterns(n_max);
    let mut points = Vec::with_capacity(mass_grid.len());
    for &mass in mass_grid {
        let (best, value) = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| (i, per_mass(p, params, mass)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one pattern");
        points.push(EnvelopePoint {
            mass,
            pattern: best,
            energy_per_mass: value,
        });
    }
    let mut crossovers = Vec::new();
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo.pattern == hi.pattern {
            continue;
        }
        let pa = &patterns[lo.pattern];
        let pb = &patterns[hi.pattern];
        let diff = |m: f64| per_mass(pa, params, m) - per_mass(pb, params, m);
        let (mut a, mut b) = (lo.mass, hi.mass);
        let (da, db) = (diff(a), diff(b));
        if da.signum() == db.signum() {
            // The two curves do not cross between the samples (a third
            // pattern can separate them); report the midpoint sample.
            crossovers.push(Crossover {
                mass: 0.5 * (a + b),
                before: lo.pattern,
                after: hi.pattern,
            });
            continue;
        }
        while b - a > 1e-8 {
            let mid = 0.5 * (a + b);
            if diff(mid).signum() == da.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        crossovers.push(Crossover {
            mass: 0.5 * (a + b),
            before: lo.pattern,
            after: hi.pattern,
        });
    }
    Ok(Envelope {
        patterns: patterns.iter().map(|p| pattern_name(p)).collect(),
        points,
        crossovers,
    })
}
