//! Spherically symmetric configurations in dimension N >= 2: exact radial
//! Poisson potentials, closed-form shell energies, curvature expansions of
//! energy per mass, and micelle optimisation.
//!
//! The radial potential solves -r^(1-N) (r^(N-1) phi')' = u - v with
//! phi(0) = phi'(0) = 0. On each annulus of constant charge q,
//!
//!   phi'(r) = -q r / N + c r^(1-N),
//!
//! and the constants c follow from C^1 matching at the radii; equal U and V
//! mass makes phi' vanish beyond the outermost radius (no decaying tail term
//! survives square-integrability of the gradient). All integrals are exact
//! antiderivatives; N = 2 (logarithmic branch) and N >= 3 (power branch) are
//! kept separate throughout.
//!
//! Curvature expansions are evaluated from the exact energies rewritten in
//! the curvature kappa and the mass per surface area m. For small kappa the
//! radii-space formulas lose most of their digits to cancellation, so the
//! exact values are computed from convergent series in N m kappa, summed to
//! machine precision; leading coefficients reproduce the planar energies
//! exactly.

use crate::config::{InterfaceKind, Phase};
use crate::energy::EnergyBreakdown;
use crate::numeric::{golden_section_min, unit_ball_volume};
use crate::params::Params;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum RadialError {
    InvalidRadial(String),
    RelationViolated { detail: String },
    /// Radii stop being real: curvature too large for the given m.
    RadiiCollapse { m: f64, kappa: f64 },
    UnsupportedDim { dim: u32 },
}

impl std::fmt::Display for RadialError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RadialError::InvalidRadial(msg) => write!(f, "{msg}"),
            RadialError::RelationViolated { detail } => write!(f, "{detail}"),
            RadialError::RadiiCollapse { m, kappa } => {
                write!(f, "radii collapse: kappa = {kappa} too large for m = {m}")
            }
            RadialError::UnsupportedDim { dim } => {
                write!(f, "dimension {dim} unsupported (needs N >= 2)")
            }
        }
    }
}

impl std::error::Error for RadialError {}

/// Spherically symmetric configuration: increasing radii R_0 < ... < R_k and
/// the phases of the k annular layers between them. The ball inside R_0 is
/// homopolymer (empty when R_0 = 0); so is everything beyond R_k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialConfig {
    dim: u32,
    radii: Vec<f64>,
    layers: Vec<Phase>,
}

impl RadialConfig {
    pub fn new(dim: u32, radii: Vec<f64>, layers: Vec<Phase>) -> Result<Self, RadialError> {
        if dim < 2 {
            return Err(RadialError::UnsupportedDim { dim });
        }
        if radii.len() != layers.len() + 1 {
            return Err(RadialError::InvalidRadial(format!(
                "{} radii require {} layers, got {}",
                radii.len(),
                radii.len().saturating_sub(1),
                layers.len()
            )));
        }
        if radii.is_empty() || radii[0] < 0.0 {
            return Err(RadialError::InvalidRadial(
                "need radii starting at R0 >= 0".into(),
            ));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(RadialError::InvalidRadial(
                "radii must be finite and strictly increasing".into(),
            ));
        }
        let mut prev = Phase::H; // inner ball
        if radii[0] == 0.0 {
            prev = layers[0];
        }
        for (i, &phase) in layers.iter().enumerate() {
            if i > 0 || radii[0] > 0.0 {
                if phase == prev {
                    return Err(RadialError::InvalidRadial(format!(
                        "layer {i} repeats phase {phase}"
                    )));
                }
            }
            prev = phase;
        }
        let config = RadialConfig { dim, radii, layers };
        let (u, v) = (config.phase_mass(Phase::U), config.phase_mass(Phase::V));
        if (u - v).abs() > 1e-10 * u.max(v).max(1.0) {
            return Err(RadialError::InvalidRadial(format!(
                "U mass {u} != V mass {v}"
            )));
        }
        Ok(config)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn layers(&self) -> &[Phase] {
        &self.layers
    }

    fn phase_mass(&self, phase: Phase) -> f64 {
        let w = unit_ball_volume(self.dim);
        let n = self.dim as i32;
        self.layers
            .iter()
            .zip(self.radii.windows(2))
            .filter(|(p, _)| **p == phase)
            .map(|(_, r)| w * (r[1].powi(n) - r[0].powi(n)))
            .sum()
    }

    /// Total U-mass.
    pub fn u_mass(&self) -> f64 {
        self.phase_mass(Phase::U)
    }

    pub fn swap_phases(&self) -> RadialConfig {
        RadialConfig {
            dim: self.dim,
            radii: self.radii.clone(),
            layers: self.layers.iter().map(|p| p.swapped()).collect(),
        }
    }
}

/// One annulus of the radial potential: phi'(r) = -q r / N + c r^(1-N).
#[derive(Debug, Clone, Copy)]
pub struct RadialPiece {
    pub r_lo: f64,
    pub r_hi: f64,
    pub charge: f64,
    pub c: f64,
}

#[derive(Debug, Clone)]
pub struct RadialPotential {
    dim: u32,
    pieces: Vec<RadialPiece>,
}

impl RadialPotential {
    pub fn pieces(&self) -> &[RadialPiece] {
        &self.pieces
    }

    /// phi'(r); zero inside R_0 and beyond R_k.
    pub fn dphi(&self, r: f64) -> f64 {
        let n = self.dim as f64;
        for p in &self.pieces {
            if r >= p.r_lo && r <= p.r_hi {
                return -p.charge * r / n + p.c * r.powf(1.0 - n);
            }
        }
        0.0
    }
}

/// Builds the radial potential by marching the matching constants outward.
pub fn radial_potential(rc: &RadialConfig) -> Result<RadialPotential, RadialError> {
    let n = rc.dim as f64;
    let mut pieces = Vec::with_capacity(rc.layers.len());
    let mut c = 0.0; // inner ball: phi' = 0
    let mut q_prev = 0.0;
    for (i, (&phase, r)) in rc.layers.iter().zip(rc.radii.windows(2)).enumerate() {
        let q = phase.charge();
        // Continuity of phi' at r[0]: c_i = c_{i-1} + (q_i - q_prev) r^N / N.
        // At R0 = 0 (first layer reaching the origin) regularity gives c = 0.
        if !(i == 0 && r[0] == 0.0) {
            c += (q - q_prev) * r[0].powf(n) / n;
        }
        pieces.push(RadialPiece {
            r_lo: r[0],
            r_hi: r[1],
            charge: q,
            c,
        });
        q_prev = q;
    }
    // Outer region: the tail constant must vanish by mass balance.
    let r_out = *rc.radii.last().unwrap();
    let c_out = c + (0.0 - q_prev) * r_out.powf(n) / n;
    let scale = pieces.iter().fold(1.0f64, |m, p| m.max(p.c.abs()));
    if c_out.abs() > 1e-9 * scale {
        return Err(RadialError::InvalidRadial(format!(
            "outer slope constant {c_out:.3e} does not vanish (mass imbalance)"
        )));
    }
    Ok(RadialPotential { dim: rc.dim, pieces })
}

/// Exact integral of phi'(r)^2 r^(N-1) over one annulus.
///
/// The integrand is q^2 r^(N+1) / N^2 - (2 q c / N) r + c^2 r^(1-N); its
/// antiderivative uses ln r for N = 2 and r^(2-N)/(2-N) for N >= 3.
fn dirichlet_piece(p: &RadialPiece, dim: u32) -> f64 {
    let n = dim as f64;
    let term = |r: f64| -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let mut t = p.charge * p.charge * r.powf(n + 2.0) / (n * n * (n + 2.0))
            - p.charge * p.c * r * r / n;
        if p.c != 0.0 {
            t += if dim == 2 {
                p.c * p.c * r.ln()
            } else {
                p.c * p.c * r.powf(2.0 - n) / (2.0 - n)
            };
        }
        t
    };
    term(p.r_hi) - term(p.r_lo)
}

/// Full energy of a radial configuration: surface tensions times the sphere
/// areas plus the exact Dirichlet energy of the radial potential.
pub fn radial_energy(rc: &RadialConfig, params: &Params) -> Result<EnergyBreakdown, RadialError> {
    let n = rc.dim;
    let area_factor = n as f64 * unit_ball_volume(n); // N omega_N: unit-sphere area
    let mut count_u0 = 0u32;
    let mut count_v0 = 0u32;
    let mut count_uv = 0u32;
    let mut interfacial = 0.0;
    // Interfaces: inner ball (H) | layer 0 at R0 (area 0 when R0 = 0), layer
    // boundaries, and layer k | outer H at R_k.
    let mut boundary = |r: f64, a: Phase, b: Phase| {
        if r <= 0.0 {
            return;
        }
        if let Some(kind) = InterfaceKind::between(a, b) {
            match kind {
                InterfaceKind::U0 => count_u0 += 1,
                InterfaceKind::V0 => count_v0 += 1,
                InterfaceKind::UV => count_uv += 1,
            }
            interfacial += params.tension(kind) * area_factor * r.powi(n as i32 - 1);
        }
    };
    boundary(rc.radii[0], Phase::H, rc.layers[0]);
    for i in 1..rc.layers.len() {
        boundary(rc.radii[i], rc.layers[i - 1], rc.layers[i]);
    }
    boundary(*rc.radii.last().unwrap(), *rc.layers.last().unwrap(), Phase::H);

    let pot = radial_potential(rc)?;
    let nonlocal: f64 = pot
        .pieces()
        .iter()
        .map(|p| dirichlet_piece(p, n))
        .sum::<f64>()
        * area_factor;

    Ok(EnergyBreakdown {
        count_u0,
        count_v0,
        count_uv,
        interfacial,
        nonlocal,
        total: interfacial + nonlocal,
    })
}

/// Kinds of shell for the closed forms and expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShellKind {
    /// Inner U band, outer V band (R0, R1, R2).
    Monolayer,
    /// U V U (R0 .. R3) with equal inner and outer U mass.
    Bilayer,
}

fn check_relation(lhs: f64, rhs: f64, what: &str) -> Result<(), RadialError> {
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    if (lhs - rhs).abs() > 1e-9 * scale {
        return Err(RadialError::RelationViolated {
            detail: format!("{what}: {lhs} != {rhs}"),
        });
    }
    Ok(())
}

fn x4lnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powi(4) * x.ln()
    }
}

/// Closed-form shell energy, written directly in the radii.
///
/// The monolayer radii must satisfy R2^N - R1^N = R1^N - R0^N; the bilayer
/// radii R3^N - R2^N = (R2^N - R1^N)/2 = R1^N - R0^N (equal inner and outer
/// mass). Independent of the potential-marching path in `radial_energy`.
pub fn closed_form_energy(
    kind: ShellKind,
    radii: &[f64],
    dim: u32,
    params: &Params,
) -> Result<f64, RadialError> {
    if dim < 2 {
        return Err(RadialError::UnsupportedDim { dim });
    }
    let n = dim as f64;
    let area_factor = n * unit_ball_volume(dim);
    match kind {
        ShellKind::Monolayer => {
            let [r0, r1, r2]: [f64; 3] = radii
                .try_into()
                .map_err(|_| RadialError::InvalidRadial("monolayer needs three radii".into()))?;
            check_relation(
                r2.powf(n) - r1.powf(n),
                r1.powf(n) - r0.powf(n),
                "equal U and V mass",
            )?;
            let interfacial = r0.powf(n - 1.0) * params.d_u0
                + r1.powf(n - 1.0) * params.d_uv
                + r2.powf(n - 1.0) * params.d_v0;
            let nonlocal = if dim == 2 {
                let (a, b) = (r0 * r0, r1 * r1);
                -0.25 * b * b + 0.25 * a * b - 0.25 * x4lnx(r0) - b * (b - a) * r1.ln()
                    + 0.125 * (2.0 * b - a) * (2.0 * b - a) * (2.0 * b - a).ln()
            } else {
                (r0.powf(n + 2.0) - r2.powf(n + 2.0)) / (n * n - 4.0)
                    + 2.0 * r1 * r1 * (r1.powf(n) - r0.powf(n)) / (n * (n - 2.0))
            };
            Ok(area_factor * (interfacial + nonlocal))
        }
        ShellKind::Bilayer => {
            let [r0, r1, r2, r3]: [f64; 4] = radii
                .try_into()
                .map_err(|_| RadialError::InvalidRadial("bilayer needs four radii".into()))?;
            check_relation(
                r3.powf(n) - r2.powf(n),
                r1.powf(n) - r0.powf(n),
                "equal inner and outer U mass",
            )?;
            check_relation(
                r2.powf(n) - r1.powf(n),
                2.0 * (r1.powf(n) - r0.powf(n)),
                "equal U and V mass",
            )?;
            let interfacial = (r0.powf(n - 1.0) + r3.powf(n - 1.0)) * params.d_u0
                + (r1.powf(n - 1.0) + r2.powf(n - 1.0)) * params.d_uv;
            let nonlocal = if dim == 2 {
                let (a, b, c, e) = (r0 * r0, r1 * r1, r2 * r2, r3 * r3);
                (a * a - e * e) / 16.0 - 0.25 * x4lnx(r0)
                    + (0.5 * a * b - b * c + 0.5 * b * e) * r1.ln()
                    + (-0.5 * a * c + b * c - 0.5 * c * e) * r2.ln()
                    + (0.25 * a * e - 0.5 * b * e + 0.5 * c * e) * r3.ln()
            } else {
                let p = |r: f64, k: f64| r.powf(k);
                (p(r0, n + 2.0) - p(r3, n + 2.0)) / (2.0 * n * (n + 2.0))
                    + (-4.0 * p(r0, n) * r1 * r1 + 4.0 * p(r0, n) * r2 * r2
                        - 8.0 * p(r1, n) * r2 * r2
                        + p(r0, n + 2.0)
                        + 4.0 * p(r1, n + 2.0)
                        + 4.0 * p(r2, n + 2.0)
                        - p(r3, n + 2.0))
                        / (2.0 * n * (n - 2.0))
            };
            Ok(area_factor * (interfacial + nonlocal))
        }
    }
}

/// Monolayer radii from curvature and mass per surface area:
/// R1 = 1/kappa, R0 = R1 (1 - N m kappa)^(1/N), R2 = R1 (1 + N m kappa)^(1/N).
pub fn monolayer_radii(dim: u32, m: f64, kappa: f64) -> Result<[f64; 3], RadialError> {
    let n = dim as f64;
    let x = n * m * kappa;
    if x >= 1.0 {
        return Err(RadialError::RadiiCollapse { m, kappa });
    }
    let r1 = 1.0 / kappa;
    Ok([
        r1 * (1.0 - x).powf(1.0 / n),
        r1,
        r1 * (1.0 + x).powf(1.0 / n),
    ])
}

/// Bilayer radii with equal inner/outer U mass: R^N = (R1^N + R2^N)/2,
/// kappa = 1/R, and offsets (1 -+ N m kappa), (1 -+ N m kappa / 2).
pub fn bilayer_radii(dim: u32, m: f64, kappa: f64) -> Result<[f64; 4], RadialError> {
    let n = dim as f64;
    let x = n * m * kappa;
    if x >= 1.0 {
        return Err(RadialError::RadiiCollapse { m, kappa });
    }
    let r = 1.0 / kappa;
    Ok([
        r * (1.0 - x).powf(1.0 / n),
        r * (1.0 - 0.5 * x).powf(1.0 / n),
        r * (1.0 + 0.5 * x).powf(1.0 / n),
        r * (1.0 + x).powf(1.0 / n),
    ])
}

/// The monolayer/bilayer configuration at curvature kappa (inner band U).
pub fn shell_config(kind: ShellKind, dim: u32, m: f64, kappa: f64) -> Result<RadialConfig, RadialError> {
    match kind {
        ShellKind::Monolayer => {
            let r = monolayer_radii(dim, m, kappa)?;
            RadialConfig::new(dim, r.to_vec(), vec![Phase::U, Phase::V])
        }
        ShellKind::Bilayer => {
            let r = bilayer_radii(dim, m, kappa)?;
            RadialConfig::new(dim, r.to_vec(), vec![Phase::U, Phase::V, Phase::U])
        }
    }
}

/// Curvature expansion of energy per mass, truncated after the kappa^2 term.
///
/// Monolayer (inner U band; error O(kappa^3)):
///   m^-1 (d_u0 + d_uv + d_v0) + (2/3) m^2 + (N-1)(d_v0 - d_u0) kappa
///   + (N-1) m (-(d_u0 + d_v0)/2 + (3N-2) m^3 / 15) kappa^2.
/// Bilayer (UVU; even in kappa, error O(kappa^4)):
///   2 m^-1 (d_u0 + d_uv) + m^2/6
///   + (N-1) m (-(d_u0 + d_uv/4) + 11 (3N-2) m^3 / 240) kappa^2.
///
/// A monolayer with inner V band follows by swapping d_u0 and d_v0 in the
/// parameters; a VUV bilayer by replacing d_u0 with d_v0.
pub fn expansion_energy(
    kind: ShellKind,
    m: f64,
    kappa: f64,
    dim: u32,
    params: &Params,
) -> Result<f64, RadialError> {
    if dim < 2 {
        return Err(RadialError::UnsupportedDim { dim });
    }
    if !(m > 0.0) {
        return Err(RadialError::InvalidRadial("m must be positive".into()));
    }
    let n = dim as f64;
    if n * m * kappa >= 1.0 {
        return Err(RadialError::RadiiCollapse { m, kappa });
    }
    Ok(match kind {
        ShellKind::Monolayer => {
            (params.d_u0 + params.d_uv + params.d_v0) / m
                + 2.0 / 3.0 * m * m
                + (n - 1.0) * (params.d_v0 - params.d_u0) * kappa
                + (n - 1.0)
                    * m
                    * (-0.5 * (params.d_u0 + params.d_v0)
                        + (3.0 * n - 2.0) * m * m * m / 15.0)
                    * kappa
                    * kappa
        }
        ShellKind::Bilayer => {
            2.0 * (params.d_u0 + params.d_uv) / m
                + m * m / 6.0
                + (n - 1.0)
                    * m
                    * (-(params.d_u0 + 0.25 * params.d_uv)
                        + 11.0 * (3.0 * n - 2.0) * m * m * m / 240.0)
                    * kappa
                    * kappa
        }
    })
}

/// Generalised binomial coefficient binom(p, k) for real p.
fn binom_real(p: f64, k: u32) -> f64 {
    let mut out = 1.0;
    for j in 0..k {
        out *= (p - j as f64) / (j as f64 + 1.0);
    }
    out
}

/// Exact nonlocal energy per mass of a shell, as a function of (m, kappa).
///
/// For x = N m kappa <= 1/2 this sums the convergent series in x whose
/// kappa^0 term is the planar value ((2/3) m^2 monolayer, m^2/6 bilayer); the
/// naive radii-space evaluation cancels catastrophically there. For larger x
/// it evaluates the explicit logarithmic (N = 2) or power (N >= 3) form.
fn nonlocal_per_mass(kind: ShellKind, dim: u32, m: f64, kappa: f64) -> f64 {
    let n = dim as f64;
    let x = n * m * kappa;
    debug_assert!(x < 1.0);
    if x <= 0.5 {
        // Series in powers of kappa^2.
        let mut total = 0.0;
        let x2 = x * x;
        let mut x_pow = 1.0; // x^(2i)
        for i in 0..200u32 {
            let ti = match (kind, dim) {
                (ShellKind::Monolayer, 2) => {
                    let k = i as f64;
                    2f64.powi(2 * i as i32 + 1)
                        * (1.0 / (2.0 * k + 3.0) + 1.0 / (2.0 * k + 1.0) - 1.0 / (k + 1.0))
                }
                (ShellKind::Bilayer, 2) => {
                    let k = i as f64;
                    2f64.powi(2 * i as i32 + 1)
                        * (1.0 / (2.0 * k + 3.0) + 1.0 / (2.0 * k + 1.0) - 1.0 / (k + 1.0))
                        - 1.0 / (2.0 * k + 1.0)
                        + 0.5 / (k + 1.0)
                }
                (ShellKind::Monolayer, _) => {
                    let p = (n + 2.0) / n;
                    -2.0 / (n * n - 4.0) * binom_real(p, 2 * i + 3) * n.powi(2 * i as i32 + 3)
                }
                (ShellKind::Bilayer, _) => {
                    let p = (n + 2.0) / n;
                    let q = 2.0 / n;
                    -2.0 / (n * n - 4.0) * binom_real(p, 2 * i + 3) * n.powi(2 * i as i32 + 3)
                        + 2.0 / (n - 2.0)
                            * binom_real(q, 2 * i + 2)
                            * (n / 2.0).powi(2 * i as i32 + 2)
                }
            };
            // Every term carries m^(2i+2) kappa^(2i) = m^2 x^(2i) / N^(2i).
            let term = ti * m * m * x_pow / n.powi(2 * i as i32);
            total += term;
            if term.abs() < 1e-17 * total.abs().max(m * m) {
                break;
            }
            x_pow *= x2;
        }
        total
    } else if dim == 2 {
        let u = x; // N = 2: x = 2 m kappa
        let k1 = 1.0 / kappa;
        let a = 0.25 / m * k1 * k1 * k1 + m * k1;
        let atanh = |t: f64| 0.5 * ((1.0 + t) / (1.0 - t)).ln();
        let base = a * atanh(u) + 0.5 * k1 * k1 * (1.0 - u * u).ln() - 0.5 * k1 * k1;
        match kind {
            ShellKind::Monolayer => base,
            ShellKind::Bilayer => {
                base - m * k1 * atanh(0.5 * u) - 0.5 * k1 * k1 * (1.0 - 0.25 * u * u).ln()
            }
        }
    } else {
        let p = (n + 2.0) / n;
        let k1 = 1.0 / kappa;
        let base = ((1.0 - x).powf(p) - (1.0 + x).powf(p)) / (n * n - 4.0) / m * k1 * k1 * k1;
        match kind {
            ShellKind::Monolayer => base + 2.0 / (n - 2.0) * k1 * k1,
            ShellKind::Bilayer => {
                let q = 2.0 / n;
                base + ((1.0 - 0.5 * x).powf(q) + (1.0 + 0.5 * x).powf(q)) / (n - 2.0) * k1 * k1
            }
        }
    }
}

/// Exact energy per mass of a shell at curvature kappa, evaluated stably for
/// any admissible kappa (including kappa -> 0, where it converges to the
/// planar monolayer/bilayer value).
pub fn exact_energy_per_mass(
    kind: ShellKind,
    dim: u32,
    m: f64,
    kappa: f64,
    params: &Params,
) -> Result<f64, RadialError> {
    if dim < 2 {
        return Err(RadialError::UnsupportedDim { dim });
    }
    if !(m > 0.0) {
        return Err(RadialError::InvalidRadial("m must be positive".into()));
    }
    if !(kappa >= 0.0) {
        return Err(RadialError::InvalidRadial("kappa must be >= 0".into()));
    }
    let n = dim as f64;
    let x = n * m * kappa;
    if x >= 1.0 {
        return Err(RadialError::RadiiCollapse { m, kappa });
    }
    let e = 1.0 - 1.0 / n;
    let interfacial = match kind {
        ShellKind::Monolayer => {
            ((1.0 - x).powf(e) * params.d_u0 + params.d_uv + (1.0 + x).powf(e) * params.d_v0) / m
        }
        ShellKind::Bilayer => {
            (((1.0 - x).powf(e) + (1.0 + x).powf(e)) * params.d_u0
                + ((1.0 - 0.5 * x).powf(e) + (1.0 + 0.5 * x).powf(e)) * params.d_uv)
                / m
        }
    };
    Ok(interfacial + nonlocal_per_mass(kind, dim, m, kappa))
}

/// Micelle in N dimensions: a solid U ball of radius r1 wrapped in a V shell
/// out to 2^(1/N) r1 (equal masses).
pub fn micelle_config(dim: u32, r1: f64) -> Result<RadialConfig, RadialError> {
    let r2 = 2f64.powf(1.0 / dim as f64) * r1;
    RadialConfig::new(dim, vec![0.0, r1, r2], vec![Phase::U, Phase::V])
}

/// Optimal micelle energy per unit mass in closed form:
///   N = 2:  3 (d_uv + d_v0 sqrt(2))^(2/3) (ln 2 - 1/2)^(1/3),
///   N >= 3: 2^(-1/3) 3N (d_uv + d_v0 2^(1-1/N))^(2/3)
///           ((N + 2 - N 2^(2/N)) / (N (N^2 - 4)))^(1/3).
pub fn micelle_closed_form(dim: u32, params: &Params) -> Result<f64, RadialError> {
    if dim < 2 {
        return Err(RadialError::UnsupportedDim { dim });
    }
    let n = dim as f64;
    Ok(if dim == 2 {
        3.0 * (params.d_uv + params.d_v0 * 2f64.sqrt()).powf(2.0 / 3.0)
            * (2f64.ln() - 0.5).cbrt()
    } else {
        2f64.powf(-1.0 / 3.0)
            * 3.0
            * n
            * (params.d_uv + params.d_v0 * 2f64.powf(1.0 - 1.0 / n)).powf(2.0 / 3.0)
            * ((n + 2.0 - n * 2f64.powf(2.0 / n)) / (n * (n * n - 4.0))).cbrt()
    })
}

/// Minimises micelle energy per unit mass over the core radius by
/// golden-section search on the exact radial energy. Returns the optimal
/// radius and the optimal energy per mass.
pub fn micelle_optimal(dim: u32, params: &Params) -> Result<(f64, f64), RadialError> {
    if dim < 2 {
        return Err(RadialError::UnsupportedDim { dim });
    }
    let mass_of = |r1: f64| unit_ball_volume(dim) * r1.powi(dim as i32);
    let per_mass = |r1: f64| -> f64 {
        let rc = micelle_config(dim, r1).expect("micelle radii are valid");
        let e = radial_energy(&rc, params).expect("micelle energy evaluates");
        e.total / mass_of(r1)
    };
    // The per-mass profile is A/r + B r^2; bracket around its known scale.
    let n = dim as f64;
    let a = n * (params.d_uv + params.d_v0 * 2f64.powf(1.0 - 1.0 / n));
    let b = if dim == 2 {
        2f64.ln() - 0.5
    } else {
        n * 2.0 * (n + 2.0 - n * 2f64.powf(2.0 / n)) / (n * (n * n - 4.0))
    };
    let r_scale = (a / (2.0 * b)).cbrt();
    let (r_opt, value) = golden_section_min(per_mass, r_scale / 10.0, r_scale * 10.0, 1e-9 * r_scale);
    Ok((r_opt, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_close;

    fn fig_params() -> Params {
        Params::from_d(1.0, 0.4, 0.6).unwrap()
    }

    #[test]
    fn validation_rejects_bad_radii() {
        assert!(RadialConfig::new(1, vec![0.0, 1.0], vec![Phase::U]).is_err());
        assert!(RadialConfig::new(3, vec![1.0, 0.5], vec![Phase::U]).is_err());
        // Unbalanced masses.
        assert!(RadialConfig::new(3, vec![0.0, 1.0, 1.5], vec![Phase::U, Phase::V]).is_err());
    }

    #[test]
    fn monolayer_radii_relations() {
        let r = monolayer_radii(3, 1.0, 0.1).unwrap();
        assert!(rel_close(
            r[2].powi(3) - r[1].powi(3),
            r[1].powi(3) - r[0].powi(3),
            1e-12
        ));
        assert!(matches!(
            monolayer_radii(3, 1.0, 0.5),
            Err(RadialError::RadiiCollapse { .. })
        ));
    }

    #[test]
    fn potential_slope_continuous_and_decays() {
        let rc = shell_config(ShellKind::Bilayer, 3, 1.0, 0.2).unwrap();
        let pot = radial_potential(&rc).unwrap();
        for w in pot.pieces().windows(2) {
            let r = w[0].r_hi;
            let left = -w[0].charge * r / 3.0 + w[0].c * r.powf(-2.0);
            let right = -w[1].charge * r / 3.0 + w[1].c * r.powf(-2.0);
            assert!((left - right).abs() < 1e-12);
        }
        let r_out = rc.radii()[3];
        assert!(pot.dphi(r_out).abs() < 1e-10);
        assert_eq!(pot.dphi(r_out + 1.0), 0.0);
        assert_eq!(pot.dphi(0.1), 0.0); // inside the inner H ball
    }

    #[test]
    fn closed_form_matches_march_monolayer() {
        for dim in [2u32, 3, 4, 5] {
            let n = dim as f64;
            for (r0, r1) in [(0.5f64, 1.0f64), (1.0, 1.7), (2.0, 2.3)] {
                let r2 = (2.0 * r1.powf(n) - r0.powf(n)).powf(1.0 / n);
                let rc =
                    RadialConfig::new(dim, vec![r0, r1, r2], vec![Phase::U, Phase::V]).unwrap();
                let e = radial_energy(&rc, &fig_params()).unwrap();
                let cf =
                    closed_form_energy(ShellKind::Monolayer, &[r0, r1, r2], dim, &fig_params())
                        .unwrap();
                assert!(
                    rel_close(e.total, cf, 1e-10),
                    "dim {dim} r0 {r0}: march {} vs closed {cf}",
                    e.total
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_march_bilayer() {
        for dim in [2u32, 3, 4, 5] {
            let n = dim as f64;
            for (r0, r1) in [(0.8f64, 1.0f64), (1.5, 1.9)] {
                let s = r1.powf(n) - r0.powf(n);
                let r2 = (r1.powf(n) + 2.0 * s).powf(1.0 / n);
                let r3 = (r1.powf(n) + 3.0 * s).powf(1.0 / n);
                let rc = RadialConfig::new(
                    dim,
                    vec![r0, r1, r2, r3],
                    vec![Phase::U, Phase::V, Phase::U],
                )
                .unwrap();
                let e = radial_energy(&rc, &fig_params()).unwrap();
                let cf = closed_form_energy(
                    ShellKind::Bilayer,
                    &[r0, r1, r2, r3],
                    dim,
                    &fig_params(),
                )
                .unwrap();
                assert!(
                    rel_close(e.total, cf, 1e-10),
                    "dim {dim} r0 {r0}: march {} vs closed {cf}",
                    e.total
                );
            }
        }
    }

    #[test]
    fn degenerate_layers_leave_pure_interfacial() {
        // Thin shells: nonlocal term vanishes like width^3.
        let dim = 3;
        let p = fig_params();
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let r0: f64 = 1.0;
            let r1 = (r0.powi(3) + eps).cbrt();
            let r2 = (r1.powi(3) + eps).cbrt();
            let rc = RadialConfig::new(dim, vec![r0, r1, r2], vec![Phase::U, Phase::V]).unwrap();
            let e = radial_energy(&rc, &p).unwrap();
            assert!(e.nonlocal < prev);
            prev = e.nonlocal;
        }
        assert!(prev < 1e-9);
    }

    #[test]
    fn relation_violation_rejected() {
        assert!(matches!(
            closed_form_energy(ShellKind::Monolayer, &[0.5, 1.0, 1.1], 3, &fig_params()),
            Err(RadialError::RelationViolated { .. })
        ));
    }

    #[test]
    fn expansion_planar_limits() {
        let p = fig_params();
        let mono = expansion_energy(ShellKind::Monolayer, 1.0, 0.0, 3, &p).unwrap();
        assert!(rel_close(mono, (1.0 + 0.6 + 0.4) + 2.0 / 3.0, 1e-14));
        let bi = expansion_energy(ShellKind::Bilayer, 1.0, 0.0, 3, &p).unwrap();
        assert!(rel_close(bi, 2.0 * (1.0 + 0.6) + 1.0 / 6.0, 1e-14));
    }

    #[test]
    fn exact_matches_radial_at_moderate_curvature() {
        let p = fig_params();
        for dim in [2u32, 3, 4] {
            for kappa in [0.05, 0.2, 0.4] {
                for kind in [ShellKind::Monolayer, ShellKind::Bilayer] {
                    let m = 0.8;
                    let rc = shell_config(kind, dim, m, kappa).unwrap();
                    let e = radial_energy(&rc, &p).unwrap();
                    let mass = rc.u_mass();
                    let exact = exact_energy_per_mass(kind, dim, m, kappa, &p).unwrap();
                    assert!(
                        rel_close(e.total / mass, exact, 1e-9),
                        "{kind:?} dim {dim} kappa {kappa}: {} vs {exact}",
                        e.total / mass
                    );
                }
            }
        }
    }

    #[test]
    fn series_and_direct_branches_agree() {
        let p = fig_params();
        for dim in [2u32, 3, 5] {
            for kind in [ShellKind::Monolayer, ShellKind::Bilayer] {
                // x = N m kappa strides the branch point at 0.5.
                let m = 1.0;
                let n = dim as f64;
                let k_lo = 0.499 / (n * m);
                let k_hi = 0.501 / (n * m);
                let lo = exact_energy_per_mass(kind, dim, m, k_lo, &p).unwrap();
                let hi = exact_energy_per_mass(kind, dim, m, k_hi, &p).unwrap();
                // Smooth function: crossing the branch point moves the value
                // by O(dk), not by a jump.
                assert!((hi - lo).abs() < 1e-2, "{kind:?} dim {dim}: {lo} vs {hi}");
                let mid_series = exact_energy_per_mass(kind, dim, m, 0.4999999 / (n * m), &p).unwrap();
                let mid_direct = exact_energy_per_mass(kind, dim, m, 0.5000001 / (n * m), &p).unwrap();
                assert!(
                    rel_close(mid_series, mid_direct, 1e-9),
                    "{kind:?} dim {dim}: series {mid_series} vs direct {mid_direct}"
                );
            }
        }
    }

    #[test]
    fn inner_band_swap_mirrors_tensions() {
        // Monolayer with inner V band == formula with d_u0 and d_v0 swapped.
        let p = fig_params();
        let dim = 3;
        let r = monolayer_radii(dim, 1.0, 0.1).unwrap();
        let swapped =
            RadialConfig::new(dim, r.to_vec(), vec![Phase::V, Phase::U]).unwrap();
        let e = radial_energy(&swapped, &p).unwrap();
        let cf = closed_form_energy(ShellKind::Monolayer, &r, dim, &p.swap_uv()).unwrap();
        assert!(rel_close(e.total, cf, 1e-10));
    }

    #[test]
    fn micelle_two_dimensional_optimum() {
        // d_uv = 0.7, d_v0 = 0.3.
        let p = Params::from_d(1.0, 0.3, 0.7).unwrap();
        let closed = micelle_closed_form(2, &p).unwrap();
        assert!((closed - 1.875).abs() < 1e-3);
        let (_, value) = micelle_optimal(2, &p).unwrap();
        assert!(rel_close(value, closed, 1e-6), "{value} vs {closed}");
    }

    #[test]
    fn micelle_beats_lamellae_never() {
        for dim in [2u32, 3, 4] {
            let p = fig_params();
            let (_, value) = micelle_optimal(dim, &p).unwrap();
            let lamellar = crate::energy::asymptotic_energy_per_mass(&p);
            assert!(value > lamellar, "dim {dim}: micelle {value} vs {lamellar}");
        }
    }

    #[test]
    fn micelle_closed_form_three_dimensions() {
        let p = fig_params();
        let (_, value) = micelle_optimal(3, &p).unwrap();
        let closed = micelle_closed_form(3, &p).unwrap();
        assert!(rel_close(value, closed, 1e-6), "{value} vs {closed}");
    }
}
