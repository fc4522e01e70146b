//! Stationarity of block configurations under constrained mass.
//!
//! A connected stationary structure has its interface positions pinned by an
//! equal-potential rule: the Poisson potential of u - v takes a single value
//! on all interfaces of one type. Interior interface moves leave the
//! interface counts (hence the interfacial energy) unchanged, so only the
//! nonlocal term has a nonzero first variation:
//!
//!   dE/dx_i = -2 phi(x_i) * [u - v](x_i),
//!
//! with [.] the jump across the interface. Projecting onto the tangent space
//! of the two mass constraints gives the stationarity residual; driving it to
//! zero with Newton on the block widths recovers the known width laws (inner
//! blocks equal, line end blocks exactly half) without hard-coding them.
//!
//! The split/join surgeries translate whole macrodomains along the potential:
//! joining across a gap never raises the energy; splitting at an interior
//! zero of phi' costs exactly the two new interfaces.

use crate::config::{Block, BlockConfig, ConfigError, Domain, Interface, InterfaceKind, Phase};
use crate::energy::{total_energy, EnergyError};
use crate::numeric::solve_dense;
use crate::params::Params;
use crate::potential::{potential_of, PiecewisePotential};
use serde::Serialize;

/// Absolute tolerance on phi'(x*) = 0 for split points.
pub const SLOPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum StationaryError {
    InvalidConfig(ConfigError),
    BadPattern(&'static str),
    /// Copolymer does not fit on the torus (needs 2M < L).
    Infeasible { needed: f64, available: f64 },
    NoConvergence { iterations: u32, residual: f64 },
    SingularSystem,
}

impl std::fmt::Display for StationaryError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StationaryError::InvalidConfig(e) => write!(f, "{e}"),
            StationaryError::BadPattern(msg) => write!(f, "{msg}"),
            StationaryError::Infeasible { needed, available } => write!(
                f,
                "structure needs width {needed} but the torus only has {available}"
            ),
            StationaryError::NoConvergence { iterations, residual } => write!(
                f,
                "width solver stalled after {iterations} iterations (residual {residual:.3e})"
            ),
            StationaryError::SingularSystem => write!(f, "singular Newton system"),
        }
    }
}

impl std::error::Error for StationaryError {}

impl From<ConfigError> for StationaryError {
    fn from(e: ConfigError) -> Self {
        StationaryError::InvalidConfig(e)
    }
}

/// Potential value at one interface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InterfacePhi {
    pub position: f64,
    pub kind: InterfaceKind,
    pub phi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationarityReport {
    pub phi_at_interfaces: Vec<InterfacePhi>,
    /// Max spread of phi within one interface type, maximised over types.
    pub equal_phi_residual: f64,
    /// Euclidean norm of the energy gradient projected onto the tangent
    /// space of the two mass constraints.
    pub projected_gradient_norm: f64,
}

fn interface_gradient(pot: &PiecewisePotential, interfaces: &[Interface]) -> Vec<f64> {
    interfaces
        .iter()
        .map(|i| -2.0 * pot.phi(i.position) * i.jump())
        .collect()
}

/// Projects `g` onto the orthogonal complement of span{a, b}.
fn project_out(g: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(p, q)| p * q).sum() };
    let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
    let (ga, gb) = (dot(g, a), dot(g, b));
    let det = aa * bb - ab * ab;
    let (alpha, beta) = if det.abs() > 1e-12 * (aa * bb).max(1.0) {
        ((ga * bb - gb * ab) / det, (gb * aa - ga * ab) / det)
    } else if aa > 0.0 {
        (ga / aa, 0.0)
    } else if bb > 0.0 {
        (0.0, gb / bb)
    } else {
        (0.0, 0.0)
    };
    g.iter()
        .enumerate()
        .map(|(i, gi)| gi - alpha * a[i] - beta * b[i])
        .collect()
}

/// Stationarity residuals of a configuration: per-type potential spread and
/// the projected gradient norm. The surface tensions drop out (interface
/// counts are fixed under interior moves), so no parameters enter.
pub fn stationarity_report(config: &BlockConfig) -> Result<StationarityReport, StationaryError> {
    let pot = potential_of(config)?;
    let interfaces = config.interfaces();
    let phi_at_interfaces: Vec<InterfacePhi> = interfaces
        .iter()
        .map(|i| InterfacePhi {
            position: i.position,
            kind: i.kind,
            phi: pot.phi(i.position),
        })
        .collect();

    let mut equal_phi_residual = 0.0f64;
    for kind in [InterfaceKind::U0, InterfaceKind::V0, InterfaceKind::UV] {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in phi_at_interfaces.iter().filter(|p| p.kind == kind) {
            lo = lo.min(p.phi);
            hi = hi.max(p.phi);
        }
        if hi > lo {
            equal_phi_residual = equal_phi_residual.max(hi - lo);
        }
    }

    let g = interface_gradient(&pot, &interfaces);
    let a: Vec<f64> = interfaces.iter().map(|i| i.jump_u).collect();
    let b: Vec<f64> = interfaces.iter().map(|i| i.jump_v).collect();
    let proj = project_out(&g, &a, &b);
    let projected_gradient_norm = proj.iter().map(|x| x * x).sum::<f64>().sqrt();

    Ok(StationarityReport {
        phi_at_interfaces,
        equal_phi_residual,
        projected_gradient_norm,
    })
}

/// Newton system on block widths with the last U and last V widths
/// eliminated by the two mass constraints.
struct WidthSystem {
    domain: Domain,
    phases: Vec<Phase>,
    mass: f64,
    last_u: usize,
    last_v: usize,
    /// Indices of the independent widths.
    free: Vec<usize>,
    torus_gap: Option<f64>,
}

impl WidthSystem {
    fn new(pattern: &[Phase], mass: f64, domain: Domain) -> Result<Self, StationaryError> {
        if pattern.len() < 2 {
            return Err(StationaryError::BadPattern("pattern needs at least two blocks"));
        }
        if pattern.iter().any(|p| *p == Phase::H) {
            return Err(StationaryError::BadPattern("pattern must alternate U and V"));
        }
        if pattern.windows(2).any(|w| w[0] == w[1]) {
            return Err(StationaryError::BadPattern("pattern must alternate U and V"));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(StationaryError::BadPattern("mass must be positive"));
        }
        let torus_gap = match domain {
            Domain::Line => None,
            Domain::Torus { length } => {
                let gap = length - 2.0 * mass;
                if gap <= 0.0 {
                    return Err(StationaryError::Infeasible {
                        needed: 2.0 * mass,
                        available: length,
                    });
                }
                Some(gap)
            }
        };
        let last_u = pattern.iter().rposition(|p| *p == Phase::U).unwrap();
        let last_v = pattern.iter().rposition(|p| *p == Phase::V).unwrap();
        let free = (0..pattern.len())
            .filter(|j| *j != last_u && *j != last_v)
            .collect();
        Ok(WidthSystem {
            domain,
            phases: pattern.to_vec(),
            mass,
            last_u,
            last_v,
            free,
            torus_gap,
        })
    }

    /// Monolayers in the pattern.
    fn layer_count(&self) -> usize {
        self.phases.len() - 1
    }

    /// Initial guess: the line answer (ends m, interiors 2m).
    fn initial_widths(&self) -> Vec<f64> {
        let n = self.layer_count() as f64;
        let m = self.mass / n;
        let last = self.phases.len() - 1;
        (0..self.phases.len())
            .map(|j| if j == 0 || j == last { m } else { 2.0 * m })
            .collect()
    }

    /// Restores the two eliminated widths from the free ones. None when any
    /// width becomes non-positive.
    fn complete(&self, free_widths: &[f64]) -> Option<Vec<f64>> {
        let mut widths = vec![0.0; self.phases.len()];
        for (k, &j) in self.free.iter().enumerate() {
            if free_widths[k] <= 0.0 {
                return None;
            }
            widths[j] = free_widths[k];
        }
        for (phase, dep) in [(Phase::U, self.last_u), (Phase::V, self.last_v)] {
            let other: f64 = self
                .phases
                .iter()
                .zip(widths.iter())
                .enumerate()
                .filter(|(j, (p, _))| **p == phase && *j != dep)
                .map(|(_, (_, w))| *w)
                .sum();
            let w = self.mass - other;
            if w <= 0.0 {
                return None;
            }
            widths[dep] = w;
        }
        Some(widths)
    }

    fn config(&self, widths: &[f64]) -> Result<BlockConfig, ConfigError> {
        let mut blocks: Vec<Block> = self
            .phases
            .iter()
            .zip(widths)
            .map(|(&phase, &width)| Block { phase, width })
            .collect();
        match self.domain {
            Domain::Line => BlockConfig::new(Domain::Line, blocks),
            Domain::Torus { .. } => {
                blocks.push(Block {
                    phase: Phase::H,
                    width: self.torus_gap.unwrap(),
                });
                BlockConfig::new(self.domain, blocks)
            }
        }
    }

    /// Reduced gradient at the given free widths, or None if infeasible.
    ///
    /// dE/dw_j is the sum of interface gradients at the right edges of blocks
    /// j..B; the elimination subtracts the same sum for the dependent block
    /// of the matching phase.
    fn reduced_gradient(&self, free_widths: &[f64]) -> Option<Vec<f64>> {
        let widths = self.complete(free_widths)?;
        let config = self.config(&widths).ok()?;
        let pot = potential_of(&config).ok()?;
        let interfaces = config.interfaces();
        let g = interface_gradient(&pot, &interfaces);

        // interfaces[0] is the anchor (line left edge / torus seam) and never
        // moves; interfaces[i] for i >= 1 sits at the right edge of block
        // i - 1 and shifts with every width w_k, k <= i - 1.
        let b = self.phases.len();
        debug_assert_eq!(interfaces.len(), b + 1);
        let mut de_dw = vec![0.0; b];
        let mut tail = 0.0;
        for j in (0..b).rev() {
            tail += g[j + 1];
            de_dw[j] = tail;
        }
        Some(
            self.free
                .iter()
                .map(|&j| {
                    let dep = if self.phases[j] == Phase::U {
                        self.last_u
                    } else {
                        self.last_v
                    };
                    de_dw[j] - de_dw[dep]
                })
                .collect(),
        )
    }
}

/// Result of the stationary-width solve.
#[derive(Debug, Clone)]
pub struct StationarySolution {
    pub config: BlockConfig,
    pub report: StationarityReport,
    pub iterations: u32,
}

/// Solves for the stationary block widths of an alternating pattern with
/// total U-mass `mass`, on the line or a torus.
///
/// Newton iteration on the reduced width gradient; the Jacobian is formed by
/// central differences of the analytic gradient, with backtracking to keep
/// every width positive. Stationarity is parameter-free, so no surface
/// tensions enter.
pub fn solve_stationary(
    pattern: &[Phase],
    mass: f64,
    domain: Domain,
) -> Result<StationarySolution, StationaryError> {
    let system = WidthSystem::new(pattern, mass, domain)?;
    let mut free: Vec<f64> = {
        let init = system.initial_widths();
        system.free.iter().map(|&j| init[j]).collect()
    };
    let n = free.len();
    let finish = |free: &[f64], iterations: u32| -> Result<StationarySolution, StationaryError> {
        let widths = system.complete(free).ok_or(StationaryError::NoConvergence {
            iterations,
            residual: f64::NAN,
        })?;
        let config = system.config(&widths)?;
        let report = stationarity_report(&config)?;
        Ok(StationarySolution {
            config,
            report,
            iterations,
        })
    };
    if n == 0 {
        // Two-block patterns: the mass constraints pin both widths.
        return finish(&free, 0);
    }

    let scale = (mass / system.layer_count() as f64).powi(2).max(1e-6);
    let tol = 1e-13 * scale;
    let max_iter = 100u32;
    let mut residual = system
        .reduced_gradient(&free)
        .ok_or(StationaryError::SingularSystem)?;

    for iter in 0..max_iter {
        let norm = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if norm <= tol {
            return finish(&free, iter);
        }
        let mut jac = vec![0.0; n * n];
        for col in 0..n {
            let h = 1e-6 * free[col].abs().max(1e-3);
            let mut fp = free.clone();
            fp[col] += h;
            let mut fm = free.clone();
            fm[col] -= h;
            let gp = system
                .reduced_gradient(&fp)
                .ok_or(StationaryError::SingularSystem)?;
            let gm = system
                .reduced_gradient(&fm)
                .ok_or(StationaryError::SingularSystem)?;
            for row in 0..n {
                jac[row * n + col] = (gp[row] - gm[row]) / (2.0 * h);
            }
        }
        let mut rhs: Vec<f64> = residual.iter().map(|r| -r).collect();
        let step = solve_dense(&mut jac, &mut rhs, n).ok_or(StationaryError::SingularSystem)?;

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = free.iter().zip(&step).map(|(w, s)| w + t * s).collect();
            if let Some(g) = system.reduced_gradient(&trial) {
                let gnorm = g.iter().fold(0.0f64, |m, r| m.max(r.abs()));
                if gnorm < norm || gnorm <= tol {
                    free = trial;
                    residual = g;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(StationaryError::NoConvergence {
                iterations: iter,
                residual: norm,
            });
        }
    }
    Err(StationaryError::NoConvergence {
        iterations: max_iter,
        residual: residual.iter().fold(0.0f64, |m, r| m.max(r.abs())),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurgeryError {
    InvalidConfig(ConfigError),
    Energy(EnergyError),
    /// The named interval is not an H gap, or the translation exceeds it.
    NotAGap(String),
    /// phi' does not vanish at the requested split point.
    SlopeNotZero { at: f64, slope: f64 },
    /// Split point is not interior to a copolymer block.
    OutsideBlock { at: f64 },
    /// Splitting would change the total torus length.
    SplitOnTorus,
}

impl std::fmt::Display for SurgeryError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurgeryError::InvalidConfig(e) => write!(f, "{e}"),
            SurgeryError::Energy(e) => write!(f, "{e}"),
            SurgeryError::NotAGap(msg) => write!(f, "{msg}"),
            SurgeryError::SlopeNotZero { at, slope } => {
                write!(f, "phi'({at}) = {slope:.3e} is not zero")
            }
            SurgeryError::OutsideBlock { at } => {
                write!(f, "split point {at} is not interior to a copolymer block")
            }
            SurgeryError::SplitOnTorus => write!(f, "splitting is defined on the line only"),
        }
    }
}

impl std::error::Error for SurgeryError {}

impl From<ConfigError> for SurgeryError {
    fn from(e: ConfigError) -> Self {
        SurgeryError::InvalidConfig(e)
    }
}

impl From<EnergyError> for SurgeryError {
    fn from(e: EnergyError) -> Self {
        SurgeryError::Energy(e)
    }
}

/// A macrodomain surgery: split a block at a zero of phi', or close an H gap
/// by translating everything beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surgery {
    /// Insert an H gap of width `gap` at coordinate `at`, which must lie
    /// strictly inside a copolymer block with phi'(at) = 0.
    Split { at: f64, gap: f64 },
    /// Shrink the H block with index `gap_index` by `amount` (closing it
    /// entirely when the amount equals its width). On the torus the removed
    /// width moves to the next H block around, keeping the length fixed.
    Join { gap_index: usize, amount: f64 },
}

#[derive(Debug, Clone)]
pub struct SurgeryResult {
    pub config: BlockConfig,
    /// Energy after minus energy before.
    pub energy_delta: f64,
}

/// Applies a split or join and reports the exact energy change.
pub fn split_join(
    config: &BlockConfig,
    params: &Params,
    surgery: Surgery,
) -> Result<SurgeryResult, SurgeryError> {
    let before = total_energy(config, params)?.total;
    let new_config = match surgery {
        Surgery::Split { at, gap } => split_config(config, at, gap)?,
        Surgery::Join { gap_index, amount } => join_config(config, gap_index, amount)?,
    };
    let after = total_energy(&new_config, params)?.total;
    Ok(SurgeryResult {
        config: new_config,
        energy_delta: after - before,
    })
}

fn split_config(config: &BlockConfig, at: f64, gap: f64) -> Result<BlockConfig, SurgeryError> {
    if matches!(config.domain(), Domain::Torus { .. }) {
        return Err(SurgeryError::SplitOnTorus);
    }
    if !(gap.is_finite() && gap > 0.0) {
        return Err(SurgeryError::NotAGap(format!("gap width {gap} must be positive")));
    }
    let edges = config.edges();
    let mut target = None;
    for (i, block) in config.blocks().iter().enumerate() {
        if at > edges[i] && at < edges[i + 1] && block.phase != Phase::H {
            target = Some(i);
            break;
        }
    }
    let Some(i) = target else {
        return Err(SurgeryError::OutsideBlock { at });
    };
    let pot = potential_of(config)?;
    let slope = pot.dphi(at);
    if slope.abs() > SLOPE_TOL {
        return Err(SurgeryError::SlopeNotZero { at, slope });
    }
    let mut blocks: Vec<Block> = config.blocks().to_vec();
    let phase = blocks[i].phase;
    let left_width = at - edges[i];
    let right_width = edges[i + 1] - at;
    blocks.splice(
        i..=i,
        [
            Block { phase, width: left_width },
            Block { phase: Phase::H, width: gap },
            Block { phase, width: right_width },
        ],
    );
    Ok(BlockConfig::new(Domain::Line, blocks)?)
}

fn join_config(
    config: &BlockConfig,
    gap_index: usize,
    amount: f64,
) -> Result<BlockConfig, SurgeryError> {
    let blocks = config.blocks();
    let Some(block) = blocks.get(gap_index) else {
        return Err(SurgeryError::NotAGap(format!("no block at index {gap_index}")));
    };
    if block.phase != Phase::H {
        return Err(SurgeryError::NotAGap(format!(
            "block {gap_index} is {} rather than H",
            block.phase
        )));
    }
    if !(amount > 0.0 && amount <= block.width * (1.0 + 1e-12)) {
        return Err(SurgeryError::NotAGap(format!(
            "translation {amount} exceeds the gap width {}",
            block.width
        )));
    }
    let closing = amount >= block.width * (1.0 - 1e-12);
    let mut new_blocks = blocks.to_vec();
    if let Domain::Torus { .. } = config.domain() {
        // Keep the total length: hand the removed width to another H gap.
        let other = (gap_index + 1..gap_index + blocks.len())
            .map(|k| k % blocks.len())
            .find(|&k| k != gap_index && blocks[k].phase == Phase::H);
        let Some(other) = other else {
            return Err(SurgeryError::NotAGap(
                "torus join needs a second H gap to absorb the width".into(),
            ));
        };
        new_blocks[other].width += amount;
    }
    if closing {
        new_blocks.remove(gap_index);
    } else {
        new_blocks[gap_index].width -= amount;
    }
    // Closing a gap can bring same-phase blocks together; merge them before
    // validating (the merge is this explicit, visible step).
    let mut merged: Vec<Block> = Vec::with_capacity(new_blocks.len());
    for b in new_blocks {
        match merged.last_mut() {
            Some(prev) if prev.phase == b.phase => prev.width += b.width,
            _ => merged.push(b),
        }
    }
    if matches!(config.domain(), Domain::Torus { .. })
        && merged.len() > 1
        && merged.first().map(|b| b.phase) == merged.last().map(|b| b.phase)
    {
        let first = merged.remove(0);
        merged.last_mut().unwrap().width += first.width;
    }
    Ok(BlockConfig::new(config.domain(), merged)?)
}
