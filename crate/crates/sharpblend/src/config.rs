//! Block configurations: ordered phase-labelled intervals on the line or a
//! torus, housing the characteristic-function pair (u, v).
//!
//! Configurations are anchored: the first block starts at coordinate 0. On
//! the line an implicit homopolymer phase extends to infinity on both sides;
//! on a torus of length L the blocks tile [0, L) exactly and the list wraps.

use crate::params::REL_TOL;
use serde::{Deserialize, Serialize};

/// The three phases. U and V carry charge +1 and -1 in u - v; the
/// homopolymer phase H carries 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    U,
    V,
    H,
}

impl Phase {
    pub fn charge(self) -> f64 {
        match self {
            Phase::U => 1.0,
            Phase::V => -1.0,
            Phase::H => 0.0,
        }
    }

    /// U <-> V, H fixed.
    pub fn swapped(self) -> Phase {
        match self {
            Phase::U => Phase::V,
            Phase::V => Phase::U,
            Phase::H => Phase::H,
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::U => "U",
            Phase::V => "V",
            Phase::H => "H",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Domain {
    Line,
    Torus {
        #[serde(rename = "L")]
        length: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub phase: Phase,
    pub width: f64,
}

/// Interface types. Mirrored orientations (U-0 and 0-U, ...) share a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InterfaceKind {
    U0,
    V0,
    UV,
}

impl InterfaceKind {
    pub fn between(a: Phase, b: Phase) -> Option<InterfaceKind> {
        use Phase::*;
        match (a, b) {
            (U, H) | (H, U) => Some(InterfaceKind::U0),
            (V, H) | (H, V) => Some(InterfaceKind::V0),
            (U, V) | (V, U) => Some(InterfaceKind::UV),
            _ => None,
        }
    }
}

/// One interface of a configuration: position, type, and the jumps of u, v
/// (right value minus left value) used by stationarity calculations.
#[derive(Debug, Clone, Copy)]
pub struct Interface {
    pub position: f64,
    pub kind: InterfaceKind,
    pub jump_u: f64,
    pub jump_v: f64,
}

impl Interface {
    /// Jump of u - v across the interface.
    pub fn jump(&self) -> f64 {
        self.jump_u - self.jump_v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFiniteWidth { index: usize },
    NonPositiveWidth { index: usize, width: f64 },
    AdjacentSamePhase { left: usize, right: usize },
    EdgeHBlockOnLine { index: usize },
    MassImbalance { u_mass: f64, v_mass: f64 },
    TorusWidthMismatch { sum: f64, length: f64 },
    BadTorusLength { length: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonFiniteWidth { index } => write!(f, "block {index} has non-finite width"),
            Violation::NonPositiveWidth { index, width } => {
                write!(f, "block {index} has non-positive width {width}")
            }
            Violation::AdjacentSamePhase { left, right } => {
                write!(f, "blocks {left} and {right} share a phase")
            }
            Violation::EdgeHBlockOnLine { index } => write!(
                f,
                "block {index} is an H block at the edge of a line configuration"
            ),
            Violation::MassImbalance { u_mass, v_mass } => {
                write!(f, "U mass {u_mass} != V mass {v_mass}")
            }
            Violation::TorusWidthMismatch { sum, length } => {
                write!(f, "torus block widths sum to {sum}, expected {length}")
            }
            Violation::BadTorusLength { length } => {
                write!(f, "torus length {length} is not positive and finite")
            }
        }
    }
}

/// Report-style validation output: every violated invariant, not just the
/// first one.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub Vec<Violation>);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid configuration:")?;
        for v in &self.0 {
            write!(f, " {v};")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Checks all admissibility invariants and reports each violation.
pub fn validate_config(domain: Domain, blocks: &[Block]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut widths_ok = true;
    for (i, b) in blocks.iter().enumerate() {
        if !b.width.is_finite() {
            report.violations.push(Violation::NonFiniteWidth { index: i });
            widths_ok = false;
        } else if b.width <= 0.0 {
            report.violations.push(Violation::NonPositiveWidth {
                index: i,
                width: b.width,
            });
            widths_ok = false;
        }
    }
    for i in 1..blocks.len() {
        if blocks[i - 1].phase == blocks[i].phase {
            report.violations.push(Violation::AdjacentSamePhase {
                left: i - 1,
                right: i,
            });
        }
    }
    match domain {
        Domain::Line => {
            // The implicit outer phase is H, so edge H blocks would repeat it.
            if let Some(first) = blocks.first() {
                if first.phase == Phase::H {
                    report.violations.push(Violation::EdgeHBlockOnLine { index: 0 });
                }
            }
            if blocks.len() > 1 {
                if let Some(last) = blocks.last() {
                    if last.phase == Phase::H {
                        report.violations.push(Violation::EdgeHBlockOnLine {
                            index: blocks.len() - 1,
                        });
                    }
                }
            }
        }
        Domain::Torus { length } => {
            if !(length.is_finite() && length > 0.0) {
                report.violations.push(Violation::BadTorusLength { length });
            } else if widths_ok {
                let sum: f64 = blocks.iter().map(|b| b.width).sum();
                if (sum - length).abs() > REL_TOL * length.max(1.0) {
                    report
                        .violations
                        .push(Violation::TorusWidthMismatch { sum, length });
                }
                if blocks.len() > 1 && blocks.first().map(|b| b.phase) == blocks.last().map(|b| b.phase)
                {
                    report.violations.push(Violation::AdjacentSamePhase {
                        left: blocks.len() - 1,
                        right: 0,
                    });
                }
            }
        }
    }
    if widths_ok {
        let u: f64 = blocks
            .iter()
            .filter(|b| b.phase == Phase::U)
            .map(|b| b.width)
            .sum();
        let v: f64 = blocks
            .iter()
            .filter(|b| b.phase == Phase::V)
            .map(|b| b.width)
            .sum();
        if (u - v).abs() > REL_TOL * u.max(v).max(1.0) {
            report
                .violations
                .push(Violation::MassImbalance { u_mass: u, v_mass: v });
        }
    }
    report
}

/// A validated block configuration. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct BlockConfig {
    domain: Domain,
    blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    domain: Domain,
    blocks: Vec<Block>,
}

impl TryFrom<RawConfig> for BlockConfig {
    type Error = ConfigError;
    fn try_from(raw: RawConfig) -> Result<Self, Self::Error> {
        BlockConfig::new(raw.domain, raw.blocks)
    }
}

impl From<BlockConfig> for RawConfig {
    fn from(c: BlockConfig) -> Self {
        RawConfig {
            domain: c.domain,
            blocks: c.blocks,
        }
    }
}

impl BlockConfig {
    pub fn new(domain: Domain, blocks: Vec<Block>) -> Result<Self, ConfigError> {
        let report = validate_config(domain, &blocks);
        if report.is_valid() {
            Ok(BlockConfig { domain, blocks })
        } else {
            Err(ConfigError(report.violations))
        }
    }

    /// Convenience constructor from (phase, width) pairs on the line.
    pub fn line(blocks: &[(Phase, f64)]) -> Result<Self, ConfigError> {
        BlockConfig::new(
            Domain::Line,
            blocks
                .iter()
                .map(|&(phase, width)| Block { phase, width })
                .collect(),
        )
    }

    pub fn torus(length: f64, blocks: &[(Phase, f64)]) -> Result<Self, ConfigError> {
        BlockConfig::new(
            Domain::Torus { length },
            blocks
                .iter()
                .map(|&(phase, width)| Block { phase, width })
                .collect(),
        )
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Right endpoints of the blocks, prefixed with the anchor 0.
    pub fn edges(&self) -> Vec<f64> {
        let mut xs = Vec::with_capacity(self.blocks.len() + 1);
        let mut x = 0.0;
        xs.push(x);
        for b in &self.blocks {
            x += b.width;
            xs.push(x);
        }
        xs
    }

    pub fn total_width(&self) -> f64 {
        self.blocks.iter().map(|b| b.width).sum()
    }

    pub fn u_mass(&self) -> f64 {
        self.phase_mass(Phase::U)
    }

    pub fn v_mass(&self) -> f64 {
        self.phase_mass(Phase::V)
    }

    fn phase_mass(&self, phase: Phase) -> f64 {
        self.blocks
            .iter()
            .filter(|b| b.phase == phase)
            .map(|b| b.width)
            .sum()
    }

    /// Total variation of the indicator of the given phase: twice the number
    /// of blocks of that phase in 1-D (every block boundary is a jump).
    pub fn perimeter(&self, phase: Phase) -> f64 {
        self.interfaces()
            .iter()
            .filter(|i| match phase {
                Phase::U => i.jump_u != 0.0,
                Phase::V => i.jump_v != 0.0,
                Phase::H => i.jump_u + i.jump_v != 0.0,
            })
            .count() as f64
    }

    /// Perimeter of the support (jumps of u + v).
    pub fn support_perimeter(&self) -> f64 {
        self.perimeter(Phase::H)
    }

    /// All interfaces in position order. On the line this includes the two
    /// outer boundaries against the implicit H phase; on the torus the seam
    /// interface between the last and first block is reported at position 0.
    pub fn interfaces(&self) -> Vec<Interface> {
        let mut out = Vec::new();
        if self.blocks.is_empty() {
            return out;
        }
        let edges = self.edges();
        let make = |position: f64, left: Phase, right: Phase| -> Option<Interface> {
            InterfaceKind::between(left, right).map(|kind| Interface {
                position,
                kind,
                jump_u: f64::from(right == Phase::U) - f64::from(left == Phase::U),
                jump_v: f64::from(right == Phase::V) - f64::from(left == Phase::V),
            })
        };
        match self.domain {
            Domain::Line => {
                if let Some(i) = make(0.0, Phase::H, self.blocks[0].phase) {
                    out.push(i);
                }
                for k in 1..self.blocks.len() {
                    if let Some(i) = make(edges[k], self.blocks[k - 1].phase, self.blocks[k].phase)
                    {
                        out.push(i);
                    }
                }
                let last = self.blocks.len();
                if let Some(i) = make(edges[last], self.blocks[last - 1].phase, Phase::H) {
                    out.push(i);
                }
            }
            Domain::Torus { .. } => {
                if self.blocks.len() > 1 {
                    if let Some(i) = make(
                        0.0,
                        self.blocks[self.blocks.len() - 1].phase,
                        self.blocks[0].phase,
                    ) {
                        out.push(i);
                    }
                }
                for k in 1..self.blocks.len() {
                    if let Some(i) = make(edges[k], self.blocks[k - 1].phase, self.blocks[k].phase)
                    {
                        out.push(i);
                    }
                }
            }
        }
        out
    }

    /// Phase at coordinate x (left-closed blocks). On the line, H outside the
    /// support; on the torus, x is taken modulo L.
    pub fn phase_at(&self, x: f64) -> Phase {
        let x = match self.domain {
            Domain::Line => x,
            Domain::Torus { length } => x.rem_euclid(length),
        };
        if x < 0.0 {
            return Phase::H;
        }
        let mut lo = 0.0;
        for b in &self.blocks {
            let hi = lo + b.width;
            if x < hi {
                return b.phase;
            }
            lo = hi;
        }
        Phase::H
    }

    /// Reversed block order; validity-preserving.
    pub fn mirror(&self) -> BlockConfig {
        let mut blocks = self.blocks.clone();
        blocks.reverse();
        BlockConfig {
            domain: self.domain,
            blocks,
        }
    }

    /// U <-> V everywhere; validity-preserving.
    pub fn swap_phases(&self) -> BlockConfig {
        BlockConfig {
            domain: self.domain,
            blocks: self
                .blocks
                .iter()
                .map(|b| Block {
                    phase: b.phase.swapped(),
                    width: b.width,
                })
                .collect(),
        }
    }

    /// Torus only: cyclically rotates the block list so block `k` becomes the
    /// anchor. The structure is unchanged up to a rotation of the torus.
    pub fn rotated(&self, k: usize) -> BlockConfig {
        if self.blocks.is_empty() {
            return self.clone();
        }
        let k = k % self.blocks.len();
        let mut blocks = self.blocks[k..].to_vec();
        blocks.extend_from_slice(&self.blocks[..k]);
        BlockConfig {
            domain: self.domain,
            blocks,
        }
    }

    /// Dilates every width (and the torus length) by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<BlockConfig, ConfigError> {
        let domain = match self.domain {
            Domain::Line => Domain::Line,
            Domain::Torus { length } => Domain::Torus {
                length: length * lambda,
            },
        };
        BlockConfig::new(
            domain,
            self.blocks
                .iter()
                .map(|b| Block {
                    phase: b.phase,
                    width: b.width * lambda,
                })
                .collect(),
        )
    }

    /// Merges adjacent same-phase blocks. Constructions (joins in
    /// particular) can produce them; merging is explicit rather than silent
    /// so solver pathologies stay visible.
    pub fn normalized(self) -> BlockConfig {
        let mut blocks: Vec<Block> = Vec::with_capacity(self.blocks.len());
        for b in self.blocks {
            match blocks.last_mut() {
                Some(prev) if prev.phase == b.phase => prev.width += b.width,
                _ => blocks.push(b),
            }
        }
        BlockConfig {
            domain: self.domain,
            blocks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monolayer_is_valid() {
        let c = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 1.0)]).unwrap();
        assert_eq!(c.u_mass(), 1.0);
        assert_eq!(c.interfaces().len(), 3);
    }

    #[test]
    fn mass_imbalance_reported() {
        let report = validate_config(
            Domain::Line,
            &[
                Block {
                    phase: Phase::U,
                    width: 1.0,
                },
                Block {
                    phase: Phase::V,
                    width: 2.0,
                },
            ],
        );
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MassImbalance { .. })));
    }

    #[test]
    fn torus_two_block_valid() {
        let c = BlockConfig::torus(1.0, &[(Phase::U, 0.5), (Phase::V, 0.5)]).unwrap();
        assert_eq!(c.interfaces().len(), 2);
    }

    #[test]
    fn torus_wrap_adjacency() {
        let r = validate_config(
            Domain::Torus { length: 2.0 },
            &[
                Block {
                    phase: Phase::U,
                    width: 0.5,
                },
                Block {
                    phase: Phase::V,
                    width: 1.0,
                },
                Block {
                    phase: Phase::U,
                    width: 0.5,
                },
            ],
        );
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::AdjacentSamePhase { left: 2, right: 0 })));
    }

    #[test]
    fn interior_h_block_allowed() {
        // U-H-U with a balancing V elsewhere is admissible.
        let c = BlockConfig::line(&[
            (Phase::U, 1.0),
            (Phase::H, 0.5),
            (Phase::U, 1.0),
            (Phase::V, 2.0),
        ]);
        assert!(c.is_ok());
    }

    #[test]
    fn edge_h_block_rejected_on_line() {
        let r = validate_config(
            Domain::Line,
            &[
                Block {
                    phase: Phase::H,
                    width: 1.0,
                },
                Block {
                    phase: Phase::U,
                    width: 1.0,
                },
                Block {
                    phase: Phase::V,
                    width: 1.0,
                },
            ],
        );
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::EdgeHBlockOnLine { index: 0 })));
    }

    #[test]
    fn zero_width_rejected() {
        let r = validate_config(
            Domain::Line,
            &[
                Block {
                    phase: Phase::U,
                    width: 0.0,
                },
                Block {
                    phase: Phase::V,
                    width: 0.0,
                },
            ],
        );
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonPositiveWidth { .. })));
    }

    #[test]
    fn mirror_and_swap_preserve_validity() {
        let c = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 2.0), (Phase::U, 1.0)]).unwrap();
        let m = c.mirror();
        assert!(validate_config(m.domain(), m.blocks()).is_valid());
        let s = c.swap_phases();
        assert!(validate_config(s.domain(), s.blocks()).is_valid());
        assert_eq!(s.u_mass(), c.v_mass());
    }

    #[test]
    fn normalize_merges_neighbours() {
        let c = BlockConfig {
            domain: Domain::Line,
            blocks: vec![
                Block {
                    phase: Phase::U,
                    width: 1.0,
                },
                Block {
                    phase: Phase::U,
                    width: 0.5,
                },
                Block {
                    phase: Phase::V,
                    width: 1.5,
                },
            ],
        };
        let n = c.normalized();
        assert_eq!(n.blocks().len(), 2);
        assert_eq!(n.blocks()[0].width, 1.5);
    }

    #[test]
    fn json_round_trip() {
        let c = BlockConfig::torus(1.0, &[(Phase::U, 0.5), (Phase::V, 0.5)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains(r#""type":"torus""#) && s.contains(r#""L":1.0"#));
        let back: BlockConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        // Schema shape from the interface contract.
        let c2: BlockConfig = serde_json::from_str(
            r#"{"domain":{"type":"line"},"blocks":[{"phase":"U","width":1.0},{"phase":"V","width":1.0}]}"#,
        )
        .unwrap();
        assert_eq!(c2.blocks().len(), 2);
        // Invalid payloads are rejected at parse time.
        assert!(serde_json::from_str::<BlockConfig>(
            r#"{"domain":{"type":"line"},"blocks":[{"phase":"U","width":1.0},{"phase":"V","width":2.0}]}"#,
        )
        .is_err());
    }
}
