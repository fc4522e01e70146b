//! Exact Poisson potentials of u - v in one dimension.
//!
//! On each block the source u - v is a constant charge in {-1, 0, +1}, so the
//! potential phi solving -phi'' = u - v is piecewise quadratic with an affine
//! derivative. Both are represented by exact coefficients; every downstream
//! integral (the H^-1 norm in particular) is closed form, with no quadrature
//! anywhere on the 1-D path.
//!
//! Normalisation: on the line phi(x0) = 0 and phi' vanishes outside the
//! support (mass balance makes the outgoing slope zero). On the torus the
//! free constant in phi' is fixed by periodicity (mean zero slope) and the
//! additive constant by mean-zero phi.

use crate::config::{BlockConfig, ConfigError, Domain, validate_config};

/// phi(x) = a x^2 + b x + c on one interval, in global coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    fn slope(&self, x: f64) -> f64 {
        2.0 * self.a * x + self.b
    }

    /// Exact integral of phi'(x)^2 over [lo, hi].
    fn dirichlet(&self, lo: f64, hi: f64) -> f64 {
        // phi' = 2a x + b is affine: integrate p^2 + p q w + q^2 w^2 / 3
        // with p = phi'(lo), q = 2a, w = hi - lo.
        let w = hi - lo;
        let p = self.slope(lo);
        let q = 2.0 * self.a;
        w * (p * p + p * q * w + q * q * w * w / 3.0)
    }

    /// Exact integral of phi over [lo, hi].
    fn integral(&self, lo: f64, hi: f64) -> f64 {
        let anti = |x: f64| ((self.a * x / 3.0 + self.b / 2.0) * x + self.c) * x;
        anti(hi) - anti(lo)
    }
}

/// Piecewise-quadratic potential: strictly increasing breakpoints and one
/// quadratic per interval. Outside [x_0, x_k] on the line the potential is
/// constant (zero slope); the torus potential is periodic.
#[derive(Debug, Clone)]
pub struct PiecewisePotential {
    domain: Domain,
    breakpoints: Vec<f64>,
    pieces: Vec<Quadratic>,
}

impl PiecewisePotential {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Quadratic] {
        &self.pieces
    }

    /// Index of the piece covering x; breakpoints resolve to the left piece
    /// (C^1 continuity makes the choice immaterial for phi and phi').
    fn piece_index(&self, x: f64) -> Option<usize> {
        if self.pieces.is_empty() {
            return None;
        }
        let first = self.breakpoints[0];
        let last = *self.breakpoints.last().unwrap();
        if x < first || x > last {
            return None;
        }
        // Binary search over breakpoints; ties resolve left.
        let mut lo = 0usize;
        let mut hi = self.pieces.len() - 1;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if x > self.breakpoints[mid] {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        // lo is the greatest index with breakpoint[lo] < x, except x at the
        // left end of the support.
        if x <= self.breakpoints[lo] && lo == 0 {
            Some(0)
        } else {
            Some(lo)
        }
    }

    pub fn phi(&self, x: f64) -> f64 {
        let x = self.wrap(x);
        match self.piece_index(x) {
            Some(i) => self.pieces[i].eval(x),
            None => {
                if self.pieces.is_empty() {
                    0.0
                } else if x < self.breakpoints[0] {
                    self.pieces[0].eval(self.breakpoints[0])
                } else {
                    self.pieces
                        .last()
                        .unwrap()
                        .eval(*self.breakpoints.last().unwrap())
                }
            }
        }
    }

    pub fn dphi(&self, x: f64) -> f64 {
        let x = self.wrap(x);
        match self.piece_index(x) {
            Some(i) => self.pieces[i].slope(x),
            None => 0.0,
        }
    }

    fn wrap(&self, x: f64) -> f64 {
        match self.domain {
            Domain::Line => x,
            Domain::Torus { length } => x.rem_euclid(length),
        }
    }

    /// Exact Dirichlet energy: the squared H^-1 norm of the source.
    pub fn dirichlet_energy(&self) -> f64 {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| p.dirichlet(w[0], w[1]))
            .sum()
    }

    fn mean(&self) -> f64 {
        let total: f64 = self
            .pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| p.integral(w[0], w[1]))
            .sum();
        let span = self.breakpoints.last().unwrap() - self.breakpoints[0];
        total / span
    }

    fn shift(&mut self, delta: f64) {
        for p in &mut self.pieces {
            p.c += delta;
        }
    }
}

fn check(config: &BlockConfig) -> Result<(), ConfigError> {
    let report = validate_config(config.domain(), config.blocks());
    if report.is_valid() {
        Ok(())
    } else {
        Err(ConfigError(report.violations))
    }
}

/// Potential on the line, anchored so the support starts at `x0` and
/// phi(x0) = 0. The standard anchor is x0 = 0; other anchors exist to test
/// translation invariance of derived quantities.
pub fn potential_line_anchored(config: &BlockConfig, x0: f64) -> Result<PiecewisePotential, ConfigError> {
    check(config)?;
    assert!(matches!(config.domain(), Domain::Line), "line potential of a torus configuration");
    let mut breakpoints = Vec::with_capacity(config.blocks().len() + 1);
    let mut pieces = Vec::with_capacity(config.blocks().len());
    let mut x = x0;
    breakpoints.push(x);
    let mut slope = 0.0; // phi' entering the support is zero
    let mut value = 0.0; // phi(x0) = 0
    for block in config.blocks() {
        let q = block.phase.charge();
        // On the block: phi'' = -q, phi'(x) = slope - q (x - x_lo).
        let a = -q / 2.0;
        let b = slope + q * x;
        let c = value - (a * x + b) * x;
        pieces.push(Quadratic { a, b, c });
        x += block.width;
        breakpoints.push(x);
        slope -= q * block.width;
        value = (pieces.last().unwrap()).eval(x);
    }
    Ok(PiecewisePotential {
        domain: Domain::Line,
        breakpoints,
        pieces,
    })
}

/// Potential of u - v on the line (anchored at 0).
pub fn potential_line(config: &BlockConfig) -> Result<PiecewisePotential, ConfigError> {
    potential_line_anchored(config, 0.0)
}

/// Periodic potential on the torus. The slope constant is fixed so that the
/// mean of phi' vanishes (periodicity of phi); the additive constant so that
/// phi has mean zero.
pub fn potential_torus(config: &BlockConfig) -> Result<PiecewisePotential, ConfigError> {
    check(config)?;
    let length = match config.domain() {
        Domain::Torus { length } => length,
        Domain::Line => panic!("torus potential of a line configuration"),
    };
    if config.is_empty() {
        return Ok(PiecewisePotential {
            domain: config.domain(),
            breakpoints: vec![0.0, length],
            pieces: vec![Quadratic { a: 0.0, b: 0.0, c: 0.0 }],
        });
    }
    // cum(x) = integral of (u - v) from 0 to x, piecewise affine.
    // phi'(x) = c_star - cum(x) with c_star = mean of cum over [0, L].
    let mut cum_at_edge = Vec::with_capacity(config.blocks().len() + 1);
    let mut cum = 0.0;
    cum_at_edge.push(cum);
    for b in config.blocks() {
        cum += b.phase.charge() * b.width;
        cum_at_edge.push(cum);
    }
    let mut mean_cum = 0.0;
    for (i, b) in config.blocks().iter().enumerate() {
        // average of the affine cum over the block times the width
        mean_cum += 0.5 * (cum_at_edge[i] + cum_at_edge[i + 1]) * b.width;
    }
    let c_star = mean_cum / length;

    let edges = config.edges();
    let mut pieces = Vec::with_capacity(config.blocks().len());
    let mut value = 0.0;
    for (i, block) in config.blocks().iter().enumerate() {
        let q = block.phase.charge();
        let x = edges[i];
        let slope = c_star - cum_at_edge[i];
        let a = -q / 2.0;
        let b = slope + q * x;
        let c = value - (a * x + b) * x;
        pieces.push(Quadratic { a, b, c });
        value = pieces.last().unwrap().eval(edges[i + 1]);
    }
    let mut pot = PiecewisePotential {
        domain: config.domain(),
        breakpoints: edges,
        pieces,
    };
    let mean = pot.mean();
    pot.shift(-mean);
    Ok(pot)
}

fn potential(config: &BlockConfig) -> Result<PiecewisePotential, ConfigError> {
    match config.domain() {
        Domain::Line => potential_line(config),
        Domain::Torus { .. } => potential_torus(config),
    }
}

/// Builds the potential appropriate to the configuration's domain.
pub fn potential_of(config: &BlockConfig) -> Result<PiecewisePotential, ConfigError> {
    potential(config)
}

/// Squared H^-1 norm of u - v: the exact Dirichlet energy of its potential.
pub fn hminus_norm_sq(config: &BlockConfig) -> Result<f64, ConfigError> {
    Ok(potential(config)?.dirichlet_energy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Phase;
    use crate::numeric::rel_close;

    #[test]
    fn monolayer_profile() {
        // [U:1, V:1] anchored at 0: phi'(x) = |x - 1| - 1 on (0, 2).
        let c = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 1.0)]).unwrap();
        let p = potential_line(&c).unwrap();
        for (x, want) in [(0.0, 0.0), (0.5, -0.5), (1.0, -1.0), (1.5, -0.5), (2.0, 0.0)] {
            assert!((p.dphi(x) - want).abs() < 1e-14, "phi'({x})");
        }
        assert_eq!(p.phi(0.0), 0.0);
        assert_eq!(p.dphi(-1.0), 0.0);
        assert_eq!(p.dphi(3.0), 0.0);
    }

    #[test]
    fn bilayer_profile_four_pieces() {
        // [U:1, V:2, U:1]: descending, rising, descending slope; zero outside.
        let c = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 2.0), (Phase::U, 1.0)]).unwrap();
        let p = potential_line(&c).unwrap();
        assert_eq!(p.pieces().len(), 3);
        for (x, want) in [(0.5, -0.5), (1.0, -1.0), (2.0, 0.0), (3.0, 1.0), (3.5, 0.5), (4.0, 0.0)]
        {
            assert!((p.dphi(x) - want).abs() < 1e-14, "phi'({x})");
        }
    }

    #[test]
    fn empty_config_zero_potential() {
        let c = BlockConfig::line(&[]).unwrap();
        assert_eq!(hminus_norm_sq(&c).unwrap(), 0.0);
    }

    #[test]
    fn monolayer_norm() {
        let c = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 1.0)]).unwrap();
        assert!(rel_close(hminus_norm_sq(&c).unwrap(), 2.0 / 3.0, 1e-14));
    }

    #[test]
    fn bilayer_norms_and_swap() {
        let uvu = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 2.0), (Phase::U, 1.0)]).unwrap();
        let vuv = BlockConfig::line(&[(Phase::V, 1.0), (Phase::U, 2.0), (Phase::V, 1.0)]).unwrap();
        assert!(rel_close(hminus_norm_sq(&uvu).unwrap(), 4.0 / 3.0, 1e-14));
        assert!(rel_close(hminus_norm_sq(&vuv).unwrap(), 4.0 / 3.0, 1e-14));
    }

    #[test]
    fn torus_two_block_slopes() {
        // Unit torus, [U:1/2, V:1/2]: phi' = 1/4 - x then x - 3/4.
        let c = BlockConfig::torus(1.0, &[(Phase::U, 0.5), (Phase::V, 0.5)]).unwrap();
        let p = potential_torus(&c).unwrap();
        for (x, want) in [(0.0, 0.25), (0.25, 0.0), (0.5, -0.25), (0.75, 0.0)] {
            assert!((p.dphi(x) - want).abs() < 1e-14, "phi'({x})");
        }
        // Seam: periodic and C^1.
        assert!((p.phi(0.0) - p.phi(1.0 - 1e-15)).abs() < 1e-12);
        assert!((p.dphi(0.0) - 0.25).abs() < 1e-14);
        // Mean-zero normalisation.
        let mean: f64 = (0..1000).map(|i| p.phi((i as f64 + 0.5) / 1000.0)).sum::<f64>() / 1000.0;
        assert!(mean.abs() < 1e-6);
    }

    #[test]
    fn torus_four_block_periodic() {
        let c = BlockConfig::torus(
            1.0,
            &[(Phase::U, 0.25), (Phase::V, 0.25), (Phase::U, 0.25), (Phase::V, 0.25)],
        )
        .unwrap();
        let p = potential_torus(&c).unwrap();
        assert_eq!(p.pieces().len(), 4);
        assert!((p.phi(0.0) - p.phi(1.0)).abs() < 1e-14);
        assert!((p.dphi(0.0) - p.dphi(1.0 - 1e-12)).abs() < 1e-10);
        // Two formulas for the same n-block lattice: 1/(48 n^2) with n = 2.
        assert!(rel_close(p.dirichlet_energy(), 1.0 / 192.0, 1e-12));
    }

    #[test]
    fn torus_all_h_zero() {
        // An all-H torus is a single H block filling the circle.
        let c = BlockConfig::torus(2.0, &[(Phase::H, 2.0)]).unwrap();
        assert_eq!(hminus_norm_sq(&c).unwrap(), 0.0);
    }

    #[test]
    fn anchored_potential_matches_shifted() {
        let c = BlockConfig::line(&[(Phase::U, 1.0), (Phase::V, 2.0), (Phase::U, 1.0)]).unwrap();
        let p0 = potential_line(&c).unwrap();
        let p7 = potential_line_anchored(&c, -7.25).unwrap();
        for t in [0.1, 0.9, 2.3, 3.9] {
            assert!((p0.phi(t) - p7.phi(t - 7.25)).abs() < 1e-12);
            assert!((p0.dphi(t) - p7.dphi(t - 7.25)).abs() < 1e-12);
        }
        assert!(rel_close(p0.dirichlet_energy(), p7.dirichlet_energy(), 1e-13));
    }

    #[test]
    fn interior_gap_carries_constant_slope() {
        // Unbalanced macrodomains: the gap slope is the net charge to its left.
        let c = BlockConfig::line(&[
            (Phase::U, 1.0),
            (Phase::H, 2.0),
            (Phase::V, 1.0),
        ])
        .unwrap();
        let p = potential_line(&c).unwrap();
        assert!((p.dphi(2.0) - -1.0).abs() < 1e-14);
        assert!((p.dphi(2.5) - -1.0).abs() < 1e-14);
        assert_eq!(p.dphi(4.5), 0.0);
    }
}
