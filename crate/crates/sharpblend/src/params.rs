//! Interface coefficients and surface tensions.
//!
//! The energy penalises the three interface types U-0, V-0 and U-V with
//! surface tensions that are linear images of the gradient coefficients
//! (c0, cu, cv):
//!
//!   d_u0 = cu + c0,   d_v0 = cv + c0,   d_uv = cu + cv.
//!
//! Non-negativity of the c's is equivalent to the triangle conditions
//! 0 <= d_kl <= d_kj + d_jl for every pair of distinct phases, which is
//! exactly the condition for no interface type to be unstable against
//! wetting by the third phase.

use serde::{Deserialize, Serialize};

/// Relative tolerance for equality checks throughout the crate.
pub const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamsError {
    NegativeCoefficient { name: &'static str, value: f64 },
    AllZero,
    TriangleViolation { name: &'static str, value: f64 },
    NonFinite,
}

impl std::fmt::Display for ParamsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamsError::NegativeCoefficient { name, value } => {
                write!(f, "coefficient {name} = {value} is negative")
            }
            ParamsError::AllZero => write!(f, "all three coefficients are zero"),
            ParamsError::TriangleViolation { name, value } => write!(
                f,
                "surface tensions violate the triangle condition: derived {name} = {value} < 0"
            ),
            ParamsError::NonFinite => write!(f, "coefficients must be finite"),
        }
    }
}

impl std::error::Error for ParamsError {}

/// Validated coefficient set: gradient coefficients plus derived surface
/// tensions. Immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub c0: f64,
    pub cu: f64,
    pub cv: f64,
    pub d_u0: f64,
    pub d_v0: f64,
    pub d_uv: f64,
}

impl Params {
    /// Builds from gradient coefficients. All must be finite and
    /// non-negative, with at least one strictly positive.
    pub fn from_c(c0: f64, cu: f64, cv: f64) -> Result<Self, ParamsError> {
        if !(c0.is_finite() && cu.is_finite() && cv.is_finite()) {
            return Err(ParamsError::NonFinite);
        }
        for (name, value) in [("c0", c0), ("cu", cu), ("cv", cv)] {
            if value < 0.0 {
                return Err(ParamsError::NegativeCoefficient { name, value });
            }
        }
        if c0 == 0.0 && cu == 0.0 && cv == 0.0 {
            return Err(ParamsError::AllZero);
        }
        Ok(Params {
            c0,
            cu,
            cv,
            d_u0: cu + c0,
            d_v0: cv + c0,
            d_uv: cu + cv,
        })
    }

    /// Builds from surface tensions by inverting the 3x3 linear system.
    ///
    /// A derived gradient coefficient that is negative beyond rounding
    /// (relative to the tension scale) is a triangle violation; tiny
    /// negatives from decimal rounding are clamped to zero so that the
    /// stored invariants hold exactly.
    pub fn from_d(d_u0: f64, d_v0: f64, d_uv: f64) -> Result<Self, ParamsError> {
        if !(d_u0.is_finite() && d_v0.is_finite() && d_uv.is_finite()) {
            return Err(ParamsError::NonFinite);
        }
        let scale = d_u0.abs().max(d_v0.abs()).max(d_uv.abs()).max(1.0);
        let clamp = |name: &'static str, value: f64| -> Result<f64, ParamsError> {
            if value < -REL_TOL * scale {
                Err(ParamsError::TriangleViolation { name, value })
            } else {
                Ok(value.max(0.0))
            }
        };
        let c0 = clamp("c0", 0.5 * (d_u0 + d_v0 - d_uv))?;
        let cu = clamp("cu", 0.5 * (d_u0 + d_uv - d_v0))?;
        let cv = clamp("cv", 0.5 * (d_v0 + d_uv - d_u0))?;
        Params::from_c(c0, cu, cv)
    }

    /// Swaps the roles of the two copolymer phases (d_u0 <-> d_v0).
    pub fn swap_uv(&self) -> Params {
        Params {
            c0: self.c0,
            cu: self.cv,
            cv: self.cu,
            d_u0: self.d_v0,
            d_v0: self.d_u0,
            d_uv: self.d_uv,
        }
    }

    /// Surface tension for the given interface type.
    pub fn tension(&self, kind: crate::config::InterfaceKind) -> f64 {
        use crate::config::InterfaceKind::*;
        match kind {
            U0 => self.d_u0,
            V0 => self.d_v0,
            UV => self.d_uv,
        }
    }
}

/// On-disk form: exactly one of the two coefficient triples per file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ParamsFile {
    C {
        c0: f64,
        cu: f64,
        cv: f64,
    },
    D {
        d_u0: f64,
        d_v0: f64,
        d_uv: f64,
    },
}

impl Serialize for Params {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ParamsFile::C {
            c0: self.c0,
            cu: self.cu,
            cv: self.cv,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Params {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        // Reject files that mix the two forms before the untagged probe, which
        // would otherwise silently ignore the extra keys.
        let raw = serde_json::Map::deserialize(deserializer)?;
        let has_c = ["c0", "cu", "cv"].iter().any(|k| raw.contains_key(*k));
        let has_d = ["d_u0", "d_v0", "d_uv"]
            .iter()
            .any(|k| raw.contains_key(*k));
        if has_c && has_d {
            return Err(D::Error::custom(
                "parameter file mixes c-form and d-form keys; use exactly one",
            ));
        }
        let file: ParamsFile = serde_json::from_value(serde_json::Value::Object(raw))
            .map_err(D::Error::custom)?;
        let params = match file {
            ParamsFile::C { c0, cu, cv } => Params::from_c(c0, cu, cv),
            ParamsFile::D { d_u0, d_v0, d_uv } => Params::from_d(d_u0, d_v0, d_uv),
        };
        params.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rel_close;

    #[test]
    fn symmetric_triple() {
        let p = Params::from_c(1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.d_u0, 2.0);
        assert_eq!(p.d_v0, 2.0);
        assert_eq!(p.d_uv, 2.0);
    }

    #[test]
    fn mixed_triple() {
        let p = Params::from_c(0.3, 0.7, 0.0).unwrap();
        assert_eq!(p.d_u0, 1.0);
        assert_eq!(p.d_v0, 0.3);
        assert_eq!(p.d_uv, 0.7);
    }

    #[test]
    fn negative_coefficient_rejected() {
        assert!(matches!(
            Params::from_c(0.0, -1.0, 1.0),
            Err(ParamsError::NegativeCoefficient { name: "cu", .. })
        ));
    }

    #[test]
    fn all_zero_rejected() {
        assert!(matches!(
            Params::from_c(0.0, 0.0, 0.0),
            Err(ParamsError::AllZero)
        ));
    }

    #[test]
    fn tensions_invert() {
        let p = Params::from_d(1.0, 0.4, 0.6).unwrap();
        assert!(rel_close(p.c0, 0.4, REL_TOL));
        assert!(rel_close(p.cu, 0.6, REL_TOL));
        assert_eq!(p.cv, 0.0);

        let q = Params::from_d(2.0, 2.0, 2.0).unwrap();
        assert!(rel_close(q.c0, 1.0, REL_TOL));
        assert!(rel_close(q.cu, 1.0, REL_TOL));
        assert!(rel_close(q.cv, 1.0, REL_TOL));
    }

    #[test]
    fn tension_triple_with_decimal_rounding() {
        // 0.3 + 0.7 undershoots 1.0 by half an ulp; the derived cv must clamp
        // to zero instead of tripping the triangle check.
        let p = Params::from_d(1.0, 0.3, 0.7).unwrap();
        assert_eq!(p.cv, 0.0);
    }

    #[test]
    fn triangle_violation_rejected() {
        assert!(matches!(
            Params::from_d(1.0, 1.0, 3.0),
            Err(ParamsError::TriangleViolation { .. })
        ));
    }

    #[test]
    fn round_trip_c_to_d_to_c() {
        for (c0, cu, cv) in [(1.0, 1.0, 1.0), (0.3, 0.7, 0.0), (0.1, 0.2, 0.3)] {
            let p = Params::from_c(c0, cu, cv).unwrap();
            let q = Params::from_d(p.d_u0, p.d_v0, p.d_uv).unwrap();
            assert!(rel_close(p.c0, q.c0, REL_TOL));
            assert!(rel_close(p.cu, q.cu, REL_TOL));
            assert!(rel_close(p.cv, q.cv, REL_TOL));
        }
    }

    #[test]
    fn json_forms() {
        let p: Params = serde_json::from_str(r#"{"c0":1.0,"cu":1.0,"cv":1.0}"#).unwrap();
        assert_eq!(p.d_uv, 2.0);
        let p: Params = serde_json::from_str(r#"{"d_u0":1.0,"d_v0":0.4,"d_uv":0.6}"#).unwrap();
        assert!(rel_close(p.cu, 0.6, REL_TOL));
        assert!(serde_json::from_str::<Params>(r#"{"c0":1.0,"d_uv":0.6}"#).is_err());
        assert!(serde_json::from_str::<Params>(r#"{"c0":1.0,"cu":1.0}"#).is_err());
    }
}
