//! The logarithmic Flory-Huggins potential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    pub theta: f64,
    pub theta_c: f64,
    pub clamp_delta: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        PotentialParams {
            theta: 0.8,
            theta_c: 1.6,
            clamp_delta: 1e-8,
        }
    }
}

impl PotentialParams {
    pub fn new(theta: f64, theta_c: f64, clamp_delta: f64) -> Result<Self> {
        let p = PotentialParams {
            theta,
            theta_c,
            clamp_delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::param("theta", format!("must be positive, got {}", self.theta)));
        }
        if !(self.theta_c > self.theta && self.theta_c.is_finite()) {
            return Err(Error::param(
                "theta_c",
                format!("must exceed theta = {}, got {}", self.theta, self.theta_c),
            ));
        }
        if !(self.clamp_delta > 0.0 && self.clamp_delta <= 1e-4) {
            return Err(Error::param(
                "clamp_delta",
                format!("must lie in (0, 1e-4], got {}", self.clamp_delta),
            ));
        }
        Ok(())
    }

    #[inline]
    fn clamp(&self, u: f64) -> f64 {
        let b = 1.0 - self.clamp_delta;
        u.clamp(-b, b)
    }

    /// `f(u) = F'(u) = (theta/2) ln((1+u)/(1-u)) - theta_c u`
    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        let v = self.clamp(u);
        0.5 * self.theta * ((1.0 + v) / (1.0 - v)).ln() - self.theta_c * v
    }

    /// `F(u) = (theta/2)[(1+u) ln(1+u) + (1-u) ln(1-u)] - (theta_c/2) u^2`
    #[inline]
    pub fn big_f(&self, u: f64) -> f64 {
        let v = self.clamp(u);
        0.5 * self.theta * ((1.0 + v) * (1.0 + v).ln() + (1.0 - v) * (1.0 - v).ln())
            - 0.5 * self.theta_c * v * v
    }

    /// The positive zero `u*` of `f` (the binodal value), by bisection.
    pub fn positive_root(&self) -> f64 {
        let mut lo = 1e-6;
        let mut hi = 1.0 - self.clamp_delta;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// `theta / (1 - u*^2) - theta_c`, the largest slope of `f` on `[-u*, u*]`.
    pub fn default_stabilization(&self) -> f64 {
        let r = self.positive_root();
        self.theta / (1.0 - r * r) - self.theta_c
    }
}

pub fn potential_f(u: f64, p: &PotentialParams) -> f64 {
    p.f(u)
}

#[allow(non_snake_case)]
pub fn potential_F(u: f64, p: &PotentialParams) -> f64 {
    p.big_f(u)
}
