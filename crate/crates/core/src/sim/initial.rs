//! Initial fields of the benchmark problems.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Benchmark problems 1-5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// 1D, `x^3 (1-x)^3`
    Smooth1D,
    /// 2D, `0.05 sin(2 pi x) sin(2 pi y)`
    Sine2D,
    /// 1D, `0.5 sin(2 pi x)`
    Interface1D,
    /// 2D star shape
    Star,
    /// 2D spinodal decomposition from uniform noise
    Spinodal,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::Smooth1D,
        Problem::Sine2D,
        Problem::Interface1D,
        Problem::Star,
        Problem::Spinodal,
    ];

    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1..=5 => Ok(Self::ALL[id as usize - 1]),
            _ => Err(Error::UnknownProblem(id)),
        }
    }

    pub fn id(self) -> u32 {
        Self::ALL.iter().position(|&p| p == self).unwrap() as u32 + 1
    }

    pub fn dimension(self) -> usize {
        match self {
            Problem::Smooth1D | Problem::Interface1D => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl Serialize for Problem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.id())
    }
}

impl<'de> Deserialize<'de> for Problem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let id = u32::deserialize(d)?;
        Problem::from_id(id).map_err(serde::de::Error::custom)
    }
}

/// Interior nodes of a uniform grid: `a + j h`, `j = 1..=m`, `h = (b - a) / (m + 1)`.
pub fn interior_nodes(a: f64, b: f64, m: usize) -> Vec<f64> {
    let h = (b - a) / (m as f64 + 1.0);
    (1..=m).map(|j| a + j as f64 * h).collect()
}

/// Interior grid, one node list per axis. 2D fields are row-major with the first
/// axis as the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x1: Vec<f64>,
    pub x2: Option<Vec<f64>>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.x1.len() * self.x2.as_ref().map_or(1, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn star_value(x: f64, y: f64, e: f64) -> f64 {
    let c = ((2.0 * x - 1.0).abs().max((y - 0.5).abs()))
        .min((x - 0.5).abs().max((2.0 * y - 1.0).abs()))
        - 0.2;
    (-(c / e).tanh()).clamp(-0.99, 0.99)
}

/// Initial field of `problem` at the interior nodes of `grid`. `eps` sets the
/// interface width of the star shape; `seed` drives the noise of the spinodal case.
pub fn initial_condition(problem: Problem, grid: &Grid, eps: f64, seed: u64) -> Result<Vec<f64>> {
    let dim = if grid.x2.is_some() { 2 } else { 1 };
    if dim != problem.dimension() {
        return Err(Error::param(
            "grid",
            format!("problem {problem} is {}D, grid is {dim}D", problem.dimension()),
        ));
    }
    let x = &grid.x1;
    Ok(match problem {
        Problem::Smooth1D => x.iter().map(|&x| (x * (1.0 - x)).powi(3)).collect(),
        Problem::Interface1D => x.iter().map(|&x| 0.5 * (2.0 * PI * x).sin()).collect(),
        Problem::Sine2D => {
            let y = grid.x2.as_ref().unwrap();
            x.iter()
                .flat_map(|&x| y.iter().map(move |&y| 0.05 * (2.0 * PI * x).sin() * (2.0 * PI * y).sin()))
                .collect()
        }
        Problem::Star => {
            if !(eps > 0.0) {
                return Err(Error::param("eps", "star shape needs eps > 0"));
            }
            let e = std::f64::consts::SQRT_2 * eps;
            let y = grid.x2.as_ref().unwrap();
            x.iter()
                .flat_map(|&x| y.iter().map(move |&y| star_value(x, y, e)))
                .collect()
        }
        Problem::Spinodal => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..grid.len())
                .map(|_| 0.01 * (2.0 * rng.gen::<f64>() - 1.0))
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid1(x: Vec<f64>) -> Grid {
        Grid { x1: x, x2: None }
    }

    #[test]
    fn point_values() {
        let u = initial_condition(Problem::Smooth1D, &grid1(vec![0.0, 0.5, 1.0]), 0.3, 0).unwrap();
        assert_eq!(u, vec![0.0, 0.015625, 0.0]);
        let u = initial_condition(Problem::Interface1D, &grid1(vec![0.25]), 0.02, 0).unwrap();
        assert!((u[0] - 0.5).abs() < 1e-15);
        let g = Grid {
            x1: vec![0.5],
            x2: Some(vec![0.5]),
        };
        assert_eq!(initial_condition(Problem::Star, &g, 0.02, 0).unwrap(), vec![0.99]);
    }

    #[test]
    fn spinodal_is_seeded() {
        let g = Grid {
            x1: interior_nodes(0.0, 1.0, 8),
            x2: Some(interior_nodes(0.0, 1.0, 8)),
        };
        let a = initial_condition(Problem::Spinodal, &g, 0.02, 7).unwrap();
        let b = initial_condition(Problem::Spinodal, &g, 0.02, 7).unwrap();
        let c = initial_condition(Problem::Spinodal, &g, 0.02, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|v| v.abs() <= 0.01));
    }

    #[test]
    fn ids_round_trip() {
        for p in Problem::ALL {
            assert_eq!(Problem::from_id(p.id()).unwrap(), p);
        }
        assert!(matches!(Problem::from_id(6), Err(Error::UnknownProblem(6))));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(initial_condition(Problem::Star, &grid1(vec![0.5]), 0.02, 0).is_err());
    }
}
