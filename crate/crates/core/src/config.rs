//! Input point configurations with exact rational coordinates.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::{Point, Rational};

/// An ordered set of `N` points in `R^d`.  Point indices are stable: the
/// i-th point keeps its index through lifting, partitioning, restriction,
/// and every certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    dim: usize,
    points: Vec<Point>,
}

impl PointConfig {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if points.is_empty() {
            return Err(Error::EmptyPointList);
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        Ok(PointConfig { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// Same configuration shifted by `t`.
    pub fn translated(&self, t: &[Rational]) -> Result<Self> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.len(),
            });
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        PointConfig::new(self.dim, points)
    }
}

#[derive(Serialize, Deserialize)]
struct PointConfigRepr {
    dim: usize,
    points: Vec<Vec<String>>,
}

impl Serialize for PointConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PointConfigRepr {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(format_rational).collect())
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PointConfigRepr::deserialize(deserializer)?;
        let mut points = Vec::with_capacity(repr.points.len());
        for point in &repr.points {
            let coords: std::result::Result<Point, Error> =
                point.iter().map(|s| parse_rational(s)).collect();
            points.push(coords.map_err(D::Error::custom)?);
        }
        PointConfig::new(repr.dim, points).map_err(D::Error::custom)
    }
}
