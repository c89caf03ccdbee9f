//! Random geometric graphs.
//!
//! Nodes are placed uniformly on a region and two nodes are linked iff their
//! distance in the region's metric is at most the transmission range `r0`.
//! The torus uses the wrap-around metric so there are no boundary effects.

pub(crate) mod graph;
mod snapshot;
pub mod text;

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::Serialize;

pub use graph::UnionFind;
pub use snapshot::{sample_topology, NetworkSnapshot};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Deployment area. The disk is centred at the origin; torus and rectangle
/// span `[0, width) x [0, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Region {
    Torus { side: f64 },
    Disk { radius: f64 },
    Rectangle { width: f64, height: f64 },
}

impl Region {
    pub fn torus(side: f64) -> Result<Self> {
        positive(side, "torus side")?;
        Ok(Region::Torus { side })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        positive(radius, "disk radius")?;
        Ok(Region::Disk { radius })
    }

    pub fn rectangle(width: f64, height: f64) -> Result<Self> {
        positive(width, "rectangle width")?;
        positive(height, "rectangle height")?;
        Ok(Region::Rectangle { width, height })
    }

    /// Square torus with the given area.
    pub fn torus_with_area(area: f64) -> Result<Self> {
        positive(area, "area")?;
        Self::torus(area.sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::Torus { side } => positive(side, "torus side"),
            Region::Disk { radius } => positive(radius, "disk radius"),
            Region::Rectangle { width, height } => {
                positive(width, "rectangle width")?;
                positive(height, "rectangle height")
            }
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::Torus { side } => side * side,
            Region::Disk { radius } => PI * radius * radius,
            Region::Rectangle { width, height } => width * height,
        }
    }

    /// Largest possible distance between two points of the region.
    pub fn diameter(&self) -> f64 {
        match *self {
            Region::Torus { side } => side * std::f64::consts::FRAC_1_SQRT_2,
            Region::Disk { radius } => 2.0 * radius,
            Region::Rectangle { width, height } => width.hypot(height),
        }
    }

    /// Uniform point in the region.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match *self {
            Region::Torus { side } => Point::new(rng.random::<f64>() * side, rng.random::<f64>() * side),
            Region::Rectangle { width, height } => {
                Point::new(rng.random::<f64>() * width, rng.random::<f64>() * height)
            }
            Region::Disk { radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = 2.0 * PI * rng.random::<f64>();
                Point::new(r * theta.cos(), r * theta.sin())
            }
        }
    }

    /// Squared distance in the region metric.
    pub fn distance_sq(&self, a: Point, b: Point) -> f64 {
        let (mut dx, mut dy) = ((a.x - b.x).abs(), (a.y - b.y).abs());
        if let Region::Torus { side } = *self {
            dx = dx.rem_euclid(side);
            dy = dy.rem_euclid(side);
            dx = dx.min(side - dx);
            dy = dy.min(side - dy);
        }
        dx * dx + dy * dy
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        self.distance_sq(a, b).sqrt()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Region::Torus { side } => write!(f, "torus {side}"),
            Region::Disk { radius } => write!(f, "disk {radius}"),
            Region::Rectangle { width, height } => write!(f, "rectangle {width} {height}"),
        }
    }
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::arg(format!("{what} must be positive and finite, got {v}")))
    }
}

/// Area giving expected node degree `d` for `n` nodes of range `r0`:
/// `A = (n - 1) * pi * r0^2 / d`.
pub fn area_for_degree(n: usize, r0: f64, d: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg(format!("need at least 2 nodes, got {n}")));
    }
    positive(r0, "range")?;
    positive(d, "degree")?;
    Ok((n - 1) as f64 * PI * r0 * r0 / d)
}
