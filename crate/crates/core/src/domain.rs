//! Rectangle geometry.

use crate::error::{Result, SpectralError};

/// Axis-aligned rectangle `[0, lx] x [0, ly]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectDomain {
    lx: f64,
    ly: f64,
}

impl RectDomain {
    pub fn new(lx: f64, ly: f64) -> Result<Self> {
        if !(lx.is_finite() && ly.is_finite() && lx > 0.0 && ly > 0.0) {
            return Err(SpectralError::InvalidDomain { lx, ly });
        }
        Ok(Self { lx, ly })
    }

    pub fn unit_square() -> Self {
        Self { lx: 1.0, ly: 1.0 }
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn diam(&self) -> f64 {
        self.lx.hypot(self.ly)
    }

    /// Distance to the nearest edge; zero on the boundary.
    pub fn boundary_distance(&self, x: f64, y: f64) -> f64 {
        x.min(self.lx - x).min(y).min(self.ly - y).max(0.0)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.lx).contains(&x) && (0.0..=self.ly).contains(&y)
    }
}

impl Default for RectDomain {
    fn default() -> Self {
        Self::unit_square()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_sides() {
        assert!(RectDomain::new(0.0, 1.0).is_err());
        assert!(RectDomain::new(1.0, -2.0).is_err());
        assert!(RectDomain::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn diameter_and_distance() {
        let d = RectDomain::new(3.0, 4.0).unwrap();
        assert_eq!(d.diam() * d.diam(), 25.0);
        assert_eq!(d.boundary_distance(0.0, 2.0), 0.0);
        assert_eq!(d.boundary_distance(1.5, 2.0), 1.5);
        assert!((d.boundary_distance(2.5, 3.9) - 0.1).abs() < 1e-12);
        assert!(d.boundary_distance(1.0, 1.0) > 0.0);
    }
}
