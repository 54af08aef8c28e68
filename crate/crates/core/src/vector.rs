use core::ops::{Add, Mul, Neg, Sub};

use crate::math::{cos, sin, sqrt};

/// A point `(k_x, k_y)` in the transverse wave-vector plane, in rad/μm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransverseWaveVector {
    pub x: f64,
    pub y: f64,
}

impl TransverseWaveVector {
    pub const ZERO: Self = Self { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// `r (cos θ, sin θ)`.
    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * cos(angle), radius * sin(angle))
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        sqrt(self.norm_sq())
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Reflection `k_x → −k_x`.
    pub fn mirror_x(self) -> Self {
        Self::new(-self.x, self.y)
    }
}

impl Add for TransverseWaveVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for TransverseWaveVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for TransverseWaveVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for TransverseWaveVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl From<(f64, f64)> for TransverseWaveVector {
    fn from((x, y): (f64, f64)) -> Self {
        Self::new(x, y)
    }
}
