use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Real 3-vector in Bloch space: a qubit state, a measurement axis, or a
/// sum of signed axes.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(c: [T; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// Panics on the zero vector.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > T::zero(), "cannot normalize the zero vector");
        *self * n.recip()
    }

    pub fn is_unit(&self, tolerance: T) -> bool {
        (self.norm() - T::one()).abs() <= tolerance
    }

    /// `R · self` for a row-major 3×3 matrix.
    pub fn rotated(&self, r: &[[T; 3]; 3]) -> Self {
        let v = self.to_array();
        let row = |i: usize| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
        Self::new(row(0), row(1), row(2))
    }

    /// `Rᵀ · self`.
    pub fn rotated_inverse(&self, r: &[[T; 3]; 3]) -> Self {
        let v = self.to_array();
        let col = |j: usize| r[0][j] * v[0] + r[1][j] * v[1] + r[2][j] * v[2];
        Self::new(col(0), col(1), col(2))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Lexicographic comparison on `(x, y, z)` with a tie tolerance.
    pub fn lex_cmp(&self, other: &Self, tolerance: T) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        for (a, b) in self.to_array().into_iter().zip(other.to_array()) {
            if (a - b).abs() > tolerance {
                return if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }

    pub fn cast<U: Real>(&self) -> BlochVector<U> {
        let f = |v: T| U::from_f64(v.to_f64().unwrap_or(f64::NAN)).unwrap();
        BlochVector::new(f(self.x), f(self.y), f(self.z))
    }
}

impl<T: Real> Add for BlochVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for BlochVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for BlochVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for BlochVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Rotation matrix about a unit axis by `angle` (Rodrigues), row-major.
pub fn axis_angle_rotation<T: Real>(axis: &BlochVector<T>, angle: T) -> [[T; 3]; 3] {
    let k = axis.normalized();
    let (s, c) = angle.sin_cos();
    let t = T::one() - c;
    [
        [
            c + k.x * k.x * t,
            k.x * k.y * t - k.z * s,
            k.x * k.z * t + k.y * s,
        ],
        [
            k.y * k.x * t + k.z * s,
            c + k.y * k.y * t,
            k.y * k.z * t - k.x * s,
        ],
        [
            k.z * k.x * t - k.y * s,
            k.z * k.y * t + k.x * s,
            c + k.z * k.z * t,
        ],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rodrigues_quarter_turn_about_z() {
        let r = axis_angle_rotation(
            &BlochVector::new(0.0, 0.0, 1.0),
            std::f64::consts::FRAC_PI_2,
        );
        let v = BlochVector::new(1.0, 0.0, 0.0).rotated(&r);
        assert!(v.max_abs_diff(&BlochVector::new(0.0, 1.0, 0.0)) < 1e-15);
        let back = v.rotated_inverse(&r);
        assert!(back.max_abs_diff(&BlochVector::new(1.0, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn cross_product_is_orthogonal() {
        let a = BlochVector::new(0.3f64, -1.2, 0.5);
        let b = BlochVector::new(2.0, 0.1, -0.4);
        let c = a.cross(&b);
        assert!(c.dot(&a).abs() < 1e-15 && c.dot(&b).abs() < 1e-15);
    }
}
