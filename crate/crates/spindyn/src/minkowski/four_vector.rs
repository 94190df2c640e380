//! Contravariant four-vectors a^μ = (a⁰, a¹, a², a³).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{AntisymTensor2, Vec3};

/// A contravariant four-vector in the metric diag(−1, +1, +1, +1).
///
/// `t` holds the time component a⁰; the index is raised. Lowering flips the
/// sign of `t` only.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector {
        t: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    pub fn from_parts(t: f64, spatial: Vec3) -> Self {
        FourVector::new(t, spatial.x, spatial.y, spatial.z)
    }

    /// Four-velocity of a particle moving with velocity cβ: v = cγ(1, β).
    ///
    /// Exact on the shell v·v = −c² up to rounding; requires |β| < 1.
    pub fn velocity_from_beta(beta: Vec3, c: f64) -> Self {
        let gamma = 1.0 / (1.0 - beta.norm_sq()).sqrt();
        FourVector::from_parts(c * gamma, c * gamma * beta)
    }

    pub fn spatial(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Metric contraction a_μ b^μ = −a⁰b⁰ + a·b.
    pub fn dot(self, other: FourVector) -> f64 {
        -self.t * other.t + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Index-pair antisymmetrizer without the ½:
    /// (a ∧ b)^{αβ} = a^α b^β − a^β b^α.
    ///
    /// Stored per the crate layout: e_i = (a ∧ b)^{i0}, b-part from the
    /// spatial block, so e = b⁰ a⃗ − a⁰ b⃗ and b = a⃗ × b⃗.
    pub fn wedge(self, other: FourVector) -> AntisymTensor2 {
        AntisymTensor2::new(
            other.t * self.spatial() - self.t * other.spatial(),
            self.spatial().cross(other.spatial()),
        )
    }

    /// Lorentz factor γ = v⁰/c of a four-velocity.
    pub fn gamma(self, c: f64) -> f64 {
        self.t / c
    }

    /// Velocity β = v⃗ / v⁰ of a four-velocity.
    pub fn beta(self) -> Vec3 {
        self.spatial() / self.t
    }

    /// |v·v + c²| / c², the mass-shell residual of a four-velocity.
    pub fn on_shell_residual(self, c: f64) -> f64 {
        (self.dot(self) + c * c).abs() / (c * c)
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.spatial().is_finite()
    }

    pub fn norm_euclid(self) -> f64 {
        (self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, o: FourVector) {
        *self = *self + o;
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        v * self
    }
}
