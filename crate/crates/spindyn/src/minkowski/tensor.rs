//! Antisymmetric rank-2 tensors T^{αβ} = −T^{βα} in electric/magnetic
//! component storage.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{FourVector, Vec3};

/// An antisymmetric contravariant tensor stored as two triples:
///
/// * `e` = (T^{10}, T^{20}, T^{30}) — electric-like block,
/// * `b` = (T^{23}, T^{31}, T^{12}) — magnetic-like block.
///
/// For the electromagnetic field tensor H this gives `e = −E` and `b = B`
/// (H^{i0} = −E_i, H^{12} = B_z); use [`AntisymTensor2::from_eb`] /
/// [`AntisymTensor2::to_eb`] to move between physical fields and storage.
/// Spin tensors Π use the same layout with no extra sign anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AntisymTensor2 {
    pub e: Vec3,
    pub b: Vec3,
}

impl AntisymTensor2 {
    pub const ZERO: AntisymTensor2 = AntisymTensor2 {
        e: Vec3::ZERO,
        b: Vec3::ZERO,
    };

    /// Build from raw storage components (see the type-level docs).
    pub const fn new(e: Vec3, b: Vec3) -> Self {
        AntisymTensor2 { e, b }
    }

    /// Build the electromagnetic field tensor from physical fields:
    /// H^{i0} = −E_i, H^{23} = B_x, H^{31} = B_y, H^{12} = B_z.
    pub fn from_eb(e_field: Vec3, b_field: Vec3) -> Self {
        AntisymTensor2::new(-e_field, b_field)
    }

    /// Inverse of [`AntisymTensor2::from_eb`]: recover (E, B).
    pub fn to_eb(self) -> (Vec3, Vec3) {
        (-self.e, self.b)
    }

    /// Full component matrix M[α][β] = T^{αβ}.
    pub fn matrix(self) -> [[f64; 4]; 4] {
        let (e, b) = (self.e, self.b);
        [
            [0.0, -e.x, -e.y, -e.z],
            [e.x, 0.0, b.z, -b.y],
            [e.y, -b.z, 0.0, b.x],
            [e.z, b.y, -b.x, 0.0],
        ]
    }

    /// Rebuild from a component matrix; the caller guarantees antisymmetry
    /// (only the six independent components are read).
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Self {
        AntisymTensor2::new(
            Vec3::new(m[1][0], m[2][0], m[3][0]),
            Vec3::new(m[2][3], m[3][1], m[1][2]),
        )
    }

    /// Contraction with a four-vector: u^ρ = T^{ρλ} v_λ.
    ///
    /// In components u⁰ = −e·v⃗ and u⃗ = −v⁰ e + v⃗ × b.
    pub fn contract_vector(self, v: FourVector) -> FourVector {
        FourVector::from_parts(
            -self.e.dot(v.spatial()),
            -v.t * self.e + v.spatial().cross(self.b),
        )
    }

    /// Full double contraction A_{αβ} B^{αβ} = 2 (b_A·b_B − e_A·e_B).
    pub fn contract_full(self, other: &AntisymTensor2) -> f64 {
        2.0 * (self.b.dot(other.b) - self.e.dot(other.e))
    }

    /// Commutator-style bracket C^{αβ} = A^{αρ} B_ρ{}^β − A^{βρ} B_ρ{}^α.
    ///
    /// Closed component form (the dense 4×4 route is kept in the tests as an
    /// independent oracle):
    /// e_C = e_B × b_A − e_A × b_B, b_C = e_A × e_B − b_A × b_B.
    pub fn commutator(self, other: &AntisymTensor2) -> AntisymTensor2 {
        AntisymTensor2::new(
            other.e.cross(self.b) - self.e.cross(other.b),
            self.e.cross(other.e) - self.b.cross(other.b),
        )
    }

    /// Hodge dual (dual T)^{αβ} = ½ ε^{αβρσ} T_{ρσ} with ε^{0123} = +1.
    ///
    /// In storage components the dual swaps the blocks: (e, b) → (−b, e),
    /// so dual(dual(T)) = −T.
    pub fn dual(self) -> AntisymTensor2 {
        AntisymTensor2::new(-self.b, self.e)
    }

    /// Euclidean norm over the six independent components.
    pub fn norm(self) -> f64 {
        (self.e.norm_sq() + self.b.norm_sq()).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.e.is_finite() && self.b.is_finite()
    }
}

impl Add for AntisymTensor2 {
    type Output = AntisymTensor2;
    fn add(self, o: AntisymTensor2) -> AntisymTensor2 {
        AntisymTensor2::new(self.e + o.e, self.b + o.b)
    }
}

impl AddAssign for AntisymTensor2 {
    fn add_assign(&mut self, o: AntisymTensor2) {
        *self = *self + o;
    }
}

impl Sub for AntisymTensor2 {
    type Output = AntisymTensor2;
    fn sub(self, o: AntisymTensor2) -> AntisymTensor2 {
        AntisymTensor2::new(self.e - o.e, self.b - o.b)
    }
}

impl Neg for AntisymTensor2 {
    type Output = AntisymTensor2;
    fn neg(self) -> AntisymTensor2 {
        AntisymTensor2::new(-self.e, -self.b)
    }
}

impl Mul<f64> for AntisymTensor2 {
    type Output = AntisymTensor2;
    fn mul(self, s: f64) -> AntisymTensor2 {
        AntisymTensor2::new(self.e * s, self.b * s)
    }
}

impl Mul<AntisymTensor2> for f64 {
    type Output = AntisymTensor2;
    fn mul(self, t: AntisymTensor2) -> AntisymTensor2 {
        t * self
    }
}
