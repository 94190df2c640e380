//! External electromagnetic field models and point samples.
//!
//! All models are static (∂/∂t = 0); a sample carries the field tensor H and
//! the full contravariant gradient ∂^ρ H^{αβ}. With the metric
//! diag(−1, +1, +1, +1) the time slice is ∂⁰ = −(1/c) ∂/∂t, identically zero
//! here, and the spatial slices are plain partial derivatives ∂/∂xⁱ.

use crate::minkowski::{AntisymTensor2, FourVector, Vec3};

/// A field model selected by the scenario file.
///
/// The two gradient-bearing models are divergence- and curl-free where they
/// claim to be; `LinearEGradient` intentionally violates ∇·E = 0 and exists
/// purely as a Stern–Gerlach test bed, which is why it carries the
/// `nonphysical` marker in the scenario grammar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldModel {
    /// Constant E and B everywhere.
    Uniform { e_field: Vec3, b_field: Vec3 },
    /// Magnetic quadrupole B = (g·y, g·x, 0) plus an optional uniform B₀ ẑ.
    /// Satisfies ∇·B = 0 and ∇×B = 0.
    MagneticQuadrupole { gradient: f64, b0: f64 },
    /// E = (k·x, 0, 0), B = 0. Curl-free but ∇·E = k ≠ 0: no vacuum source
    /// distribution produces it. Test bed only.
    LinearEGradient { k: f64 },
}

impl FieldModel {
    /// Stable name used in scenario files and error messages.
    pub fn tag(&self) -> &'static str {
        match self {
            FieldModel::Uniform { .. } => "uniform",
            FieldModel::MagneticQuadrupole { .. } => "magnetic-quadrupole",
            FieldModel::LinearEGradient { .. } => "linear-e-gradient",
        }
    }

    /// Whether any sample of this model can carry a non-zero gradient.
    /// Formulations restricted to the uniform regime consult this.
    pub fn has_gradients(&self) -> bool {
        !matches!(self, FieldModel::Uniform { .. })
    }

    /// Whether the model solves the source-free Maxwell equations.
    pub fn is_physical(&self) -> bool {
        !matches!(self, FieldModel::LinearEGradient { .. })
    }

    /// Evaluate the field and its gradient at the spatial part of `r`.
    pub fn sample(&self, r: FourVector) -> FieldSample {
        let p = r.spatial();
        match *self {
            FieldModel::Uniform { e_field, b_field } => FieldSample {
                h: AntisymTensor2::from_eb(e_field, b_field),
                grad: [AntisymTensor2::ZERO; 4],
            },
            FieldModel::MagneticQuadrupole { gradient, b0 } => {
                let b = Vec3::new(gradient * p.y, gradient * p.x, b0);
                let db_dx = Vec3::new(0.0, gradient, 0.0);
                let db_dy = Vec3::new(gradient, 0.0, 0.0);
                FieldSample {
                    h: AntisymTensor2::from_eb(Vec3::ZERO, b),
                    grad: [
                        AntisymTensor2::ZERO,
                        AntisymTensor2::from_eb(Vec3::ZERO, db_dx),
                        AntisymTensor2::from_eb(Vec3::ZERO, db_dy),
                        AntisymTensor2::ZERO,
                    ],
                }
            }
            FieldModel::LinearEGradient { k } => {
                let e = Vec3::new(k * p.x, 0.0, 0.0);
                let de_dx = Vec3::new(k, 0.0, 0.0);
                FieldSample {
                    h: AntisymTensor2::from_eb(e, Vec3::ZERO),
                    grad: [
                        AntisymTensor2::ZERO,
                        AntisymTensor2::from_eb(de_dx, Vec3::ZERO),
                        AntisymTensor2::ZERO,
                        AntisymTensor2::ZERO,
                    ],
                }
            }
        }
    }
}

/// Field tensor and its first derivatives at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// H^{αβ} at the sample point.
    pub h: AntisymTensor2,
    /// grad[ρ] = ∂^ρ H^{αβ}; index 0 is the (raised) time slice.
    pub grad: [AntisymTensor2; 4],
}

impl FieldSample {
    /// A sample of a uniform field (zero gradient).
    pub fn uniform(h: AntisymTensor2) -> FieldSample {
        FieldSample {
            h,
            grad: [AntisymTensor2::ZERO; 4],
        }
    }

    /// True when every gradient slice vanishes.
    pub fn is_gradient_free(&self) -> bool {
        self.grad.iter().all(|g| *g == AntisymTensor2::ZERO)
    }

    /// The convective derivative v_λ ∂^λ H = −v⁰ ∂⁰H + Σᵢ vⁱ ∂ⁱH.
    pub fn convective(&self, v: FourVector) -> AntisymTensor2 {
        self.grad[1] * v.x + self.grad[2] * v.y + self.grad[3] * v.z - self.grad[0] * v.t
    }

    /// Largest violation of the homogeneous Maxwell identity
    /// ∂^ρ H^{αβ} + ∂^α H^{βρ} + ∂^β H^{ρα} = 0 over all index triples.
    pub fn homogeneous_residual(&self) -> f64 {
        let g: Vec<[[f64; 4]; 4]> = self.grad.iter().map(|t| t.matrix()).collect();
        let mut worst = 0.0f64;
        for r in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let cyc = g[r][a][b] + g[a][b][r] + g[b][r][a];
                    worst = worst.max(cyc.abs());
                }
            }
        }
        worst
    }
}
