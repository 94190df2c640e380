//! Pure Lorentz boosts acting on four-vectors and antisymmetric tensors.

use crate::error::{Error, Result};

use super::{AntisymTensor2, FourVector, Vec3};

/// A pure boost parametrized by the velocity β (in units of c), |β| < 1.
///
/// `Boost::new(beta)` is the *active* boost that maps the rest four-velocity
/// (c, 0, 0, 0) to cγ(1, β). To express lab components in the frame of a
/// particle moving with velocity β, apply the inverse boost,
/// `Boost::new(beta)?.inverse()` (or equivalently `Boost::new(-beta)?`).
///
/// Boost composition is out of scope; compose by boosting twice if needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    beta: Vec3,
    gamma: f64,
}

impl Boost {
    /// Build a boost; rejects |β| ≥ 1.
    pub fn new(beta: Vec3) -> Result<Boost> {
        let b2 = beta.norm_sq();
        if !(b2 < 1.0) || !beta.is_finite() {
            return Err(Error::SuperluminalBoost(b2.sqrt()));
        }
        Ok(Boost {
            beta,
            gamma: 1.0 / (1.0 - b2).sqrt(),
        })
    }

    /// Boost into the rest frame of a particle moving with velocity β.
    pub fn into_rest_frame_of(beta: Vec3) -> Result<Boost> {
        Boost::new(-beta)
    }

    pub fn beta(&self) -> Vec3 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn inverse(&self) -> Boost {
        Boost {
            beta: -self.beta,
            gamma: self.gamma,
        }
    }

    /// The matrix Λ^α{}_β. Written with γ²/(γ+1) instead of (γ−1)/β² so the
    /// β → 0 limit is regular.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let g = self.gamma;
        let b = self.beta;
        let k = g * g / (g + 1.0);
        let mut m = [[0.0; 4]; 4];
        m[0][0] = g;
        let bs = b.as_array();
        for i in 0..3 {
            m[0][i + 1] = g * bs[i];
            m[i + 1][0] = g * bs[i];
            for j in 0..3 {
                m[i + 1][j + 1] = if i == j { 1.0 } else { 0.0 } + k * bs[i] * bs[j];
            }
        }
        m
    }

    /// Transform a four-vector: a'^α = Λ^α{}_μ a^μ.
    pub fn vector(&self, a: FourVector) -> FourVector {
        let g = self.gamma;
        let k = g * g / (g + 1.0);
        let bs = self.beta;
        let ba = bs.dot(a.spatial());
        FourVector::from_parts(
            g * (a.t + ba),
            a.spatial() + (k * ba + g * a.t) * bs,
        )
    }

    /// Transform an antisymmetric tensor: T'^{αβ} = Λ^α{}_μ Λ^β{}_ν T^{μν},
    /// evaluated as the dense conjugation Λ M Λᵀ. The closed-form E/B
    /// transformation rule serves as the independent oracle in tests.
    pub fn tensor(&self, t: &AntisymTensor2) -> AntisymTensor2 {
        let l = self.matrix();
        let m = t.matrix();
        let mut lm = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for r in 0..4 {
                    s += l[a][r] * m[r][b];
                }
                lm[a][b] = s;
            }
        }
        let mut out = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for r in 0..4 {
                    s += lm[a][r] * l[b][r];
                }
                out[a][b] = s;
            }
        }
        AntisymTensor2::from_matrix(&out)
    }
}
