//! Charge-motion side of the coupled system: particle parameters, the
//! dynamical state, the field-dependent spin mass, the charge equation in
//! acceleration and momentum form, the mass-change rate, and the
//! noncollinearity vector Z that ties momentum to velocity.
//!
//! Everything keeps c, ħ, m₀ and e explicit; Gaussian-style coupling
//! (e/c)·H^{ρλ}v_λ throughout.

use crate::error::{Error, Result};
use crate::fields::FieldSample;
use crate::minkowski::{AntisymTensor2, FourVector, Vec3};

/// Relative tolerance for the mass-shell precondition v·v = −c² enforced by
/// the validating entry points.
pub const ON_SHELL_TOL: f64 = 1e-9;

/// Species constants plus unit scales. The magnetic moments are derived on
/// demand from the stored primitives, so they can never disagree with them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleParams {
    /// Rest mass m₀ > 0.
    pub m0: f64,
    /// Charge e (either sign).
    pub e: f64,
    /// Gyromagnetic factor g.
    pub g: f64,
    /// ħ as an explicit scale; ħ = 0 selects the spinless-force limit in
    /// which μ = 0 and the spin becomes a passive test vector.
    pub hbar: f64,
    /// Speed of light c > 0.
    pub c: f64,
    /// Spin quantum number s; the reduced (Corben/BMT/ζ) equations are
    /// written for s = ½ and the general spin equation for any s.
    pub s: f64,
}

impl ParticleParams {
    pub fn new(m0: f64, e: f64, g: f64, hbar: f64, c: f64, s: f64) -> Result<Self> {
        let all_finite =
            m0.is_finite() && e.is_finite() && g.is_finite() && hbar.is_finite() && c.is_finite() && s.is_finite();
        if !all_finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if m0 <= 0.0 {
            return Err(Error::InvalidParams(format!("m0 = {m0} must be positive")));
        }
        if c <= 0.0 {
            return Err(Error::InvalidParams(format!("c = {c} must be positive")));
        }
        if hbar < 0.0 {
            return Err(Error::InvalidParams(format!("hbar = {hbar} must be >= 0")));
        }
        if s <= 0.0 {
            return Err(Error::InvalidParams(format!("s = {s} must be positive")));
        }
        Ok(ParticleParams { m0, e, g, hbar, c, s })
    }

    /// Dimensionless-default electron-like parameters: m₀ = |e| = c = 1,
    /// g = 2, s = ½ and a small ħ.
    pub fn dimensionless(g: f64, hbar: f64) -> Self {
        ParticleParams {
            m0: 1.0,
            e: 1.0,
            g,
            hbar,
            c: 1.0,
            s: 0.5,
        }
    }

    /// Bohr-style moment μ₀ = eħ / (2 m₀ c).
    pub fn mu0(&self) -> f64 {
        self.e * self.hbar / (2.0 * self.m0 * self.c)
    }

    /// Total moment μ = g μ₀ s.
    pub fn mu(&self) -> f64 {
        self.g * self.mu0() * self.s
    }

    /// Anomalous part μ_a = μ₀ (g − 2) / 2.
    pub fn mu_a(&self) -> f64 {
        self.mu0() * (self.g - 2.0) / 2.0
    }

    /// 2μ/ħ evaluated without dividing by ħ: g·s·e / (m₀ c). This is the
    /// coefficient the ħ-scaled spin equation needs, finite also at ħ = 0.
    pub fn two_mu_over_hbar(&self) -> f64 {
        self.g * self.s * self.e / (self.m0 * self.c)
    }

    /// 2μ_a/ħ evaluated without dividing by ħ: (g − 2)·e / (2 m₀ c).
    pub fn two_mu_a_over_hbar(&self) -> f64 {
        (self.g - 2.0) * self.e / (2.0 * self.m0 * self.c)
    }
}

/// Instantaneous dynamical state in the tensor formulations: proper time,
/// four-position (r⁰ = ct), four-velocity and spin tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub tau: f64,
    pub position: FourVector,
    pub velocity: FourVector,
    pub spin: AntisymTensor2,
}

impl ParticleState {
    pub fn beta(&self) -> Vec3 {
        self.velocity.beta()
    }

    pub fn gamma(&self, c: f64) -> f64 {
        self.velocity.gamma(c)
    }

    /// |v·v + c²|/c².
    pub fn on_shell_residual(&self, c: f64) -> f64 {
        self.velocity.on_shell_residual(c)
    }

    /// ‖v_α Π^{αβ}‖ / (c‖Π‖): the normalized Frenkel-condition residual
    /// (0 for ‖Π‖ = 0).
    pub fn frenkel_residual(&self, c: f64) -> f64 {
        let norm = self.spin.norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.spin.contract_vector(self.velocity).norm_euclid() / (c * norm)
    }
}

/// Which noncollinearity vector closes P = m v + Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formalism {
    /// Space-like Z with v_α Z^α = 0 (supplementary condition v_αΠ^{αβ} = 0).
    Frenkel,
    /// Z built with the full field gradient (supplementary condition
    /// P_αΠ^{αβ} = 0).
    Shirokov,
}

fn check_on_shell(v: FourVector, c: f64) -> Result<()> {
    let residual = v.on_shell_residual(c);
    if residual > ON_SHELL_TOL {
        return Err(Error::OffShellVelocity {
            residual,
            tolerance: ON_SHELL_TOL,
        });
    }
    Ok(())
}

/// Space-like projection of the field gradient:
/// →∂^ρ H = ∂^ρ H + (1/c²) v^ρ (v_λ ∂^λ H).
///
/// Validates the mass-shell precondition; the projector property
/// v_ρ →∂^ρ H = 0 then holds to rounding.
pub fn spacelike_gradient(sample: &FieldSample, v: FourVector, c: f64) -> Result<[AntisymTensor2; 4]> {
    check_on_shell(v, c)?;
    Ok(spacelike_gradient_raw(sample, v, c))
}

/// Non-validating form used inside derivative evaluations, where
/// Runge–Kutta stage states sit slightly off shell by construction.
pub(crate) fn spacelike_gradient_raw(sample: &FieldSample, v: FourVector, c: f64) -> [AntisymTensor2; 4] {
    let w = sample.convective(v);
    let k = 1.0 / (c * c);
    [
        sample.grad[0] + w * (k * v.t),
        sample.grad[1] + w * (k * v.x),
        sample.grad[2] + w * (k * v.y),
        sample.grad[3] + w * (k * v.z),
    ]
}

/// Space-like part of the field tensor relative to v:
/// →H^{αβ} = H^{αβ} + (1/c²) v^{[α} v_ρ H^{ρβ]} = H − (1/c²)(v ∧ u)
/// with u = H^{αρ}v_ρ. Satisfies v_α →H^{αβ} = 0 and is idempotent.
pub fn spacelike_field(h: &AntisymTensor2, v: FourVector, c: f64) -> Result<AntisymTensor2> {
    check_on_shell(v, c)?;
    Ok(spacelike_field_raw(h, v, c))
}

pub(crate) fn spacelike_field_raw(h: &AntisymTensor2, v: FourVector, c: f64) -> AntisymTensor2 {
    let u = h.contract_vector(v);
    *h - v.wedge(u) * (1.0 / (c * c))
}

/// Field-dependent spin mass m = m₀ − (μ / 2c²) H_{αβ} Π^{αβ}.
///
/// Errors when the field is strong enough to drive m ≤ 0; the model has no
/// meaning there.
pub fn spin_mass(params: &ParticleParams, spin: &AntisymTensor2, h: &AntisymTensor2) -> Result<f64> {
    let m = params.m0 - params.mu() / (2.0 * params.c * params.c) * h.contract_full(spin);
    if m <= 0.0 {
        return Err(Error::NonpositiveSpinMass { m });
    }
    Ok(m)
}

/// Gradient (Stern–Gerlach) four-force density Π_{αβ} ∂^ρ H^{αβ} assembled
/// from per-axis gradient slices.
pub(crate) fn gradient_force(spin: &AntisymTensor2, slices: &[AntisymTensor2; 4]) -> FourVector {
    FourVector::new(
        spin.contract_full(&slices[0]),
        spin.contract_full(&slices[1]),
        spin.contract_full(&slices[2]),
        spin.contract_full(&slices[3]),
    )
}

/// Acceleration form of the charge equation:
/// m dv^ρ/dτ = (e/c) H^{ρλ} v_λ + (μ/2) Π_{αβ} →∂^ρ H^{αβ}.
///
/// Both force terms are orthogonal to v, so v_ρ dv^ρ/dτ = 0 on shell.
pub fn charge_accel(params: &ParticleParams, state: &ParticleState, sample: &FieldSample) -> Result<FourVector> {
    let m = spin_mass(params, &state.spin, &sample.h)?;
    let lorentz = sample.h.contract_vector(state.velocity) * (params.e / params.c);
    let sg = if sample.is_gradient_free() {
        FourVector::ZERO
    } else {
        let slices = spacelike_gradient_raw(sample, state.velocity, params.c);
        gradient_force(&state.spin, &slices) * (params.mu() / 2.0)
    };
    Ok((lorentz + sg) * (1.0 / m))
}

/// Momentum form of the charge equation (full, unprojected gradient):
/// dP^α/dτ = (e/c) H^{αβ} v_β + (μ/2) Π_{ρλ} ∂^α H^{ρλ}.
pub fn momentum_rate(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    sample: &FieldSample,
) -> FourVector {
    let lorentz = sample.h.contract_vector(v) * (params.e / params.c);
    if sample.is_gradient_free() {
        lorentz
    } else {
        lorentz + gradient_force(spin, &sample.grad) * (params.mu() / 2.0)
    }
}

/// Leading-order mass-change rate
/// dm/dτ ≈ −(μ / 2c²) v_λ Π_{αβ} ∂^λ H^{αβ}; exact up to O(ħ²) corrections.
pub fn dm_dtau_approx(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    sample: &FieldSample,
) -> f64 {
    let w = sample.convective(v);
    -params.mu() / (2.0 * params.c * params.c) * spin.contract_full(&w)
}

/// Exact mass-change rate
/// dm/dτ = (μ/c⁴) w_α Π^{αρ} H_{ρβ} v^β − (μ / 2c²) Π_{ρλ} v_α ∂^α H^{ρλ},
/// where w is the four-acceleration. The first term upgrades the
/// approximate rate; the difference scales as O(ħ²).
pub fn dm_dtau_exact(params: &ParticleParams, state: &ParticleState, sample: &FieldSample) -> Result<f64> {
    let w = charge_accel(params, state, sample)?;
    let u = sample.h.contract_vector(state.velocity);
    let c2 = params.c * params.c;
    let correction = params.mu() / (c2 * c2) * w.dot(state.spin.contract_vector(u));
    Ok(dm_dtau_approx(params, state.velocity, &state.spin, sample) + correction)
}

/// Frenkel noncollinearity vector (field form, rest mass in the
/// coefficients):
/// →Z^α = Π^{αβ} [ (μħ / 4 m₀ c²) Π_{ρλ} →∂_β H^{ρλ} − (μ_a / c²) H_{βρ} v^ρ ].
///
/// Space-like by construction: v_α →Z^α = 0 when the Frenkel condition holds.
pub fn z_frenkel(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    sample: &FieldSample,
) -> FourVector {
    z_from_slices(
        params,
        v,
        spin,
        &sample.h,
        &spacelike_gradient_raw(sample, v, params.c),
        params.mu() * params.hbar / (4.0 * params.m0 * params.c * params.c),
        params.mu_a(),
    )
}

/// Shirokov noncollinearity vector: same structure as [`z_frenkel`] but with
/// the full (unprojected) field gradient.
pub fn z_shirokov(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    sample: &FieldSample,
) -> FourVector {
    z_from_slices(
        params,
        v,
        spin,
        &sample.h,
        &sample.grad,
        params.mu() * params.hbar / (4.0 * params.m0 * params.c * params.c),
        params.mu_a(),
    )
}

/// (2/ħ)·Z for the Shirokov formalism, written so no division by ħ occurs:
/// the coefficients become μ / (2 m₀ c²) and (g − 2) e / (2 m₀ c³). Finite
/// at ħ = 0, where it correctly reduces to the pure anomalous-moment term.
pub fn z_shirokov_scaled(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    sample: &FieldSample,
) -> FourVector {
    z_from_slices(
        params,
        v,
        spin,
        &sample.h,
        &sample.grad,
        params.mu() / (2.0 * params.m0 * params.c * params.c),
        params.two_mu_a_over_hbar(),
    )
}

/// Shared Z assembly: Z^α = Π^{αβ} X_β with
/// X^β = grad_coef · Π_{ρλ} G^β H^{ρλ} − (anom_coef / c²) H^{βρ} v_ρ.
fn z_from_slices(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    h: &AntisymTensor2,
    slices: &[AntisymTensor2; 4],
    grad_coef: f64,
    anom_coef: f64,
) -> FourVector {
    let u = h.contract_vector(v);
    let x = gradient_force(spin, slices) * grad_coef - u * (anom_coef / (params.c * params.c));
    spin.contract_vector(x)
}

/// Acceleration form of the Frenkel Z:
/// →Z^α = (ħ / 2c²) Π^{αβ} w_β − (μ / c²) Π^α{}_ρ H^{ρβ} v_β,
/// with w the four-acceleration. Coincides with [`z_frenkel`] exactly when
/// the spin mass equals m₀ and to O(ħ²) otherwise.
pub fn z_frenkel_accel(
    params: &ParticleParams,
    v: FourVector,
    spin: &AntisymTensor2,
    h: &AntisymTensor2,
    w: FourVector,
) -> FourVector {
    let c2 = params.c * params.c;
    let u = h.contract_vector(v);
    spin.contract_vector(w) * (params.hbar / (2.0 * c2)) - spin.contract_vector(u) * (params.mu() / c2)
}

/// Total momentum P = m v + Z in the requested formalism.
pub fn momentum(
    params: &ParticleParams,
    state: &ParticleState,
    sample: &FieldSample,
    formalism: Formalism,
) -> Result<FourVector> {
    let m = spin_mass(params, &state.spin, &sample.h)?;
    let z = match formalism {
        Formalism::Frenkel => z_frenkel(params, state.velocity, &state.spin, sample),
        Formalism::Shirokov => z_shirokov(params, state.velocity, &state.spin, sample),
    };
    Ok(state.velocity * m + z)
}

/// Velocity recovery for the momentum-based (Shirokov) formalism, regular
/// in the ħ → 0 limit.
///
/// Evaluates the scaled vector (2/ħ)Z on the unit velocity
/// v₀ = P c / √(−P·P) associated with the momentum direction, then inverts
/// P = m v + (ħ/2)·[(2/ħ)Z]. Returns the recovered velocity together with
/// the scaled vector so callers can reuse it in the spin equation.
pub fn shirokov_velocity(
    params: &ParticleParams,
    p: FourVector,
    spin: &AntisymTensor2,
    sample: &FieldSample,
) -> Result<(FourVector, FourVector)> {
    let pp = p.dot(p);
    if !(pp < 0.0) {
        return Err(Error::NonTimelikeMomentum(pp));
    }
    let v0 = p * (params.c / (-pp).sqrt());
    let z_scaled = z_shirokov_scaled(params, v0, spin, sample);
    let m = spin_mass(params, spin, &sample.h)?;
    let v = (p - z_scaled * (params.hbar / 2.0)) * (1.0 / m);
    Ok((v, z_scaled))
}

/// Spin four-vector S^μ = (1 / 2 m₀ c) ε^{μναβ} Π_{αβ} P_ν for a time-like
/// momentum. Closed form with ε^{0123} = +1:
/// S⁰ = (P⃗·b)/(m₀c), S⃗ = (P⁰ b + P⃗ × e)/(m₀c).
pub fn spin_four_vector(
    params: &ParticleParams,
    spin: &AntisymTensor2,
    p: FourVector,
) -> Result<FourVector> {
    let pp = p.dot(p);
    if !(pp < 0.0) {
        return Err(Error::NonTimelikeMomentum(pp));
    }
    let k = 1.0 / (params.m0 * params.c);
    Ok(FourVector::from_parts(
        k * p.spatial().dot(spin.b),
        k * (p.t * spin.b + p.spatial().cross(spin.e)),
    ))
}

/// Inverse map Π^{αβ} = (1 / m₀ c) ε^{αβρσ} S_ρ P_σ:
/// e = (P⃗ × S⃗)/(m₀c), b = (P⁰ S⃗ − S⁰ P⃗)/(m₀c).
///
/// Round-trips with [`spin_four_vector`] for states satisfying the
/// supplementary condition with P·P = −m₀²c².
pub fn tensor_from_spin_vector(params: &ParticleParams, s: FourVector, p: FourVector) -> AntisymTensor2 {
    let k = 1.0 / (params.m0 * params.c);
    AntisymTensor2::new(
        k * p.spatial().cross(s.spatial()),
        k * (p.t * s.spatial() - s.t * p.spatial()),
    )
}
