//! Error type shared by all engine modules.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the engine proper.
///
/// Configuration-file problems live in the CLI crate; this enum covers
/// physics preconditions and numerical failures.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A boost was requested with |β| ≥ 1.
    #[error("boost velocity |beta| = {0} must be strictly below 1")]
    SuperluminalBoost(f64),

    /// A four-velocity failed the mass-shell check v·v = −c².
    #[error("four-velocity off shell: |v.v + c^2|/c^2 = {residual:.3e} exceeds {tolerance:.1e}")]
    OffShellVelocity { residual: f64, tolerance: f64 },

    /// The field is so strong that the spin mass m = m₀(1 − μ H·Π / 2m₀c²)
    /// dropped to zero or below; the perturbative regime is gone.
    #[error("spin mass m = {m:.6e} is not positive; field too strong for this model")]
    NonpositiveSpinMass { m: f64 },

    /// An operation that divides by ħ was called with ħ = 0.
    #[error("{op} requires hbar > 0")]
    ZeroHbar { op: &'static str },

    /// Particle parameters violate a basic positivity requirement.
    #[error("invalid particle parameters: {0}")]
    InvalidParams(String),

    /// The spin four-vector map needs a time-like momentum.
    #[error("momentum is not time-like: P.P = {0:.6e} (must be negative)")]
    NonTimelikeMomentum(f64),

    /// A formulation was asked to run on a field model outside its regime.
    #[error("formulation '{formulation}' does not support field model '{model}'")]
    RegimeMismatch {
        formulation: String,
        model: String,
    },

    /// No formulation with this tag is registered.
    #[error("unknown formulation '{0}' (known: frenkel-corben, shirokov-momentum, bmt-zeta, effective-field)")]
    UnknownFormulation(String),

    /// Initial state handed to the integrator violates its constraints.
    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),

    /// Integrator configuration is unusable (non-positive step, bad stride, ...).
    #[error("invalid integrator configuration: {0}")]
    InvalidStepConfig(String),

    /// A state component became NaN or infinite during integration.
    #[error("numerical failure at tau = {tau:.6e} ({formulation}): non-finite state component; {detail}")]
    NonFiniteState {
        tau: f64,
        formulation: String,
        detail: String,
    },

    /// Adaptive step control shrank the step below the sanity floor.
    #[error("numerical failure at tau = {tau:.6e}: adaptive step collapsed to {step:.3e}")]
    StepCollapse { tau: f64, step: f64 },
}
