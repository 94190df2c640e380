//! Covariant spin dynamics of a classical charged particle with anomalous
//! magnetic moment in external electromagnetic fields.
//!
//! The engine integrates the coupled charge-motion and spin-precession
//! equations in four interchangeable formulations that agree within their
//! documented accuracy:
//!
//! * `frenkel-corben` — evolves (r, v, Π) with the Corben spin equation and
//!   the Frenkel condition v_α Π^{αβ} = 0,
//! * `shirokov-momentum` — evolves (r, P, Π) with the momentum-form charge
//!   equation and the Shirokov condition P_α Π^{αβ} = 0,
//! * `bmt-zeta` — evolves (r, v, ζ) with the rest-frame spin vector ζ
//!   (reduced BMT regime; uniform fields only),
//! * `effective-field` — evolves (r, v, Π) precessing Π around an effective
//!   field tensor that absorbs the Thomas precession (uniform fields only).
//!
//! Formulations are trait objects registered by name in
//! [`integrator::formulation`]; scenarios select them at run time.
//!
//! Conventions (see `docs/conventions.md` in the repository):
//! metric g = diag(−1, +1, +1, +1), field components H^{i0} = −E_i,
//! H^{23} = B_x, H^{31} = B_y, H^{12} = B_z, orientation ε^{0123} = +1, and
//! the index-pair antisymmetrizer A^{[α}B^{β]} = A^αB^β − A^βB^α carries no
//! factor ½. Factors of c, ħ, m₀ and e are kept explicit everywhere.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod integrator;
pub mod minkowski;
pub mod spin;

pub use error::{Error, Result};
