//! Flat-spacetime primitives: four-vectors, antisymmetric rank-2 tensors
//! and pure boosts, with the handful of contractions the dynamics needs.
//!
//! Conventions used by every routine here:
//!
//! * metric g_{μν} = diag(−1, +1, +1, +1), index 0 is time;
//! * an antisymmetric tensor T^{αβ} is stored as an electric-like triple
//!   e = (T^{10}, T^{20}, T^{30}) and a magnetic-like triple
//!   b = (T^{23}, T^{31}, T^{12});
//! * for the electromagnetic field tensor this means e = −E and b = B,
//!   i.e. H^{i0} = −E_i and H^{12} = B_z;
//! * the Levi-Civita orientation is ε^{0123} = +1 (so ε_{0123} = −1);
//! * `wedge` builds a^α b^β − a^β b^α with no factor ½.
//!
//! Scope is deliberately small: no general Lorentz-transformation algebra,
//! no boost composition, no tensors of other rank.

mod boost;
mod four_vector;
mod tensor;
mod vec3;

pub use boost::Boost;
pub use four_vector::FourVector;
pub use tensor::AntisymTensor2;
pub use vec3::Vec3;
