//! Shared oracle machinery for the integration tests: a brute-force
//! Levi-Civita symbol, dense 4×4 matrix implementations of every tensor
//! operation (deliberately written by a different route than the closed
//! component forms in the library), and seeded random generators for
//! states and fields.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spindyn::dynamics::{ParticleParams, ParticleState};
use spindyn::minkowski::{AntisymTensor2, FourVector, Vec3};

/// Metric tensor g_{αβ} = g^{αβ} = diag(−1, +1, +1, +1).
pub const METRIC: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Levi-Civita symbol ε^{αβγδ} with ε^{0123} = +1, computed by brute-force
/// inversion counting rather than a lookup table.
pub fn epsilon(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let idx = [a, b, c, d];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] == idx[j] {
                return 0.0;
            }
        }
    }
    let mut inversions = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn fv_component(v: FourVector, i: usize) -> f64 {
    match i {
        0 => v.t,
        1 => v.x,
        2 => v.y,
        3 => v.z,
        _ => unreachable!(),
    }
}

pub fn fv_from_components(c: [f64; 4]) -> FourVector {
    FourVector::new(c[0], c[1], c[2], c[3])
}

/// Lowered components v_α = g_{αβ} v^β.
pub fn lower(v: FourVector) -> [f64; 4] {
    [-v.t, v.x, v.y, v.z]
}

/// Lowered tensor components T_{αβ} = g_{αμ} g_{βν} T^{μν}.
pub fn lower_tensor(t: &AntisymTensor2) -> [[f64; 4]; 4] {
    let m = t.matrix();
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = METRIC[a] * METRIC[b] * m[a][b];
        }
    }
    out
}

/// Dense oracle for the vector contraction u^ρ = T^{ρλ} v_λ.
pub fn dense_contract_vector(t: &AntisymTensor2, v: FourVector) -> FourVector {
    let m = t.matrix();
    let vl = lower(v);
    let mut out = [0.0; 4];
    for r in 0..4 {
        for l in 0..4 {
            out[r] += m[r][l] * vl[l];
        }
    }
    fv_from_components(out)
}

/// Dense oracle for the full contraction A_{αβ} B^{αβ}.
pub fn dense_contract_full(a: &AntisymTensor2, b: &AntisymTensor2) -> f64 {
    let al = lower_tensor(a);
    let bm = b.matrix();
    let mut sum = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            sum += al[i][j] * bm[i][j];
        }
    }
    sum
}

/// Dense oracle for the bracket C^{αβ} = A^{αρ} B_ρ{}^β − A^{βρ} B_ρ{}^α,
/// built from explicit index sums with one lowered dummy index.
pub fn dense_commutator(a: &AntisymTensor2, b: &AntisymTensor2) -> [[f64; 4]; 4] {
    let am = a.matrix();
    let bm = b.matrix();
    let mut out = [[0.0; 4]; 4];
    for alpha in 0..4 {
        for beta in 0..4 {
            let mut sum = 0.0;
            for rho in 0..4 {
                // B_ρ{}^β = g_{ρσ} B^{σβ}, and g is diagonal.
                sum += am[alpha][rho] * METRIC[rho] * bm[rho][beta];
                sum -= am[beta][rho] * METRIC[rho] * bm[rho][alpha];
            }
            out[alpha][beta] = sum;
        }
    }
    out
}

/// Dense oracle for the Hodge dual (★T)^{αβ} = ½ ε^{αβρσ} T_{ρσ}.
pub fn dense_dual(t: &AntisymTensor2) -> [[f64; 4]; 4] {
    let tl = lower_tensor(t);
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut sum = 0.0;
            for r in 0..4 {
                for s in 0..4 {
                    sum += epsilon(a, b, r, s) * tl[r][s];
                }
            }
            out[a][b] = 0.5 * sum;
        }
    }
    out
}

/// Dense oracle for the wedge W^{αβ} = a^α b^β − a^β b^α.
pub fn dense_wedge(a: FourVector, b: FourVector) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = fv_component(a, i) * fv_component(b, j) - fv_component(a, j) * fv_component(b, i);
        }
    }
    out
}

/// Maximum absolute difference between a tensor and a dense matrix.
pub fn matrix_deviation(t: &AntisymTensor2, m: &[[f64; 4]; 4]) -> f64 {
    let tm = t.matrix();
    let mut max = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            max = max.max((tm[a][b] - m[a][b]).abs());
        }
    }
    max
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_vec3(rng: &mut ChaCha8Rng, scale: f64) -> Vec3 {
    Vec3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

/// Random velocity with |β| ≤ `max` (uniform direction, uniform magnitude).
pub fn rand_beta(rng: &mut ChaCha8Rng, max: f64) -> Vec3 {
    loop {
        let v = rand_vec3(rng, 1.0);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            let mag = rng.gen_range(0.0..max);
            return v * (mag / n);
        }
    }
}

pub fn rand_tensor(rng: &mut ChaCha8Rng, scale: f64) -> AntisymTensor2 {
    AntisymTensor2::new(rand_vec3(rng, scale), rand_vec3(rng, scale))
}

pub fn rand_fourvector(rng: &mut ChaCha8Rng, scale: f64) -> FourVector {
    FourVector::from_parts(rng.gen_range(-scale..scale), rand_vec3(rng, scale))
}

/// Random on-shell state satisfying the Frenkel condition exactly.
pub fn rand_state(rng: &mut ChaCha8Rng, c: f64, beta_max: f64) -> ParticleState {
    let beta = rand_beta(rng, beta_max);
    let zeta = loop {
        let z = rand_vec3(rng, 1.0);
        if z.norm() > 0.1 {
            break z;
        }
    };
    ParticleState::from_beta_zeta(c, rand_vec3(rng, 1.0), beta, zeta).unwrap()
}

/// Dimensionless parameter set used across the oracle tests.
pub fn test_params(g: f64, hbar: f64) -> ParticleParams {
    ParticleParams::dimensionless(g, hbar)
}
