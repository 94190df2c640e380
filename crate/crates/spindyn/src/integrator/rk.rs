//! Runge–Kutta kernels over flat state vectors: the classical fixed-step
//! RK4 scheme and the embedded Fehlberg 4(5) pair with PI-free step-size
//! control. The kernels know nothing about the physics; derivatives are
//! fallible closures so model-level preconditions can abort a step cleanly.

use crate::error::Result;

/// Fallible derivative evaluation dy = f(y).
pub(crate) type Deriv<'a> = dyn FnMut(&[f64], &mut [f64]) -> Result<()> + 'a;

/// Scratch buffers reused across steps to keep the hot loop allocation-free.
pub(crate) struct Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    k5: Vec<f64>,
    k6: Vec<f64>,
    ytmp: Vec<f64>,
    y4: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(dim: usize) -> Self {
        Workspace {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            k5: vec![0.0; dim],
            k6: vec![0.0; dim],
            ytmp: vec![0.0; dim],
            y4: vec![0.0; dim],
        }
    }
}

fn axpy(out: &mut [f64], y: &[f64], terms: &[(f64, &[f64])]) {
    for i in 0..out.len() {
        let mut acc = y[i];
        for (coef, k) in terms {
            acc += coef * k[i];
        }
        out[i] = acc;
    }
}

/// One classical RK4 step y ← y + h/6 (k₁ + 2k₂ + 2k₃ + k₄). Works for
/// negative h as well, which the reversibility checks rely on.
pub(crate) fn rk4_step(f: &mut Deriv, y: &mut [f64], h: f64, ws: &mut Workspace) -> Result<()> {
    f(y, &mut ws.k1)?;
    axpy(&mut ws.ytmp, y, &[(0.5 * h, &ws.k1)]);
    f(&ws.ytmp, &mut ws.k2)?;
    axpy(&mut ws.ytmp, y, &[(0.5 * h, &ws.k2)]);
    f(&ws.ytmp, &mut ws.k3)?;
    axpy(&mut ws.ytmp, y, &[(h, &ws.k3)]);
    f(&ws.ytmp, &mut ws.k4)?;
    for i in 0..y.len() {
        y[i] += h / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
    }
    Ok(())
}

// Fehlberg 4(5) tableau.
const A21: f64 = 1.0 / 4.0;
const A31: f64 = 3.0 / 32.0;
const A32: f64 = 9.0 / 32.0;
const A41: f64 = 1932.0 / 2197.0;
const A42: f64 = -7200.0 / 2197.0;
const A43: f64 = 7296.0 / 2197.0;
const A51: f64 = 439.0 / 216.0;
const A52: f64 = -8.0;
const A53: f64 = 3680.0 / 513.0;
const A54: f64 = -845.0 / 4104.0;
const A61: f64 = -8.0 / 27.0;
const A62: f64 = 2.0;
const A63: f64 = -3544.0 / 2565.0;
const A64: f64 = 1859.0 / 4104.0;
const A65: f64 = -11.0 / 40.0;
const B5: [f64; 6] = [
    16.0 / 135.0,
    0.0,
    6656.0 / 12825.0,
    28561.0 / 56430.0,
    -9.0 / 50.0,
    2.0 / 55.0,
];
const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0];

/// Outcome of one attempted embedded step.
pub(crate) struct StepOutcome {
    /// Scaled error norm; the attempt is acceptable when ≤ 1.
    pub err: f64,
    /// Suggested next step from the usual 0.9·err^{−1/5} rule, clamped to
    /// [0.2, 5] times the attempted step.
    pub h_next: f64,
}

impl StepOutcome {
    pub(crate) fn accepted(&self) -> bool {
        self.err <= 1.0
    }
}

/// One attempted Fehlberg step. Writes the 5th-order solution to `y_out`
/// (valid only when the outcome is accepted) and returns the scaled error
/// max_i |y5 − y4|_i / (atol + rtol·|y5|_i).
pub(crate) fn rkf45_step(
    f: &mut Deriv,
    y: &[f64],
    h: f64,
    rtol: f64,
    atol: f64,
    ws: &mut Workspace,
    y_out: &mut [f64],
) -> Result<StepOutcome> {
    f(y, &mut ws.k1)?;
    axpy(&mut ws.ytmp, y, &[(h * A21, &ws.k1)]);
    f(&ws.ytmp, &mut ws.k2)?;
    axpy(&mut ws.ytmp, y, &[(h * A31, &ws.k1), (h * A32, &ws.k2)]);
    f(&ws.ytmp, &mut ws.k3)?;
    axpy(&mut ws.ytmp, y, &[(h * A41, &ws.k1), (h * A42, &ws.k2), (h * A43, &ws.k3)]);
    f(&ws.ytmp, &mut ws.k4)?;
    axpy(
        &mut ws.ytmp,
        y,
        &[
            (h * A51, &ws.k1),
            (h * A52, &ws.k2),
            (h * A53, &ws.k3),
            (h * A54, &ws.k4),
        ],
    );
    f(&ws.ytmp, &mut ws.k5)?;
    axpy(
        &mut ws.ytmp,
        y,
        &[
            (h * A61, &ws.k1),
            (h * A62, &ws.k2),
            (h * A63, &ws.k3),
            (h * A64, &ws.k4),
            (h * A65, &ws.k5),
        ],
    );
    f(&ws.ytmp, &mut ws.k6)?;

    axpy(
        y_out,
        y,
        &[
            (h * B5[0], &ws.k1),
            (h * B5[2], &ws.k3),
            (h * B5[3], &ws.k4),
            (h * B5[4], &ws.k5),
            (h * B5[5], &ws.k6),
        ],
    );
    axpy(
        &mut ws.y4,
        y,
        &[
            (h * B4[0], &ws.k1),
            (h * B4[2], &ws.k3),
            (h * B4[3], &ws.k4),
            (h * B4[4], &ws.k5),
        ],
    );

    let mut err: f64 = 0.0;
    for i in 0..y.len() {
        let scale = atol + rtol * y_out[i].abs();
        err = err.max((y_out[i] - ws.y4[i]).abs() / scale);
    }
    let factor = if err > 0.0 {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    } else {
        5.0
    };
    Ok(StepOutcome {
        err,
        h_next: h.abs() * factor * h.signum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_rhs(y: &[f64], dy: &mut [f64]) -> Result<()> {
        dy[0] = y[0];
        Ok(())
    }

    fn oscillator_rhs(y: &[f64], dy: &mut [f64]) -> Result<()> {
        dy[0] = y[1];
        dy[1] = -y[0];
        Ok(())
    }

    #[test]
    fn rk4_integrates_exponential_with_fourth_order_error() {
        let run = |n: usize| -> f64 {
            let mut y = vec![1.0];
            let mut ws = Workspace::new(1);
            let h = 1.0 / n as f64;
            let mut f = exp_rhs;
            for _ in 0..n {
                rk4_step(&mut f, &mut y, h, &mut ws).unwrap();
            }
            (y[0] - std::f64::consts::E).abs()
        };
        let e64 = run(64);
        let e128 = run(128);
        let order = (e64 / e128).log2();
        assert!(e128 < 1e-8);
        assert!((order - 4.0).abs() < 0.1, "observed order {order}");
    }

    #[test]
    fn rk4_negative_step_retraces_the_exponential() {
        let mut y = vec![1.0];
        let mut ws = Workspace::new(1);
        let mut f = exp_rhs;
        for _ in 0..128 {
            rk4_step(&mut f, &mut y, 1.0 / 128.0, &mut ws).unwrap();
        }
        for _ in 0..128 {
            rk4_step(&mut f, &mut y, -1.0 / 128.0, &mut ws).unwrap();
        }
        assert!((y[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rkf45_error_estimate_tracks_tolerance() {
        // Integrate y' = y over [0, 1] with the adaptive controller inline.
        let rtol = 1e-10;
        let atol = 1e-12;
        let mut y = vec![1.0];
        let mut out = vec![0.0];
        let mut ws = Workspace::new(1);
        let mut f = exp_rhs;
        let mut t = 0.0;
        let mut h: f64 = 0.1;
        while t < 1.0 {
            h = h.min(1.0 - t);
            let outcome = rkf45_step(&mut f, &y, h, rtol, atol, &mut ws, &mut out).unwrap();
            if outcome.accepted() {
                y.copy_from_slice(&out);
                t += h;
            }
            h = outcome.h_next;
        }
        assert!((y[0] - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn rkf45_rejects_oversized_steps() {
        let mut ws = Workspace::new(2);
        let y = vec![1.0, 0.0];
        let mut out = vec![0.0; 2];
        let mut f = oscillator_rhs;
        let outcome = rkf45_step(&mut f, &y, 3.0, 1e-12, 1e-14, &mut ws, &mut out).unwrap();
        assert!(!outcome.accepted());
        assert!(outcome.h_next < 3.0);
        // The suggested shrink is clamped at one fifth of the attempt.
        assert!(outcome.h_next >= 0.2 * 3.0 - 1e-12);
    }

    #[test]
    fn rk4_conserves_oscillator_energy_to_truncation_order() {
        let mut y = vec![1.0, 0.0];
        let mut ws = Workspace::new(2);
        let h = 2.0 * std::f64::consts::PI / 256.0;
        let mut f = oscillator_rhs;
        for _ in 0..256 {
            rk4_step(&mut f, &mut y, h, &mut ws).unwrap();
        }
        let energy = y[0] * y[0] + y[1] * y[1];
        assert!((energy - 1.0).abs() < 1e-8);
        assert!((y[0] - 1.0).abs() < 1e-7);
        assert!(y[1].abs() < 1e-7);
    }
}
