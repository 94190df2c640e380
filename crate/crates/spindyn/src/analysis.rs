//! Trajectory post-processing: phase unwrapping, least-squares frequency
//! fits, and rotation-axis extraction for precessing vector series. Used by
//! the geometric acceptance checks as well as the command-line analyzer.

use crate::error::{Error, Result};
use crate::minkowski::Vec3;
use std::f64::consts::PI;

/// Least-squares line y ≈ slope·x + intercept with residual statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub rms_residual: f64,
}

/// Ordinary least squares over paired samples. Needs at least two distinct
/// abscissae.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams(format!(
            "fit inputs must pair up: {} abscissae vs {} ordinates",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidParams(
            "fit needs at least two samples".into(),
        ));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParams(
            "fit abscissae are all identical".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut max_residual: f64 = 0.0;
    let mut sum_sq = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - (slope * xi + intercept);
        max_residual = max_residual.max(r.abs());
        sum_sq += r * r;
    }
    Ok(LinearFit {
        slope,
        intercept,
        max_residual,
        rms_residual: (sum_sq / n).sqrt(),
    })
}

/// Removes 2π discontinuities so the series becomes continuous; the first
/// sample is kept as-is.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let prev = out[i - 1];
            let mut candidate = p + offset;
            while candidate - prev > PI {
                offset -= 2.0 * PI;
                candidate = p + offset;
            }
            while candidate - prev < -PI {
                offset += 2.0 * PI;
                candidate = p + offset;
            }
            out.push(candidate);
        } else {
            out.push(p);
        }
    }
    out
}

/// Estimates the common rotation axis of a precessing vector series, signed
/// so that the rotation is right-handed about the returned axis. Built from
/// cross products of successive *differences*: for a vector coning about a
/// fixed axis the differences lie exactly in the rotation plane (the axial
/// component cancels), so the estimate is immune to the axial offset that
/// biases a direct v×v average over a non-integer number of turns. `None`
/// when the series is too short or degenerate (collinear / planar
/// oscillation / 180°-per-step aliasing).
pub fn rotation_normal(vectors: &[Vec3]) -> Option<Vec3> {
    if vectors.len() < 3 {
        return None;
    }
    let diffs: Vec<Vec3> = vectors.windows(2).map(|p| p[1] - p[0]).collect();
    let mut acc = Vec3::ZERO;
    let mut total = 0.0;
    for pair in diffs.windows(2) {
        let c = pair[0].cross(pair[1]);
        acc += c;
        total += c.norm();
    }
    if !(total > 0.0) || acc.norm() < 1e-9 * total {
        return None;
    }
    acc.normalized()
}

/// Signed angle from `a` to `b` about `axis` (right-hand sense), using the
/// projections of both vectors onto the plane normal to `axis`. `None` when
/// either projection vanishes.
pub fn signed_angle_about(axis: Vec3, a: Vec3, b: Vec3) -> Option<f64> {
    let n = axis.normalized()?;
    let pa = a - n * a.dot(n);
    let pb = b - n * b.dot(n);
    let scale = (pa.norm() * pb.norm()).sqrt();
    if !(scale > 0.0) {
        return None;
    }
    Some(n.dot(pa.cross(pb)).atan2(pa.dot(pb)))
}

/// Uniform-precession fit for a vector series v(t): rotation axis plus the
/// signed angular rate about it, with the phase-fit residuals as quality
/// measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecessionFit {
    pub axis: Vec3,
    /// Angular rate about `axis` (right-hand sense), per unit of the
    /// supplied time coordinate. Because `axis` is oriented along the
    /// actual sense of rotation, the fitted rate is non-negative for any
    /// coherent precession; the orientation information lives in `axis`.
    pub rate: f64,
    pub fit: LinearFit,
}

/// Fits a uniform rotation to the series: extracts the axis from successive
/// cross products, accumulates the unwrapped in-plane phase, and fits it
/// linearly against the time coordinate.
pub fn precession_fit(times: &[f64], vectors: &[Vec3]) -> Result<PrecessionFit> {
    if times.len() != vectors.len() {
        return Err(Error::InvalidParams(format!(
            "precession fit needs paired samples: {} times vs {} vectors",
            times.len(),
            vectors.len()
        )));
    }
    let axis = rotation_normal(vectors).ok_or_else(|| {
        Error::InvalidParams("vector series has no resolvable rotation axis (degenerate or too short)".into())
    })?;
    let reference = vectors[0];
    let mut phases = Vec::with_capacity(vectors.len());
    for v in vectors {
        let angle = signed_angle_about(axis, reference, *v).ok_or_else(|| {
            Error::InvalidParams("vector series leaves the rotation plane (projection vanished)".into())
        })?;
        phases.push(angle);
    }
    let unwrapped = unwrap_phases(&phases);
    let fit = linear_fit(times, &unwrapped)?;
    Ok(PrecessionFit {
        axis,
        rate: fit.slope,
        fit,
    })
}
