//! Post-run analyses over a schema-v1 trajectory CSV.
//!
//! Three analyses are registered:
//! * `precession-fit` — rotation frequency of the in-plane angle between
//!   ζ and β, by phase-unwrapped linear regression against lab time. The
//!   regression slope is invariant under a uniform time shift.
//! * `thomas-check` — recomputes the Thomas frequency per sample along two
//!   routes (field form vs. kinematical β × a form) and reports the largest
//!   discrepancy. Needs the originating scenario for particle and field data.
//! * `invariant-summary` — maxima of the recorded conservation residuals.

use crate::csvio::Trajectory;
use crate::error::{CliError, CliResult};
use crate::scenario::Scenario;
use serde::Serialize;
use spindyn::analysis::{linear_fit, rotation_normal, signed_angle_about, unwrap_phases};
use spindyn::minkowski::{FourVector, Vec3};
use spindyn::spin::{lorentz_accel3, precession_split, thomas_from_acceleration};

pub const ANALYSES: [&str; 3] = ["precession-fit", "thomas-check", "invariant-summary"];

/// The unwrapped in-plane ζ–β angle series and the axis it is measured
/// about.
///
/// Axis selection: the rotation axis fitted from the ζ series, falling back
/// to the axis of the β series (a spinning particle on a straight orbit),
/// and `None` when both series are rotation-free — then the angle is
/// constant by construction and the caller reports zero frequency.
///
/// The angle itself is measured from β to ζ about the axis; when β is
/// parallel to the axis (no in-plane reference), the series falls back to
/// the phase of ζ relative to its own starting value.
pub struct AngleSeries {
    pub axis: Vec3,
    /// "beta" (angle from β_i to ζ_i) or "zeta0" (phase of ζ_i vs ζ_0).
    pub reference: &'static str,
    pub theta: Vec<f64>,
}

pub fn zeta_beta_angle_series(tr: &Trajectory) -> Option<AngleSeries> {
    let axis = rotation_normal(&tr.zeta).or_else(|| rotation_normal(&tr.beta))?;
    let beta_ref: Option<Vec<f64>> = tr
        .beta
        .iter()
        .zip(&tr.zeta)
        .map(|(b, z)| signed_angle_about(axis, *b, *z))
        .collect();
    if let Some(theta) = beta_ref {
        return Some(AngleSeries {
            axis,
            reference: "beta",
            theta: unwrap_phases(&theta),
        });
    }
    let z0 = tr.zeta[0];
    let zeta_ref: Option<Vec<f64>> = tr
        .zeta
        .iter()
        .map(|z| signed_angle_about(axis, z0, *z))
        .collect();
    zeta_ref.map(|theta| AngleSeries {
        axis,
        reference: "zeta0",
        theta: unwrap_phases(&theta),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PrecessionReport {
    pub analysis: &'static str,
    pub rows: usize,
    /// Axis the in-plane angle is measured about (zero if degenerate).
    pub axis: [f64; 3],
    /// "beta", "zeta0", or "none" for a rotation-free series.
    pub angle_reference: String,
    /// dθ/dt: angular rate of the ζ–β angle per unit lab time.
    pub rate_per_t: f64,
    /// dθ/dτ: the same rate per unit proper time.
    pub rate_per_tau: f64,
    /// Residuals of the per-lab-time linear fit.
    pub max_fit_residual: f64,
    pub rms_fit_residual: f64,
}

pub fn precession_fit_report(tr: &Trajectory) -> CliResult<PrecessionReport> {
    if tr.len() < 2 {
        return Err(CliError::Config(format!(
            "precession-fit needs at least 2 rows, got {}",
            tr.len()
        )));
    }
    let series = zeta_beta_angle_series(tr);
    let report = match series {
        None => PrecessionReport {
            analysis: "precession-fit",
            rows: tr.len(),
            axis: [0.0; 3],
            angle_reference: "none".to_string(),
            rate_per_t: 0.0,
            rate_per_tau: 0.0,
            max_fit_residual: 0.0,
            rms_fit_residual: 0.0,
        },
        Some(series) => {
            let fit_t = linear_fit(&tr.t, &series.theta).map_err(CliError::from)?;
            let fit_tau = linear_fit(&tr.tau, &series.theta).map_err(CliError::from)?;
            PrecessionReport {
                analysis: "precession-fit",
                rows: tr.len(),
                axis: [series.axis.x, series.axis.y, series.axis.z],
                angle_reference: series.reference.to_string(),
                rate_per_t: fit_t.slope,
                rate_per_tau: fit_tau.slope,
                max_fit_residual: fit_t.max_residual,
                rms_fit_residual: fit_t.rms_residual,
            }
        }
    };
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ThomasReport {
    pub analysis: &'static str,
    pub rows: usize,
    /// Largest per-component difference between the field form and the
    /// kinematical β × a form of Ω_Th over all samples.
    pub max_component_discrepancy: f64,
    pub rms_component_discrepancy: f64,
}

pub fn thomas_check_report(tr: &Trajectory, sc: &Scenario) -> CliResult<ThomasReport> {
    if tr.is_empty() {
        return Err(CliError::Config("thomas-check needs at least 1 row".into()));
    }
    let params = sc.params().map_err(CliError::from)?;
    let model = sc.model().map_err(CliError::from)?;
    let mut max_disc: f64 = 0.0;
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for i in 0..tr.len() {
        let r = FourVector::from_parts(params.c * tr.t[i], tr.position[i]);
        let (e_field, b_field) = model.sample(r).h.to_eb();
        let beta = tr.beta[i];
        let split =
            precession_split(&params, beta, e_field, b_field).map_err(CliError::from)?;
        let accel = lorentz_accel3(&params, beta, e_field, b_field);
        let kinematic =
            thomas_from_acceleration(params.c, beta, accel).map_err(CliError::from)?;
        let diff = split.omega_thomas - kinematic;
        for component in [diff.x, diff.y, diff.z] {
            max_disc = max_disc.max(component.abs());
            sum_sq += component * component;
            count += 1;
        }
    }
    Ok(ThomasReport {
        analysis: "thomas-check",
        rows: tr.len(),
        max_component_discrepancy: max_disc,
        rms_component_discrepancy: (sum_sq / count as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub analysis: &'static str,
    pub rows: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub max_res_vv: f64,
    pub max_res_frenkel: f64,
    pub max_res_spinnorm: f64,
    pub max_res_massshell: f64,
    /// max |m(τ) − m(0)| / |m(0)| over the run.
    pub max_mass_drift: f64,
}

pub fn invariant_summary_report(tr: &Trajectory) -> CliResult<InvariantReport> {
    if tr.is_empty() {
        return Err(CliError::Config(
            "invariant-summary needs at least 1 row".into(),
        ));
    }
    let max_of = |v: &[f64]| v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let m0 = tr.mass[0];
    let scale = if m0 == 0.0 { 1.0 } else { m0.abs() };
    let drift = tr
        .mass
        .iter()
        .fold(0.0_f64, |acc, m| acc.max((m - m0).abs() / scale));
    Ok(InvariantReport {
        analysis: "invariant-summary",
        rows: tr.len(),
        tau_min: tr.tau.first().copied().unwrap_or(0.0),
        tau_max: tr.tau.last().copied().unwrap_or(0.0),
        max_res_vv: max_of(&tr.residuals[0]),
        max_res_frenkel: max_of(&tr.residuals[1]),
        max_res_spinnorm: max_of(&tr.residuals[2]),
        max_res_massshell: max_of(&tr.residuals[3]),
        max_mass_drift: drift,
    })
}
