//! Structured run report emitted next to every trajectory CSV.
//!
//! Serialized as TOML. Contains the scenario echo, wall-clock time, sample
//! count, the conservation-diagnostic maxima, and derived observables.
//! Every reported frequency carries the residuals of its linear phase fit.

use crate::analyze::zeta_beta_angle_series;
use crate::csvio::{Trajectory, SCHEMA_VERSION};
use crate::scenario::Scenario;
use serde::Serialize;
use spindyn::analysis::{linear_fit, precession_fit};
use spindyn::integrator::{Diagnostics, RunOutput};
use spindyn::minkowski::Vec3;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<'a> {
    pub report_schema: &'static str,
    pub csv_schema: &'static str,
    pub formulation: String,
    pub method: String,
    pub wall_time_s: f64,
    pub samples: usize,
    pub diagnostics: DiagnosticsReport,
    pub observables: Observables,
    pub scenario: &'a Scenario,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub max_res_vv: f64,
    pub max_res_frenkel: f64,
    pub max_res_spinnorm: f64,
    pub max_res_massshell: f64,
    pub max_invariant_spread: f64,
    pub max_mass_drift: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub rhs_evals: usize,
    pub min_step: f64,
    pub max_step: f64,
}

impl From<&Diagnostics> for DiagnosticsReport {
    fn from(d: &Diagnostics) -> Self {
        DiagnosticsReport {
            max_res_vv: d.max_res_vv,
            max_res_frenkel: d.max_res_frenkel,
            max_res_spinnorm: d.max_res_spinnorm,
            max_res_massshell: d.max_res_massshell,
            max_invariant_spread: d.max_invariant_spread,
            max_mass_drift: d.max_mass_drift,
            steps: d.steps,
            rejected_steps: d.rejected_steps,
            rhs_evals: d.rhs_evals,
            min_step: if d.min_step.is_finite() { d.min_step } else { 0.0 },
            max_step: d.max_step,
        }
    }
}

/// Derived observables; each is omitted when the trajectory does not
/// determine it (e.g. no orbit on a straight track).
#[derive(Debug, Clone, Default, Serialize)]
pub struct Observables {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_rotation: Option<FrequencyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta_precession: Option<FrequencyReport>,
    /// Rate of the in-plane ζ–β angle: the anomalous precession.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomalous: Option<FrequencyReport>,
}

/// A fitted rotation rate with the quality of its phase fit.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyReport {
    pub axis: [f64; 3],
    pub rate_per_t: f64,
    pub rate_per_tau: f64,
    pub max_fit_residual: f64,
    pub rms_fit_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    /// Mean distance from the orbit centre, in the plane normal to the
    /// fitted β rotation axis.
    pub radius_mean: f64,
    /// RMS deviation from that mean radius (circularity measure).
    pub radius_rms_dev: f64,
}

fn rotation_frequency(tr: &Trajectory, vectors: &[Vec3]) -> Option<FrequencyReport> {
    let per_t = precession_fit(&tr.t, vectors).ok()?;
    let per_tau = precession_fit(&tr.tau, vectors).ok()?;
    Some(FrequencyReport {
        axis: [per_t.axis.x, per_t.axis.y, per_t.axis.z],
        rate_per_t: per_t.rate,
        rate_per_tau: per_tau.rate,
        max_fit_residual: per_t.fit.max_residual,
        rms_fit_residual: per_t.fit.rms_residual,
    })
}

fn anomalous_frequency(tr: &Trajectory) -> Option<FrequencyReport> {
    let series = zeta_beta_angle_series(tr)?;
    let fit_t = linear_fit(&tr.t, &series.theta).ok()?;
    let fit_tau = linear_fit(&tr.tau, &series.theta).ok()?;
    Some(FrequencyReport {
        axis: [series.axis.x, series.axis.y, series.axis.z],
        rate_per_t: fit_t.slope,
        rate_per_tau: fit_tau.slope,
        max_fit_residual: fit_t.max_residual,
        rms_fit_residual: fit_t.rms_residual,
    })
}

fn orbit(tr: &Trajectory, beta_axis: Vec3) -> Option<OrbitReport> {
    if tr.len() < 3 {
        return None;
    }
    let n = beta_axis.normalized()?;
    // Project positions into the plane normal to the rotation axis.
    let projected: Vec<Vec3> = tr
        .position
        .iter()
        .map(|p| *p - n.dot(*p) * n)
        .collect();
    let count = projected.len() as f64;
    let centre = projected.iter().fold(Vec3::ZERO, |acc, p| acc + *p) * (1.0 / count);
    let radii: Vec<f64> = projected.iter().map(|p| (*p - centre).norm()).collect();
    let mean = radii.iter().sum::<f64>() / count;
    let var = radii.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / count;
    Some(OrbitReport {
        radius_mean: mean,
        radius_rms_dev: var.sqrt(),
    })
}

pub fn observables(tr: &Trajectory) -> Observables {
    let beta_rotation = rotation_frequency(tr, &tr.beta);
    let orbit = beta_rotation
        .as_ref()
        .and_then(|f| orbit(tr, Vec3::new(f.axis[0], f.axis[1], f.axis[2])));
    Observables {
        orbit,
        beta_rotation,
        zeta_precession: rotation_frequency(tr, &tr.zeta),
        anomalous: anomalous_frequency(tr),
    }
}

pub fn run_report<'a>(
    scenario: &'a Scenario,
    output: &RunOutput,
    wall_time_s: f64,
) -> RunReport<'a> {
    let tr = Trajectory::from_samples(&output.samples);
    RunReport {
        report_schema: "spindyn-run-report-v1",
        csv_schema: SCHEMA_VERSION,
        formulation: output.formulation.clone(),
        method: output.method.tag().to_string(),
        wall_time_s,
        samples: output.samples.len(),
        diagnostics: DiagnosticsReport::from(&output.diagnostics),
        observables: observables(&tr),
        scenario,
    }
}
