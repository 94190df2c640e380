//! Trajectory integration: step configuration, the fixed/adaptive runner
//! over any registered formulation, per-sample conservation diagnostics,
//! and grid-aligned cross-formulation comparison.

mod formulation;
mod rk;

pub use formulation::{create, formulation, Formulation, FORMULATION_TAGS};

use crate::dynamics::{ParticleParams, ParticleState};
use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::minkowski::{AntisymTensor2, Vec3};

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical fixed-step RK4.
    Rk4Fixed,
    /// Embedded Fehlberg 4(5) with step-size control.
    Rkf45Adaptive,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Rk4Fixed => "rk4-fixed",
            Method::Rkf45Adaptive => "rkf45-adaptive",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Method> {
        match tag {
            "rk4-fixed" => Some(Method::Rk4Fixed),
            "rkf45-adaptive" => Some(Method::Rkf45Adaptive),
            _ => None,
        }
    }
}

/// Stepping configuration shared by all formulations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub method: Method,
    /// Fixed step (RK4) or initial step (RKF45), in proper time.
    pub step: f64,
    /// Total proper-time span.
    pub duration: f64,
    /// Record every n-th accepted step (the initial and final states are
    /// always recorded).
    pub stride: usize,
    /// Re-impose algebraic constraints after every accepted step.
    pub projection: bool,
    /// Relative tolerance for the adaptive error norm.
    pub rtol: f64,
    /// Absolute tolerance for the adaptive error norm.
    pub atol: f64,
}

impl StepConfig {
    /// Fixed-step RK4 with projection on and every step recorded.
    pub fn fixed(step: f64, duration: f64) -> Self {
        StepConfig {
            method: Method::Rk4Fixed,
            step,
            duration,
            stride: 1,
            projection: true,
            rtol: 1e-10,
            atol: 1e-12,
        }
    }

    /// Adaptive RKF45 with the given tolerances.
    pub fn adaptive(initial_step: f64, duration: f64, rtol: f64, atol: f64) -> Self {
        StepConfig {
            method: Method::Rkf45Adaptive,
            step: initial_step,
            duration,
            stride: 1,
            projection: true,
            rtol,
            atol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidStepConfig(format!(
                "step must be positive and finite, got {}",
                self.step
            )));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::InvalidStepConfig(format!(
                "duration must be positive and finite, got {}",
                self.duration
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidStepConfig("stride must be at least 1".into()));
        }
        if self.method == Method::Rkf45Adaptive && (!(self.rtol > 0.0) || !(self.atol > 0.0)) {
            return Err(Error::InvalidStepConfig(format!(
                "adaptive tolerances must be positive, got rtol {} atol {}",
                self.rtol, self.atol
            )));
        }
        Ok(())
    }
}

/// One recorded trajectory point with its conservation residuals.
#[derive(Debug, Clone, Copy)]
pub struct SampleRow {
    /// Proper time.
    pub tau: f64,
    /// Lab time r⁰/c.
    pub t: f64,
    pub position: Vec3,
    pub beta: Vec3,
    pub gamma: f64,
    /// Rest-frame polarization.
    pub zeta: Vec3,
    /// Spin tensor (reconstructed where not part of the state).
    pub spin: AntisymTensor2,
    /// Field-dependent spin mass m.
    pub mass: f64,
    /// |v·v + c²| / c².
    pub res_vv: f64,
    /// Normalized supplementary-condition residual (against v, or against P
    /// for the momentum formulation).
    pub res_frenkel: f64,
    /// Raw invariant Π_{αβ}Π^{αβ}.
    pub spin_norm_sq: f64,
    /// Relative drift of Π_{αβ}Π^{αβ} against the first recorded row.
    pub res_spinnorm: f64,
    /// |P·P + m²c²| / (m²c²).
    pub res_massshell: f64,
    /// Spread of the four-way spin–field invariant ½H·Π (NaN if a route is
    /// unavailable, e.g. for neutral particles).
    pub invariant_spread: f64,
}

/// Trajectory-wide maxima of the conservation residuals plus step-control
/// counters. Residual maxima are taken over the recorded rows.
#[derive(Debug, Clone, Copy, Default)]
pub struct Diagnostics {
    pub max_res_vv: f64,
    pub max_res_frenkel: f64,
    pub max_res_spinnorm: f64,
    pub max_res_massshell: f64,
    pub max_invariant_spread: f64,
    /// Max relative drift of the spin mass against the first row.
    pub max_mass_drift: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub rhs_evals: usize,
    pub min_step: f64,
    pub max_step: f64,
}

/// Completed trajectory.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub formulation: String,
    pub method: Method,
    pub samples: Vec<SampleRow>,
    pub diagnostics: Diagnostics,
}

fn validate_initial(params: &ParticleParams, init: &ParticleState) -> Result<()> {
    if !(init.position.is_finite() && init.velocity.is_finite() && init.spin.is_finite()) {
        return Err(Error::InvalidInitialState("non-finite initial state".into()));
    }
    if init.velocity.t <= 0.0 {
        return Err(Error::InvalidInitialState(
            "initial velocity must be future-pointing (v⁰ > 0)".into(),
        ));
    }
    let res = init.on_shell_residual(params.c);
    if res > crate::dynamics::ON_SHELL_TOL {
        return Err(Error::InvalidInitialState(format!(
            "initial velocity off the mass shell: residual {res:.3e}"
        )));
    }
    Ok(())
}

struct Recorder {
    samples: Vec<SampleRow>,
    spin_norm_ref: Option<f64>,
    mass_ref: Option<f64>,
    diag: Diagnostics,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            samples: Vec::new(),
            spin_norm_ref: None,
            mass_ref: None,
            diag: Diagnostics::default(),
        }
    }

    fn push(&mut self, mut row: SampleRow) {
        let sn0 = *self.spin_norm_ref.get_or_insert(row.spin_norm_sq);
        let m0 = *self.mass_ref.get_or_insert(row.mass);
        let sn_denom = if sn0.abs() > 0.0 { sn0.abs() } else { 1.0 };
        row.res_spinnorm = (row.spin_norm_sq - sn0).abs() / sn_denom;
        let m_denom = if m0.abs() > 0.0 { m0.abs() } else { 1.0 };
        let mass_drift = (row.mass - m0).abs() / m_denom;

        let d = &mut self.diag;
        d.max_res_vv = d.max_res_vv.max(row.res_vv);
        d.max_res_frenkel = d.max_res_frenkel.max(row.res_frenkel);
        d.max_res_spinnorm = d.max_res_spinnorm.max(row.res_spinnorm);
        d.max_res_massshell = d.max_res_massshell.max(row.res_massshell);
        if row.invariant_spread.is_finite() {
            d.max_invariant_spread = d.max_invariant_spread.max(row.invariant_spread);
        }
        d.max_mass_drift = d.max_mass_drift.max(mass_drift);
        self.samples.push(row);
    }
}

fn check_finite(y: &[f64], tau: f64, tag: &str) -> Result<()> {
    if y.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteState {
            tau,
            formulation: tag.to_owned(),
            detail: "state component became non-finite".into(),
        })
    }
}

/// Integrates one trajectory. The initial state must be on shell; the field
/// model must be within the formulation's regime.
pub fn run(
    params: &ParticleParams,
    model: &FieldModel,
    form: &dyn Formulation,
    init: &ParticleState,
    cfg: &StepConfig,
) -> Result<RunOutput> {
    cfg.validate()?;
    validate_initial(params, init)?;
    if model.has_gradients() && !form.supports_gradients() {
        return Err(Error::RegimeMismatch {
            formulation: form.tag().to_owned(),
            model: model.tag().to_owned(),
        });
    }

    let mut y = form.pack(params, model, init)?;
    let mut rec = Recorder::new();
    rec.push(form.observe(params, model, 0.0, &y)?);

    let mut evals: usize = 0;
    match cfg.method {
        Method::Rk4Fixed => {
            let mut ws = rk::Workspace::new(form.dim());
            let mut n = ((cfg.duration / cfg.step) - 1e-9).ceil().max(1.0) as usize;
            while n > 1 && cfg.duration - (n - 1) as f64 * cfg.step <= 0.0 {
                n -= 1;
            }
            rec.diag.min_step = f64::INFINITY;
            for k in 0..n {
                let tau0 = k as f64 * cfg.step;
                let tau1 = if k + 1 == n {
                    cfg.duration
                } else {
                    (k + 1) as f64 * cfg.step
                };
                let h = tau1 - tau0;
                let mut f = |s: &[f64], ds: &mut [f64]| {
                    evals += 1;
                    form.derivative(params, model, s, ds)
                };
                rk::rk4_step(&mut f, &mut y, h, &mut ws)?;
                if cfg.projection {
                    form.project(params, &mut y);
                }
                check_finite(&y, tau1, form.tag())?;
                rec.diag.steps += 1;
                rec.diag.min_step = rec.diag.min_step.min(h);
                rec.diag.max_step = rec.diag.max_step.max(h);
                if (k + 1) % cfg.stride == 0 || k + 1 == n {
                    rec.push(form.observe(params, model, tau1, &y)?);
                }
            }
        }
        Method::Rkf45Adaptive => {
            let mut ws = rk::Workspace::new(form.dim());
            let mut y_out = vec![0.0; form.dim()];
            let mut tau = 0.0;
            let mut h = cfg.step.min(cfg.duration);
            let end_eps = cfg.duration * 1e-14;
            let h_floor = cfg.duration * 1e-13;
            rec.diag.min_step = f64::INFINITY;
            while tau < cfg.duration - end_eps {
                if h < h_floor {
                    return Err(Error::StepCollapse { tau, step: h });
                }
                h = h.min(cfg.duration - tau);
                let mut f = |s: &[f64], ds: &mut [f64]| {
                    evals += 1;
                    form.derivative(params, model, s, ds)
                };
                let outcome = rk::rkf45_step(&mut f, &y, h, cfg.rtol, cfg.atol, &mut ws, &mut y_out)?;
                if outcome.accepted() {
                    y.copy_from_slice(&y_out);
                    tau += h;
                    if cfg.projection {
                        form.project(params, &mut y);
                    }
                    check_finite(&y, tau, form.tag())?;
                    rec.diag.steps += 1;
                    rec.diag.min_step = rec.diag.min_step.min(h);
                    rec.diag.max_step = rec.diag.max_step.max(h);
                    let at_end = tau >= cfg.duration - end_eps;
                    if rec.diag.steps.is_multiple_of(cfg.stride) || at_end {
                        rec.push(form.observe(params, model, tau, &y)?);
                    }
                } else {
                    rec.diag.rejected_steps += 1;
                }
                h = outcome.h_next;
            }
        }
    }
    if rec.diag.steps == 0 {
        rec.diag.min_step = 0.0;
    }
    rec.diag.rhs_evals = evals;

    Ok(RunOutput {
        formulation: form.tag().to_owned(),
        method: cfg.method,
        samples: rec.samples,
        diagnostics: rec.diag,
    })
}

/// Per-formulation outcome within a comparison.
#[derive(Debug, Clone)]
pub struct CompareEntry {
    pub tag: String,
    /// Present when the formulation was skipped, with the reason.
    pub excluded: Option<String>,
    /// Completed trajectory (absent when excluded).
    pub output: Option<RunOutput>,
    /// Max |ζ_this − ζ_ref| over the shared grid.
    pub max_zeta_dev: f64,
    /// Max |x⃗_this − x⃗_ref| over the shared grid.
    pub max_position_dev: f64,
    /// Max |γ_this − γ_ref| over the shared grid.
    pub max_gamma_dev: f64,
}

/// Cross-formulation comparison on one shared fixed-step grid.
#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub reference: RunOutput,
    pub entries: Vec<CompareEntry>,
}

/// Runs `tags[0]` as the reference and every further tag against it on the
/// identical proper-time grid, recording worst-case deviations. Requires a
/// fixed-step method so the grids align exactly; regime-mismatched
/// formulations are flagged and skipped rather than failing the whole
/// comparison.
pub fn compare(
    params: &ParticleParams,
    model: &FieldModel,
    tags: &[&str],
    init: &ParticleState,
    cfg: &StepConfig,
) -> Result<CompareOutput> {
    if cfg.method != Method::Rk4Fixed {
        return Err(Error::InvalidStepConfig(
            "comparison requires the fixed-step method so sample grids align".into(),
        ));
    }
    let (first, rest) = tags
        .split_first()
        .ok_or_else(|| Error::InvalidStepConfig("comparison needs at least one formulation".into()))?;
    let reference = run(params, model, formulation(first)?.as_ref(), init, cfg)?;

    let mut entries = Vec::new();
    for tag in rest {
        let form = formulation(tag)?;
        if model.has_gradients() && !form.supports_gradients() {
            entries.push(CompareEntry {
                tag: (*tag).to_owned(),
                excluded: Some(format!(
                    "formulation carries no field-gradient terms; field model '{}' is outside its regime",
                    model.tag()
                )),
                output: None,
                max_zeta_dev: f64::NAN,
                max_position_dev: f64::NAN,
                max_gamma_dev: f64::NAN,
            });
            continue;
        }
        let output = run(params, model, form.as_ref(), init, cfg)?;
        let mut dz: f64 = 0.0;
        let mut dx: f64 = 0.0;
        let mut dg: f64 = 0.0;
        for (a, b) in reference.samples.iter().zip(output.samples.iter()) {
            dz = dz.max((a.zeta - b.zeta).norm());
            dx = dx.max((a.position - b.position).norm());
            dg = dg.max((a.gamma - b.gamma).abs());
        }
        entries.push(CompareEntry {
            tag: (*tag).to_owned(),
            excluded: None,
            output: Some(output),
            max_zeta_dev: dz,
            max_position_dev: dx,
            max_gamma_dev: dg,
        });
    }
    Ok(CompareOutput { reference, entries })
}
