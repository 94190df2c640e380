//! Scenario files: TOML schema, documented defaults, validation.
//!
//! A scenario is a single TOML document with five sections. Only `[field]`
//! is mandatory; every other key has a documented default:
//!
//! ```toml
//! [particle]                    # all optional
//! m0 = 1.0                      # rest mass
//! e = 1.0                       # charge
//! g = 2.0                       # gyromagnetic factor
//! hbar = 1e-3                   # reduced Planck constant (engine units)
//! c = 1.0                       # speed of light
//! s = 0.5                       # spin quantum number
//!
//! [initial]                     # all optional
//! position = [0.0, 0.0, 0.0]
//! beta = [0.0, 0.0, 0.0]        # must satisfy |beta| < 1
//! zeta = [0.0, 0.0, 1.0]        # rest-frame spin direction, |zeta| in (0, 1]
//!
//! [field]                       # required
//! type = "uniform"              # uniform | magnetic-quadrupole | linear-e-gradient
//! e_field = [0.0, 0.0, 0.0]     # uniform only
//! b_field = [0.0, 0.0, 1.0]     # uniform only
//! # gradient = 0.5              # magnetic-quadrupole only (required there)
//! # b0 = 1.0                    # magnetic-quadrupole only (optional, default 0)
//! # k = 0.1                     # linear-e-gradient only (required there)
//!
//! [integrator]                  # all optional
//! formulation = "frenkel-corben"
//! method = "rk4-fixed"          # rk4-fixed | rkf45-adaptive
//! step = 0.006135923151542565   # tau step; initial step for the adaptive method
//! duration = 6.283185307179586  # total proper time
//! stride = 1                    # keep every stride-th sample
//! projection = true             # constraint projection after each step
//! rtol = 1e-8                   # adaptive method only
//! atol = 1e-12                  # adaptive method only
//!
//! [output]                      # all optional
//! path = "run.csv"              # default: <scenario stem>.csv in the output dir
//! format = "csv"                # csv | csv+svg
//! ```
//!
//! Validation collects *all* violations (each tagged with its field path,
//! e.g. `initial.beta`) instead of stopping at the first. Unknown keys are
//! rejected at parse time. Accepted scenarios round-trip through
//! serialization to an equal value.

use crate::error::{io_err, CliError, CliResult};
use serde::{Deserialize, Serialize};
use spindyn::dynamics::{ParticleParams, ParticleState};
use spindyn::fields::FieldModel;
use spindyn::integrator::{create, Method, StepConfig, FORMULATION_TAGS};
use spindyn::minkowski::Vec3;
use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;

/// One validation failure, tagged with the scenario path that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: &str, message: impl Into<String>) -> Self {
        Violation {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub particle: ParticleSection,
    #[serde(default)]
    pub initial: InitialSection,
    pub field: FieldSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParticleSection {
    pub m0: f64,
    pub e: f64,
    pub g: f64,
    pub hbar: f64,
    pub c: f64,
    pub s: f64,
}

impl Default for ParticleSection {
    fn default() -> Self {
        ParticleSection {
            m0: 1.0,
            e: 1.0,
            g: 2.0,
            hbar: 1e-3,
            c: 1.0,
            s: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub position: [f64; 3],
    pub beta: [f64; 3],
    pub zeta: [f64; 3],
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection {
            position: [0.0; 3],
            beta: [0.0; 3],
            zeta: [0.0, 0.0, 1.0],
        }
    }
}

/// Field section. Parsed as a loose bag of optional parameters so the
/// validator can report *which* parameter is missing or does not belong to
/// the chosen type, instead of a single opaque deserializer error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_field: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_field: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

pub const FIELD_KINDS: [&str; 3] = ["uniform", "magnetic-quadrupole", "linear-e-gradient"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub formulation: String,
    pub method: String,
    pub step: f64,
    pub duration: f64,
    pub stride: usize,
    pub projection: bool,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        IntegratorSection {
            formulation: "frenkel-corben".to_string(),
            method: "rk4-fixed".to_string(),
            step: TAU / 1024.0,
            duration: TAU,
            stride: 1,
            projection: true,
            rtol: 1e-8,
            atol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            path: None,
            format: "csv".to_string(),
        }
    }
}

pub const OUTPUT_FORMATS: [&str; 2] = ["csv", "csv+svg"];

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn norm3(a: [f64; 3]) -> f64 {
    vec3(a).norm()
}

fn all_finite(a: [f64; 3]) -> bool {
    a.iter().all(|v| v.is_finite())
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Scenario, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> CliResult<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| io_err("cannot read scenario", path, e))?;
        Scenario::from_toml_str(&text).map_err(|e| {
            CliError::Config(format!("scenario {}: {}", path.display(), e.message()))
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes to TOML")
    }

    /// Collect every violation. An empty vector means the scenario is valid.
    ///
    /// `check_regime` controls the formulation-versus-field cross check;
    /// `compare` disables it because there the formulation list is given on
    /// the command line and incompatible entries are flagged per run, not
    /// rejected up front.
    pub fn validate(&self, check_regime: bool) -> Vec<Violation> {
        let mut v = Vec::new();
        self.validate_particle(&mut v);
        self.validate_initial(&mut v);
        self.validate_field(&mut v);
        self.validate_integrator(&mut v, check_regime);
        self.validate_output(&mut v);
        v
    }

    fn validate_particle(&self, v: &mut Vec<Violation>) {
        let p = &self.particle;
        for (path, value) in [
            ("particle.m0", p.m0),
            ("particle.e", p.e),
            ("particle.g", p.g),
            ("particle.hbar", p.hbar),
            ("particle.c", p.c),
            ("particle.s", p.s),
        ] {
            if !value.is_finite() {
                v.push(Violation::new(path, format!("value {value} is not finite")));
            }
        }
        for (path, value) in [
            ("particle.m0", p.m0),
            ("particle.c", p.c),
            ("particle.s", p.s),
        ] {
            if value.is_finite() && value <= 0.0 {
                v.push(Violation::new(path, format!("value {value} must be > 0")));
            }
        }
        if p.hbar.is_finite() && p.hbar < 0.0 {
            v.push(Violation::new(
                "particle.hbar",
                format!("value {} must be >= 0", p.hbar),
            ));
        }
    }

    fn validate_initial(&self, v: &mut Vec<Violation>) {
        let i = &self.initial;
        if !all_finite(i.position) {
            v.push(Violation::new("initial.position", "components must be finite"));
        }
        if !all_finite(i.beta) {
            v.push(Violation::new("initial.beta", "components must be finite"));
        } else {
            let b = norm3(i.beta);
            if b >= 1.0 {
                v.push(Violation::new(
                    "initial.beta",
                    format!("|beta| = {b:.6} must be strictly below 1"),
                ));
            }
        }
        if !all_finite(i.zeta) {
            v.push(Violation::new("initial.zeta", "components must be finite"));
        } else {
            let z = norm3(i.zeta);
            if !(z > 0.0 && z <= 1.0) {
                v.push(Violation::new(
                    "initial.zeta",
                    format!("|zeta| = {z:.6} must lie in (0, 1]"),
                ));
            }
        }
    }

    fn validate_field(&self, v: &mut Vec<Violation>) {
        let f = &self.field;
        // Reject parameters that do not belong to the chosen type, and
        // require the ones that must be present.
        let (allowed, required): (&[&str], &[&str]) = match f.kind.as_str() {
            "uniform" => (&["e_field", "b_field"], &[]),
            "magnetic-quadrupole" => (&["gradient", "b0"], &["gradient"]),
            "linear-e-gradient" => (&["k"], &["k"]),
            other => {
                v.push(Violation::new(
                    "field.type",
                    format!(
                        "unknown field type '{other}' (known: {})",
                        FIELD_KINDS.join(", ")
                    ),
                ));
                return;
            }
        };
        let present: [(&str, bool); 5] = [
            ("e_field", f.e_field.is_some()),
            ("b_field", f.b_field.is_some()),
            ("gradient", f.gradient.is_some()),
            ("b0", f.b0.is_some()),
            ("k", f.k.is_some()),
        ];
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                v.push(Violation::new(
                    &format!("field.{name}"),
                    format!("not a parameter of field type '{}'", f.kind),
                ));
            }
        }
        for name in required {
            let missing = match *name {
                "gradient" => f.gradient.is_none(),
                "k" => f.k.is_none(),
                _ => false,
            };
            if missing {
                v.push(Violation::new(
                    &format!("field.{name}"),
                    format!("required by field type '{}'", f.kind),
                ));
            }
        }
        for (path, value) in [
            ("field.e_field", f.e_field.map(all_finite)),
            ("field.b_field", f.b_field.map(all_finite)),
        ] {
            if value == Some(false) {
                v.push(Violation::new(path, "components must be finite"));
            }
        }
        for (path, value) in [
            ("field.gradient", f.gradient),
            ("field.b0", f.b0),
            ("field.k", f.k),
        ] {
            if let Some(x) = value {
                if !x.is_finite() {
                    v.push(Violation::new(path, format!("value {x} is not finite")));
                }
            }
        }
    }

    fn validate_integrator(&self, v: &mut Vec<Violation>, check_regime: bool) {
        let i = &self.integrator;
        let formulation_known = FORMULATION_TAGS.contains(&i.formulation.as_str());
        if !formulation_known {
            v.push(Violation::new(
                "integrator.formulation",
                format!(
                    "unknown formulation '{}' (known: {})",
                    i.formulation,
                    FORMULATION_TAGS.join(", ")
                ),
            ));
        }
        let method = Method::from_tag(&i.method);
        if method.is_none() {
            v.push(Violation::new(
                "integrator.method",
                format!(
                    "unknown method '{}' (known: rk4-fixed, rkf45-adaptive)",
                    i.method
                ),
            ));
        }
        if !(i.step.is_finite() && i.step > 0.0) {
            v.push(Violation::new(
                "integrator.step",
                format!("value {} must be finite and > 0", i.step),
            ));
        }
        if !(i.duration.is_finite() && i.duration > 0.0) {
            v.push(Violation::new(
                "integrator.duration",
                format!("value {} must be finite and > 0", i.duration),
            ));
        }
        if i.stride == 0 {
            v.push(Violation::new("integrator.stride", "must be >= 1"));
        }
        if method == Some(Method::Rkf45Adaptive) {
            for (path, value) in [
                ("integrator.rtol", i.rtol),
                ("integrator.atol", i.atol),
            ] {
                if !(value.is_finite() && value > 0.0) {
                    v.push(Violation::new(
                        path,
                        format!("value {value} must be finite and > 0"),
                    ));
                }
            }
        }
        // Regime cross-validation: a formulation that carries no
        // field-gradient terms cannot integrate a gradient-bearing model.
        if check_regime && formulation_known {
            if let Ok(model) = self.model() {
                let form = create(&self.integrator.formulation)
                    .expect("tag membership checked above");
                if model.has_gradients() && !form.supports_gradients() {
                    v.push(Violation::new(
                        "integrator.formulation",
                        format!(
                            "formulation '{}' carries no field-gradient terms; \
                             field model '{}' is outside its regime",
                            form.tag(),
                            model.tag()
                        ),
                    ));
                }
            }
        }
    }

    fn validate_output(&self, v: &mut Vec<Violation>) {
        let o = &self.output;
        if !OUTPUT_FORMATS.contains(&o.format.as_str()) {
            v.push(Violation::new(
                "output.format",
                format!(
                    "unknown format '{}' (known: {})",
                    o.format,
                    OUTPUT_FORMATS.join(", ")
                ),
            ));
        }
        if let Some(path) = &o.path {
            if path.is_empty() {
                v.push(Violation::new("output.path", "must not be empty"));
            }
        }
    }

    // ----- Builders (call only after a clean validate()) -----

    pub fn params(&self) -> spindyn::Result<ParticleParams> {
        let p = &self.particle;
        ParticleParams::new(p.m0, p.e, p.g, p.hbar, p.c, p.s)
    }

    pub fn model(&self) -> spindyn::Result<FieldModel> {
        let f = &self.field;
        match f.kind.as_str() {
            "uniform" => Ok(FieldModel::Uniform {
                e_field: vec3(f.e_field.unwrap_or([0.0; 3])),
                b_field: vec3(f.b_field.unwrap_or([0.0; 3])),
            }),
            "magnetic-quadrupole" => Ok(FieldModel::MagneticQuadrupole {
                gradient: f.gradient.ok_or_else(|| {
                    spindyn::Error::InvalidParams("field.gradient is required".into())
                })?,
                b0: f.b0.unwrap_or(0.0),
            }),
            "linear-e-gradient" => Ok(FieldModel::LinearEGradient {
                k: f.k.ok_or_else(|| {
                    spindyn::Error::InvalidParams("field.k is required".into())
                })?,
            }),
            other => Err(spindyn::Error::InvalidParams(format!(
                "unknown field type '{other}'"
            ))),
        }
    }

    pub fn initial_state(&self) -> spindyn::Result<ParticleState> {
        ParticleState::from_beta_zeta(
            self.particle.c,
            vec3(self.initial.position),
            vec3(self.initial.beta),
            vec3(self.initial.zeta),
        )
    }

    pub fn step_config(&self) -> StepConfig {
        let i = &self.integrator;
        let method = Method::from_tag(&i.method).unwrap_or(Method::Rk4Fixed);
        StepConfig {
            method,
            step: i.step,
            duration: i.duration,
            stride: i.stride,
            projection: i.projection,
            rtol: i.rtol,
            atol: i.atol,
        }
    }

    /// File stem for outputs: the explicit `output.path` (minus extension)
    /// or the scenario file's own stem.
    pub fn output_stem(&self, scenario_path: &Path) -> String {
        if let Some(p) = &self.output.path {
            let candidate = Path::new(p);
            if let Some(stem) = candidate.file_stem() {
                return stem.to_string_lossy().into_owned();
            }
        }
        scenario_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".to_string())
    }

    /// The CSV path for a run: `output.path` as given (joined to `out_dir`
    /// when relative) or `<scenario stem>.csv` inside `out_dir`.
    pub fn csv_path(&self, scenario_path: &Path, out_dir: &Path) -> std::path::PathBuf {
        match &self.output.path {
            Some(p) => {
                let candidate = std::path::PathBuf::from(p);
                if candidate.is_absolute() {
                    candidate
                } else {
                    out_dir.join(candidate)
                }
            }
            None => out_dir.join(format!("{}.csv", self.output_stem(scenario_path))),
        }
    }

    pub fn wants_svg(&self) -> bool {
        self.output.format == "csv+svg"
    }
}
