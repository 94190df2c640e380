//! `spindyn` — scenario runner for the covariant spin-dynamics engine.
//!
//! Verbs:
//! * `run`      — integrate one scenario, write trajectory CSV + run report
//! * `compare`  — run several formulations on one grid, tabulate deviations
//! * `analyze`  — post-process a trajectory CSV
//! * `validate` — parse and validate a scenario, reporting every violation
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O failure. The default output directory is `--out`, falling back to
//! the `SPINDYN_OUT` environment variable, then the current directory.

mod analyze;
mod csvio;
mod error;
mod report;
mod scenario;
mod svg;

use analyze::{invariant_summary_report, precession_fit_report, thomas_check_report, ANALYSES};
use clap::{ArgAction, Parser, Subcommand};
use csvio::Trajectory;
use error::{io_err, CliError, CliResult};
use scenario::Scenario;
use serde::Serialize;
use spindyn::dynamics::{ParticleParams, ParticleState};
use spindyn::fields::FieldModel;
use spindyn::integrator::{create, Method, RunOutput, StepConfig, FORMULATION_TAGS};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "spindyn",
    version,
    about = "Covariant spin dynamics: run, compare, and analyze scenarios",
    propagate_version = true
)]
struct Cli {
    /// Output directory (default: $SPINDYN_OUT, then the current directory).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Suppress progress chatter on stdout; file outputs are unaffected.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write the trajectory CSV plus a run report.
    Run {
        /// Scenario TOML file.
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        /// Override the scenario's formulation tag.
        #[arg(long, value_name = "TAG")]
        formulation: Option<String>,
    },
    /// Run several formulations on one shared grid and tabulate per-pair
    /// maximum deviations. Requires the fixed-step method.
    Compare {
        /// Scenario TOML file.
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
        /// Formulation to include (repeatable). Defaults to all registered.
        #[arg(long = "formulation", value_name = "TAG", action = ArgAction::Append)]
        formulations: Vec<String>,
        /// Worker threads for fanning out the runs.
        #[arg(long, value_name = "N", default_value_t = 1)]
        threads: usize,
    },
    /// Post-process a trajectory CSV written by `run` or `compare`.
    Analyze {
        /// One of: precession-fit, thomas-check, invariant-summary.
        #[arg(value_name = "ANALYSIS")]
        analysis: String,
        /// Trajectory CSV (schema v1).
        #[arg(value_name = "CSV")]
        input: PathBuf,
        /// Originating scenario; required by thomas-check.
        #[arg(long, value_name = "FILE")]
        scenario: Option<PathBuf>,
    },
    /// Parse and validate a scenario, reporting every violation at once.
    Validate {
        /// Scenario TOML file.
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    let out_flag = cli.out.clone();
    let result = match cli.command {
        Command::Run {
            scenario,
            formulation,
        } => cmd_run(&scenario, formulation, out_flag, quiet),
        Command::Compare {
            scenario,
            formulations,
            threads,
        } => cmd_compare(&scenario, formulations, threads, out_flag, quiet),
        Command::Analyze {
            analysis,
            input,
            scenario,
        } => cmd_analyze(&analysis, &input, scenario.as_deref()),
        Command::Validate { scenario } => cmd_validate(&scenario, quiet),
    };
    match result {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

/// `--out` beats `SPINDYN_OUT` beats the current directory. The directory
/// is created if missing.
fn resolve_out_dir(flag: Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = flag
        .or_else(|| std::env::var_os("SPINDYN_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| io_err("cannot create output directory", &dir, e))?;
    Ok(dir)
}

/// Run the validator and turn a non-empty violation list into one
/// configuration error that lists every violation with its field path.
fn ensure_valid(sc: &Scenario, path: &Path, check_regime: bool) -> CliResult<()> {
    let violations = sc.validate(check_regime);
    if violations.is_empty() {
        return Ok(());
    }
    let mut msg = format!(
        "scenario {}: {} violation(s):",
        path.display(),
        violations.len()
    );
    for v in &violations {
        msg.push_str(&format!("\n  {v}"));
    }
    Err(CliError::Config(msg))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| io_err("cannot write", path, e))
}

fn toml_doc<T: Serialize>(value: &T) -> String {
    let mut text = toml::to_string_pretty(value).expect("report serializes to TOML");
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

// ---------------------------------------------------------------- run ----

fn cmd_run(
    scenario_path: &Path,
    formulation_override: Option<String>,
    out_flag: Option<PathBuf>,
    quiet: bool,
) -> CliResult<()> {
    let mut sc = Scenario::load(scenario_path)?;
    if let Some(tag) = formulation_override {
        sc.integrator.formulation = tag;
    }
    ensure_valid(&sc, scenario_path, true)?;
    let out_dir = resolve_out_dir(out_flag)?;

    let params = sc.params()?;
    let model = sc.model()?;
    let init = sc.initial_state()?;
    let cfg = sc.step_config();
    let form = spindyn::integrator::formulation(&sc.integrator.formulation)?;

    let clock = Instant::now();
    let output = spindyn::integrator::run(&params, &model, form.as_ref(), &init, &cfg)?;
    let wall = clock.elapsed().as_secs_f64();

    let csv_path = sc.csv_path(scenario_path, &out_dir);
    csvio::write_file(&csv_path, &output.samples)?;
    let stem = sc.output_stem(scenario_path);
    let report_path = csv_path.with_file_name(format!("{stem}.report.toml"));
    let report = report::run_report(&sc, &output, wall);
    write_text(&report_path, &toml_doc(&report))?;
    let mut svg_path = None;
    if sc.wants_svg() {
        let tr = Trajectory::from_samples(&output.samples);
        let path = csv_path.with_file_name(format!("{stem}.svg"));
        write_text(&path, &svg::render(&tr))?;
        svg_path = Some(path);
    }

    if !quiet {
        println!(
            "run: {} / {} — {} samples, {} steps, wall {:.3} s",
            output.formulation,
            output.method.tag(),
            output.samples.len(),
            output.diagnostics.steps,
            wall
        );
        println!("wrote {}", csv_path.display());
        println!("wrote {}", report_path.display());
        if let Some(p) = svg_path {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

// ------------------------------------------------------------ compare ----

#[derive(Debug, Serialize)]
struct CompareRunEntry {
    formulation: String,
    samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
    /// Present iff the formulation was excluded as out of regime.
    #[serde(skip_serializing_if = "Option::is_none")]
    excluded: Option<String>,
}

#[derive(Debug, Serialize)]
struct ComparePairEntry {
    a: String,
    b: String,
    max_zeta_dev: f64,
    max_position_dev: f64,
    max_gamma_dev: f64,
}

#[derive(Debug, Serialize)]
struct CompareReport<'a> {
    report_schema: &'static str,
    csv_schema: &'static str,
    method: String,
    wall_time_s: f64,
    runs: Vec<CompareRunEntry>,
    pairs: Vec<ComparePairEntry>,
    scenario: &'a Scenario,
}

fn pair_deviation(a: &RunOutput, b: &RunOutput) -> CliResult<(f64, f64, f64)> {
    if a.samples.len() != b.samples.len() {
        return Err(CliError::Numeric(format!(
            "comparison grids diverged: {} has {} samples, {} has {}",
            a.formulation,
            a.samples.len(),
            b.formulation,
            b.samples.len()
        )));
    }
    let mut dz: f64 = 0.0;
    let mut dx: f64 = 0.0;
    let mut dg: f64 = 0.0;
    for (ra, rb) in a.samples.iter().zip(&b.samples) {
        let zd = ra.zeta - rb.zeta;
        let pd = ra.position - rb.position;
        for c in [zd.x, zd.y, zd.z] {
            dz = dz.max(c.abs());
        }
        for c in [pd.x, pd.y, pd.z] {
            dx = dx.max(c.abs());
        }
        dg = dg.max((ra.gamma - rb.gamma).abs());
    }
    Ok((dz, dx, dg))
}

/// Fan the per-formulation runs out over up to `threads` workers and merge
/// the results back in tag order, so the output is deterministic no matter
/// how the work was scheduled.
fn run_many(
    tags: &[String],
    threads: usize,
    params: &ParticleParams,
    model: &FieldModel,
    init: &ParticleState,
    cfg: &StepConfig,
) -> Vec<CliResult<RunOutput>> {
    let worker = |tag: &str| -> CliResult<RunOutput> {
        let form = create(tag)
            .ok_or_else(|| CliError::Config(format!("unknown formulation '{tag}'")))?;
        spindyn::integrator::run(params, model, form.as_ref(), init, cfg)
            .map_err(CliError::from)
    };
    if threads <= 1 || tags.len() <= 1 {
        return tags.iter().map(|t| worker(t)).collect();
    }
    let workers = threads.min(tags.len());
    let mut slots: Vec<Option<CliResult<RunOutput>>> = (0..tags.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let worker = &worker;
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            handles.push(s.spawn(move || {
                let mut mine = Vec::new();
                let mut i = w;
                while i < tags.len() {
                    mine.push((i, worker(&tags[i])));
                    i += workers;
                }
                mine
            }));
        }
        for handle in handles {
            if let Ok(list) = handle.join() {
                for (i, result) in list {
                    slots[i] = Some(result);
                }
            }
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.unwrap_or_else(|| Err(CliError::Numeric("comparison worker panicked".into())))
        })
        .collect()
}

fn cmd_compare(
    scenario_path: &Path,
    formulations: Vec<String>,
    threads: usize,
    out_flag: Option<PathBuf>,
    quiet: bool,
) -> CliResult<()> {
    let sc = Scenario::load(scenario_path)?;
    // Regime fit is judged per requested formulation below, not against the
    // scenario's own default formulation.
    ensure_valid(&sc, scenario_path, false)?;
    let cfg = sc.step_config();
    if cfg.method != Method::Rk4Fixed {
        return Err(CliError::Config(
            "compare requires integrator.method = \"rk4-fixed\": deviations are \
             measured sample-by-sample on a shared grid"
                .into(),
        ));
    }
    let mut tags: Vec<String> = if formulations.is_empty() {
        FORMULATION_TAGS.iter().map(|t| t.to_string()).collect()
    } else {
        formulations
    };
    tags.dedup();
    for tag in &tags {
        if !FORMULATION_TAGS.contains(&tag.as_str()) {
            return Err(spindyn::Error::UnknownFormulation(tag.clone()).into());
        }
    }
    let out_dir = resolve_out_dir(out_flag)?;
    let params = sc.params()?;
    let model = sc.model()?;
    let init = sc.initial_state()?;
    let stem = sc.output_stem(scenario_path);

    // Split the requested tags into runnable ones and regime exclusions —
    // excluded formulations are flagged, never silently dropped.
    let mut excluded: Vec<(String, String)> = Vec::new();
    let mut runnable: Vec<String> = Vec::new();
    for tag in &tags {
        let form = create(tag).expect("tag membership checked above");
        if model.has_gradients() && !form.supports_gradients() {
            excluded.push((
                tag.clone(),
                format!(
                    "formulation carries no field-gradient terms; field model '{}' \
                     is outside its regime",
                    model.tag()
                ),
            ));
        } else {
            runnable.push(tag.clone());
        }
    }

    let clock = Instant::now();
    let results = run_many(&runnable, threads, &params, &model, &init, &cfg);
    let wall = clock.elapsed().as_secs_f64();
    let mut outputs: Vec<RunOutput> = Vec::with_capacity(results.len());
    for result in results {
        outputs.push(result?);
    }

    // Deterministic merge: everything below follows the requested tag order.
    let mut runs = Vec::new();
    for output in &outputs {
        let csv_name = format!("{stem}.{}.csv", output.formulation);
        let csv_path = out_dir.join(&csv_name);
        csvio::write_file(&csv_path, &output.samples)?;
        runs.push(CompareRunEntry {
            formulation: output.formulation.clone(),
            samples: output.samples.len(),
            csv: Some(csv_name),
            excluded: None,
        });
    }
    for (tag, reason) in &excluded {
        runs.push(CompareRunEntry {
            formulation: tag.clone(),
            samples: 0,
            csv: None,
            excluded: Some(reason.clone()),
        });
    }

    let mut pairs = Vec::new();
    for i in 0..outputs.len() {
        for j in (i + 1)..outputs.len() {
            let (dz, dx, dg) = pair_deviation(&outputs[i], &outputs[j])?;
            pairs.push(ComparePairEntry {
                a: outputs[i].formulation.clone(),
                b: outputs[j].formulation.clone(),
                max_zeta_dev: dz,
                max_position_dev: dx,
                max_gamma_dev: dg,
            });
        }
    }

    let report = CompareReport {
        report_schema: "spindyn-compare-report-v1",
        csv_schema: csvio::SCHEMA_VERSION,
        method: cfg.method.tag().to_string(),
        wall_time_s: wall,
        runs,
        pairs,
        scenario: &sc,
    };
    let report_path = out_dir.join(format!("{stem}.compare.toml"));
    write_text(&report_path, &toml_doc(&report))?;

    if !quiet {
        println!(
            "compare: {} formulation(s) on '{}', {} excluded, wall {:.3} s",
            tags.len(),
            model.tag(),
            excluded.len(),
            wall
        );
        for (tag, reason) in &excluded {
            println!("excluded: {tag} — {reason}");
        }
        println!(
            "{:<44} {:>13} {:>13} {:>13}",
            "pair", "max|dzeta|", "max|dpos|", "max|dgamma|"
        );
        for p in &report.pairs {
            println!(
                "{:<44} {:>13.3e} {:>13.3e} {:>13.3e}",
                format!("{} / {}", p.a, p.b),
                p.max_zeta_dev,
                p.max_position_dev,
                p.max_gamma_dev
            );
        }
        println!("wrote {}", report_path.display());
    }
    Ok(())
}

// ------------------------------------------------------------ analyze ----

fn cmd_analyze(analysis: &str, input: &Path, scenario_path: Option<&Path>) -> CliResult<()> {
    let tr = csvio::read_file(input)?;
    let doc = match analysis {
        "precession-fit" => toml_doc(&precession_fit_report(&tr)?),
        "invariant-summary" => toml_doc(&invariant_summary_report(&tr)?),
        "thomas-check" => {
            let path = scenario_path.ok_or_else(|| {
                CliError::Config(
                    "thomas-check recomputes the fields along the trajectory and \
                     needs the originating scenario: pass --scenario <FILE>"
                        .into(),
                )
            })?;
            let sc = Scenario::load(path)?;
            ensure_valid(&sc, path, false)?;
            toml_doc(&thomas_check_report(&tr, &sc)?)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown analysis '{other}' (known: {})",
                ANALYSES.join(", ")
            )))
        }
    };
    print!("{doc}");
    Ok(())
}

// ----------------------------------------------------------- validate ----

fn cmd_validate(scenario_path: &Path, quiet: bool) -> CliResult<()> {
    let sc = Scenario::load(scenario_path)?;
    ensure_valid(&sc, scenario_path, true)?;
    // Accepted scenarios must round-trip through serialization unchanged;
    // a mismatch would mean the echo in run reports is lossy.
    let round = Scenario::from_toml_str(&sc.to_toml_string()).map_err(|e| {
        CliError::Config(format!(
            "scenario {}: round-trip reparse failed: {}",
            scenario_path.display(),
            e.message()
        ))
    })?;
    if round != sc {
        return Err(CliError::Config(format!(
            "scenario {}: round-trip produced a different value",
            scenario_path.display()
        )));
    }
    if !quiet {
        println!("scenario {}: OK", scenario_path.display());
    }
    Ok(())
}
