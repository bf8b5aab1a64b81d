//! Scenario and sweep execution with deterministic output.

use std::path::Path;

use anyhow::Result;
use quadwave::analytic::{self, revival_estimates};
use quadwave::models::{Model, ModelParams};
use quadwave::observables::{
    revival_time_from_pair_separations, spectrum, SpectralWindow, TimeSeries,
};
use quadwave::propagator::{classical_trajectory, ClassicalState};
use quadwave::run::{run_adiabatic, run_full, run_full_with_adiabatic_twin, RunOutput};
use quadwave::Error as CoreError;

use crate::config::{parse_sheet, RunKind, Scenario};
use crate::output::{time_tag, OutputDir};

/// Process-level outcome; maps to the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the config did not parse.
    Parse(String),
    /// Exit 3: the config parsed but is semantically invalid.
    Validation(String),
    /// Exit 4: the run aborted numerically; partial outputs were flushed.
    Blowup(String),
    /// Exit 1: I/O or other environment failure.
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Blowup(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Blowup(m) | CliError::Other(m) => m,
        }
    }
}

fn map_core(err: CoreError) -> CliError {
    match err {
        CoreError::Blowup(m) => CliError::Blowup(m),
        other => CliError::Validation(other.to_string()),
    }
}

fn map_io(err: anyhow::Error) -> CliError {
    CliError::Other(format!("{err:#}"))
}

fn suffix(label: &str, comparing: bool) -> String {
    if comparing {
        format!("_{label}")
    } else {
        String::new()
    }
}

fn write_run_output(
    dir: &mut OutputDir,
    scenario: &Scenario,
    label: &str,
    comparing: bool,
    out: &RunOutput,
) -> Result<()> {
    let sfx = suffix(label, comparing);
    dir.write_timeseries(&format!("timeseries{sfx}.csv"), &out.series)?;
    if let Some(h) = &out.series.h_cor {
        dir.write_hcor(&format!("diagnostics{sfx}.csv"), &out.series.times, h)?;
    }
    for frame in &out.qframes {
        dir.write_qfunction(&format!("qfunc{sfx}_t{}.csv", time_tag(frame.time)), frame)?;
    }
    if !out.packets.is_empty() {
        let grid = scenario.grid.build().expect("validated grid");
        dir.write_packets(&format!("packets{sfx}.csv"), grid.q_values(), &out.packets)?;
    }
    if scenario.write_spectrum && out.series.len() > 2 {
        let spec = spectrum(&out.series, SpectralWindow::Hann)?;
        dir.write_spectrum(&format!("spectrum{sfx}.csv"), &spec)?;
    }
    Ok(())
}

fn execute_runs(dir: &mut OutputDir, scenario: &Scenario) -> Result<Vec<(RunKind, TimeSeries)>, CliError> {
    let grid = scenario.grid.build().map_err(map_core)?;
    let comparing = scenario.runs.len() > 1;
    let opts = scenario.run_options();
    let mut series_out = Vec::new();

    // a {rabi, adiabatic} pair runs in lockstep so the fidelity is recorded
    let twin = scenario.runs.contains(&RunKind::Full(Model::Rabi))
        && scenario.runs.contains(&RunKind::Adiabatic);
    for kind in &scenario.runs {
        match kind {
            RunKind::Full(Model::Rabi) if twin => {
                let params = scenario.params(*kind).map_err(map_core)?;
                let (full, ad) = run_full_with_adiabatic_twin(
                    &params,
                    &grid,
                    &scenario.field,
                    &scenario.atom,
                    &scenario.prop,
                    &opts,
                )
                .map_err(map_core)?;
                write_run_output(dir, scenario, "rabi", comparing, &full).map_err(map_io)?;
                write_run_output(dir, scenario, "adiabatic", comparing, &ad).map_err(map_io)?;
                if let Some(f) = &full.series.fidelity {
                    dir.write_fidelity("fidelity.csv", &full.series.times, f)
                        .map_err(map_io)?;
                }
                series_out.push((RunKind::Full(Model::Rabi), full.series));
                series_out.push((RunKind::Adiabatic, ad.series));
            }
            RunKind::Adiabatic if twin => {} // produced with the Rabi twin
            RunKind::Adiabatic => {
                let params = scenario.params(*kind).map_err(map_core)?;
                let out = run_adiabatic(
                    &params,
                    &grid,
                    &scenario.field,
                    &scenario.atom,
                    &scenario.prop,
                    &opts,
                )
                .map_err(map_core)?;
                write_run_output(dir, scenario, "adiabatic", comparing, &out).map_err(map_io)?;
                series_out.push((*kind, out.series));
            }
            RunKind::Full(model) => {
                let params = scenario.params(*kind).map_err(map_core)?;
                let out = run_full(
                    &params,
                    &grid,
                    &scenario.field,
                    &scenario.atom,
                    &scenario.prop,
                    &opts,
                )
                .map_err(map_core)?;
                write_run_output(dir, scenario, model.name(), comparing, &out).map_err(map_io)?;
                series_out.push((*kind, out.series));
            }
        }
    }
    Ok(series_out)
}

fn write_static_outputs(dir: &mut OutputDir, scenario: &Scenario) -> Result<(), CliError> {
    let grid = scenario.grid.build().map_err(map_core)?;
    let rabi = ModelParams::new(scenario.omega, scenario.g0, Model::Rabi).map_err(map_core)?;

    if scenario.write_curves {
        let curves = analytic::adiabatic_curves(&rabi, &grid);
        let (du, dl) = quadwave::models::diabatic_curves(&rabi, &grid).map_err(map_core)?;
        dir.write_curves(
            "curves.csv",
            grid.q_values(),
            &curves.v_plus,
            &curves.v_minus,
            &du,
            &dl,
            &curves.dtheta,
            &curves.d2theta,
        )
        .map_err(map_io)?;
    }

    if let Some(c) = &scenario.classical {
        for sheet_name in &c.sheets {
            let sheet = parse_sheet(sheet_name).map_err(CliError::Validation)?;
            let traj = classical_trajectory(
                ClassicalState {
                    q: c.q0,
                    p: c.p0,
                    sheet,
                },
                &rabi,
                c.dt,
                c.t_final,
            )
            .map_err(map_core)?;
            dir.write_trajectory(
                &format!("trajectory_{sheet_name}.csv"),
                c.dt,
                c.record_stride,
                &traj,
            )
            .map_err(map_io)?;
        }
    }

    if let Some(c) = &scenario.contours {
        let sheet = parse_sheet(&c.sheet).map_err(CliError::Validation)?;
        // contours follow the scenario's primary model (JC contours are circles)
        let params = scenario.params(scenario.runs[0]).map_err(map_core)?;
        for &e in &c.energies {
            let m = quadwave::manifold::manifold_contour(e, sheet, &params, c.n_samples)
                .map_err(map_core)?;
            dir.write_contour(&format!("contour_{}_e{}.csv", c.sheet, time_tag(e)), &m)
                .map_err(map_io)?;
        }
    }
    Ok(())
}

/// Executes a validated scenario into `out_root`. Returns the recorded series
/// per frame (used by the dt-check).
pub fn run_scenario_into(
    dir: &mut OutputDir,
    scenario: &Scenario,
) -> Result<Vec<(RunKind, TimeSeries)>, CliError> {
    write_static_outputs(dir, scenario)?;
    let series = execute_runs(dir, scenario)?;

    if scenario.write_revivals {
        let est = revival_estimates(
            &ModelParams::new(scenario.omega, scenario.g0, Model::Rabi).map_err(map_core)?,
            &scenario.field,
            scenario.curvature_fit_half_width,
        )
        .map_err(map_core)?;
        // measure from the JC series when present, else the first run
        let measured = series
            .iter()
            .find(|(k, _)| *k == RunKind::Full(Model::JaynesCummings))
            .or_else(|| series.first())
            .and_then(|(_, s)| {
                let abs_a: Vec<f64> = s.autocorrelation.iter().map(|a| a.norm()).collect();
                revival_time_from_pair_separations(
                    &s.times,
                    &abs_a,
                    0.8 * s.times.last().copied().unwrap_or(0.0),
                )
            });
        dir.write_revivals("revivals.csv", &est, measured).map_err(map_io)?;
    }
    Ok(series)
}

/// dt-convergence check: rerun at dt/2 (doubled stride keeps the record
/// lattice) and report the max-abs difference per observable column.
pub fn dt_check(dir: &mut OutputDir, scenario: &Scenario) -> Result<(), CliError> {
    let mut halved = scenario.clone();
    halved.prop.dt *= 0.5;
    halved.prop.record_stride *= 2;
    let base = execute_series_only(scenario)?;
    let fine = execute_series_only(&halved)?;
    let mut text = String::from("column,max_abs_difference\n");
    for ((kind, a), (_, b)) in base.iter().zip(fine.iter()) {
        let cols: [(&str, &Vec<f64>, &Vec<f64>); 6] = [
            ("inversion", &a.inversion, &b.inversion),
            ("var_q", &a.var_q, &b.var_q),
            ("var_p", &a.var_p, &b.var_p),
            ("entropy", &a.entropy, &b.entropy),
            ("excitation", &a.excitation, &b.excitation),
            ("energy", &a.energy, &b.energy),
        ];
        for (name, x, y) in cols {
            let d = x
                .iter()
                .zip(y.iter())
                .map(|(u, v)| (u - v).abs())
                .fold(0.0f64, f64::max);
            text.push_str(&format!("{}_{name},{:.3e}\n", kind.label(), d));
        }
    }
    dir.write_raw("dt_check.txt", &text).map_err(map_io)?;
    Ok(())
}

fn execute_series_only(scenario: &Scenario) -> Result<Vec<(RunKind, TimeSeries)>, CliError> {
    // quiet re-run without file output, for the dt check
    let grid = scenario.grid.build().map_err(map_core)?;
    let opts = quadwave::run::RunOptions {
        qfunc: None,
        packet_times: Vec::new(),
        skip_boundary_check: false,
    };
    let mut out = Vec::new();
    for kind in &scenario.runs {
        let params = scenario.params(*kind).map_err(map_core)?;
        let series = match kind {
            RunKind::Adiabatic => {
                run_adiabatic(&params, &grid, &scenario.field, &scenario.atom, &scenario.prop, &opts)
                    .map_err(map_core)?
                    .series
            }
            RunKind::Full(_) => {
                run_full(&params, &grid, &scenario.field, &scenario.atom, &scenario.prop, &opts)
                    .map_err(map_core)?
                    .series
            }
        };
        out.push((*kind, series));
    }
    Ok(out)
}

/// One fidelity-sweep point.
struct SweepPoint {
    g0: f64,
    omega: f64,
    times: Vec<f64>,
    fidelity: Vec<f64>,
}

/// Fidelity sweep over the (g0, omega) lattice; rows ordered g0-major, then
/// omega, then t. Points run in parallel; a single writer emits them in
/// deterministic order.
pub fn run_sweep_into(
    dir: &mut OutputDir,
    scenario: &Scenario,
    workers: usize,
) -> Result<(), CliError> {
    use rayon::prelude::*;

    let sweep = scenario
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Validation("sweep mode needs a [sweep] section".into()))?;
    let mut points = Vec::new();
    for &g0 in &sweep.g0_values {
        for &omega in &sweep.omega_values {
            points.push((g0, omega));
        }
    }
    let grid = scenario.grid.build().map_err(map_core)?;
    let compute = |&(g0, omega): &(f64, f64)| -> Result<SweepPoint, CliError> {
        let params = ModelParams::new(omega, g0, Model::Rabi).map_err(map_core)?;
        let (full, _ad) = run_full_with_adiabatic_twin(
            &params,
            &grid,
            &scenario.field,
            &scenario.atom,
            &scenario.prop,
            &quadwave::run::RunOptions::default(),
        )
        .map_err(map_core)?;
        Ok(SweepPoint {
            g0,
            omega,
            times: full.series.times.clone(),
            fidelity: full.series.fidelity.clone().expect("twin run records fidelity"),
        })
    };
    let results: Vec<Result<SweepPoint, CliError>> = if workers == 1 {
        points.iter().map(compute).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Other(e.to_string()))?;
        pool.install(|| points.par_iter().map(compute).collect())
    };

    let mut rows = String::from("g0,omega,t,fidelity\n");
    for r in results {
        let p = r?;
        for (t, f) in p.times.iter().zip(p.fidelity.iter()) {
            rows.push_str(&format!(
                "{},{},{},{}\n",
                crate::output::fmt(p.g0),
                crate::output::fmt(p.omega),
                crate::output::fmt(*t),
                crate::output::fmt(*f)
            ));
        }
    }
    dir.write_raw("fidelity_surface.csv", &rows).map_err(map_io)?;
    Ok(())
}

/// Full `run` entry: parse, validate, execute, manifest. On a numerical
/// abort the manifest carries the FAILED marker and the partial outputs stay.
pub fn run_config(
    text: &str,
    out_override: Option<&Path>,
    with_dt_check: bool,
) -> Result<(), CliError> {
    let file = crate::config::parse(text).map_err(CliError::Parse)?;
    let scenario = crate::config::validate(&file).map_err(CliError::Validation)?;
    let root = out_override
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| Path::new(&scenario.output_dir).to_path_buf());
    let mut dir = OutputDir::create(&root, text).map_err(map_io)?;
    let result = run_scenario_into(&mut dir, &scenario).and_then(|_| {
        if with_dt_check {
            dt_check(&mut dir, &scenario)
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => {
            dir.finish(None).map_err(map_io)?;
            Ok(())
        }
        Err(e @ CliError::Blowup(_)) => {
            dir.finish(Some(e.message())).map_err(map_io)?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

/// Full `sweep` entry.
pub fn sweep_config(
    text: &str,
    out_override: Option<&Path>,
    workers: usize,
) -> Result<(), CliError> {
    let file = crate::config::parse(text).map_err(CliError::Parse)?;
    let scenario = crate::config::validate(&file).map_err(CliError::Validation)?;
    if scenario.sweep.is_none() {
        return Err(CliError::Validation(
            "sweep mode needs a [sweep] section".into(),
        ));
    }
    let root = out_override
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| Path::new(&scenario.output_dir).to_path_buf());
    let mut dir = OutputDir::create(&root, text).map_err(map_io)?;
    match run_sweep_into(&mut dir, &scenario, workers) {
        Ok(()) => {
            dir.finish(None).map_err(map_io)?;
            Ok(())
        }
        Err(e @ CliError::Blowup(_)) => {
            dir.finish(Some(e.message())).map_err(map_io)?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}
