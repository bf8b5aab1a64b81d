//! Scenario configuration: a flat TOML file (`key = value` under one level of
//! sections), validated into core types.

use num_complex::Complex64;
use quadwave::analytic::DEFAULT_CURVATURE_FIT_HALF_WIDTH;
use quadwave::models::{Model, ModelParams};
use quadwave::observables::AlphaLattice;
use quadwave::propagator::{PropagatorConfig, Sheet, SplitScheme};
use quadwave::run::{GridSpec, QFunctionRequest, RunOptions};
use quadwave::states::{AtomStateSpec, FieldStateSpec};
use serde::Deserialize;

/// Raw scenario file as parsed from TOML.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub model: ModelSection,
    #[serde(default)]
    pub grid: GridSection,
    pub initial: InitialSection,
    pub propagation: PropagationSection,
    #[serde(default)]
    pub compare: CompareSection,
    #[serde(default)]
    pub qfunction: Option<QFunctionSection>,
    #[serde(default)]
    pub packets: Option<PacketsSection>,
    #[serde(default)]
    pub observables: ObservablesSection,
    #[serde(default)]
    pub curves: Option<CurvesSection>,
    #[serde(default)]
    pub classical: Option<ClassicalSection>,
    #[serde(default)]
    pub contours: Option<ContoursSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// rabi | jc | jc_interaction | lz; optional when [compare] lists models.
    #[serde(default)]
    pub kind: Option<String>,
    pub omega: f64,
    pub g0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n_points: usize,
    pub q_max: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            n_points: 2048,
            q_max: 40.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// fock | coherent
    pub field: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub nu_re: Option<f64>,
    #[serde(default)]
    pub nu_im: Option<f64>,
    /// excited | ground | superposition
    #[serde(default = "default_atom")]
    pub atom: String,
    #[serde(default)]
    pub plus_re: Option<f64>,
    #[serde(default)]
    pub plus_im: Option<f64>,
    #[serde(default)]
    pub minus_re: Option<f64>,
    #[serde(default)]
    pub minus_im: Option<f64>,
}

fn default_atom() -> String {
    "excited".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub dt: f64,
    pub t_final: f64,
    pub record_stride: usize,
    #[serde(default = "default_scheme")]
    pub scheme: String,
}

fn default_scheme() -> String {
    "vkv".into()
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    /// Subset of {rabi, adiabatic, jc, jc_interaction}; empty = single run of
    /// [model].kind.
    #[serde(default)]
    pub models: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QFunctionSection {
    pub times: Vec<f64>,
    #[serde(default)]
    pub half_width: Option<f64>,
    #[serde(default = "default_n_alpha")]
    pub n_alpha: usize,
}

fn default_n_alpha() -> usize {
    201
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketsSection {
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservablesSection {
    /// Write spectrum.csv from the autocorrelation record.
    pub spectrum: bool,
    /// Write revivals.csv with the closed-form and fitted estimates.
    pub revivals: bool,
    pub curvature_fit_half_width: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurvesSection {
    /// Write curves.csv with adiabatic and diabatic potential curves.
    pub enabled: bool,
}

impl Default for CurvesSection {
    fn default() -> Self {
        CurvesSection { enabled: true }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSection {
    pub sheets: Vec<String>,
    pub q0: f64,
    pub p0: f64,
    pub t_final: f64,
    #[serde(default = "default_classical_dt")]
    pub dt: f64,
    #[serde(default = "default_classical_stride")]
    pub record_stride: usize,
}

fn default_classical_dt() -> f64 {
    1e-3
}

fn default_classical_stride() -> usize {
    10
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContoursSection {
    pub energies: Vec<f64>,
    pub sheet: String,
    #[serde(default = "default_contour_samples")]
    pub n_samples: usize,
}

fn default_contour_samples() -> usize {
    512
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub g0_values: Vec<f64>,
    pub omega_values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: String,
}

/// Which propagation frames a scenario executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Full(Model),
    Adiabatic,
}

impl RunKind {
    pub fn label(&self) -> &'static str {
        match self {
            RunKind::Full(m) => m.name(),
            RunKind::Adiabatic => "adiabatic",
        }
    }
}

/// Validated scenario ready to execute.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub omega: f64,
    pub g0: f64,
    pub runs: Vec<RunKind>,
    pub grid: GridSpec,
    pub field: FieldStateSpec,
    pub atom: AtomStateSpec,
    pub prop: PropagatorConfig,
    pub qfunction: Option<QFunctionRequest>,
    pub packet_times: Vec<f64>,
    pub write_spectrum: bool,
    pub write_revivals: bool,
    pub curvature_fit_half_width: f64,
    pub write_curves: bool,
    pub classical: Option<ClassicalSection>,
    pub contours: Option<ContoursSection>,
    pub sweep: Option<SweepSection>,
    pub output_dir: String,
}

fn parse_model_kind(s: &str) -> Result<Model, String> {
    match s {
        "rabi" => Ok(Model::Rabi),
        "jc" => Ok(Model::JaynesCummings),
        "jc_interaction" => Ok(Model::JcInteractionPicture),
        "lz" => Ok(Model::LandauZener),
        other => Err(format!("unknown model kind '{other}'")),
    }
}

pub fn parse_sheet(s: &str) -> Result<Sheet, String> {
    match s {
        "upper" => Ok(Sheet::Upper),
        "lower" => Ok(Sheet::Lower),
        other => Err(format!("unknown sheet '{other}' (upper | lower)")),
    }
}

impl Scenario {
    /// Model parameters for a given frame of this scenario.
    pub fn params(&self, kind: RunKind) -> Result<ModelParams, quadwave::Error> {
        let model = match kind {
            RunKind::Full(m) => m,
            RunKind::Adiabatic => Model::Rabi,
        };
        ModelParams::new(self.omega, self.g0, model)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            qfunc: self.qfunction.clone(),
            packet_times: self.packet_times.clone(),
            skip_boundary_check: false,
        }
    }
}

/// Semantic validation of a parsed file. Errors here map to exit code 3.
pub fn validate(file: &ScenarioFile) -> Result<Scenario, String> {
    let mut runs = Vec::new();
    if file.compare.models.is_empty() {
        match file.model.kind.as_deref() {
            Some(kind) => runs.push(RunKind::Full(parse_model_kind(kind)?)),
            // sweeps always compare the full Rabi model with its adiabatic twin
            None if file.sweep.is_some() => runs.push(RunKind::Full(Model::Rabi)),
            None => {
                return Err("model.kind is required when [compare] lists no models".into())
            }
        }
    } else {
        for name in &file.compare.models {
            runs.push(match name.as_str() {
                "adiabatic" => RunKind::Adiabatic,
                other => RunKind::Full(parse_model_kind(other)?),
            });
        }
    }

    let field = match file.initial.field.as_str() {
        "fock" => FieldStateSpec::Fock(
            file.initial
                .n
                .ok_or("initial.n is required for a fock field state")?,
        ),
        "coherent" => FieldStateSpec::Coherent(Complex64::new(
            file.initial.nu_re.unwrap_or(0.0),
            file.initial.nu_im.unwrap_or(0.0),
        )),
        other => return Err(format!("unknown field state '{other}' (fock | coherent)")),
    };
    let atom = match file.initial.atom.as_str() {
        "excited" => AtomStateSpec::excited(),
        "ground" => AtomStateSpec::ground(),
        "superposition" => AtomStateSpec::normalized(
            Complex64::new(
                file.initial.plus_re.unwrap_or(0.0),
                file.initial.plus_im.unwrap_or(0.0),
            ),
            Complex64::new(
                file.initial.minus_re.unwrap_or(0.0),
                file.initial.minus_im.unwrap_or(0.0),
            ),
        )
        .map_err(|e| e.to_string())?,
        other => {
            return Err(format!(
                "unknown atom state '{other}' (excited | ground | superposition)"
            ))
        }
    };

    let scheme = match file.propagation.scheme.as_str() {
        "vkv" => SplitScheme::Vkv,
        "kvk" => SplitScheme::Kvk,
        other => return Err(format!("unknown scheme '{other}' (vkv | kvk)")),
    };
    let prop = PropagatorConfig {
        dt: file.propagation.dt,
        t_final: file.propagation.t_final,
        record_stride: file.propagation.record_stride,
        scheme,
    };
    prop.n_steps().map_err(|e| e.to_string())?;

    let qfunction = match &file.qfunction {
        Some(q) => {
            if q.times.iter().any(|&t| t > file.propagation.t_final + 1e-12) {
                return Err("qfunction.times must not exceed propagation.t_final".into());
            }
            Some(QFunctionRequest {
                times: q.times.clone(),
                lattice: AlphaLattice {
                    half_width: q
                        .half_width
                        .unwrap_or_else(|| field.mean_photon_number().sqrt() + 4.0),
                    n: q.n_alpha,
                },
            })
        }
        None => None,
    };
    let packet_times = file.packets.as_ref().map(|p| p.times.clone()).unwrap_or_default();
    if packet_times.iter().any(|&t| t > file.propagation.t_final + 1e-12) {
        return Err("packets.times must not exceed propagation.t_final".into());
    }

    if let Some(sweep) = &file.sweep {
        if sweep.g0_values.is_empty() || sweep.omega_values.is_empty() {
            return Err("sweep axes must be non-empty".into());
        }
    }
    if let Some(c) = &file.classical {
        if c.sheets.is_empty() {
            return Err("classical.sheets must be non-empty".into());
        }
        for s in &c.sheets {
            parse_sheet(s)?;
        }
    }
    if let Some(c) = &file.contours {
        parse_sheet(&c.sheet)?;
        if c.energies.is_empty() {
            return Err("contours.energies must be non-empty".into());
        }
    }

    // surface shallow parameter errors (negative omega etc.) now
    for kind in &runs {
        let model = match kind {
            RunKind::Full(m) => *m,
            RunKind::Adiabatic => Model::Rabi,
        };
        ModelParams::new(file.model.omega, file.model.g0, model).map_err(|e| e.to_string())?;
    }
    quadwave::make_grid(file.grid.n_points, file.grid.q_max).map_err(|e| e.to_string())?;

    Ok(Scenario {
        omega: file.model.omega,
        g0: file.model.g0,
        runs,
        grid: GridSpec {
            n_points: file.grid.n_points,
            q_max: file.grid.q_max,
        },
        field,
        atom,
        prop,
        qfunction,
        packet_times,
        write_spectrum: file.observables.spectrum,
        write_revivals: file.observables.revivals,
        curvature_fit_half_width: file
            .observables
            .curvature_fit_half_width
            .unwrap_or(DEFAULT_CURVATURE_FIT_HALF_WIDTH),
        write_curves: file.curves.as_ref().map(|c| c.enabled).unwrap_or(false),
        classical: file.classical.clone(),
        contours: file.contours.clone(),
        sweep: file.sweep.clone(),
        output_dir: file.output.directory.clone(),
    })
}

/// Parses the TOML text; errors here map to exit code 2.
pub fn parse(text: &str) -> Result<ScenarioFile, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}
