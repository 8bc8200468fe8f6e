//! The subcommands. Each returns a table and a JSON document; the caller
//! picks one to emit.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Rotation2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Family, FamilyParams, OutputFormat, Range, ScanConfig};
use super::output::{to_json, Cell, Table};
use super::CliError;
use crate::beams::{
    beam_geometry_1d, coherent_amplitude_1d, gsm_gamma, gsm_geometry, BeamParams2D, GsmParams,
};
use crate::extended::Extended;
use crate::family::{
    curv_eigenvalues, curv_variance, partial_transpose_variance, separability_report,
    tgsm_eigenvalues, tgsm_variance, uncertainty_check, variance_from_lmk, AgsmParams, CurvParams,
    PartialTranspose, SeparabilityReport, TgsmParams, TwoPointFunction2D, VarianceMatrix,
};
use crate::oracle::{
    field_width, fit_gsm_kernel, kernel_psd_check, numeric_width_scan, phase_space_grids_for,
    propagate_field_1d, propagate_kernel_1d, wigner_moments, Field1D, Grid1D, KernelGrid,
    KernelGrid2D, PsdCheck, DEFAULT_HALF_WIDTH_FACTOR, GRID_POINTS_ENV, PHASE_SPACE_POINTS,
};
use crate::witness::{
    effective_gsm_parameters, fit_width_scan, projected_width, WitnessError, WitnessReport,
};

/// Points per axis of the sampled 2D kernels used for positivity checks.
pub const PSD_GRID_POINTS: usize = 16;

/// Half width of those grids in units of the beam width.
pub const PSD_HALF_WIDTH: f64 = 2.5;

/// Default points per axis of 2D field grids, unless overridden by
/// `BEAMLAB_GRID_POINTS`.
pub const FIELD_2D_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Propagate,
    Witness,
    Physicality,
    Classify,
    Pt,
    CompareOracle,
}

impl CommandKind {
    pub fn default_format(self) -> OutputFormat {
        match self {
            CommandKind::Witness | CommandKind::Classify | CommandKind::Pt => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }

    fn families(self) -> &'static [Family] {
        use Family::*;
        match self {
            CommandKind::Propagate => &[Coherent1d, Gsm],
            CommandKind::Witness => &[Elliptic2d],
            CommandKind::Physicality => &[Tgsm, Curv],
            CommandKind::Classify | CommandKind::Pt => &[Tgsm, Curv, Agsm],
            CommandKind::CompareOracle => &Family::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub verify: bool,
    pub numeric: bool,
}

/// Output of one command in both renderings.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub table: Table,
    pub json: Vec<u8>,
    /// Summary for stderr when the CSV table alone does not carry it.
    pub note: Option<String>,
}

/// A JSON document: the resolved configuration plus one record per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<R> {
    pub config: ScanConfig,
    pub rows: Vec<R>,
}

pub fn run_command(
    kind: CommandKind,
    config: &ScanConfig,
    opts: RunOptions,
) -> Result<CommandOutput, CliError> {
    if !kind.families().contains(&config.family) {
        let names: Vec<_> = kind.families().iter().map(|f| f.name()).collect();
        return Err(CliError::Config(format!(
            "family: {} is not supported here; expected one of {}",
            config.family,
            names.join(", ")
        )));
    }
    match kind {
        CommandKind::Propagate => propagate(config, opts),
        CommandKind::Witness => witness(config, opts),
        CommandKind::Physicality => physicality(config, opts),
        CommandKind::Classify => classify(config),
        CommandKind::Pt => pt(config, opts),
        CommandKind::CompareOracle => compare_oracle(config),
    }
}

fn scan_header(config: &ScanConfig) -> Vec<String> {
    config.scan_axis.iter().cloned().collect()
}

fn scan_cells(config: &ScanConfig, value: Option<f64>) -> Vec<Cell> {
    if config.scan_axis.is_some() {
        vec![Cell::from(value)]
    } else {
        Vec::new()
    }
}

fn require_z_range(config: &ScanConfig) -> Result<Range, CliError> {
    config
        .z_range
        .ok_or_else(|| CliError::Config("z_range: required for this command".into()))
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

// ---------------------------------------------------------------- propagate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagateRow {
    pub scan_value: Option<f64>,
    pub z: f64,
    pub width: f64,
    pub curvature_radius: Extended,
    pub guoy_phase: Option<f64>,
    pub coherence_length: Extended,
    pub oracle_width: Option<f64>,
    pub abs_error: Option<f64>,
}

/// Grid wide enough for the largest width over the z samples.
fn oracle_grid_1d(max_width: f64) -> Result<Grid1D, CliError> {
    Ok(Grid1D::default_for(max_width)?)
}

fn propagate(config: &ScanConfig, opts: RunOptions) -> Result<CommandOutput, CliError> {
    let zs = require_z_range(config)?.values();
    let mut rows = Vec::new();
    for scan_value in config.scan_points() {
        let params = config.resolve(scan_value)?;
        let mut block: Vec<PropagateRow> = match params {
            FamilyParams::Coherent1d(p) => zs
                .iter()
                .map(|&z| {
                    let g = beam_geometry_1d(&p, z);
                    PropagateRow {
                        scan_value,
                        z,
                        width: g.width,
                        curvature_radius: g.curvature_radius,
                        guoy_phase: Some(g.guoy_phase),
                        coherence_length: Extended::Infinite,
                        oracle_width: None,
                        abs_error: None,
                    }
                })
                .collect(),
            FamilyParams::Gsm(p) => zs
                .iter()
                .map(|&z| {
                    let g = gsm_geometry(&p, z);
                    PropagateRow {
                        scan_value,
                        z,
                        width: g.width,
                        curvature_radius: g.curvature_radius,
                        guoy_phase: None,
                        coherence_length: g.coherence_length,
                        oracle_width: None,
                        abs_error: None,
                    }
                })
                .collect(),
            _ => unreachable!("family checked by run_command"),
        };
        if opts.verify {
            let max_width = block.iter().map(|r| r.width).fold(0.0, f64::max);
            let grid = oracle_grid_1d(max_width)?;
            let measured = match params {
                FamilyParams::Coherent1d(p) => {
                    let f0 = Field1D::sample(grid, |x| coherent_amplitude_1d(&p, x, 0.0));
                    zs.iter()
                        .map(|&z| Ok(field_width(&propagate_field_1d(&f0, z, p.lambda_bar)?)))
                        .collect::<Result<Vec<_>, CliError>>()?
                }
                FamilyParams::Gsm(p) => {
                    let k0 = KernelGrid::sample(grid, |x, xp| gsm_gamma(&p, x, xp, 0.0));
                    zs.iter()
                        .map(|&z| {
                            Ok(fit_gsm_kernel(&propagate_kernel_1d(&k0, z, p.lambda_bar)?).width)
                        })
                        .collect::<Result<Vec<_>, CliError>>()?
                }
                _ => unreachable!(),
            };
            for (row, w) in block.iter_mut().zip(measured) {
                row.oracle_width = Some(w);
                row.abs_error = Some((w - row.width).abs());
            }
        }
        rows.append(&mut block);
    }

    let mut columns = scan_header(config);
    columns.extend(["z", "w", "R", "guoy", "delta"].map(String::from));
    if opts.verify {
        columns.extend(["oracle_width", "abs_error"].map(String::from));
    }
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells = scan_cells(config, r.scan_value);
        cells.extend([
            r.z.into(),
            r.width.into(),
            r.curvature_radius.into(),
            r.guoy_phase.into(),
            r.coherence_length.into(),
        ]);
        if opts.verify {
            cells.extend([r.oracle_width.into(), r.abs_error.into()]);
        }
        table.push(cells);
    }
    let note = opts.verify.then(|| {
        let errs: Vec<f64> = rows.iter().filter_map(|r| r.abs_error).collect();
        format!("max abs_error {:.3e}", max_abs(&errs))
    });
    Ok(CommandOutput {
        table,
        json: to_json(&Document {
            config: config.clone(),
            rows,
        })?,
        note,
    })
}

// ------------------------------------------------------------------ witness

/// JSON form of a [`WitnessReport`]: an infinite effective coherence length
/// is written as `null` with `effective_delta_infinite` set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub projected_waist: f64,
    pub effective_coherence_ratio: f64,
    pub effective_delta: Option<f64>,
    pub effective_delta_infinite: bool,
    pub entangled: bool,
}

impl From<WitnessReport> for WitnessRecord {
    fn from(r: WitnessReport) -> Self {
        WitnessRecord {
            projected_waist: r.projected_waist,
            effective_coherence_ratio: r.effective_coherence_ratio,
            effective_delta: r.effective_delta.as_finite(),
            effective_delta_infinite: r.effective_delta.is_infinite(),
            entangled: r.entangled,
        }
    }
}

impl From<WitnessRecord> for WitnessReport {
    fn from(r: WitnessRecord) -> Self {
        WitnessReport {
            projected_waist: r.projected_waist,
            effective_coherence_ratio: r.effective_coherence_ratio,
            effective_delta: match r.effective_delta {
                Some(d) if !r.effective_delta_infinite => Extended::Finite(d),
                _ => Extended::Infinite,
            },
            entangled: r.entangled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthSample {
    pub z: f64,
    pub width: f64,
    pub oracle_width: Option<f64>,
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub config: ScanConfig,
    pub report: WitnessRecord,
    pub numeric_report: Option<WitnessRecord>,
    pub scan: Vec<WidthSample>,
}

fn witness_error(e: WitnessError) -> CliError {
    match e {
        WitnessError::DegenerateSamples(_) => CliError::Numeric(e.to_string()),
        _ => CliError::Config(format!("z_range: {e}")),
    }
}

/// Square 2D grid covering the widest projection over the z samples.
fn field_grid_2d(p: &BeamParams2D, zs: &[f64]) -> Result<Grid1D, CliError> {
    let n = match std::env::var(GRID_POINTS_ENV) {
        Ok(_) => crate::oracle::default_points()?,
        Err(_) => FIELD_2D_POINTS,
    };
    let widest = zs
        .iter()
        .map(|&z| {
            beam_geometry_1d(&p.axis_x(), z)
                .width
                .max(beam_geometry_1d(&p.axis_y(), z).width)
        })
        .fold(0.0, f64::max);
    Ok(Grid1D::new(n, DEFAULT_HALF_WIDTH_FACTOR * widest)?)
}

/// `0 … 2 min(z_R)` in five steps.
fn default_witness_z(p: &BeamParams2D) -> Range {
    let z_r = p.axis_x().rayleigh_range().min(p.axis_y().rayleigh_range());
    Range {
        start: 0.0,
        stop: 2.0 * z_r,
        steps: 5,
    }
}

fn witness(config: &ScanConfig, opts: RunOptions) -> Result<CommandOutput, CliError> {
    if config.scan_axis.is_some() {
        return Err(CliError::Config(
            "scan_axis: not supported by witness".into(),
        ));
    }
    let FamilyParams::Elliptic2d(p, theta) = config.resolve(None)? else {
        unreachable!("family checked by run_command");
    };
    let zs = config
        .z_range
        .unwrap_or_else(|| default_witness_z(&p))
        .values();
    let closed: Vec<f64> = zs.iter().map(|&z| projected_width(&p, theta, z)).collect();
    // Validates the z samples even though the report itself is closed form.
    fit_width_scan(&zs, &closed, p.lambda_bar).map_err(witness_error)?;
    let report = effective_gsm_parameters(&p, theta);

    let mut numeric_report = None;
    let mut measured = None;
    if opts.numeric {
        let g = field_grid_2d(&p, &zs)?;
        let widths = numeric_width_scan(&p, theta, &zs, g, g)?;
        numeric_report = Some(WitnessRecord::from(
            fit_width_scan(&zs, &widths, p.lambda_bar)
                .map_err(witness_error)?
                .report(),
        ));
        measured = Some(widths);
    }
    let scan: Vec<WidthSample> = zs
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let oracle_width = measured.as_ref().map(|m| m[i]);
            WidthSample {
                z,
                width: closed[i],
                oracle_width,
                abs_error: oracle_width.map(|w| (w - closed[i]).abs()),
            }
        })
        .collect();

    let mut columns = vec!["z", "projected_width"];
    if opts.numeric {
        columns.extend(["oracle_width", "abs_error"]);
    }
    let mut table = Table::new(columns);
    for s in &scan {
        let mut cells = vec![s.z.into(), s.width.into()];
        if opts.numeric {
            cells.extend([s.oracle_width.into(), s.abs_error.into()]);
        }
        table.push(cells);
    }
    let doc = WitnessDocument {
        config: config.clone(),
        report: report.into(),
        numeric_report,
        scan,
    };
    let note =
        Some(String::from_utf8_lossy(&to_json(&(doc.report, doc.numeric_report))?).into_owned());
    Ok(CommandOutput {
        table,
        json: to_json(&doc)?,
        note,
    })
}

// -------------------------------------------------------------- physicality

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityRow {
    pub scan_value: Option<f64>,
    /// Closed-form eigenvalues of `V + (i/2)λ̄β`, ascending.
    pub eigenvalues: [f64; 4],
    pub min_eigenvalue: f64,
    pub physical: bool,
    pub twist_bound: Option<f64>,
    pub satisfies_twist_bound: Option<bool>,
    pub kernel: Option<PsdCheck>,
}

/// Positivity of the 2D kernel sampled on a [`PSD_GRID_POINTS`] grid.
pub fn sampled_kernel_psd<G: TwoPointFunction2D>(
    gamma: &G,
    width: f64,
) -> Result<PsdCheck, CliError> {
    let g = Grid1D::new(PSD_GRID_POINTS, PSD_HALF_WIDTH * width)?;
    Ok(kernel_psd_check(&KernelGrid2D::sample(g, g, gamma))?)
}

fn physicality(config: &ScanConfig, opts: RunOptions) -> Result<CommandOutput, CliError> {
    let mut rows = Vec::new();
    for scan_value in config.scan_points() {
        let row = match config.resolve(scan_value)? {
            FamilyParams::Tgsm(p) => {
                let (v, k) = tgsm_variance(&p);
                let eigenvalues = tgsm_eigenvalues(&k, p.lambda_bar);
                PhysicalityRow {
                    scan_value,
                    eigenvalues,
                    min_eigenvalue: eigenvalues[0],
                    physical: uncertainty_check(&v).physical,
                    twist_bound: Some(p.twist_bound()),
                    satisfies_twist_bound: Some(p.satisfies_twist_bound()),
                    kernel: opts
                        .verify
                        .then(|| sampled_kernel_psd(&p, p.width))
                        .transpose()?,
                }
            }
            FamilyParams::Curv(p) => {
                let (v, k) = curv_variance(&p);
                let eigenvalues = curv_eigenvalues(&k, p.lambda_bar);
                PhysicalityRow {
                    scan_value,
                    eigenvalues,
                    min_eigenvalue: eigenvalues[0],
                    physical: uncertainty_check(&v).physical,
                    twist_bound: None,
                    satisfies_twist_bound: None,
                    kernel: opts
                        .verify
                        .then(|| sampled_kernel_psd(&p, p.width))
                        .transpose()?,
                }
            }
            _ => unreachable!("family checked by run_command"),
        };
        rows.push(row);
    }

    let mut columns = scan_header(config);
    columns.extend(
        [
            "min_eigenvalue",
            "physical",
            "twist_bound",
            "satisfies_twist_bound",
        ]
        .map(String::from),
    );
    if opts.verify {
        columns.extend(["kernel_min_eigenvalue_ratio", "kernel_psd"].map(String::from));
    }
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells = scan_cells(config, r.scan_value);
        cells.extend([
            r.min_eigenvalue.into(),
            r.physical.into(),
            r.twist_bound.into(),
            r.satisfies_twist_bound.into(),
        ]);
        if let Some(k) = &r.kernel {
            cells.extend([k.min_eigenvalue_ratio.into(), k.psd.into()]);
        }
        table.push(cells);
    }
    Ok(CommandOutput {
        table,
        json: to_json(&Document {
            config: config.clone(),
            rows,
        })?,
        note: None,
    })
}

// ----------------------------------------------------------------- classify

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRow {
    pub scan_value: Option<f64>,
    #[serde(flatten)]
    pub report: SeparabilityReport,
}

fn variance_of(params: &FamilyParams) -> Result<VarianceMatrix, CliError> {
    match params {
        FamilyParams::Tgsm(p) => Ok(tgsm_variance(p).0),
        FamilyParams::Curv(p) => Ok(curv_variance(p).0),
        FamilyParams::Agsm(p) => variance_from_lmk(p).map_err(|e| CliError::Config(e.to_string())),
        other => Err(CliError::Config(format!(
            "family: {} has no four-dimensional variance matrix",
            other.family()
        ))),
    }
}

fn classify(config: &ScanConfig) -> Result<CommandOutput, CliError> {
    let mut rows = Vec::new();
    for scan_value in config.scan_points() {
        let v = variance_of(&config.resolve(scan_value)?)?;
        rows.push(ClassifyRow {
            scan_value,
            report: separability_report(&v),
        });
    }
    let mut columns = scan_header(config);
    columns.extend(["verdict", "min_eigenvalue", "transposed_min_eigenvalue"].map(String::from));
    columns.extend((0..4).map(|i| format!("eigenvalue_{i}")));
    columns.extend((0..4).map(|i| format!("transposed_eigenvalue_{i}")));
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells = scan_cells(config, r.scan_value);
        cells.push(Cell::Text(format!("{:?}", r.report.verdict)));
        cells.push(r.report.physicality.min_eigenvalue.into());
        cells.push(r.report.transposed_physicality.min_eigenvalue.into());
        cells.extend(r.report.physicality.eigenvalues.map(Cell::from));
        cells.extend(r.report.transposed_physicality.eigenvalues.map(Cell::from));
        table.push(cells);
    }
    Ok(CommandOutput {
        table,
        json: to_json(&Document {
            config: config.clone(),
            rows,
        })?,
        note: None,
    })
}

// ----------------------------------------------------------------------- pt

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtRow {
    pub scan_value: Option<f64>,
    pub variance: VarianceMatrix,
    pub transposed: VarianceMatrix,
    /// The family whose variance matrix the transposed one should equal.
    pub twin_family: Option<Family>,
    pub twin_max_abs_diff: Option<f64>,
    /// `max |Γ̃ - Γ_twin| / max |Γ|` over a sampled grid.
    pub kernel_max_rel_diff: Option<f64>,
}

fn sampled_max_rel_diff<A: TwoPointFunction2D, B: TwoPointFunction2D>(
    a: &A,
    b: &B,
    width: f64,
) -> Result<f64, CliError> {
    let g = Grid1D::new(PSD_GRID_POINTS, PSD_HALF_WIDTH * width)?;
    let ka = KernelGrid2D::sample(g, g, a).partial_transpose()?;
    let kb = KernelGrid2D::sample(g, g, b);
    let scale = kb.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    Ok((&ka.values - &kb.values)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.norm()))
        / scale)
}

fn pt(config: &ScanConfig, opts: RunOptions) -> Result<CommandOutput, CliError> {
    let mut rows = Vec::new();
    for scan_value in config.scan_points() {
        let params = config.resolve(scan_value)?;
        let variance = variance_of(&params)?;
        let transposed = partial_transpose_variance(&variance);
        let (twin_family, twin_variance, kernel_max_rel_diff) = match params {
            FamilyParams::Tgsm(p) => {
                let t = p.twin();
                let kd = opts
                    .verify
                    .then(|| sampled_max_rel_diff(&p, &t, p.width))
                    .transpose()?;
                (Some(Family::Curv), Some(curv_variance(&t).0), kd)
            }
            FamilyParams::Curv(p) => {
                let t = p.twin();
                let kd = opts
                    .verify
                    .then(|| sampled_max_rel_diff(&p, &t, p.width))
                    .transpose()?;
                (Some(Family::Tgsm), Some(tgsm_variance(&t).0), kd)
            }
            FamilyParams::Agsm(p) => {
                let width = 2.0 * variance.v[(0, 0)].max(variance.v[(1, 1)]).sqrt();
                let kd = opts
                    .verify
                    .then(|| sampled_max_rel_diff(&p, &PartialTranspose(p), width))
                    .transpose()?;
                (None, None, kd)
            }
            _ => unreachable!("family checked by run_command"),
        };
        rows.push(PtRow {
            scan_value,
            variance,
            transposed,
            twin_family,
            twin_max_abs_diff: twin_variance.map(|t| t.max_abs_diff(&transposed)),
            kernel_max_rel_diff,
        });
    }
    let mut columns = scan_header(config);
    columns.extend(["twin_family", "twin_max_abs_diff", "kernel_max_rel_diff"].map(String::from));
    for prefix in ["v", "pt"] {
        for a in 0..4 {
            for b in 0..4 {
                columns.push(format!("{prefix}_{a}{b}"));
            }
        }
    }
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells = scan_cells(config, r.scan_value);
        cells.push(
            r.twin_family
                .map_or(Cell::Empty, |f| Cell::Text(f.name().into())),
        );
        cells.push(r.twin_max_abs_diff.into());
        cells.push(r.kernel_max_rel_diff.into());
        for m in [&r.variance, &r.transposed] {
            cells.extend(m.rows().iter().flatten().map(|&x| Cell::from(x)));
        }
        table.push(cells);
    }
    Ok(CommandOutput {
        table,
        json: to_json(&Document {
            config: config.clone(),
            rows,
        })?,
        note: None,
    })
}

// ----------------------------------------------------------- compare-oracle

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    /// Index of the parameter set: scan point or random draw.
    pub case: usize,
    pub scan_value: Option<f64>,
    pub quantity: String,
    pub z: Option<f64>,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_error: f64,
}

/// Parameter sets drawn uniformly from ranges the default oracle grids
/// resolve.
pub fn draw_params(family: Family, rng: &mut ChaCha8Rng) -> Result<FamilyParams, CliError> {
    let lambda_bar = rng.gen_range(0.4..0.6);
    let width = rng.gen_range(0.8..1.5);
    let delta = Extended::Finite(rng.gen_range(0.8..3.0));
    let params = match family {
        Family::Coherent1d => {
            FamilyParams::Coherent1d(crate::beams::BeamParams1D::new(1.0, width, lambda_bar)?)
        }
        Family::Gsm => FamilyParams::Gsm(GsmParams::new(1.0, width, delta, lambda_bar)?),
        Family::Elliptic2d => FamilyParams::Elliptic2d(
            BeamParams2D::with_widths(width, rng.gen_range(0.8..1.5), lambda_bar)?,
            rng.gen_range(0.0..PI).into(),
        ),
        Family::Tgsm | Family::Curv => {
            let radius = if rng.gen_bool(0.5) {
                Extended::Infinite
            } else {
                Extended::Finite(
                    rng.gen_range(2.0..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                )
            };
            let bound = lambda_bar * delta.recip_squared();
            let twist = bound * rng.gen_range(-1.0..1.0);
            if family == Family::Tgsm {
                FamilyParams::Tgsm(TgsmParams::new(
                    1.0, width, delta, radius, twist, lambda_bar,
                )?)
            } else {
                FamilyParams::Curv(CurvParams::new(
                    1.0, width, delta, radius, twist, lambda_bar,
                )?)
            }
        }
        Family::Agsm => {
            let mut rot = |a: f64, b: f64| {
                let r = Rotation2::new(rng.gen_range(0.0..PI)).into_inner();
                r * Matrix2::new(a, 0.0, 0.0, b) * r.transpose()
            };
            let l = rot(4.0 / (width * width), 4.0 / 1.2f64.powi(2));
            let m = rot(delta.recip_squared(), 0.25);
            let k = Matrix2::from_fn(|_, _| rng.gen_range(-0.5..0.5));
            FamilyParams::Agsm(
                AgsmParams::new(1.0, l, m, k, lambda_bar)
                    .map_err(|e| CliError::Config(e.to_string()))?,
            )
        }
    };
    Ok(params)
}

fn default_compare_z(params: &FamilyParams) -> Range {
    let z_r = match params {
        FamilyParams::Coherent1d(p) => p.rayleigh_range(),
        FamilyParams::Gsm(p) => crate::beams::gsm_rayleigh_range(p),
        FamilyParams::Elliptic2d(p, _) => {
            p.axis_x().rayleigh_range().min(p.axis_y().rayleigh_range())
        }
        _ => 0.0,
    };
    match params {
        FamilyParams::Elliptic2d(..) => Range {
            start: 0.0,
            stop: 2.0 * z_r,
            steps: 5,
        },
        _ => Range {
            start: 0.0,
            stop: z_r,
            steps: 3,
        },
    }
}

fn compare_case(
    case: usize,
    scan_value: Option<f64>,
    params: &FamilyParams,
    z_range: Option<Range>,
) -> Result<Vec<ComparisonRow>, CliError> {
    let row = |quantity: &str, z: Option<f64>, closed_form: f64, oracle: f64| ComparisonRow {
        case,
        scan_value,
        quantity: quantity.into(),
        z,
        closed_form,
        oracle,
        abs_error: (oracle - closed_form).abs(),
    };
    let zs = z_range
        .unwrap_or_else(|| default_compare_z(params))
        .values();
    let mut rows = Vec::new();
    match params {
        FamilyParams::Coherent1d(p) => {
            let widest = zs
                .iter()
                .map(|&z| beam_geometry_1d(p, z).width)
                .fold(0.0, f64::max);
            let f0 = Field1D::sample(oracle_grid_1d(widest)?, |x| {
                coherent_amplitude_1d(p, x, 0.0)
            });
            for &z in &zs {
                let f = propagate_field_1d(&f0, z, p.lambda_bar)?;
                rows.push(row(
                    "width",
                    Some(z),
                    beam_geometry_1d(p, z).width,
                    field_width(&f),
                ));
                rows.push(row("energy", Some(z), p.total_power(), f.energy()));
            }
        }
        FamilyParams::Gsm(p) => {
            let widest = zs
                .iter()
                .map(|&z| gsm_geometry(p, z).width)
                .fold(0.0, f64::max);
            let k0 = KernelGrid::sample(oracle_grid_1d(widest)?, |x, xp| gsm_gamma(p, x, xp, 0.0));
            for &z in &zs {
                let g = gsm_geometry(p, z);
                let fit = fit_gsm_kernel(&propagate_kernel_1d(&k0, z, p.lambda_bar)?);
                rows.push(row("width", Some(z), g.width, fit.width));
                rows.push(row(
                    "inverse_coherence_length_sq",
                    Some(z),
                    g.coherence_length.recip_squared(),
                    fit.inverse_delta_sq,
                ));
            }
        }
        FamilyParams::Elliptic2d(p, theta) => {
            let g = field_grid_2d(p, &zs)?;
            let widths = numeric_width_scan(p, *theta, &zs, g, g)?;
            for (&z, &w) in zs.iter().zip(&widths) {
                rows.push(row(
                    "projected_width",
                    Some(z),
                    projected_width(p, *theta, z),
                    w,
                ));
            }
            let fit = fit_width_scan(&zs, &widths, p.lambda_bar).map_err(witness_error)?;
            let ratio_sq = effective_gsm_parameters(p, *theta)
                .effective_coherence_ratio
                .powi(2);
            rows.push(row("coherence_term", None, ratio_sq, fit.coherence_term));
        }
        FamilyParams::Tgsm(_) | FamilyParams::Curv(_) | FamilyParams::Agsm(_) => {
            let v = variance_of(params)?;
            let agsm = params.to_agsm().expect("AGSM-representable family");
            let (gx, gy) = phase_space_grids_for(&v, PHASE_SPACE_POINTS)?;
            let measured = match params {
                FamilyParams::Tgsm(p) => {
                    wigner_moments(&KernelGrid2D::sample(gx, gy, p), v.lambda_bar)?
                }
                FamilyParams::Curv(p) => {
                    wigner_moments(&KernelGrid2D::sample(gx, gy, p), v.lambda_bar)?
                }
                _ => wigner_moments(&KernelGrid2D::sample(gx, gy, &agsm), v.lambda_bar)?,
            };
            for a in 0..4 {
                for b in a..4 {
                    rows.push(row(
                        &format!("V_{a}{b}"),
                        None,
                        v.v[(a, b)],
                        measured.v[(a, b)],
                    ));
                }
            }
        }
    }
    Ok(rows)
}

fn compare_oracle(config: &ScanConfig) -> Result<CommandOutput, CliError> {
    let mut rows = Vec::new();
    match config.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for case in 0..config.draws.unwrap_or(5) {
                let params = draw_params(config.family, &mut rng)?;
                rows.extend(compare_case(case, None, &params, config.z_range)?);
            }
        }
        None => {
            for (case, scan_value) in config.scan_points().into_iter().enumerate() {
                let params = config.resolve(scan_value)?;
                rows.extend(compare_case(case, scan_value, &params, config.z_range)?);
            }
        }
    }
    let mut columns = vec!["case".to_string()];
    columns.extend(scan_header(config));
    columns.extend(["quantity", "z", "closed_form", "oracle", "abs_error"].map(String::from));
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells = vec![Cell::Text(r.case.to_string())];
        cells.extend(scan_cells(config, r.scan_value));
        cells.extend([
            Cell::Text(r.quantity.clone()),
            r.z.into(),
            r.closed_form.into(),
            r.oracle.into(),
            r.abs_error.into(),
        ]);
        table.push(cells);
    }
    let errs: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
    Ok(CommandOutput {
        table,
        json: to_json(&Document {
            config: config.clone(),
            rows,
        })?,
        note: Some(format!("max abs_error {:.3e}", max_abs(&errs))),
    })
}
