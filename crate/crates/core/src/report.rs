//! Input and output documents of the command-line tools.

use serde::{Deserialize, Serialize};

use crate::diffops::{equation_residual, Equation, FieldMap, GridSpec, ResidualReport, Stencil};
use crate::error::VerifyError;
use crate::fields::{self, BeltramiParams, Branch, DualityWave, HertzParams};
use crate::spectrum::MassSpectrum;
use crate::spinor::{self, DiracEquation};
use crate::sta::{SpacetimePoint, BLADE_NAMES};
use crate::verify::SCHEMA_VERSION;

/// Environment variable overriding the output directory of every command.
pub const OUTPUT_DIR_ENV: &str = "NUSTA_OUTPUT_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub schema_version: u32,
    #[serde(flatten)]
    pub spectrum: MassSpectrum,
}

impl From<MassSpectrum> for SpectrumDocument {
    fn from(spectrum: MassSpectrum) -> Self {
        Self { schema_version: SCHEMA_VERSION, spectrum }
    }
}

/// Which part of a Hertz construction to sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HertzPart {
    Potential,
    VectorPotential,
    #[default]
    Field,
    RestField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    /// Static electric Beltrami field `F^∞`.
    Beltrami { beltrami: BeltramiParams },
    /// `F^∞` duality rotated at frequency `m`, seen at speed `v`.
    Duality { beltrami: BeltramiParams, m: f64, #[serde(default)] v: f64 },
    Hertz { params: HertzParams, #[serde(default)] part: HertzPart },
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldMap, VerifyError> {
        Ok(match self {
            FieldSpec::Beltrami { beltrami } => fields::embed_electric(&fields::beltrami_field(*beltrami)),
            FieldSpec::Duality { beltrami, m, v } => {
                let f_inf = fields::embed_electric(&fields::beltrami_field(*beltrami));
                fields::duality_rotate(&f_inf, DualityWave::new(*m, *v)?)?
            }
            FieldSpec::Hertz { params, part } => {
                let chain = fields::hertz_chain(params)?;
                match part {
                    HertzPart::Potential => chain.potential,
                    HertzPart::VectorPotential => chain.vector_potential,
                    HertzPart::Field => chain.field,
                    HertzPart::RestField => chain.rest_field,
                }
            }
        })
    }
}

/// Sampling lattice, `origin + extent·j/count` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleGrid {
    #[serde(default)]
    pub origin: [f64; 4],
    pub extents: [f64; 4],
    pub counts: [usize; 4],
}

impl SampleGrid {
    pub fn points(&self) -> Result<Vec<SpacetimePoint>, VerifyError> {
        let [t, x, y, z] = self.origin;
        let grid = GridSpec { origin: SpacetimePoint::new(t, x, y, z), extents: self.extents, counts: self.counts, h: 1.0 };
        grid.validate()?;
        Ok(grid.points())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSampleConfig {
    pub field: FieldSpec,
    pub grid: SampleGrid,
}

/// JSON sidecar describing a field CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSampleMeta {
    pub schema_version: u32,
    pub field_name: String,
    pub rows: usize,
    pub columns: Vec<String>,
    pub blade_names: Vec<String>,
    pub config: FieldSampleConfig,
}

pub fn field_csv_header() -> Vec<String> {
    let mut cols: Vec<String> = ["t", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
    cols.extend((0..16).map(|i| format!("blade_{i}")));
    cols
}

/// CSV text and its sidecar.
pub fn sample_field(cfg: &FieldSampleConfig) -> Result<(String, FieldSampleMeta), VerifyError> {
    let field = cfg.field.build()?;
    let points = cfg.grid.points()?;
    let columns = field_csv_header();
    let mut csv = columns.join(",");
    csv.push('\n');
    for p in &points {
        let v = field.try_eval(*p)?;
        let mut row = vec![p.t, p.x, p.y, p.z];
        row.extend(v.0);
        let cells: Vec<String> = row.iter().map(|c| format!("{c:e}")).collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    let meta = FieldSampleMeta {
        schema_version: SCHEMA_VERSION,
        field_name: field.name().to_string(),
        rows: points.len(),
        columns,
        blade_names: BLADE_NAMES.iter().map(|s| s.to_string()).collect(),
        config: cfg.clone(),
    };
    Ok((csv, meta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinorCheckConfig {
    pub branch: Branch,
    pub m: f64,
    pub k: f64,
    /// Defaults to the on-shell value for the branch.
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub points_per_axis: Option<usize>,
    #[serde(default)]
    pub step: Option<f64>,
}

impl SpinorCheckConfig {
    pub fn omega(&self) -> f64 {
        self.omega.unwrap_or_else(|| match self.branch {
            Branch::Bradyonic => (self.k * self.k + self.m * self.m).sqrt(),
            Branch::Tachyonic => (self.k * self.k - self.m * self.m).max(0.0).sqrt(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSample {
    pub point: SpacetimePoint,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinorCheckReport {
    pub schema_version: u32,
    pub config: SpinorCheckConfig,
    pub omega: f64,
    pub residuals: Vec<ResidualReport>,
    pub invariants: Vec<InvariantSample>,
}

pub fn spinor_check(cfg: &SpinorCheckConfig) -> Result<SpinorCheckReport, VerifyError> {
    let omega = cfg.omega();
    let psi = spinor::plane_wave_spinor(omega, cfg.k, cfg.m, cfg.branch)?;
    let mut grid = GridSpec::for_wavenumber(omega.abs().max(cfg.k.abs()).max(cfg.m.abs()).max(1e-3));
    if let Some(n) = cfg.points_per_axis {
        grid.counts = [n; 4];
    }
    if let Some(h) = cfg.step {
        grid.h = h;
    }
    let field = psi.as_field();
    let (first, second) = match cfg.branch {
        Branch::Bradyonic => (DiracEquation::Supd { m: cfg.m }, Equation::Eq37 { field, m: cfg.m }),
        Branch::Tachyonic => (DiracEquation::Eq39 { m: cfg.m }, Equation::Eq38 { field, m: cfg.m }),
    };
    let residuals = vec![
        spinor::dh_residual(&psi, &first, &grid, Stencil::Richardson)?.report,
        equation_residual(&second, &grid, Stencil::Richardson)?.report,
    ];
    let mut invariants = Vec::new();
    for p in grid.points().into_iter().step_by(grid.len().div_ceil(8).max(1)) {
        // massless amplitudes can be singular; those points carry no invariants
        if let Ok(kin) = spinor::kinematic_invariants(&psi, p, grid.h) {
            invariants.push(InvariantSample { point: p, lambda: kin.lambda, k: kin.k });
        }
    }
    Ok(SpinorCheckReport { schema_version: SCHEMA_VERSION, config: cfg.clone(), omega, residuals, invariants })
}
