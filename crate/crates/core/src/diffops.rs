//! Finite-difference operators on analytic fields and the residual harness.
//!
//! Fields are closures, so every stencil samples the exact field; the grid
//! only decides where residuals are measured.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, DiffError};
use crate::sta::{cross3, dot3, Multivector, RelativeSplit, SpacetimePoint, METRIC};

type Evaluator = Arc<dyn Fn(SpacetimePoint) -> Multivector + Send + Sync>;
type VectorEvaluator = Arc<dyn Fn(SpacetimePoint) -> [f64; 3] + Send + Sync>;

/// Fixed probe points used for structural checks (static, electric, grade).
pub const PROBE_POINTS: [SpacetimePoint; 6] = [
    SpacetimePoint::new(0.0, 0.0, 0.0, 0.0),
    SpacetimePoint::new(0.3, 0.7, -0.2, 1.1),
    SpacetimePoint::new(-1.2, 1.9, 0.4, -0.6),
    SpacetimePoint::new(2.1, -0.8, 2.6, 0.3),
    SpacetimePoint::new(0.9, 3.3, -1.7, 2.2),
    SpacetimePoint::new(-0.4, -2.5, 1.3, -3.1),
];

/// Set of grades a field is declared to carry.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct GradeSet(u8);

impl GradeSet {
    pub fn of(grades: &[usize]) -> Self {
        Self(grades.iter().fold(0, |m, g| m | (1 << g)))
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0 & (1 << k) != 0
    }

    /// The single grade, if the set is homogeneous.
    pub fn homogeneous(&self) -> Option<usize> {
        (self.0.count_ones() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn grades(&self) -> Vec<usize> {
        (0..=4).filter(|k| self.contains(*k)).collect()
    }
}

impl fmt::Debug for GradeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.grades())
    }
}

/// Analytic multivector field over spacetime.
#[derive(Clone)]
pub struct FieldMap {
    name: String,
    grades: GradeSet,
    eval: Evaluator,
}

impl fmt::Debug for FieldMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldMap").field("name", &self.name).field("grades", &self.grades).finish()
    }
}

impl FieldMap {
    pub fn new(
        name: impl Into<String>,
        grades: &[usize],
        f: impl Fn(SpacetimePoint) -> Multivector + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), grades: GradeSet::of(grades), eval: Arc::new(f) }
    }

    pub fn constant(name: impl Into<String>, value: Multivector) -> Self {
        let grades: Vec<usize> = (0..=4).filter(|k| value.grade_norm(*k) > 0.0).collect();
        Self::new(name, &grades, move |_| value)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn grades(&self) -> GradeSet {
        self.grades
    }

    pub fn eval(&self, p: SpacetimePoint) -> Multivector {
        (self.eval)(p)
    }

    pub fn try_eval(&self, p: SpacetimePoint) -> Result<Multivector, DiffError> {
        let v = self.eval(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DiffError::NonFinite { field: self.name.clone(), point: p })
        }
    }

    /// Pointwise transformation into a new field.
    pub fn map(
        &self,
        name: impl Into<String>,
        grades: &[usize],
        f: impl Fn(SpacetimePoint, Multivector) -> Multivector + Send + Sync + 'static,
    ) -> Self {
        let inner = self.eval.clone();
        Self::new(name, grades, move |p| f(p, inner(p)))
    }

    /// Checks the declared grades against samples at the probe points.
    pub fn grades_consistent(&self, tol: f64) -> bool {
        PROBE_POINTS.iter().all(|p| {
            let v = self.eval(*p);
            (0..=4)
                .filter(|k| !self.grades.contains(*k))
                .all(|k| v.grade_norm(k) <= tol * v.norm().max(1.0))
        })
    }

    /// Errors unless the field is the same on two time slices at every probe point.
    pub fn ensure_static(&self, tol: f64) -> Result<(), DiffError> {
        for p in PROBE_POINTS {
            let a = self.eval(p);
            let b = self.eval(p.shifted(0, 0.731));
            if (a - b).norm() > tol * a.norm().max(1.0) {
                return Err(DiffError::TimeDependent(self.name.clone()));
            }
        }
        Ok(())
    }
}

/// Relative (frame `γ^0`) 3-vector field.
#[derive(Clone)]
pub struct VectorField3 {
    name: String,
    eval: VectorEvaluator,
}

impl fmt::Debug for VectorField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField3").field("name", &self.name).finish()
    }
}

impl VectorField3 {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(SpacetimePoint) -> [f64; 3] + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), eval: Arc::new(f) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, p: SpacetimePoint) -> [f64; 3] {
        (self.eval)(p)
    }

    /// The field as `Σ E_k σ_k`.
    pub fn as_multivector_field(&self) -> FieldMap {
        let inner = self.eval.clone();
        FieldMap::new(self.name.clone(), &[2], move |p| Multivector::relative(inner(p)))
    }

    pub fn ensure_static(&self, tol: f64) -> Result<(), DiffError> {
        self.as_multivector_field().ensure_static(tol)
    }
}

/// Finite-difference stencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// Second-order central differences.
    Central,
    /// Central differences at `h` and `h/2` combined to fourth order.
    #[default]
    Richardson,
}

fn check_step(h: f64) -> Result<(), DiffError> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(DiffError::BadStep(h))
    }
}

fn central_first(f: &FieldMap, mu: usize, p: SpacetimePoint, h: f64) -> Result<Multivector, DiffError> {
    let fp = f.try_eval(p.shifted(mu, h))?;
    let fm = f.try_eval(p.shifted(mu, -h))?;
    Ok((fp - fm) * (0.5 / h))
}

fn central_second(
    f: &FieldMap,
    mu: usize,
    p: SpacetimePoint,
    center: Multivector,
    h: f64,
) -> Result<Multivector, DiffError> {
    let fp = f.try_eval(p.shifted(mu, h))?;
    let fm = f.try_eval(p.shifted(mu, -h))?;
    Ok((fp + fm - center * 2.0) * (1.0 / (h * h)))
}

/// `∂_μ f` at `p`.
pub fn partial_mu(
    f: &FieldMap,
    mu: usize,
    p: SpacetimePoint,
    h: f64,
    stencil: Stencil,
) -> Result<Multivector, DiffError> {
    check_step(h)?;
    let coarse = central_first(f, mu, p, h)?;
    match stencil {
        Stencil::Central => Ok(coarse),
        Stencil::Richardson => {
            let fine = central_first(f, mu, p, h / 2.0)?;
            Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
        }
    }
}

/// `∂²f/∂x_μ²` at `p`.
pub fn second_partial(
    f: &FieldMap,
    mu: usize,
    p: SpacetimePoint,
    h: f64,
    stencil: Stencil,
) -> Result<Multivector, DiffError> {
    check_step(h)?;
    let center = f.try_eval(p)?;
    let coarse = central_second(f, mu, p, center, h)?;
    match stencil {
        Stencil::Central => Ok(coarse),
        Stencil::Richardson => {
            let fine = central_second(f, mu, p, center, h / 2.0)?;
            Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
        }
    }
}

fn gradient_terms(
    f: &FieldMap,
    p: SpacetimePoint,
    h: f64,
    stencil: Stencil,
) -> Result<[Multivector; 4], DiffError> {
    Ok([
        partial_mu(f, 0, p, h, stencil)?,
        partial_mu(f, 1, p, h, stencil)?,
        partial_mu(f, 2, p, h, stencil)?,
        partial_mu(f, 3, p, h, stencil)?,
    ])
}

/// Dirac operator `∂f = γ^μ ∂_μ f`.
pub fn dirac(f: &FieldMap, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<Multivector, DiffError> {
    let d = gradient_terms(f, p, h, stencil)?;
    Ok((0..4).map(|mu| Multivector::gamma(mu) * d[mu]).sum())
}

fn homogeneous(f: &FieldMap) -> Result<usize, DiffError> {
    f.grades().homogeneous().ok_or_else(|| DiffError::MixedGrade(f.name().to_string()))
}

/// Exterior derivative `df = γ^μ ∧ ∂_μ f`.
pub fn d_wedge(f: &FieldMap, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<Multivector, DiffError> {
    homogeneous(f)?;
    let d = gradient_terms(f, p, h, stencil)?;
    Ok((0..4).map(|mu| Multivector::gamma(mu).wedge(&d[mu])).sum())
}

/// Coderivative `δf = −γ^μ ⌟ ∂_μ f`, so that `∂ = d − δ` on homogeneous fields.
pub fn codiff(f: &FieldMap, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<Multivector, DiffError> {
    homogeneous(f)?;
    let d = gradient_terms(f, p, h, stencil)?;
    Ok(-(0..4).map(|mu| Multivector::gamma(mu).contract_left(&d[mu])).sum::<Multivector>())
}

/// `□f = ∂²f = η^{μμ} ∂_μ² f`, from direct second differences.
pub fn box_op(f: &FieldMap, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<Multivector, DiffError> {
    let mut out = Multivector::ZERO;
    for (mu, eta) in METRIC.iter().enumerate() {
        out += second_partial(f, mu, p, h, stencil)? * *eta;
    }
    Ok(out)
}

fn vector_partial(v: &VectorField3, axis: usize, p: SpacetimePoint, h: f64, stencil: Stencil) -> [f64; 3] {
    let diff = |h: f64| {
        let a = v.eval(p.shifted(axis, h));
        let b = v.eval(p.shifted(axis, -h));
        [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h), (a[2] - b[2]) / (2.0 * h)]
    };
    let coarse = diff(h);
    match stencil {
        Stencil::Central => coarse,
        Stencil::Richardson => {
            let fine = diff(h / 2.0);
            [0, 1, 2].map(|i| (4.0 * fine[i] - coarse[i]) / 3.0)
        }
    }
}

/// Spatial Jacobian `J[i][j] = ∂_i v_j`.
pub fn jacobian3(v: &VectorField3, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<[[f64; 3]; 3], DiffError> {
    check_step(h)?;
    Ok([
        vector_partial(v, 1, p, h, stencil),
        vector_partial(v, 2, p, h, stencil),
        vector_partial(v, 3, p, h, stencil),
    ])
}

pub fn div3(v: &VectorField3, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<f64, DiffError> {
    let j = jacobian3(v, p, h, stencil)?;
    Ok(j[0][0] + j[1][1] + j[2][2])
}

pub fn curl3(v: &VectorField3, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<[f64; 3], DiffError> {
    let j = jacobian3(v, p, h, stencil)?;
    Ok([j[1][2] - j[2][1], j[2][0] - j[0][2], j[0][1] - j[1][0]])
}

pub fn lap3(v: &VectorField3, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<[f64; 3], DiffError> {
    check_step(h)?;
    let center = v.eval(p);
    let second = |h: f64| {
        let mut acc = [0.0; 3];
        for axis in 1..=3 {
            let a = v.eval(p.shifted(axis, h));
            let b = v.eval(p.shifted(axis, -h));
            for i in 0..3 {
                acc[i] += (a[i] + b[i] - 2.0 * center[i]) / (h * h);
            }
        }
        acc
    };
    let coarse = second(h);
    Ok(match stencil {
        Stencil::Central => coarse,
        Stencil::Richardson => {
            let fine = second(h / 2.0);
            [0, 1, 2].map(|i| (4.0 * fine[i] - coarse[i]) / 3.0)
        }
    })
}

/// Relative-vector gradient `∇E = Σ σ_k ∂_k E`, the Pauli-algebra product.
pub fn pauli_gradient(v: &VectorField3, p: SpacetimePoint, h: f64, stencil: Stencil) -> Result<Multivector, DiffError> {
    let j = jacobian3(v, p, h, stencil)?;
    Ok((0..3).map(|k| Multivector::sigma(k + 1) * Multivector::relative(j[k])).sum())
}

/// Lorentz-force contraction variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceVariant {
    /// `J ⌟ ⋆F`, the force of a field on a magnetic current.
    Hodged,
    /// `J ⌟ F`.
    Plain,
}

/// Force density of `field` on `current` at a point.
///
/// The contraction is the Hestenes inner product summed over grades, which
/// is the left contraction whenever the current is a pure vector.
pub fn lorentz_force(
    current: &FieldMap,
    field: &FieldMap,
    p: SpacetimePoint,
    variant: ForceVariant,
) -> Multivector {
    lorentz_force_at(&current.eval(p), &field.eval(p), variant)
}

pub fn lorentz_force_at(current: &Multivector, field: &Multivector, variant: ForceVariant) -> Multivector {
    match variant {
        ForceVariant::Hodged => current.inner(&field.hodge()),
        ForceVariant::Plain => current.inner(field),
    }
}

/// Relative decomposition of the magnetic-current force `J ⌟ ⋆F`.
///
/// With `Jγ^0 = ρ + j` and `F = E + iB` the force splits as
/// `fγ^0 = j·B + (ρB − j×E)`; returns `(j·B, ρB − j×E)`. In the frame
/// where the current is transcendent (`ρ = 0`) this is `j·B − j×E`.
pub fn relative_force(current: &Multivector, field: &Multivector) -> Result<(f64, [f64; 3]), AlgebraError> {
    let (rho, j) = current.project(1).space_time_split();
    let RelativeSplit { e, b } = field.pauli_split()?;
    let jxe = cross3(j, e);
    Ok((dot3(j, b), [0, 1, 2].map(|i| rho * b[i] - jxe[i])))
}

/// Balances the `h⁴` Richardson truncation error against round-off in
/// second differences.
pub const STEPS_PER_WAVELENGTH: f64 = 256.0;

/// Sampling lattice for residual sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: SpacetimePoint,
    pub extents: [f64; 4],
    pub counts: [usize; 4],
    /// Finite-difference step.
    pub h: f64,
}

impl GridSpec {
    /// `n^4` points over a box of side `extent` per axis.
    pub fn cube(extent: f64, n: usize, h: f64) -> Self {
        Self { origin: SpacetimePoint::ORIGIN, extents: [extent; 4], counts: [n; 4], h }
    }

    /// Default verification grid: 9⁴ points over one wavelength `2π/k_char`
    /// with step `wavelength / STEPS_PER_WAVELENGTH`.
    pub fn for_wavenumber(k_char: f64) -> Self {
        let wavelength = 2.0 * std::f64::consts::PI / k_char.abs().max(1e-12);
        Self::cube(wavelength, 9, wavelength / STEPS_PER_WAVELENGTH)
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn validate(&self) -> Result<(), DiffError> {
        if self.counts.contains(&0) {
            return Err(DiffError::DegenerateGrid(format!("zero count in {:?}", self.counts)));
        }
        if !self.origin.is_finite() || self.extents.iter().any(|e| !e.is_finite()) {
            return Err(DiffError::DegenerateGrid("non-finite origin or extent".into()));
        }
        check_step(self.h)
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lattice points, `origin + extent·j/count` per axis, t slowest.
    pub fn points(&self) -> Vec<SpacetimePoint> {
        let [nt, nx, ny, nz] = self.counts;
        let step = |axis: usize, j: usize| self.extents[axis] * j as f64 / self.counts[axis] as f64;
        let mut out = Vec::with_capacity(self.len());
        for it in 0..nt {
            for ix in 0..nx {
                for iy in 0..ny {
                    for iz in 0..nz {
                        out.push(SpacetimePoint::new(
                            self.origin.t + step(0, it),
                            self.origin.x + step(1, ix),
                            self.origin.y + step(2, iy),
                            self.origin.z + step(3, iz),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Identifier of each checked equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquationId {
    #[serde(rename = "EQ1")]
    Eq1,
    #[serde(rename = "EQ10")]
    Eq10,
    #[serde(rename = "EQ12")]
    Eq12,
    #[serde(rename = "EQ13")]
    Eq13,
    #[serde(rename = "EQ14")]
    Eq14,
    #[serde(rename = "EQ14_DIV")]
    Eq14Div,
    #[serde(rename = "EQ15")]
    Eq15,
    #[serde(rename = "EQ_FREE")]
    EqFree,
    #[serde(rename = "EQ_A")]
    EqA,
    #[serde(rename = "EQ_B")]
    EqB,
    #[serde(rename = "EQ_F11")]
    EqF11,
    #[serde(rename = "EQ_F3")]
    EqF3,
    #[serde(rename = "EQ_F4")]
    EqF4,
    #[serde(rename = "EQ_F5")]
    EqF5,
    #[serde(rename = "EQ28_BOX")]
    Eq28Box,
    #[serde(rename = "LORENZ_GAUGE")]
    LorenzGauge,
    #[serde(rename = "EQ31")]
    Eq31,
    #[serde(rename = "EQ35")]
    Eq35,
    #[serde(rename = "EQ_SUPD")]
    EqSupd,
    #[serde(rename = "EQ37")]
    Eq37,
    #[serde(rename = "EQ38")]
    Eq38,
    #[serde(rename = "EQ39")]
    Eq39,
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned));
        write!(f, "{}", s.unwrap_or_default())
    }
}

/// Max/rms statistics of one residual sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation_id: EquationId,
    pub max_abs: f64,
    pub rms: f64,
    pub samples: usize,
    pub h: f64,
    /// `log2(r(2h)/r(h))` from plain central differences; `None` when the
    /// residual vanishes identically at both steps.
    pub order_estimate: Option<f64>,
}

/// A sweep result with the data needed to judge it.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub report: ResidualReport,
    /// Largest magnitude of any term of the equation on the grid.
    pub scale: f64,
    /// Residual norm at each grid point, in [`GridSpec::points`] order.
    pub pointwise: Vec<f64>,
}

/// One residual sample: `lhs − rhs` and the size of the terms.
pub struct Sample {
    pub residual: Multivector,
    pub scale: f64,
}

fn eval_points<T: Send>(
    points: &[SpacetimePoint],
    f: impl Fn(SpacetimePoint) -> Result<T, DiffError> + Sync + Send,
) -> Result<Vec<T>, DiffError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|p| f(*p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|p| f(*p)).collect()
    }
}

/// Samples `residual(p, h, stencil)` over the grid.
///
/// Results are reduced sequentially in lattice order, so the report is
/// bit-for-bit reproducible regardless of thread count.
pub fn sweep<F>(id: EquationId, grid: &GridSpec, stencil: Stencil, residual: F) -> Result<Sweep, DiffError>
where
    F: Fn(SpacetimePoint, f64, Stencil) -> Result<Sample, DiffError> + Sync + Send,
{
    grid.validate()?;
    let points = grid.points();
    let samples = eval_points(&points, |p| residual(p, grid.h, stencil))?;
    let pointwise: Vec<f64> = samples.iter().map(|s| s.residual.norm()).collect();
    let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.scale));
    let max_abs = pointwise.iter().fold(0.0f64, |m, r| m.max(*r));
    let rms = (pointwise.iter().map(|r| r * r).sum::<f64>() / pointwise.len() as f64).sqrt();

    let plain_max = |h: f64| -> Result<f64, DiffError> {
        let v = eval_points(&points, |p| residual(p, h, Stencil::Central).map(|s| s.residual.norm()))?;
        Ok(v.into_iter().fold(0.0f64, f64::max))
    };
    let coarse = plain_max(2.0 * grid.h)?;
    let fine = plain_max(grid.h)?;
    let order_estimate = (fine > 0.0 && coarse > 0.0).then(|| (coarse / fine).log2());

    Ok(Sweep {
        report: ResidualReport {
            equation_id: id,
            max_abs,
            rms,
            samples: points.len(),
            h: grid.h,
            order_estimate,
        },
        scale,
        pointwise,
    })
}

fn norms(terms: &[Multivector]) -> f64 {
    terms.iter().fold(0.0f64, |m, t| m.max(t.norm()))
}

/// Every field equation the harness can check, with the data it needs.
#[derive(Clone, Debug)]
pub enum Equation {
    /// `∂F = −g γ^5 J`.
    Eq1 { field: FieldMap, current: FieldMap, g: f64 },
    /// `∂F^∞ = −g γ^5 F^∞ γ^0`.
    Eq10 { field: FieldMap, g: f64 },
    /// `∇E = g i E` with `i = −γ^5`.
    Eq12 { e: VectorField3, g: f64 },
    /// `−i(∇∧E) = coeff·E`.
    Eq13 { e: VectorField3, coeff: f64 },
    /// `∇×E = coeff·E`.
    Eq14 { e: VectorField3, coeff: f64 },
    /// `∇·E = 0`.
    Eq14Div { e: VectorField3 },
    /// `∇²E + coeff·E = 0`.
    Eq15 { e: VectorField3, coeff: f64 },
    /// `∂F = 0`.
    Free { field: FieldMap },
    /// `∂F^∞ = −m γ^5 F^∞ γ^0`.
    EqA { field: FieldMap, m: f64 },
    /// `∂²F^∞ − m²F^∞ = 0`.
    EqB { field: FieldMap, m: f64 },
    /// `∂𝔉₀ = −γ^5 κ 𝔉₀`, tachyonic phase.
    F11 { field: FieldMap, kappa: Multivector },
    /// `∂²𝔉₀ − m²𝔉₀ = 0`.
    F3 { field: FieldMap, m: f64 },
    /// `∂𝔉₀ = −γ^5 κ 𝔉₀`, bradyonic-current branch.
    F4 { field: FieldMap, kappa: Multivector },
    /// `∂²𝔉₀ + m²𝔉₀ = 0`.
    F5 { field: FieldMap, m: f64 },
    /// `□Π = 0`.
    BoxHertz { potential: FieldMap },
    /// `δA = 0`.
    LorenzGauge { potential: FieldMap },
    /// `∂²ψ + m²ψ = 0`.
    Eq37 { field: FieldMap, m: f64 },
    /// `∂²ψ − m²ψ = 0`.
    Eq38 { field: FieldMap, m: f64 },
}

impl Equation {
    pub fn id(&self) -> EquationId {
        match self {
            Equation::Eq1 { .. } => EquationId::Eq1,
            Equation::Eq10 { .. } => EquationId::Eq10,
            Equation::Eq12 { .. } => EquationId::Eq12,
            Equation::Eq13 { .. } => EquationId::Eq13,
            Equation::Eq14 { .. } => EquationId::Eq14,
            Equation::Eq14Div { .. } => EquationId::Eq14Div,
            Equation::Eq15 { .. } => EquationId::Eq15,
            Equation::Free { .. } => EquationId::EqFree,
            Equation::EqA { .. } => EquationId::EqA,
            Equation::EqB { .. } => EquationId::EqB,
            Equation::F11 { .. } => EquationId::EqF11,
            Equation::F3 { .. } => EquationId::EqF3,
            Equation::F4 { .. } => EquationId::EqF4,
            Equation::F5 { .. } => EquationId::EqF5,
            Equation::BoxHertz { .. } => EquationId::Eq28Box,
            Equation::LorenzGauge { .. } => EquationId::LorenzGauge,
            Equation::Eq37 { .. } => EquationId::Eq37,
            Equation::Eq38 { .. } => EquationId::Eq38,
        }
    }

    /// Left-minus-right at a single point.
    pub fn sample(&self, p: SpacetimePoint, h: f64, st: Stencil) -> Result<Sample, DiffError> {
        let g5 = Multivector::g5();
        let g0 = Multivector::gamma(0);
        let sample = |lhs: Multivector, rhs: Multivector| Sample { residual: lhs - rhs, scale: norms(&[lhs, rhs]) };
        let vsample = |lhs: [f64; 3], rhs: [f64; 3]| {
            let (l, r) = (Multivector::relative(lhs), Multivector::relative(rhs));
            Sample { residual: l - r, scale: norms(&[l, r]) }
        };
        Ok(match self {
            Equation::Eq1 { field, current, g } => {
                sample(dirac(field, p, h, st)?, -*g * (g5 * current.try_eval(p)?))
            }
            Equation::Eq10 { field, g: c } | Equation::EqA { field, m: c } => {
                let f = field.try_eval(p)?;
                sample(dirac(field, p, h, st)?, -*c * (g5 * f * g0))
            }
            Equation::Eq12 { e, g } => {
                let lhs = pauli_gradient(e, p, h, st)?;
                sample(lhs, *g * (-g5 * Multivector::relative(e.eval(p))))
            }
            Equation::Eq13 { e, coeff } => {
                // σ_jσ_k products land on the scalar (divergence) and the
                // spatial bivectors (∇∧E) only
                let wedge = pauli_gradient(e, p, h, st)?.project(2);
                // i = −γ^5, so −i X = γ^5 X
                sample(g5 * wedge, Multivector::relative(e.eval(p)) * *coeff)
            }
            Equation::Eq14 { e, coeff } => {
                let v = e.eval(p);
                vsample(curl3(e, p, h, st)?, v.map(|c| c * coeff))
            }
            Equation::Eq14Div { e } => {
                let d = div3(e, p, h, st)?;
                let j = jacobian3(e, p, h, st)?;
                let scale = (0..3).map(|i| j[i][i].abs()).fold(0.0, f64::max);
                Sample { residual: Multivector::scalar(d), scale }
            }
            Equation::Eq15 { e, coeff } => {
                let v = e.eval(p);
                vsample(lap3(e, p, h, st)?, v.map(|c| -c * coeff))
            }
            Equation::Free { field } => {
                let d = dirac(field, p, h, st)?;
                let scale = gradient_terms(field, p, h, st)?.iter().fold(0.0f64, |m, t| m.max(t.norm()));
                Sample { residual: d, scale }
            }
            Equation::EqB { field, m } | Equation::F3 { field, m } | Equation::Eq38 { field, m } => {
                sample(box_op(field, p, h, st)?, field.try_eval(p)? * (m * m))
            }
            Equation::F5 { field, m } | Equation::Eq37 { field, m } => {
                sample(box_op(field, p, h, st)?, field.try_eval(p)? * (-m * m))
            }
            Equation::F11 { field, kappa } | Equation::F4 { field, kappa } => {
                let f = field.try_eval(p)?;
                sample(dirac(field, p, h, st)?, -(g5 * *kappa * f))
            }
            Equation::BoxHertz { potential } => {
                let scale = (0..4)
                    .map(|mu| second_partial(potential, mu, p, h, st).map(|v| v.norm()))
                    .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
                Sample { residual: box_op(potential, p, h, st)?, scale }
            }
            Equation::LorenzGauge { potential } => {
                let scale = gradient_terms(potential, p, h, st)?.iter().fold(0.0f64, |m, t| m.max(t.norm()));
                Sample { residual: codiff(potential, p, h, st)?, scale }
            }
        })
    }
}

/// Sweeps one equation over the grid.
pub fn equation_residual(eq: &Equation, grid: &GridSpec, stencil: Stencil) -> Result<Sweep, DiffError> {
    sweep(eq.id(), grid, stencil, |p, h, st| eq.sample(p, h, st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p0() -> SpacetimePoint {
        SpacetimePoint::new(0.2, -0.4, 0.9, 0.35)
    }

    fn plane_wave(omega: f64, k: f64) -> FieldMap {
        FieldMap::new("plane", &[0, 4], move |p| Multivector::exp_g5(omega * p.t - k * p.z))
    }

    #[test]
    fn partial_of_constant_and_linear() {
        let c = FieldMap::constant("c", Multivector::gamma2(1, 3) * 2.5);
        for mu in 0..4 {
            assert_eq!(partial_mu(&c, mu, p0(), 0.1, Stencil::Central).unwrap(), Multivector::ZERO);
        }
        let lin = FieldMap::new("t g1", &[1], |p| Multivector::gamma(1) * p.t);
        let d = partial_mu(&lin, 0, p0(), 0.1, Stencil::Richardson).unwrap();
        assert!((d - Multivector::gamma(1)).norm() < 1e-14);
    }

    #[test]
    fn partial_of_duality_phase_matches_analytic() {
        let omega = 1.7;
        let f = FieldMap::new("exp", &[0, 4], move |p| Multivector::exp_g5(omega * p.t));
        let exact = Multivector::g5() * omega;
        let h = 1e-2;
        let err = (partial_mu(&f, 0, SpacetimePoint::ORIGIN, h, Stencil::Central).unwrap() - exact).norm();
        // leading error ω³h²/6
        assert!(err < omega.powi(3) * h * h / 6.0 * 1.01);
        let err4 = (partial_mu(&f, 0, SpacetimePoint::ORIGIN, h, Stencil::Richardson).unwrap() - exact).norm();
        assert!(err4 < 1e-9);
    }

    #[test]
    fn dirac_of_plane_wave() {
        let (omega, k) = (1.3, 0.6);
        let f = plane_wave(omega, k);
        let kappa = Multivector::gamma(0) * omega - Multivector::gamma(3) * k;
        let p = p0();
        let exact = kappa * Multivector::g5() * f.eval(p);
        let got = dirac(&f, p, 1e-3, Stencil::Richardson).unwrap();
        assert!((got - exact).norm() < 1e-10, "{got:?} vs {exact:?}");
        // κ = ωγ_0 + kγ_3 in lowered form
        assert_eq!(kappa, Multivector::gamma_lower(0) * omega + Multivector::gamma_lower(3) * k);
        let c = FieldMap::constant("c", Multivector::g5());
        assert_eq!(dirac(&c, p, 0.1, Stencil::Central).unwrap(), Multivector::ZERO);
    }

    #[test]
    fn exterior_calculus() {
        let c = FieldMap::constant("B", Multivector::gamma2(1, 2));
        assert_eq!(d_wedge(&c, p0(), 0.1, Stencil::Central).unwrap(), Multivector::ZERO);

        // Π = sin(x + 2y) cos(t − z) γ^0γ^1 + e^{0.3x} γ^2γ^3
        let pi = FieldMap::new("pi", &[2], |p| {
            Multivector::gamma2(0, 1) * ((p.x + 2.0 * p.y).sin() * (p.t - p.z).cos())
                + Multivector::gamma2(2, 3) * (0.3 * p.x).exp()
        });
        let h = 1e-3;
        let a = {
            let pi = pi.clone();
            FieldMap::new("A", &[1], move |p| -codiff(&pi, p, h, Stencil::Richardson).unwrap())
        };
        let dd = codiff(&a, p0(), h, Stencil::Richardson).unwrap();
        assert!(dd.norm() < 1e-6, "δδΠ = {dd:?}");

        // ∂ = d − δ on a homogeneous field
        let lhs = dirac(&pi, p0(), h, Stencil::Richardson).unwrap();
        let rhs = d_wedge(&pi, p0(), h, Stencil::Richardson).unwrap() - codiff(&pi, p0(), h, Stencil::Richardson).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);

        let mixed = FieldMap::new("mixed", &[0, 2], |_| Multivector::scalar(1.0));
        assert!(matches!(d_wedge(&mixed, p0(), 0.1, Stencil::Central), Err(DiffError::MixedGrade(_))));
        assert!(matches!(codiff(&mixed, p0(), 0.1, Stencil::Central), Err(DiffError::MixedGrade(_))));
    }

    #[test]
    fn box_matches_nested_dirac_on_scalar_times_blade() {
        let f = FieldMap::new("s", &[2], |p| {
            Multivector::gamma2(0, 2) * ((0.7 * p.t).sin() * (1.1 * p.x).cos() * (0.4 * p.z).exp())
        });
        let h = 1e-2;
        let direct = box_op(&f, p0(), h, Stencil::Richardson).unwrap();
        let inner = {
            let f = f.clone();
            FieldMap::new("df", &[1, 3], move |p| dirac(&f, p, 1e-4, Stencil::Richardson).unwrap())
        };
        let nested = dirac(&inner, p0(), 1e-3, Stencil::Richardson).unwrap();
        assert!((direct - nested).norm() < 1e-6, "{direct:?} vs {nested:?}");
        // exact value (ω_t² ... ) for the separable profile
        let v = f.eval(p0());
        let exact = v * (-0.49 + 1.21 - 0.16);
        assert!((direct - exact).norm() < 1e-8);
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let grad = VectorField3::new("grad", |p| {
            // ∇(sin x · cos 2y · e^{z/3})
            let (x, y, z) = (p.x, p.y, p.z);
            [
                x.cos() * (2.0 * y).cos() * (z / 3.0).exp(),
                -2.0 * x.sin() * (2.0 * y).sin() * (z / 3.0).exp(),
                x.sin() * (2.0 * y).cos() * (z / 3.0).exp() / 3.0,
            ]
        });
        let c = curl3(&grad, p0(), 1e-2, Stencil::Central).unwrap();
        assert!(crate::sta::norm3(c) < 1e-3);
        let c = curl3(&grad, p0(), 1e-2, Stencil::Richardson).unwrap();
        assert!(crate::sta::norm3(c) < 1e-9);
    }

    #[test]
    fn central_and_richardson_orders() {
        let f = plane_wave(1.3, 0.6);
        let kappa = Multivector::gamma(0) * 1.3 - Multivector::gamma(3) * 0.6;
        let p = p0();
        let exact = kappa * Multivector::g5() * f.eval(p);
        let err = |h, st| (dirac(&f, p, h, st).unwrap() - exact).norm();
        assert!(err(0.1, Stencil::Central) / err(0.05, Stencil::Central) >= 3.5);
        assert!(err(0.1, Stencil::Richardson) / err(0.05, Stencil::Richardson) >= 12.0);
    }

    #[test]
    fn force_contractions() {
        let j = FieldMap::constant("J", Multivector::gamma(0));
        let f = FieldMap::constant("F", Multivector::gamma2(2, 1));
        assert_eq!(lorentz_force(&j, &f, p0(), ForceVariant::Plain), Multivector::ZERO);

        // transcendent current J = F γ^0 with F pure electric carries no force
        let e = [0.3, -1.2, 0.8];
        let field = Multivector::relative(e);
        let current = field * Multivector::gamma(0);
        let force = lorentz_force_at(&current, &field, ForceVariant::Hodged);
        assert!(force.norm() < 1e-15);
        let (power, vec) = relative_force(&current, &field).unwrap();
        assert!(power.abs() < 1e-15 && crate::sta::norm3(vec) < 1e-15);
    }

    proptest! {
        #[test]
        fn relative_force_matches_contraction(
            j in prop::array::uniform4(-2.0f64..2.0),
            e in prop::array::uniform3(-2.0f64..2.0),
            b in prop::array::uniform3(-2.0f64..2.0),
        ) {
            let current = Multivector::vector(j);
            let field = Multivector::pauli_join(&RelativeSplit { e, b });
            let f = lorentz_force_at(&current, &field, ForceVariant::Hodged);
            prop_assert!(f.is_grade(1, 1e-14));
            let (ft, fv) = f.space_time_split();
            let (power, vec) = relative_force(&current, &field).unwrap();
            prop_assert!((ft - power).abs() < 1e-12);
            for i in 0..3 {
                prop_assert!((fv[i] - vec[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_validation_and_layout() {
        let g = GridSpec::cube(1.0, 3, 0.01);
        assert_eq!(g.points().len(), 81);
        assert_eq!(g.points()[1], SpacetimePoint::new(0.0, 0.0, 0.0, 1.0 / 3.0));
        let bad = GridSpec { counts: [1, 0, 1, 1], ..g };
        assert!(matches!(bad.validate(), Err(DiffError::DegenerateGrid(_))));
        assert!(matches!(g.with_step(0.0).validate(), Err(DiffError::BadStep(_))));
        let f = FieldMap::constant("c", Multivector::scalar(1.0));
        assert!(partial_mu(&f, 0, p0(), -1.0, Stencil::Central).is_err());
    }

    #[test]
    fn non_finite_fields_are_reported() {
        let f = FieldMap::new("blowup", &[0], |p| Multivector::scalar(1.0 / p.x));
        let err = partial_mu(&f, 1, SpacetimePoint::new(0.0, 0.1, 0.0, 0.0), 0.1, Stencil::Central);
        assert!(matches!(err, Err(DiffError::NonFinite { .. })));
    }

    #[test]
    fn static_detection() {
        let moving = FieldMap::new("moving", &[2], |p| Multivector::gamma2(0, 1) * p.t.cos());
        assert!(matches!(moving.ensure_static(1e-12), Err(DiffError::TimeDependent(_))));
        let still = FieldMap::new("still", &[2], |p| Multivector::gamma2(0, 1) * p.x.cos());
        assert!(still.ensure_static(1e-12).is_ok());
    }

    #[test]
    fn free_plane_wave_sweep_is_deterministic_and_second_order() {
        // null field E = σ1, B = σ2 travelling along +z: F = σ1(1 − σ3) f(t − z)
        let f = FieldMap::new("null wave", &[2], |p| {
            (Multivector::sigma(1) * (Multivector::scalar(1.0) - Multivector::sigma(3))) * (p.t - p.z).cos()
        });
        let grid = GridSpec::cube(2.0, 3, 0.05);
        let a = equation_residual(&Equation::Free { field: f.clone() }, &grid, Stencil::Central).unwrap();
        let b = equation_residual(&Equation::Free { field: f }, &grid, Stencil::Central).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(a.report.samples, 81);
        assert!(a.report.max_abs < 1e-12, "{:?}", a.report);
    }
}
