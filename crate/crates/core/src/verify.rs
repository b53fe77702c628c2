//! The identity suite: every field, spinor and spectrum claim as a
//! pass/fail check, collected into a versioned, deterministic report.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffops::{
    equation_residual, relative_force, Equation, EquationId, GridSpec, ResidualReport, Stencil, Sweep,
};
use crate::error::{FieldError, VerifyError};
use crate::fields::{self, BeltramiParams, Branch, DualityWave, HertzParams, ProfileKind};
use crate::spectrum::{self, units, MassSpectrum, SpectrumParams};
use crate::spinor::{self, AnsatzParams, CurrentDirection, DiracEquation, SpinorField, EVEN_BLADES};
use crate::sta::{Multivector, SpacetimePoint, Tolerance};

pub const SCHEMA_VERSION: u32 = 1;

/// Name of the JSON file `verify` writes into the output directory.
pub const REPORT_FILE: &str = "verify_report.json";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitSystem {
    /// `ħ = c = 1`, masses as inverse lengths.
    #[default]
    Natural,
    /// Gaussian units with `ħ = c = 1` and `e² = α`; only changes the
    /// prefactor `2π𝚎/𝚖` of spinor-built fields.
    GaussianSymbolic,
}

impl UnitSystem {
    pub fn field_prefactor(&self, m_param: f64, alpha: f64) -> f64 {
        match self {
            UnitSystem::Natural => 1.0,
            UnitSystem::GaussianSymbolic => 2.0 * PI * units::elementary_charge(alpha) / m_param,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOverrides {
    /// Lattice points per axis.
    pub points_per_axis: Option<usize>,
    /// Finite-difference step.
    pub step: Option<f64>,
}

impl GridOverrides {
    pub fn apply(&self, mut grid: GridSpec) -> GridSpec {
        if let Some(n) = self.points_per_axis {
            grid.counts = [n; 4];
        }
        if let Some(h) = self.step {
            grid.h = h;
        }
        grid
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerance_abs: f64,
    pub tolerance_rel: f64,
    pub seed: u64,
    pub grid: GridOverrides,
    pub output_dir: Option<PathBuf>,
    pub units: UnitSystem,
    /// Magnetic charge of the static configuration.
    pub g: f64,
    /// `m = κ g` for the duality rotation.
    pub kappa: f64,
    /// Boost speed of the moving free-field check.
    pub boost_v: f64,
    /// Samples per randomized property check.
    pub random_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = Tolerance::default();
        Self {
            tolerance_abs: t.abs,
            tolerance_rel: t.rel,
            seed: 20_111_011,
            grid: GridOverrides::default(),
            output_dir: None,
            units: UnitSystem::Natural,
            g: 1.0,
            kappa: fields::DEFAULT_KAPPA,
            boost_v: 0.6,
            random_samples: 1000,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: String| Err(VerifyError::Config(m));
        if !(self.tolerance_abs > 0.0 && self.tolerance_abs.is_finite()) {
            return bad(format!("tolerance_abs must be positive, got {}", self.tolerance_abs));
        }
        if !(self.tolerance_rel > 0.0 && self.tolerance_rel.is_finite()) {
            return bad(format!("tolerance_rel must be positive, got {}", self.tolerance_rel));
        }
        if !(self.g > 0.0 && self.g.is_finite()) {
            return bad(format!("g must be positive, got {}", self.g));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(self.boost_v.abs() < 1.0) {
            return bad(format!("boost_v must lie in (-1, 1), got {}", self.boost_v));
        }
        if self.random_samples == 0 {
            return bad("random_samples must be at least 1".into());
        }
        if self.grid.points_per_axis == Some(0) {
            return bad("grid.points_per_axis must be at least 1".into());
        }
        if let Some(h) = self.grid.step {
            if !(h > 0.0 && h.is_finite()) {
                return bad(format!("grid.step must be positive, got {h}"));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance { abs: self.tolerance_abs, rel: self.tolerance_rel }
    }
}

/// What the suite expects a check to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    /// The printed relation is inconsistent with the others; the check
    /// demonstrates the violation.
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    ExpectedInconsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub equation_id: Option<EquationId>,
    pub residual: Option<ResidualReport>,
    pub value: f64,
    pub scale: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub expectation: Expectation,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    fn judge(value: f64, threshold: f64, bound: Bound, expectation: Expectation) -> Verdict {
        let within = match bound {
            Bound::AtMost => value <= threshold,
            Bound::AtLeast => value >= threshold,
        };
        match (expectation, within) {
            (Expectation::Holds, true) => Verdict::Pass,
            (Expectation::Violated, false) => Verdict::ExpectedInconsistent,
            _ => Verdict::Fail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub parallel: bool,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            parallel: cfg!(feature = "parallel"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub expected_inconsistent: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub environment: Environment,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Result<String, VerifyError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, VerifyError> {
        let path = dir.join(REPORT_FILE);
        std::fs::create_dir_all(dir).map_err(|source| VerifyError::Io { path: dir.to_path_buf(), source })?;
        std::fs::write(&path, self.to_json()? + "\n").map_err(|source| VerifyError::Io { path: path.clone(), source })?;
        Ok(path)
    }
}

struct Suite<'a> {
    cfg: &'a RunConfig,
    tol: Tolerance,
    checks: Vec<Check>,
}

impl Suite<'_> {
    fn grid(&self, k_char: f64) -> GridSpec {
        self.cfg.grid.apply(GridSpec::for_wavenumber(k_char))
    }

    fn push_sweep(&mut self, name: impl Into<String>, sweep: &Sweep, expectation: Expectation, note: Option<&str>) {
        let threshold = self.tol.threshold(sweep.scale);
        let value = sweep.report.max_abs;
        self.checks.push(Check {
            name: name.into(),
            equation_id: Some(sweep.report.equation_id),
            residual: Some(sweep.report.clone()),
            value,
            scale: sweep.scale,
            threshold,
            bound: Bound::AtMost,
            expectation,
            verdict: Check::judge(value, threshold, Bound::AtMost, expectation),
            note: note.map(str::to_owned),
        });
    }

    fn residual(&mut self, name: &str, eq: &Equation, grid: &GridSpec, expectation: Expectation) -> Result<Sweep, VerifyError> {
        let s = equation_residual(eq, grid, Stencil::Richardson)?;
        self.push_sweep(name, &s, expectation, None);
        Ok(s)
    }

    fn dirac(&mut self, name: &str, psi: &SpinorField, eq: &DiracEquation, grid: &GridSpec) -> Result<(), VerifyError> {
        let s = spinor::dh_residual(psi, eq, grid, Stencil::Richardson)?;
        self.push_sweep(name, &s, Expectation::Holds, None);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn scalar(
        &mut self,
        name: &str,
        equation_id: Option<EquationId>,
        value: f64,
        threshold: f64,
        bound: Bound,
        expectation: Expectation,
        note: Option<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            equation_id,
            residual: None,
            value,
            scale: 1.0,
            threshold,
            bound,
            expectation,
            verdict: Check::judge(value, threshold, bound, expectation),
            note,
        });
    }

    /// Smallest observed convergence order of plain central differences
    /// over `h, h/2, h/4`.
    fn order(&mut self, name: &str, eq: &Equation, h: f64) -> Result<(), VerifyError> {
        let grid = GridSpec { counts: [3; 4], ..GridSpec::cube(1.0, 3, h) };
        let r = |h: f64| -> Result<f64, VerifyError> {
            Ok(equation_residual(eq, &grid.with_step(h), Stencil::Central)?.report.max_abs)
        };
        let (a, b, c) = (r(h)?, r(h / 2.0)?, r(h / 4.0)?);
        let note = format!("max residual {a:.3e}, {b:.3e}, {c:.3e} at h = {h}, {}, {}", h / 2.0, h / 4.0);
        if a.max(b).max(c) <= self.tol.abs {
            // no truncation error to measure: the stencil is exact here
            self.scalar(name, Some(eq.id()), a.max(b).max(c), self.tol.abs, Bound::AtMost, Expectation::Holds, Some(note + "; exact up to round-off"));
            return Ok(());
        }
        let order = (a / b).log2().min((b / c).log2());
        let order = if order.is_finite() { order } else { 0.0 };
        self.scalar(
            name,
            Some(eq.id()),
            order,
            1.9,
            Bound::AtLeast,
            Expectation::Holds,
            Some(note),
        );
        Ok(())
    }
}

fn random_even(rng: &mut ChaCha8Rng) -> Multivector {
    let mut m = Multivector::ZERO;
    for b in EVEN_BLADES {
        m.0[b] = rng.gen_range(-1.0..1.0);
    }
    m
}

/// Runs the whole identity suite.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, VerifyError> {
    cfg.validate()?;
    let mut s = Suite { cfg, tol: cfg.tolerance(), checks: Vec::new() };
    field_checks(&mut s)?;
    hertz_checks(&mut s)?;
    spinor_checks(&mut s)?;
    spectrum_checks(&mut s)?;

    let mut summary = Summary::default();
    for c in &s.checks {
        match c.verdict {
            Verdict::Pass => summary.passed += 1,
            Verdict::Fail => summary.failed += 1,
            Verdict::ExpectedInconsistent => summary.expected_inconsistent += 1,
        }
    }
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        environment: Environment::current(),
        checks: s.checks,
        summary,
    })
}

const ABC: (f64, f64, f64) = (1.0, 0.7, -0.4);

fn abc(lambda_eig: f64) -> BeltramiParams {
    BeltramiParams { lambda_eig, a: ABC.0, b: ABC.1, c: ABC.2 }
}

fn field_checks(s: &mut Suite) -> Result<(), VerifyError> {
    use Expectation::{Holds, Violated};
    let g = s.cfg.g;
    let m = s.cfg.kappa * g;

    // Curl eigenvalue λ = g: the monopole form and its vector reading.
    let e1 = fields::beltrami_field(abc(g));
    let f1 = fields::embed_electric(&e1);
    let j1 = fields::transcendent_current(&f1)?;
    let grid1 = s.grid(g);
    s.residual("EQ1[lambda=g]", &Equation::Eq1 { field: f1.clone(), current: j1, g }, &grid1, Holds)?;
    s.residual("EQ10[lambda=g]", &Equation::Eq10 { field: f1.clone(), g }, &grid1, Holds)?;
    s.residual("EQ12[lambda=g]", &Equation::Eq12 { e: e1.clone(), g }, &grid1, Holds)?;
    s.residual("EQ13[lambda=g,coeff=g]", &Equation::Eq13 { e: e1.clone(), coeff: g }, &grid1, Holds)?;
    s.residual("EQ14[lambda=g,coeff=g]", &Equation::Eq14 { e: e1.clone(), coeff: g }, &grid1, Holds)?;
    s.residual("EQ14[lambda=g,coeff=2g]", &Equation::Eq14 { e: e1.clone(), coeff: 2.0 * g }, &grid1, Violated)?;
    s.residual("EQ14_DIV[lambda=g]", &Equation::Eq14Div { e: e1.clone() }, &grid1, Holds)?;
    s.residual("EQ15[lambda=g,coeff=g^2]", &Equation::Eq15 { e: e1.clone(), coeff: g * g }, &grid1, Holds)?;

    // Curl eigenvalue λ = 2g: the force-free reading with the doubled factor.
    let e2 = fields::beltrami_field(abc(2.0 * g));
    let f2 = fields::embed_electric(&e2);
    let grid2 = s.grid(2.0 * g);
    s.residual("EQ13[lambda=2g,coeff=2g]", &Equation::Eq13 { e: e2.clone(), coeff: 2.0 * g }, &grid2, Holds)?;
    s.residual("EQ14[lambda=2g,coeff=2g]", &Equation::Eq14 { e: e2.clone(), coeff: 2.0 * g }, &grid2, Holds)?;
    s.residual("EQ14_DIV[lambda=2g]", &Equation::Eq14Div { e: e2.clone() }, &grid2, Holds)?;
    s.residual("EQ15[lambda=2g,coeff=4g^2]", &Equation::Eq15 { e: e2.clone(), coeff: 4.0 * g * g }, &grid2, Holds)?;
    s.residual("EQ15[lambda=2g,coeff=g^2]", &Equation::Eq15 { e: e2.clone(), coeff: g * g }, &grid2, Violated)?;

    // Lorentz force of the transcendent current on its own field.
    let j2 = fields::transcendent_current(&f2)?;
    let mut worst = 0.0f64;
    for p in grid2.points() {
        let e = e2.eval(p);
        let e_sq = e.iter().map(|c| c * c).sum::<f64>().max(f64::MIN_POSITIVE);
        let (along, across) = relative_force(&j2.eval(p), &f2.eval(p)).map_err(FieldError::from)?;
        let force = (along * along + across.iter().map(|c| c * c).sum::<f64>()).sqrt();
        worst = worst.max(force / e_sq);
    }
    s.scalar("FORCE_FREE[lambda=2g]", Some(EquationId::Eq14), worst, 1e-10, Bound::AtMost, Holds, Some("max |J⌟⋆F|/|E|^2".into()));

    // Duality rotation reproduces the monopole equation as a free field.
    let rest = fields::duality_rotate(&f1, DualityWave::at_rest(m))?;
    s.residual("EQ_FREE[rest]", &Equation::Free { field: rest.clone() }, &grid1, Holds)?;
    // The rest-frame stencil is exact for the rotated field, so the pointwise
    // gap is EQ10's own truncation error; compare on a finer step.
    let fine = grid1.with_step(grid1.h / 4.0);
    let r10 = equation_residual(&Equation::Eq10 { field: f1.clone(), g }, &fine, Stencil::Richardson)?;
    let rfree = equation_residual(&Equation::Free { field: rest.clone() }, &fine, Stencil::Richardson)?;
    let diff = r10.pointwise.iter().zip(&rfree.pointwise).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    s.scalar(
        "EQUIV[EQ10,EQ_FREE]",
        Some(EquationId::EqFree),
        diff,
        1e-9,
        Bound::AtMost,
        Holds,
        Some(format!("pointwise |r10 - r_free| at h = {:e}", fine.h)),
    );
    let boosted = fields::duality_rotate(&f1, DualityWave::new(m, s.cfg.boost_v)?)?;
    s.residual("EQ_FREE[boosted]", &Equation::Free { field: boosted.clone() }, &grid1, Holds)?;
    s.residual("EQ_A", &Equation::EqA { field: f1.clone(), m }, &grid1, Holds)?;
    s.residual("EQ_B", &Equation::EqB { field: f1.clone(), m }, &grid1, Holds)?;

    let h0 = 0.2 / g;
    s.order("ORDER[EQ10]", &Equation::Eq10 { field: f1, g }, h0)?;
    s.order("ORDER[EQ_FREE,rest]", &Equation::Free { field: rest }, h0)?;
    s.order("ORDER[EQ_FREE,boosted]", &Equation::Free { field: boosted }, h0)?;
    Ok(())
}

fn hertz_checks(s: &mut Suite) -> Result<(), VerifyError> {
    let g = s.cfg.g;
    let brady = HertzParams::new(
        Branch::Bradyonic,
        g,
        (1.25 * g * g).sqrt(),
        1.5 * g,
        ProfileKind::Exponential,
        0.3,
        Multivector::gamma2(1, 2),
    )?;
    let tachy = HertzParams::new(
        Branch::Tachyonic,
        0.8 * g,
        (0.36f64 + 0.64).sqrt() * g,
        0.6 * g,
        ProfileKind::Bessel,
        0.0,
        Multivector::gamma2(0, 2),
    )?;
    for hp in [brady, tachy] {
        let tag = hp.branch.name();
        let chain = fields::hertz_chain(&hp)?;
        let grid = s.grid(hp.k.max(hp.m));
        s.residual(&format!("EQ28_BOX[{tag}]"), &Equation::BoxHertz { potential: chain.potential.clone() }, &grid, Expectation::Holds)?;
        s.residual(&format!("LORENZ_GAUGE[{tag}]"), &Equation::LorenzGauge { potential: chain.vector_potential.clone() }, &grid, Expectation::Holds)?;
        s.residual(&format!("EQ_FREE[{tag}]"), &Equation::Free { field: chain.field.clone() }, &grid, Expectation::Holds)?;
        let f0 = chain.rest_field.clone();
        let (first, kg) = match hp.branch {
            Branch::Bradyonic => (
                Equation::F4 { field: f0.clone(), kappa: hp.kappa() },
                Equation::F5 { field: f0, m: hp.m },
            ),
            Branch::Tachyonic => (
                Equation::F11 { field: f0.clone(), kappa: hp.kappa() },
                Equation::F3 { field: f0, m: hp.m },
            ),
        };
        s.residual(&format!("{}[{tag}]", first.id()), &first, &grid, Expectation::Holds)?;
        s.residual(&format!("{}[{tag}]", kg.id()), &kg, &grid, Expectation::Holds)?;
        s.order(&format!("ORDER[{},{tag}]", kg.id()), &kg, 0.2 / hp.k.max(hp.m))?;

        let off = HertzParams { omega: hp.k, ..hp }.validate();
        let rejected = matches!(off, Err(FieldError::OffShell { .. }));
        s.scalar(
            &format!("OFF_SHELL_REJECTED[{tag}]"),
            None,
            if rejected { 0.0 } else { 1.0 },
            0.0,
            Bound::AtMost,
            Expectation::Holds,
            Some("omega = k must be rejected".into()),
        );
    }
    Ok(())
}

fn spinor_checks(s: &mut Suite) -> Result<(), VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed);
    let n = s.cfg.random_samples;

    let mut worst_round = 0.0f64;
    let mut worst_null = 0.0f64;
    let mut used = 0usize;
    while used < n {
        let psi = random_even(&mut rng);
        let Ok(parts) = spinor::polar_decompose(&psi) else { continue };
        if parts.rho < 1e-6 {
            continue;
        }
        used += 1;
        worst_round = worst_round.max((spinor::recompose(&parts) - psi).norm() / psi.norm());
        for shift in [0.0, PI, -PI] {
            let f = spinor::auto_force(&psi, parts.beta + shift)?;
            worst_null = worst_null.max(f.norm() / psi.norm_squared().powi(2).max(1.0));
        }
    }
    let seed_note = Some(format!("seed {}, {n} samples", s.cfg.seed));
    s.scalar("POLAR_ROUNDTRIP", None, worst_round, 1e-10, Bound::AtMost, Expectation::Holds, seed_note.clone());
    s.scalar("ANS1[lambda=beta+n*pi]", None, worst_null, 1e-10, Bound::AtMost, Expectation::Holds, seed_note);
    let witness = Multivector::exp_bivector(&(Multivector::gamma2(1, 3) * 0.3)).map_err(crate::error::SpinorError::from)?;
    let beta = spinor::polar_decompose(&witness)?.beta;
    let power = spinor::auto_force(&witness, beta + PI / 2.0)?.norm();
    s.scalar("ANS1[witness,lambda=beta+pi/2]", None, power, 1e-3, Bound::AtLeast, Expectation::Holds, Some("psi = exp(0.3 g1g3)".into()));

    let w = 1.7;
    let rotating = SpinorField::new("rotating", 0.0, Branch::Bradyonic, move |p| {
        Multivector::exp_g5(0.25) * (Multivector::scalar((w * p.t / 2.0).cos()) - Multivector::gamma2(2, 1) * (w * p.t / 2.0).sin())
    });
    let kin = spinor::kinematic_invariants(&rotating, SpacetimePoint::new(0.3, 0.1, 0.0, 0.0), 1e-3)?;
    s.scalar(
        "KINEMATICS[Lambda=omega/2]",
        None,
        (kin.lambda - w / 2.0).abs() + kin.k.abs(),
        1e-8,
        Bound::AtMost,
        Expectation::Holds,
        None,
    );

    // Reduced equation from the m₁ = 0 condition, solved by a plane wave.
    let (k_inv, mu) = (1.3, 0.5);
    let beta = spectrum::beta_for_null_m1(k_inv, mu);
    let (m1, m2) = spinor::reduced_masses(k_inv, mu, beta);
    let kz = 0.6;
    let brady = spinor::plane_wave_spinor((kz * kz + m2 * m2).sqrt(), kz, m2, Branch::Bradyonic)?;
    let grid = s.grid(kz.max(m2));
    s.dirac("EQ35[m1=0]", &brady, &DiracEquation::Eq35 { m1, m2 }, &grid)?;
    s.dirac("EQ_SUPD", &brady, &DiracEquation::Supd { m: m2 }, &grid)?;
    s.residual("EQ37", &Equation::Eq37 { field: brady.as_field(), m: m2 }, &grid, Expectation::Holds)?;
    s.order("ORDER[EQ37]", &Equation::Eq37 { field: brady.as_field(), m: m2 }, 0.2 / m2)?;

    // Full equation with K and 𝚖g/𝚎 matched to the spinor's own β.
    let b_psi = spinor::polar_decompose(&brady.eval(SpacetimePoint::ORIGIN))?.beta;
    let cos2 = (2.0 * b_psi).cos();
    if cos2.abs() > 1e-6 {
        let g_ch = s.cfg.g;
        let k31 = m2 * b_psi.cos() / cos2;
        let mu31 = -m2 * b_psi.sin() / cos2;
        let current = spinor::current_ansatz(&brady, AnsatzParams::new(b_psi, g_ch), CurrentDirection::G0);
        let eq = DiracEquation::Eq31 { lambda: 0.0, k: k31, current, mass_over_charge: mu31 / g_ch };
        s.dirac("EQ31[lambda=beta,Lambda=0]", &brady, &eq, &grid)?;
    }

    let (mt, kt): (f64, f64) = (0.8, 1.0);
    let tachy = spinor::plane_wave_spinor((kt * kt - mt * mt).sqrt(), kt, mt, Branch::Tachyonic)?;
    let grid = s.grid(kt);
    s.dirac("EQ39", &tachy, &DiracEquation::Eq39 { m: mt }, &grid)?;
    s.residual("EQ38", &Equation::Eq38 { field: tachy.as_field(), m: mt }, &grid, Expectation::Holds)?;

    let off = spinor::plane_wave_spinor(1.0, 1.0, 1.0, Branch::Bradyonic);
    let rejected = matches!(off, Err(crate::error::SpinorError::OffShell(_)));
    s.scalar("PLANE_WAVE_OFF_SHELL_REJECTED", None, if rejected { 0.0 } else { 1.0 }, 0.0, Bound::AtMost, Expectation::Holds, None);
    Ok(())
}

fn spectrum_checks(s: &mut Suite) -> Result<(), VerifyError> {
    use Expectation::{Holds, Violated};
    let alpha = units::ALPHA;
    let m = spectrum::fit_m(3.0, &[0, 1, 2], 0.28, alpha)?;
    s.scalar("SPECTRUM_FIT[m]", None, (m - 1.97e-4).abs(), 2e-6, Bound::AtMost, Holds, Some(format!("fitted m = {m:.6e} eV")));
    let spec = MassSpectrum::compute(&SpectrumParams::new(m, 3.0, vec![0, 1, 2])?)?;
    let printed = [0.12, 0.10, 0.056];
    let dev = spec.masses.iter().zip(printed).fold(0.0f64, |a, (x, p)| a.max((x.mass_ev - p).abs()));
    s.scalar("SPECTRUM_MASSES", None, dev, 0.005, Bound::AtMost, Holds, Some(format!("{:?}", spec.masses.iter().map(|x| x.mass_ev).collect::<Vec<_>>())));

    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed ^ 0x5eed);
    let mut worst_identity = 0.0f64;
    let mut worst_m1 = 0.0f64;
    for _ in 0..s.cfg.random_samples {
        let m_param = rng.gen_range(1e-6..1e-2);
        let big_n: f64 = rng.gen_range(0.5..10.0);
        let n = rng.gen_range(0..=big_n.floor() as i64);
        let p = SpectrumParams::new(m_param, big_n, vec![n as u32])?;
        let direct = spectrum::mass_n(n, &p)?;
        let via = spectrum::m2(p.k(), spectrum::mg_over_e(n, m_param, alpha))?;
        worst_identity = worst_identity.max((direct - via).abs() / direct.abs().max(p.k() * 1e-12));

        let k: f64 = rng.gen_range(1e-3..50.0);
        let mu: f64 = rng.gen_range(-50.0..50.0);
        let b = spectrum::beta_for_null_m1(k, mu);
        let (m1, m2) = spinor::reduced_masses(k, mu, b);
        let closed = spectrum::m2(k, mu)?;
        worst_m1 = worst_m1.max((m1.abs() / (k + mu.abs())).max((m2 - closed).abs() / closed.abs().max(1e-12 * (k + mu.abs()))));
    }
    s.scalar("SPECTRUM_IDENTITY", None, worst_identity, 1e-12, Bound::AtMost, Holds, None);
    s.scalar("M1_NULL_REDUCTION", None, worst_m1, 1e-12, Bound::AtMost, Holds, None);

    let rounded: Vec<_> = printed.iter().enumerate().map(|(n, &mass_ev)| spectrum::FlavourMass { n: n as u32, mass_ev }).collect();
    let d = spectrum::mass_squared_diffs(&rounded);
    // pairs (0,1), (0,2), (1,2) against the values printed beside them
    for (diff, (label, printed, expectation)) in d.iter().zip([
        ("SQDIFF[0,1]", 4.4e-5, Violated),
        ("SQDIFF[0,2]", 16.46e-3, Violated),
        ("SQDIFF[1,2]", 6.86e-3, Holds),
    ]) {
        s.scalar(
            label,
            None,
            (diff.value_ev2 - printed).abs() / printed,
            0.01,
            Bound::AtMost,
            expectation,
            Some(format!("computed {:.4e} eV^2, printed {printed:e} eV^2", diff.value_ev2)),
        );
    }
    Ok(())
}
