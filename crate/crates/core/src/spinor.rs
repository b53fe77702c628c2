//! Dirac-Hestenes spinors: polar form, bilinear fields and currents, the
//! auto-force, kinematic invariants and the Dirac-like residuals.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::diffops::{dirac, lorentz_force_at, sweep, EquationId, FieldMap, ForceVariant, GridSpec, Sample, Stencil, Sweep};
use crate::error::{DiffError, SpinorError};
use crate::fields::Branch;
use crate::sta::{Multivector, SpacetimePoint};

/// Below this `|ψψ̃|` a spinor has no polar decomposition.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Blade indices of the even subalgebra.
pub const EVEN_BLADES: [usize; 8] = [0, 5, 6, 7, 8, 9, 10, 15];
const ODD_BLADES: [usize; 8] = [1, 2, 3, 4, 11, 12, 13, 14];

/// `ψ = √ρ e^{βγ^5/2} R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarParts {
    pub rho: f64,
    pub beta: f64,
    pub rotor: Multivector,
}

fn bilinear_invariants(psi: &Multivector) -> (f64, f64) {
    let q = *psi * psi.reverse();
    (q.scalar_part(), q.pseudo_part())
}

pub fn polar_decompose(psi: &Multivector) -> Result<PolarParts, SpinorError> {
    if psi.odd().max_abs() > 1e-12 * psi.max_abs().max(1.0) {
        return Err(SpinorError::NotEven);
    }
    let (s, ps) = bilinear_invariants(psi);
    let rho = s.hypot(ps);
    if !(rho > SINGULAR_TOL) {
        return Err(SpinorError::SingularSpinor(rho));
    }
    let beta = ps.atan2(s);
    Ok(PolarParts { rho, beta, rotor: rotor_for(psi, rho, beta) })
}

fn rotor_for(psi: &Multivector, rho: f64, beta: f64) -> Multivector {
    psi.even() * Multivector::exp_g5(-beta / 2.0) * (1.0 / rho.sqrt())
}

pub fn recompose(parts: &PolarParts) -> Multivector {
    Multivector::exp_g5(parts.beta / 2.0) * parts.rotor * parts.rho.sqrt()
}

type SpinorEval = Arc<dyn Fn(SpacetimePoint) -> Multivector + Send + Sync>;

/// An even-valued field with the mass it is meant to carry.
#[derive(Clone)]
pub struct SpinorField {
    name: String,
    eval: SpinorEval,
    pub m_nu: f64,
    pub branch: Branch,
}

impl fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinorField")
            .field("name", &self.name)
            .field("m_nu", &self.m_nu)
            .field("branch", &self.branch)
            .finish_non_exhaustive()
    }
}

impl SpinorField {
    pub fn new(
        name: impl Into<String>,
        m_nu: f64,
        branch: Branch,
        f: impl Fn(SpacetimePoint) -> Multivector + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), eval: Arc::new(f), m_nu, branch }
    }

    pub fn constant(psi: Multivector) -> Self {
        Self::new("constant", 0.0, Branch::Bradyonic, move |_| psi)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, p: SpacetimePoint) -> Multivector {
        (self.eval)(p)
    }

    /// The spinor as a generic even [`FieldMap`].
    pub fn as_field(&self) -> FieldMap {
        let e = self.eval.clone();
        FieldMap::new(self.name.clone(), &[0, 2, 4], move |p| e(p))
    }
}

/// Bivector sandwiched between `ψ` and `ψ̃` to build `𝔉₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinPlane {
    /// `γ^2γ^1`, bradyonic.
    G2G1,
    /// `γ^0γ^3`, tachyonic.
    G0G3,
}

impl SpinPlane {
    pub fn bivector(&self) -> Multivector {
        match self {
            SpinPlane::G2G1 => Multivector::gamma2(2, 1),
            SpinPlane::G0G3 => Multivector::gamma2(0, 3),
        }
    }
}

/// Vector sandwiched by the current ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurrentDirection {
    G0,
    G3,
}

impl CurrentDirection {
    pub fn vector(&self) -> Multivector {
        match self {
            CurrentDirection::G0 => Multivector::gamma(0),
            CurrentDirection::G3 => Multivector::gamma(3),
        }
    }
}

/// `𝒥 = e^{λγ^5} c g ψ d ψ̃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub lambda: f64,
    pub g: f64,
    #[serde(default = "one")]
    pub c_const: f64,
}

fn one() -> f64 {
    1.0
}

impl AnsatzParams {
    pub fn new(lambda: f64, g: f64) -> Self {
        Self { lambda, g, c_const: 1.0 }
    }
}

/// `𝔉₀ = scale · ψ B ψ̃`.
pub fn field_from_spinor(psi: &SpinorField, plane: SpinPlane, scale: f64) -> FieldMap {
    let psi = psi.clone();
    let b = plane.bivector();
    FieldMap::new(format!("F0[{}]", psi.name()), &[2], move |p| {
        let v = psi.eval(p);
        v * b * v.reverse() * scale
    })
}

pub fn current_at(psi: &Multivector, a: &AnsatzParams, dir: CurrentDirection) -> Multivector {
    Multivector::exp_g5(a.lambda) * *psi * dir.vector() * psi.reverse() * (a.c_const * a.g)
}

pub fn current_ansatz(psi: &SpinorField, a: AnsatzParams, dir: CurrentDirection) -> FieldMap {
    let psi = psi.clone();
    FieldMap::new(format!("J[{}]", psi.name()), &[1, 3], move |p| current_at(&psi.eval(p), &a, dir))
}

/// `𝒥 ⌟ 𝔉₀` with `𝒥 = e^{λγ^5}ψγ^0ψ̃` and `𝔉₀ = ψγ^2γ^1ψ̃`.
pub fn auto_force(psi: &Multivector, lambda: f64) -> Result<Multivector, SpinorError> {
    auto_force_with(psi, lambda, CurrentDirection::G0, SpinPlane::G2G1)
}

pub fn auto_force_with(
    psi: &Multivector,
    lambda: f64,
    dir: CurrentDirection,
    plane: SpinPlane,
) -> Result<Multivector, SpinorError> {
    polar_decompose(psi)?;
    let j = current_at(psi, &AnsatzParams::new(lambda, 1.0), dir);
    let f = *psi * plane.bivector() * psi.reverse();
    Ok(lorentz_force_at(&j, &f, ForceVariant::Plain))
}

/// `(Λ, K, Ω, S, v)` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    pub lambda: f64,
    pub k: f64,
    pub omega: Multivector,
    pub spin: Multivector,
    pub velocity: Multivector,
}

fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

// Rotor at a neighbour, with β kept on the branch of the centre value so R
// does not flip sign across the cut.
fn rotor_near(psi: &Multivector, beta_ref: f64) -> Result<Multivector, SpinorError> {
    let parts = polar_decompose(psi)?;
    let beta = beta_ref + wrap_angle(parts.beta - beta_ref);
    Ok(rotor_for(psi, parts.rho, beta))
}

fn rotor_derivative(psi: &SpinorField, mu: usize, p: SpacetimePoint, beta: f64, h: f64, st: Stencil) -> Result<Multivector, SpinorError> {
    let central = |h: f64| -> Result<Multivector, SpinorError> {
        let rp = rotor_near(&psi.eval(p.shifted(mu, h)), beta)?;
        let rm = rotor_near(&psi.eval(p.shifted(mu, -h)), beta)?;
        Ok((rp - rm) * (0.5 / h))
    };
    let coarse = central(h)?;
    Ok(match st {
        Stencil::Central => coarse,
        Stencil::Richardson => (central(h / 2.0)? * 4.0 - coarse) * (1.0 / 3.0),
    })
}

/// `Ω_μ = 2(∂_μR)R̃` for μ = 0..3.
pub fn rotor_rates(psi: &SpinorField, p: SpacetimePoint, h: f64, st: Stencil) -> Result<[Multivector; 4], SpinorError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(DiffError::BadStep(h).into());
    }
    let parts = polar_decompose(&psi.eval(p))?;
    let r_rev = parts.rotor.reverse();
    let mut out = [Multivector::ZERO; 4];
    for (mu, o) in out.iter_mut().enumerate() {
        *o = rotor_derivative(psi, mu, p, parts.beta, h, st)? * r_rev * 2.0;
    }
    Ok(out)
}

pub fn kinematic_invariants(psi: &SpinorField, p: SpacetimePoint, h: f64) -> Result<Kinematics, SpinorError> {
    let parts = polar_decompose(&psi.eval(p))?;
    let r = parts.rotor;
    let spin = r * Multivector::gamma2(2, 1) * r.reverse() * 0.5;
    let velocity = r * Multivector::gamma(0) * r.reverse();
    let rates = rotor_rates(psi, p, h, Stencil::Richardson)?;
    let omega: Multivector = (0..4)
        .map(|mu| rates[mu].project(2) * (velocity * Multivector::gamma(mu)).scalar_part())
        .sum();
    Ok(Kinematics {
        lambda: omega.scalar_product(&spin),
        k: omega.scalar_product(&(Multivector::g5() * spin)),
        omega,
        spin,
        velocity,
    })
}

/// The Dirac-like equations a spinor field can be checked against.
#[derive(Clone, Debug)]
pub enum DiracEquation {
    /// `∂ψγ^2γ^1 = m₁ψγ_0 + γ^5 m₂ψγ_0`.
    Eq35 { m1: f64, m2: f64 },
    /// `∂ψγ^2γ^1 = γ^5 m ψγ_0`.
    Supd { m: f64 },
    /// `∂ψ = γ^5 m ψγ^0`.
    Eq39 { m: f64 },
    /// `∂ψγ^2γ^1 = Λψγ_0e^{βγ^5} + γ^5Kψγ_0e^{βγ^5} + (e^{βγ^5}/ρ)(𝚖/𝚎)𝒥ψ`,
    /// with `ρ`, `β` taken from the spinor at each point.
    Eq31 { lambda: f64, k: f64, current: FieldMap, mass_over_charge: f64 },
}

impl DiracEquation {
    pub fn id(&self) -> EquationId {
        match self {
            DiracEquation::Eq35 { .. } => EquationId::Eq35,
            DiracEquation::Supd { .. } => EquationId::EqSupd,
            DiracEquation::Eq39 { .. } => EquationId::Eq39,
            DiracEquation::Eq31 { .. } => EquationId::Eq31,
        }
    }

    pub fn sample(&self, psi: &FieldMap, p: SpacetimePoint, h: f64, st: Stencil) -> Result<Sample, DiffError> {
        let g5 = Multivector::g5();
        let g0 = Multivector::gamma(0);
        let b21 = Multivector::gamma2(2, 1);
        let v = psi.try_eval(p)?;
        let d = dirac(psi, p, h, st)?;
        let (lhs, rhs) = match self {
            DiracEquation::Eq35 { m1, m2 } => (d * b21, v * g0 * *m1 + g5 * v * g0 * *m2),
            DiracEquation::Supd { m } => (d * b21, g5 * v * g0 * *m),
            DiracEquation::Eq39 { m } => (d, g5 * v * g0 * *m),
            DiracEquation::Eq31 { lambda, k, current, mass_over_charge } => {
                let (s, ps) = bilinear_invariants(&v);
                let rho = s.hypot(ps);
                let e_beta = Multivector::exp_g5(ps.atan2(s));
                let j = current.try_eval(p)?;
                let rhs = v * g0 * e_beta * *lambda
                    + g5 * v * g0 * e_beta * *k
                    + e_beta * j * v * (*mass_over_charge / rho);
                (d * b21, rhs)
            }
        };
        Ok(Sample { residual: lhs - rhs, scale: lhs.norm().max(rhs.norm()) })
    }
}

/// Samples a Dirac-like equation over a grid.
pub fn dh_residual(psi: &SpinorField, eq: &DiracEquation, grid: &GridSpec, stencil: Stencil) -> Result<Sweep, DiffError> {
    let field = psi.as_field();
    sweep(eq.id(), grid, stencil, |p, h, st| eq.sample(&field, p, h, st))
}

/// `m₁`, `m₂` of the reduced equation for given `K`, `μ = 𝚖g/𝚎` and `β`.
pub fn reduced_masses(k: f64, mu: f64, beta: f64) -> (f64, f64) {
    let (s, c) = beta.sin_cos();
    (k * s + mu * c, k * c + mu * s)
}

/// Phase plane and sign of plane waves `ψ₀ e^{γ^2γ^1(ωt − kz)}`.
pub const PHASE_SIGN: f64 = 1.0;

fn phase_plane() -> Multivector {
    Multivector::gamma2(2, 1)
}

/// Matrix of the even → odd map whose kernel holds plane-wave amplitudes.
fn plane_wave_operator(omega: f64, k: f64, m: f64, branch: Branch) -> SMatrix<f64, 8, 8> {
    let kappa = (Multivector::gamma(0) * omega - Multivector::gamma(3) * k) * PHASE_SIGN;
    let g5 = Multivector::g5();
    let g0 = Multivector::gamma(0);
    let b = phase_plane();
    SMatrix::from_fn(|row, col| {
        let psi0 = Multivector::blade(EVEN_BLADES[col], 1.0);
        let image = match branch {
            // ∂ψ γ^2γ^1 = γ^5 m ψ γ^0  ⇔  κψ₀ + mγ^5ψ₀γ^0 = 0
            Branch::Bradyonic => kappa * psi0 + g5 * psi0 * g0 * m,
            // ∂ψ = γ^5 m ψ γ^0  ⇔  κψ₀γ^2γ^1 − mγ^5ψ₀γ^0 = 0
            Branch::Tachyonic => kappa * psi0 * b - g5 * psi0 * g0 * m,
        };
        image[ODD_BLADES[row]]
    })
}

/// Orthonormal basis of the plane-wave amplitude space.
pub fn plane_wave_nullspace(omega: f64, k: f64, m: f64, branch: Branch) -> Result<Vec<Multivector>, SpinorError> {
    let l = plane_wave_operator(omega, k, m, branch);
    let svd = l.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max().max(1.0);
    let mut smallest = f64::INFINITY;
    let mut basis = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        smallest = smallest.min(*s);
        if *s <= 1e-9 * smax {
            let mut mv = Multivector::ZERO;
            for (j, blade) in EVEN_BLADES.iter().enumerate() {
                mv.0[*blade] = v_t[(i, j)];
            }
            basis.push(mv);
        }
    }
    if basis.is_empty() {
        return Err(SpinorError::OffShell(smallest));
    }
    Ok(basis)
}

/// Kernel element with the largest `|ψψ̃|`, normalised to unit norm.
fn best_amplitude(basis: &[Multivector]) -> Multivector {
    let weight = |v: &Multivector| {
        let (s, p) = bilinear_invariants(v);
        s.hypot(p) / v.norm_squared().max(f64::MIN_POSITIVE)
    };
    let mut candidates: Vec<Multivector> = basis.to_vec();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(basis[i] + basis[j]);
            candidates.push(basis[i] - basis[j]);
        }
    }
    let best = candidates
        .into_iter()
        .filter(|v| v.norm() > 0.0)
        .fold((f64::NEG_INFINITY, Multivector::ZERO), |acc, v| {
            let w = weight(&v);
            if w > acc.0 + 1e-12 {
                (w, v)
            } else {
                acc
            }
        })
        .1;
    best * (1.0 / best.norm())
}

/// `ψ = ψ₀ e^{γ^2γ^1(ωt − kz)}` solving the branch's Dirac-like equation.
pub fn plane_wave_spinor(omega: f64, k: f64, m: f64, branch: Branch) -> Result<SpinorField, SpinorError> {
    let basis = plane_wave_nullspace(omega, k, m, branch)?;
    let psi0 = best_amplitude(&basis);
    let b = phase_plane();
    let name = format!("plane_wave[{}; omega={omega}, k={k}, m={m}]", branch.name());
    Ok(SpinorField::new(name, m, branch, move |p| {
        let chi = PHASE_SIGN * (omega * p.t - k * p.z);
        psi0 * (Multivector::scalar(chi.cos()) + b * chi.sin())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffops::{equation_residual, Equation};
    use crate::sta::Tolerance;
    use proptest::prelude::*;

    fn even_strategy() -> impl Strategy<Value = Multivector> {
        proptest::array::uniform8(-2.0f64..2.0).prop_map(|c| {
            let mut m = Multivector::ZERO;
            for (i, b) in EVEN_BLADES.iter().enumerate() {
                m.0[*b] = c[i];
            }
            m
        })
    }

    fn witness() -> Multivector {
        Multivector::exp_bivector(&(Multivector::gamma2(1, 3) * 0.3)).unwrap()
    }

    #[test]
    fn polar_examples() {
        let p = polar_decompose(&Multivector::scalar(2.0)).unwrap();
        assert_eq!((p.rho, p.beta), (4.0, 0.0));
        assert_eq!(p.rotor, Multivector::scalar(1.0));
        let p = polar_decompose(&Multivector::g5()).unwrap();
        assert_eq!(p.rho, 1.0);
        assert!((p.beta - PI).abs() < 1e-15);
        assert!((p.rotor - Multivector::scalar(1.0)).norm() < 1e-15);
        let null = Multivector::scalar(1.0) + Multivector::gamma2(0, 3);
        assert!(matches!(polar_decompose(&null), Err(SpinorError::SingularSpinor(_))));
        assert!(matches!(polar_decompose(&Multivector::gamma(1)), Err(SpinorError::NotEven)));
    }

    #[test]
    fn field_and_current_examples() {
        let one = SpinorField::constant(Multivector::scalar(1.0));
        let f = field_from_spinor(&one, SpinPlane::G2G1, 2.5);
        assert_eq!(f.eval(SpacetimePoint::ORIGIN), Multivector::gamma2(2, 1) * 2.5);
        let j = current_ansatz(&one, AnsatzParams { lambda: 0.0, g: 2.0, c_const: 1.5 }, CurrentDirection::G0);
        assert_eq!(j.eval(SpacetimePoint::ORIGIN), Multivector::gamma(0) * 3.0);
        let j = current_ansatz(&one, AnsatzParams::new(PI / 2.0, 1.0), CurrentDirection::G0);
        let v = j.eval(SpacetimePoint::ORIGIN);
        assert!((v - Multivector::g5() * Multivector::gamma(0)).norm() < 1e-15);
        assert!(v.is_grade(3, 1e-15));

        let beta = 0.7;
        let tilt = SpinorField::constant(Multivector::exp_g5(beta / 2.0));
        let f = field_from_spinor(&tilt, SpinPlane::G2G1, 1.0).eval(SpacetimePoint::ORIGIN);
        assert!((f - Multivector::exp_g5(beta) * Multivector::gamma2(2, 1)).norm() < 1e-15);
    }

    #[test]
    fn auto_force_witness_has_power() {
        let psi = witness();
        let beta = polar_decompose(&psi).unwrap().beta;
        assert!(auto_force(&psi, beta).unwrap().norm() < 1e-12);
        assert!(auto_force(&psi, beta + PI).unwrap().norm() < 1e-12);
        assert!(auto_force(&psi, beta + PI / 2.0).unwrap().norm() > 1e-3);
    }

    #[test]
    fn tachyonic_force_vanishes_off_the_ansatz_angle() {
        // with a γ^3 current in the γ^0γ^3 plane the null set shifts by π/2
        let psi = Multivector::scalar(1.0);
        for (l, zero) in [(0.0, false), (PI / 2.0, true), (PI, false), (-PI / 2.0, true)] {
            let f = auto_force_with(&psi, l, CurrentDirection::G3, SpinPlane::G0G3).unwrap();
            assert_eq!(f.norm() < 1e-12, zero, "lambda = {l}");
        }
    }

    #[test]
    fn kinematics_constant_and_rotating() {
        let c = SpinorField::constant(witness());
        let k = kinematic_invariants(&c, SpacetimePoint::ORIGIN, 1e-3).unwrap();
        assert!(k.omega.norm() < 1e-12 && k.lambda.abs() < 1e-12 && k.k.abs() < 1e-12);

        let w = 1.7;
        let spin = SpinorField::new("rot", 0.0, Branch::Bradyonic, move |p| {
            Multivector::exp_bivector(&(Multivector::gamma2(2, 1) * (-w * p.t / 2.0))).unwrap()
        });
        let q = SpacetimePoint::new(0.3, 0.0, 0.0, 0.0);
        let k = kinematic_invariants(&spin, q, 1e-3).unwrap();
        assert!((k.omega + Multivector::gamma2(2, 1) * w).norm() < 1e-9);
        assert!((k.lambda - w / 2.0).abs() < 1e-9);
        assert!(k.k.abs() < 1e-12);
    }

    #[test]
    fn rotor_rates_are_bivectors() {
        let spin = SpinorField::new("mix", 0.0, Branch::Bradyonic, |p| {
            let b = Multivector::gamma2(0, 1) * (0.3 * p.t - 0.2 * p.y)
                + Multivector::gamma2(2, 3) * (0.5 * p.z + 0.1 * p.x)
                + Multivector::gamma2(1, 3) * (0.4 * p.t);
            Multivector::exp_bivector(&b).unwrap() * Multivector::exp_g5(0.2)
        });
        let q = SpacetimePoint::new(0.4, -0.2, 0.9, 0.3);
        for om in rotor_rates(&spin, q, 1e-3, Stencil::Richardson).unwrap() {
            assert!((om - om.project(2)).norm() < 1e-8);
        }
    }

    #[test]
    fn plane_wave_branches() {
        let tol = Tolerance::default();
        let grid = GridSpec { counts: [3; 4], ..GridSpec::for_wavenumber(1.0) };
        let check = |s: Sweep| assert!(s.report.max_abs < tol.threshold(s.scale), "{:?}", s.report);

        let m = 1.0;
        let psi = plane_wave_spinor(2.0f64.sqrt(), 1.0, m, Branch::Bradyonic).unwrap();
        check(dh_residual(&psi, &DiracEquation::Supd { m }, &grid, Stencil::Richardson).unwrap());
        check(equation_residual(&Equation::Eq37 { field: psi.as_field(), m }, &grid, Stencil::Richardson).unwrap());

        let m = 0.5f64.sqrt();
        let psi = plane_wave_spinor(m, 1.0, m, Branch::Tachyonic).unwrap();
        check(dh_residual(&psi, &DiracEquation::Eq39 { m }, &grid, Stencil::Richardson).unwrap());
        check(equation_residual(&Equation::Eq38 { field: psi.as_field(), m }, &grid, Stencil::Richardson).unwrap());

        assert!(matches!(plane_wave_spinor(1.0, 1.0, 1.0, Branch::Bradyonic), Err(SpinorError::OffShell(_))));
        assert!(!plane_wave_nullspace(1.0, 1.0, 0.0, Branch::Bradyonic).unwrap().is_empty());
    }

    #[test]
    fn massless_constant_spinor_is_trivially_a_solution() {
        let c = SpinorField::constant(witness());
        let grid = GridSpec::cube(1.0, 2, 1e-3);
        let s = dh_residual(&c, &DiracEquation::Supd { m: 0.0 }, &grid, Stencil::Richardson).unwrap();
        assert_eq!(s.report.max_abs, 0.0);
    }

    #[test]
    fn eq31_reduces_to_eq35_with_left_multiplication() {
        // a solution of the reduced equation also solves the full one once
        // m₁ = 0 and m₂ = m are met by the choice of K and 𝚖g/𝚎
        let m = 0.9;
        let psi = plane_wave_spinor((1.0f64 + m * m).sqrt(), 1.0, m, Branch::Bradyonic).unwrap();
        let beta = polar_decompose(&psi.eval(SpacetimePoint::ORIGIN)).unwrap().beta;
        let cos2 = (2.0 * beta).cos();
        assert!(cos2.abs() > 1e-3);
        let k = m * beta.cos() / cos2;
        let mu = -m * beta.sin() / cos2;
        let (m1, m2) = reduced_masses(k, mu, beta);
        assert!(m1.abs() < 1e-12 && (m2 - m).abs() < 1e-12);
        let g = 2.0;
        let current = current_ansatz(&psi, AnsatzParams::new(beta, g), CurrentDirection::G0);
        let eq = DiracEquation::Eq31 { lambda: 0.0, k, current, mass_over_charge: mu / g };
        let grid = GridSpec { counts: [3; 4], ..GridSpec::for_wavenumber(1.0) };
        let s = dh_residual(&psi, &eq, &grid, Stencil::Richardson).unwrap();
        assert!(s.report.max_abs < Tolerance::default().threshold(s.scale), "{:?}", s.report);
    }

    proptest! {
        #[test]
        fn polar_round_trip(psi in even_strategy()) {
            let (s, p) = bilinear_invariants(&psi);
            prop_assume!(s.hypot(p) > 1e-6);
            let parts = polar_decompose(&psi).unwrap();
            prop_assert!((recompose(&parts) - psi).norm() < 1e-10 * psi.norm().max(1.0));
            prop_assert!((parts.rotor * parts.rotor.reverse() - Multivector::scalar(1.0)).norm() < 1e-10);
            let q = psi * psi.reverse();
            prop_assert!((q - Multivector::exp_g5(parts.beta) * parts.rho).norm() < 1e-10 * parts.rho.max(1.0));
        }

        #[test]
        fn bilinear_field_is_a_bivector(psi in even_strategy()) {
            let f = psi * Multivector::gamma2(2, 1) * psi.reverse();
            let s = psi.norm_squared().max(1.0);
            for k in [0, 1, 3, 4] {
                prop_assert!(f.grade_norm(k) < 1e-12 * s);
            }
        }

        #[test]
        fn gamma0_current_is_timelike(psi in even_strategy()) {
            let (s, p) = bilinear_invariants(&psi);
            let rho = s.hypot(p);
            prop_assume!(rho > 1e-3);
            let parts = polar_decompose(&psi).unwrap();
            let j = current_at(&psi, &AnsatzParams::new(parts.beta, 1.0), CurrentDirection::G0);
            let plain = psi * Multivector::gamma(0) * psi.reverse();
            let u = parts.rotor * Multivector::gamma(0) * parts.rotor.reverse();
            prop_assert!((plain - u * rho).norm() < 1e-9 * rho.max(1.0) * psi.norm_squared().max(1.0));
            // e^{βγ5} leaves ρ cos β · Rγ^0R̃ in grade 1
            let j1 = j.project(1);
            let expected = (rho * parts.beta.cos()).powi(2);
            prop_assert!(((j1 * j1).scalar_part() - expected).abs() < 1e-8 * (rho * rho).max(1.0) * psi.norm_squared().max(1.0));
        }

        #[test]
        fn auto_force_nullity(psi in even_strategy(), n in -2i32..=2) {
            let (s, p) = bilinear_invariants(&psi);
            prop_assume!(s.hypot(p) > 1e-3);
            let beta = polar_decompose(&psi).unwrap().beta;
            let scale = psi.norm_squared().powi(2).max(1.0);
            let f = auto_force(&psi, beta + n as f64 * PI).unwrap();
            prop_assert!(f.norm() <= 1e-10 * scale);
        }
    }
}
