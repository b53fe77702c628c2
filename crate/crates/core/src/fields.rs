//! Electromagnetic configurations: force-free fields, transcendent currents,
//! duality-rotated free fields and Hertz-potential solutions.

use serde::{Deserialize, Serialize};

use crate::diffops::{FieldMap, VectorField3, PROBE_POINTS};
use crate::error::FieldError;
use crate::sta::{Multivector, SpacetimePoint};

/// Default proportionality `m = 𝔨 g` between the duality-rotation frequency
/// and the magnetic charge. The monopole equation `∂F = −gγ^5Fγ^0` and the
/// free-field reduction coincide for `𝔨 = 1`; the suite re-derives this.
pub const DEFAULT_KAPPA: f64 = 1.0;

/// ABC (Arnold–Beltrami–Childress) field parameters, `∇×E = λE`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeltramiParams {
    pub lambda_eig: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BeltramiParams {
    pub fn unit(lambda_eig: f64) -> Self {
        Self { lambda_eig, a: 1.0, b: 1.0, c: 1.0 }
    }
}

/// `E = (A sin λz + C cos λy, B sin λx + A cos λz, C sin λy + B cos λx)`.
pub fn beltrami_field(p: BeltramiParams) -> VectorField3 {
    let BeltramiParams { lambda_eig: l, a, b, c } = p;
    VectorField3::new(format!("beltrami(lambda={l})"), move |q| {
        [
            a * (l * q.z).sin() + c * (l * q.y).cos(),
            b * (l * q.x).sin() + a * (l * q.z).cos(),
            c * (l * q.y).sin() + b * (l * q.x).cos(),
        ]
    })
}

/// `F^∞ = Σ E_k γ^0γ^k`.
pub fn embed_electric(e: &VectorField3) -> FieldMap {
    let mut f = e.as_multivector_field();
    f = f.map(format!("F_inf[{}]", e.name()), &[2], |_, v| v);
    f
}

/// True when the field is a bivector with vanishing magnetic part at every probe point.
pub fn is_electric(f: &FieldMap, tol: f64) -> bool {
    PROBE_POINTS.iter().all(|p| {
        let v = f.eval(*p);
        match v.pauli_split() {
            Ok(s) => crate::sta::norm3(s.b) <= tol * v.norm().max(1.0),
            Err(_) => false,
        }
    })
}

/// Magnetic current `J_m = F^∞ γ^0` of a pure electric configuration.
pub fn transcendent_current(f_inf: &FieldMap) -> Result<FieldMap, FieldError> {
    if f_inf.grades().homogeneous() != Some(2) || !is_electric(f_inf, 1e-12) {
        return Err(FieldError::NotElectric(f_inf.name().to_string()));
    }
    Ok(f_inf.map(format!("J_m[{}]", f_inf.name()), &[1], |_, v| v * Multivector::gamma(0)))
}

/// Duality rotation with rest-frame frequency `m`, viewed from a frame
/// moving at speed `v` along `−z` relative to the rest frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityWave {
    pub m: f64,
    pub v: f64,
}

impl DualityWave {
    pub fn new(m: f64, v: f64) -> Result<Self, FieldError> {
        if !(v.abs() < 1.0) {
            return Err(FieldError::Superluminal(v));
        }
        if !m.is_finite() {
            return Err(FieldError::BadMass(m));
        }
        Ok(Self { m, v })
    }

    pub fn at_rest(m: f64) -> Self {
        Self { m, v: 0.0 }
    }

    fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.v * self.v).sqrt()
    }

    pub fn omega(&self) -> f64 {
        self.m * self.gamma()
    }

    pub fn k(&self) -> f64 {
        self.m * self.v * self.gamma()
    }

    /// `κ = ωγ^0 − kγ^3`, the gradient of the phase.
    pub fn kappa(&self) -> Multivector {
        Multivector::gamma(0) * self.omega() - Multivector::gamma(3) * self.k()
    }

    pub fn phase(&self, p: SpacetimePoint) -> f64 {
        self.omega() * p.t - self.k() * p.z
    }

    /// Rotor `exp(ζσ_3/2)`, `tanh ζ = v`, carrying rest-frame quantities into this frame.
    pub fn boost_rotor(&self) -> Multivector {
        let zeta = self.v.atanh();
        Multivector::scalar((zeta / 2.0).cosh()) + Multivector::sigma(3) * (zeta / 2.0).sinh()
    }

    /// Rest-frame coordinates of a point.
    pub fn to_rest(&self, p: SpacetimePoint) -> SpacetimePoint {
        let g = self.gamma();
        SpacetimePoint::new(g * (p.t - self.v * p.z), p.x, p.y, g * (p.z - self.v * p.t))
    }
}

/// `F = F^∞ e^{γ^5 m t}` in the rest frame; for `v ≠ 0` the rest-frame
/// solution is Lorentz transformed, `F(x) = R F^∞(x_rest) R̃ e^{γ^5(ωt − kz)}`.
pub fn duality_rotate(f_inf: &FieldMap, w: DualityWave) -> Result<FieldMap, FieldError> {
    f_inf.ensure_static(1e-12)?;
    let name = format!("F[{}; m={}, v={}]", f_inf.name(), w.m, w.v);
    let inner = f_inf.clone();
    if w.v == 0.0 {
        return Ok(FieldMap::new(name, &[2], move |p| inner.eval(p) * Multivector::exp_g5(w.m * p.t)));
    }
    let r = w.boost_rotor();
    let r_rev = r.reverse();
    Ok(FieldMap::new(name, &[2], move |p| {
        r * inner.eval(w.to_rest(p)) * r_rev * Multivector::exp_g5(w.phase(p))
    }))
}

/// Dispersion branch of a Hertz construction, named by the Klein-Gordon
/// equation the derotated field obeys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Phase with `ω² − k² = −m²`; `𝔉₀` obeys `∂²𝔉₀ + m²𝔉₀ = 0`.
    Bradyonic,
    /// Phase with `ω² − k² = +m²`; `𝔉₀` obeys `∂²𝔉₀ − m²𝔉₀ = 0`.
    Tachyonic,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Bradyonic => "bradyonic",
            Branch::Tachyonic => "tachyonic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `exp(m(x cosθ + y sinθ))`, `∇₂²Φ = +m²Φ`.
    Exponential,
    /// `cos(m(x cosθ + y sinθ))`, `∇₂²Φ = −m²Φ`.
    #[default]
    Plane,
    /// `J₀(m√(x²+y²))`, `∇₂²Φ = −m²Φ`.
    Bessel,
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Exponential => "exponential",
            ProfileKind::Plane => "plane",
            ProfileKind::Bessel => "bessel",
        }
    }

    fn branch(&self) -> Branch {
        match self {
            ProfileKind::Exponential => Branch::Bradyonic,
            ProfileKind::Plane | ProfileKind::Bessel => Branch::Tachyonic,
        }
    }
}

/// Transverse profile `Φ(x, y)` with its analytic derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub m: f64,
    pub theta: f64,
}

impl Profile {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.jet(x, y).0
    }

    /// `(Φ, ∇Φ, Hessian)`.
    pub fn jet(&self, x: f64, y: f64) -> (f64, [f64; 2], [[f64; 2]; 2]) {
        let m = self.m;
        let (s, c) = self.theta.sin_cos();
        let dir = [c, s];
        let outer = |a: f64| [[a * c * c, a * c * s], [a * c * s, a * s * s]];
        match self.kind {
            ProfileKind::Exponential => {
                let v = (m * (x * c + y * s)).exp();
                (v, dir.map(|d| m * d * v), outer(m * m * v))
            }
            ProfileKind::Plane => {
                let u = m * (x * c + y * s);
                let (su, cu) = u.sin_cos();
                (cu, dir.map(|d| -m * d * su), outer(-m * m * cu))
            }
            ProfileKind::Bessel => {
                let r2 = x * x + y * y;
                let z = m * r2.sqrt();
                let j0 = bessel_j0(z);
                // J1(z)/z stays regular at the axis
                let j1_over_z = bessel_j1_over_z(z);
                // f(r) = J0(mr): f'/r = −m² J1(z)/z, f'' = −m²(J0 − J1/z)
                let fp_over_r = -m * m * j1_over_z;
                let fpp = -m * m * (j0 - j1_over_z);
                let grad = [fp_over_r * x, fp_over_r * y];
                let hess = if r2 == 0.0 {
                    [[fp_over_r, 0.0], [0.0, fp_over_r]]
                } else {
                    let k = (fpp - fp_over_r) / r2;
                    [[fp_over_r + k * x * x, k * x * y], [k * x * y, fp_over_r + k * y * y]]
                };
                (j0, grad, hess)
            }
        }
    }
}

// Power series; accurate to ~1e-13 for |z| ≤ 12, the range the demos use.
fn bessel_j0(z: f64) -> f64 {
    let q = -(z * z) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn bessel_j1_over_z(z: f64) -> f64 {
    let q = -(z * z) / 4.0;
    let mut term = 0.5;
    let mut sum = 0.5;
    for k in 1..60 {
        term *= q / (k as f64 * (k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Parameters of a Hertz-potential solution
/// `Π = Φ(x,y) e^{γ^5(ωt − kz)} B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HertzParams {
    pub branch: Branch,
    pub m: f64,
    pub omega: f64,
    pub k: f64,
    pub profile: ProfileKind,
    pub theta: f64,
    pub two_form: Multivector,
}

impl HertzParams {
    pub fn new(
        branch: Branch,
        m: f64,
        omega: f64,
        k: f64,
        profile: ProfileKind,
        theta: f64,
        two_form: Multivector,
    ) -> Result<Self, FieldError> {
        let hp = Self { branch, m, omega, k, profile, theta, two_form };
        hp.validate()?;
        Ok(hp)
    }

    /// Bradyonic branch with exponential profile, `ω = √(k² − m²)`.
    pub fn bradyonic(m: f64, k: f64) -> Result<Self, FieldError> {
        let omega = (k * k - m * m).max(0.0).sqrt();
        Self::new(Branch::Bradyonic, m, omega, k, ProfileKind::Exponential, 0.0, Multivector::gamma2(1, 2))
    }

    /// Tachyonic branch with a planar profile, `ω = √(k² + m²)`.
    pub fn tachyonic(m: f64, k: f64) -> Result<Self, FieldError> {
        let omega = (k * k + m * m).sqrt();
        Self::new(Branch::Tachyonic, m, omega, k, ProfileKind::Plane, 0.0, Multivector::gamma2(1, 2))
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(FieldError::BadMass(self.m));
        }
        if self.profile.branch() != self.branch {
            return Err(FieldError::ProfileMismatch { profile: self.profile.name(), branch: self.branch.name() });
        }
        if !self.two_form.is_grade(2, 1e-14) {
            return Err(crate::error::AlgebraError::NotBivector.into());
        }
        if self.two_form.norm() == 0.0 {
            return Err(FieldError::ZeroTwoForm);
        }
        let got = self.omega * self.omega - self.k * self.k;
        let expected = match self.branch {
            Branch::Bradyonic => -self.m * self.m,
            Branch::Tachyonic => self.m * self.m,
        };
        let scale = (self.omega * self.omega).max(self.k * self.k).max(self.m * self.m).max(1.0);
        if (got - expected).abs() > 1e-9 * scale {
            return Err(FieldError::OffShell { got, expected });
        }
        Ok(())
    }

    pub fn kappa(&self) -> Multivector {
        Multivector::gamma(0) * self.omega - Multivector::gamma(3) * self.k
    }

    pub fn phase(&self, p: SpacetimePoint) -> f64 {
        self.omega * p.t - self.k * p.z
    }

    pub fn profile(&self) -> Profile {
        Profile { kind: self.profile, m: self.m, theta: self.theta }
    }
}

/// Scalar field `Φ(x, y)`.
pub fn hertz_profile(hp: &HertzParams) -> Result<FieldMap, FieldError> {
    hp.validate()?;
    let prof = hp.profile();
    Ok(FieldMap::new(format!("Phi[{}]", prof.kind.name()), &[0], move |p| {
        Multivector::scalar(prof.value(p.x, p.y))
    }))
}

/// Potential, vector potential, free field and its derotated static part.
#[derive(Clone, Debug)]
pub struct HertzChain {
    pub params: HertzParams,
    /// `Π`
    pub potential: FieldMap,
    /// `A = −δΠ`
    pub vector_potential: FieldMap,
    /// `𝔉 = dA`
    pub field: FieldMap,
    /// `𝔉₀ = 𝔉 e^{+γ^5 χ}`
    pub rest_field: FieldMap,
}

// Sign of the duality phase carried by the potential. The phase flips once
// under the odd map Π → A, so 𝔉 = 𝔉₀ e^{−γ5 χ}.
const PHASE_SIGN: f64 = 1.0;

struct Jet {
    phi: f64,
    dphi: [f64; 4],
    hess: [[f64; 4]; 4],
    dchi: [f64; 4],
    rot: Multivector,
}

impl Jet {
    fn at(hp: &HertzParams, prof: &Profile, p: SpacetimePoint) -> Self {
        let (phi, g, h) = prof.jet(p.x, p.y);
        let mut hess = [[0.0; 4]; 4];
        hess[1][1] = h[0][0];
        hess[1][2] = h[0][1];
        hess[2][1] = h[1][0];
        hess[2][2] = h[1][1];
        Jet {
            phi,
            dphi: [0.0, g[0], g[1], 0.0],
            hess,
            dchi: [hp.omega, 0.0, 0.0, -hp.k],
            rot: Multivector::exp_g5(PHASE_SIGN * hp.phase(p)),
        }
    }

    /// `∂_μ(Φ e^{sγ5χ})`
    fn first(&self, mu: usize) -> Multivector {
        (Multivector::scalar(self.dphi[mu]) + Multivector::g5() * (PHASE_SIGN * self.phi * self.dchi[mu])) * self.rot
    }

    /// `∂_ν∂_μ(Φ e^{sγ5χ})`
    fn second(&self, nu: usize, mu: usize) -> Multivector {
        let scalar = self.hess[nu][mu] - self.phi * self.dchi[mu] * self.dchi[nu];
        let pseudo = PHASE_SIGN * (self.dchi[mu] * self.dphi[nu] + self.dchi[nu] * self.dphi[mu]);
        (Multivector::scalar(scalar) + Multivector::g5() * pseudo) * self.rot
    }
}

pub fn hertz_chain(hp: &HertzParams) -> Result<HertzChain, FieldError> {
    hp.validate()?;
    let prof = hp.profile();
    let b = hp.two_form.project(2);
    let label = format!("{}:{}", hp.branch.name(), prof.kind.name());

    let params = *hp;
    let potential = FieldMap::new(format!("Pi[{label}]"), &[2], move |p| {
        let jet = Jet::at(&params, &prof, p);
        Multivector::scalar(jet.phi) * jet.rot * b
    });

    let vector_potential = FieldMap::new(format!("A[{label}]"), &[1], move |p| {
        let jet = Jet::at(&params, &prof, p);
        (0..4).map(|mu| Multivector::gamma(mu).contract_left(&(jet.first(mu) * b))).sum()
    });

    let field_at = move |p: SpacetimePoint| -> Multivector {
        let jet = Jet::at(&params, &prof, p);
        (0..4)
            .map(|nu| {
                let d_nu_a: Multivector =
                    (0..4).map(|mu| Multivector::gamma(mu).contract_left(&(jet.second(nu, mu) * b))).sum();
                Multivector::gamma(nu).wedge(&d_nu_a)
            })
            .sum()
    };
    let field = FieldMap::new(format!("F[{label}]"), &[2], field_at);
    let rest_field = FieldMap::new(format!("F0[{label}]"), &[2], move |p| {
        field_at(p) * Multivector::exp_g5(params.phase(p))
    });

    Ok(HertzChain { params, potential, vector_potential, field, rest_field })
}
