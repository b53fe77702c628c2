//! Quantized neutrino masses from the monopole-pair model.
//!
//! Masses are in eV. With Dirac quantization the charge ratio entering the
//! reduced mass is `𝚖g/e = (3/2α)·𝚖·n`, so every flavour `n ≤ N` gets
//!
//! `m_n = (3𝚖/2α)(N² − n²)/√(N² + n²)`.

use serde::{Deserialize, Serialize};

use crate::error::SpectrumError;

/// Physical constants used for unit conversion.
pub mod units {
    /// Fine-structure constant, CODATA 2018.
    pub const ALPHA: f64 = 7.297_352_569_3e-3;
    /// `ħc` in eV·m.
    pub const HBAR_C_EV_M: f64 = 1.973_269_804e-7;

    /// Elementary charge in Gaussian natural units, `e² = α`.
    pub fn elementary_charge(alpha: f64) -> f64 {
        alpha.sqrt()
    }

    /// Mass in eV as an inverse length in 1/m (`mc/ħ`).
    pub fn ev_to_inverse_metre(mass_ev: f64) -> f64 {
        mass_ev / HBAR_C_EV_M
    }
}

/// Monopole charge of the `n`-th Dirac quantum for charge `e_charge`
/// (`ħ = c = 1`): `g = 3n/(2e)`.
pub fn dirac_g(n: i64, e_charge: f64) -> f64 {
    1.5 * n as f64 / e_charge
}

/// `𝚖g/e` with `g = dirac_g(n, e)` and `e² = α`.
pub fn mg_over_e(n: i64, m_param: f64, alpha: f64) -> f64 {
    let e = units::elementary_charge(alpha);
    m_param * dirac_g(n, e) / e
}

/// `β` making `m₁ = K sin β + (𝚖g/e) cos β` vanish, in `(−π/2, π/2]`.
pub fn beta_for_null_m1(k: f64, mg_over_e: f64) -> f64 {
    if k == 0.0 {
        if mg_over_e == 0.0 {
            0.0
        } else {
            -mg_over_e.signum() * std::f64::consts::FRAC_PI_2
        }
    } else {
        (-mg_over_e / k).atan()
    }
}

/// `(K² − μ²)/√(K² + μ²)` with `μ = 𝚖g/e`.
pub fn m2(k: f64, mg_over_e: f64) -> Result<f64, SpectrumError> {
    let r2 = k * k + mg_over_e * mg_over_e;
    if r2 == 0.0 {
        return Err(SpectrumError::DegenerateInput);
    }
    Ok((k * k - mg_over_e * mg_over_e) / r2.sqrt())
}

fn default_alpha() -> f64 {
    units::ALPHA
}

fn default_n_set() -> Vec<u32> {
    vec![0, 1, 2]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumParams {
    /// Mass scale `𝚖` in eV.
    pub m_param: f64,
    /// `K = 3𝚖N/2α`.
    #[serde(rename = "N")]
    pub big_n: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_n_set")]
    pub n_set: Vec<u32>,
}

impl SpectrumParams {
    pub fn new(m_param: f64, big_n: f64, n_set: Vec<u32>) -> Result<Self, SpectrumError> {
        let p = Self { m_param, big_n, alpha: units::ALPHA, n_set };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SpectrumError> {
        if !(self.big_n >= 0.0 && self.big_n.is_finite()) {
            return Err(SpectrumError::InvalidParameter(format!("N must be a finite non-negative number, got {}", self.big_n)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(SpectrumError::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.m_param >= 0.0 && self.m_param.is_finite()) {
            return Err(SpectrumError::InvalidParameter(format!("m_param must be non-negative, got {}", self.m_param)));
        }
        if self.n_set.is_empty() {
            return Err(SpectrumError::EmptySet);
        }
        if let Some(&n) = self.n_set.iter().find(|&&n| n as f64 > self.big_n) {
            return Err(SpectrumError::NegativeMass { n: n as i64, big_n: self.big_n });
        }
        Ok(())
    }

    /// `K = 3𝚖N/2α`.
    pub fn k(&self) -> f64 {
        1.5 * self.m_param * self.big_n / self.alpha
    }
}

fn shape(n: f64, big_n: f64) -> f64 {
    let r2 = big_n * big_n + n * n;
    if r2 == 0.0 {
        0.0
    } else {
        (big_n * big_n - n * n) / r2.sqrt()
    }
}

/// Mass of flavour `n` in eV.
pub fn mass_n(n: i64, p: &SpectrumParams) -> Result<f64, SpectrumError> {
    if n as f64 > p.big_n || n < 0 {
        return Err(SpectrumError::NegativeMass { n, big_n: p.big_n });
    }
    Ok(1.5 * p.m_param / p.alpha * shape(n as f64, p.big_n))
}

/// Mass scale `𝚖` for which the flavour masses add up to `sum_target`.
pub fn fit_m(big_n: f64, n_set: &[u32], sum_target: f64, alpha: f64) -> Result<f64, SpectrumError> {
    if n_set.is_empty() {
        return Err(SpectrumError::EmptySet);
    }
    if !(sum_target >= 0.0 && sum_target.is_finite()) {
        return Err(SpectrumError::InvalidParameter(format!("sum bound must be non-negative, got {sum_target}")));
    }
    let total: f64 = n_set.iter().map(|&n| shape(n as f64, big_n)).sum();
    if !(total > 0.0) {
        return Err(SpectrumError::InvalidParameter(format!(
            "flavour set {n_set:?} with N = {big_n} has no positive total mass"
        )));
    }
    Ok(sum_target * (2.0 * alpha / 3.0) / total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlavourMass {
    pub n: u32,
    pub mass_ev: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquaredDifference {
    pub i: u32,
    pub j: u32,
    /// `m_i² − m_j²` in eV².
    pub value_ev2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassSpectrum {
    pub params: SpectrumParams,
    pub masses: Vec<FlavourMass>,
    pub sum: f64,
    pub sq_diffs: Vec<SquaredDifference>,
}

impl MassSpectrum {
    pub fn compute(params: &SpectrumParams) -> Result<Self, SpectrumError> {
        params.validate()?;
        let masses = params
            .n_set
            .iter()
            .map(|&n| mass_n(n as i64, params).map(|mass_ev| FlavourMass { n, mass_ev }))
            .collect::<Result<Vec<_>, _>>()?;
        let sum = masses.iter().map(|m| m.mass_ev).sum();
        let sq_diffs = mass_squared_diffs(&masses);
        Ok(Self { params: params.clone(), masses, sum, sq_diffs })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mass_ev,mass_inverse_m\n");
        for m in &self.masses {
            out.push_str(&format!("{},{:e},{:e}\n", m.n, m.mass_ev, units::ev_to_inverse_metre(m.mass_ev)));
        }
        out
    }
}

/// `m_i² − m_j²` for every pair `i < j` in list order.
pub fn mass_squared_diffs(masses: &[FlavourMass]) -> Vec<SquaredDifference> {
    let mut out = Vec::new();
    for (a, x) in masses.iter().enumerate() {
        for y in &masses[a + 1..] {
            out.push(SquaredDifference { i: x.n, j: y.n, value_ev2: x.mass_ev * x.mass_ev - y.mass_ev * y.mass_ev });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn dirac_charge() {
        let e = units::elementary_charge(units::ALPHA);
        assert_eq!(dirac_g(0, e), 0.0);
        assert_eq!(dirac_g(-3, e), -dirac_g(3, e));
        let m = 2.0e-4;
        assert!(rel(mg_over_e(1, m, units::ALPHA), 1.5 * m / units::ALPHA) < 1e-14);
    }

    #[test]
    fn null_m1_angle() {
        assert_eq!(beta_for_null_m1(1.0, 0.0), 0.0);
        let b = beta_for_null_m1(1.0, 1.0);
        assert!((b + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((b.sin() + b.cos()).abs() < 1e-15);
        assert_eq!(m2(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(m2(2.5, 0.0).unwrap(), 2.5);
        assert_eq!(m2(0.0, 0.0), Err(SpectrumError::DegenerateInput));
        assert_eq!(beta_for_null_m1(0.0, 2.0), -std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn flavour_masses_and_fit() {
        let p = SpectrumParams::new(1.97e-4, 3.0, vec![0, 1, 2]).unwrap();
        let s = MassSpectrum::compute(&p).unwrap();
        assert!((s.masses[0].mass_ev - 0.12).abs() < 0.005);
        assert!((s.masses[1].mass_ev - 0.10).abs() < 0.005);
        assert!((s.masses[2].mass_ev - 0.056).abs() < 0.0005);
        assert_eq!(mass_n(3, &p).unwrap(), 0.0);
        assert!(matches!(mass_n(4, &p), Err(SpectrumError::NegativeMass { n: 4, .. })));

        let m = fit_m(3.0, &[0, 1, 2], 0.28, units::ALPHA).unwrap();
        assert!((m - 1.97e-4).abs() < 2e-6);
        assert_eq!(fit_m(3.0, &[0, 1, 2], 0.0, units::ALPHA).unwrap(), 0.0);
        assert!(rel(fit_m(3.0, &[0, 1, 2], 0.56, units::ALPHA).unwrap(), 2.0 * m) < 1e-15);
        assert_eq!(fit_m(3.0, &[], 0.28, units::ALPHA), Err(SpectrumError::EmptySet));

        let fitted = MassSpectrum::compute(&SpectrumParams::new(m, 3.0, vec![0, 1, 2]).unwrap()).unwrap();
        assert!(rel(fitted.sum, 0.28) < 1e-12);
        let (lo, hi) = fitted.masses.iter().fold((f64::INFINITY, 0.0f64), |(l, h), x| (l.min(x.mass_ev), h.max(x.mass_ev)));
        assert!(hi / lo < 2.2);
        assert!(lo < 0.056 * 1.05);
    }

    #[test]
    fn squared_differences_of_rounded_masses() {
        let ms = [0.12, 0.10, 0.056].iter().enumerate().map(|(n, &mass_ev)| FlavourMass { n: n as u32, mass_ev }).collect::<Vec<_>>();
        let d = mass_squared_diffs(&ms);
        let expect = [(0, 1, 4.4e-3), (0, 2, 1.1264e-2), (1, 2, 6.864e-3)];
        assert_eq!(d.len(), 3);
        for (got, (i, j, v)) in d.iter().zip(expect) {
            assert_eq!((got.i, got.j), (i, j));
            assert!((got.value_ev2 - v).abs() < 1e-15);
        }
    }

    #[test]
    fn params_json_defaults() {
        let p: SpectrumParams = serde_json::from_str(r#"{"m_param": 1e-4, "N": 3}"#).unwrap();
        assert_eq!(p.alpha, units::ALPHA);
        assert_eq!(p.n_set, vec![0, 1, 2]);
        assert!(SpectrumParams::new(1e-4, 1.5, vec![0, 2]).is_err());
        let csv = MassSpectrum::compute(&p).unwrap().to_csv();
        assert_eq!(csv.lines().count(), 4);
    }

    proptest! {
        #[test]
        fn closed_form_equals_reduced_mass(m in 1e-6f64..1e-2, big_n in 0.5f64..10.0, frac in 0.0f64..1.0) {
            let n = (frac * big_n).floor() as i64;
            let p = SpectrumParams::new(m, big_n, vec![n as u32]).unwrap();
            let k = p.k();
            let mu = mg_over_e(n, m, p.alpha);
            let direct = mass_n(n, &p).unwrap();
            prop_assert!((direct - m2(k, mu).unwrap()).abs() <= 1e-12 * direct.abs().max(k * 1e-12));
        }

        #[test]
        fn null_m1_reduction(k in 1e-3f64..50.0, mu in -50.0f64..50.0) {
            let b = beta_for_null_m1(k, mu);
            let (s, c) = b.sin_cos();
            let scale = k.abs() + mu.abs();
            prop_assert!((k * s + mu * c).abs() < 1e-14 * scale);
            let m2_direct = k * c + mu * s;
            let m2_closed = m2(k, mu).unwrap();
            prop_assert!((m2_direct - m2_closed).abs() < 1e-12 * m2_closed.abs().max(1e-12 * scale));
        }

        #[test]
        fn monotone_and_homogeneous(m in 1e-6f64..1e-2, big_n in 1.0f64..12.0, lambda in 0.1f64..10.0) {
            let p = SpectrumParams::new(m, big_n, vec![0]).unwrap();
            let scaled = SpectrumParams { m_param: m * lambda, ..p.clone() };
            let top = big_n.floor() as i64;
            let mut last = f64::INFINITY;
            for n in 0..=top {
                let v = mass_n(n, &p).unwrap();
                prop_assert!(v <= last && v >= 0.0);
                last = v;
                prop_assert!(rel(mass_n(n, &scaled).unwrap(), lambda * v) < 1e-12 || v == 0.0);
            }
        }

        #[test]
        fn fit_saturates_the_sum(big_n in 2.0f64..10.0, target in 0.01f64..2.0) {
            let set: Vec<u32> = (0..=(big_n.floor() as u32 - 1)).collect();
            let m = fit_m(big_n, &set, target, units::ALPHA).unwrap();
            let s = MassSpectrum::compute(&SpectrumParams::new(m, big_n, set).unwrap()).unwrap();
            prop_assert!(rel(s.sum, target) < 1e-12);
        }
    }
}
