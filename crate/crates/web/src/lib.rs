//! WebAssembly bindings for the static demo page in `www/`.
//!
//! The plain functions are usable (and tested) on the host; the
//! `#[wasm_bindgen]` wrappers only convert errors into JS exceptions.

use neutrino_sta::fields::{beltrami_field, BeltramiParams};
use neutrino_sta::report::SpectrumDocument;
use neutrino_sta::spectrum::{fit_m, units, MassSpectrum, SpectrumParams};
use neutrino_sta::spinor::auto_force;
use neutrino_sta::sta::{Multivector, SpacetimePoint};
use wasm_bindgen::prelude::*;

/// Spectrum for flavours 0, 1, 2 whose masses add up to `sum_bound` eV, as JSON.
pub fn spectrum_json(big_n: f64, sum_bound: f64) -> Result<String, String> {
    let n_set = vec![0, 1, 2];
    let m_param = fit_m(big_n, &n_set, sum_bound, units::ALPHA).map_err(|e| e.to_string())?;
    let params = SpectrumParams { m_param, big_n, alpha: units::ALPHA, n_set };
    let spec = MassSpectrum::compute(&params).map_err(|e| e.to_string())?;
    serde_json::to_string(&SpectrumDocument::from(spec)).map_err(|e| e.to_string())
}

/// `E` on an `n × n` grid of the plane `z = const`, spanning one period
/// `2π/λ` in `x` and `y`. Row-major, three components per point.
pub fn beltrami_slice(lambda: f64, a: f64, b: f64, c: f64, z: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(lambda.is_finite() && lambda != 0.0) || n == 0 || n > 512 {
        return Err(format!("bad slice request: lambda={lambda}, n={n}"));
    }
    let field = beltrami_field(BeltramiParams { lambda_eig: lambda, a, b, c });
    let period = std::f64::consts::TAU / lambda.abs();
    let mut out = Vec::with_capacity(3 * n * n);
    for iy in 0..n {
        for ix in 0..n {
            let p = SpacetimePoint::new(0.0, period * ix as f64 / n as f64, period * iy as f64 / n as f64, z);
            out.extend(field.eval(p));
        }
    }
    Ok(out)
}

/// Magnitude of the self-force on `ψ = e^{γ⁵β/2}` as the ansatz angle `λ`
/// sweeps `[-π, π]` in `samples` steps. Returns `[λ₀, |f₀|, λ₁, |f₁|, …]`.
pub fn auto_force_curve(beta: f64, samples: usize) -> Result<Vec<f64>, String> {
    if !(2..=10_000).contains(&samples) {
        return Err(format!("samples must lie in 2..=10000, got {samples}"));
    }
    let psi = Multivector::exp_g5(0.5 * beta);
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(2 * samples);
    for i in 0..samples {
        let lambda = -pi + 2.0 * pi * i as f64 / (samples - 1) as f64;
        let f = auto_force(&psi, lambda).map_err(|e| e.to_string())?;
        out.push(lambda);
        out.push(f.norm());
    }
    Ok(out)
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(big_n: f64, sum_bound: f64) -> Result<String, JsError> {
    spectrum_json(big_n, sum_bound).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = beltramiSlice)]
pub fn beltrami_slice_js(lambda: f64, a: f64, b: f64, c: f64, z: f64, n: usize) -> Result<Vec<f64>, JsError> {
    beltrami_slice(lambda, a, b, c, z, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = autoForceCurve)]
pub fn auto_force_curve_js(beta: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    auto_force_curve(beta, samples).map_err(|e| JsError::new(&e))
}
