//! Scene geometry, array responses and the two propagation models: the
//! Rician downlink to the user and the multipath echo seen by the base
//! station's sensing receiver.

mod link;
mod scene;
mod sensing;

pub use link::{comm_receive, rician_channel, rician_los_component};
pub use scene::{scene_path_params, PathParams, Scene, Target};
pub use sensing::{noise_variance_for_snr, scene_factors, sense_tensor, SymbolGrid};

use crate::{CVector, C64};

/// ULA response: element `k` is `exp(j 2π (d_r/λ) k sin θ)`.
pub fn steering_vector(theta: f64, n: usize, spacing: f64, wavelength: f64) -> CVector {
    let step = 2.0 * std::f64::consts::PI * spacing / wavelength * theta.sin();
    CVector::from_fn(n, |k, _| C64::from_polar(1.0, step * k as f64))
}

/// Delay signature over `n` subcarriers: entry `n` is `exp(-j 2π n Δf τ)`.
pub fn delay_vector(delay: f64, n: usize, subcarrier_spacing: f64) -> CVector {
    let step = -2.0 * std::f64::consts::PI * subcarrier_spacing * delay;
    CVector::from_fn(n, |i, _| C64::from_polar(1.0, step * i as f64))
}

/// Doppler signature over `m` blocks: entry `m` is `exp(j 2π f_D m T)`.
pub fn doppler_vector(doppler: f64, m: usize, symbol_duration: f64) -> CVector {
    let step = 2.0 * std::f64::consts::PI * doppler * symbol_duration;
    CVector::from_fn(m, |i, _| C64::from_polar(1.0, step * i as f64))
}

/// Snr in dB to a linear power ratio; `+inf` stays infinite.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
