//! Downlink to the user: Rician MIMO channel and AWGN.

use super::{db_to_linear, steering_vector, Scene};
use crate::{rng, CMatrix, Error, Result, C64};

/// Deterministic line-of-sight part `a_ue(θ_ue) a_bs(θ_bs)ᵀ`, unit-modulus entries.
pub fn rician_los_component(scene: &Scene) -> CMatrix {
    let lambda = scene.wavelength();
    let ue = steering_vector(scene.ue_los_aoa, scene.n_ue, scene.antenna_spacing, lambda);
    let bs = steering_vector(scene.bs_los_aod, scene.n_tx, scene.antenna_spacing, lambda);
    &ue * bs.transpose()
}

/// Draws `H` (`N_U x N_T`) with entries `√(βκ/(1+κ)) h_Ri + √(β/(1+κ)) h_Ra`, `h_Ra ~ CN(0,1)`.
///
/// `κ = +inf` gives the purely deterministic channel.
pub fn rician_channel(scene: &Scene, beta: f64, kappa: f64, seed: u64) -> Result<CMatrix> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Argument(format!(
            "path loss beta must be positive, got {beta}"
        )));
    }
    if !(kappa >= 0.0) {
        return Err(Error::Argument(format!(
            "Rician factor must be non-negative, got {kappa}"
        )));
    }
    let (los_w, nlos_w) = if kappa.is_infinite() {
        (beta.sqrt(), 0.0)
    } else {
        (
            (beta * kappa / (1.0 + kappa)).sqrt(),
            (beta / (1.0 + kappa)).sqrt(),
        )
    };
    let los = rician_los_component(scene);
    let mut g = rng::stream(seed, &[rng::tags::CHANNEL]);
    Ok(CMatrix::from_fn(scene.n_ue, scene.n_tx, |u, p| {
        let scatter = if nlos_w > 0.0 {
            rng::complex_gaussian(&mut g, 1.0)
        } else {
            C64::new(0.0, 0.0)
        };
        los[(u, p)] * los_w + scatter * nlos_w
    }))
}

/// `H X + Z` for one coded block.
///
/// The noise variance is set from the per-element signal power expected for
/// a unit-average-gain channel, `||X||²_F / K`, so that fading still shows
/// up in the error rate. `snr_db = +inf` disables the noise.
pub fn comm_receive(h: &CMatrix, encoded: &CMatrix, snr_db: f64, seed: u64) -> Result<CMatrix> {
    if h.ncols() != encoded.nrows() {
        return Err(Error::Dimension(format!(
            "channel has {} columns, coded block has {} rows",
            h.ncols(),
            encoded.nrows()
        )));
    }
    let mut y = h * encoded;
    if snr_db == f64::INFINITY {
        return Ok(y);
    }
    if snr_db.is_nan() {
        return Err(Error::Argument("snr_db is NaN".into()));
    }
    let reference = encoded.norm_squared() / encoded.ncols() as f64;
    let variance = reference / db_to_linear(snr_db);
    let mut g = rng::stream(seed, &[rng::tags::COMM_NOISE]);
    for z in y.iter_mut() {
        *z += rng::complex_gaussian(&mut g, variance);
    }
    Ok(y)
}
