//! Sensing echo at the BS and its reduction to an order-3 tensor.
//!
//! For subcarrier `n` and code block `m` the `N_R x K` echo is
//!
//! ```text
//! Y = Σ_l g_l e^{j2π f_D,l m T} e^{-j2π n Δf τ_l} a_r(θ_l) a_t(θ_l)ᵀ diag(Ξ s) C₀ᵀ + Z
//! ```
//!
//! The known code is cancelled by despreading with `conj(C₀)`, dividing each
//! transmit column by `(Ξ s)_p` and summing the columns (contraction with the
//! all-ones vector `e`), which leaves the fiber
//! `Σ_l g_l (a_tᵀ e) a_r(θ_l) e^{-j2π n Δf τ_l} e^{j2π f_D,l m T}`.
//!
//! Receiver noise enters after the cancellation as circular white Gaussian
//! noise on every tensor entry. Pushing slot noise through the division by
//! `(Ξ s)_p` instead would make it heavy-tailed: the rotated symbols come
//! arbitrarily close to zero, and the enhanced noise has unbounded variance.

use super::{
    db_to_linear, delay_vector, doppler_vector, scene_path_params, steering_vector, Scene,
};
use crate::tensor::{reconstruct_cp, ComplexTensor3, FactorMatrices};
use crate::waveform::{krst_encode, KrstCode, SymbolBlock};
use crate::{par, rng, CMatrix, Error, Result, C64};

/// Transmitted symbol blocks for every subcarrier and code block.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    pub subcarriers: usize,
    pub blocks: usize,
    /// Indexed `n + subcarriers * m`.
    pub data: Vec<SymbolBlock>,
}

impl SymbolGrid {
    /// Uniformly random constellation symbols from the seeded stream of each `(n, m)`.
    pub fn random(code: &KrstCode, subcarriers: usize, blocks: usize, seed: u64) -> Self {
        let data = (0..subcarriers * blocks)
            .map(|idx| {
                let (n, m) = (idx % subcarriers, idx / subcarriers);
                let mut g = rng::stream(seed, &[rng::tags::SYMBOLS, n as u64, m as u64]);
                SymbolBlock::random(&mut g, code.constellation(), code.n_tx, m).1
            })
            .collect();
        Self {
            subcarriers,
            blocks,
            data,
        }
    }

    pub fn get(&self, n: usize, m: usize) -> &SymbolBlock {
        &self.data[n + self.subcarriers * m]
    }
}

/// Ground-truth CP factors of the noiseless sensing tensor.
///
/// `A[:, l] = g_l (a_t(θ_l)ᵀ e) a_r(θ_l)`, `B[:, l] = a_de(τ_l)`, `C[:, l] = f(f_D,l)`.
pub fn scene_factors(scene: &Scene) -> Result<FactorMatrices> {
    let paths = scene_path_params(scene)?;
    let lambda = scene.wavelength();
    let r = paths.len();
    let mut a = CMatrix::zeros(scene.n_rx, r);
    let mut b = CMatrix::zeros(scene.subcarrier_count, r);
    let mut c = CMatrix::zeros(scene.block_count, r);
    for (l, p) in paths.iter().enumerate() {
        let at_e: C64 = steering_vector(p.aoa, scene.n_tx, scene.antenna_spacing, lambda).sum();
        a.set_column(
            l,
            &(steering_vector(p.aoa, scene.n_rx, scene.antenna_spacing, lambda) * (p.gain * at_e)),
        );
        b.set_column(
            l,
            &delay_vector(p.delay, scene.subcarrier_count, scene.subcarrier_spacing),
        );
        c.set_column(
            l,
            &doppler_vector(p.doppler, scene.block_count, scene.symbol_duration),
        );
    }
    FactorMatrices::new(a, b, c)
}

/// Per-entry noise variance of the cancelled tensor for a given SNR, the
/// reference being the mean power of the noiseless entries.
pub fn noise_variance_for_snr(signal_power: f64, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        signal_power / db_to_linear(snr_db)
    }
}

/// Simulates the echo for every `(n, m)`, cancels the code and returns the
/// `N_R x N_c x M` tensor. Noise draws come from a stream keyed by
/// `(seed, n, m)`, so the output does not depend on scheduling.
pub fn sense_tensor(
    scene: &Scene,
    code: &KrstCode,
    symbols: &SymbolGrid,
    snr_db: f64,
    seed: u64,
) -> Result<ComplexTensor3> {
    if code.n_tx != scene.n_tx {
        return Err(Error::Dimension(format!(
            "code has {} antennas, scene has {}",
            code.n_tx, scene.n_tx
        )));
    }
    if symbols.subcarriers != scene.subcarrier_count || symbols.blocks != scene.block_count {
        return Err(Error::Dimension(
            "symbol grid does not match the scene's subcarriers and blocks".into(),
        ));
    }
    if snr_db.is_nan() {
        return Err(Error::Argument("snr_db is NaN".into()));
    }
    let paths = scene_path_params(scene)?;
    let lambda = scene.wavelength();
    let (n_r, n_c, n_m) = (scene.n_rx, scene.subcarrier_count, scene.block_count);

    let truth = scene_factors(scene)?;
    let signal_power = reconstruct_cp(&truth).norm_sqr() / (n_r * n_c * n_m) as f64;
    let variance = noise_variance_for_snr(signal_power, snr_db);

    let rx: Vec<_> = paths
        .iter()
        .map(|p| steering_vector(p.aoa, n_r, scene.antenna_spacing, lambda))
        .collect();
    let tx: Vec<_> = paths
        .iter()
        .map(|p| steering_vector(p.aoa, scene.n_tx, scene.antenna_spacing, lambda).transpose())
        .collect();
    let despreader = code.spreading.map(|z| z.conj());

    let fibers = par::map_indexed(n_c * n_m, |idx| -> Result<Vec<C64>> {
        let (n, m) = (idx % n_c, idx / n_c);
        let block = symbols.get(n, m);
        let x = code.rotate(&block.symbols);
        if x.iter().any(|v| v.norm() < 1e-300) {
            return Err(Error::Encoding(format!(
                "rotated symbol vanishes at subcarrier {n}, block {m}"
            )));
        }
        let encoded = krst_encode(block, code)?;
        let mut y = CMatrix::zeros(n_r, code.code_length);
        for (l, p) in paths.iter().enumerate() {
            let phase = 2.0
                * std::f64::consts::PI
                * (p.doppler * m as f64 * scene.symbol_duration
                    - n as f64 * scene.subcarrier_spacing * p.delay);
            let coef = p.gain * C64::from_polar(1.0, phase);
            let row = &tx[l] * &encoded;
            y += &rx[l] * (row * coef);
        }
        let d = &y * &despreader;
        let mut fiber: Vec<C64> = (0..n_r)
            .map(|k| (0..code.n_tx).map(|p| d[(k, p)] / x[p]).sum())
            .collect();
        if variance > 0.0 {
            let mut g = rng::stream(seed, &[rng::tags::SENSING_NOISE, n as u64, m as u64]);
            for z in fiber.iter_mut() {
                *z += rng::complex_gaussian(&mut g, variance);
            }
        }
        Ok(fiber)
    });

    let mut out = ComplexTensor3::zeros(n_r, n_c, n_m)?;
    for (idx, fiber) in fibers.into_iter().enumerate() {
        let fiber = fiber?;
        let (n, m) = (idx % n_c, idx / n_c);
        for (k, v) in fiber.into_iter().enumerate() {
            out.set(k, n, m, v);
        }
    }
    Ok(out)
}
