//! Model-order selection by minimum description length.
//!
//! Treats the mode-1 unfolding as `N = J*K` snapshots of an `I`-element array
//! and applies the Wax-Kailath criterion to the sample covariance eigenvalues
//! `σ_i² / N`:
//!
//! ```text
//! MDL(k) = -N (p - k) ln( geo(ℓ_{k+1..p}) / arith(ℓ_{k+1..p}) ) + ½ k (2p - k) ln N
//! ```
//!
//! Eigenvalues are floored at `1e-12 * ℓ_max` so that noiseless tensors, whose
//! trailing spectrum is pure round-off, read as a flat noise floor.

use super::{matricize, ComplexTensor3};
use crate::{Error, Result};

const EIGEN_FLOOR: f64 = 1e-12;

/// MDL score for every candidate order `k = 0..p`.
pub fn mdl_scores(t: &ComplexTensor3) -> Result<Vec<f64>> {
    let (ni, nj, nk) = t.dims();
    if ni < 2 {
        return Err(Error::Argument("MDL needs at least 2 mode-1 slices".into()));
    }
    if !t.is_finite() {
        return Err(Error::Data("tensor contains non-finite entries".into()));
    }
    if t.norm_sqr() == 0.0 {
        return Err(Error::Data(
            "cannot estimate model order of an all-zero tensor".into(),
        ));
    }
    let unfolding = matricize(t, 1)?;
    let snapshots = (nj * nk) as f64;
    let mut sv: Vec<f64> = unfolding.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let p = sv.len();
    let top = sv[0] * sv[0] / snapshots;
    let eig: Vec<f64> = sv
        .iter()
        .map(|s| (s * s / snapshots).max(top * EIGEN_FLOOR))
        .collect();

    Ok((0..p)
        .map(|k| {
            let tail = &eig[k..];
            let m = tail.len() as f64;
            let log_geo = tail.iter().map(|x| x.ln()).sum::<f64>() / m;
            let arith = tail.iter().sum::<f64>() / m;
            let likelihood = -snapshots * m * (log_geo - arith.ln());
            let penalty = 0.5 * k as f64 * (2.0 * p as f64 - k as f64) * snapshots.ln();
            likelihood + penalty
        })
        .collect())
}

/// Estimated number of propagation paths (at least 1).
pub fn estimate_num_paths_mdl(t: &ComplexTensor3) -> Result<usize> {
    let scores = mdl_scores(t)?;
    let best = scores
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(k, _)| k)
        .unwrap_or(1);
    Ok(best.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{reconstruct_cp, FactorMatrices};
    use crate::{CMatrix, C64};

    fn tones(rows: usize, freqs: &[f64]) -> CMatrix {
        CMatrix::from_fn(rows, freqs.len(), |i, q| {
            C64::from_polar(1.0, freqs[q] * i as f64)
        })
    }

    fn tensor(freqs: &[(f64, f64, f64)]) -> ComplexTensor3 {
        let fa: Vec<f64> = freqs.iter().map(|f| f.0).collect();
        let fb: Vec<f64> = freqs.iter().map(|f| f.1).collect();
        let fc: Vec<f64> = freqs.iter().map(|f| f.2).collect();
        reconstruct_cp(&FactorMatrices::new(tones(8, &fa), tones(10, &fb), tones(5, &fc)).unwrap())
    }

    #[test]
    fn noiseless_counts() {
        assert_eq!(
            estimate_num_paths_mdl(&tensor(&[(0.3, 0.2, 0.1)])).unwrap(),
            1
        );
        assert_eq!(
            estimate_num_paths_mdl(&tensor(&[(0.3, 0.2, 0.1), (1.4, -0.7, 0.9)])).unwrap(),
            2
        );
    }

    #[test]
    fn scale_invariant() {
        let t = tensor(&[(0.3, 0.2, 0.1), (1.4, -0.7, 0.9), (-2.0, 0.5, -0.4)]);
        let base = estimate_num_paths_mdl(&t).unwrap();
        for s in [C64::new(1e-6, 0.0), C64::from_polar(1e5, 2.0)] {
            let mut u = t.clone();
            u.scale(s);
            assert_eq!(estimate_num_paths_mdl(&u).unwrap(), base);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let z = ComplexTensor3::zeros(4, 3, 2).unwrap();
        assert!(matches!(estimate_num_paths_mdl(&z), Err(Error::Data(_))));
        let thin = ComplexTensor3::from_fn((1, 3, 2), |_, _, _| C64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            estimate_num_paths_mdl(&thin),
            Err(Error::Argument(_))
        ));
    }
}
