//! Regularized alternating least squares for complex CP decomposition.
//!
//! Each sweep solves, in order,
//!
//! ```text
//! A <- argmin ||Y(1) - Â (C ⊙ B)^T||² + λ ||A - Â||²
//! B <- argmin ||Y(2) - B̂ (C ⊙ A)^T||² + λ ||B - B̂||²
//! C <- argmin ||Y(3) - Ĉ (B ⊙ A)^T||² + λ ||C - Ĉ||²
//! ```
//!
//! in closed form: `Â = (Y(1) conj(C ⊙ B) + λ A) (G + λ I)^-1` with the
//! Khatri-Rao Gram `G = (CᵀC̄) ∘ (BᵀB̄)`. The right-hand side is formed as a
//! matricized-tensor-times-Khatri-Rao product directly on the tensor, so the
//! Khatri-Rao matrix is never materialized.
//!
//! Since every subproblem can keep the previous factor at zero proximal cost,
//! the plain residual `||Y - [[A,B,C]]||²` can only go down across
//! substeps; the solver records it after every sweep. After each sweep the
//! iterate is also extrapolated along its last update, and the jump is kept
//! only when it lowers the residual, so the history stays monotone.
//!
//! The first restart starts from a generalized-eigenvalue (GEVD) estimate of
//! the factors, which is exact on noiseless data. Later restarts start from
//! independent complex Gaussian draws. Nearly collinear Doppler columns make
//! randomly started ALS crawl, and the algebraic start avoids that.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{matricize, reconstruct_cp, ComplexTensor3, FactorMatrices};
use crate::{par, rng, CMatrix, Error, Result, C64};

/// Solver settings. `lambda = None` selects `1e-3 * ||T||_F / sqrt(IJK)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CpSolverConfig {
    pub rank: usize,
    pub lambda: Option<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for CpSolverConfig {
    fn default() -> Self {
        Self {
            rank: 1,
            lambda: None,
            tolerance: 1e-8,
            max_iterations: 500,
            restarts: 3,
            rng_seed: 0,
        }
    }
}

impl CpSolverConfig {
    pub fn with_rank(rank: usize) -> Self {
        Self {
            rank,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::Argument("rank must be at least 1".into()));
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Argument(format!("lambda must be positive, got {l}")));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Argument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Argument("max_iterations must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Argument("restarts must be at least 1".into()));
        }
        Ok(())
    }

    /// The regularization weight actually used for `t`.
    pub fn effective_lambda(&self, t: &ComplexTensor3) -> f64 {
        self.lambda.unwrap_or_else(|| {
            let (i, j, k) = t.dims();
            1e-3 * t.frobenius_norm() / ((i * j * k) as f64).sqrt()
        })
    }
}

/// Outcome of [`cp_rals`] for the best restart.
#[derive(Debug, Clone)]
pub struct CpResult {
    pub factors: FactorMatrices,
    /// Final relative fit `||T - [[A,B,C]]||_F / ||T||_F`.
    pub fit: f64,
    /// Squared residual before the first sweep and after every sweep.
    pub objective_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the restart that won.
    pub restart: usize,
    pub lambda: f64,
    /// Final fit of every restart, in restart order.
    pub restart_fits: Vec<f64>,
}

/// Fits a rank-`cfg.rank` CP model to `t`, keeping the best of `cfg.restarts` seeded runs.
pub fn cp_rals(t: &ComplexTensor3, cfg: &CpSolverConfig) -> Result<CpResult> {
    cfg.validate()?;
    if !t.is_finite() {
        return Err(Error::Data("tensor contains non-finite entries".into()));
    }
    let (ni, nj, nk) = t.dims();
    let min_dim = ni.min(nj).min(nk);
    if cfg.rank > min_dim {
        return Err(Error::Argument(format!(
            "rank {} exceeds the smallest unfolding row dimension {min_dim}",
            cfg.rank
        )));
    }
    let norm_sqr = t.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::Data("cannot decompose an all-zero tensor".into()));
    }
    let lambda = cfg.effective_lambda(t);

    let runs = par::map_indexed(cfg.restarts, |restart| {
        run_once(t, cfg, lambda, restart, norm_sqr)
    });
    let restart_fits: Vec<f64> = runs.iter().map(|r| r.fit).collect();
    // lowest fit wins, ties go to the earliest restart
    let best = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.fit.total_cmp(&b.fit).then(ia.cmp(ib)))
        .map(|(_, r)| r)
        .expect("restarts >= 1");
    Ok(CpResult {
        restart_fits,
        ..best
    })
}

/// Relative fit treated as an exact decomposition in double precision.
const EXACT_FIT: f64 = 1e-10;
const STEP_GROWTH: f64 = 1.25;
const MIN_STEP: f64 = 0.25;
const MAX_STEP: f64 = 8.0;

fn run_once(
    t: &ComplexTensor3,
    cfg: &CpSolverConfig,
    lambda: f64,
    restart: usize,
    norm_sqr: f64,
) -> CpResult {
    let (ni, nj, nk) = t.dims();
    let r = cfg.rank;
    let mut g = rng::stream(cfg.rng_seed, &[rng::tags::CP_INIT, restart as u64]);
    let mut draw =
        |rows: usize| CMatrix::from_fn(rows, r, |_, _| rng::complex_gaussian(&mut g, 1.0));
    let (mut a, mut b, mut c) = match (restart == 0).then(|| gevd_init(t, r, lambda)).flatten() {
        Some(init) => init,
        None => (draw(ni), draw(nj), draw(nk)),
    };

    let exact_residual = |a: &CMatrix, b: &CMatrix, c: &CMatrix| -> f64 {
        let f = FactorMatrices {
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
        };
        let model = reconstruct_cp(&f);
        t.data()
            .iter()
            .zip(model.data())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum()
    };

    let mut history = vec![exact_residual(&a, &b, &c)];
    let mut fit = (history[0] / norm_sqr).sqrt();
    let mut converged = false;
    let mut iterations = 0;
    let mut previous: Option<(CMatrix, CMatrix, CMatrix)> = None;
    let mut step = 1.0;

    for _ in 0..cfg.max_iterations {
        iterations += 1;
        a = solve_subproblem(&mttkrp(t, 1, &a, &b, &c), &gram(&c, &b), lambda, &a);
        b = solve_subproblem(&mttkrp(t, 2, &a, &b, &c), &gram(&c, &a), lambda, &b);
        let v = mttkrp(t, 3, &a, &b, &c);
        c = solve_subproblem(&v, &gram(&b, &a), lambda, &c);

        // ||T - M||² = ||T||² - 2 Re<M, T> + ||M||², reusing the mode-3
        // product; near an exact fit the expansion cancels badly, so small
        // residuals are recomputed entry by entry.
        let inner: C64 = c.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        let model_sqr = model_norm_sqr(&a, &b, &c);
        let mut res = (norm_sqr - 2.0 * inner.re + model_sqr).max(0.0);
        balance(&mut a, &mut b, &mut c);
        if res < 1e-6 * norm_sqr {
            res = exact_residual(&a, &b, &c);
        }

        // Extrapolate along the last update and keep the jump only when it
        // lowers the residual; this shortens the long flat stretches ALS hits
        // on nearly collinear components.
        if let Some((pa, pb, pc)) = &previous {
            let jump = |x: &CMatrix, p: &CMatrix| x + (x - p) * C64::new(step, 0.0);
            let (ea, eb, ec) = (jump(&a, pa), jump(&b, pb), jump(&c, pc));
            let ev = mttkrp(t, 3, &ea, &eb, &ec);
            let e_inner: C64 = ec.iter().zip(ev.iter()).map(|(x, y)| x.conj() * y).sum();
            let mut e_res = (norm_sqr - 2.0 * e_inner.re + model_norm_sqr(&ea, &eb, &ec)).max(0.0);
            if e_res < 1e-6 * norm_sqr {
                e_res = exact_residual(&ea, &eb, &ec);
            }
            if e_res < res {
                (a, b, c, res) = (ea, eb, ec, e_res);
                balance(&mut a, &mut b, &mut c);
                step = (step * STEP_GROWTH).min(MAX_STEP);
            } else {
                step = (step * 0.5).max(MIN_STEP);
            }
        }
        previous = Some((a.clone(), b.clone(), c.clone()));
        history.push(res);
        let new_fit = (res / norm_sqr).sqrt();
        let change = if fit > 0.0 {
            (fit - new_fit).abs() / fit
        } else {
            0.0
        };
        fit = new_fit;
        if change < cfg.tolerance || fit < EXACT_FIT {
            converged = true;
            break;
        }
    }

    CpResult {
        factors: FactorMatrices { a, b, c },
        fit,
        objective_history: history,
        iterations,
        converged,
        restart,
        lambda,
        restart_fits: Vec::new(),
    }
}

/// Algebraic starting point from a generalized eigenvalue problem between two
/// mode-3 slice combinations of the compressed tensor. Exact for a noiseless
/// tensor whose first two factors have full column rank; `None` when the
/// tensor has a single frontal slice or the pencil is singular.
fn gevd_init(t: &ComplexTensor3, r: usize, lambda: f64) -> Option<(CMatrix, CMatrix, CMatrix)> {
    let (ni, nj, nk) = t.dims();
    if nk < 2 {
        return None;
    }
    let u1 = dominant_subspace(&matricize(t, 1).ok()?, r);
    let u2 = dominant_subspace(&matricize(t, 2).ok()?, r);
    let u2c = u2.map(|z| z.conj());
    let data = t.data();
    // G_k = U1ᴴ T_k conj(U2) = (U1ᴴA) diag(c_k) (U2ᴴB)ᵀ
    let slices: Vec<CMatrix> = (0..nk)
        .map(|k| {
            let tk = CMatrix::from_column_slice(ni, nj, &data[ni * nj * k..ni * nj * (k + 1)]);
            u1.adjoint() * tk * &u2c
        })
        .collect();
    let m3 = CMatrix::from_fn(nk, r * r, |k, col| slices[k][(col % r, col / r)]);
    let w = dominant_subspace(&m3, 2.min(nk));
    if w.ncols() < 2 {
        return None;
    }
    let combine = |q: usize| {
        slices
            .iter()
            .enumerate()
            .fold(CMatrix::zeros(r, r), |acc, (k, gk)| {
                acc + gk * w[(k, q)].conj()
            })
    };
    let (s1, s2) = (combine(0), combine(1));
    // S1 S2⁻¹ = Ã D Ã⁻¹
    let pencil = s2.transpose().lu().solve(&s1.transpose())?.transpose();
    let a_core = eigenvectors(pencil);
    let b_core = a_core.clone().lu().solve(&s2)?.transpose();
    if !a_core
        .iter()
        .chain(b_core.iter())
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        return None;
    }
    let a = u1 * a_core;
    let b = u2 * b_core;
    let zeros = CMatrix::zeros(nk, r);
    let c = solve_subproblem(&mttkrp(t, 3, &a, &b, &zeros), &gram(&b, &a), lambda, &zeros);
    Some((a, b, c))
}

/// The `r` dominant left singular vectors of `m`.
fn dominant_subspace(m: &CMatrix, r: usize) -> CMatrix {
    let eig = (m * m.adjoint()).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    CMatrix::from_fn(m.nrows(), r.min(order.len()), |i, q| {
        eig.eigenvectors[(i, order[q])]
    })
}

/// Eigenvectors of a general complex matrix, from its Schur form.
fn eigenvectors(m: CMatrix) -> CMatrix {
    let n = m.nrows();
    let (q, tri) = m.schur().unpack();
    let mut x = CMatrix::zeros(n, n);
    for i in 0..n {
        x[(i, i)] = C64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let sum: C64 = (j + 1..=i).map(|l| tri[(j, l)] * x[(l, i)]).sum();
            let mut den = tri[(j, j)] - tri[(i, i)];
            if den.norm() < 1e-14 * tri[(i, i)].norm().max(1.0) {
                den = C64::new(1e-14, 0.0);
            }
            x[(j, i)] = -sum / den;
        }
    }
    let mut v = q * x;
    for mut col in v.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col.unscale_mut(n);
        }
    }
    v
}

/// `||[[A, B, C]]||²` from the factor Grams.
fn model_norm_sqr(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> f64 {
    let g = (a.adjoint() * a)
        .component_mul(&(b.adjoint() * b))
        .component_mul(&(c.adjoint() * c));
    g.iter().map(|z| z.re).sum()
}

/// `(Xᵀ X̄) ∘ (Yᵀ Ȳ)`, the conjugated Gram of `X ⊙ Y`.
fn gram(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let gx = x.transpose() * x.map(|z| z.conj());
    let gy = y.transpose() * y.map(|z| z.conj());
    gx.component_mul(&gy)
}

/// Solves `X (G + λI) = rhs + λ prev` for X.
fn solve_subproblem(rhs: &CMatrix, g: &CMatrix, lambda: f64, prev: &CMatrix) -> CMatrix {
    let r = g.nrows();
    let lhs = g + CMatrix::identity(r, r) * C64::new(lambda, 0.0);
    let rhs = rhs + prev * C64::new(lambda, 0.0);
    // lhs is Hermitian positive definite, so X = rhs lhs^-1 <=> lhs Xᴴ = rhsᴴ
    match lhs.clone().cholesky() {
        Some(ch) => ch.solve(&rhs.adjoint()).adjoint(),
        None => {
            let pinv = lhs
                .pseudo_inverse(1e-12)
                .unwrap_or_else(|_| DMatrix::zeros(r, r));
            rhs * pinv
        }
    }
}

/// Matricized tensor times conjugated Khatri-Rao product for `mode`.
fn mttkrp(t: &ComplexTensor3, mode: u8, a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    let (ni, nj, nk) = t.dims();
    let r = a.ncols();
    let data = t.data();
    match mode {
        1 => {
            let mut out = CMatrix::zeros(ni, r);
            for k in 0..nk {
                for j in 0..nj {
                    let fiber = &data[ni * (j + nj * k)..ni * (j + nj * k + 1)];
                    for q in 0..r {
                        let w = (b[(j, q)] * c[(k, q)]).conj();
                        let mut col = out.column_mut(q);
                        for (o, x) in col.iter_mut().zip(fiber) {
                            *o += x * w;
                        }
                    }
                }
            }
            out
        }
        _ => {
            let rows = if mode == 2 { nj } else { nk };
            let mut out = CMatrix::zeros(rows, r);
            for k in 0..nk {
                for j in 0..nj {
                    let fiber = &data[ni * (j + nj * k)..ni * (j + nj * k + 1)];
                    for q in 0..r {
                        let dot: C64 = fiber
                            .iter()
                            .zip(a.column(q).iter())
                            .map(|(x, y)| x * y.conj())
                            .sum();
                        if mode == 2 {
                            out[(j, q)] += dot * c[(k, q)].conj();
                        } else {
                            out[(k, q)] += dot * b[(j, q)].conj();
                        }
                    }
                }
            }
            out
        }
    }
}

/// Rescales each component so its three columns share the same norm.
fn balance(a: &mut CMatrix, b: &mut CMatrix, c: &mut CMatrix) {
    for q in 0..a.ncols() {
        let (na, nb, nc) = (a.column(q).norm(), b.column(q).norm(), c.column(q).norm());
        if na == 0.0 || nb == 0.0 || nc == 0.0 {
            continue;
        }
        let target = (na * nb * nc).cbrt();
        a.column_mut(q).scale_mut(target / na);
        b.column_mut(q).scale_mut(target / nb);
        c.column_mut(q).scale_mut(target / nc);
    }
}

/// `|xᴴ y| / (||x|| ||y||)`, or 0 when either vector vanishes.
pub fn congruence<'a>(
    x: impl IntoIterator<Item = &'a C64>,
    y: impl IntoIterator<Item = &'a C64>,
) -> f64 {
    let (mut dot, mut nx, mut ny) = (C64::new(0.0, 0.0), 0.0, 0.0);
    for (a, b) in x.into_iter().zip(y) {
        dot += a.conj() * b;
        nx += a.norm_sqr();
        ny += b.norm_sqr();
    }
    if nx == 0.0 || ny == 0.0 {
        0.0
    } else {
        dot.norm() / (nx.sqrt() * ny.sqrt())
    }
}

/// Greedy column matching: `perm[r]` is the estimated column paired with true column `r`.
///
/// Pairs are scored by the product of the three per-mode congruences, which
/// ignores the scale and phase ambiguity of each component.
pub fn align_columns(estimate: &FactorMatrices, truth: &FactorMatrices) -> Result<Vec<usize>> {
    if estimate.rank() != truth.rank() || estimate.dims() != truth.dims() {
        return Err(Error::Dimension("estimate and truth shapes differ".into()));
    }
    let r = truth.rank();
    let mut scores = Vec::with_capacity(r * r);
    for e in 0..r {
        for t in 0..r {
            let s = congruence(estimate.a.column(e).iter(), truth.a.column(t).iter())
                * congruence(estimate.b.column(e).iter(), truth.b.column(t).iter())
                * congruence(estimate.c.column(e).iter(), truth.c.column(t).iter());
            scores.push((s, e, t));
        }
    }
    scores.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut perm = vec![usize::MAX; r];
    let mut used = vec![false; r];
    for (_, e, t) in scores {
        if perm[t] == usize::MAX && !used[e] {
            perm[t] = e;
            used[e] = true;
        }
    }
    Ok(perm)
}

/// Per-column `[A, B, C]` congruences after [`align_columns`], in truth column order.
pub fn factor_congruence(
    estimate: &FactorMatrices,
    truth: &FactorMatrices,
) -> Result<Vec<[f64; 3]>> {
    let perm = align_columns(estimate, truth)?;
    let e = estimate.permuted(&perm);
    Ok((0..truth.rank())
        .map(|q| {
            [
                congruence(e.a.column(q).iter(), truth.a.column(q).iter()),
                congruence(e.b.column(q).iter(), truth.b.column(q).iter()),
                congruence(e.c.column(q).iter(), truth.c.column(q).iter()),
            ]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::reconstruct_cp;
    use rand::Rng;

    fn random_factor<R: Rng + ?Sized>(g: &mut R, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| rng::complex_gaussian(g, 1.0))
    }

    fn unit_modulus_factor(rows: usize, freqs: &[f64]) -> CMatrix {
        CMatrix::from_fn(rows, freqs.len(), |i, q| {
            C64::from_polar(1.0, freqs[q] * i as f64)
        })
    }

    #[test]
    fn rank_one_noiseless_recovery() {
        let f = FactorMatrices::new(
            unit_modulus_factor(6, &[0.7]),
            unit_modulus_factor(5, &[-1.3]),
            unit_modulus_factor(4, &[0.4]),
        )
        .unwrap();
        let t = reconstruct_cp(&f);
        let res = cp_rals(&t, &CpSolverConfig::with_rank(1)).unwrap();
        for c in factor_congruence(&res.factors, &f).unwrap() {
            assert!(c.iter().all(|&x| x > 0.999), "{c:?}");
        }
        assert!(res.fit < 1e-8);
    }

    #[test]
    fn objective_never_increases() {
        let mut g = rng::stream(5, &[]);
        let f = FactorMatrices::new(
            random_factor(&mut g, 5, 3),
            random_factor(&mut g, 6, 3),
            random_factor(&mut g, 4, 3),
        )
        .unwrap();
        let mut t = reconstruct_cp(&f);
        for z in t.data_mut() {
            *z += rng::complex_gaussian(&mut g, 0.01);
        }
        for seed in 0..5 {
            let cfg = CpSolverConfig {
                rank: 3,
                rng_seed: seed,
                restarts: 1,
                max_iterations: 200,
                ..Default::default()
            };
            let res = cp_rals(&t, &cfg).unwrap();
            for w in res.objective_history.windows(2) {
                assert!(
                    w[1] <= w[0] * (1.0 + 1e-12) + 1e-24,
                    "seed {seed}: {} -> {}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn rank_above_smallest_dimension_rejected() {
        let t = ComplexTensor3::from_fn((4, 4, 2), |i, j, k| C64::new((i + j + k) as f64, 0.0))
            .unwrap();
        assert!(matches!(
            cp_rals(&t, &CpSolverConfig::with_rank(3)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn zero_tensor_rejected() {
        let t = ComplexTensor3::zeros(3, 3, 3).unwrap();
        assert!(matches!(
            cp_rals(&t, &CpSolverConfig::with_rank(1)),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn non_finite_tensor_rejected() {
        let mut t = ComplexTensor3::from_fn((3, 3, 3), |_, _, _| C64::new(1.0, 0.0)).unwrap();
        t.set(1, 1, 1, C64::new(f64::INFINITY, 0.0));
        assert!(matches!(
            cp_rals(&t, &CpSolverConfig::with_rank(1)),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn config_validation() {
        let t = ComplexTensor3::from_fn((3, 3, 3), |_, _, _| C64::new(1.0, 0.0)).unwrap();
        let bad = [
            CpSolverConfig {
                lambda: Some(0.0),
                ..Default::default()
            },
            CpSolverConfig {
                tolerance: 0.0,
                ..Default::default()
            },
            CpSolverConfig {
                restarts: 0,
                ..Default::default()
            },
            CpSolverConfig {
                rank: 0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(cp_rals(&t, &cfg), Err(Error::Argument(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn default_lambda_formula() {
        let t = ComplexTensor3::from_fn((2, 2, 2), |_, _, _| C64::new(2.0, 0.0)).unwrap();
        let l = CpSolverConfig::default().effective_lambda(&t);
        // ||T|| = sqrt(8 * 4), sqrt(IJK) = sqrt(8)
        assert!((l - 2e-3).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_result() {
        let mut g = rng::stream(77, &[]);
        let t = ComplexTensor3::from_fn((4, 5, 3), |_, _, _| rng::complex_gaussian(&mut g, 1.0))
            .unwrap();
        let cfg = CpSolverConfig {
            rank: 2,
            max_iterations: 50,
            ..Default::default()
        };
        let a = cp_rals(&t, &cfg).unwrap();
        let b = cp_rals(&t, &cfg).unwrap();
        assert_eq!(a.factors, b.factors);
        assert_eq!(a.objective_history, b.objective_history);
    }

    #[test]
    fn congruence_ignores_scale_and_phase() {
        let x = [C64::new(1.0, 2.0), C64::new(-0.5, 0.3)];
        let s = C64::from_polar(3.0, 1.1);
        let y: Vec<C64> = x.iter().map(|z| z * s).collect();
        assert!((congruence(x.iter(), y.iter()) - 1.0).abs() < 1e-14);
        assert_eq!(
            congruence([C64::new(0.0, 0.0)].iter(), [C64::new(1.0, 0.0)].iter()),
            0.0
        );
    }
}
