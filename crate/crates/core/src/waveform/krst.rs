//! Khatri-Rao space-time coding.
//!
//! A block of `N_T` symbols `s` is rotated by `Ξ` and spread over `K` slots by
//! a semi-unitary `C₀` (`C₀ᴴ C₀ = I`): the transmitted matrix is
//! `diag(Ξ s) C₀ᵀ`, one row per transmit antenna. Right-multiplying a received
//! block by `conj(C₀)` undoes the spreading.

use std::f64::consts::PI;

use super::constellation::Constellation;
use crate::{CMatrix, Error, Result, C64};

/// Joint ML detection is used while the search space stays below this size.
const ML_SEARCH_LIMIT: usize = 4096;

/// Code parameters and the derived rotation and spreading matrices.
#[derive(Debug, Clone)]
pub struct KrstCode {
    pub n_tx: usize,
    pub code_length: usize,
    pub modulation_order: usize,
    /// `Ξ`, unitary, `N_T x N_T`.
    pub rotation: CMatrix,
    /// `C₀`, `K x N_T` with orthonormal columns.
    pub spreading: CMatrix,
    constellation: Constellation,
    /// `(labels, Ξ s)` for every symbol vector when the search space is small.
    candidates: Option<Vec<(Vec<usize>, Vec<C64>)>>,
}

impl KrstCode {
    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// `Ξ s`.
    pub fn rotate(&self, symbols: &[C64]) -> Vec<C64> {
        (0..self.n_tx)
            .map(|p| {
                (0..self.n_tx)
                    .map(|q| self.rotation[(p, q)] * symbols[q])
                    .sum()
            })
            .collect()
    }
}

/// One block of `N_T` constellation symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    pub symbols: Vec<C64>,
    pub block_index: usize,
}

impl SymbolBlock {
    pub fn new(symbols: Vec<C64>, block_index: usize) -> Self {
        Self {
            symbols,
            block_index,
        }
    }

    /// Builds a block from constellation labels.
    pub fn from_labels(
        labels: &[usize],
        constellation: &Constellation,
        block_index: usize,
    ) -> Self {
        Self {
            symbols: labels.iter().map(|&l| constellation.point(l)).collect(),
            block_index,
        }
    }

    /// Draws uniformly random labels and returns them with the block.
    pub fn random<R: rand::Rng + ?Sized>(
        rng: &mut R,
        constellation: &Constellation,
        n_tx: usize,
        block_index: usize,
    ) -> (Vec<usize>, Self) {
        let labels: Vec<usize> = (0..n_tx)
            .map(|_| rng.random_range(0..constellation.order()))
            .collect();
        let block = Self::from_labels(&labels, constellation, block_index);
        (labels, block)
    }

    /// Nearest-point labels of the symbols.
    pub fn labels(&self, constellation: &Constellation) -> Vec<usize> {
        self.symbols
            .iter()
            .map(|&z| constellation.nearest(z))
            .collect()
    }
}

/// Builds `Ξ = (1/√N_T) F diag(1, e^{jπ/2N_T}, …, e^{jπ(N_T-1)/2N_T})` with
/// `F[p,q] = e^{+j2πpq/N_T}` and `C₀` as the first `N_T` columns of the
/// unitary `K`-point DFT matrix.
pub fn build_krst_code(
    n_tx: usize,
    code_length: usize,
    modulation_order: usize,
) -> Result<KrstCode> {
    if n_tx == 0 {
        return Err(Error::Unsupported("n_tx must be at least 1".into()));
    }
    if code_length < n_tx {
        return Err(Error::Unsupported(format!(
            "code length {code_length} is shorter than the {n_tx} transmit antennas; C0 cannot be semi-unitary"
        )));
    }
    let constellation = Constellation::from_order(modulation_order)?;
    let nt = n_tx as f64;
    let rotation = CMatrix::from_fn(n_tx, n_tx, |p, q| {
        let idft = C64::from_polar(1.0, 2.0 * PI * (p * q) as f64 / nt);
        let phase = C64::from_polar(1.0, PI * q as f64 / (2.0 * nt));
        idft * phase / nt.sqrt()
    });
    let k = code_length as f64;
    let spreading = CMatrix::from_fn(code_length, n_tx, |row, p| {
        C64::from_polar(1.0 / k.sqrt(), -2.0 * PI * (row * p) as f64 / k)
    });
    let mut code = KrstCode {
        n_tx,
        code_length,
        modulation_order,
        rotation,
        spreading,
        constellation,
        candidates: None,
    };
    let search = modulation_order
        .checked_pow(n_tx as u32)
        .filter(|&s| s <= ML_SEARCH_LIMIT);
    if let Some(size) = search {
        let mut list = Vec::with_capacity(size);
        for idx in 0..size {
            let mut rest = idx;
            let labels: Vec<usize> = (0..n_tx)
                .map(|_| {
                    let l = rest % modulation_order;
                    rest /= modulation_order;
                    l
                })
                .collect();
            let s: Vec<C64> = labels
                .iter()
                .map(|&l| code.constellation.point(l))
                .collect();
            let x = code.rotate(&s);
            list.push((labels, x));
        }
        code.candidates = Some(list);
    }
    Ok(code)
}

/// Coded block `diag(Ξ s) C₀ᵀ`, shape `N_T x K`.
pub fn krst_encode(block: &SymbolBlock, code: &KrstCode) -> Result<CMatrix> {
    if block.symbols.len() != code.n_tx {
        return Err(Error::Dimension(format!(
            "symbol block has {} entries, code expects {}",
            block.symbols.len(),
            code.n_tx
        )));
    }
    let x = code.rotate(&block.symbols);
    Ok(CMatrix::from_fn(code.n_tx, code.code_length, |p, k| {
        x[p] * code.spreading[(k, p)]
    }))
}

/// Removes the spreading: `Y conj(C₀)`, shape `rows x N_T`.
pub fn despread(y: &CMatrix, code: &KrstCode) -> Result<CMatrix> {
    if y.ncols() != code.code_length {
        return Err(Error::Dimension(format!(
            "received block has {} slots, code length is {}",
            y.ncols(),
            code.code_length
        )));
    }
    Ok(y * code.spreading.map(|z| z.conj()))
}

fn check_finite(m: &CMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Data(format!("{what} contains non-finite entries")))
    }
}

/// Known-CSI decoding of one received block `Y = H diag(Ξ s) C₀ᵀ + Z`.
///
/// After despreading, column `p` is `h_p x_p + noise` with `x = Ξ s`. Small
/// search spaces (`φ^N_T <= 4096`) are decoded by exhaustive maximum
/// likelihood over `s`; larger ones use per-antenna matched filtering, `Ξᴴ`
/// de-rotation and symbol-wise slicing. Without a channel estimate the
/// function fails; see [`krst_decode_blind`] for the pilot-aided variant.
pub fn krst_decode(y: &CMatrix, h: Option<&CMatrix>, code: &KrstCode) -> Result<SymbolBlock> {
    let h =
        h.ok_or_else(|| Error::Unsupported("decoding without CSI needs krst_decode_blind".into()))?;
    check_finite(y, "received block")?;
    check_finite(h, "channel matrix")?;
    if h.nrows() != y.nrows() || h.ncols() != code.n_tx {
        return Err(Error::Dimension(format!(
            "channel is {}x{}, expected {}x{}",
            h.nrows(),
            h.ncols(),
            y.nrows(),
            code.n_tx
        )));
    }
    let d = despread(y, code)?;
    // matched-filter statistics z_p = h_pᴴ d_p and gains g_p = ||h_p||²
    let z: Vec<C64> = (0..code.n_tx)
        .map(|p| h.column(p).dotc(&d.column(p)))
        .collect();
    let g: Vec<f64> = (0..code.n_tx).map(|p| h.column(p).norm_squared()).collect();

    let symbols = match &code.candidates {
        Some(list) => {
            let metric = |x: &[C64]| -> f64 {
                x.iter()
                    .zip(&z)
                    .zip(&g)
                    .map(|((xp, zp), gp)| gp * xp.norm_sqr() - 2.0 * (xp.conj() * zp).re)
                    .sum()
            };
            let best = list
                .iter()
                .min_by(|a, b| metric(&a.1).total_cmp(&metric(&b.1)))
                .expect("non-empty candidate list");
            best.0
                .iter()
                .map(|&l| code.constellation.point(l))
                .collect()
        }
        None => {
            if g.contains(&0.0) {
                return Err(Error::Estimation("channel has an all-zero column".into()));
            }
            let x: Vec<C64> = z.iter().zip(&g).map(|(zp, gp)| zp / gp).collect();
            let s = code.rotation.adjoint() * nalgebra::DVector::from_vec(x);
            s.iter()
                .map(|&v| code.constellation.point(code.constellation.nearest(v)))
                .collect()
        }
    };
    Ok(SymbolBlock::new(symbols, 0))
}

/// Pilot-aided blind decoding of consecutive blocks sharing one channel.
///
/// For antenna `p` the despread columns of all blocks form the rank-1 matrix
/// `h_p [x_p(0) … x_p(M-1)]`. Its leading singular pair gives `h_p` up to a
/// complex scale, which the known pilot block `blocks[0]` fixes. The remaining
/// blocks are then decoded with the estimated channel. Returns the decoded
/// blocks `1..M`.
pub fn krst_decode_blind(
    blocks: &[CMatrix],
    pilot: &SymbolBlock,
    code: &KrstCode,
) -> Result<Vec<SymbolBlock>> {
    if blocks.len() < 2 {
        return Err(Error::Argument(
            "blind decoding needs a pilot block and at least one data block".into(),
        ));
    }
    if pilot.symbols.len() != code.n_tx {
        return Err(Error::Dimension(
            "pilot block length differs from n_tx".into(),
        ));
    }
    let rows = blocks[0].nrows();
    let despread_blocks = blocks
        .iter()
        .map(|y| {
            check_finite(y, "received block")?;
            if y.nrows() != rows {
                return Err(Error::Dimension(
                    "received blocks differ in row count".into(),
                ));
            }
            despread(y, code)
        })
        .collect::<Result<Vec<_>>>()?;
    let pilot_x = code.rotate(&pilot.symbols);
    let mut h_est = CMatrix::zeros(rows, code.n_tx);
    for p in 0..code.n_tx {
        let w = CMatrix::from_fn(rows, blocks.len(), |u, m| despread_blocks[m][(u, p)]);
        let svd = w.svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::Estimation("SVD failed during blind decoding".into())),
        };
        let (lead, sigma) = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, s)| (i, *s))
            .unwrap_or((0, 0.0));
        // column m of w ≈ u σ v_t[lead, m]
        let pilot_coeff = v_t[(lead, 0)] * sigma;
        if pilot_coeff.norm() == 0.0 || pilot_x[p].norm() == 0.0 {
            return Err(Error::Estimation(
                "pilot carries no energy on an antenna".into(),
            ));
        }
        let scale = pilot_coeff / pilot_x[p];
        h_est.set_column(p, &(u.column(lead) * scale));
    }
    blocks[1..]
        .iter()
        .enumerate()
        .map(|(m, y)| {
            let mut b = krst_decode(y, Some(&h_est), code)?;
            b.block_index = m + 1;
            Ok(b)
        })
        .collect()
}

/// Bits per code length: `(N_T / K) log2(φ)`.
pub fn transmission_rate(code: &KrstCode) -> f64 {
    code.n_tx as f64 / code.code_length as f64 * (code.modulation_order as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn degenerate_sizes() {
        let code = build_krst_code(1, 1, 4).unwrap();
        assert!((code.rotation[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((code.spreading[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_matches_formula_for_two_antennas() {
        let code = build_krst_code(2, 2, 4).unwrap();
        // (1/√2) [[1, 1], [1, -1]] diag(1, e^{jπ/4})
        let w = C64::from_polar(1.0, PI / 4.0);
        let s = 1.0 / 2f64.sqrt();
        let expected = [[c(s, 0.0), w * s], [c(s, 0.0), -w * s]];
        for p in 0..2 {
            for q in 0..2 {
                assert!(
                    (code.rotation[(p, q)] - expected[p][q]).norm() < 1e-15,
                    "{p},{q}"
                );
            }
        }
    }

    #[test]
    fn semi_unitary_spreading() {
        for (nt, k) in [
            (1, 1),
            (1, 4),
            (2, 2),
            (2, 4),
            (3, 5),
            (4, 8),
            (16, 16),
            (16, 32),
        ] {
            let code = build_krst_code(nt, k, 4).unwrap();
            let gram = code.spreading.adjoint() * &code.spreading;
            assert!(
                (gram - CMatrix::identity(nt, nt)).camax() < 1e-12,
                "({nt},{k})"
            );
            let rr = code.rotation.adjoint() * &code.rotation;
            assert!((rr - CMatrix::identity(nt, nt)).camax() < 1e-12);
        }
    }

    #[test]
    fn short_code_rejected() {
        assert!(matches!(
            build_krst_code(4, 2, 4),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            build_krst_code(2, 2, 8),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn encode_examples() {
        let code = build_krst_code(1, 1, 4).unwrap();
        let x = krst_encode(&SymbolBlock::new(vec![c(1.0, 0.0)], 0), &code).unwrap();
        assert!((x[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);

        let code = build_krst_code(2, 2, 4).unwrap();
        let s = [c(1.0, 1.0) / 2f64.sqrt(), c(-1.0, 1.0) / 2f64.sqrt()];
        let x = krst_encode(&SymbolBlock::new(s.to_vec(), 0), &code).unwrap();
        // hand computation: x = Ξ s, then row p is x_p [C₀(0,p), C₀(1,p)]
        let r = 1.0 / 2f64.sqrt();
        let w = C64::from_polar(1.0, PI / 4.0);
        let xi_s = [r * (s[0] + w * s[1]), r * (s[0] - w * s[1])];
        let c0 = [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]];
        for p in 0..2 {
            for k in 0..2 {
                assert!((x[(p, k)] - xi_s[p] * c0[k][p]).norm() < 1e-14);
            }
        }
        assert!(matches!(
            krst_encode(&SymbolBlock::new(vec![c(1.0, 0.0)], 0), &code),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn rows_have_constant_modulus_pattern() {
        let code = build_krst_code(3, 6, 16).unwrap();
        let mut g = rng::stream(1, &[]);
        let (_, block) = SymbolBlock::random(&mut g, code.constellation(), 3, 0);
        let x = krst_encode(&block, &code).unwrap();
        let xs = code.rotate(&block.symbols);
        for p in 0..3 {
            for k in 0..6 {
                assert!((x[(p, k)].norm() - xs[p].norm() / 6f64.sqrt()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn encode_despread_round_trip() {
        let code = build_krst_code(2, 4, 16).unwrap();
        let mut g = rng::stream(2, &[]);
        let (_, block) = SymbolBlock::random(&mut g, code.constellation(), 2, 0);
        let d = despread(&krst_encode(&block, &code).unwrap(), &code).unwrap();
        let xs = code.rotate(&block.symbols);
        for p in 0..2 {
            for q in 0..2 {
                let expected = if p == q { xs[p] } else { c(0.0, 0.0) };
                assert!((d[(p, q)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn despreading_gains_code_length_in_snr() {
        // Per slot each antenna carries |x_p|²/K; despreading restores |x_p|²
        // while white slot noise keeps its variance, i.e. relative to the
        // signal the noise variance shrinks by K.
        for k in [2usize, 4, 8] {
            let code = build_krst_code(2, k, 4).unwrap();
            let mut g = rng::stream(40, &[k as u64]);
            let (mut slot_sig, mut post_sig) = (0.0, 0.0);
            for _ in 0..200 {
                let (_, block) = SymbolBlock::random(&mut g, code.constellation(), 2, 0);
                let x = krst_encode(&block, &code).unwrap();
                slot_sig += x.norm_squared() / x.len() as f64;
                let d = despread(&x, &code).unwrap();
                post_sig += d.diagonal().norm_squared() / 2.0;
            }
            let rows = 100_000 / k;
            let z = CMatrix::from_fn(rows, k, |_, _| rng::complex_gaussian(&mut g, 1.0));
            let slot_noise = z.norm_squared() / z.len() as f64;
            let dz = despread(&z, &code).unwrap();
            let post_noise = dz.norm_squared() / dz.len() as f64;
            let gain = (post_sig / post_noise) / (slot_sig / slot_noise);
            assert!((gain / k as f64 - 1.0).abs() < 0.05, "K={k}: gain {gain}");
        }
    }

    #[test]
    fn rotation_preserves_norm() {
        let code = build_krst_code(4, 4, 64).unwrap();
        let mut g = rng::stream(3, &[]);
        for _ in 0..20 {
            let (_, b) = SymbolBlock::random(&mut g, code.constellation(), 4, 0);
            let n1: f64 = b.symbols.iter().map(|z| z.norm_sqr()).sum();
            let n2: f64 = code.rotate(&b.symbols).iter().map(|z| z.norm_sqr()).sum();
            assert!((n1 - n2).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_known_csi_is_exact_and_missing_csi_unsupported() {
        let code = build_krst_code(2, 2, 16).unwrap();
        let mut g = rng::stream(4, &[]);
        let h = CMatrix::from_fn(2, 2, |_, _| rng::complex_gaussian(&mut g, 1.0));
        let (_, block) = SymbolBlock::random(&mut g, code.constellation(), 2, 0);
        let y = &h * krst_encode(&block, &code).unwrap();
        let dec = krst_decode(&y, Some(&h), &code).unwrap();
        assert_eq!(
            dec.labels(code.constellation()),
            block.labels(code.constellation())
        );
        assert!(matches!(
            krst_decode(&y, None, &code),
            Err(Error::Unsupported(_))
        ));
        let mut bad = y.clone();
        bad[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(
            krst_decode(&bad, Some(&h), &code),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn linear_path_for_large_search_space() {
        let code = build_krst_code(4, 4, 64).unwrap();
        assert!(code.candidates.is_none());
        let mut g = rng::stream(5, &[]);
        let h = CMatrix::from_fn(2, 4, |_, _| rng::complex_gaussian(&mut g, 1.0));
        let (labels, block) = SymbolBlock::random(&mut g, code.constellation(), 4, 0);
        let y = &h * krst_encode(&block, &code).unwrap();
        let dec = krst_decode(&y, Some(&h), &code).unwrap();
        assert_eq!(dec.labels(code.constellation()), labels);
    }

    #[test]
    fn blind_decoding_noiseless() {
        let code = build_krst_code(2, 2, 4).unwrap();
        let mut g = rng::stream(6, &[]);
        let h = CMatrix::from_fn(3, 2, |_, _| rng::complex_gaussian(&mut g, 1.0));
        let blocks: Vec<(Vec<usize>, SymbolBlock)> = (0..6)
            .map(|m| SymbolBlock::random(&mut g, code.constellation(), 2, m))
            .collect();
        let ys: Vec<CMatrix> = blocks
            .iter()
            .map(|(_, b)| &h * krst_encode(b, &code).unwrap())
            .collect();
        let dec = krst_decode_blind(&ys, &blocks[0].1, &code).unwrap();
        assert_eq!(dec.len(), 5);
        for (d, (labels, _)) in dec.iter().zip(&blocks[1..]) {
            assert_eq!(&d.labels(code.constellation()), labels);
        }
    }

    #[test]
    fn rates() {
        assert_eq!(transmission_rate(&build_krst_code(2, 2, 4).unwrap()), 2.0);
        assert_eq!(transmission_rate(&build_krst_code(2, 4, 4).unwrap()), 1.0);
        assert_eq!(transmission_rate(&build_krst_code(2, 2, 16).unwrap()), 4.0);
    }
}
