//! Complex order-3 tensors and CP (CANDECOMP/PARAFAC) algebra.
//!
//! Storage is column-major: entry `(i, j, k)` lives at `i + I*(j + J*k)`.
//! Unfoldings follow the Kolda-Bader convention, so for an exact CP tensor
//! `[[A, B, C]]`
//!
//! * mode 1: `Y(1) = A (C ⊙ B)^T`, shape `I x JK`
//! * mode 2: `Y(2) = B (C ⊙ A)^T`, shape `J x IK`
//! * mode 3: `Y(3) = C (B ⊙ A)^T`, shape `K x IJ`

mod cp;
mod mdl;

pub use cp::{align_columns, congruence, cp_rals, factor_congruence, CpResult, CpSolverConfig};
pub use mdl::{estimate_num_paths_mdl, mdl_scores};

use crate::{CMatrix, Error, Result, C64};

/// Dense order-3 complex tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTensor3 {
    dims: (usize, usize, usize),
    data: Vec<C64>,
}

impl ComplexTensor3 {
    pub fn zeros(i: usize, j: usize, k: usize) -> Result<Self> {
        if i == 0 || j == 0 || k == 0 {
            return Err(Error::Dimension(format!(
                "tensor dims must be positive, got ({i},{j},{k})"
            )));
        }
        Ok(Self {
            dims: (i, j, k),
            data: vec![C64::new(0.0, 0.0); i * j * k],
        })
    }

    /// Wraps column-major `data`; rejects wrong lengths and non-finite entries.
    pub fn from_vec(dims: (usize, usize, usize), data: Vec<C64>) -> Result<Self> {
        let (i, j, k) = dims;
        if i == 0 || j == 0 || k == 0 {
            return Err(Error::Dimension(format!(
                "tensor dims must be positive, got {dims:?}"
            )));
        }
        if data.len() != i * j * k {
            return Err(Error::Dimension(format!(
                "data length {} does not match dims {:?}",
                data.len(),
                dims
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Data("tensor contains non-finite entries".into()));
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(
        dims: (usize, usize, usize),
        mut f: impl FnMut(usize, usize, usize) -> C64,
    ) -> Result<Self> {
        let mut t = Self::zeros(dims.0, dims.1, dims.2)?;
        for k in 0..dims.2 {
            for j in 0..dims.1 {
                for i in 0..dims.0 {
                    let idx = t.index(i, j, k);
                    t.data[idx] = f(i, j, k);
                }
            }
        }
        Ok(t)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims.0 * (j + self.dims.1 * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[self.index(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        let idx = self.index(i, j, k);
        self.data[idx] = v;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&mut self, s: C64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dims, other.dims);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The triple `(A, B, C)` of a rank-R CP model.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrices {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
}

impl FactorMatrices {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix) -> Result<Self> {
        let r = a.ncols();
        if r == 0 || b.ncols() != r || c.ncols() != r {
            return Err(Error::Dimension(format!(
                "factor column counts differ: {}, {}, {}",
                a.ncols(),
                b.ncols(),
                c.ncols()
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn rank(&self) -> usize {
        self.a.ncols()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.nrows(), self.b.nrows(), self.c.nrows())
    }

    /// Reorders the columns of all three factors: new column `r` is old column `perm[r]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let pick = |m: &CMatrix| CMatrix::from_fn(m.nrows(), perm.len(), |i, r| m[(i, perm[r])]);
        Self {
            a: pick(&self.a),
            b: pick(&self.b),
            c: pick(&self.c),
        }
    }
}

/// Column-wise Kronecker product: column `r` is `kron(a[:, r], b[:, r])`.
pub fn khatri_rao(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.ncols() != b.ncols() {
        return Err(Error::Dimension(format!(
            "khatri_rao column mismatch: {} vs {}",
            a.ncols(),
            b.ncols()
        )));
    }
    let (ia, jb) = (a.nrows(), b.nrows());
    Ok(CMatrix::from_fn(ia * jb, a.ncols(), |row, r| {
        a[(row / jb, r)] * b[(row % jb, r)]
    }))
}

/// Mode-n unfolding (`mode` in 1..=3).
pub fn matricize(t: &ComplexTensor3, mode: u8) -> Result<CMatrix> {
    let (ni, nj, nk) = t.dims();
    let m = match mode {
        1 => CMatrix::from_fn(ni, nj * nk, |i, col| t.get(i, col % nj, col / nj)),
        2 => CMatrix::from_fn(nj, ni * nk, |j, col| t.get(col % ni, j, col / ni)),
        3 => CMatrix::from_fn(nk, ni * nj, |k, col| t.get(col % ni, col / ni, k)),
        _ => {
            return Err(Error::Argument(format!(
                "mode must be 1, 2 or 3, got {mode}"
            )))
        }
    };
    Ok(m)
}

/// Inverse of [`matricize`].
pub fn fold(m: &CMatrix, mode: u8, dims: (usize, usize, usize)) -> Result<ComplexTensor3> {
    let (ni, nj, nk) = dims;
    let expected = match mode {
        1 => (ni, nj * nk),
        2 => (nj, ni * nk),
        3 => (nk, ni * nj),
        _ => {
            return Err(Error::Argument(format!(
                "mode must be 1, 2 or 3, got {mode}"
            )))
        }
    };
    if m.shape() != expected {
        return Err(Error::Dimension(format!(
            "unfolding shape {:?} does not match dims {:?} in mode {mode}",
            m.shape(),
            dims
        )));
    }
    ComplexTensor3::from_fn(dims, |i, j, k| match mode {
        1 => m[(i, j + nj * k)],
        2 => m[(j, i + ni * k)],
        _ => m[(k, i + ni * j)],
    })
}

/// Builds `[[A, B, C]]`: entry `(i,j,k) = sum_r A(i,r) B(j,r) C(k,r)`.
pub fn reconstruct_cp(f: &FactorMatrices) -> ComplexTensor3 {
    let (ni, nj, nk) = f.dims();
    let r = f.rank();
    let mut data = vec![C64::new(0.0, 0.0); ni * nj * nk];
    for k in 0..nk {
        for j in 0..nj {
            let base = ni * (j + nj * k);
            for q in 0..r {
                let bc = f.b[(j, q)] * f.c[(k, q)];
                let col = f.a.column(q);
                for (slot, a) in data[base..base + ni].iter_mut().zip(col.iter()) {
                    *slot += a * bc;
                }
            }
        }
    }
    ComplexTensor3 {
        dims: (ni, nj, nk),
        data,
    }
}
