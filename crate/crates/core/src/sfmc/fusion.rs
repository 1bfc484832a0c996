use super::anchors::VirtualAnchor;
use super::dictionary::{AngleDictionary, FusionDictionaries};
use super::grid::FusionGrid;
use crate::channel::Scene;
use crate::geometry::Point2;
use crate::tensor::FactorMatrices;
use crate::{par, CMatrix, CVector, Error, Result};

/// Association is exhaustive, so the path count is capped.
const MAX_PATHS: usize = 6;

/// Fused matched-filter output over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionProfile {
    /// Angle fusion `E`, length `Ω²`.
    pub angle: Vec<f64>,
    /// Delay fusion `J`, length `Ω²`.
    pub delay: Vec<f64>,
    /// `E + J`.
    pub combined: Vec<f64>,
    /// Index maximizing `combined` (lowest index on ties).
    pub peak: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub position: Point2,
    pub profile: FusionProfile,
    /// `assignment[l]` is the factor column matched to anchor `l`.
    pub assignment: Vec<usize>,
}

/// Raw angle profile `|âᵀ G*|` of one factor column against one dictionary.
pub fn angle_profile(column: &CVector, dict: &AngleDictionary) -> Vec<f64> {
    matched(column, &dict.matrix)
}

/// Raw delay profile `|b̂ᵀ D*|`.
pub fn delay_profile(column: &CVector, dict: &CMatrix) -> Vec<f64> {
    matched(column, dict)
}

fn matched(column: &CVector, dict: &CMatrix) -> Vec<f64> {
    dict.ad_mul(column).iter().map(|z| z.norm()).collect()
}

/// Profile divided by `‖column‖ ‖dictionary column‖`, so a perfect match scores 1.
fn normalized_match(column: &CVector, dict: &CMatrix) -> Vec<f64> {
    let scale = column.norm() * (dict.nrows() as f64).sqrt();
    if scale == 0.0 {
        return vec![0.0; dict.ncols()];
    }
    matched(column, dict)
        .into_iter()
        .map(|v| v / scale)
        .collect()
}

/// Min-max rescaling to `[0, 1]`; a flat profile maps to all zeros.
pub fn normalized_profile(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(hi > lo) {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

/// Number of cells whose min-max normalized value exceeds `threshold`.
pub fn main_lobe_cells(values: &[f64], threshold: f64) -> usize {
    normalized_profile(values)
        .into_iter()
        .filter(|v| *v > threshold)
        .count()
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Builds the dictionaries and runs [`fuse_with_dictionaries`].
pub fn fuse_and_localize(
    factors: &FactorMatrices,
    anchors: &[VirtualAnchor],
    grid: &FusionGrid,
    scene: &Scene,
) -> Result<FusionResult> {
    check_counts(factors, anchors.len())?;
    let dicts = FusionDictionaries::build(anchors, grid, scene)?;
    fuse_with_dictionaries(factors, &dicts)
}

fn check_counts(factors: &FactorMatrices, anchors: usize) -> Result<()> {
    if factors.rank() != anchors {
        return Err(Error::Argument(format!(
            "{} factor columns for {anchors} anchors",
            factors.rank()
        )));
    }
    if anchors == 0 || anchors > MAX_PATHS {
        return Err(Error::Argument(format!(
            "path count {anchors} outside 1..={MAX_PATHS}"
        )));
    }
    Ok(())
}

/// Symbol-level fusion with precomputed dictionaries.
///
/// Every (column, anchor) pair is matched once; each permutation of columns
/// onto anchors is then scored by the peak of its fused profile and the best
/// one (first in lexicographic order on ties) is kept.
pub fn fuse_with_dictionaries(
    factors: &FactorMatrices,
    dicts: &FusionDictionaries,
) -> Result<FusionResult> {
    let paths = dicts.anchors.len();
    check_counts(factors, paths)?;
    let (rows_a, rows_b, _) = factors.dims();
    if rows_a != dicts.n_rx || rows_b != dicts.n_subcarriers {
        return Err(Error::Dimension(format!(
            "factors are {rows_a}x{rows_b}, dictionaries expect {}x{}",
            dicts.n_rx, dicts.n_subcarriers
        )));
    }
    let cells = dicts.grid.len();
    let norm = 1.0 / (paths as f64).sqrt();
    // pair (column c, anchor l) at index c * paths + l
    let pairs = par::map_indexed(paths * paths, |idx| {
        let (c, l) = (idx / paths, idx % paths);
        let mut e = normalized_match(&factors.a.column(c).into_owned(), &dicts.angle[l].matrix);
        for (v, ok) in e.iter_mut().zip(&dicts.angle[l].valid) {
            if !ok {
                *v = 0.0;
            }
        }
        let j = normalized_match(&factors.b.column(c).into_owned(), &dicts.delay[l]);
        (e, j)
    });

    let fuse = |perm: &[usize]| {
        let mut e = vec![0.0; cells];
        let mut j = vec![0.0; cells];
        for (l, &c) in perm.iter().enumerate() {
            let (pe, pj) = &pairs[c * paths + l];
            for xi in 0..cells {
                e[xi] += norm * pe[xi];
                j[xi] += norm * pj[xi];
            }
        }
        let combined: Vec<f64> = e.iter().zip(&j).map(|(a, b)| a + b).collect();
        (e, j, combined)
    };

    let perms = permutations(paths);
    let scores = par::map_slice(&perms, |p| {
        let (_, _, combined) = fuse(p);
        combined.into_iter().fold(f64::NEG_INFINITY, f64::max)
    });
    let best = argmax(&scores);
    let (angle, delay, combined) = fuse(&perms[best]);
    let peak = argmax(&combined);
    Ok(FusionResult {
        position: dicts.grid.candidates[peak],
        profile: FusionProfile {
            angle,
            delay,
            combined,
            peak,
        },
        assignment: perms[best].clone(),
    })
}
