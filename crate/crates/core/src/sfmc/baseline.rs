//! Data-level comparison scheme: every path is reduced to a scalar angle
//! and delay first, each pair becomes a position fix, and the fixes are
//! averaged. Information is fused after the per-path decisions, not before.

use super::anchors::VirtualAnchor;
use crate::channel::Scene;
use crate::geometry::Point2;
use crate::tensor::FactorMatrices;
use crate::{CVector, Error, Result, C64, SPEED_OF_LIGHT};
use std::f64::consts::PI;

/// Coarse scan density in samples per vector element.
const OVERSAMPLE: usize = 16;

/// Scalar estimates extracted from one factor column pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEstimate {
    /// Principal-branch AoA in `[-π/2, π/2]`.
    pub aoa: f64,
    pub delay: f64,
    /// Normalized matched-filter peaks in `[0, 1]`.
    pub angle_quality: f64,
    pub delay_quality: f64,
    /// Component amplitude `||a|| ||b|| ||c||`.
    pub strength: f64,
}

impl PathEstimate {
    /// Fix weight: component power times the squared match qualities.
    fn weight(&self) -> f64 {
        (self.strength * self.angle_quality * self.delay_quality).powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineEstimate {
    pub position: Point2,
    /// Per-column estimates, in factor column order.
    pub paths: Vec<PathEstimate>,
    /// `assignment[l]` is the column used for anchor `l`.
    pub assignment: Vec<usize>,
    /// Per-anchor position fixes.
    pub fixes: Vec<Point2>,
}

/// `S(ω) = Σ_k conj(v_k) e^{j k ω}` and its derivative in `ω`.
fn tone(v: &CVector, omega: f64) -> (C64, C64) {
    let step = C64::from_polar(1.0, omega);
    let mut phasor = C64::new(1.0, 0.0);
    let (mut s, mut ds) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for (k, z) in v.iter().enumerate() {
        let term = z.conj() * phasor;
        s += term;
        ds += term * C64::new(0.0, k as f64);
        phasor *= step;
    }
    (s, ds)
}

/// Peak of `|S(scale * x)|` over `x ∈ [lo, hi]`: dense scan, then bisection
/// on the sign of `d|S|²/dx` around the best sample. Working on the slope
/// rather than the flat top of the peak keeps full floating-point accuracy.
fn peak_search(v: &CVector, scale: f64, lo: f64, hi: f64) -> (f64, f64) {
    let samples = OVERSAMPLE * v.len().max(1);
    let step = (hi - lo) / samples as f64;
    let mag = |x: f64| tone(v, scale * x).0.norm();
    let slope = |x: f64| {
        let (s, ds) = tone(v, scale * x);
        (s.conj() * ds).re * scale
    };
    let mut best = (lo, mag(lo));
    for i in 1..=samples {
        let x = lo + step * i as f64;
        let val = mag(x);
        if val > best.1 {
            best = (x, val);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    if slope(a) > 0.0 && slope(b) < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if slope(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let x = 0.5 * (a + b);
        let val = mag(x);
        if val >= best.1 {
            return (x, val);
        }
    }
    best
}

/// Per-column AoA and delay by matched peak search.
pub fn estimate_path_parameters(factors: &FactorMatrices, scene: &Scene) -> Vec<PathEstimate> {
    let kd = 2.0 * PI * scene.antenna_spacing / scene.wavelength();
    let tau_scale = -2.0 * PI * scene.subcarrier_spacing;
    (0..factors.rank())
        .map(|c| {
            let a = factors.a.column(c).into_owned();
            let b = factors.b.column(c).into_owned();
            // search in sin θ, where the response is a pure tone
            let (u, pa) = peak_search(&a, kd, -1.0, 1.0);
            let (tau, pb) = peak_search(&b, tau_scale, 0.0, 1.0 / scene.subcarrier_spacing);
            let norm_a = a.norm() * (a.len() as f64).sqrt();
            let norm_b = b.norm() * (b.len() as f64).sqrt();
            PathEstimate {
                aoa: u.clamp(-1.0, 1.0).asin(),
                delay: tau,
                angle_quality: if norm_a > 0.0 { pa / norm_a } else { 0.0 },
                delay_quality: if norm_b > 0.0 { pb / norm_b } else { 0.0 },
                strength: a.norm() * b.norm() * factors.c.column(c).norm(),
            }
        })
        .collect()
}

fn fix(anchor: &VirtualAnchor, aoa: f64, delay: f64) -> Point2 {
    let range = 0.5 * SPEED_OF_LIGHT * delay;
    let heading = match &anchor.reflector {
        None => aoa,
        Some(wall) => wall.reflect_angle(aoa),
    };
    anchor.position + Point2::from_polar(range, heading)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for head in 0..n {
        for tail in all_permutations(n - 1) {
            let mut p = vec![head];
            p.extend(tail.into_iter().map(|t| if t >= head { t + 1 } else { t }));
            out.push(p);
        }
    }
    out
}

/// Data-level localization.
///
/// A ULA cannot tell `θ` from `π - θ`, so both branches are tried for every
/// path; together with the column-to-anchor assignment, the combination
/// whose fixes agree best (smallest weighted spread) is kept, and the fixes
/// are fused by weighted least squares. A lone path keeps the principal
/// branch.
pub fn baseline_data_level(
    factors: &FactorMatrices,
    anchors: &[VirtualAnchor],
    scene: &Scene,
) -> Result<BaselineEstimate> {
    let paths = anchors.len();
    if factors.rank() != paths {
        return Err(Error::Argument(format!(
            "{} factor columns for {paths} anchors",
            factors.rank()
        )));
    }
    if paths == 0 || paths > 6 {
        return Err(Error::Argument(format!("path count {paths} outside 1..=6")));
    }
    let estimates = estimate_path_parameters(factors, scene);
    let usable = estimates
        .iter()
        .filter(|e| e.weight() > 0.0 && e.aoa.is_finite() && e.delay.is_finite())
        .count();
    if usable == 0 {
        return Err(Error::Estimation(
            "no factor column yields a usable angle/delay estimate".into(),
        ));
    }

    let mut best: Option<(f64, Vec<usize>, Vec<Point2>, Point2)> = None;
    for perm in all_permutations(paths) {
        for mask in 0u32..(1 << paths) {
            let mut fixes = Vec::with_capacity(paths);
            let (mut sum, mut wsum) = (Point2::default(), 0.0);
            for (l, &c) in perm.iter().enumerate() {
                let e = &estimates[c];
                let aoa = if mask >> l & 1 == 1 {
                    PI - e.aoa
                } else {
                    e.aoa
                };
                let p = fix(&anchors[l], aoa, e.delay);
                let w = e.weight();
                sum = sum + p * w;
                wsum += w;
                fixes.push(p);
            }
            if wsum <= 0.0 {
                continue;
            }
            let centre = sum * (1.0 / wsum);
            let spread: f64 = perm
                .iter()
                .zip(&fixes)
                .map(|(&c, p)| estimates[c].weight() * (p.dist(centre)).powi(2))
                .sum();
            if best.as_ref().is_none_or(|b| spread < b.0) {
                best = Some((spread, perm.clone(), fixes, centre));
            }
        }
    }
    let (_, assignment, fixes, position) =
        best.ok_or_else(|| Error::Estimation("no assignment with positive weight".into()))?;
    Ok(BaselineEstimate {
        position,
        paths: estimates,
        assignment,
        fixes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{scene_factors, scene_path_params};
    use crate::sfmc::virtual_anchors;

    #[test]
    fn peak_search_is_exact_for_a_tone() {
        let v = CVector::from_fn(12, |k, _| C64::from_polar(2.0, 0.37 * k as f64));
        let (x, val) = peak_search(&v, 1.0, -PI, PI);
        assert!((x - 0.37).abs() < 1e-12);
        assert!((val - 24.0).abs() < 1e-9);
    }

    #[test]
    fn permutations_are_complete() {
        let p = all_permutations(4);
        assert_eq!(p.len(), 24);
        assert_eq!(p[0], vec![0, 1, 2, 3]);
        let mut sorted = p.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
    }

    #[test]
    fn exact_parameters_from_truth() {
        let s = Scene::desk();
        let truth = scene_factors(&s).unwrap();
        let paths = scene_path_params(&s).unwrap();
        for (e, p) in estimate_path_parameters(&truth, &s).iter().zip(&paths) {
            assert!((e.aoa - p.aoa).abs() < 1e-9);
            assert!((e.delay - p.delay).abs() < 1e-14);
            assert!(e.angle_quality > 1.0 - 1e-9 && e.delay_quality > 1.0 - 1e-9);
        }
    }

    #[test]
    fn los_only_is_exact() {
        let s = Scene::desk().with_mpc_count(1).unwrap();
        let anchors = virtual_anchors(&s).unwrap();
        let r = baseline_data_level(&scene_factors(&s).unwrap(), &anchors, &s).unwrap();
        assert!(r.position.dist(s.target.position) < 1e-6);
    }

    #[test]
    fn multipath_recovers_target_and_assignment() {
        let s = Scene::desk();
        let anchors = virtual_anchors(&s).unwrap();
        let shuffled = scene_factors(&s).unwrap().permuted(&[3, 1, 0, 2]);
        let r = baseline_data_level(&shuffled, &anchors, &s).unwrap();
        assert!(
            r.position.dist(s.target.position) < 1e-4,
            "{:?}",
            r.position
        );
        for (l, &c) in r.assignment.iter().enumerate() {
            assert_eq!([3, 1, 0, 2][c], l);
        }
    }

    #[test]
    fn zero_factors_are_unusable() {
        let s = Scene::desk().with_mpc_count(1).unwrap();
        let anchors = virtual_anchors(&s).unwrap();
        let mut f = scene_factors(&s).unwrap();
        f.a.fill(C64::new(0.0, 0.0));
        assert!(matches!(
            baseline_data_level(&f, &anchors, &s),
            Err(Error::Estimation(_))
        ));
    }
}
