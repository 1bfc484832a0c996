use crate::geometry::Point2;
use crate::{Error, Result};

/// Square search lattice of `Ω x Ω` candidates.
///
/// Candidates are stored column-major with x varying fastest: index
/// `ξ = ix + Ω * iy` sits at `center + ((ix - h) ΔR, (iy - h) ΔR)` with
/// `h = (Ω - 1) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionGrid {
    pub center: Point2,
    pub omega: usize,
    pub spacing: f64,
    pub candidates: Vec<Point2>,
}

pub fn build_grid(center: Point2, omega: usize, spacing: f64) -> Result<FusionGrid> {
    if omega == 0 || omega.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "grid size must be a positive odd number, got {omega}"
        )));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Argument(format!(
            "grid spacing must be positive, got {spacing}"
        )));
    }
    let half = (omega / 2) as f64;
    let candidates = (0..omega * omega)
        .map(|xi| {
            let (ix, iy) = (xi % omega, xi / omega);
            Point2::new(
                center.x + (ix as f64 - half) * spacing,
                center.y + (iy as f64 - half) * spacing,
            )
        })
        .collect();
    Ok(FusionGrid {
        center,
        omega,
        spacing,
        candidates,
    })
}

impl FusionGrid {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix + self.omega * iy
    }

    pub fn coords(&self, xi: usize) -> (usize, usize) {
        (xi % self.omega, xi / self.omega)
    }

    /// Index of the candidate closest to `p` (clamped to the lattice).
    pub fn nearest_index(&self, p: Point2) -> usize {
        let half = (self.omega / 2) as f64;
        let snap = |v: f64, c: f64| {
            (((v - c) / self.spacing + half).round()).clamp(0.0, (self.omega - 1) as f64) as usize
        };
        self.index(snap(p.x, self.center.x), snap(p.y, self.center.y))
    }

    /// Chebyshev distance in cells between two candidates.
    pub fn cell_distance(&self, a: usize, b: usize) -> usize {
        let (ax, ay) = self.coords(a);
        let (bx, by) = self.coords(b);
        ax.abs_diff(bx).max(ay.abs_diff(by))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell() {
        let g = build_grid(Point2::new(3.0, -2.0), 1, 0.5).unwrap();
        assert_eq!(g.candidates, vec![Point2::new(3.0, -2.0)]);
    }

    #[test]
    fn three_by_three() {
        let g = build_grid(Point2::default(), 3, 1.0).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.candidates[0], Point2::new(-1.0, -1.0));
        assert_eq!(g.candidates[1], Point2::new(0.0, -1.0));
        assert_eq!(g.candidates[3], Point2::new(-1.0, 0.0));
        assert_eq!(g.candidates[8], Point2::new(1.0, 1.0));
    }

    #[test]
    fn index_arithmetic_matches_enumeration() {
        let g = build_grid(Point2::new(100.0, 50.0), 81, 0.5).unwrap();
        let mut xi = 0;
        for iy in 0..81 {
            for ix in 0..81 {
                let expected = Point2::new(
                    100.0 + (ix as f64 - 40.0) * 0.5,
                    50.0 + (iy as f64 - 40.0) * 0.5,
                );
                assert_eq!(g.candidates[xi], expected);
                assert_eq!(g.index(ix, iy), xi);
                assert_eq!(g.coords(xi), (ix, iy));
                assert_eq!(g.nearest_index(expected), xi);
                xi += 1;
            }
        }
        // neighbours are exactly one spacing apart
        assert_eq!(g.candidates[1].x - g.candidates[0].x, 0.5);
        assert_eq!(g.candidates[81].y - g.candidates[0].y, 0.5);
    }

    #[test]
    fn invalid_sizes() {
        assert!(build_grid(Point2::default(), 4, 1.0).is_err());
        assert!(build_grid(Point2::default(), 0, 1.0).is_err());
        assert!(build_grid(Point2::default(), 3, 0.0).is_err());
    }
}
