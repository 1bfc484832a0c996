//! Randomized invariants of the algebra, code, geometry and grid layers.

use mpc_isac::geometry::{Line, Point2};
use mpc_isac::rng::{complex_gaussian, derive_seed, stream};
use mpc_isac::sfmc::build_grid;
use mpc_isac::tensor::{fold, khatri_rao, matricize, reconstruct_cp, FactorMatrices};
use mpc_isac::waveform::{build_krst_code, krst_decode, krst_encode, Constellation, SymbolBlock};
use mpc_isac::{CMatrix, C64};
use proptest::prelude::*;

fn random_matrix(seed: u64, rows: usize, cols: usize) -> CMatrix {
    let mut g = stream(seed, &[rows as u64, cols as u64]);
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(&mut g, 1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unfolding_matches_khatri_rao_identity(i in 1usize..6, j in 1usize..6, k in 1usize..6, r in 1usize..4, seed: u64) {
        let f = FactorMatrices::new(random_matrix(seed, i, r), random_matrix(seed ^ 1, j, r), random_matrix(seed ^ 2, k, r)).unwrap();
        let t = reconstruct_cp(&f);
        let expected = [
            &f.a * khatri_rao(&f.c, &f.b).unwrap().transpose(),
            &f.b * khatri_rao(&f.c, &f.a).unwrap().transpose(),
            &f.c * khatri_rao(&f.b, &f.a).unwrap().transpose(),
        ];
        for (mode, want) in (1u8..=3).zip(expected) {
            let got = matricize(&t, mode).unwrap();
            prop_assert!((got - want).iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn fold_inverts_matricize(i in 1usize..5, j in 1usize..5, k in 1usize..5, mode in 1u8..=3, seed: u64) {
        let data = random_matrix(seed, i * j * k, 1).as_slice().to_vec();
        let t = mpc_isac::tensor::ComplexTensor3::from_vec((i, j, k), data).unwrap();
        let back = fold(&matricize(&t, mode).unwrap(), mode, (i, j, k)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn nearest_point_recovers_every_label(order in prop::sample::select(vec![2usize, 4, 16, 64]), noise in 0.0f64..0.49) {
        let c = Constellation::from_order(order).unwrap();
        let min_distance = c.points().iter().enumerate()
            .flat_map(|(a, p)| c.points()[a + 1..].iter().map(move |q| (p - q).norm()))
            .fold(f64::INFINITY, f64::min);
        for label in 0..order {
            let z = c.point(label) + C64::from_polar(noise * min_distance, label as f64);
            prop_assert_eq!(c.nearest(z), label);
        }
    }

    #[test]
    fn krst_noiseless_decode_is_exact(
        n_tx in 1usize..4,
        extra in 0usize..3,
        order in prop::sample::select(vec![2usize, 4, 16]),
        n_rx in 1usize..4,
        seed: u64,
    ) {
        let code = build_krst_code(n_tx, n_tx + extra, order).unwrap();
        let mut g = stream(seed, &[7]);
        let (labels, block) = SymbolBlock::random(&mut g, code.constellation(), n_tx, 0);
        let h = random_matrix(seed, n_rx, n_tx);
        let y = &h * krst_encode(&block, &code).unwrap();
        let decoded = krst_decode(&y, Some(&h), &code).unwrap();
        prop_assert_eq!(decoded.labels(code.constellation()), labels);
    }

    #[test]
    fn mirror_preserves_distance_to_wall_points(
        cx in -50.0f64..50.0, cy in -50.0f64..50.0, dir in 0.0f64..std::f64::consts::PI,
        px in -80.0f64..80.0, py in -80.0f64..80.0, t in -30.0f64..30.0,
    ) {
        let wall = Line { center: Point2::new(cx, cy), direction: dir };
        let p = Point2::new(px, py);
        let image = wall.mirror(p);
        let on_wall = wall.center + wall.unit() * t;
        prop_assert!((image.dist(on_wall) - p.dist(on_wall)).abs() < 1e-9);
        prop_assert!(wall.mirror(image).dist(p) < 1e-9);
    }

    #[test]
    fn grid_index_round_trips(half in 0usize..20, spacing in 0.1f64..3.0, ix in 0usize..41, iy in 0usize..41) {
        let omega = 2 * half + 1;
        let (ix, iy) = (ix % omega, iy % omega);
        let grid = build_grid(Point2::new(3.0, -4.0), omega, spacing).unwrap();
        let xi = grid.index(ix, iy);
        prop_assert_eq!(grid.coords(xi), (ix, iy));
        prop_assert_eq!(grid.nearest_index(grid.candidates[xi]), xi);
    }

    #[test]
    fn derived_seeds_are_stable_and_separate(seed: u64, a in 0u64..1000, b in 0u64..1000) {
        prop_assert_eq!(derive_seed(seed, &[a, b]), derive_seed(seed, &[a, b]));
        if a != b {
            prop_assert_ne!(derive_seed(seed, &[a]), derive_seed(seed, &[b]));
        }
    }
}
