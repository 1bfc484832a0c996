use serde::{Deserialize, Serialize};

use crate::geometry::{Line, Point2};
use crate::{Error, Result, C64, SPEED_OF_LIGHT};

/// Point target with constant velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub position: Point2,
    /// m/s
    pub speed: f64,
    /// Heading of the velocity vector, radians from the x axis.
    pub heading: f64,
}

impl Target {
    pub fn velocity(&self) -> Point2 {
        Point2::from_polar(self.speed, self.heading)
    }
}

/// Everything the simulator needs to know about the deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub bs_position: Point2,
    pub n_rx: usize,
    pub n_tx: usize,
    pub n_ue: usize,
    /// Element spacing `d_r`, meters.
    pub antenna_spacing: f64,
    pub carrier_frequency: f64,
    pub subcarrier_count: usize,
    pub subcarrier_spacing: f64,
    /// OFDM symbol duration `T` including the cyclic prefix, seconds.
    pub symbol_duration: f64,
    pub block_count: usize,
    pub reflectors: Vec<Line>,
    pub target: Target,
    pub total_power: f64,
    /// Per-path transmit powers `P_t^l`; `None` splits `total_power` evenly.
    pub path_powers: Option<Vec<f64>>,
    /// Arrival angle of the deterministic Rician component at the user array.
    pub ue_los_aoa: f64,
    /// Departure angle of the deterministic Rician component at the BS array.
    pub bs_los_aod: f64,
}

impl Scene {
    /// Geometry and radio parameters of the reference scenario at full array/band size.
    pub fn table1() -> Self {
        let subcarrier_spacing = 30e3;
        let carrier_frequency = 3.5e9;
        Self {
            bs_position: Point2::new(0.0, 0.0),
            n_rx: 128,
            n_tx: 128,
            n_ue: 2,
            antenna_spacing: SPEED_OF_LIGHT / carrier_frequency / 2.0,
            carrier_frequency,
            subcarrier_count: 1024,
            subcarrier_spacing,
            symbol_duration: 2192.0 / 2048.0 / subcarrier_spacing,
            block_count: 14,
            reflectors: vec![
                Line {
                    center: Point2::new(60.0, 70.0),
                    direction: 0.0,
                },
                Line {
                    center: Point2::new(40.0, 100.0),
                    direction: 0.0,
                },
                Line {
                    center: Point2::new(50.0, -100.0),
                    direction: 45f64.to_radians(),
                },
            ],
            target: Target {
                position: Point2::new(100.0, 50.0),
                speed: 100.0,
                heading: 27.6923f64.to_radians(),
            },
            total_power: 1.0,
            path_powers: None,
            ue_los_aoa: 0.0,
            bs_los_aod: 0.0,
        }
    }

    /// Same geometry with desk-scale array, band and block counts.
    pub fn desk() -> Self {
        Self {
            n_rx: 16,
            n_tx: 16,
            subcarrier_count: 64,
            block_count: 8,
            ..Self::table1()
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Number of propagation paths `L + 1`.
    pub fn path_count(&self) -> usize {
        self.reflectors.len() + 1
    }

    /// Copy keeping only the first `mpc_count - 1` reflectors.
    pub fn with_mpc_count(&self, mpc_count: usize) -> Result<Self> {
        if mpc_count == 0 || mpc_count > self.path_count() {
            return Err(Error::Argument(format!(
                "mpc_count {mpc_count} outside 1..={}",
                self.path_count()
            )));
        }
        let mut s = self.clone();
        s.reflectors.truncate(mpc_count - 1);
        if let Some(p) = &mut s.path_powers {
            p.truncate(mpc_count);
            s.total_power = p.iter().sum();
        }
        Ok(s)
    }

    /// `P_t^l` for every path.
    pub fn path_powers(&self) -> Result<Vec<f64>> {
        let n = self.path_count();
        match &self.path_powers {
            None => Ok(vec![self.total_power / n as f64; n]),
            Some(p) => {
                if p.len() != n {
                    return Err(Error::Argument(format!(
                        "{} path powers for {n} paths",
                        p.len()
                    )));
                }
                let sum: f64 = p.iter().sum();
                if (sum - self.total_power).abs() > 1e-9 * self.total_power.max(1.0) {
                    return Err(Error::Argument(format!(
                        "path powers sum to {sum}, total power is {}",
                        self.total_power
                    )));
                }
                Ok(p.clone())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("antenna_spacing", self.antenna_spacing),
            ("carrier_frequency", self.carrier_frequency),
            ("subcarrier_spacing", self.subcarrier_spacing),
            ("symbol_duration", self.symbol_duration),
            ("total_power", self.total_power),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Argument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_rx == 0
            || self.n_tx == 0
            || self.n_ue == 0
            || self.subcarrier_count == 0
            || self.block_count == 0
        {
            return Err(Error::Argument(
                "antenna, subcarrier and block counts must be positive".into(),
            ));
        }
        for (i, r) in self.reflectors.iter().enumerate() {
            if !(0.0..std::f64::consts::PI).contains(&r.direction) {
                return Err(Error::Argument(format!(
                    "reflector {i} direction {} outside [0, pi)",
                    r.direction
                )));
            }
        }
        self.path_powers()?;
        Ok(())
    }
}

/// Per-path propagation parameters, path 0 being line of sight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    /// Angle of arrival at the BS array, radians.
    pub aoa: f64,
    /// One-way path length `R_l`, meters.
    pub distance: f64,
    /// Round-trip delay `2 R_l / c₀`.
    pub delay: f64,
    /// `2 v_l f_c / c₀`.
    pub doppler: f64,
    /// Closing speed along the path (positive when approaching), m/s.
    pub radial_speed: f64,
    /// `√P_t^l α_l` with `α_l = exp(-j 2π f_c τ_l)`.
    pub gain: C64,
}

/// Monostatic one-bounce geometry for every path.
///
/// A reflected path behaves like line of sight from the mirror image of the
/// BS (its virtual anchor): its length is the anchor-to-target distance, and
/// it arrives at the BS from the direction of the target's own mirror image.
pub fn scene_path_params(scene: &Scene) -> Result<Vec<PathParams>> {
    scene.validate()?;
    let target = scene.target.position;
    let bs = scene.bs_position;
    if target.dist(bs) < 1e-9 {
        return Err(Error::Geometry(
            "target coincides with the base station".into(),
        ));
    }
    let powers = scene.path_powers()?;
    let velocity = scene.target.velocity();
    let fc = scene.carrier_frequency;

    let make = |anchor: Point2, aoa: f64, power: f64| {
        let offset = target - anchor;
        let distance = offset.norm();
        let radial_speed = -velocity.dot(offset * (1.0 / distance));
        let delay = 2.0 * distance / SPEED_OF_LIGHT;
        PathParams {
            aoa,
            distance,
            delay,
            doppler: 2.0 * radial_speed * fc / SPEED_OF_LIGHT,
            radial_speed,
            gain: C64::from_polar(power.sqrt(), -2.0 * std::f64::consts::PI * fc * delay),
        }
    };

    let mut paths = vec![make(bs, (target - bs).angle(), powers[0])];
    for (i, wall) in scene.reflectors.iter().enumerate() {
        if wall.signed_distance(target).abs() < 1e-9 {
            return Err(Error::Geometry(format!("target lies on reflector {i}")));
        }
        if wall.signed_distance(bs).abs() < 1e-9 {
            return Err(Error::Geometry(format!(
                "reflector {i} passes through the base station"
            )));
        }
        let anchor = wall.mirror(bs);
        let aoa = (wall.mirror(target) - bs).angle();
        paths.push(make(anchor, aoa, powers[i + 1]));
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_los_geometry() {
        let p = scene_path_params(&Scene::table1()).unwrap();
        assert!((p[0].aoa.to_degrees() - 26.565051177).abs() < 1e-6);
        assert!((p[0].distance - 111.803398875).abs() < 1e-6);
        assert!(
            (p[0].delay * 1e9 - 745.871).abs() < 1e-3,
            "{}",
            p[0].delay * 1e9
        );
        assert!((p[0].delay - 2.0 * 125f64.sqrt() * 10.0 / SPEED_OF_LIGHT).abs() < 1e-18);
    }

    #[test]
    fn doppler_for_approaching_target() {
        let mut s = Scene::table1();
        s.reflectors.clear();
        s.target = Target {
            position: Point2::new(100.0, 0.0),
            speed: 100.0,
            heading: std::f64::consts::PI,
        };
        let p = scene_path_params(&s).unwrap();
        assert!((p[0].doppler - 2.0 * 100.0 * 3.5e9 / SPEED_OF_LIGHT).abs() < 1e-9);
        assert!((p[0].doppler - 2335.0).abs() < 1.0);
    }

    #[test]
    fn orthogonal_velocity_has_no_doppler() {
        let mut s = Scene::table1();
        let los = s.target.position.angle();
        s.target.heading = los + std::f64::consts::FRAC_PI_2;
        let p = scene_path_params(&s).unwrap();
        assert!(p[0].doppler.abs() < 1e-9);
    }

    #[test]
    fn reflected_paths_match_mirror_images() {
        let p = scene_path_params(&Scene::table1()).unwrap();
        // target mirrored across y=70, y=100 and y=x-150
        let images = [(100.0, 90.0), (100.0, 150.0), (200.0, -50.0)];
        for (path, (x, y)) in p[1..].iter().zip(images) {
            let img = Point2::new(x, y);
            assert!((path.aoa - img.angle()).abs() < 1e-12);
            assert!((path.distance - img.norm()).abs() < 1e-9);
        }
    }

    #[test]
    fn translation_invariance() {
        let base = scene_path_params(&Scene::table1()).unwrap();
        let mut s = Scene::table1();
        let shift = Point2::new(-37.0, 512.5);
        s.bs_position = s.bs_position + shift;
        s.target.position = s.target.position + shift;
        for r in &mut s.reflectors {
            r.center = r.center + shift;
        }
        for (a, b) in base.iter().zip(scene_path_params(&s).unwrap()) {
            assert!((a.aoa - b.aoa).abs() < 1e-12);
            assert!((a.delay - b.delay).abs() < 1e-20);
            assert!((a.doppler - b.doppler).abs() < 1e-8);
        }
    }

    #[test]
    fn degenerate_geometry() {
        let mut s = Scene::table1();
        s.target.position = Point2::new(10.0, 70.0);
        assert!(matches!(scene_path_params(&s), Err(Error::Geometry(_))));
        let mut s = Scene::table1();
        s.target.position = s.bs_position;
        assert!(matches!(scene_path_params(&s), Err(Error::Geometry(_))));
        let mut s = Scene::table1();
        s.reflectors[0].direction = std::f64::consts::PI;
        assert!(matches!(scene_path_params(&s), Err(Error::Argument(_))));
    }

    #[test]
    fn power_split() {
        let s = Scene::table1();
        let p = s.path_powers().unwrap();
        assert_eq!(p.len(), 4);
        assert!((p.iter().sum::<f64>() - s.total_power).abs() < 1e-15);
        let mut bad = s.clone();
        bad.path_powers = Some(vec![0.5, 0.5, 0.5, 0.5]);
        assert!(bad.path_powers().is_err());
        assert!((s.wavelength() - SPEED_OF_LIGHT / 3.5e9).abs() / s.wavelength() < 1e-12);
    }
}
