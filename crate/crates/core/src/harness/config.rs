use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{Scene, Target};
use crate::geometry::{Line, Point2};
use crate::tensor::CpSolverConfig;
use crate::waveform::{build_krst_code, KrstCode, Modulation};
use crate::{Error, Result};

/// Lowest and highest SNR accepted anywhere in a config, dB. `+inf` is
/// accepted as well and means noiseless.
const SNR_RANGE: (f64, f64) = (-40.0, 60.0);

/// Array, band and block sizes used by `--desk` and `--full`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// 16 x 16 antennas, 64 subcarriers, 8 blocks.
    Desk,
    /// The reference 128 x 128 antennas, 1024 subcarriers, 14 blocks.
    Full,
}

/// Everything one experiment run needs. Missing sections and keys fall back
/// to the desk-scale reference scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[derive(Default)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub solver: CpSolverConfig,
    pub code: CodeConfig,
    pub grid: GridConfig,
    pub sweep: SweepConfig,
    pub ecdf: EcdfConfig,
    pub locate: LocateConfig,
    pub ber: BerConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub bs: [f64; 2],
    pub n_rx: usize,
    pub n_tx: usize,
    pub n_ue: usize,
    /// Element spacing in wavelengths.
    pub antenna_spacing_wavelengths: f64,
    pub carrier_frequency_hz: f64,
    pub subcarriers: usize,
    pub subcarrier_spacing_hz: f64,
    /// Defaults to the OFDM symbol with a 144/2048 cyclic prefix, `2192 / (2048 Δf)`.
    pub symbol_duration_s: Option<f64>,
    pub blocks: usize,
    pub total_power: f64,
    pub path_powers: Option<Vec<f64>>,
    pub ue_los_aoa_deg: f64,
    pub bs_los_aod_deg: f64,
    pub target: TargetConfig,
    pub reflectors: Vec<ReflectorConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub position: [f64; 2],
    pub speed_mps: f64,
    pub heading_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectorConfig {
    pub center: [f64; 2],
    /// Line direction in `[0, 180)` degrees.
    pub direction_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeConfig {
    /// Constellation size φ: 2, 4, 16 or 64.
    pub modulation_order: usize,
    /// `K`; defaults to `n_tx`.
    pub code_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Ω, odd.
    pub omega: usize,
    pub spacing_m: f64,
    /// Defaults to the true target position, which then sits on the center node.
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub snr_db: Vec<f64>,
    pub mpc_counts: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EcdfConfig {
    pub snr_db: f64,
    pub mpc_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocateConfig {
    pub snr_db: f64,
    pub mpc_count: usize,
    /// Trial index whose seed the single run reuses.
    pub trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerConfig {
    pub n_tx: usize,
    pub n_ue: usize,
    /// Large-scale gain β.
    pub beta: f64,
    /// Rician factor κ (linear).
    pub kappa: f64,
    pub snr_db: Vec<f64>,
    /// Minimum number of bits per (case, SNR) cell.
    pub bits: u64,
    pub cases: Vec<BerCase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BerCase {
    pub modulation_order: usize,
    pub code_length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::from_scene(&Scene::desk())
    }
}

impl Default for CodeConfig {
    fn default() -> Self {
        Self {
            modulation_order: 4,
            code_length: None,
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            omega: 81,
            spacing_m: 0.5,
            center: None,
        }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            snr_db: (0..9).map(|i| -30.0 + 5.0 * i as f64).collect(),
            mpc_counts: vec![1, 2, 3, 4],
            trials: 300,
            seed: 0,
            workers: 0,
        }
    }
}

impl Default for EcdfConfig {
    fn default() -> Self {
        Self {
            snr_db: -10.0,
            mpc_count: 4,
        }
    }
}

impl Default for LocateConfig {
    fn default() -> Self {
        Self {
            snr_db: f64::INFINITY,
            mpc_count: 4,
            trial: 0,
        }
    }
}

impl Default for BerConfig {
    fn default() -> Self {
        let cases = [(4, 2), (4, 4), (16, 2), (16, 4)]
            .into_iter()
            .map(|(modulation_order, code_length)| BerCase {
                modulation_order,
                code_length,
            })
            .collect();
        Self {
            n_tx: 2,
            n_ue: 2,
            beta: 1.0,
            kappa: 1.0,
            snr_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            bits: 1_000_000,
            cases,
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("results"),
        }
    }
}

impl ScenarioConfig {
    pub fn from_scene(s: &Scene) -> Self {
        Self {
            bs: [s.bs_position.x, s.bs_position.y],
            n_rx: s.n_rx,
            n_tx: s.n_tx,
            n_ue: s.n_ue,
            antenna_spacing_wavelengths: s.antenna_spacing / s.wavelength(),
            carrier_frequency_hz: s.carrier_frequency,
            subcarriers: s.subcarrier_count,
            subcarrier_spacing_hz: s.subcarrier_spacing,
            symbol_duration_s: None,
            blocks: s.block_count,
            total_power: s.total_power,
            path_powers: s.path_powers.clone(),
            ue_los_aoa_deg: s.ue_los_aoa.to_degrees(),
            bs_los_aod_deg: s.bs_los_aod.to_degrees(),
            target: TargetConfig {
                position: [s.target.position.x, s.target.position.y],
                speed_mps: s.target.speed,
                heading_deg: s.target.heading.to_degrees(),
            },
            reflectors: s
                .reflectors
                .iter()
                .map(|r| ReflectorConfig {
                    center: [r.center.x, r.center.y],
                    direction_deg: r.direction.to_degrees(),
                })
                .collect(),
        }
    }

    /// Builds and validates the scene.
    pub fn to_scene(&self) -> Result<Scene> {
        let point = |p: [f64; 2]| Point2::new(p[0], p[1]);
        for (key, v) in [
            ("scenario.carrier_frequency_hz", self.carrier_frequency_hz),
            ("scenario.subcarrier_spacing_hz", self.subcarrier_spacing_hz),
            (
                "scenario.antenna_spacing_wavelengths",
                self.antenna_spacing_wavelengths,
            ),
            ("scenario.total_power", self.total_power),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(key, format!("must be positive, got {v}")));
            }
        }
        for (key, v) in [
            ("scenario.n_rx", self.n_rx),
            ("scenario.n_tx", self.n_tx),
            ("scenario.n_ue", self.n_ue),
            ("scenario.subcarriers", self.subcarriers),
            ("scenario.blocks", self.blocks),
        ] {
            if v == 0 {
                return Err(Error::config(key, "must be at least 1"));
            }
        }
        for (i, r) in self.reflectors.iter().enumerate() {
            if !(0.0..180.0).contains(&r.direction_deg) {
                return Err(Error::config(
                    format!("scenario.reflectors[{i}].direction_deg"),
                    format!("must lie in [0, 180), got {}", r.direction_deg),
                ));
            }
        }
        let wavelength = crate::SPEED_OF_LIGHT / self.carrier_frequency_hz;
        let scene = Scene {
            bs_position: point(self.bs),
            n_rx: self.n_rx,
            n_tx: self.n_tx,
            n_ue: self.n_ue,
            antenna_spacing: self.antenna_spacing_wavelengths * wavelength,
            carrier_frequency: self.carrier_frequency_hz,
            subcarrier_count: self.subcarriers,
            subcarrier_spacing: self.subcarrier_spacing_hz,
            symbol_duration: self
                .symbol_duration_s
                .unwrap_or(2192.0 / 2048.0 / self.subcarrier_spacing_hz),
            block_count: self.blocks,
            reflectors: self
                .reflectors
                .iter()
                .map(|r| Line {
                    center: point(r.center),
                    direction: r.direction_deg.to_radians(),
                })
                .collect(),
            target: Target {
                position: point(self.target.position),
                speed: self.target.speed_mps,
                heading: self.target.heading_deg.to_radians(),
            },
            total_power: self.total_power,
            path_powers: self.path_powers.clone(),
            ue_los_aoa: self.ue_los_aoa_deg.to_radians(),
            bs_los_aod: self.bs_los_aod_deg.to_radians(),
        };
        scene
            .validate()
            .map_err(|e| Error::config("scenario", e.to_string()))?;
        Ok(scene)
    }
}

impl ExperimentConfig {
    /// Desk-scale reference configuration.
    pub fn desk() -> Self {
        Self::default()
    }

    /// Reference configuration at full array and band size.
    pub fn full() -> Self {
        let mut cfg = Self::default();
        cfg.apply_scale(Scale::Full);
        cfg
    }

    /// Overrides the array, band and block sizes.
    pub fn apply_scale(&mut self, scale: Scale) {
        let (antennas, subcarriers, blocks) = match scale {
            Scale::Desk => (16, 64, 8),
            Scale::Full => (128, 1024, 14),
        };
        self.scenario.n_rx = antennas;
        self.scenario.n_tx = antennas;
        self.scenario.subcarriers = subcarriers;
        self.scenario.blocks = blocks;
    }

    pub fn scene(&self) -> Result<Scene> {
        self.scenario.to_scene()
    }

    /// Sensing code for the scenario's transmit array.
    pub fn sensing_code(&self) -> Result<KrstCode> {
        let k = self.code.code_length.unwrap_or(self.scenario.n_tx);
        build_krst_code(self.scenario.n_tx, k, self.code.modulation_order)
            .map_err(|e| Error::config("code", e.to_string()))
    }

    /// Grid center: configured, or the true target position.
    pub fn grid_center(&self) -> Point2 {
        let c = self.grid.center.unwrap_or(self.scenario.target.position);
        Point2::new(c[0], c[1])
    }

    /// Canonical text form, used for hashing.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every documented constraint, naming the offending key.
    pub fn validate(&self) -> Result<()> {
        let scene = self.scene()?;
        let paths = scene.path_count();
        self.solver
            .validate()
            .map_err(|e| Error::config("solver", e.to_string()))?;

        if Modulation::from_order(self.code.modulation_order).is_err() {
            return Err(Error::config(
                "code.modulation_order",
                format!(
                    "unsupported constellation size {}",
                    self.code.modulation_order
                ),
            ));
        }
        if let Some(k) = self.code.code_length {
            if k < self.scenario.n_tx {
                return Err(Error::config(
                    "code.code_length",
                    format!("must be at least n_tx = {}, got {k}", self.scenario.n_tx),
                ));
            }
        }

        if self.grid.omega == 0 || self.grid.omega.is_multiple_of(2) {
            return Err(Error::config(
                "grid.omega",
                format!("must be a positive odd number, got {}", self.grid.omega),
            ));
        }
        if !(self.grid.spacing_m > 0.0 && self.grid.spacing_m.is_finite()) {
            return Err(Error::config(
                "grid.spacing_m",
                format!("must be positive, got {}", self.grid.spacing_m),
            ));
        }

        if self.sweep.trials == 0 {
            return Err(Error::config("sweep.trials", "must be at least 1"));
        }
        if self.sweep.snr_db.is_empty() {
            return Err(Error::config(
                "sweep.snr_db",
                "must list at least one value",
            ));
        }
        for &snr in &self.sweep.snr_db {
            check_snr("sweep.snr_db", snr)?;
        }
        if self.sweep.mpc_counts.is_empty() {
            return Err(Error::config(
                "sweep.mpc_counts",
                "must list at least one value",
            ));
        }
        for &l in &self.sweep.mpc_counts {
            check_mpc("sweep.mpc_counts", l, paths)?;
        }
        check_snr("ecdf.snr_db", self.ecdf.snr_db)?;
        check_mpc("ecdf.mpc_count", self.ecdf.mpc_count, paths)?;
        check_snr("locate.snr_db", self.locate.snr_db)?;
        check_mpc("locate.mpc_count", self.locate.mpc_count, paths)?;

        let ber = &self.ber;
        if ber.n_tx == 0 {
            return Err(Error::config("ber.n_tx", "must be at least 1"));
        }
        if ber.n_ue == 0 {
            return Err(Error::config("ber.n_ue", "must be at least 1"));
        }
        if !(ber.beta > 0.0 && ber.beta.is_finite()) {
            return Err(Error::config(
                "ber.beta",
                format!("must be positive, got {}", ber.beta),
            ));
        }
        if !(ber.kappa >= 0.0) {
            return Err(Error::config(
                "ber.kappa",
                format!("must be non-negative, got {}", ber.kappa),
            ));
        }
        if ber.bits == 0 {
            return Err(Error::config("ber.bits", "must be at least 1"));
        }
        for &snr in &ber.snr_db {
            check_snr("ber.snr_db", snr)?;
        }
        for (i, case) in ber.cases.iter().enumerate() {
            if Modulation::from_order(case.modulation_order).is_err() {
                return Err(Error::config(
                    format!("ber.cases[{i}].modulation_order"),
                    format!("unsupported constellation size {}", case.modulation_order),
                ));
            }
            if case.code_length < ber.n_tx {
                return Err(Error::config(
                    format!("ber.cases[{i}].code_length"),
                    format!(
                        "must be at least ber.n_tx = {}, got {}",
                        ber.n_tx, case.code_length
                    ),
                ));
            }
        }
        Ok(())
    }
}

fn check_snr(key: &str, snr: f64) -> Result<()> {
    if snr == f64::INFINITY || (SNR_RANGE.0..=SNR_RANGE.1).contains(&snr) {
        Ok(())
    } else {
        Err(Error::config(
            key,
            format!(
                "{snr} dB outside [{}, {}] (or inf)",
                SNR_RANGE.0, SNR_RANGE.1
            ),
        ))
    }
}

fn check_mpc(key: &str, l: usize, paths: usize) -> Result<()> {
    let max = paths.min(4);
    if (1..=max).contains(&l) {
        Ok(())
    } else {
        Err(Error::config(
            key,
            format!("path count {l} outside 1..={max}"),
        ))
    }
}

/// Parses and validates a TOML document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads, parses and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
