use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::config::{BerCase, ExperimentConfig};
use super::output::{cell, percentile, CsvTable};
use crate::channel::{comm_receive, rician_channel, sense_tensor, Scene, SymbolGrid};
use crate::geometry::Point2;
use crate::par::{self, Execution};
use crate::rng::{self, derive_seed, tags};
use crate::sfmc::{
    baseline_data_level, fuse_with_dictionaries, main_lobe_cells, virtual_anchors,
    FusionDictionaries, FusionGrid, FusionProfile,
};
use crate::tensor::{cp_rals, ComplexTensor3, CpResult, CpSolverConfig};
use crate::waveform::{
    build_krst_code, krst_decode, krst_encode, Constellation, KrstCode, SymbolBlock,
};
use crate::{Error, Result};

/// Blocks simulated per parallel work item in the BER sweep.
const BER_CHUNK: u64 = 2048;

/// Seed of trial `t` under master seed `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    derive_seed(seed, &[trial])
}

/// Everything that stays fixed across the trials of one path count.
#[derive(Debug, Clone)]
pub struct TrialContext {
    pub scene: Scene,
    pub code: KrstCode,
    pub solver: CpSolverConfig,
    pub dictionaries: FusionDictionaries,
}

impl TrialContext {
    pub fn new(cfg: &ExperimentConfig, mpc_count: usize) -> Result<Self> {
        let scene = cfg.scene()?.with_mpc_count(mpc_count)?;
        let code = cfg.sensing_code()?;
        let anchors = virtual_anchors(&scene)?;
        let grid = crate::sfmc::build_grid(cfg.grid_center(), cfg.grid.omega, cfg.grid.spacing_m)?;
        let dictionaries = FusionDictionaries::build(&anchors, &grid, &scene)?;
        let solver = CpSolverConfig {
            rank: mpc_count,
            ..cfg.solver.clone()
        };
        Ok(Self {
            scene,
            code,
            solver,
            dictionaries,
        })
    }

    pub fn grid(&self) -> &FusionGrid {
        &self.dictionaries.grid
    }

    pub fn mpc_count(&self) -> usize {
        self.solver.rank
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageTimings {
    pub sense: Duration,
    pub decompose: Duration,
    pub fuse: Duration,
}

/// Outcome of one end-to-end localization trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub snr_db: f64,
    pub mpc_count: usize,
    pub estimate: Point2,
    pub truth: Point2,
    /// `|estimate - truth|`, meters.
    pub error_m: f64,
    pub fit: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time: Duration,
}

struct Simulated {
    tensor: ComplexTensor3,
    cp: CpResult,
    sense: Duration,
    decompose: Duration,
}

/// Sensing tensor and its decomposition for trial `t`.
fn simulate(ctx: &TrialContext, seed: u64, trial: u64, snr_db: f64) -> Result<Simulated> {
    let ts = trial_seed(seed, trial);
    let start = Instant::now();
    let symbols = SymbolGrid::random(
        &ctx.code,
        ctx.scene.subcarrier_count,
        ctx.scene.block_count,
        derive_seed(ts, &[tags::SYMBOLS]),
    );
    let tensor = sense_tensor(
        &ctx.scene,
        &ctx.code,
        &symbols,
        snr_db,
        derive_seed(ts, &[tags::SENSING_NOISE]),
    )?;
    let sense = start.elapsed();
    let start = Instant::now();
    let solver = CpSolverConfig {
        rng_seed: derive_seed(ts, &[tags::CP_INIT]),
        ..ctx.solver.clone()
    };
    let cp = cp_rals(&tensor, &solver)?;
    Ok(Simulated {
        tensor,
        cp,
        sense,
        decompose: start.elapsed(),
    })
}

fn record(
    ctx: &TrialContext,
    trial: u64,
    snr_db: f64,
    estimate: Point2,
    cp: &CpResult,
    wall: Duration,
) -> TrialRecord {
    let truth = ctx.scene.target.position;
    TrialRecord {
        trial,
        snr_db,
        mpc_count: ctx.mpc_count(),
        estimate,
        truth,
        error_m: estimate.dist(truth),
        fit: cp.fit,
        iterations: cp.iterations,
        converged: cp.converged,
        wall_time: wall,
    }
}

/// One full pipeline run: sense, decompose, fuse.
pub fn run_trial(ctx: &TrialContext, seed: u64, trial: u64, snr_db: f64) -> Result<TrialRecord> {
    let start = Instant::now();
    let sim = simulate(ctx, seed, trial, snr_db)?;
    let fused = fuse_with_dictionaries(&sim.cp.factors, &ctx.dictionaries)?;
    Ok(record(
        ctx,
        trial,
        snr_db,
        fused.position,
        &sim.cp,
        start.elapsed(),
    ))
}

/// Hex SHA-256 prefix of the tensor contents.
fn tensor_hash(t: &ComplexTensor3) -> String {
    let mut h = Sha256::new();
    for z in t.data() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    hex::encode(&h.finalize()[..8])
}

/// Aggregate row of the RMSE sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub snr_db: f64,
    pub mpc_count: usize,
    pub trials: usize,
    /// Trials whose solver hit the iteration cap.
    pub unconverged: usize,
    pub rmse_m: f64,
    pub median_m: f64,
    pub p90_m: f64,
}

impl RmseRow {
    /// Columns: `snr_db, mpc_count, trials, unconverged, rmse_m, median_m, p90_m`.
    pub fn table(rows: &[RmseRow]) -> CsvTable {
        let mut t = CsvTable::new(&[
            "snr_db",
            "mpc_count",
            "trials",
            "unconverged",
            "rmse_m",
            "median_m",
            "p90_m",
        ]);
        for r in rows {
            t.push(vec![
                cell(r.snr_db),
                cell(r.mpc_count),
                cell(r.trials),
                cell(r.unconverged),
                cell(r.rmse_m),
                cell(r.median_m),
                cell(r.p90_m),
            ]);
        }
        t
    }
}

fn summarize(snr_db: f64, mpc_count: usize, records: &[TrialRecord]) -> RmseRow {
    let mut errors: Vec<f64> = records.iter().map(|r| r.error_m).collect();
    errors.sort_by(f64::total_cmp);
    let n = errors.len();
    RmseRow {
        snr_db,
        mpc_count,
        trials: n,
        unconverged: records.iter().filter(|r| !r.converged).count(),
        rmse_m: (errors.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt(),
        median_m: percentile(&errors, 0.5),
        p90_m: percentile(&errors, 0.9),
    }
}

/// RMSE sweep on the configured worker pool.
pub fn run_rmse_sweep(cfg: &ExperimentConfig) -> Result<Vec<RmseRow>> {
    par::with_workers(cfg.sweep.workers, || {
        run_rmse_sweep_with(cfg, Execution::Parallel)
    })
}

/// RMSE sweep over every `(snr, mpc_count)` cell, trials distributed by `exec`.
/// Rows come out ordered by path count, then by SNR in config order.
pub fn run_rmse_sweep_with(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<RmseRow>> {
    cfg.validate()?;
    let trials = cfg.sweep.trials;
    let mut rows = Vec::new();
    for &l in &cfg.sweep.mpc_counts {
        let ctx = TrialContext::new(cfg, l)?;
        let snrs = &cfg.sweep.snr_db;
        let records = exec.map_indexed(snrs.len() * trials, |i| {
            run_trial(&ctx, cfg.sweep.seed, (i % trials) as u64, snrs[i / trials])
        });
        let records = records.into_iter().collect::<Result<Vec<_>>>()?;
        for (s, chunk) in records.chunks(trials).enumerate() {
            rows.push(summarize(snrs[s], l, chunk));
        }
    }
    Ok(rows)
}

/// Both schemes on one tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedTrial {
    pub trial: u64,
    pub tensor_hash: String,
    pub sfmc_error_m: f64,
    pub data_level_error_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcdfRow {
    pub scheme: &'static str,
    pub error_m: f64,
    pub ecdf: f64,
}

impl EcdfRow {
    /// Columns: `scheme, error_m, ecdf`.
    pub fn table(rows: &[EcdfRow]) -> CsvTable {
        let mut t = CsvTable::new(&["scheme", "error_m", "ecdf"]);
        for r in rows {
            t.push(vec![cell(r.scheme), cell(r.error_m), cell(r.ecdf)]);
        }
        t
    }
}

impl PairedTrial {
    /// Columns: `trial, tensor_hash, sfmc_error_m, data_level_error_m`.
    pub fn table(trials: &[PairedTrial]) -> CsvTable {
        let mut t = CsvTable::new(&["trial", "tensor_hash", "sfmc_error_m", "data_level_error_m"]);
        for p in trials {
            t.push(vec![
                cell(p.trial),
                cell(&p.tensor_hash),
                cell(p.sfmc_error_m),
                cell(p.data_level_error_m),
            ]);
        }
        t
    }
}

/// Paired symbol-level vs data-level comparison.
pub fn run_ecdf(cfg: &ExperimentConfig) -> Result<(Vec<EcdfRow>, Vec<PairedTrial>)> {
    par::with_workers(cfg.sweep.workers, || {
        run_ecdf_with(cfg, Execution::Parallel)
    })
}

/// Every trial decomposes one tensor and hands the same factors to both
/// localizers. Returns the ECDF rows (sfmc first, each ascending) and the
/// per-trial pairing log.
pub fn run_ecdf_with(
    cfg: &ExperimentConfig,
    exec: Execution,
) -> Result<(Vec<EcdfRow>, Vec<PairedTrial>)> {
    cfg.validate()?;
    let ctx = TrialContext::new(cfg, cfg.ecdf.mpc_count)?;
    let truth = ctx.scene.target.position;
    let paired = exec.map_indexed(cfg.sweep.trials, |t| -> Result<PairedTrial> {
        let sim = simulate(&ctx, cfg.sweep.seed, t as u64, cfg.ecdf.snr_db)?;
        let sfmc = fuse_with_dictionaries(&sim.cp.factors, &ctx.dictionaries)?;
        let data = baseline_data_level(&sim.cp.factors, &ctx.dictionaries.anchors, &ctx.scene)?;
        Ok(PairedTrial {
            trial: t as u64,
            tensor_hash: tensor_hash(&sim.tensor),
            sfmc_error_m: sfmc.position.dist(truth),
            data_level_error_m: data.position.dist(truth),
        })
    });
    let paired = paired.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(2 * paired.len());
    for (scheme, pick) in [
        (
            "sfmc",
            (|p: &PairedTrial| p.sfmc_error_m) as fn(&PairedTrial) -> f64,
        ),
        ("data_level", |p: &PairedTrial| p.data_level_error_m),
    ] {
        let mut errors: Vec<f64> = paired.iter().map(pick).collect();
        errors.sort_by(f64::total_cmp);
        let n = errors.len() as f64;
        rows.extend(errors.into_iter().enumerate().map(|(i, error_m)| EcdfRow {
            scheme,
            error_m,
            ecdf: (i + 1) as f64 / n,
        }));
    }
    Ok((rows, paired))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRow {
    pub phi: usize,
    pub code_length: usize,
    pub snr_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
}

impl BerRow {
    /// Columns: `phi, K, snr_db, bits, errors, ber`.
    pub fn table(rows: &[BerRow]) -> CsvTable {
        let mut t = CsvTable::new(&["phi", "K", "snr_db", "bits", "errors", "ber"]);
        for r in rows {
            t.push(vec![
                cell(r.phi),
                cell(r.code_length),
                cell(r.snr_db),
                cell(r.bits),
                cell(r.errors),
                cell(r.ber),
            ]);
        }
        t
    }
}

/// Bit errors over blocks `range` for one case and SNR.
///
/// Block `b` draws its channel and noise from streams keyed only by the
/// master seed and `b`, so all cases and SNRs see the same channel
/// realizations (common random numbers).
fn ber_chunk(
    scene: &Scene,
    code: &KrstCode,
    beta: f64,
    kappa: f64,
    snr_db: f64,
    seed: u64,
    range: std::ops::Range<u64>,
) -> Result<u64> {
    let constellation: &Constellation = code.constellation();
    let mut errors = 0u64;
    for b in range {
        let h = rician_channel(scene, beta, kappa, derive_seed(seed, &[tags::CHANNEL, b]))?;
        let mut g = rng::stream(seed, &[tags::SYMBOLS, b]);
        let (labels, block) = SymbolBlock::random(&mut g, constellation, code.n_tx, 0);
        let x = krst_encode(&block, code)?;
        let y = comm_receive(&h, &x, snr_db, derive_seed(seed, &[tags::COMM_NOISE, b]))?;
        let decoded = krst_decode(&y, Some(&h), code)?.labels(constellation);
        errors += labels
            .iter()
            .zip(&decoded)
            .map(|(&a, &d)| Constellation::bit_errors(a, d) as u64)
            .sum::<u64>();
    }
    Ok(errors)
}

/// BER for every configured `(φ, K)` case and SNR over the Rician downlink.
pub fn run_ber_sweep(cfg: &ExperimentConfig) -> Result<Vec<BerRow>> {
    cfg.validate()?;
    let ber = &cfg.ber;
    let scene = Scene {
        n_tx: ber.n_tx,
        n_ue: ber.n_ue,
        ..cfg.scene()?
    };
    let seed = cfg.sweep.seed;
    par::with_workers(cfg.sweep.workers, || {
        let mut rows = Vec::new();
        for &BerCase {
            modulation_order,
            code_length,
        } in &ber.cases
        {
            let code = build_krst_code(ber.n_tx, code_length, modulation_order)?;
            let bits_per_block = (ber.n_tx * code.constellation().bits_per_symbol()) as u64;
            let blocks = ber.bits.div_ceil(bits_per_block);
            let chunks = blocks.div_ceil(BER_CHUNK);
            for &snr_db in &ber.snr_db {
                let counts = par::map_indexed(chunks as usize, |c| {
                    let start = c as u64 * BER_CHUNK;
                    ber_chunk(
                        &scene,
                        &code,
                        ber.beta,
                        ber.kappa,
                        snr_db,
                        seed,
                        start..(start + BER_CHUNK).min(blocks),
                    )
                });
                let errors = counts.into_iter().sum::<Result<u64>>()?;
                let bits = blocks * bits_per_block;
                rows.push(BerRow {
                    phi: modulation_order,
                    code_length,
                    snr_db,
                    bits,
                    errors,
                    ber: errors as f64 / bits as f64,
                });
            }
        }
        Ok(rows)
    })
}

/// Single end-to-end run with the full fusion profile.
#[derive(Debug, Clone)]
pub struct LocateReport {
    pub record: TrialRecord,
    pub timings: StageTimings,
    pub grid: FusionGrid,
    pub profile: FusionProfile,
    /// `assignment[l]` is the factor column matched to anchor `l`.
    pub assignment: Vec<usize>,
    /// Cells above 0.3 of the min-max normalized combined profile.
    pub main_lobe_cells: usize,
    pub tensor_hash: String,
}

impl LocateReport {
    /// Columns: `x, y, value` with `value = E + J`, in grid order.
    pub fn profile_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["x", "y", "value"]);
        for (p, v) in self.grid.candidates.iter().zip(&self.profile.combined) {
            t.push(vec![cell(p.x), cell(p.y), cell(v)]);
        }
        t
    }
}

/// Runs trial `locate.trial` at `locate.snr_db` with `locate.mpc_count` paths.
pub fn locate_once(cfg: &ExperimentConfig) -> Result<LocateReport> {
    cfg.validate()?;
    par::with_workers(cfg.sweep.workers, || {
        let ctx = TrialContext::new(cfg, cfg.locate.mpc_count)?;
        let start = Instant::now();
        let sim = simulate(&ctx, cfg.sweep.seed, cfg.locate.trial, cfg.locate.snr_db)?;
        let fuse_start = Instant::now();
        let fused = fuse_with_dictionaries(&sim.cp.factors, &ctx.dictionaries)?;
        let fuse = fuse_start.elapsed();
        let record = record(
            &ctx,
            cfg.locate.trial,
            cfg.locate.snr_db,
            fused.position,
            &sim.cp,
            start.elapsed(),
        );
        if !record.error_m.is_finite() {
            return Err(Error::Estimation("non-finite localization error".into()));
        }
        Ok(LocateReport {
            record,
            timings: StageTimings {
                sense: sim.sense,
                decompose: sim.decompose,
                fuse,
            },
            grid: ctx.dictionaries.grid.clone(),
            main_lobe_cells: main_lobe_cells(&fused.profile.combined, 0.3),
            profile: fused.profile,
            assignment: fused.assignment,
            tensor_hash: tensor_hash(&sim.tensor),
        })
    })
}
