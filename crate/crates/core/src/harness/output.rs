use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::Result;

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Renders the table behind a `# config_hash=… seed=…` comment line.
    pub fn render(&self, config_hash: &str, seed: u64) -> String {
        let mut out = format!("# config_hash={config_hash} seed={seed}\n");
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Formats any displayable value as one CSV cell. Floats use Rust's
/// shortest round-trip representation, so output is stable across runs.
pub(crate) fn cell(v: impl Display) -> String {
    v.to_string()
}

/// SHA-256 of the canonical TOML form of the config, hex encoded.
///
/// The worker count and output directory do not change any result, so they
/// are reset before hashing.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let mut canonical = cfg.clone();
    canonical.sweep.workers = 0;
    canonical.output = Default::default();
    hex::encode(Sha256::digest(canonical.to_toml().as_bytes()))
}

/// Writes `table` to `path`, creating parent directories.
pub fn write_csv(
    path: impl AsRef<Path>,
    table: &CsvTable,
    config_hash: &str,
    seed: u64,
) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(table.render(config_hash, seed).as_bytes())?;
    Ok(())
}

/// Nearest-rank percentile (`p` in `[0, 1]`) of an ascending slice.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        assert_eq!(percentile(&v, 0.5), 5.0);
        assert_eq!(percentile(&v, 0.9), 9.0);
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 1.0), 10.0);
        assert!(percentile(&[], 0.5).is_nan());
    }

    #[test]
    fn render_layout() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(vec![cell(1), cell(0.5)]);
        assert_eq!(t.render("abc", 7), "# config_hash=abc seed=7\na,b\n1,0.5\n");
    }

    #[test]
    fn hash_tracks_config() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.sweep.seed = 9;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);

        let mut c = a.clone();
        c.sweep.workers = 3;
        c.output.directory = "elsewhere".into();
        assert_eq!(config_hash(&a), config_hash(&c));
    }
}
