use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Supported modulation formats, keyed by constellation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub fn from_order(order: usize) -> Result<Self> {
        match order {
            2 => Ok(Self::Bpsk),
            4 => Ok(Self::Qpsk),
            16 => Ok(Self::Qam16),
            64 => Ok(Self::Qam64),
            other => Err(Error::Unsupported(format!(
                "modulation order {other} (expected 2, 4, 16 or 64)"
            ))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            Self::Bpsk => 2,
            Self::Qpsk => 4,
            Self::Qam16 => 16,
            Self::Qam64 => 64,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.order().trailing_zeros() as usize
    }
}

/// Gray-mapped constellation with unit average energy.
///
/// `points[i]` is the symbol carrying the bit pattern `i` (MSB first).
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<C64>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Amplitude levels of one axis indexed by their Gray label.
fn pam_levels(bits: usize) -> Vec<f64> {
    let m = 1usize << bits;
    let mut levels = vec![0.0; m];
    for pos in 0..m {
        levels[gray(pos)] = (2 * pos) as f64 - (m as f64 - 1.0);
    }
    levels
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let points = match modulation {
            Modulation::Bpsk => vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
            _ => {
                let half = modulation.bits_per_symbol() / 2;
                let levels = pam_levels(half);
                let per_axis = levels.len();
                let raw: Vec<C64> = (0..per_axis * per_axis)
                    .map(|label| C64::new(levels[label >> half], levels[label & (per_axis - 1)]))
                    .collect();
                let energy = raw.iter().map(|z| z.norm_sqr()).sum::<f64>() / raw.len() as f64;
                raw.into_iter().map(|z| z / energy.sqrt()).collect()
            }
        };
        Self { modulation, points }
    }

    pub fn from_order(order: usize) -> Result<Self> {
        Ok(Self::new(Modulation::from_order(order)?))
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> C64 {
        self.points[label]
    }

    /// Label of the nearest constellation point.
    pub fn nearest(&self, z: C64) -> usize {
        self.points
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).norm_sqr().total_cmp(&(b.1 - z).norm_sqr()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Number of differing bits between two labels.
    pub fn bit_errors(a: usize, b: usize) -> u32 {
        (a ^ b).count_ones()
    }
}
