//! Multipath-component-aided integrated sensing and communication.
//!
//! The crate simulates a KRST-coded MIMO-OFDM base station that talks to a
//! user and senses a moving target through a set of known specular
//! reflectors. Propagation paths are separated with a regularized ALS
//! CP decomposition of the received sensing tensor and the target is
//! located by fusing the per-path angle and delay signatures over a grid
//! of candidate positions, using one virtual anchor per reflector.
//!
//! Module map:
//!
//! * [`tensor`] complex multilinear algebra and the CP solver
//! * [`waveform`] constellations and the Khatri-Rao space-time code
//! * [`channel`] scene geometry, steering vectors, Rician link, sensing tensor
//! * [`sfmc`] virtual anchors, matching dictionaries, symbol-level fusion
//! * [`harness`] configuration, seeded Monte-Carlo experiments, CSV output

pub mod channel;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod par;
pub mod rng;
pub mod sfmc;
pub mod tensor;
pub mod waveform;

pub use error::{Error, Result};
pub use geometry::Point2;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix (column-major).
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
