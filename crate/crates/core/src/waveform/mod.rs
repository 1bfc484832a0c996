//! Constellations and the Khatri-Rao space-time (KRST) code.

mod constellation;
mod krst;

pub use constellation::{Constellation, Modulation};
pub use krst::{
    build_krst_code, despread, krst_decode, krst_decode_blind, krst_encode, transmission_rate,
    KrstCode, SymbolBlock,
};
