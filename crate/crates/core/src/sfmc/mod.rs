//! Symbol-level fusion localization over virtual anchors.
//!
//! Each reflected path is treated as line of sight from the mirror image of
//! the BS across its reflector. For every candidate grid position the
//! localizer predicts the angle of arrival and the round-trip delay each
//! anchor would produce, builds matching dictionaries from those
//! predictions, correlates them with the separated angle and delay factor
//! columns, and picks the candidate with the strongest combined response.

mod anchors;
mod baseline;
mod dictionary;
mod fusion;
mod grid;

pub use anchors::{virtual_anchors, VirtualAnchor};
pub use baseline::{baseline_data_level, estimate_path_parameters, BaselineEstimate, PathEstimate};
pub use dictionary::{
    angle_dictionary, delay_dictionary, predicted_aoa, predicted_delay, AngleDictionary,
    FusionDictionaries,
};
pub use fusion::{
    angle_profile, delay_profile, fuse_and_localize, fuse_with_dictionaries, main_lobe_cells,
    normalized_profile, FusionProfile, FusionResult,
};
pub use grid::{build_grid, FusionGrid};
