use super::anchors::VirtualAnchor;
use super::grid::FusionGrid;
use crate::channel::{delay_vector, steering_vector, Scene};
use crate::geometry::Point2;
use crate::{par, CMatrix, Result, SPEED_OF_LIGHT};

/// Candidates closer than this to an anchor have no defined direction.
const COINCIDENT: f64 = 1e-9;

/// AoA at the BS that a target at `candidate` would produce on the path of
/// `anchor`, or `None` if the candidate sits on the anchor.
///
/// The anchor-to-candidate direction is the direction in which the
/// reflected wave leaves the wall towards the target; reflecting it across
/// the wall gives the direction in which the echo reaches the BS.
pub fn predicted_aoa(anchor: &VirtualAnchor, candidate: Point2) -> Option<f64> {
    let offset = candidate - anchor.position;
    if offset.norm() < COINCIDENT {
        return None;
    }
    Some(match &anchor.reflector {
        None => offset.angle(),
        Some(wall) => wall.reflect_angle(offset.angle()),
    })
}

/// Round-trip delay `2 |candidate - anchor| / c₀`.
pub fn predicted_delay(anchor: &VirtualAnchor, candidate: Point2) -> f64 {
    2.0 * candidate.dist(anchor.position) / SPEED_OF_LIGHT
}

/// Receive-steering columns for every grid candidate.
#[derive(Debug, Clone)]
pub struct AngleDictionary {
    /// `N_R x Ω²`; invalid columns are zero.
    pub matrix: CMatrix,
    /// `false` where the candidate coincides with the anchor.
    pub valid: Vec<bool>,
}

pub fn angle_dictionary(
    anchor: &VirtualAnchor,
    grid: &FusionGrid,
    scene: &Scene,
) -> AngleDictionary {
    let lambda = scene.wavelength();
    let mut matrix = CMatrix::zeros(scene.n_rx, grid.len());
    let mut valid = vec![false; grid.len()];
    for (xi, p) in grid.candidates.iter().enumerate() {
        if let Some(theta) = predicted_aoa(anchor, *p) {
            matrix.set_column(
                xi,
                &steering_vector(theta, scene.n_rx, scene.antenna_spacing, lambda),
            );
            valid[xi] = true;
        }
    }
    AngleDictionary { matrix, valid }
}

/// `N_c x Ω²` delay matching matrix.
pub fn delay_dictionary(anchor: &VirtualAnchor, grid: &FusionGrid, scene: &Scene) -> CMatrix {
    let mut matrix = CMatrix::zeros(scene.subcarrier_count, grid.len());
    for (xi, p) in grid.candidates.iter().enumerate() {
        let tau = predicted_delay(anchor, *p);
        matrix.set_column(
            xi,
            &delay_vector(tau, scene.subcarrier_count, scene.subcarrier_spacing),
        );
    }
    matrix
}

/// Angle and delay dictionaries for every anchor, built once per scene and
/// grid and reused across trials.
#[derive(Debug, Clone)]
pub struct FusionDictionaries {
    pub grid: FusionGrid,
    pub anchors: Vec<VirtualAnchor>,
    pub angle: Vec<AngleDictionary>,
    pub delay: Vec<CMatrix>,
    pub(crate) n_rx: usize,
    pub(crate) n_subcarriers: usize,
}

impl FusionDictionaries {
    pub fn build(anchors: &[VirtualAnchor], grid: &FusionGrid, scene: &Scene) -> Result<Self> {
        scene.validate()?;
        let built = par::map_slice(anchors, |a| {
            (
                angle_dictionary(a, grid, scene),
                delay_dictionary(a, grid, scene),
            )
        });
        let (angle, delay) = built.into_iter().unzip();
        Ok(Self {
            grid: grid.clone(),
            anchors: anchors.to_vec(),
            angle,
            delay,
            n_rx: scene.n_rx,
            n_subcarriers: scene.subcarrier_count,
        })
    }
}
