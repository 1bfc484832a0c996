use crate::channel::Scene;
use crate::geometry::{Line, Point2};
use crate::{Error, Result};

/// A (possibly virtual) transmitter position seen by one propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualAnchor {
    /// Path index: 0 is the BS itself, `l >= 1` the mirror across reflector `l`.
    pub index: usize,
    pub position: Point2,
    /// Reflector that created the anchor; `None` for the BS.
    pub reflector: Option<Line>,
}

impl VirtualAnchor {
    pub fn is_line_of_sight(&self) -> bool {
        self.reflector.is_none()
    }
}

/// The BS followed by its mirror image across every reflector line.
pub fn virtual_anchors(scene: &Scene) -> Result<Vec<VirtualAnchor>> {
    let bs = scene.bs_position;
    let mut out = vec![VirtualAnchor {
        index: 0,
        position: bs,
        reflector: None,
    }];
    for (i, wall) in scene.reflectors.iter().enumerate() {
        if !(0.0..std::f64::consts::PI).contains(&wall.direction) {
            return Err(Error::Argument(format!(
                "reflector {} direction outside [0, pi)",
                i + 1
            )));
        }
        if wall.signed_distance(bs).abs() < 1e-9 {
            return Err(Error::Geometry(format!(
                "reflector {} passes through the base station",
                i + 1
            )));
        }
        out.push(VirtualAnchor {
            index: i + 1,
            position: wall.mirror(bs),
            reflector: Some(*wall),
        });
    }
    Ok(out)
}
