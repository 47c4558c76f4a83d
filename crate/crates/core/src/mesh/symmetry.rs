//! Symmetries of the unit square acting on reference coordinates.

use nalgebra::Point2;

use super::REF_NODES;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipX,
    FlipY,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipX,
        Symmetry::FlipY,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    pub fn apply(self, p: &Point2<f64>) -> Point2<f64> {
        let (x, y) = (p.x, p.y);
        let (u, v) = match self {
            Symmetry::Identity => (x, y),
            Symmetry::Rot90 => (1.0 - y, x),
            Symmetry::Rot180 => (1.0 - x, 1.0 - y),
            Symmetry::Rot270 => (y, 1.0 - x),
            Symmetry::FlipX => (1.0 - x, y),
            Symmetry::FlipY => (x, 1.0 - y),
            Symmetry::Transpose => (y, x),
            Symmetry::AntiTranspose => (1.0 - y, 1.0 - x),
        };
        Point2::new(u, v)
    }

    pub fn inverse(self) -> Symmetry {
        match self {
            Symmetry::Rot90 => Symmetry::Rot270,
            Symmetry::Rot270 => Symmetry::Rot90,
            s => s,
        }
    }

    /// Whether the two patch diagonals are exchanged.
    pub fn swaps_diagonals(self) -> bool {
        matches!(
            self,
            Symmetry::Rot90 | Symmetry::Rot270 | Symmetry::FlipX | Symmetry::FlipY
        )
    }

    /// Image of local node `k`.
    pub fn node(self, k: usize) -> usize {
        let p = self.apply(&Point2::new(REF_NODES[k][0], REF_NODES[k][1]));
        (2.0 * p.y) as usize * 3 + (2.0 * p.x) as usize
    }
}
