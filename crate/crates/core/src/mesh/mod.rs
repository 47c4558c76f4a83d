//! Structured patch grid, interface classification and local node placement.

pub mod classify;
pub mod placement;
pub mod quality;
pub mod subcells;
pub mod symmetry;

use nalgebra::Point2;

pub use classify::{
    classify_cut, set_material_ids, Configuration, CutFeatures, PatchClassification,
};
pub use placement::{init_fem, CutInfo, Diagonal, MeshGeometry, Placement};
pub use quality::{mesh_statistics, MeshStatistics};
pub use subcells::{extract_subcells, SubCell, SubCellMesh};

/// Local node positions on the reference patch, row-major on `{0, 1/2, 1}^2`.
pub const REF_NODES: [[f64; 2]; 9] = [
    [0.0, 0.0],
    [0.5, 0.0],
    [1.0, 0.0],
    [0.0, 0.5],
    [0.5, 0.5],
    [1.0, 0.5],
    [0.0, 1.0],
    [0.5, 1.0],
    [1.0, 1.0],
];

pub const CORNERS: [usize; 4] = [0, 2, 6, 8];
pub const CENTER: usize = 4;

/// Patch edges in canonical orientation (lower or left endpoint first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    Bottom,
    Left,
    Right,
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Left, Edge::Right, Edge::Top];

    /// `(start corner, midpoint node, end corner)`.
    pub fn nodes(self) -> (usize, usize, usize) {
        match self {
            Edge::Bottom => (0, 1, 2),
            Edge::Left => (0, 3, 6),
            Edge::Right => (2, 5, 8),
            Edge::Top => (6, 7, 8),
        }
    }

    pub fn midpoint(self) -> usize {
        self.nodes().1
    }

    pub fn from_midpoint(node: usize) -> Option<Edge> {
        Edge::ALL.into_iter().find(|e| e.midpoint() == node)
    }

    pub fn has_corner(self, corner: usize) -> bool {
        let (a, _, b) = self.nodes();
        a == corner || b == corner
    }

    pub fn opposite(self) -> Edge {
        match self {
            Edge::Bottom => Edge::Top,
            Edge::Top => Edge::Bottom,
            Edge::Left => Edge::Right,
            Edge::Right => Edge::Left,
        }
    }
}

/// Uniform grid of square patches over a square domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchMesh {
    pub lower: f64,
    pub upper: f64,
    pub level: u32,
    pub patches_per_dim: usize,
    pub patch_size: f64,
}

impl PatchMesh {
    /// Mesh on `(-1, 1)^2` with `4 * 2^level` patches per direction.
    pub fn new(level: u32) -> Self {
        Self::with_bounds(-1.0, 1.0, level)
    }

    pub fn with_bounds(lower: f64, upper: f64, level: u32) -> Self {
        let patches_per_dim = 4usize << level;
        Self {
            lower,
            upper,
            level,
            patches_per_dim,
            patch_size: (upper - lower) / patches_per_dim as f64,
        }
    }

    pub fn n_patches(&self) -> usize {
        self.patches_per_dim * self.patches_per_dim
    }

    /// Fine lattice nodes per direction.
    pub fn nodes_per_dim(&self) -> usize {
        2 * self.patches_per_dim + 1
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes_per_dim() * self.nodes_per_dim()
    }

    /// Coordinate of fine lattice line `i`.
    pub fn fine_coord(&self, i: usize) -> f64 {
        self.lower + i as f64 * (0.5 * self.patch_size)
    }

    pub fn fine_point(&self, i: usize, j: usize) -> Point2<f64> {
        Point2::new(self.fine_coord(i), self.fine_coord(j))
    }

    pub fn patch_ij(&self, patch: usize) -> (usize, usize) {
        (patch % self.patches_per_dim, patch / self.patches_per_dim)
    }

    pub fn patch_index(&self, pi: usize, pj: usize) -> usize {
        pj * self.patches_per_dim + pi
    }

    /// Fine lattice indices of local node `k` of `patch`.
    pub fn local_lattice(&self, patch: usize, k: usize) -> (usize, usize) {
        let (pi, pj) = self.patch_ij(patch);
        (2 * pi + k % 3, 2 * pj + k / 3)
    }

    /// Global node (degree of freedom) index of local node `k`.
    pub fn global_node(&self, patch: usize, k: usize) -> usize {
        let (i, j) = self.local_lattice(patch, k);
        j * self.nodes_per_dim() + i
    }

    pub fn global_nodes(&self, patch: usize) -> [usize; 9] {
        std::array::from_fn(|k| self.global_node(patch, k))
    }

    pub fn lattice_point(&self, patch: usize, k: usize) -> Point2<f64> {
        let (i, j) = self.local_lattice(patch, k);
        self.fine_point(i, j)
    }

    pub fn patch_origin(&self, patch: usize) -> Point2<f64> {
        self.lattice_point(patch, 0)
    }

    /// Index of the patch corner lattice point `(ci, cj)`.
    pub fn coarse_index(&self, ci: usize, cj: usize) -> usize {
        cj * (self.patches_per_dim + 1) + ci
    }

    /// Coarse lattice indices of a patch corner (`corner` in `CORNERS`).
    pub fn corner_coarse(&self, patch: usize, corner: usize) -> (usize, usize) {
        let (pi, pj) = self.patch_ij(patch);
        (pi + corner % 3 / 2, pj + corner / 3 / 2)
    }

    /// Identifier of a patch edge shared by the two adjacent patches.
    pub fn edge_id(&self, patch: usize, edge: Edge) -> usize {
        let (pi, pj) = self.patch_ij(patch);
        let n = self.patches_per_dim;
        match edge {
            Edge::Bottom => pj * n + pi,
            Edge::Top => (pj + 1) * n + pi,
            Edge::Left => n * (n + 1) + pi * n + pj,
            Edge::Right => n * (n + 1) + (pi + 1) * n + pj,
        }
    }

    pub fn n_edges(&self) -> usize {
        2 * self.patches_per_dim * (self.patches_per_dim + 1)
    }

    /// Maps physical coordinates of `patch` to `[0, 1]^2`.
    pub fn to_reference(&self, patch: usize, p: &Point2<f64>) -> Point2<f64> {
        let o = self.patch_origin(patch);
        Point2::new((p.x - o.x) / self.patch_size, (p.y - o.y) / self.patch_size)
    }

    pub fn from_reference(&self, patch: usize, xi: &Point2<f64>) -> Point2<f64> {
        let o = self.patch_origin(patch);
        Point2::new(o.x + self.patch_size * xi.x, o.y + self.patch_size * xi.y)
    }
}
