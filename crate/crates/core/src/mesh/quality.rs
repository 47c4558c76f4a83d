//! Size and shape statistics of the sub-cell mesh.

use super::SubCellMesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshStatistics {
    pub area_max: f64,
    pub area_min: f64,
    pub area_ratio: f64,
    pub edge_max: f64,
    pub edge_min: f64,
    /// Largest ratio of longest to shortest edge within one cell.
    pub max_aspect: f64,
}

pub fn mesh_statistics(sub: &SubCellMesh) -> MeshStatistics {
    let mut s = MeshStatistics {
        area_max: 0.0,
        area_min: f64::INFINITY,
        area_ratio: 0.0,
        edge_max: 0.0,
        edge_min: f64::INFINITY,
        max_aspect: 0.0,
    };
    for cell in &sub.cells {
        let area = cell.area();
        s.area_max = s.area_max.max(area);
        s.area_min = s.area_min.min(area);
        let edges = cell.edge_lengths();
        let longest = edges.iter().copied().fold(0.0, f64::max);
        let shortest = edges.iter().copied().fold(f64::INFINITY, f64::min);
        s.edge_max = s.edge_max.max(longest);
        s.edge_min = s.edge_min.min(shortest);
        s.max_aspect = s.max_aspect.max(longest / shortest);
    }
    s.area_ratio = s.area_max / s.area_min;
    s
}
