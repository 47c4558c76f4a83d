//! Sub-cells of all patches with their sub-domain markers.

use std::collections::BTreeMap;

use nalgebra::Point2;

use super::MeshGeometry;

/// One sub-quadrilateral or sub-triangle of a patch.
#[derive(Debug, Clone, PartialEq)]
pub struct SubCell {
    pub patch: usize,
    /// Local node numbers, counter-clockwise.
    pub local: Vec<usize>,
    /// Global node numbers.
    pub global: Vec<usize>,
    pub vertices: Vec<Point2<f64>>,
    /// 1 for the inner discrete sub-domain, 2 for the outer one.
    pub marker: u8,
}

impl SubCell {
    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| (self.vertices[(k + 1) % n] - self.vertices[k]).norm())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubCellMesh {
    pub cells: Vec<SubCell>,
    /// Sub-cell edges separating the two markers, as global node pairs.
    pub interface_edges: Vec<(usize, usize)>,
    pub positions: Vec<Point2<f64>>,
}

impl SubCellMesh {
    pub fn interface_length(&self) -> f64 {
        self.interface_edges
            .iter()
            .map(|&(a, b)| (self.positions[b] - self.positions[a]).norm())
            .sum()
    }
}

/// Shoelace formula.
pub fn polygon_area(v: &[Point2<f64>]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|k| {
            let (a, b) = (v[k], v[(k + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Marker of a sub-cell from the sign of the discrete level set at its centroid.
pub fn marker_from_chi(chi_centroid: f64) -> u8 {
    if chi_centroid < 0.0 {
        1
    } else {
        2
    }
}

pub fn extract_subcells(geo: &MeshGeometry) -> SubCellMesh {
    let mesh = &geo.mesh;
    let mut cells = Vec::new();
    let mut edge_markers: BTreeMap<(usize, usize), u8> = BTreeMap::new();
    for (patch, info) in geo.cutinfos.iter().enumerate() {
        let global = mesh.global_nodes(patch);
        for local in info.femtype.cells() {
            let chi =
                local.iter().map(|&k| info.local_disc_chi[k]).sum::<f64>() / local.len() as f64;
            let marker = marker_from_chi(chi);
            let g: Vec<usize> = local.iter().map(|&k| global[k]).collect();
            let n = g.len();
            for k in 0..n {
                let (a, b) = (g[k], g[(k + 1) % n]);
                *edge_markers.entry((a.min(b), a.max(b))).or_default() |= marker;
            }
            cells.push(SubCell {
                patch,
                local: local.to_vec(),
                global: g,
                vertices: local.iter().map(|&k| info.nodes[k]).collect(),
                marker,
            });
        }
    }
    let interface_edges = edge_markers
        .into_iter()
        .filter(|&(_, m)| m == 3)
        .map(|(e, _)| e)
        .collect();
    SubCellMesh {
        cells,
        interface_edges,
        positions: geo.node_positions(),
    }
}
