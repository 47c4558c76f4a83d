//! Conversion between hierarchical coefficients and nodal values.
//!
//! A function with hierarchical coefficients `c` has nodal values
//! `u_j = c_j + sum_k w_jk c_k`, where `k` runs over the patch corners whose
//! coarse functions do not vanish at node `j`. Corner nodes have no such terms.

use crate::mesh::{Edge, MeshGeometry, CENTER};
use crate::ref_fem::coarse_value;

use super::DofHandler;

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalTransform {
    /// Coarse contributions `(corner dof, weight)` for every dof.
    pub coarse: Vec<Vec<(usize, f64)>>,
}

impl HierarchicalTransform {
    pub fn new(geo: &MeshGeometry, dofs: &DofHandler) -> Self {
        let mesh = &geo.mesh;
        let mut coarse: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dofs.n_dofs];
        let mut done = vec![false; dofs.n_dofs];
        for (patch, info) in geo.cutinfos.iter().enumerate() {
            let g = mesh.global_nodes(patch);
            for edge in Edge::ALL {
                let (a, m, b) = edge.nodes();
                if done[g[m]] {
                    continue;
                }
                let t = geo.edge_fractions[mesh.edge_id(patch, edge)];
                coarse[g[m]] = vec![(g[a], 1.0 - t), (g[b], t)];
                done[g[m]] = true;
            }
            let xi = mesh.to_reference(patch, &info.nodes[CENTER]);
            coarse[g[CENTER]] = crate::mesh::CORNERS
                .iter()
                .map(|&c| (g[c], coarse_value(info.split, c, &xi)))
                .filter(|&(_, w)| w != 0.0)
                .collect();
        }
        Self { coarse }
    }

    /// Nodal values from coefficients.
    pub fn to_nodal(&self, c: &[f64]) -> Vec<f64> {
        self.coarse
            .iter()
            .enumerate()
            .map(|(j, terms)| c[j] + terms.iter().map(|&(k, w)| w * c[k]).sum::<f64>())
            .collect()
    }

    /// Coefficients from nodal values.
    pub fn to_coefficients(&self, u: &[f64]) -> Vec<f64> {
        self.coarse
            .iter()
            .enumerate()
            .map(|(j, terms)| u[j] - terms.iter().map(|&(k, w)| w * u[k]).sum::<f64>())
            .collect()
    }

    /// Applies the transpose of the coefficient-to-nodal map, e.g. to load vectors.
    pub fn transpose_apply(&self, b: &[f64]) -> Vec<f64> {
        let mut out = b.to_vec();
        for (j, terms) in self.coarse.iter().enumerate() {
            for &(k, w) in terms {
                out[k] += w * b[j];
            }
        }
        out
    }
}
