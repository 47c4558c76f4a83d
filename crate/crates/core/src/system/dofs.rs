//! Global numbering of the fine lattice nodes and the patch-stencil sparsity pattern.

use crate::mesh::PatchMesh;

use super::sparse::CsrMatrix;

/// One degree of freedom per fine lattice node; shared nodes get one index.
#[derive(Debug, Clone, PartialEq)]
pub struct DofHandler {
    pub mesh: PatchMesh,
    pub n_dofs: usize,
    pub boundary: Vec<bool>,
    /// Storage positions of the 9x9 local entries of each patch in the global matrix.
    positions: Vec<[usize; 81]>,
    pattern: CsrMatrix,
}

impl DofHandler {
    pub fn new(mesh: &PatchMesh) -> Self {
        let n1 = mesh.nodes_per_dim();
        let n_dofs = mesh.n_nodes();
        let boundary = (0..n_dofs)
            .map(|g| {
                let (i, j) = (g % n1, g / n1);
                i == 0 || j == 0 || i == n1 - 1 || j == n1 - 1
            })
            .collect();

        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n_dofs];
        for patch in 0..mesh.n_patches() {
            let g = mesh.global_nodes(patch);
            for &a in &g {
                rows[a].extend_from_slice(&g);
            }
        }
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
        }
        let pattern = CsrMatrix::from_pattern(rows);
        let positions = (0..mesh.n_patches())
            .map(|patch| {
                let g = mesh.global_nodes(patch);
                std::array::from_fn(|k| {
                    pattern
                        .position(g[k / 9], g[k % 9])
                        .expect("patch couplings are in the pattern")
                })
            })
            .collect();
        Self {
            mesh: mesh.clone(),
            n_dofs,
            boundary,
            positions,
            pattern,
        }
    }

    pub fn local_dofs(&self, patch: usize) -> [usize; 9] {
        self.mesh.global_nodes(patch)
    }

    /// Storage position of local entry `(i, j)` of `patch`.
    pub fn position(&self, patch: usize, i: usize, j: usize) -> usize {
        self.positions[patch][9 * i + j]
    }

    /// Zero matrix with the patch-stencil pattern.
    pub fn new_matrix(&self) -> CsrMatrix {
        self.pattern.clone()
    }

    /// Whether the node lies on the patch corner lattice.
    pub fn is_coarse(&self, dof: usize) -> bool {
        let n1 = self.mesh.nodes_per_dim();
        (dof % n1) % 2 == 0 && (dof / n1) % 2 == 0
    }

    pub fn n_coarse(&self) -> usize {
        (0..self.n_dofs).filter(|&d| self.is_coarse(d)).count()
    }
}
