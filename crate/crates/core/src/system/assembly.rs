//! Assembly of the stiffness matrix and load vectors.

use crate::error::Result;
use crate::fe_values::FemValues;
use crate::levelset::Color;
use crate::mesh::{MeshGeometry, SubCellMesh};
use crate::problems::InterfaceProblem;
use crate::ref_fem::{compute_quadrature, gauss2, BasisKind, FemType, QuadratureRule};

use super::{Constraints, CsrMatrix, DofHandler, HierarchicalTransform};

/// Matrix, right-hand side, solution and Dirichlet data of one discrete problem.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub solution: Vec<f64>,
    pub constraints: Constraints,
}

fn domain_of(chi: f64) -> Color {
    if chi < 0.0 {
        -1
    } else {
        1
    }
}

/// Calls `f` with the mapped values of every patch, in patch order.
fn for_each_patch(
    geo: &MeshGeometry,
    kind: BasisKind,
    mut f: impl FnMut(usize, &FemValues, &[Color]),
) -> Result<()> {
    let rules: Vec<QuadratureRule> = FemType::ALL
        .iter()
        .map(|&t| compute_quadrature(t))
        .collect();
    let mut fev = FemValues::new();
    let mut domains = Vec::new();
    for (patch, info) in geo.cutinfos.iter().enumerate() {
        let rule = &rules[info.femtype.id() as usize];
        fev.reinit(patch, &info.nodes, info.femtype, kind, info.split, rule)?;
        domains.clear();
        domains.extend(
            (0..fev.n_points())
                .map(|q| domain_of(fev.compute_local_disc_chi(q, &info.local_disc_chi))),
        );
        if cfg!(debug_assertions) {
            for q in 1..fev.n_points() {
                if fev.cells[q] == fev.cells[q - 1] {
                    debug_assert_eq!(
                        domains[q],
                        domains[q - 1],
                        "kappa changes inside a sub-cell of patch {patch}"
                    );
                }
            }
        }
        f(patch, &fev, &domains);
    }
    Ok(())
}

pub fn assemble_matrix(
    dofs: &DofHandler,
    geo: &MeshGeometry,
    problem: &dyn InterfaceProblem,
    kind: BasisKind,
) -> Result<CsrMatrix> {
    let mut a = dofs.new_matrix();
    let mut local = [[0.0; 9]; 9];
    for_each_patch(geo, kind, |patch, fev, domains| {
        local = [[0.0; 9]; 9];
        for q in 0..fev.n_points() {
            let w = problem.kappa(domains[q]) * fev.jxw[q];
            let g = &fev.shape_grad[q];
            for i in 0..9 {
                for j in 0..9 {
                    local[i][j] += w * g[j].dot(&g[i]);
                }
            }
        }
        for (i, row) in local.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                a.values[dofs.position(patch, i, j)] += v;
            }
        }
    })?;
    Ok(a)
}

pub fn assemble_rhs(
    dofs: &DofHandler,
    geo: &MeshGeometry,
    problem: &dyn InterfaceProblem,
    kind: BasisKind,
) -> Result<Vec<f64>> {
    let mut b = vec![0.0; dofs.n_dofs];
    for_each_patch(geo, kind, |patch, fev, domains| {
        let g = dofs.local_dofs(patch);
        for q in 0..fev.n_points() {
            let f = problem.source(&fev.points[q], domains[q]) * fev.jxw[q];
            for i in 0..9 {
                b[g[i]] += f * fev.shape_value[q][i];
            }
        }
    })?;
    Ok(b)
}

/// `int_{Gamma_h} g phi_i ds` for the nodal basis, or its hierarchical
/// counterpart when `transform` is given.
pub fn assemble_interface_flux_rhs(
    sub: &SubCellMesh,
    g: f64,
    transform: Option<&HierarchicalTransform>,
) -> Vec<f64> {
    let mut b = vec![0.0; sub.positions.len()];
    if g != 0.0 {
        for &(p, q) in &sub.interface_edges {
            let len = (sub.positions[q] - sub.positions[p]).norm();
            for t in gauss2() {
                b[p] += 0.5 * len * g * (1.0 - t);
                b[q] += 0.5 * len * g * t;
            }
        }
    }
    match transform {
        Some(s) => s.transpose_apply(&b),
        None => b,
    }
}
