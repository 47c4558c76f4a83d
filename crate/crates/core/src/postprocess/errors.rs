//! Discretisation errors against an exact solution.

use crate::error::Result;
use crate::fe_values::FemValues;
use crate::mesh::MeshGeometry;
use crate::problems::InterfaceProblem;
use crate::ref_fem::{compute_quadrature, BasisKind, FemType, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    H1Semi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub level: u32,
    pub dofs: usize,
    pub l2_error: f64,
    pub h1_semi_error: f64,
}

/// L2 and H1-seminorm errors of the nodal function `u` on the mapped sub-cells.
///
/// The exact-solution branch at a quadrature point follows the sign of the
/// discrete level set.
pub fn integrate_difference_norms(
    geo: &MeshGeometry,
    u: &[f64],
    problem: &dyn InterfaceProblem,
) -> Result<(f64, f64)> {
    let rules: Vec<QuadratureRule> = FemType::ALL
        .iter()
        .map(|&t| compute_quadrature(t))
        .collect();
    let mut fev = FemValues::new();
    let (mut l2, mut h1) = (0.0, 0.0);
    for (patch, info) in geo.cutinfos.iter().enumerate() {
        let rule = &rules[info.femtype.id() as usize];
        fev.reinit(
            patch,
            &info.nodes,
            info.femtype,
            BasisKind::Standard,
            info.split,
            rule,
        )?;
        let g = geo.mesh.global_nodes(patch);
        for q in 0..fev.n_points() {
            let domain = if fev.compute_local_disc_chi(q, &info.local_disc_chi) < 0.0 {
                -1
            } else {
                1
            };
            let p = &fev.points[q];
            let mut uh = 0.0;
            let mut grad = nalgebra::Vector2::zeros();
            for i in 0..9 {
                uh += u[g[i]] * fev.shape_value[q][i];
                grad += fev.shape_grad[q][i] * u[g[i]];
            }
            let e = uh - problem.exact(p, domain);
            let de = grad - problem.exact_grad(p, domain);
            l2 += e * e * fev.jxw[q];
            h1 += de.norm_squared() * fev.jxw[q];
        }
    }
    Ok((l2.sqrt(), h1.sqrt()))
}

/// `log2(e_l / e_{l+1})` for consecutive levels.
pub fn convergence_rates(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
