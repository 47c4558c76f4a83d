//! Mapped shape functions, gradients and Jacobians at quadrature points.

use nalgebra::{Matrix2, Point2, Vector2};

use crate::error::{Error, Result};
use crate::ref_fem::{basis_change, cell_shapes, BasisKind, CoarseSplit, FemType, QuadratureRule};

/// Values of the nine field basis functions at the quadrature points of one patch.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FemValues {
    pub shape_value: Vec<[f64; 9]>,
    pub shape_grad: Vec<[Vector2<f64>; 9]>,
    /// Nodal (Lagrange) values, used for the discrete level set.
    pub lagrange_value: Vec<[f64; 9]>,
    pub jacobian_det: Vec<f64>,
    /// Jacobian determinant times quadrature weight.
    pub jxw: Vec<f64>,
    pub points: Vec<Point2<f64>>,
    pub cells: Vec<usize>,
}

impl FemValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_points(&self) -> usize {
        self.jxw.len()
    }

    /// Evaluates the piecewise map given by the node positions `nodes`.
    ///
    /// Geometry always uses the Lagrange functions; `kind` and `split` only
    /// select the field basis.
    #[allow(clippy::too_many_arguments)]
    pub fn reinit(
        &mut self,
        patch: usize,
        nodes: &[Point2<f64>; 9],
        femtype: FemType,
        kind: BasisKind,
        split: CoarseSplit,
        rule: &QuadratureRule,
    ) -> Result<()> {
        let nq = rule.len();
        self.shape_value.clear();
        self.shape_grad.clear();
        self.lagrange_value.clear();
        self.jacobian_det.clear();
        self.jxw.clear();
        self.points.clear();
        self.cells.clear();

        let origin = nodes[0];
        let size = nodes[8] - nodes[0];
        let area = size.x * size.y;
        let change = (kind == BasisKind::Hierarchical).then(|| {
            let xi = std::array::from_fn(|k| {
                Point2::new(
                    (nodes[k].x - origin.x) / size.x,
                    (nodes[k].y - origin.y) / size.y,
                )
            });
            basis_change(kind, split, &xi)
        });

        for q in 0..nq {
            let cell = rule.cells[q];
            let shapes = cell_shapes(femtype, cell, &rule.points[q]);
            let mut jac = Matrix2::zeros();
            let mut x = Vector2::zeros();
            for (k, v, g) in &shapes {
                jac += nodes[*k].coords * g.transpose();
                x += nodes[*k].coords * *v;
            }
            let det = jac.determinant();
            if det < 1e-14 * area {
                return Err(Error::SingularJacobian { patch, det });
            }
            let jinv_t = jac
                .try_inverse()
                .ok_or(Error::SingularJacobian { patch, det })?
                .transpose();
            let mut phi = [0.0; 9];
            let mut grad = [Vector2::zeros(); 9];
            for (k, v, g) in &shapes {
                phi[*k] = *v;
                grad[*k] = jinv_t * g;
            }
            self.lagrange_value.push(phi);
            match &change {
                None => {
                    self.shape_value.push(phi);
                    self.shape_grad.push(grad);
                }
                Some(c) => {
                    self.shape_value.push(std::array::from_fn(|i| {
                        (0..9).map(|j| c[j][i] * phi[j]).sum()
                    }));
                    self.shape_grad.push(std::array::from_fn(|i| {
                        (0..9).map(|j| grad[j] * c[j][i]).sum()
                    }));
                }
            }
            self.jacobian_det.push(det);
            self.jxw.push(det * rule.weights[q]);
            self.points.push(Point2::from(x));
            self.cells.push(cell);
        }
        Ok(())
    }

    /// Discrete level set at quadrature point `q`.
    pub fn compute_local_disc_chi(&self, q: usize, local_disc_chi: &[f64; 9]) -> f64 {
        self.lagrange_value[q]
            .iter()
            .zip(local_disc_chi)
            .map(|(p, c)| p * c)
            .sum()
    }
}
