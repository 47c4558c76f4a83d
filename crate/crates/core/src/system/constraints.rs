//! Dirichlet constraints and their symmetric elimination.

use nalgebra::Point2;

use super::{CsrMatrix, DofHandler, HierarchicalTransform};

/// Prescribed values of constrained dofs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constraints {
    values: Vec<Option<f64>>,
}

impl Constraints {
    pub fn new(n: usize) -> Self {
        Self {
            values: vec![None; n],
        }
    }

    pub fn set(&mut self, dof: usize, value: f64) {
        self.values[dof] = Some(value);
    }

    pub fn get(&self, dof: usize) -> Option<f64> {
        self.values.get(dof).copied().flatten()
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.get(dof).is_some()
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the prescribed values into `x`.
    pub fn distribute(&self, x: &mut [f64]) {
        for (xi, v) in x.iter_mut().zip(&self.values) {
            if let Some(v) = v {
                *xi = *v;
            }
        }
    }
}

/// Constrains every boundary dof to `g` at its physical position.
///
/// With a hierarchical transform the constrained values are the coefficients
/// reproducing the nodal boundary values.
pub fn interpolate_boundary_values(
    dofs: &DofHandler,
    positions: &[Point2<f64>],
    g: impl Fn(&Point2<f64>) -> f64,
    transform: Option<&HierarchicalTransform>,
) -> Constraints {
    let nodal: Vec<f64> = (0..dofs.n_dofs)
        .map(|i| {
            if dofs.boundary[i] {
                g(&positions[i])
            } else {
                0.0
            }
        })
        .collect();
    let mut c = Constraints::new(dofs.n_dofs);
    for i in (0..dofs.n_dofs).filter(|&i| dofs.boundary[i]) {
        let v = match transform {
            Some(s) => nodal[i] - s.coarse[i].iter().map(|&(k, w)| w * nodal[k]).sum::<f64>(),
            None => nodal[i],
        };
        c.set(i, v);
    }
    c
}

/// Zeroes constrained rows and columns, puts one on their diagonal and moves
/// the known column contributions to the right-hand side.
pub fn apply_constraints(a: &mut CsrMatrix, b: &mut [f64], c: &Constraints) {
    if c.is_empty() {
        return;
    }
    for i in 0..a.n {
        match c.get(i) {
            Some(v) => {
                for p in a.row(i) {
                    a.values[p] = if a.cols[p] == i { 1.0 } else { 0.0 };
                }
                b[i] = v;
            }
            None => {
                for p in a.row(i) {
                    if let Some(v) = c.get(a.cols[p]) {
                        b[i] -= a.values[p] * v;
                        a.values[p] = 0.0;
                    }
                }
            }
        }
    }
}
