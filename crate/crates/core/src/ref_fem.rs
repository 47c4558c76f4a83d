//! Reference patches, shape functions and quadrature rules.
//!
//! Local nodes are numbered row-major on `{0, 1/2, 1}^2`. `P0` splits the
//! unit square into four quadrilaterals, `P1` to `P3` into eight triangles:
//! `P2` cuts every sub-square along `/`, `P3` along `\`, and `P1` along the
//! diagonals through the patch centre.

use nalgebra::{Point2, Vector2};

use crate::mesh::REF_NODES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FemType {
    P0,
    P1,
    P2,
    P3,
}

impl FemType {
    pub const ALL: [FemType; 4] = [FemType::P0, FemType::P1, FemType::P2, FemType::P3];

    pub fn id(self) -> u8 {
        match self {
            FemType::P0 => 0,
            FemType::P1 => 1,
            FemType::P2 => 2,
            FemType::P3 => 3,
        }
    }

    pub fn is_triangulated(self) -> bool {
        self != FemType::P0
    }

    /// Local node lists of the sub-cells, counter-clockwise.
    pub fn cells(self) -> &'static [&'static [usize]] {
        match self {
            FemType::P0 => &[&[0, 1, 4, 3], &[1, 2, 5, 4], &[3, 4, 7, 6], &[4, 5, 8, 7]],
            FemType::P1 => &[
                &[0, 1, 4],
                &[0, 4, 3],
                &[1, 2, 4],
                &[2, 5, 4],
                &[3, 4, 6],
                &[4, 7, 6],
                &[4, 5, 8],
                &[4, 8, 7],
            ],
            FemType::P2 => &[
                &[0, 1, 4],
                &[0, 4, 3],
                &[1, 2, 5],
                &[1, 5, 4],
                &[3, 4, 7],
                &[3, 7, 6],
                &[4, 5, 8],
                &[4, 8, 7],
            ],
            FemType::P3 => &[
                &[0, 1, 3],
                &[1, 4, 3],
                &[1, 2, 4],
                &[2, 5, 4],
                &[3, 4, 6],
                &[4, 7, 6],
                &[4, 5, 7],
                &[5, 8, 7],
            ],
        }
    }

    pub fn swap_diagonal(self) -> FemType {
        match self {
            FemType::P2 => FemType::P3,
            FemType::P3 => FemType::P2,
            t => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diagonal {
    /// From corner 0 to corner 8.
    Main,
    /// From corner 2 to corner 6.
    Anti,
}

impl Diagonal {
    pub fn swap(self) -> Diagonal {
        match self {
            Diagonal::Main => Diagonal::Anti,
            Diagonal::Anti => Diagonal::Main,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Standard,
    Hierarchical,
}

/// Coarse space of a patch in the hierarchical basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoarseSplit {
    /// Bilinear on the whole patch.
    Bilinear,
    /// Linear on the two triangles on either side of a diagonal.
    Triangles(Diagonal),
}

pub fn ref_node(k: usize) -> Point2<f64> {
    Point2::new(REF_NODES[k][0], REF_NODES[k][1])
}

/// Index of the sub-cell owning `xi`; boundaries belong to the upper/right cell.
pub fn locate(femtype: FemType, xi: &Point2<f64>) -> usize {
    let ix = usize::from(xi.x >= 0.5);
    let iy = usize::from(xi.y >= 0.5);
    let quad = 2 * iy + ix;
    if !femtype.is_triangulated() {
        return quad;
    }
    let first = 2 * quad;
    let lambda = barycentric(femtype.cells()[first], xi);
    if lambda.iter().all(|&l| l >= -1e-14) {
        first
    } else {
        first + 1
    }
}

fn barycentric(tri: &[usize], xi: &Point2<f64>) -> [f64; 3] {
    let (a, b, c) = (ref_node(tri[0]), ref_node(tri[1]), ref_node(tri[2]));
    let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    let l1 = ((xi.x - a.x) * (c.y - a.y) - (c.x - a.x) * (xi.y - a.y)) / det;
    let l2 = ((b.x - a.x) * (xi.y - a.y) - (xi.x - a.x) * (b.y - a.y)) / det;
    [1.0 - l1 - l2, l1, l2]
}

/// Nonzero Lagrange functions of one sub-cell at `xi`: `(local node, value, reference gradient)`.
pub fn cell_shapes(
    femtype: FemType,
    cell: usize,
    xi: &Point2<f64>,
) -> Vec<(usize, f64, Vector2<f64>)> {
    let nodes = femtype.cells()[cell];
    if nodes.len() == 4 {
        let a = ref_node(nodes[0]);
        let u = 2.0 * (xi.x - a.x);
        let v = 2.0 * (xi.y - a.y);
        let vals = [(1.0 - u) * (1.0 - v), u * (1.0 - v), u * v, (1.0 - u) * v];
        let grads = [
            Vector2::new(-(1.0 - v), -(1.0 - u)),
            Vector2::new(1.0 - v, -u),
            Vector2::new(v, u),
            Vector2::new(-v, 1.0 - u),
        ];
        (0..4)
            .map(|k| (nodes[k], vals[k], grads[k] * 2.0))
            .collect()
    } else {
        let (a, b, c) = (ref_node(nodes[0]), ref_node(nodes[1]), ref_node(nodes[2]));
        let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        let g1 = Vector2::new(c.y - a.y, -(c.x - a.x)) / det;
        let g2 = Vector2::new(-(b.y - a.y), b.x - a.x) / det;
        let lambda = barycentric(nodes, xi);
        vec![
            (nodes[0], lambda[0], -g1 - g2),
            (nodes[1], lambda[1], g1),
            (nodes[2], lambda[2], g2),
        ]
    }
}

/// Coarse function attached to patch corner `corner` at reference point `xi`.
pub fn coarse_value(split: CoarseSplit, corner: usize, xi: &Point2<f64>) -> f64 {
    let (x, y) = (xi.x, xi.y);
    match split {
        CoarseSplit::Bilinear => match corner {
            0 => (1.0 - x) * (1.0 - y),
            2 => x * (1.0 - y),
            6 => (1.0 - x) * y,
            8 => x * y,
            _ => 0.0,
        },
        CoarseSplit::Triangles(Diagonal::Main) => {
            if x >= y {
                match corner {
                    0 => 1.0 - x,
                    2 => x - y,
                    8 => y,
                    _ => 0.0,
                }
            } else {
                match corner {
                    0 => 1.0 - y,
                    6 => y - x,
                    8 => x,
                    _ => 0.0,
                }
            }
        }
        CoarseSplit::Triangles(Diagonal::Anti) => {
            if x + y <= 1.0 {
                match corner {
                    0 => 1.0 - x - y,
                    2 => x,
                    6 => y,
                    _ => 0.0,
                }
            } else {
                match corner {
                    2 => 1.0 - y,
                    6 => 1.0 - x,
                    8 => x + y - 1.0,
                    _ => 0.0,
                }
            }
        }
    }
}

/// Change of basis from nodal to hierarchical functions.
///
/// `c[j][i]` is the coefficient of Lagrange function `j` in hierarchical
/// function `i`. Corner functions become the coarse functions sampled at the
/// node positions `xi`, all others stay nodal.
pub fn basis_change(kind: BasisKind, split: CoarseSplit, xi: &[Point2<f64>; 9]) -> [[f64; 9]; 9] {
    let mut c = [[0.0; 9]; 9];
    for (j, row) in c.iter_mut().enumerate() {
        row[j] = 1.0;
    }
    if kind == BasisKind::Hierarchical {
        for corner in crate::mesh::CORNERS {
            for j in 0..9 {
                c[j][corner] = coarse_value(split, corner, &xi[j]);
            }
        }
    }
    c
}

/// Shape functions on an undeformed reference patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSet {
    pub femtype: FemType,
    pub kind: BasisKind,
    pub split: CoarseSplit,
}

impl ShapeSet {
    pub fn standard(femtype: FemType) -> Self {
        Self {
            femtype,
            kind: BasisKind::Standard,
            split: CoarseSplit::Bilinear,
        }
    }

    pub fn hierarchical(femtype: FemType, split: CoarseSplit) -> Self {
        Self {
            femtype,
            kind: BasisKind::Hierarchical,
            split,
        }
    }

    fn change(&self) -> [[f64; 9]; 9] {
        basis_change(self.kind, self.split, &std::array::from_fn(ref_node))
    }

    pub fn values(&self, xi: &Point2<f64>) -> [f64; 9] {
        let cell = locate(self.femtype, xi);
        let mut phi = [0.0; 9];
        for (k, v, _) in cell_shapes(self.femtype, cell, xi) {
            phi[k] = v;
        }
        let c = self.change();
        std::array::from_fn(|i| (0..9).map(|j| c[j][i] * phi[j]).sum())
    }

    pub fn grads(&self, xi: &Point2<f64>) -> [Vector2<f64>; 9] {
        let cell = locate(self.femtype, xi);
        let mut g = [Vector2::zeros(); 9];
        for (k, _, d) in cell_shapes(self.femtype, cell, xi) {
            g[k] = d;
        }
        let c = self.change();
        std::array::from_fn(|i| (0..9).map(|j| g[j] * c[j][i]).sum())
    }

    pub fn value(&self, i: usize, xi: &Point2<f64>) -> f64 {
        self.values(xi)[i]
    }

    pub fn grad(&self, i: usize, xi: &Point2<f64>) -> Vector2<f64> {
        self.grads(xi)[i]
    }
}

/// Quadrature on the reference patch; every point belongs to one sub-cell.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<Point2<f64>>,
    pub weights: Vec<f64>,
    pub cells: Vec<usize>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Two-point Gauss abscissae on `[0, 1]`.
pub fn gauss2() -> [f64; 2] {
    let d = 0.5 / 3f64.sqrt();
    [0.5 - d, 0.5 + d]
}

/// 2x2 Gauss per sub-quadrilateral, or the interior three-point rule per sub-triangle.
pub fn compute_quadrature(femtype: FemType) -> QuadratureRule {
    let mut rule = QuadratureRule {
        points: Vec::new(),
        weights: Vec::new(),
        cells: Vec::new(),
    };
    for (cell, nodes) in femtype.cells().iter().enumerate() {
        if nodes.len() == 4 {
            let a = ref_node(nodes[0]);
            for gy in gauss2() {
                for gx in gauss2() {
                    rule.points
                        .push(Point2::new(a.x + 0.5 * gx, a.y + 0.5 * gy));
                    rule.weights.push(1.0 / 16.0);
                    rule.cells.push(cell);
                }
            }
        } else {
            let v: Vec<Point2<f64>> = nodes.iter().map(|&k| ref_node(k)).collect();
            for k in 0..3 {
                let mut lambda = [1.0 / 6.0; 3];
                lambda[k] = 2.0 / 3.0;
                let p = v[0].coords * lambda[0] + v[1].coords * lambda[1] + v[2].coords * lambda[2];
                rule.points.push(Point2::from(p));
                rule.weights.push(1.0 / 24.0);
                rule.cells.push(cell);
            }
        }
    }
    rule
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_sets() -> Vec<ShapeSet> {
        let mut v = Vec::new();
        for t in FemType::ALL {
            v.push(ShapeSet::standard(t));
        }
        v.push(ShapeSet::hierarchical(FemType::P0, CoarseSplit::Bilinear));
        v.push(ShapeSet::hierarchical(
            FemType::P1,
            CoarseSplit::Triangles(Diagonal::Main),
        ));
        v.push(ShapeSet::hierarchical(
            FemType::P1,
            CoarseSplit::Triangles(Diagonal::Anti),
        ));
        v.push(ShapeSet::hierarchical(
            FemType::P2,
            CoarseSplit::Triangles(Diagonal::Main),
        ));
        v.push(ShapeSet::hierarchical(
            FemType::P3,
            CoarseSplit::Triangles(Diagonal::Anti),
        ));
        v
    }

    #[test]
    fn nodal_property() {
        for t in FemType::ALL {
            let s = ShapeSet::standard(t);
            for j in 0..9 {
                let v = s.values(&ref_node(j));
                for (i, vi) in v.iter().enumerate() {
                    assert_eq!(*vi, if i == j { 1.0 } else { 0.0 }, "{t:?} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn bilinear_center_function() {
        let s = ShapeSet::standard(FemType::P0);
        assert!((s.value(4, &Point2::new(0.25, 0.25)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn hierarchical_fine_functions_vanish_at_corners() {
        for s in all_sets()
            .into_iter()
            .filter(|s| s.kind == BasisKind::Hierarchical)
        {
            for c in crate::mesh::CORNERS {
                let v = s.values(&ref_node(c));
                for i in [1, 3, 4, 5, 7] {
                    assert_eq!(v[i], 0.0);
                }
                assert_eq!(v[c], 1.0);
            }
        }
    }

    #[test]
    fn hierarchical_constant_representation() {
        // the constant 1 has coarse coefficients 1 and fine coefficients 0
        for s in all_sets()
            .into_iter()
            .filter(|s| s.kind == BasisKind::Hierarchical)
        {
            for p in [
                Point2::new(0.1, 0.7),
                Point2::new(0.6, 0.3),
                Point2::new(0.9, 0.9),
            ] {
                let v = s.values(&p);
                let sum: f64 = crate::mesh::CORNERS.iter().map(|&c| v[c]).sum();
                assert!((sum - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn basis_change_is_invertible() {
        for s in all_sets() {
            let c = s.change();
            let m = nalgebra::SMatrix::<f64, 9, 9>::from_fn(|i, j| c[i][j]);
            assert!((m.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_sizes_and_weights() {
        for t in FemType::ALL {
            let q = compute_quadrature(t);
            assert_eq!(q.len(), if t == FemType::P0 { 16 } else { 24 });
            assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            for (p, &c) in q.points.iter().zip(&q.cells) {
                assert_eq!(locate(t, p), c);
            }
        }
    }

    #[test]
    fn quadrature_integrates_x() {
        for t in FemType::ALL {
            let q = compute_quadrature(t);
            let ix: f64 = q.points.iter().zip(&q.weights).map(|(p, w)| p.x * w).sum();
            assert!((ix - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn quadrature_exact_for_quadratics_per_cell() {
        // int over [0,1]^2 of x^2, xy, y^2 is 1/3, 1/4, 1/3; piecewise rules must be exact
        for t in FemType::ALL {
            let q = compute_quadrature(t);
            let f = |g: &dyn Fn(&Point2<f64>) -> f64| -> f64 {
                q.points.iter().zip(&q.weights).map(|(p, w)| g(p) * w).sum()
            };
            assert!((f(&|p| p.x * p.x) - 1.0 / 3.0).abs() < 1e-15);
            assert!((f(&|p| p.x * p.y) - 0.25).abs() < 1e-15);
            assert!((f(&|p| p.y * p.y) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn p0_mass_products_are_exact() {
        // oracle: tensor product of 1D P1 mass matrices on [0, 1/2]
        let q = compute_quadrature(FemType::P0);
        let s = ShapeSet::standard(FemType::P0);
        let mut m = [[0.0; 9]; 9];
        for (p, w) in q.points.iter().zip(&q.weights) {
            let v = s.values(p);
            for i in 0..9 {
                for j in 0..9 {
                    m[i][j] += v[i] * v[j] * w;
                }
            }
        }
        // 1D mass on a uniform two-element mesh of [0, 1] with h = 1/2
        let m1 = [
            [1.0 / 6.0, 1.0 / 12.0, 0.0],
            [1.0 / 12.0, 1.0 / 3.0, 1.0 / 12.0],
            [0.0, 1.0 / 12.0, 1.0 / 6.0],
        ];
        for i in 0..9 {
            for j in 0..9 {
                let expect = m1[i % 3][j % 3] * m1[i / 3][j / 3];
                assert!((m[i][j] - expect).abs() < 1e-15, "{i} {j}");
            }
        }
    }

    #[test]
    fn edge_traces_are_piecewise_linear() {
        // on the outer boundary every function matches the 1D hat functions
        let hat = |k: usize, t: f64| -> f64 {
            let node = 0.5 * k as f64;
            (1.0 - 2.0 * (t - node).abs()).max(0.0)
        };
        let edges: [([usize; 3], fn(f64) -> Point2<f64>); 4] = [
            ([0, 1, 2], |t| Point2::new(t, 0.0)),
            ([6, 7, 8], |t| Point2::new(t, 1.0)),
            ([0, 3, 6], |t| Point2::new(0.0, t)),
            ([2, 5, 8], |t| Point2::new(1.0, t)),
        ];
        for t in FemType::ALL {
            let s = ShapeSet::standard(t);
            for (nodes, param) in &edges {
                for step in 0..=40 {
                    let tt = step as f64 / 40.0;
                    let v = s.values(&param(tt));
                    for i in 0..9 {
                        let expect = nodes
                            .iter()
                            .position(|&n| n == i)
                            .map_or(0.0, |k| hat(k, tt));
                        assert!((v[i] - expect).abs() < 1e-14, "{t:?} node {i} at {tt}");
                    }
                }
            }
        }
    }

    #[test]
    fn sub_cells_tile_the_square() {
        for t in FemType::ALL {
            let mut area = 0.0;
            for cell in t.cells() {
                let n = cell.len();
                for k in 0..n {
                    let (a, b) = (ref_node(cell[k]), ref_node(cell[(k + 1) % n]));
                    area += 0.5 * (a.x * b.y - b.x * a.y);
                }
            }
            assert!((area - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn interior_edges_shared_twice() {
        use std::collections::HashMap;
        for t in FemType::ALL {
            let mut count: HashMap<(usize, usize), usize> = HashMap::new();
            for cell in t.cells() {
                let n = cell.len();
                for k in 0..n {
                    let (a, b) = (cell[k], cell[(k + 1) % n]);
                    *count.entry((a.min(b), a.max(b))).or_default() += 1;
                }
            }
            for ((a, b), c) in count {
                let pa = ref_node(a);
                let pb = ref_node(b);
                let boundary = (pa.x == pb.x && (pa.x == 0.0 || pa.x == 1.0))
                    || (pa.y == pb.y && (pa.y == 0.0 || pa.y == 1.0));
                assert_eq!(c, if boundary { 1 } else { 2 }, "{t:?} {a}-{b}");
            }
        }
    }

    fn interior_point() -> impl Strategy<Value = Point2<f64>> {
        // keep away from sub-cell boundaries so finite differences stay in one cell
        (0.0f64..1.0, 0.0f64..1.0).prop_filter_map("near a sub-cell edge", |(x, y)| {
            let p = Point2::new(x, y);
            let near = |v: f64| (v - 0.5).abs() < 1e-3 || v < 1e-3 || v > 1.0 - 1e-3;
            let near_diag = |a: f64, b: f64| {
                let (fa, fb) = (a.rem_euclid(0.5), b.rem_euclid(0.5));
                (fa - fb).abs() < 1e-3 || (fa + fb - 0.5).abs() < 1e-3
            };
            let near_coarse = (x - y).abs() < 1e-3 || (x + y - 1.0).abs() < 1e-3;
            (!near(x) && !near(y) && !near_diag(x, y) && !near_coarse).then_some(p)
        })
    }

    proptest! {
        #[test]
        fn partition_of_unity(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            for s in all_sets().into_iter().filter(|s| s.kind == BasisKind::Standard) {
                let sum: f64 = s.values(&Point2::new(x, y)).iter().sum();
                prop_assert!((sum - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn gradients_match_finite_differences(p in interior_point()) {
            let h = 1e-6;
            for s in all_sets() {
                let g = s.grads(&p);
                for i in 0..9 {
                    let dx = (s.value(i, &Point2::new(p.x + h, p.y)) - s.value(i, &Point2::new(p.x - h, p.y))) / (2.0 * h);
                    let dy = (s.value(i, &Point2::new(p.x, p.y + h)) - s.value(i, &Point2::new(p.x, p.y - h))) / (2.0 * h);
                    let scale = g[i].norm().max(1.0);
                    prop_assert!((g[i].x - dx).abs() <= 1e-6 * scale);
                    prop_assert!((g[i].y - dy).abs() <= 1e-6 * scale);
                }
            }
        }
    }
}
