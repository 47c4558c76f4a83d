//! Independent oracles shared by the property and acceptance tests.
#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Matrix2, Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use locmodfe::fe_values::FemValues;
use locmodfe::levelset::CircleLevelSet;
use locmodfe::mesh::{
    extract_subcells, init_fem, CutInfo, Edge, MeshGeometry, PatchMesh, Placement,
};
use locmodfe::problems::{CircleProblem, InterfaceProblem};
use locmodfe::ref_fem::{cell_shapes, compute_quadrature, ref_node, BasisKind, FemType, ShapeSet};
use locmodfe::simulation::Discretization;
use locmodfe::solvers::{diag_scaling, solve, Method, SolverConfig};
use locmodfe::system::{assemble_matrix, assemble_rhs, CsrMatrix, DofHandler};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn geometry(level: u32, y_offset: f64, placement: Placement) -> MeshGeometry {
    let mesh = PatchMesh::new(level);
    init_fem(&mesh, &CircleLevelSet::new(0.5, 0.0, y_offset), placement).unwrap()
}

/// Physical position of a reference point under the sub-cell map of `cell`.
fn map_cell(info: &CutInfo, cell: usize, xi: &Point2<f64>) -> (Point2<f64>, Matrix2<f64>) {
    let mut x = Vector2::zeros();
    let mut jac = Matrix2::zeros();
    for (k, v, g) in cell_shapes(info.femtype, cell, xi) {
        x += info.nodes[k].coords * v;
        jac += info.nodes[k].coords * g.transpose();
    }
    (Point2::from(x), jac)
}

/// Reference point of `x` under the map of `cell`, extended beyond the cell if needed.
pub fn invert_cell(info: &CutInfo, cell: usize, x: &Point2<f64>) -> Point2<f64> {
    let nodes = info.femtype.cells()[cell];
    if nodes.len() == 3 {
        // barycentric coordinates in physical space carry over to the reference triangle
        let p: Vec<Point2<f64>> = nodes.iter().map(|&k| info.nodes[k]).collect();
        let area = (p[1] - p[0]).perp(&(p[2] - p[0]));
        let l1 = (x - p[0]).perp(&(p[2] - p[0])) / area;
        let l2 = (p[1] - p[0]).perp(&(x - p[0])) / area;
        let r: Vec<Point2<f64>> = nodes.iter().map(|&k| ref_node(k)).collect();
        return r[0] + (r[1] - r[0]) * l1 + (r[2] - r[0]) * l2;
    }
    let mut xi = Point2::from(
        nodes
            .iter()
            .map(|&k| ref_node(k).coords)
            .sum::<Vector2<f64>>()
            / 4.0,
    );
    for _ in 0..50 {
        let (y, jac) = map_cell(info, cell, &xi);
        let step = jac.try_inverse().unwrap() * (x - y);
        xi += step;
        if step.norm() < 1e-16 {
            break;
        }
    }
    xi
}

fn inside(femtype: FemType, cell: usize, xi: &Point2<f64>, tol: f64) -> bool {
    let nodes = femtype.cells()[cell];
    if nodes.len() == 4 {
        let a = ref_node(nodes[0]);
        (a.x - tol..=a.x + 0.5 + tol).contains(&xi.x)
            && (a.y - tol..=a.y + 0.5 + tol).contains(&xi.y)
    } else {
        let p: Vec<Point2<f64>> = nodes.iter().map(|&k| ref_node(k)).collect();
        let cross = |a: &Point2<f64>, b: &Point2<f64>, c: &Point2<f64>| (b - a).perp(&(c - a));
        let area = cross(&p[0], &p[1], &p[2]);
        (0..3).all(|k| cross(&p[k], &p[(k + 1) % 3], xi) / area >= -tol)
    }
}

/// Sub-cell and reference point of the physical point `x` in the patch.
pub fn locate_physical(info: &CutInfo, x: &Point2<f64>) -> Option<(usize, Point2<f64>)> {
    (0..info.femtype.cells().len())
        .map(|cell| (cell, invert_cell(info, cell, x)))
        .find(|(cell, xi)| inside(info.femtype, *cell, xi, 1e-10))
}

/// Nodal-basis function with local coefficients `u` evaluated in `cell` at `xi`.
pub fn eval_cell(info: &CutInfo, cell: usize, xi: &Point2<f64>, u: &[f64; 9]) -> f64 {
    cell_shapes(info.femtype, cell, xi)
        .iter()
        .map(|(k, v, _)| v * u[*k])
        .sum()
}

/// Worst partition-of-unity defect and worst nodal-delta defect of the reference shapes.
pub fn reference_shape_defects(samples: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let mut pu: f64 = 0.0;
    let mut delta: f64 = 0.0;
    for t in FemType::ALL {
        let set = ShapeSet::standard(t);
        for _ in 0..samples {
            let xi = Point2::new(r.gen::<f64>(), r.gen::<f64>());
            pu = pu.max((set.values(&xi).iter().sum::<f64>() - 1.0).abs());
        }
        for k in 0..9 {
            let v = set.values(&ref_node(k));
            for (i, vi) in v.iter().enumerate() {
                delta = delta.max((vi - f64::from(u8::from(i == k))).abs());
            }
        }
    }
    (pu, delta)
}

/// Largest jump of a random finite element function across shared patch edges.
pub fn edge_trace_jump(level: u32, y_offset: f64, placement: Placement, seed: u64) -> f64 {
    let geo = geometry(level, y_offset, placement);
    let mesh = &geo.mesh;
    let mut r = rng(seed);
    let u: Vec<f64> = (0..mesh.n_nodes())
        .map(|_| r.gen_range(-1.0..1.0))
        .collect();
    let local = |patch: usize| -> [f64; 9] {
        let g = mesh.global_nodes(patch);
        std::array::from_fn(|k| u[g[k]])
    };
    let eval = |patch: usize, x: &Point2<f64>| {
        let info = &geo.cutinfos[patch];
        let (cell, xi) = locate_physical(info, x).expect("point on the patch boundary");
        eval_cell(info, cell, &xi, &local(patch))
    };
    let n = mesh.patches_per_dim;
    let mut worst: f64 = 0.0;
    for pj in 0..n {
        for pi in 0..n {
            let p = mesh.patch_index(pi, pj);
            let mut neighbours = Vec::new();
            if pi + 1 < n {
                neighbours.push((mesh.patch_index(pi + 1, pj), Edge::Right));
            }
            if pj + 1 < n {
                neighbours.push((mesh.patch_index(pi, pj + 1), Edge::Top));
            }
            // only interface patches and their neighbours carry interesting traces
            if !geo.cutinfos[p].is_cut()
                && neighbours.iter().all(|&(q, _)| !geo.cutinfos[q].is_cut())
            {
                continue;
            }
            for (q, edge) in neighbours {
                let (a, _, b) = edge.nodes();
                let (pa, pb) = (mesh.lattice_point(p, a), mesh.lattice_point(p, b));
                for _ in 0..8 {
                    let x = pa + (pb - pa) * r.gen::<f64>();
                    worst = worst.max((eval(p, &x) - eval(q, &x)).abs());
                }
            }
        }
    }
    worst
}

/// Smallest `det J / patch area` and worst relative defect of the integrated patch area.
pub fn jacobian_and_area(level: u32, y_offset: f64, placement: Placement) -> (f64, f64) {
    let geo = geometry(level, y_offset, placement);
    let area = geo.mesh.patch_size * geo.mesh.patch_size;
    let mut fev = FemValues::new();
    let (mut min_det, mut worst) = (f64::INFINITY, 0.0f64);
    for (patch, info) in geo.cutinfos.iter().enumerate() {
        let rule = compute_quadrature(info.femtype);
        fev.reinit(
            patch,
            &info.nodes,
            info.femtype,
            BasisKind::Standard,
            info.split,
            &rule,
        )
        .unwrap();
        min_det = fev
            .jacobian_det
            .iter()
            .fold(min_det, |m, &d| m.min(d / area));
        worst = worst.max((fev.jxw.iter().sum::<f64>() - area).abs() / area);
    }
    (min_det, worst)
}

/// Worst relative difference between mapped gradients and central differences
/// of the shape functions evaluated through the inverse map.
pub fn gradient_fd_defect(level: u32, y_offset: f64, placement: Placement) -> f64 {
    let geo = geometry(level, y_offset, placement);
    let h = geo.mesh.patch_size;
    let mut fev = FemValues::new();
    let mut worst: f64 = 0.0;
    for (patch, info) in geo.cutinfos.iter().enumerate().filter(|(_, c)| c.is_cut()) {
        let rule = compute_quadrature(info.femtype);
        fev.reinit(
            patch,
            &info.nodes,
            info.femtype,
            BasisKind::Standard,
            info.split,
            &rule,
        )
        .unwrap();
        for q in 0..fev.n_points() {
            let cell = fev.cells[q];
            let x = fev.points[q];
            let scale = (0..9)
                .map(|i| fev.shape_grad[q][i].norm())
                .fold(0.0, f64::max);
            let delta = 1e-6 * h;
            for i in 0..9 {
                let mut e = [0.0; 9];
                e[i] = 1.0;
                let f = |p: Point2<f64>| eval_cell(info, cell, &invert_cell(info, cell, &p), &e);
                let fd = Vector2::new(
                    f(x + Vector2::x() * delta) - f(x - Vector2::x() * delta),
                    f(x + Vector2::y() * delta) - f(x - Vector2::y() * delta),
                ) / (2.0 * delta);
                worst = worst.max((fd - fev.shape_grad[q][i]).norm() / scale);
            }
        }
    }
    worst
}

fn kappa_of(problem: &dyn InterfaceProblem, marker: u8) -> f64 {
    problem.kappa(if marker == 1 { -1 } else { 1 })
}

/// Stiffness matrix assembled cell by cell from closed-form element matrices.
pub fn stiffness_oracle(
    geo: &MeshGeometry,
    problem: &dyn InterfaceProblem,
) -> HashMap<(usize, usize), f64> {
    let sub = extract_subcells(geo);
    let mut a: HashMap<(usize, usize), f64> = HashMap::new();
    for cell in &sub.cells {
        let kappa = kappa_of(problem, cell.marker);
        let v = &cell.vertices;
        let local: Vec<Vec<f64>> = if v.len() == 3 {
            let area = 0.5 * (v[1] - v[0]).perp(&(v[2] - v[0]));
            // gradient of a barycentric coordinate is the rotated opposite edge over twice the area
            let grads: Vec<Vector2<f64>> = (0..3)
                .map(|k| {
                    let e = v[(k + 2) % 3] - v[(k + 1) % 3];
                    Vector2::new(-e.y, e.x) / (2.0 * area)
                })
                .collect();
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| kappa * area * grads[i].dot(&grads[j]))
                        .collect()
                })
                .collect()
        } else {
            let (w, hgt) = (v[1].x - v[0].x, v[3].y - v[0].y);
            assert!(
                (v[2] - v[0] - Vector2::new(w, hgt)).norm() < 1e-14,
                "quad sub-cells are rectangles"
            );
            let kx = [
                [2.0, -2.0, -1.0, 1.0],
                [-2.0, 2.0, 1.0, -1.0],
                [-1.0, 1.0, 2.0, -2.0],
                [1.0, -1.0, -2.0, 2.0],
            ];
            let ky = [
                [2.0, 1.0, -1.0, -2.0],
                [1.0, 2.0, -2.0, -1.0],
                [-1.0, -2.0, 2.0, 1.0],
                [-2.0, -1.0, 1.0, 2.0],
            ];
            (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| kappa * (hgt / (6.0 * w) * kx[i][j] + w / (6.0 * hgt) * ky[i][j]))
                        .collect()
                })
                .collect()
        };
        for (i, &gi) in cell.global.iter().enumerate() {
            for (j, &gj) in cell.global.iter().enumerate() {
                *a.entry((gi, gj)).or_default() += local[i][j];
            }
        }
    }
    a
}

/// Load vector from per-sub-cell quadrature in physical coordinates.
pub fn load_oracle(geo: &MeshGeometry, problem: &dyn InterfaceProblem) -> Vec<f64> {
    let sub = extract_subcells(geo);
    let mut b = vec![0.0; sub.positions.len()];
    for cell in &sub.cells {
        let domain = if cell.marker == 1 { -1 } else { 1 };
        let v = &cell.vertices;
        if v.len() == 3 {
            let area = 0.5 * (v[1] - v[0]).perp(&(v[2] - v[0]));
            for k in 0..3 {
                let mut lambda = [1.0 / 6.0; 3];
                lambda[k] = 2.0 / 3.0;
                let x = Point2::from(
                    v[0].coords * lambda[0] + v[1].coords * lambda[1] + v[2].coords * lambda[2],
                );
                let f = problem.source(&x, domain) * area / 3.0;
                for i in 0..3 {
                    b[cell.global[i]] += f * lambda[i];
                }
            }
        } else {
            let (w, hgt) = (v[1].x - v[0].x, v[3].y - v[0].y);
            let d = 0.5 / 3f64.sqrt();
            for gy in [0.5 - d, 0.5 + d] {
                for gx in [0.5 - d, 0.5 + d] {
                    let x = v[0] + Vector2::new(gx * w, gy * hgt);
                    let f = problem.source(&x, domain) * w * hgt / 4.0;
                    let phi = [
                        (1.0 - gx) * (1.0 - gy),
                        gx * (1.0 - gy),
                        gx * gy,
                        (1.0 - gx) * gy,
                    ];
                    for i in 0..4 {
                        b[cell.global[i]] += f * phi[i];
                    }
                }
            }
        }
    }
    b
}

/// Relative matrix and load-vector defects of the assembly against the oracles.
pub fn assembly_defects(level: u32, y_offset: f64) -> (f64, f64) {
    let problem = CircleProblem::example(y_offset);
    let geo = init_fem(
        &PatchMesh::new(level),
        &problem.level_set,
        Placement::Standard,
    )
    .unwrap();
    let dofs = DofHandler::new(&geo.mesh);
    let a = assemble_matrix(&dofs, &geo, &problem, BasisKind::Standard).unwrap();
    let oracle = stiffness_oracle(&geo, &problem);
    let scale = a.max_abs();
    let mut worst: f64 = 0.0;
    for i in 0..a.n {
        for p in a.row(i) {
            let o = oracle.get(&(i, a.cols[p])).copied().unwrap_or(0.0);
            worst = worst.max((a.values[p] - o).abs() / scale);
        }
    }
    for (&(i, j), &v) in &oracle {
        if a.position(i, j).is_none() {
            worst = worst.max(v.abs() / scale);
        }
    }
    let b = assemble_rhs(&dofs, &geo, &problem, BasisKind::Standard).unwrap();
    let bo = load_oracle(&geo, &problem);
    let bscale = bo.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bworst = b
        .iter()
        .zip(&bo)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs() / bscale));
    (worst, bworst)
}

/// Largest nodal difference between the standard and hierarchical solutions on one mesh.
pub fn basis_solution_difference(level: u32, y_offset: f64) -> f64 {
    let problem = CircleProblem::example(y_offset);
    let config = SolverConfig::with_method(Method::Dpcg);
    let solutions: Vec<Vec<f64>> = [BasisKind::Standard, BasisKind::Hierarchical]
        .into_iter()
        .map(|kind| {
            let mut d = Discretization::with_placement(
                level,
                &problem,
                kind,
                Placement::Hierarchical,
                true,
            )
            .unwrap();
            d.solve(&config).unwrap();
            d.nodal_solution()
        })
        .collect();
    solutions[0]
        .iter()
        .zip(&solutions[1])
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// `D^{-1/2} A D^{-1/2}`.
pub fn scaled_matrix(a: &CsrMatrix) -> CsrMatrix {
    let s = diag_scaling(a).unwrap();
    let mut m = a.clone();
    for i in 0..a.n {
        for p in a.row(i) {
            m.values[p] *= s[i] * s[a.cols[p]];
        }
    }
    m
}

pub struct ScalingComparison {
    /// Worst relative difference of the two residual sequences while the
    /// residual is above `1e-4` of its initial value.
    pub history: f64,
    pub iterations: (usize, usize),
    /// Max relative difference of `x` and `S y`.
    pub solution: f64,
}

/// dPCG on `A x = b` against plain CG on `S A S y = S b`.
pub fn dpcg_scaled_cg(a: &CsrMatrix, b: &[f64]) -> ScalingComparison {
    let s = diag_scaling(a).unwrap();
    let mut x = vec![0.0; a.n];
    let dp = solve(a, b, &mut x, &SolverConfig::with_method(Method::Dpcg)).unwrap();
    let sb: Vec<f64> = b.iter().zip(&s).map(|(b, s)| b * s).collect();
    let mut y = vec![0.0; a.n];
    let cg = solve(
        &scaled_matrix(a),
        &sb,
        &mut y,
        &SolverConfig::with_method(Method::Cg),
    )
    .unwrap();
    let floor = 1e-4 * dp.history[0];
    let history = dp
        .history
        .iter()
        .zip(&cg.history)
        .take_while(|(d, _)| **d >= floor)
        .fold(0.0f64, |m, (d, c)| m.max((d - c).abs() / d));
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let solution = x
        .iter()
        .zip(&y)
        .zip(&s)
        .fold(0.0f64, |m, ((x, y), s)| m.max((x - y * s).abs() / scale));
    ScalingComparison {
        history,
        iterations: (dp.iterations, cg.iterations),
        solution,
    }
}

/// SPD matrix with diagonal entries that are powers of four, so the
/// diagonal scaling is exact in floating point.
pub fn power_of_four_spd(n: usize, seed: u64) -> CsrMatrix {
    let mut r = rng(seed);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = r.gen_range(-1.0..1.0) / n as f64;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m[(i, i)] = 1.0;
    }
    let d: Vec<f64> = (0..n).map(|_| 4f64.powi(r.gen_range(-3..4))).collect();
    let a = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * d[i].sqrt() * d[j].sqrt());
    CsrMatrix::from_dense(&a)
}

/// Iterations and error of plain CG on a random 5x5 SPD system.
pub fn cg_termination(seed: u64) -> (usize, f64) {
    let mut r = rng(seed);
    let g = DMatrix::from_fn(5, 5, |_, _| r.gen_range(-1.0..1.0));
    let dense = &g * g.transpose() + DMatrix::identity(5, 5);
    let a = CsrMatrix::from_dense(&dense);
    let b: Vec<f64> = (0..5).map(|_| r.gen_range(-1.0..1.0)).collect();
    let mut x = vec![0.0; 5];
    let rep = solve(&a, &b, &mut x, &SolverConfig::with_method(Method::Cg)).unwrap();
    let exact = dense.cholesky().unwrap().solve(&DVector::from_vec(b));
    let err = x
        .iter()
        .zip(exact.iter())
        .fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
    (rep.iterations, err)
}
