//! Experiment loops and CSV/VTK output.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{
    extract_subcells, init_fem, mesh_statistics, MeshStatistics, PatchMesh, Placement,
};
use crate::postprocess::{integrate_difference_norms, write_vtk};
use crate::problems::{CircleProblem, InterfaceProblem};
use crate::ref_fem::BasisKind;
use crate::simulation::Discretization;
use crate::solvers::{Method, SolverConfig};

use super::RunConfig;

/// Sweep positions with mesh statistics output.
pub const STATS_OFFSETS: [usize; 4] = [0, 10, 50, 990];

pub const EXAMPLE1_HEADER: &str = "# locmodfe example1 v1";
pub const EXAMPLE2_HEADER: &str = "# locmodfe example2 v1";
pub const STATS_HEADER: &str = "# locmodfe stats v1";

pub fn basis_name(kind: BasisKind) -> &'static str {
    match kind {
        BasisKind::Standard => "nh",
        BasisKind::Hierarchical => "h",
    }
}

pub fn placement_name(p: Placement) -> &'static str {
    match p {
        Placement::Standard => "standard",
        Placement::Hierarchical => "hierarchical",
        Placement::EdgeMean => "edge-mean",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example1Row {
    pub level: u32,
    pub patches: usize,
    pub dofs: usize,
    pub basis: BasisKind,
    pub solver: Method,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub l2_error: f64,
    pub h1_error: f64,
    pub l2_rate: Option<f64>,
    pub h1_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example2Row {
    pub k: usize,
    pub y_offset: f64,
    pub basis: BasisKind,
    pub solver: Method,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example2Output {
    pub rows: Vec<Example2Row>,
    /// Statistics per recorded offset and placement.
    pub stats: Vec<(usize, Vec<(Placement, MeshStatistics)>)>,
}

fn solver_config(cfg: &RunConfig, method: Method) -> SolverConfig {
    SolverConfig {
        method,
        abs_tolerance: cfg.tol,
        max_iterations: cfg.max_iterations,
        omega: cfg.omega,
    }
}

/// `(iterations, converged, residual)`; non-convergence is reported, not raised.
fn solve_flagged(d: &mut Discretization, config: &SolverConfig) -> Result<(usize, bool, f64)> {
    match d.solve(config) {
        Ok(r) => Ok((r.iterations, true, r.final_residual)),
        Err(Error::NotConverged {
            iterations,
            residual,
        }) => Ok((iterations, false, residual)),
        Err(e) => Err(e),
    }
}

fn problem_for(cfg: &RunConfig, y_offset: f64) -> CircleProblem {
    CircleProblem::new(cfg.kappa1, cfg.kappa2, y_offset)
}

fn export(cfg: &RunConfig, d: &Discretization, tag: &str, vtk: bool) -> Result<()> {
    if vtk {
        let path = cfg.out.join(format!("solution_{tag}.vtk"));
        write_vtk(&path, &d.geometry, &d.subcells, &d.nodal_solution())?;
    }
    if cfg.export_matrix {
        d.system
            .matrix
            .write_matrix_market(&cfg.out.join(format!("matrix_{tag}.mtx")))?;
    }
    Ok(())
}

fn ensure_out(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))
}

/// Refinement study around the centred circle.
pub fn run_example1(cfg: &RunConfig) -> Result<Vec<Example1Row>> {
    let problem = problem_for(cfg, 0.0);
    let mut rows: Vec<Example1Row> = Vec::new();
    for level in cfg.min_level..=cfg.max_level {
        for kind in cfg.basis.kinds() {
            let mut d = Discretization::new(level, &problem, kind, cfg.flux_jump)?;
            for &method in &cfg.solvers {
                let (iterations, converged, residual) =
                    solve_flagged(&mut d, &solver_config(cfg, method))?;
                let (l2, h1) =
                    integrate_difference_norms(&d.geometry, &d.nodal_solution(), &problem)?;
                let prev = rows
                    .iter()
                    .rev()
                    .find(|r| r.level + 1 == level && r.basis == kind && r.solver == method);
                rows.push(Example1Row {
                    level,
                    patches: d.geometry.mesh.n_patches(),
                    dofs: d.dofs.n_dofs,
                    basis: kind,
                    solver: method,
                    iterations,
                    converged,
                    residual,
                    l2_error: l2,
                    h1_error: h1,
                    l2_rate: prev.map(|p| (p.l2_error / l2).log2()),
                    h1_rate: prev.map(|p| (p.h1_error / h1).log2()),
                });
            }
            let vtk = cfg.vtk_every > 0 && (level - cfg.min_level) as usize % cfg.vtk_every == 0;
            if vtk || cfg.export_matrix {
                ensure_out(cfg)?;
                export(cfg, &d, &format!("ex1_L{level}_{}", basis_name(kind)), vtk)?;
            }
        }
    }
    Ok(rows)
}

/// Vertical offset of sweep position `k`.
pub fn sweep_offset(level: u32, k: usize, n: usize) -> f64 {
    k as f64 / n as f64 * PatchMesh::new(level).patch_size
}

pub fn offset_statistics(cfg: &RunConfig, k: usize) -> Result<Vec<(Placement, MeshStatistics)>> {
    let problem = problem_for(cfg, sweep_offset(cfg.level, k, cfg.n_sweep));
    let mesh = PatchMesh::new(cfg.level);
    [
        Placement::Standard,
        Placement::Hierarchical,
        Placement::EdgeMean,
    ]
    .into_iter()
    .map(|p| {
        let geo = init_fem(&mesh, problem.level_set(), p)?;
        Ok((p, mesh_statistics(&extract_subcells(&geo))))
    })
    .collect()
}

/// Sweep of the circle centre over one patch height.
pub fn run_example2(cfg: &RunConfig) -> Result<Example2Output> {
    let mut rows = Vec::new();
    for (step, k) in (0..cfg.n_sweep).step_by(cfg.stride).enumerate() {
        let y_offset = sweep_offset(cfg.level, k, cfg.n_sweep);
        let problem = problem_for(cfg, y_offset);
        for kind in cfg.basis.kinds() {
            let mut d = Discretization::new(cfg.level, &problem, kind, cfg.flux_jump)?;
            for &method in &cfg.solvers {
                let (iterations, converged, residual) =
                    solve_flagged(&mut d, &solver_config(cfg, method))?;
                rows.push(Example2Row {
                    k,
                    y_offset,
                    basis: kind,
                    solver: method,
                    iterations,
                    converged,
                    residual,
                });
            }
            let vtk = cfg.vtk_every > 0 && step % cfg.vtk_every == 0;
            if vtk || cfg.export_matrix {
                ensure_out(cfg)?;
                export(cfg, &d, &format!("ex2_k{k}_{}", basis_name(kind)), vtk)?;
            }
        }
    }
    let stats = STATS_OFFSETS
        .iter()
        .filter(|&&k| k < cfg.n_sweep)
        .map(|&k| Ok((k, offset_statistics(cfg, k)?)))
        .collect::<Result<_>>()?;
    Ok(Example2Output { rows, stats })
}

fn csv_writer(path: &Path, header: &str) -> Result<csv::Writer<File>> {
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(file, "{header}").map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::io(path, e.into())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |r| format!("{r:.4}"))
}

pub fn write_example1_csv(path: &Path, rows: &[Example1Row]) -> Result<()> {
    let mut w = csv_writer(path, EXAMPLE1_HEADER)?;
    let err = |e| csv_error(path, e);
    w.write_record([
        "level",
        "patches",
        "dofs",
        "basis",
        "solver",
        "iterations",
        "converged",
        "residual",
        "l2_error",
        "h1_error",
        "l2_rate",
        "h1_rate",
    ])
    .map_err(err)?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            r.patches.to_string(),
            r.dofs.to_string(),
            basis_name(r.basis).to_string(),
            r.solver.name().to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            format!("{:.3e}", r.residual),
            format!("{:.6e}", r.l2_error),
            format!("{:.6e}", r.h1_error),
            opt(r.l2_rate),
            opt(r.h1_rate),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_example2_csv(path: &Path, rows: &[Example2Row]) -> Result<()> {
    let mut w = csv_writer(path, EXAMPLE2_HEADER)?;
    let err = |e| csv_error(path, e);
    w.write_record([
        "k",
        "y_offset",
        "basis",
        "solver",
        "iterations",
        "converged",
        "residual",
    ])
    .map_err(err)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            format!("{:.10e}", r.y_offset),
            basis_name(r.basis).to_string(),
            r.solver.name().to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            format!("{:.3e}", r.residual),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_stats_csv(path: &Path, stats: &[(Placement, MeshStatistics)]) -> Result<()> {
    let mut w = csv_writer(path, STATS_HEADER)?;
    let err = |e| csv_error(path, e);
    w.write_record([
        "placement",
        "area_max",
        "area_min",
        "area_ratio",
        "edge_max",
        "edge_min",
        "max_aspect",
    ])
    .map_err(err)?;
    for (p, s) in stats {
        w.write_record([
            placement_name(*p).to_string(),
            format!("{:.4e}", s.area_max),
            format!("{:.4e}", s.area_min),
            format!("{:.4e}", s.area_ratio),
            format!("{:.4e}", s.edge_max),
            format!("{:.4e}", s.edge_min),
            format!("{:.4e}", s.max_aspect),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Runs the configured test case and writes its CSV files.
pub fn run(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    ensure_out(cfg)?;
    match cfg.test_case {
        1 => {
            let rows = run_example1(cfg)?;
            write_example1_csv(&cfg.out.join("example1.csv"), &rows)
        }
        _ => {
            let out = run_example2(cfg)?;
            write_example2_csv(&cfg.out.join("example2.csv"), &out.rows)?;
            for (k, stats) in &out.stats {
                write_stats_csv(&cfg.out.join(format!("stats_k{k}.csv")), stats)?;
            }
            Ok(())
        }
    }
}
