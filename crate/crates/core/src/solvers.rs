//! Conjugate gradient solvers with diagonal and SSOR preconditioning.

use std::time::{Duration, Instant};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::system::sparse::{dot, norm2};
use crate::system::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cg,
    Dpcg,
    Ssor,
    DenseOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Cg => "cg",
            Method::Dpcg => "dpcg",
            Method::Ssor => "ssor",
            Method::DenseOracle => "dense",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cg" => Ok(Method::Cg),
            "dpcg" => Ok(Method::Dpcg),
            "ssor" => Ok(Method::Ssor),
            "dense" => Ok(Method::DenseOracle),
            other => Err(Error::Config(format!("unknown solver '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub abs_tolerance: f64,
    pub max_iterations: usize,
    pub omega: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Dpcg,
            abs_tolerance: 1e-12,
            max_iterations: 100_000,
            omega: 1.2,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    /// Recursively updated residual norm used by the stopping test.
    pub final_residual: f64,
    /// `||b - A x||` recomputed at exit.
    pub true_residual: f64,
    pub converged: bool,
    pub wall_time: Duration,
    /// `sqrt(r^T z)` before every iteration.
    pub history: Vec<f64>,
}

/// Entrywise `1/sqrt(a_ii)`.
pub fn diag_scaling(a: &CsrMatrix) -> Result<Vec<f64>> {
    a.diagonal()
        .into_iter()
        .enumerate()
        .map(|(row, value)| {
            if value > 0.0 {
                Ok(1.0 / value.sqrt())
            } else {
                Err(Error::NonpositiveDiagonal { row, value })
            }
        })
        .collect()
}

enum Preconditioner {
    Identity,
    Jacobi(Vec<f64>),
    Ssor { diag: Vec<f64>, omega: f64 },
}

impl Preconditioner {
    fn apply(&self, a: &CsrMatrix, r: &[f64], z: &mut [f64]) {
        match self {
            Preconditioner::Identity => z.copy_from_slice(r),
            Preconditioner::Jacobi(inv) => {
                for ((zi, ri), d) in z.iter_mut().zip(r).zip(inv) {
                    *zi = ri * d;
                }
            }
            Preconditioner::Ssor { diag, omega } => {
                // (D/w + L) y = r, then (D/w + U) z = (2 - w)/w D y
                let w = *omega;
                for i in 0..a.n {
                    let mut s = r[i];
                    for p in a.row(i) {
                        let j = a.cols[p];
                        if j < i {
                            s -= a.values[p] * z[j];
                        }
                    }
                    z[i] = s * w / diag[i];
                }
                for i in 0..a.n {
                    z[i] *= (2.0 - w) / w * diag[i];
                }
                for i in (0..a.n).rev() {
                    let mut s = z[i];
                    for p in a.row(i) {
                        let j = a.cols[p];
                        if j > i {
                            s -= a.values[p] * z[j];
                        }
                    }
                    z[i] = s * w / diag[i];
                }
            }
        }
    }
}

/// Solves `A x = b` starting from `x`; returns `NotConverged` with the report
/// if the tolerance is not reached.
pub fn solve(
    a: &CsrMatrix,
    b: &[f64],
    x: &mut [f64],
    config: &SolverConfig,
) -> Result<SolverReport> {
    let start = Instant::now();
    if config.method == Method::DenseOracle {
        let sol = dense_solve(a, b)?;
        x.copy_from_slice(&sol);
        let mut r = a.mul(x);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        return Ok(SolverReport {
            iterations: 0,
            final_residual: norm2(&r),
            true_residual: norm2(&r),
            converged: true,
            wall_time: start.elapsed(),
            history: Vec::new(),
        });
    }
    let pre = match config.method {
        Method::Cg => Preconditioner::Identity,
        Method::Dpcg => Preconditioner::Jacobi(diag_scaling(a)?.iter().map(|s| s * s).collect()),
        Method::Ssor => {
            if !(config.omega > 0.0 && config.omega < 2.0) {
                return Err(Error::Config(format!(
                    "SSOR needs 0 < omega < 2, got {}",
                    config.omega
                )));
            }
            diag_scaling(a)?;
            Preconditioner::Ssor {
                diag: a.diagonal(),
                omega: config.omega,
            }
        }
        Method::DenseOracle => unreachable!(),
    };
    let report = pcg(a, b, x, &pre, config, start);
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NotConverged {
            iterations: report.iterations,
            residual: report.final_residual,
        })
    }
}

fn residual(a: &CsrMatrix, b: &[f64], x: &[f64], r: &mut [f64]) {
    a.matvec(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

fn pcg(
    a: &CsrMatrix,
    b: &[f64],
    x: &mut [f64],
    pre: &Preconditioner,
    config: &SolverConfig,
    start: Instant,
) -> SolverReport {
    let n = a.n;
    let mut r = vec![0.0; n];
    residual(a, b, x, &mut r);
    let mut z = vec![0.0; n];
    pre.apply(a, &r, &mut z);
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut res = norm2(&r);
    let mut history = vec![rz.max(0.0).sqrt()];
    let mut it = 0;
    while res > config.abs_tolerance && it < config.max_iterations {
        a.matvec(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0 && pq.is_finite()) {
            break;
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        it += 1;
        res = norm2(&r);
        pre.apply(a, &r, &mut z);
        let rz_new = dot(&r, &z);
        history.push(rz_new.max(0.0).sqrt());
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    residual(a, b, x, &mut r);
    SolverReport {
        iterations: it,
        final_residual: res,
        true_residual: norm2(&r),
        converged: res <= config.abs_tolerance,
        wall_time: start.elapsed(),
        history,
    }
}

/// Cholesky solve of the dense copy of `a`; intended for small test systems.
pub fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let chol = a
        .to_dense()
        .cholesky()
        .ok_or_else(|| Error::Config("matrix is not positive definite".to_string()))?;
    Ok(chol
        .solve(&DVector::from_column_slice(b))
        .as_slice()
        .to_vec())
}
