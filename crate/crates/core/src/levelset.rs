//! Implicit interface geometry.
//!
//! The interface is the zero contour of a level set `chi`. Points with
//! `chi < 0` belong to the inner sub-domain (colour `-1`), all others,
//! including points on the interface, to the outer one (colour `+1`).

use nalgebra::{Point2, Vector2};

use crate::error::{Error, Result};

/// Domain colour: `-1` for the inner sub-domain, `+1` for the outer one.
pub type Color = i8;

pub trait LevelSet: Send + Sync {
    fn value(&self, p: &Point2<f64>) -> f64;

    fn grad(&self, p: &Point2<f64>) -> Vector2<f64>;

    fn domain(&self, p: &Point2<f64>) -> Color {
        if self.value(p) >= 0.0 {
            1
        } else {
            -1
        }
    }
}

/// `chi(p) = (p_x - center_x)^2 + (p_y - y_offset)^2 - radius^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleLevelSet {
    pub radius: f64,
    pub center_x: f64,
    pub y_offset: f64,
}

impl CircleLevelSet {
    pub fn new(radius: f64, center_x: f64, y_offset: f64) -> Self {
        Self {
            radius,
            center_x,
            y_offset,
        }
    }

    pub fn center(&self) -> Point2<f64> {
        Point2::new(self.center_x, self.y_offset)
    }
}

impl LevelSet for CircleLevelSet {
    fn value(&self, p: &Point2<f64>) -> f64 {
        let dx = p.x - self.center_x;
        let dy = p.y - self.y_offset;
        dx * dx + dy * dy - self.radius * self.radius
    }

    fn grad(&self, p: &Point2<f64>) -> Vector2<f64> {
        Vector2::new(2.0 * (p.x - self.center_x), 2.0 * (p.y - self.y_offset))
    }
}

const CUT_TOLERANCE: f64 = 1e-12;
const MAX_NEWTON: usize = 50;
const MAX_BISECTION: usize = 200;

/// Finds `s0` in `[0, 1]` with `chi(v1 + s0 (v2 - v1)) = 0`.
///
/// Newton's method started at `s = 0.5`; when an iterate leaves
/// `[-0.1, 1.1]` or the derivative vanishes, falls back to bisection on
/// `[0, 1]`. The endpoints must lie in different sub-domains.
pub fn find_edge_cut<L: LevelSet + ?Sized>(
    v1: &Point2<f64>,
    v2: &Point2<f64>,
    ls: &L,
) -> Result<f64> {
    let d = v2 - v1;
    let f = |s: f64| ls.value(&(v1 + d * s));
    let df = |s: f64| ls.grad(&(v1 + d * s)).dot(&d);

    let mut s = 0.5;
    for _ in 0..MAX_NEWTON {
        let fs = f(s);
        if fs.abs() <= CUT_TOLERANCE {
            if (0.0..=1.0).contains(&s) {
                return Ok(s);
            }
            break;
        }
        let dfs = df(s);
        if dfs.abs() < 1e-14 {
            break;
        }
        s -= fs / dfs;
        if !(-0.1..=1.1).contains(&s) {
            break;
        }
    }
    bisect(f)
}

fn bisect(f: impl Fn(f64) -> f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.abs() <= CUT_TOLERANCE {
        return Ok(lo);
    }
    if f_hi.abs() <= CUT_TOLERANCE {
        return Ok(hi);
    }
    if f_lo * f_hi > 0.0 {
        return Err(Error::NoConvergence {
            residual: f_lo.abs().min(f_hi.abs()),
        });
    }
    let mut best = (f64::INFINITY, 0.5);
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < best.0 {
            best = (fm.abs(), mid);
        }
        if fm.abs() <= CUT_TOLERANCE {
            return Ok(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * 0.5 {
            break;
        }
    }
    Err(Error::NoConvergence { residual: best.0 })
}
