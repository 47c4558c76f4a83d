//! Interface problems with manufactured solutions.

use nalgebra::{Point2, Vector2};

use crate::levelset::{CircleLevelSet, Color, LevelSet};

/// Data of `-div(kappa grad u) = f` with a piecewise constant `kappa`.
///
/// Sub-domain arguments use the colour convention of the level set:
/// `-1` for the inner, `+1` for the outer sub-domain.
pub trait InterfaceProblem: Sync {
    fn level_set(&self) -> &dyn LevelSet;

    fn kappa(&self, domain: Color) -> f64;

    fn exact(&self, p: &Point2<f64>, domain: Color) -> f64;

    fn exact_grad(&self, p: &Point2<f64>, domain: Color) -> Vector2<f64>;

    fn source(&self, p: &Point2<f64>, domain: Color) -> f64;

    /// Dirichlet data on the outer boundary.
    fn dirichlet(&self, p: &Point2<f64>) -> f64 {
        self.exact(p, self.level_set().domain(p))
    }

    /// Constant jump `[kappa d_n u]` across the interface, normal pointing outwards.
    fn flux_jump(&self) -> f64 {
        0.0
    }
}

/// Circular interface of radius 1/2 around `(0, y_offset)` with
/// `u_1 = -kappa_1 r^2 + kappa_1/4 - kappa_2/8` inside and
/// `u_2 = -2 kappa_2 r^4` outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleProblem {
    pub kappa1: f64,
    pub kappa2: f64,
    pub level_set: CircleLevelSet,
}

impl CircleProblem {
    pub const RADIUS: f64 = 0.5;

    pub fn new(kappa1: f64, kappa2: f64, y_offset: f64) -> Self {
        Self {
            kappa1,
            kappa2,
            level_set: CircleLevelSet::new(Self::RADIUS, 0.0, y_offset),
        }
    }

    pub fn example(y_offset: f64) -> Self {
        Self::new(0.1, 1.0, y_offset)
    }

    fn r2(&self, p: &Point2<f64>) -> f64 {
        (p - self.level_set.center()).norm_squared()
    }
}

impl InterfaceProblem for CircleProblem {
    fn level_set(&self) -> &dyn LevelSet {
        &self.level_set
    }

    fn kappa(&self, domain: Color) -> f64 {
        if domain < 0 {
            self.kappa1
        } else {
            self.kappa2
        }
    }

    fn exact(&self, p: &Point2<f64>, domain: Color) -> f64 {
        let r2 = self.r2(p);
        if domain < 0 {
            -self.kappa1 * r2 + 0.25 * self.kappa1 - 0.125 * self.kappa2
        } else {
            -2.0 * self.kappa2 * r2 * r2
        }
    }

    fn exact_grad(&self, p: &Point2<f64>, domain: Color) -> Vector2<f64> {
        let d = p - self.level_set.center();
        if domain < 0 {
            d * (-2.0 * self.kappa1)
        } else {
            d * (-8.0 * self.kappa2 * d.norm_squared())
        }
    }

    fn source(&self, p: &Point2<f64>, domain: Color) -> f64 {
        if domain < 0 {
            4.0 * self.kappa1 * self.kappa1
        } else {
            32.0 * self.kappa2 * self.kappa2 * self.r2(p)
        }
    }

    /// `kappa_1 d_r u_1 - kappa_2 d_r u_2` at `r = 1/2`.
    fn flux_jump(&self) -> f64 {
        let r = Self::RADIUS;
        -2.0 * self.kappa1 * self.kappa1 * r + 8.0 * self.kappa2 * self.kappa2 * r * r * r
    }
}

/// Homogeneous problem: `f = 0`, `u = 0` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroProblem {
    pub kappa: f64,
    pub level_set: CircleLevelSet,
}

impl InterfaceProblem for ZeroProblem {
    fn level_set(&self) -> &dyn LevelSet {
        &self.level_set
    }

    fn kappa(&self, _domain: Color) -> f64 {
        self.kappa
    }

    fn exact(&self, _p: &Point2<f64>, _domain: Color) -> f64 {
        0.0
    }

    fn exact_grad(&self, _p: &Point2<f64>, _domain: Color) -> Vector2<f64> {
        Vector2::zeros()
    }

    fn source(&self, _p: &Point2<f64>, _domain: Color) -> f64 {
        0.0
    }
}
