//! Domain colouring of patches and classification of interface cuts.

use nalgebra::Point2;

use super::{Edge, PatchMesh, CORNERS};
use crate::error::{Error, Result};
use crate::levelset::{find_edge_cut, Color, LevelSet};
use crate::ref_fem::FemType;

/// Cuts closer than this (relative to the edge length) to a corner are treated as corner cuts.
pub const SNAP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PatchClassification {
    /// Colours of the patch corner lattice, `(n + 1)^2` entries.
    pub node_colors: Vec<Color>,
    /// `+1` or `-1` for patches inside one sub-domain, `0` for interface candidates.
    pub cell_colors: Vec<i8>,
}

impl PatchClassification {
    pub fn corner_color(&self, mesh: &PatchMesh, patch: usize, corner: usize) -> Color {
        let (ci, cj) = mesh.corner_coarse(patch, corner);
        self.node_colors[mesh.coarse_index(ci, cj)]
    }
}

pub fn set_material_ids<L: LevelSet + ?Sized>(mesh: &PatchMesh, ls: &L) -> PatchClassification {
    let n = mesh.patches_per_dim;
    let mut node_colors = Vec::with_capacity((n + 1) * (n + 1));
    for cj in 0..=n {
        for ci in 0..=n {
            node_colors.push(ls.domain(&mesh.fine_point(2 * ci, 2 * cj)));
        }
    }
    let mut cls = PatchClassification {
        node_colors,
        cell_colors: Vec::with_capacity(n * n),
    };
    for patch in 0..mesh.n_patches() {
        let inner = CORNERS
            .iter()
            .filter(|&&c| cls.corner_color(mesh, patch, c) < 0)
            .count();
        cls.cell_colors.push(match inner {
            4 => -1,
            0 => 1,
            _ => 0,
        });
    }
    cls
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Configuration {
    None,
    A,
    B,
    C,
    D,
}

/// Where the interface meets the patch boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feature {
    Corner(usize),
    /// Interior point of an edge at fraction `t` from its start corner.
    Edge(Edge, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutFeatures {
    pub configuration: Configuration,
    pub femtype: FemType,
    pub features: Vec<Feature>,
    pub r: Option<f64>,
    pub s: Option<f64>,
}

impl CutFeatures {
    pub fn uncut() -> Self {
        Self {
            configuration: Configuration::None,
            femtype: FemType::P0,
            features: Vec::new(),
            r: None,
            s: None,
        }
    }

    pub fn edge_fraction(&self, edge: Edge) -> Option<f64> {
        self.features.iter().find_map(|f| match *f {
            Feature::Edge(e, t) if e == edge => Some(t),
            _ => None,
        })
    }

    pub fn corners(&self) -> Vec<usize> {
        self.features
            .iter()
            .filter_map(|f| match *f {
                Feature::Corner(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    pub fn cut_edges(&self) -> Vec<(Edge, f64)> {
        self.features
            .iter()
            .filter_map(|f| match *f {
                Feature::Edge(e, t) => Some((e, t)),
                _ => None,
            })
            .collect()
    }
}

/// Locates the interface on the boundary of a patch with mixed corner colours.
pub fn find_features<L: LevelSet + ?Sized>(
    mesh: &PatchMesh,
    patch: usize,
    cls: &PatchClassification,
    ls: &L,
) -> Result<Vec<Feature>> {
    let mut features: Vec<Feature> = Vec::new();
    for edge in Edge::ALL {
        let (a, _, b) = edge.nodes();
        if cls.corner_color(mesh, patch, a) == cls.corner_color(mesh, patch, b) {
            continue;
        }
        let pa = mesh.lattice_point(patch, a);
        let pb = mesh.lattice_point(patch, b);
        let t = find_edge_cut(&pa, &pb, ls)?;
        let f = if t < SNAP_TOLERANCE {
            Feature::Corner(a)
        } else if t > 1.0 - SNAP_TOLERANCE {
            Feature::Corner(b)
        } else {
            Feature::Edge(edge, t)
        };
        if !features.contains(&f) {
            features.push(f);
        }
    }
    Ok(features)
}

fn corners_opposite(a: usize, b: usize) -> bool {
    a + b == 8
}

/// Determines configuration, reference patch type and cut parameters.
pub fn classify_cut<L: LevelSet + ?Sized>(
    mesh: &PatchMesh,
    patch: usize,
    cls: &PatchClassification,
    ls: &L,
) -> Result<CutFeatures> {
    if cls.cell_colors[patch] != 0 {
        return Ok(CutFeatures::uncut());
    }
    let features = find_features(mesh, patch, cls, ls)?;
    classify_features(patch, features)
}

pub fn classify_features(patch: usize, features: Vec<Feature>) -> Result<CutFeatures> {
    let invalid = |reason: &str| Error::InvalidCut {
        patch,
        reason: reason.to_string(),
    };
    let mut out = CutFeatures {
        features,
        ..CutFeatures::uncut()
    };
    match out.features.as_slice() {
        [Feature::Corner(_)] => {}
        [Feature::Corner(a), Feature::Corner(b)] => {
            if corners_opposite(*a, *b) {
                out.configuration = Configuration::D;
                out.femtype = FemType::P1;
            }
        }
        [Feature::Edge(e1, t1), Feature::Edge(e2, t2)] => {
            let (e1, t1, e2, t2) = (*e1, *t1, *e2, *t2);
            if e1.opposite() == e2 {
                out.configuration = Configuration::A;
                // fractions measured from the lower left and the upper right corner
                let (r, s) = (t1, 1.0 - t2);
                out.r = Some(r);
                out.s = Some(s);
                out.femtype = if r + s >= 1.0 {
                    FemType::P2
                } else {
                    FemType::P3
                };
            } else {
                out.configuration = Configuration::B;
                let corner = separated_corner(e1, e2);
                let from_corner = |e: Edge, t: f64| if e.nodes().0 == corner { t } else { 1.0 - t };
                out.r = Some(from_corner(e1, t1));
                out.s = Some(from_corner(e2, t2));
                out.femtype = if corner == 0 || corner == 8 {
                    FemType::P3
                } else {
                    FemType::P2
                };
            }
        }
        [Feature::Corner(c), Feature::Edge(e, t)] | [Feature::Edge(e, t), Feature::Corner(c)] => {
            if e.has_corner(*c) {
                return Err(invalid(
                    "interface leaves through an edge incident to the cut corner",
                ));
            }
            out.configuration = Configuration::C;
            out.femtype = FemType::P1;
            out.r = Some(*t);
        }
        [] => return Err(invalid("mixed corner colours without a boundary cut")),
        [_] => return Err(invalid("single interior edge cut")),
        _ => return Err(invalid("more than two boundary cuts")),
    }
    Ok(out)
}

/// Corner shared by two adjacent edges.
pub fn separated_corner(e1: Edge, e2: Edge) -> usize {
    let (a1, _, b1) = e1.nodes();
    if e2.has_corner(a1) {
        a1
    } else {
        b1
    }
}

/// Physical position of an edge cut at fraction `t`.
pub fn edge_point(mesh: &PatchMesh, patch: usize, edge: Edge, t: f64) -> Point2<f64> {
    let (a, _, b) = edge.nodes();
    let pa = mesh.lattice_point(patch, a);
    let pb = mesh.lattice_point(patch, b);
    pa + (pb - pa) * t
}
