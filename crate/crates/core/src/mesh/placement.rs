//! Node placement on interface patches and the per-patch mapping data.
//!
//! Placement is computed in a canonical frame per configuration (cuts on the
//! bottom and top edge for A, lower left corner separated for B, lower left
//! corner and top edge for C, corners 0 and 8 for D) and mapped back with a
//! symmetry of the square.

use nalgebra::{Point2, Vector2};

use super::classify::{classify_cut, edge_point, CutFeatures, Feature, PatchClassification};
use super::symmetry::Symmetry;
use super::{set_material_ids, Configuration, Edge, PatchMesh, CENTER, CORNERS};
use crate::error::{Error, Result};
use crate::levelset::{Color, LevelSet};
use crate::ref_fem::{ref_node, CoarseSplit, FemType};

pub use crate::ref_fem::Diagonal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    /// Interior node at the intersection of the lines through opposite edge nodes.
    Standard,
    /// Interior node restricted to a patch diagonal, as required by the hierarchical basis.
    Hierarchical,
    /// As `Standard`, except that in configuration B the interior node is the
    /// mean of the four edge nodes. Reproduces the published sub-cell
    /// statistics but exceeds the 144 degree bound as both cuts approach the
    /// far corners.
    EdgeMean,
}

/// Node layout of one patch in reference coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPlacement {
    pub femtype: FemType,
    pub nodes: [Point2<f64>; 9],
    pub interface: [bool; 9],
    pub split: CoarseSplit,
    /// Uncut edges whose midpoint node was moved, with the new fraction along the edge.
    pub moves: Vec<(Edge, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutInfo {
    pub configuration: Configuration,
    pub femtype: FemType,
    pub r: Option<f64>,
    pub s: Option<f64>,
    /// Physical node coordinates.
    pub nodes: [Point2<f64>; 9],
    /// Nodal values of the discrete level set.
    pub local_disc_chi: [f64; 9],
    pub nodes_at_interface: Vec<usize>,
    pub split: CoarseSplit,
}

impl CutInfo {
    pub fn is_cut(&self) -> bool {
        self.configuration != Configuration::None
    }
}

/// Intersection of the line through `p1, p2` with the line through `q1, q2`.
pub fn line_intersection(
    p1: &Point2<f64>,
    p2: &Point2<f64>,
    q1: &Point2<f64>,
    q2: &Point2<f64>,
) -> Option<Point2<f64>> {
    let d1 = p2 - p1;
    let d2 = q2 - q1;
    let det = d1.x * d2.y - d1.y * d2.x;
    if det.abs() < 1e-14 * d1.norm() * d2.norm() {
        return None;
    }
    let w = q1 - p1;
    let lambda = (w.x * d2.y - w.y * d2.x) / det;
    Some(p1 + d1 * lambda)
}

fn pt(x: f64, y: f64) -> Point2<f64> {
    Point2::new(x, y)
}

/// Position of a point on an edge as a fraction from its start corner.
fn edge_of_point(p: &Point2<f64>) -> Option<(Edge, f64)> {
    const TOL: f64 = 1e-12;
    if p.y.abs() < TOL {
        Some((Edge::Bottom, p.x))
    } else if (p.y - 1.0).abs() < TOL {
        Some((Edge::Top, p.x))
    } else if p.x.abs() < TOL {
        Some((Edge::Left, p.y))
    } else if (p.x - 1.0).abs() < TOL {
        Some((Edge::Right, p.y))
    } else {
        None
    }
}

fn ref_edge_point(edge: Edge, t: f64) -> Point2<f64> {
    let (a, _, b) = edge.nodes();
    let (pa, pb) = (ref_node(a), ref_node(b));
    pa + (pb - pa) * t
}

/// Features mapped by `sym`; `None` if an edge cut no longer lies on an edge interior.
fn map_features(features: &[Feature], sym: Symmetry) -> Vec<Feature> {
    features
        .iter()
        .map(|f| match *f {
            Feature::Corner(c) => Feature::Corner(sym.node(c)),
            Feature::Edge(e, t) => {
                let (edge, t) = edge_of_point(&sym.apply(&ref_edge_point(e, t)))
                    .expect("edge points stay on the boundary");
                Feature::Edge(edge, t)
            }
        })
        .collect()
}

enum Canonical {
    A { a: f64, b: f64 },
    B { a: f64, b: f64 },
    C { b: f64 },
    D,
}

fn match_canonical(cfg: Configuration, f: &[Feature]) -> Option<Canonical> {
    let edge = |e: Edge| {
        f.iter().find_map(|x| match *x {
            Feature::Edge(g, t) if g == e => Some(t),
            _ => None,
        })
    };
    let corner = |c: usize| f.iter().any(|x| *x == Feature::Corner(c));
    match cfg {
        Configuration::A => Some(Canonical::A {
            a: edge(Edge::Bottom)?,
            b: edge(Edge::Top)?,
        }),
        Configuration::B => Some(Canonical::B {
            a: edge(Edge::Bottom)?,
            b: edge(Edge::Left)?,
        }),
        Configuration::C => {
            let b = edge(Edge::Top)?;
            corner(0).then_some(Canonical::C { b })
        }
        Configuration::D => (corner(0) && corner(8)).then_some(Canonical::D),
        Configuration::None => None,
    }
}

struct CanonicalLayout {
    nodes: [Point2<f64>; 9],
    interface: Vec<usize>,
    diagonal: Diagonal,
}

fn canonical_layout(
    patch: usize,
    shape: &Canonical,
    femtype: FemType,
    placement: Placement,
) -> Result<CanonicalLayout> {
    let mut nodes: [Point2<f64>; 9] = std::array::from_fn(ref_node);
    let degenerate = || Error::DegenerateMapping { patch };
    let (e2, e4) = (pt(1.0, 0.5), pt(0.0, 0.5));
    let femtype_diagonal = if femtype == FemType::P3 {
        Diagonal::Anti
    } else {
        Diagonal::Main
    };
    let layout = match *shape {
        Canonical::A { a, b } => {
            let (e1, e3) = (pt(a, 0.0), pt(b, 1.0));
            nodes[1] = e1;
            nodes[7] = e3;
            nodes[CENTER] = match placement {
                Placement::Standard | Placement::EdgeMean => {
                    line_intersection(&e2, &e4, &e1, &e3).ok_or_else(degenerate)?
                }
                Placement::Hierarchical => {
                    let m = if femtype_diagonal == Diagonal::Main {
                        line_intersection(&pt(0.0, 0.0), &pt(1.0, 1.0), &e1, &e3)
                    } else {
                        line_intersection(&pt(1.0, 0.0), &pt(0.0, 1.0), &e1, &e3)
                    }
                    .ok_or_else(degenerate)?;
                    if m.x < 0.25 {
                        nodes[3] = pt(0.0, m.y);
                    } else if m.x > 0.75 {
                        nodes[5] = pt(1.0, m.y);
                    }
                    m
                }
            };
            CanonicalLayout {
                nodes,
                interface: vec![1, CENTER, 7],
                diagonal: femtype_diagonal,
            }
        }
        Canonical::B { a, b } => {
            let (e1, e4b) = (pt(a, 0.0), pt(0.0, b));
            nodes[1] = e1;
            nodes[3] = e4b;
            nodes[CENTER] = match placement {
                Placement::EdgeMean => pt((a + 1.5) / 4.0, (b + 1.5) / 4.0),
                Placement::Standard => {
                    line_intersection(&e2, &e4b, &e1, &pt(0.5, 1.0)).ok_or_else(degenerate)?
                }
                Placement::Hierarchical => {
                    if a >= b {
                        pt(a, 1.0 - a)
                    } else {
                        pt(1.0 - b, b)
                    }
                }
            };
            CanonicalLayout {
                nodes,
                interface: vec![1, 3],
                diagonal: Diagonal::Anti,
            }
        }
        Canonical::C { b } => {
            let e3 = pt(b, 1.0);
            nodes[7] = e3;
            let x1 = pt(0.0, 0.0);
            nodes[CENTER] = match placement {
                Placement::Standard | Placement::EdgeMean => {
                    line_intersection(&e2, &e4, &x1, &e3).ok_or_else(degenerate)?
                }
                Placement::Hierarchical => {
                    let m = line_intersection(&pt(1.0, 0.0), &pt(0.0, 1.0), &x1, &e3)
                        .ok_or_else(degenerate)?;
                    if m.x < 0.25 {
                        nodes[3] = pt(0.0, m.y);
                    }
                    m
                }
            };
            CanonicalLayout {
                nodes,
                interface: vec![0, CENTER, 7],
                diagonal: Diagonal::Anti,
            }
        }
        Canonical::D => CanonicalLayout {
            nodes,
            interface: vec![0, CENTER, 8],
            diagonal: Diagonal::Main,
        },
    };
    Ok(layout)
}

/// Places the nine nodes of a patch in reference coordinates.
pub fn local_placement(
    patch: usize,
    cut: &CutFeatures,
    placement: Placement,
) -> Result<LocalPlacement> {
    if cut.configuration == Configuration::None {
        return Ok(LocalPlacement {
            femtype: FemType::P0,
            nodes: std::array::from_fn(ref_node),
            interface: std::array::from_fn(|k| cut.corners().contains(&k)),
            split: CoarseSplit::Bilinear,
            moves: Vec::new(),
        });
    }
    let (sym, shape) = Symmetry::ALL
        .iter()
        .find_map(|&sym| {
            let mapped = map_features(&cut.features, sym.inverse());
            match_canonical(cut.configuration, &mapped).map(|c| (sym, c))
        })
        .ok_or_else(|| Error::InvalidCut {
            patch,
            reason: "no canonical frame for the cut".to_string(),
        })?;
    let canonical_type = if sym.swaps_diagonals() {
        cut.femtype.swap_diagonal()
    } else {
        cut.femtype
    };
    let layout = canonical_layout(patch, &shape, canonical_type, placement)?;

    let mut nodes = [Point2::origin(); 9];
    let mut interface = [false; 9];
    let mut moves = Vec::new();
    for k in 0..9 {
        let target = sym.node(k);
        nodes[target] = sym.apply(&layout.nodes[k]);
        interface[target] = layout.interface.contains(&k);
        if matches!(k, 1 | 3 | 5 | 7)
            && layout.nodes[k] != ref_node(k)
            && !layout.interface.contains(&k)
        {
            let (edge, t) = edge_of_point(&nodes[target]).expect("edge node stays on its edge");
            moves.push((edge, t));
        }
    }
    let diagonal = if sym.swaps_diagonals() {
        layout.diagonal.swap()
    } else {
        layout.diagonal
    };
    Ok(LocalPlacement {
        femtype: cut.femtype,
        nodes,
        interface,
        split: CoarseSplit::Triangles(diagonal),
        moves,
    })
}

/// Geometry of all patches: classification, node positions and discrete level set.
#[derive(Debug, Clone)]
pub struct MeshGeometry {
    pub mesh: PatchMesh,
    pub classification: PatchClassification,
    pub placement: Placement,
    pub cutinfos: Vec<CutInfo>,
    /// Position of the midpoint node of every patch edge as a fraction along the edge.
    pub edge_fractions: Vec<f64>,
}

impl MeshGeometry {
    /// Physical position of every global node.
    pub fn node_positions(&self) -> Vec<Point2<f64>> {
        let mut pos = vec![Point2::origin(); self.mesh.n_nodes()];
        for (patch, info) in self.cutinfos.iter().enumerate() {
            for (k, g) in self.mesh.global_nodes(patch).into_iter().enumerate() {
                pos[g] = info.nodes[k];
            }
        }
        pos
    }

    pub fn n_cut(&self) -> usize {
        self.cutinfos.iter().filter(|c| c.is_cut()).count()
    }
}

/// Classifies all patches and builds their node positions and discrete level set.
pub fn init_fem<L: LevelSet + ?Sized>(
    mesh: &PatchMesh,
    ls: &L,
    placement: Placement,
) -> Result<MeshGeometry> {
    let cls = set_material_ids(mesh, ls);
    let n = mesh.n_patches();
    let mut cuts = Vec::with_capacity(n);
    let mut locals = Vec::with_capacity(n);
    for patch in 0..n {
        let cut = classify_cut(mesh, patch, &cls, ls)?;
        locals.push(local_placement(patch, &cut, placement)?);
        cuts.push(cut);
    }

    // shared edge nodes: cut points and midpoints moved by either neighbour
    let mut edge_fractions = vec![0.5; mesh.n_edges()];
    let mut moved = vec![false; mesh.n_edges()];
    for patch in 0..n {
        for &(edge, t) in &cuts[patch].cut_edges() {
            edge_fractions[mesh.edge_id(patch, edge)] = t;
        }
    }
    for patch in 0..n {
        for &(edge, t) in &locals[patch].moves {
            let id = mesh.edge_id(patch, edge);
            if moved[id] && edge_fractions[id] != t {
                return Err(Error::ConflictingNodeMove {
                    node: mesh.global_node(patch, edge.midpoint()),
                });
            }
            moved[id] = true;
            edge_fractions[id] = t;
        }
    }

    let mut cutinfos = Vec::with_capacity(n);
    for patch in 0..n {
        let local = &locals[patch];
        let cut = &cuts[patch];
        let mut nodes = [Point2::origin(); 9];
        for c in CORNERS {
            nodes[c] = mesh.lattice_point(patch, c);
        }
        for edge in Edge::ALL {
            let t = edge_fractions[mesh.edge_id(patch, edge)];
            nodes[edge.midpoint()] = edge_point(mesh, patch, edge, t);
        }
        nodes[CENTER] = if cut.configuration == Configuration::None {
            mesh.lattice_point(patch, CENTER)
        } else {
            mesh.from_reference(patch, &local.nodes[CENTER])
        };
        let local_disc_chi = discrete_level_set(mesh, patch, &cls, cut, local, &nodes, ls);
        cutinfos.push(CutInfo {
            configuration: cut.configuration,
            femtype: local.femtype,
            r: cut.r,
            s: cut.s,
            nodes,
            local_disc_chi,
            nodes_at_interface: (0..9)
                .filter(|&k| local.interface[k] && cut.configuration != Configuration::None)
                .collect(),
            split: local.split,
        });
    }
    Ok(MeshGeometry {
        mesh: mesh.clone(),
        classification: cls,
        placement,
        cutinfos,
        edge_fractions,
    })
}

/// Sub-domain colour of each node away from the interface.
fn node_regions(
    mesh: &PatchMesh,
    patch: usize,
    cls: &PatchClassification,
    cut: &CutFeatures,
    local: &LocalPlacement,
) -> [Color; 9] {
    let corners_on_gamma = cut.corners();
    let corner_color = |c: usize| cls.corner_color(mesh, patch, c);
    if cut.configuration == Configuration::None {
        // colour of the corners not touched by the interface
        let color = CORNERS
            .iter()
            .find(|c| !corners_on_gamma.contains(c))
            .map_or(1, |&c| corner_color(c));
        return [color; 9];
    }
    let mut regions = [0; 9];
    for c in CORNERS {
        regions[c] = corner_color(c);
    }
    for edge in Edge::ALL {
        let (a, m, b) = edge.nodes();
        regions[m] = if corners_on_gamma.contains(&a) {
            corner_color(b)
        } else {
            corner_color(a)
        };
    }
    if !local.interface[CENTER] {
        // configuration B: the centre lies beyond the cut, opposite the separated corner
        let edges = cut.cut_edges();
        let corner = super::classify::separated_corner(edges[0].0, edges[1].0);
        regions[CENTER] = corner_color(8 - corner);
    }
    regions
}

fn discrete_level_set<L: LevelSet + ?Sized>(
    mesh: &PatchMesh,
    patch: usize,
    cls: &PatchClassification,
    cut: &CutFeatures,
    local: &LocalPlacement,
    nodes: &[Point2<f64>; 9],
    ls: &L,
) -> [f64; 9] {
    let regions = node_regions(mesh, patch, cls, cut, local);
    let cut_patch = cut.configuration != Configuration::None;
    std::array::from_fn(|k| {
        if cut_patch && local.interface[k] {
            return 0.0;
        }
        let v = ls.value(&nodes[k]);
        let sign = f64::from(regions[k]);
        if v * sign > 0.0 {
            v
        } else {
            sign * v.abs().max(f64::MIN_POSITIVE)
        }
    })
}

/// Interior angles of a triangle in degrees.
pub fn triangle_angles(a: &Point2<f64>, b: &Point2<f64>, c: &Point2<f64>) -> [f64; 3] {
    let angle = |p: &Point2<f64>, q: &Point2<f64>, r: &Point2<f64>| -> f64 {
        let u: Vector2<f64> = q - p;
        let v: Vector2<f64> = r - p;
        let cross = u.x * v.y - u.y * v.x;
        cross.abs().atan2(u.dot(&v)).to_degrees()
    };
    [angle(a, b, c), angle(b, c, a), angle(c, a, b)]
}
