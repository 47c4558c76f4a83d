//! Legacy ASCII VTK output of the sub-cell mesh.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{MeshGeometry, SubCellMesh};

const VTK_TRIANGLE: u8 = 5;
const VTK_QUAD: u8 = 9;

/// Writes sub-cells with the nodal solution `u`, the sub-domain marker and the patch type.
pub fn write_vtk(path: &Path, geo: &MeshGeometry, sub: &SubCellMesh, u: &[f64]) -> Result<()> {
    std::fs::write(path, vtk_string(geo, sub, u)).map_err(|e| Error::io(path, e))
}

pub fn vtk_string(geo: &MeshGeometry, sub: &SubCellMesh, u: &[f64]) -> String {
    let mut s = String::new();
    let np = sub.positions.len();
    let nc = sub.cells.len();
    let size: usize = sub.cells.iter().map(|c| c.global.len() + 1).sum();
    // writing to a String cannot fail
    let _ = writeln!(
        s,
        "# vtk DataFile Version 3.0\nlocmodfe solution\nASCII\nDATASET UNSTRUCTURED_GRID"
    );
    let _ = writeln!(s, "POINTS {np} double");
    for p in &sub.positions {
        let _ = writeln!(s, "{:.17e} {:.17e} 0", p.x, p.y);
    }
    let _ = writeln!(s, "CELLS {nc} {size}");
    for c in &sub.cells {
        let ids: Vec<String> = c.global.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(s, "{} {}", ids.len(), ids.join(" "));
    }
    let _ = writeln!(s, "CELL_TYPES {nc}");
    for c in &sub.cells {
        let _ = writeln!(
            s,
            "{}",
            if c.global.len() == 4 {
                VTK_QUAD
            } else {
                VTK_TRIANGLE
            }
        );
    }
    let _ = writeln!(
        s,
        "POINT_DATA {np}\nSCALARS solution double 1\nLOOKUP_TABLE default"
    );
    for v in u {
        let _ = writeln!(s, "{v:.17e}");
    }
    let _ = writeln!(
        s,
        "CELL_DATA {nc}\nSCALARS marker int 1\nLOOKUP_TABLE default"
    );
    for c in &sub.cells {
        let _ = writeln!(s, "{}", c.marker);
    }
    let _ = writeln!(s, "SCALARS femtype int 1\nLOOKUP_TABLE default");
    for c in &sub.cells {
        let _ = writeln!(s, "{}", geo.cutinfos[c.patch].femtype.id());
    }
    s
}
