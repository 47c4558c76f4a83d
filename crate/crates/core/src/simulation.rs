//! Setup, assembly and solution of one discrete interface problem.

use crate::error::Result;
use crate::mesh::{extract_subcells, init_fem, MeshGeometry, PatchMesh, Placement, SubCellMesh};
use crate::problems::InterfaceProblem;
use crate::ref_fem::BasisKind;
use crate::solvers::{solve, SolverConfig, SolverReport};
use crate::system::{
    apply_constraints, assemble_interface_flux_rhs, assemble_matrix, assemble_rhs,
    interpolate_boundary_values, DofHandler, HierarchicalTransform, LinearSystem,
};

/// Node placement used together with a basis.
pub fn placement_for(kind: BasisKind) -> Placement {
    match kind {
        BasisKind::Standard => Placement::Standard,
        BasisKind::Hierarchical => Placement::Hierarchical,
    }
}

pub struct Discretization {
    pub kind: BasisKind,
    pub dofs: DofHandler,
    pub geometry: MeshGeometry,
    pub subcells: SubCellMesh,
    pub transform: Option<HierarchicalTransform>,
    pub system: LinearSystem,
}

impl Discretization {
    /// Builds the mesh and the constrained linear system; `flux_jump` adds the
    /// interface term with the problem's jump.
    pub fn new(
        level: u32,
        problem: &dyn InterfaceProblem,
        kind: BasisKind,
        flux_jump: bool,
    ) -> Result<Self> {
        Self::with_placement(level, problem, kind, placement_for(kind), flux_jump)
    }

    pub fn with_placement(
        level: u32,
        problem: &dyn InterfaceProblem,
        kind: BasisKind,
        placement: Placement,
        flux_jump: bool,
    ) -> Result<Self> {
        let mesh = PatchMesh::new(level);
        let geometry = init_fem(&mesh, problem.level_set(), placement)?;
        let dofs = DofHandler::new(&mesh);
        let subcells = extract_subcells(&geometry);
        let transform =
            (kind == BasisKind::Hierarchical).then(|| HierarchicalTransform::new(&geometry, &dofs));

        let mut matrix = assemble_matrix(&dofs, &geometry, problem, kind)?;
        let mut rhs = assemble_rhs(&dofs, &geometry, problem, kind)?;
        if flux_jump {
            let flux =
                assemble_interface_flux_rhs(&subcells, problem.flux_jump(), transform.as_ref());
            for (b, f) in rhs.iter_mut().zip(&flux) {
                *b += f;
            }
        }
        let constraints = interpolate_boundary_values(
            &dofs,
            &subcells.positions,
            |p| problem.dirichlet(p),
            transform.as_ref(),
        );
        apply_constraints(&mut matrix, &mut rhs, &constraints);
        let mut solution = vec![0.0; dofs.n_dofs];
        constraints.distribute(&mut solution);
        Ok(Self {
            kind,
            dofs,
            geometry,
            subcells,
            transform,
            system: LinearSystem {
                matrix,
                rhs,
                solution,
                constraints,
            },
        })
    }

    /// Solves from the constrained zero vector; the coefficients are kept in `system.solution`.
    pub fn solve(&mut self, config: &SolverConfig) -> Result<SolverReport> {
        let sys = &mut self.system;
        sys.solution.fill(0.0);
        sys.constraints.distribute(&mut sys.solution);
        solve(&sys.matrix, &sys.rhs, &mut sys.solution, config)
    }

    /// Values of the discrete solution at all nodes.
    pub fn nodal_solution(&self) -> Vec<f64> {
        match &self.transform {
            Some(s) => s.to_nodal(&self.system.solution),
            None => self.system.solution.clone(),
        }
    }
}
