//! Discretized radial Hamiltonian on the interior collocation nodes.
//!
//! With Dirichlet conditions absorbed by dropping the endpoint nodes, the
//! eigenproblem is
//!
//! ```text
//! sum_j [ -1/2 D_ij + u_j delta_ij ] chi_j = eps chi_i,    i,j = 1..N-1
//! ```
//!
//! where u_i = l(l+1)/(2 r_i^2) + v(r_i) and D is the symmetrized second
//! derivative of the cardinal basis,
//!
//! ```text
//! D_ij = -2 / (r'_i (x_i - x_j)^2 r'_j)          i != j
//! D_ii = -N(N+1) / (3 r'_i^2 (1 - x_i^2))
//! ```
//!
//! Both formulas are negative, so the kinetic diagonal -1/2 D_ii is
//! positive. D is assembled once per pair, making symmetry bitwise.

use std::sync::Arc;

use crate::error::Result;
use crate::mapping::RadialGrid;
use crate::matrix::SquareMatrix;
use crate::potentials::Potential;

/// Symmetrized second-derivative matrix on the interior nodes, (N-1)^2.
pub fn second_derivative_matrix(grid: &RadialGrid) -> SquareMatrix {
    let n = grid.order();
    let nf = n as f64;
    let x = grid.lobatto().nodes();
    let rp = grid.r_prime();
    let dim = n - 1;
    let mut d = SquareMatrix::zeros(dim);
    for i in 0..dim {
        let xi = x[i + 1];
        let rpi = rp[i + 1];
        d[(i, i)] = -nf * (nf + 1.0) / (3.0 * rpi * rpi * (1.0 - xi) * (1.0 + xi));
        for j in (i + 1)..dim {
            let dx = xi - x[j + 1];
            let val = -2.0 / (rpi * dx * dx * rp[j + 1]);
            d[(i, j)] = val;
            d[(j, i)] = val;
        }
    }
    d
}

/// Symmetric Hamiltonian for one (potential, l) channel on a shared grid.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    entries: SquareMatrix,
    grid: Arc<RadialGrid>,
    potential: Potential,
    l: u32,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn entries(&self) -> &SquareMatrix {
        &self.entries
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn potential(&self) -> Potential {
        self.potential
    }

    pub fn l(&self) -> u32 {
        self.l
    }
}

/// Assemble H = -1/2 D + diag(u) for a potential and angular momentum.
///
/// D depends only on the grid; pass it in when sweeping potentials so it is
/// computed once. Interior radii are strictly positive, so the potential
/// evaluation cannot hit its domain error here.
pub fn assemble_with(
    grid: &Arc<RadialGrid>,
    second_derivative: &SquareMatrix,
    potential: Potential,
    l: u32,
) -> Result<HamiltonianMatrix> {
    let dim = grid.order() - 1;
    let mut entries = SquareMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            entries[(i, j)] = -0.5 * second_derivative[(i, j)];
        }
    }
    for i in 0..dim {
        let r = grid.r()[i + 1];
        entries[(i, i)] += potential.effective(l, r)?;
    }
    Ok(HamiltonianMatrix {
        entries,
        grid: Arc::clone(grid),
        potential,
        l,
    })
}

/// Convenience assembly that derives D from the grid.
pub fn assemble(grid: &Arc<RadialGrid>, potential: Potential, l: u32) -> Result<HamiltonianMatrix> {
    let d = second_derivative_matrix(grid);
    assemble_with(grid, &d, potential, l)
}
