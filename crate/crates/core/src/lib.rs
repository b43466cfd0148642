//! Bound states of the radial Schrödinger equation by mapped
//! Gauss-Lobatto-Legendre collocation.
//!
//! The semi-infinite radial domain is mapped onto [-1, 1] by an algebraic
//! transformation, the equation is collocated on Lobatto nodes in a form
//! that keeps the discretized Hamiltonian symmetric, and the dense spectrum
//! is read off with an in-crate Householder/QL eigensolver. Built-in
//! potential families cover the exponential cosine screened Coulomb (ECSC)
//! and general exponential screened Coulomb (GESC) interactions together
//! with their Yukawa and Coulomb limits.
//!
//! The solver reports eigenvalues only to the digits that survive grid
//! escalation (order and domain size), and can locate the critical ECSC
//! screening strength at which a given state unbinds.
//!
//! ```
//! use gps_radial::{solve_states, Potential, SolverConfig};
//!
//! // Hydrogen s levels on the default grid: E_n = -1/(2 n^2).
//! let states = solve_states(&SolverConfig::default(), Potential::coulomb(1.0), 0, 3).unwrap();
//! assert!((states[0].energy + 0.5).abs() < 1e-10);
//! assert!((states[2].energy + 1.0 / 18.0).abs() < 1e-10);
//!
//! // Potentials parse from the CLI string grammar.
//! let screened: Potential = "gesc:b=0.02".parse().unwrap();
//! assert_eq!(screened, Potential::gesc(0.02));
//! ```

pub mod critical;
pub mod eigensolver;
pub mod error;
pub mod golden;
pub mod hamiltonian;
pub mod mapping;
pub mod matrix;
pub mod potentials;
pub mod quadrature;
pub mod spectrum;

pub use critical::{find_critical_screening, CriticalResult, EcscFamily};
pub use eigensolver::{eig_symmetric, EigenSolution};
pub use error::{Result, SolverError};
pub use golden::{GoldenEntry, TableId};
pub use hamiltonian::{assemble, second_derivative_matrix, HamiltonianMatrix};
pub use mapping::{build_grid, map_jacobian, map_to_r, MapParams, RadialGrid};
pub use matrix::SquareMatrix;
pub use potentials::Potential;
pub use quadrature::{legendre_pair, lobatto_nodes, LobattoSet};
pub use spectrum::{
    converge_state, count_bound_states, solve_states, BoundState, SolverConfig, StateLabel,
};
