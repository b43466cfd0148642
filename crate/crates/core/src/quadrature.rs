//! Legendre polynomials and Gauss-Lobatto-Legendre collocation nodes.
//!
//! The collocation basis is built from cardinal functions
//!
//! ```text
//! g_j(x) = -1 / (N(N+1) P_N(x_j)) * (1 - x^2) P'_N(x) / (x - x_j)
//! ```
//!
//! which satisfy g_j(x_k) = delta_jk on the node set {x_j}. The nodes are
//! x_0 = -1, x_N = +1 and the N-1 interior roots of P'_N(x).

use crate::error::{Result, SolverError};

/// Tolerance slack accepted when validating that an argument lies in [-1, 1].
const INTERVAL_SLACK: f64 = 1e-12;

/// Newton convergence threshold on the node update.
const NODE_STEP_TOL: f64 = 1e-15;

/// Iteration cap; exceeding it signals defective initial bracketing.
const NODE_MAX_ITER: usize = 100;

/// Evaluate P_N(x) and P'_N(x).
///
/// P_N comes from the Bonnet three-term recurrence; the derivative uses
/// P'_N(x) = N (x P_N - P_{N-1}) / (x^2 - 1), with the endpoint identity
/// P'_N(+-1) = (+-1)^{N-1} N(N+1)/2 where the quotient degenerates.
pub fn legendre_pair(order: usize, x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= 1.0 + INTERVAL_SLACK) {
        return Err(SolverError::OutsideInterval { x });
    }
    let x = x.clamp(-1.0, 1.0);
    if order == 0 {
        return Ok((1.0, 0.0));
    }
    let n = order as f64;

    // p_prev = P_{k-1}, p = P_k climbing to k = order
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..order {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }

    let one_minus_x2 = (1.0 - x) * (1.0 + x);
    let dp = if one_minus_x2 == 0.0 {
        let endpoint = n * (n + 1.0) / 2.0;
        if x > 0.0 || order % 2 == 1 {
            endpoint
        } else {
            -endpoint
        }
    } else {
        n * (x * p - p_prev) / (x * x - 1.0)
    };
    Ok((p, dp))
}

/// Gauss-Lobatto-Legendre node set of a given polynomial order.
///
/// Immutable after construction; nodes are ascending, antisymmetric by
/// construction (the negative half is mirrored), and the endpoints are
/// exactly -1 and +1.
#[derive(Debug, Clone, PartialEq)]
pub struct LobattoSet {
    order: usize,
    nodes: Vec<f64>,
    legendre_at_nodes: Vec<f64>,
}

impl LobattoSet {
    /// Polynomial order N; the set holds N+1 nodes.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Collocation nodes x_0 = -1 < x_1 < ... < x_N = +1.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// P_N(x_j) for each node, as needed by cardinal functions and weights.
    pub fn legendre_at_nodes(&self) -> &[f64] {
        &self.legendre_at_nodes
    }

    /// Gauss-Lobatto quadrature weight w_j = 2 / (N(N+1) P_N(x_j)^2).
    pub fn weight(&self, j: usize) -> f64 {
        let n = self.order as f64;
        let p = self.legendre_at_nodes[j];
        2.0 / (n * (n + 1.0) * p * p)
    }

    /// Cardinal function g_j evaluated at an arbitrary x in [-1, 1].
    ///
    /// Exactly 1 at x_j, exactly 0 at the other nodes; used to resample
    /// collocation solutions off the grid.
    pub fn cardinal(&self, j: usize, x: f64) -> Result<f64> {
        let xj = self.nodes[j];
        if x == xj {
            return Ok(1.0);
        }
        let n = self.order as f64;
        let (_, dp) = legendre_pair(self.order, x)?;
        let pj = self.legendre_at_nodes[j];
        Ok(-(1.0 - x * x) * dp / (n * (n + 1.0) * pj * (x - xj)))
    }
}

/// Compute the Lobatto node set of order N (N >= 2).
///
/// Interior nodes are roots of P'_N found by Newton iteration from the
/// Chebyshev-Gauss-Lobatto guesses -cos(pi j / N). The derivative of P'_N
/// needed by Newton comes from the Legendre ODE,
/// (1 - x^2) P''_N = 2x P'_N - N(N+1) P_N, so no explicit polynomial
/// coefficients are ever formed. A bisection fallback keeps stray Newton
/// steps inside the bracket of adjacent guesses.
pub fn lobatto_nodes(order: usize) -> Result<LobattoSet> {
    if order < 2 {
        return Err(SolverError::InvalidArgument(format!(
            "Lobatto set needs order >= 2, got {order}"
        )));
    }
    let n = order;
    let mut nodes = vec![0.0; n + 1];
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    if n % 2 == 0 {
        nodes[n / 2] = 0.0;
    }

    // Roots on the negative half; the positive half is the exact mirror.
    let half = (n - 1) / 2;
    for j in 1..=half {
        let guess = -(std::f64::consts::PI * j as f64 / n as f64).cos();
        // Bracket from midpoints to the neighbouring Chebyshev guesses.
        let below = if j == 1 {
            -1.0
        } else {
            -(std::f64::consts::PI * (j as f64 - 0.5) / n as f64).cos()
        };
        let above = -(std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
        nodes[j] = interior_root(n, guess, below, above)?;
        nodes[n - j] = -nodes[j];
    }

    let mut legendre_at_nodes = Vec::with_capacity(n + 1);
    for &x in &nodes {
        legendre_at_nodes.push(legendre_pair(n, x)?.0);
    }
    Ok(LobattoSet {
        order: n,
        nodes,
        legendre_at_nodes,
    })
}

fn interior_root(order: usize, guess: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    // Once steps shrink below this, the sign of the cancellation-noisy
    // P'_N can no longer be trusted to maintain the bracket; the endgame
    // is pure Newton, which converges to the representable root.
    const BRACKET_PHASE_STEP: f64 = 1e-8;

    let nf = order as f64;
    let sign_lo = legendre_pair(order, lo)?.1.signum();
    let bracketed = sign_lo != legendre_pair(order, hi)?.1.signum();
    let mut x = guess;
    let mut last_step = f64::INFINITY;
    for _ in 0..NODE_MAX_ITER {
        let (p, dp) = legendre_pair(order, x)?;
        if dp == 0.0 {
            return Ok(x);
        }
        let coarse = last_step.abs() >= BRACKET_PHASE_STEP;
        if bracketed && coarse {
            if dp.signum() == sign_lo {
                lo = x;
            } else {
                hi = x;
            }
        }
        // Newton on P'_N; P''_N from the Legendre ODE
        // (1 - x^2) P''_N = 2x P'_N - N(N+1) P_N.
        let d2p = (2.0 * x * dp - nf * (nf + 1.0) * p) / ((1.0 - x) * (1.0 + x));
        let mut next = x - dp / d2p;
        if bracketed && coarse && !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = next - x;
        x = next;
        if step.abs() < NODE_STEP_TOL {
            return Ok(x);
        }
        last_step = step;
    }
    Err(SolverError::NodeConvergence {
        order,
        index: 0,
        max_iter: NODE_MAX_ITER,
    })
}
