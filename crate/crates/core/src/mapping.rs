//! Algebraic map from the collocation interval [-1, 1] to the radial
//! domain [0, r_max]:
//!
//! ```text
//! r(x) = L (1 + x) / (1 - x + alpha),      alpha = 2L / r_max
//! ```
//!
//! The map stacks nodes densely near the origin and sparsely at large r,
//! which is what lets a couple hundred points resolve both the Coulomb
//! cusp and slowly decaying bound-state tails.

use crate::error::{Result, SolverError};
use crate::quadrature::{lobatto_nodes, LobattoSet};

/// Parameters of the nonlinear radial map.
///
/// The user-facing knobs are `alpha` and `r_max`; the length scale is
/// derived as L = alpha * r_max / 2 so that alpha = 2L / r_max holds by
/// construction and r(+1) = r_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    alpha: f64,
    r_max: f64,
    scale: f64,
}

impl MapParams {
    pub fn new(alpha: f64, r_max: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(r_max > 0.0) {
            return Err(SolverError::InvalidArgument(format!(
                "map parameters must be positive, got alpha = {alpha}, r_max = {r_max}"
            )));
        }
        Ok(Self {
            alpha,
            r_max,
            scale: alpha * r_max / 2.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Map length scale L.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// r(x) = L (1 + x) / (1 - x + alpha); monotone increasing on [-1, 1].
pub fn map_to_r(x: f64, p: &MapParams) -> f64 {
    p.scale * (1.0 + x) / (1.0 - x + p.alpha)
}

/// dr/dx = L (2 + alpha) / (1 - x + alpha)^2.
pub fn map_jacobian(x: f64, p: &MapParams) -> f64 {
    let den = 1.0 - x + p.alpha;
    p.scale * (2.0 + p.alpha) / (den * den)
}

/// Collocation grid in the radial variable: Lobatto nodes, mapped radii
/// and the Jacobian at each node. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    lobatto: LobattoSet,
    map: MapParams,
    r: Vec<f64>,
    r_prime: Vec<f64>,
}

impl RadialGrid {
    pub fn lobatto(&self) -> &LobattoSet {
        &self.lobatto
    }

    pub fn map(&self) -> &MapParams {
        &self.map
    }

    /// Radii r_j = r(x_j), with r_0 = 0 and r_N = r_max.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Jacobians r'_j = dr/dx at each node; strictly positive.
    pub fn r_prime(&self) -> &[f64] {
        &self.r_prime
    }

    /// Polynomial order N of the underlying Lobatto set.
    pub fn order(&self) -> usize {
        self.lobatto.order()
    }
}

/// Build the radial grid of order N for the given map parameters.
pub fn build_grid(order: usize, alpha: f64, r_max: f64) -> Result<RadialGrid> {
    if order < 10 {
        return Err(SolverError::InvalidArgument(format!(
            "radial grid needs order >= 10, got {order}"
        )));
    }
    let map = MapParams::new(alpha, r_max)?;
    let lobatto = lobatto_nodes(order)?;
    let r: Vec<f64> = lobatto.nodes().iter().map(|&x| map_to_r(x, &map)).collect();
    let r_prime: Vec<f64> = lobatto
        .nodes()
        .iter()
        .map(|&x| map_jacobian(x, &map))
        .collect();
    Ok(RadialGrid {
        lobatto,
        map,
        r,
        r_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn default_map() -> MapParams {
        MapParams::new(25.0, 300.0).unwrap()
    }

    #[test]
    fn endpoints_map_to_domain_ends() {
        let p = default_map();
        assert_eq!(map_to_r(-1.0, &p), 0.0);
        let r_top = map_to_r(1.0, &p);
        assert!((r_top - 300.0).abs() <= 1e-10 * 300.0);
    }

    #[test]
    fn midpoint_value_matches_closed_form() {
        // alpha = 25, r_max = 300 gives L = 3750; r(0) = 3750/26.
        let p = default_map();
        assert_eq!(map_to_r(0.0, &p), 3750.0 / 26.0);
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let p = default_map();
        let x = 0.3;
        let h = 1e-6;
        let fd = (map_to_r(x + h, &p) - map_to_r(x - h, &p)) / (2.0 * h);
        let exact = map_jacobian(x, &p);
        assert!(
            ((fd - exact) / exact).abs() < 1e-8,
            "fd {fd} vs exact {exact}"
        );
    }

    #[test]
    fn jacobian_positive_everywhere() {
        let p = default_map();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        assert!(map_jacobian(-1.0, &p) == p.scale() / (2.0 + p.alpha()));
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            assert!(map_jacobian(x, &p) > 0.0);
        }
    }

    #[test]
    fn grid_endpoints_and_monotonicity() {
        let grid = build_grid(200, 25.0, 300.0).unwrap();
        assert_eq!(grid.r().len(), 201);
        assert_eq!(grid.r()[0], 0.0);
        assert!((grid.r()[200] - 300.0).abs() <= 1e-10 * 300.0);
        for w in grid.r().windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(grid.r_prime().iter().all(|&rp| rp > 0.0));
    }

    #[test]
    fn grid_composition_is_bitwise() {
        let grid = build_grid(60, 25.0, 300.0).unwrap();
        for (j, &x) in grid.lobatto().nodes().iter().enumerate() {
            assert_eq!(grid.r()[j], map_to_r(x, grid.map()));
        }
    }

    #[test]
    fn grid_denser_near_origin() {
        // Node density per unit length is far higher near r = 0 than in the
        // outer half of the domain. (A plain count below r_max/4 versus
        // above it does not capture this: Lobatto nodes also cluster at the
        // x = +1 end, so the outer half always holds roughly half the nodes.)
        let grid = build_grid(10, 2.0, 10.0).unwrap();
        let inner = grid.r().iter().filter(|&&r| r < 2.5).count();
        let outer = grid.r().iter().filter(|&&r| r > 7.5).count();
        assert!(inner > outer, "inner quarter {inner} vs outer quarter {outer}");

        let grid = build_grid(200, 25.0, 300.0).unwrap();
        let small = grid.r().iter().filter(|&&r| r < 10.0).count();
        let uniform_share = (201.0_f64 * 10.0 / 300.0).ceil() as usize;
        assert!(
            small > 3 * uniform_share,
            "only {small} nodes below r = 10 (uniform grid would give {uniform_share})"
        );
        let mid_window = grid
            .r()
            .iter()
            .filter(|&&r| (140.0..160.0).contains(&r))
            .count();
        assert!(
            small > mid_window,
            "first 10 a.u. hold {small} nodes, 20 a.u. around midrange hold {mid_window}"
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MapParams::new(0.0, 300.0).is_err());
        assert!(MapParams::new(25.0, -1.0).is_err());
        assert!(build_grid(4, 25.0, 300.0).is_err());
    }
}
