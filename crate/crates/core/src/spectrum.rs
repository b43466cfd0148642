//! Bound-state extraction: solve, label, normalize and grid-converge.
//!
//! A single collocation solve yields raw eigenvalues; physical answers are
//! only quoted after the "stable grid" procedure: the same state is solved
//! at (N, r_max), (N+40, r_max) and (N+40, 1.5 r_max), and accepted when
//! all three agree to the target number of significant digits (or to an
//! absolute spread of 1e-12, whichever is looser for near-zero levels).
//! Disagreement escalates the grid: box-limited states (visible tail
//! amplitude at the domain edge) get a larger r_max from the ladder
//! {base, 1100, 2400, 4800}; short-scale structure (strong screening)
//! gets a higher order, up to N = 440.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::eigensolver::{eig_symmetric, EigenSolution};
use crate::error::{Result, SolverError};
use crate::hamiltonian::assemble_with;
use crate::mapping::{build_grid, RadialGrid};
use crate::matrix::SquareMatrix;
use crate::potentials::Potential;

/// Step between successive collocation orders in the stability ladder.
const ORDER_STEP: usize = 40;

/// Largest collocation order the escalation will try.
const MAX_ORDER: usize = 440;

/// Domain-size rungs (a.u.) tried after the base r_max.
const R_MAX_RUNGS: [f64; 3] = [1100.0, 2400.0, 4800.0];

/// Absolute three-way spread accepted as "stable" for near-zero levels.
const ABS_STABILITY: f64 = 1e-12;

/// Wavefunction amplitude at the outer edge (relative to the peak) above
/// which a state counts as box-limited and r_max is escalated.
const TAIL_TOL: f64 = 1e-6;

/// Fraction of the domain treated as "the outer edge" for the tail test.
const TAIL_WINDOW: f64 = 0.85;

/// Minimum three-way agreement for a result to be reported at all.
const MIN_REPORT_DIGITS: u32 = 8;

/// Energy match tolerance of the pseudo-continuum re-check: genuine states
/// shift far less than this under a 1.5x domain change, box artifacts far
/// more.
fn recheck_tolerance(energy: f64) -> f64 {
    (1e-5 * energy.abs()).max(1e-10)
}

/// Grid and reporting parameters for one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Collocation polynomial order N (the grid has N+1 nodes).
    pub order: usize,
    /// Map steepness parameter.
    pub alpha: f64,
    /// Domain truncation radius (a.u.).
    pub r_max: f64,
    /// Eigenvalues above this (negative) threshold are not bound candidates.
    pub bound_threshold: f64,
    /// Significant-digit agreement demanded by [`converge_state`].
    pub stability_target_digits: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            order: 200,
            alpha: 25.0,
            r_max: 300.0,
            bound_threshold: -1e-12,
            stability_target_digits: 11,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.order < 10 || !(self.r_max > 0.0) || !(self.alpha > 0.0) {
            return Err(SolverError::InvalidArgument(format!(
                "bad solver config: order {}, alpha {}, r_max {}",
                self.order, self.alpha, self.r_max
            )));
        }
        if !(self.bound_threshold < 0.0) {
            return Err(SolverError::InvalidArgument(
                "bound_threshold must be negative".into(),
            ));
        }
        Ok(())
    }
}

/// Spectroscopic state label; letters s p d f g h i k l m cover l = 0..9
/// (j is skipped by convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateLabel {
    pub n: u32,
    pub l: u32,
}

const SPECTROSCOPIC: [char; 10] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k', 'l', 'm'];

impl StateLabel {
    pub fn new(n: u32, l: u32) -> Result<Self> {
        if n == 0 || l >= n {
            return Err(SolverError::InvalidArgument(format!(
                "state label needs n >= l + 1, got n = {n}, l = {l}"
            )));
        }
        if l as usize >= SPECTROSCOPIC.len() {
            return Err(SolverError::InvalidArgument(format!(
                "no spectroscopic letter for l = {l}"
            )));
        }
        Ok(Self { n, l })
    }

    pub fn letter(&self) -> char {
        SPECTROSCOPIC[self.l as usize]
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.n, self.letter())
    }
}

impl FromStr for StateLabel {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s
            .char_indices()
            .find(|(_, c)| c.is_ascii_alphabetic())
            .map(|(i, _)| i)
            .ok_or_else(|| SolverError::Parse(format!("no angular letter in `{s}`")))?;
        let (digits, letter) = s.split_at(split);
        let n: u32 = digits
            .parse()
            .map_err(|_| SolverError::Parse(format!("bad principal quantum number in `{s}`")))?;
        if letter.chars().count() != 1 {
            return Err(SolverError::Parse(format!("bad state label `{s}`")));
        }
        let c = letter.chars().next().unwrap();
        let l = SPECTROSCOPIC
            .iter()
            .position(|&x| x == c)
            .ok_or_else(|| SolverError::Parse(format!("unknown spectroscopic letter `{c}`")))?;
        StateLabel::new(n, l as u32)
    }
}

/// One labeled bound state with its normalized radial wavefunction.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub n: u32,
    pub l: u32,
    /// Energy in a.u.; negative.
    pub energy: f64,
    /// Node radii including both endpoints.
    pub radii: Vec<f64>,
    /// Normalized R_nl at each node; zero at the endpoints.
    pub radial: Vec<f64>,
    /// Significant digits that survived grid escalation (0 for a raw,
    /// single-grid solve).
    pub stable_digits: u32,
    pub config_used: SolverConfig,
}

impl BoundState {
    /// Number of interior sign changes of R; equals n - l - 1 for a clean
    /// bound state.
    pub fn node_count(&self) -> usize {
        count_sign_changes(&self.radial)
    }

    /// Energy magnitude rendered with the truncation reporting convention.
    pub fn energy_string(&self) -> String {
        let digits = self.stable_digits.max(MIN_REPORT_DIGITS);
        format!("-{}", format_truncated(-self.energy, digits))
    }
}

fn count_sign_changes(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    // Samples this far below the peak are tail noise, not node structure.
    let floor = 1e-9 * peak;
    let mut changes = 0;
    let mut last_sign = 0.0;
    for &v in &samples[1..samples.len().saturating_sub(1)] {
        if v.abs() <= floor {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            changes += 1;
        }
        last_sign = s;
    }
    changes
}

/// Truncate (never round) a non-negative value to `digits` significant
/// figures and print it in fixed-point form.
pub fn format_truncated(magnitude: f64, digits: u32) -> String {
    assert!(magnitude >= 0.0, "format_truncated takes a magnitude");
    let digits = digits.clamp(1, 15);
    if magnitude < 1e-30 {
        return "0".to_string();
    }
    let exp10 = magnitude.log10().floor() as i32;
    let decimals = (digits as i32 - 1 - exp10).max(0);
    let scale = 10f64.powi(decimals);
    let truncated = (magnitude * scale).floor() / scale;
    format!("{:.*}", decimals as usize, truncated)
}

// ---------------------------------------------------------------------------
// solve cache
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct GridKey {
    order: usize,
    alpha: u64,
    r_max: u64,
}

impl GridKey {
    fn new(order: usize, alpha: f64, r_max: f64) -> Self {
        Self {
            order,
            alpha: alpha.to_bits(),
            r_max: r_max.to_bits(),
        }
    }
}

struct GridData {
    grid: Arc<RadialGrid>,
    second_derivative: Arc<SquareMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct SolveKey {
    grid: GridKey,
    potential: (u8, [u64; 4]),
    l: u32,
}

fn potential_bits(p: &Potential) -> (u8, [u64; 4]) {
    match *p {
        Potential::Ecsc {
            a,
            delta1,
            delta2,
            g,
        } => (
            0,
            [a.to_bits(), delta1.to_bits(), delta2.to_bits(), g.to_bits()],
        ),
        Potential::Gesc { a, b } => (1, [a.to_bits(), b.to_bits(), 0, 0]),
        Potential::Yukawa { a, delta } => (2, [a.to_bits(), delta.to_bits(), 0, 0]),
        Potential::Coulomb { z } => (3, [z.to_bits(), 0, 0, 0]),
    }
}

/// Output of one (grid, potential, l) eigensolve.
pub(crate) struct SolveOutput {
    pub(crate) grid: Arc<RadialGrid>,
    pub(crate) eigen: EigenSolution,
}

const GRID_CACHE_CAP: usize = 24;
const SOLVE_CACHE_CAP: usize = 16;

struct BoundedCache<K, V> {
    order: Vec<K>,
    map: HashMap<K, Arc<V>>,
    cap: usize,
}

impl<K: std::hash::Hash + Eq + Clone, V> BoundedCache<K, V> {
    fn new(cap: usize) -> Self {
        Self {
            order: Vec::new(),
            map: HashMap::new(),
            cap,
        }
    }

    fn get(&self, key: &K) -> Option<Arc<V>> {
        self.map.get(key).cloned()
    }

    fn insert(&mut self, key: K, value: Arc<V>) {
        if self.map.contains_key(&key) {
            return;
        }
        if self.order.len() >= self.cap {
            let evict = self.order.remove(0);
            self.map.remove(&evict);
        }
        self.order.push(key.clone());
        self.map.insert(key, value);
    }
}

fn grid_cache() -> &'static Mutex<BoundedCache<GridKey, GridData>> {
    static CACHE: OnceLock<Mutex<BoundedCache<GridKey, GridData>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BoundedCache::new(GRID_CACHE_CAP)))
}

fn solve_cache() -> &'static Mutex<BoundedCache<SolveKey, SolveOutput>> {
    static CACHE: OnceLock<Mutex<BoundedCache<SolveKey, SolveOutput>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BoundedCache::new(SOLVE_CACHE_CAP)))
}

fn grid_data(order: usize, alpha: f64, r_max: f64) -> Result<Arc<GridData>> {
    let key = GridKey::new(order, alpha, r_max);
    if let Some(hit) = grid_cache().lock().unwrap().get(&key) {
        return Ok(hit);
    }
    let grid = Arc::new(build_grid(order, alpha, r_max)?);
    let second_derivative = Arc::new(crate::hamiltonian::second_derivative_matrix(&grid));
    let data = Arc::new(GridData {
        grid,
        second_derivative,
    });
    grid_cache().lock().unwrap().insert(key, Arc::clone(&data));
    Ok(data)
}

pub(crate) fn solve_raw(
    order: usize,
    alpha: f64,
    r_max: f64,
    potential: Potential,
    l: u32,
) -> Result<Arc<SolveOutput>> {
    let key = SolveKey {
        grid: GridKey::new(order, alpha, r_max),
        potential: potential_bits(&potential),
        l,
    };
    if let Some(hit) = solve_cache().lock().unwrap().get(&key) {
        return Ok(hit);
    }
    let data = grid_data(order, alpha, r_max)?;
    let h = assemble_with(&data.grid, &data.second_derivative, potential, l)?;
    let eigen = eig_symmetric(h.entries())?;
    let output = Arc::new(SolveOutput {
        grid: Arc::clone(&data.grid),
        eigen,
    });
    solve_cache()
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&output));
    Ok(output)
}

// ---------------------------------------------------------------------------
// public pipeline
// ---------------------------------------------------------------------------

/// Solve one angular-momentum channel and return up to `max_states` bound
/// states, labeled n = l + 1 + rank in ascending energy.
///
/// An empty result means no bound level survived the threshold; under
/// strong screening this is the physical answer, not an error. Energies
/// come from a single grid here, so `stable_digits` is 0; use
/// [`converge_state`] for digit-safe values.
pub fn solve_states(
    config: &SolverConfig,
    potential: Potential,
    l: u32,
    max_states: usize,
) -> Result<Vec<BoundState>> {
    config.validate()?;
    if max_states == 0 {
        return Err(SolverError::InvalidArgument("max_states must be >= 1".into()));
    }
    let out = solve_raw(config.order, config.alpha, config.r_max, potential, l)?;
    let count = bound_count(&out.eigen, config.bound_threshold).min(max_states);
    let mut states = Vec::with_capacity(count);
    for k in 0..count {
        states.push(make_state(&out, k, l, 0, *config)?);
    }
    Ok(states)
}

fn bound_count(eigen: &EigenSolution, threshold: f64) -> usize {
    eigen.values().iter().take_while(|&&v| v < threshold).count()
}

fn bound_energy(out: &SolveOutput, threshold: f64, k: usize) -> Option<f64> {
    let count = bound_count(&out.eigen, threshold);
    (k < count).then(|| out.eigen.values()[k])
}

fn make_state(
    out: &SolveOutput,
    k: usize,
    l: u32,
    stable_digits: u32,
    base: SolverConfig,
) -> Result<BoundState> {
    let radial = reconstruct_wavefunction(&out.eigen, k, &out.grid);
    // Record the grid actually used (escalation may have moved it off base).
    let config_used = SolverConfig {
        order: out.grid.order(),
        alpha: out.grid.map().alpha(),
        r_max: out.grid.map().r_max(),
        ..base
    };
    Ok(BoundState {
        n: l + 1 + k as u32,
        l,
        energy: out.eigen.values()[k],
        radii: out.grid.r().to_vec(),
        radial,
        stable_digits,
        config_used,
    })
}

/// Rebuild the radial wavefunction R(r_j) from eigenvector k.
///
/// The collocation unknowns satisfy chi_i = R(r_i) sqrt(r'_i) / P_N(x_i),
/// inverted here; endpoints carry the Dirichlet zeros. Normalization uses
/// the Gauss-Lobatto weights 2 / (N(N+1) P_N(x_j)^2) with the map Jacobian,
/// and the overall sign is fixed so R > 0 at small r.
pub fn reconstruct_wavefunction(
    solution: &EigenSolution,
    k: usize,
    grid: &RadialGrid,
) -> Vec<f64> {
    let n = grid.order();
    let chi = solution.vector(k);
    let p_n = grid.lobatto().legendre_at_nodes();
    let rp = grid.r_prime();
    let mut radial = vec![0.0; n + 1];
    for j in 1..n {
        radial[j] = chi[j - 1] * p_n[j] / rp[j].sqrt();
    }
    let mut norm_sq = 0.0;
    for j in 0..=n {
        norm_sq += grid.lobatto().weight(j) * rp[j] * radial[j] * radial[j];
    }
    let scale = 1.0 / norm_sq.sqrt();
    for v in radial.iter_mut() {
        *v *= scale;
    }
    let peak = radial.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if let Some(&first) = radial.iter().find(|v| v.abs() > 1e-9 * peak) {
        if first < 0.0 {
            for v in radial.iter_mut() {
                *v = -*v;
            }
        }
    }
    radial
}

/// Relative wavefunction amplitude in the outer edge of the domain; large
/// values mean the box is squeezing the state.
fn tail_amplitude(out: &SolveOutput, k: usize) -> f64 {
    let radial = reconstruct_wavefunction(&out.eigen, k, &out.grid);
    let r_max = out.grid.map().r_max();
    let peak = radial.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let mut tail = 0.0f64;
    for (j, &r) in out.grid.r().iter().enumerate() {
        if r > TAIL_WINDOW * r_max {
            tail = tail.max(radial[j].abs());
        }
    }
    tail / peak
}

/// Significant-digit agreement across grid variants of one energy.
fn agreed_digits(values: &[f64]) -> u32 {
    let mut spread = 0.0f64;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            spread = spread.max((values[i] - values[j]).abs());
        }
    }
    let scale = values[0].abs();
    if spread == 0.0 || scale == 0.0 {
        return 15;
    }
    let digits = -(spread / scale).log10();
    digits.clamp(0.0, 15.0).floor() as u32
}

fn spread_of(values: &[f64]) -> f64 {
    let mut spread = 0.0f64;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            spread = spread.max((values[i] - values[j]).abs());
        }
    }
    spread
}

/// Solve state (n, l) and escalate the grid until its energy is stable.
///
/// Acceptance at each rung compares (N, r_max), (N+40, r_max) and
/// (N+40, 1.5 r_max). The reported energy is the base-order solve of the
/// accepted rung; `stable_digits` records the actual agreement. Errors
/// with [`SolverError::NotConverged`] when even the largest grids cannot
/// agree to 8 significant digits, the signature of an unbound or
/// critically screened state.
pub fn converge_state(
    potential: Potential,
    n: u32,
    l: u32,
    base: &SolverConfig,
) -> Result<BoundState> {
    base.validate()?;
    if n == 0 || l >= n {
        return Err(SolverError::InvalidArgument(format!(
            "need n > l, got n = {n}, l = {l}"
        )));
    }
    let k = (n - l - 1) as usize;
    let r_ladder: Vec<f64> = std::iter::once(base.r_max)
        .chain(R_MAX_RUNGS.iter().copied().filter(|&r| r > base.r_max))
        .collect();
    let order_ladder: Vec<usize> = (0..)
        .map(|i| base.order + i * ORDER_STEP)
        .take_while(|&o| o <= MAX_ORDER)
        .collect();

    let mut ri = 0usize;
    let mut oi = 0usize;
    let mut best: Option<(u32, Arc<SolveOutput>, f64)> = None;

    loop {
        let order = order_ladder[oi];
        let r_max = r_ladder[ri];
        let out0 = solve_raw(order, base.alpha, r_max, potential, l)?;
        let e0 = bound_energy(&out0, base.bound_threshold, k);

        let Some(e0) = e0 else {
            // Rank missing: the state needs more room before it can even
            // appear; order refinement will not conjure it.
            if ri + 1 < r_ladder.len() {
                ri += 1;
                continue;
            }
            break;
        };

        let out1 = solve_raw(order + ORDER_STEP, base.alpha, r_max, potential, l)?;
        let out2 = solve_raw(order + ORDER_STEP, base.alpha, 1.5 * r_max, potential, l)?;
        let e1 = bound_energy(&out1, base.bound_threshold, k);
        let e2 = bound_energy(&out2, base.bound_threshold, k);

        let agreement = match (e1, e2) {
            (Some(e1), Some(e2)) => {
                let trio = [e0, e1, e2];
                Some((agreed_digits(&trio), spread_of(&trio)))
            }
            _ => None,
        };

        if let Some((digits, spread)) = agreement {
            if best.as_ref().map_or(true, |(b, _, _)| digits > *b) {
                best = Some((digits, Arc::clone(&out0), e0));
            }
            if digits >= base.stability_target_digits || spread <= ABS_STABILITY {
                let stable = digits.clamp(1, 12);
                return make_state(&out0, k, l, stable, *base);
            }
        }

        // Escalate: a visible tail at the domain edge means the box is the
        // problem; otherwise refine the order.
        let box_limited = tail_amplitude(&out0, k) > TAIL_TOL;
        if box_limited {
            if ri + 1 < r_ladder.len() {
                ri += 1;
            } else {
                break;
            }
        } else if oi + 1 < order_ladder.len() {
            oi += 1;
        } else if ri + 1 < r_ladder.len() {
            ri += 1;
        } else {
            break;
        }
    }

    match best {
        Some((digits, out, _)) if digits >= MIN_REPORT_DIGITS => {
            make_state(&out, k, l, digits.clamp(1, 12), *base)
        }
        Some((digits, _, _)) => Err(SolverError::NotConverged {
            n,
            l,
            best_digits: digits,
            required_digits: MIN_REPORT_DIGITS,
        }),
        None => Err(SolverError::NotConverged {
            n,
            l,
            best_digits: 0,
            required_digits: MIN_REPORT_DIGITS,
        }),
    }
}

/// Count eigenvalues below the bound threshold that survive the
/// pseudo-continuum re-check at 1.5 r_max.
///
/// Domain truncation manufactures shallow levels whose energies track the
/// box size; genuine bound states stay put when the box grows.
pub fn count_bound_states(potential: Potential, l: u32, config: &SolverConfig) -> Result<usize> {
    config.validate()?;
    let base = solve_raw(config.order, config.alpha, config.r_max, potential, l)?;
    let wide = solve_raw(
        config.order,
        config.alpha,
        1.5 * config.r_max,
        potential,
        l,
    )?;
    let n_base = bound_count(&base.eigen, config.bound_threshold);
    let n_wide = bound_count(&wide.eigen, config.bound_threshold);
    let wide_values = &wide.eigen.values()[..n_wide];
    let mut count = 0;
    for &e in &base.eigen.values()[..n_base] {
        let tol = recheck_tolerance(e);
        if wide_values.iter().any(|&w| (w - e).abs() <= tol) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_config() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn hydrogen_spectrum_on_default_grid() {
        let states = solve_states(&default_config(), Potential::coulomb(1.0), 0, 8).unwrap();
        assert_eq!(states.len(), 8);
        for (k, state) in states.iter().enumerate() {
            let n = (k + 1) as f64;
            let expect = -1.0 / (2.0 * n * n);
            assert!(
                (state.energy - expect).abs() < 1e-10,
                "n = {n}: {} vs {expect}",
                state.energy
            );
            assert_eq!(state.n, k as u32 + 1);
            assert_eq!(state.node_count(), k, "node count of n = {n}");
        }
    }

    #[test]
    fn hydrogen_1s_wavefunction_matches_analytic() {
        let states = solve_states(&default_config(), Potential::coulomb(1.0), 0, 1).unwrap();
        let state = &states[0];
        // R_10(r) = 2 r e^{-r} in this reduced (u = r R) convention.
        let mut checked = 0;
        for (j, &r) in state.radii.iter().enumerate() {
            if r <= 0.0 || r > 12.0 || checked >= 20 {
                continue;
            }
            let analytic = 2.0 * r * (-r).exp();
            let rel = (state.radial[j] - analytic).abs() / analytic;
            assert!(rel < 1e-7, "R(r = {r}): rel err {rel}");
            checked += 1;
        }
        assert!(checked >= 20);
    }

    #[test]
    fn coulomb_3s_has_two_nodes() {
        let states = solve_states(&default_config(), Potential::coulomb(1.0), 0, 3).unwrap();
        assert_eq!(states[2].node_count(), 2);
    }

    #[test]
    fn wavefunction_normalized_against_independent_quadrature() {
        // Resample through the cardinal basis onto a fine uniform x grid and
        // integrate R^2 dr with composite Simpson; this is independent of
        // the Gauss-Lobatto weights used for the production normalization.
        let states = solve_states(&default_config(), Potential::ecsc(0.02), 1, 1).unwrap();
        let state = &states[0];
        let grid = build_grid(200, 25.0, 300.0).unwrap();
        let lob = grid.lobatto();
        let n = grid.order();
        // f(x_j) = R_j * sqrt(r'_j): smooth collocation polynomial samples
        let f: Vec<f64> = (0..=n)
            .map(|j| state.radial[j] * grid.r_prime()[j].sqrt())
            .collect();
        let panels = 40_000usize;
        let h = 2.0 / panels as f64;
        let mut integral = 0.0;
        for p in 0..=panels {
            let x = (-1.0 + p as f64 * h).clamp(-1.0, 1.0);
            let mut val = 0.0;
            for j in 0..=n {
                let g = lob.cardinal(j, x).unwrap();
                if g != 0.0 {
                    val += f[j] * g;
                }
            }
            let w = if p == 0 || p == panels {
                1.0
            } else if p % 2 == 1 {
                4.0
            } else {
                2.0
            };
            integral += w * val * val;
        }
        integral *= h / 3.0;
        assert!(
            (integral - 1.0).abs() < 1e-8,
            "independent normalization integral {integral}"
        );
    }

    #[test]
    fn ecsc_table_one_spot_checks() {
        let states = solve_states(&default_config(), Potential::ecsc(0.06), 0, 2).unwrap();
        assert!(
            (states[0].energy + 0.44020051029).abs() < 1e-10,
            "1s at delta = 0.06: {}",
            states[0].energy
        );
        assert!(
            (states[1].energy + 0.06742110520).abs() < 1e-10,
            "2s at delta = 0.06: {}",
            states[1].energy
        );
    }

    #[test]
    fn gesc_table_four_spot_check() {
        let states = solve_states(&default_config(), Potential::gesc(0.02), 0, 3).unwrap();
        assert!(
            (states[2].energy + 0.20245702303).abs() < 1e-10,
            "3s at b = 0.02: {}",
            states[2].energy
        );
    }

    #[test]
    fn converge_state_hydrogen_is_stable_at_base() {
        let state = converge_state(Potential::coulomb(1.0), 1, 0, &default_config()).unwrap();
        assert!((state.energy + 0.5).abs() < 1e-11);
        assert!(state.stable_digits >= 11, "digits {}", state.stable_digits);
        assert_eq!(state.config_used.order, 200);
    }

    #[test]
    fn converge_state_escalates_r_max_for_high_states() {
        // 17s under weak screening does not fit in the 300 a.u. box.
        let state = converge_state(Potential::ecsc(0.0005), 17, 0, &default_config()).unwrap();
        assert!(
            (state.energy + 0.00123778635).abs() < 2e-11,
            "17s: {}",
            state.energy
        );
        assert_eq!(state.node_count(), 16);
    }

    #[test]
    fn converge_state_escalates_order_for_strong_screening() {
        // GESC at b = 20 has potential structure on the 1/(2b) scale, far
        // below the base grid's inner resolution.
        let state = converge_state(Potential::gesc(20.0), 1, 0, &default_config()).unwrap();
        assert!(
            (state.energy + 0.50467744871).abs() < 1e-10,
            "1s at b = 20: {}",
            state.energy
        );
    }

    #[test]
    fn converge_state_rejects_unbound_state() {
        // ECSC 2s unbinds near delta = 0.16656; at 0.5 it is long gone.
        let err = converge_state(Potential::ecsc(0.5), 2, 0, &default_config()).unwrap_err();
        assert!(
            matches!(err, SolverError::NotConverged { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn count_bound_states_strong_screening() {
        let cfg = default_config();
        assert_eq!(
            count_bound_states(Potential::ecsc(0.7), 0, &cfg).unwrap(),
            1
        );
        assert_eq!(
            count_bound_states(Potential::ecsc(0.2), 0, &cfg).unwrap(),
            1
        );
    }

    #[test]
    fn count_bound_states_coulomb_saturates() {
        let cfg = default_config();
        let count = count_bound_states(Potential::coulomb(1.0), 0, &cfg).unwrap();
        assert!(count >= 8, "resolved {count} hydrogen s states");
    }

    #[test]
    fn pseudo_continuum_states_shift_with_the_box() {
        // Weakly screened ECSC in a small box: the upper "bound" levels are
        // box artifacts. Retained states shift < 1e-10 between r_max = 300
        // and 450; rejected ones shift visibly.
        let cfg = default_config();
        let pot = Potential::ecsc(0.0005);
        let base = solve_raw(cfg.order, cfg.alpha, cfg.r_max, pot, 0).unwrap();
        let wide = solve_raw(cfg.order, cfg.alpha, 1.5 * cfg.r_max, pot, 0).unwrap();
        let nb = bound_count(&base.eigen, cfg.bound_threshold);
        let nw = bound_count(&wide.eigen, cfg.bound_threshold);
        let wide_vals = &wide.eigen.values()[..nw];
        let mut firmly_retained = 0;
        let mut grossly_shifted = 0;
        for &e in &base.eigen.values()[..nb] {
            let nearest = wide_vals
                .iter()
                .map(|&w| (w - e).abs())
                .fold(f64::INFINITY, f64::min);
            if nearest <= recheck_tolerance(e) {
                // Counted states must at least sit within the re-check band;
                // genuinely converged ones barely move at all.
                if nearest < 1e-10 {
                    firmly_retained += 1;
                }
            } else if nearest > 1e-6 {
                grossly_shifted += 1;
            }
        }
        // The clean ends of the spectrum behave bimodally: converged levels
        // shift below 1e-10, box artifacts by more than 1e-6. (States right
        // at the box-convergence edge can fall between; they are the reason
        // counting re-checks stability instead of trusting the sign alone.)
        assert!(firmly_retained >= 8, "firmly retained {firmly_retained}");
        assert!(grossly_shifted >= 1, "grossly shifted {grossly_shifted}");
    }

    #[test]
    fn energies_increase_with_screening() {
        let cfg = default_config();
        let mut last = f64::NEG_INFINITY;
        for step in 0..10 {
            let delta = 0.01 + 0.005 * step as f64;
            let state = converge_state(Potential::ecsc(delta), 1, 0, &cfg).unwrap();
            assert!(
                state.energy > last,
                "1s energy not increasing at delta = {delta}"
            );
            last = state.energy;
        }
    }

    #[test]
    fn screened_levels_collapse_to_coulomb_as_delta_vanishes() {
        // At delta -> 0 all l within one n collapse to -1/(2n^2); at finite
        // delta the l-splitting grows with delta.
        let cfg = default_config();
        let n = 3;
        let tiny: Vec<f64> = (0..n)
            .map(|l| {
                converge_state(Potential::ecsc(1e-9), n as u32, l as u32, &cfg)
                    .unwrap()
                    .energy
            })
            .collect();
        for &e in &tiny {
            assert!((e + 1.0 / (2.0 * 9.0)).abs() < 1e-8, "{e}");
        }
        let split = |delta: f64| {
            let es: Vec<f64> = (0..n)
                .map(|l| {
                    converge_state(Potential::ecsc(delta), n as u32, l as u32, &cfg)
                        .unwrap()
                        .energy
                })
                .collect();
            (es[0] - es[2]).abs()
        };
        assert!(split(0.04) > split(0.02));
    }

    #[test]
    fn state_labels_round_trip() {
        for (text, n, l) in [("1s", 1, 0), ("2p", 2, 1), ("8k", 8, 7), ("10m", 10, 9)] {
            let label: StateLabel = text.parse().unwrap();
            assert_eq!((label.n, label.l), (n, l));
            assert_eq!(label.to_string(), text);
        }
        assert!("3x".parse::<StateLabel>().is_err());
        assert!("s".parse::<StateLabel>().is_err());
        assert!("2d".parse::<StateLabel>().is_err(), "l >= n");
    }

    #[test]
    fn truncation_formatting() {
        assert_eq!(format_truncated(0.44020051029, 11), "0.44020051029");
        assert_eq!(format_truncated(0.0012377863545, 9), "0.00123778635");
        // truncated, never rounded
        assert_eq!(format_truncated(0.999_999_9, 3), "0.999");
        assert_eq!(format_truncated(1.99900000049, 12), "1.99900000049");
        assert_eq!(format_truncated(0.0, 11), "0");
    }
}
