//! Stationary points of η over the states supported on a fixed pattern.
//!
//! A point is a magnitude vector on the unit sphere together with one phase
//! per cell; the phase of the lowest cell is pinned to zero. η depends on the
//! phases only through the alternating sums around cycles of the pattern's
//! row/column incidence graph (see [`CycleBasis`]), because row and column
//! phase rotations are local unitaries.
//!
//! The search runs three local solvers from every seeded start: projected
//! gradient ascent, projected gradient descent, and a Levenberg-Marquardt
//! solve of `grad η = 0` that also converges to saddles. Ascent and descent
//! hand over to the same Levenberg-Marquardt polish once the gradient is
//! small. A run ends as an interior stationary point, a boundary escape (some
//! magnitude below [`BOUNDARY_EPS`]), a visit to the η = 0 region, or
//! unconverged.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI, TAU};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{schmidt_matrix, spectrum_entropy, DEFAULT_SCHMIDT_TOL, ZERO_ENTROPY};
use crate::state::{wrap_phase, BasisCell, CMatrix3, PureState, SupportPattern, C64};

/// Magnitudes below this end a run as a boundary escape.
pub const BOUNDARY_EPS: f64 = 1e-6;

/// Default projected-gradient tolerance for stationarity.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Minimum number of starts before a negative verdict is reported.
pub const MIN_STARTS_FOR_VERDICT: usize = 100;

const GRADIENT_DOMAIN_EPS: f64 = 1e-9;
const INITIAL_STEP: f64 = 0.5;
const MAX_HALVINGS: usize = 60;
const MAX_ASCENT_ITERS: usize = 20_000;
const ARMIJO: f64 = 1e-4;
const HANDOFF_GRAD: f64 = 1e-6;
const MAX_LM_ITERS: usize = 200;
const LM_STEP_TOL: f64 = 1e-7;
const JACOBIAN_H: f64 = 1e-7;
const SMALL_MAG: f64 = 1e-2;
const SHRINK: f64 = 0.1;

const ETA_KEY: f64 = 1e-7;
const SPECTRUM_KEY: f64 = 1e-7;
const CYCLE_KEY: f64 = 1e-6;

/// Magnitudes and phases for the cells of a pattern, in ascending cell order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamPoint {
    pub pattern: SupportPattern,
    pub magnitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl ParamPoint {
    /// Normalizes the magnitudes and shifts the phases so the first is zero.
    pub fn new(pattern: SupportPattern, magnitudes: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        let k = pattern.len();
        if magnitudes.len() != k || phases.len() != k {
            return Err(Error::InvalidParams(format!(
                "pattern has {k} cells but got {} magnitudes and {} phases",
                magnitudes.len(),
                phases.len()
            )));
        }
        if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidParams("magnitudes must be finite and nonnegative".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParams("phases must be finite".into()));
        }
        let norm = magnitudes.iter().map(|m| m * m).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        let p0 = phases[0];
        Ok(ParamPoint {
            pattern,
            magnitudes: magnitudes.iter().map(|m| m / norm).collect(),
            phases: phases.iter().map(|p| wrap_phase(p - p0)).collect(),
        })
    }

    /// Reads the amplitudes of `state` on the cells of `pattern`.
    pub fn from_state(state: &PureState, pattern: SupportPattern) -> Result<Self> {
        let cells = pattern.cells();
        let amps: Vec<C64> = cells.iter().map(|c| state.amplitude(*c)).collect();
        Self::new(pattern, amps.iter().map(|z| z.norm()).collect(), amps.iter().map(|z| z.arg()).collect())
    }

    pub fn min_magnitude(&self) -> f64 {
        self.magnitudes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn state_from_params(p: &ParamPoint) -> PureState {
    PureState::from_matrix(param_matrix(&p.pattern.cells(), &p.magnitudes, &p.phases))
        .expect("parameter points have unit norm")
}

fn param_matrix(cells: &[BasisCell], magnitudes: &[f64], phases: &[f64]) -> CMatrix3 {
    let mut m = CMatrix3::zeros();
    for ((cell, &a), &ph) in cells.iter().zip(magnitudes).zip(phases) {
        m[(cell.row.index(), cell.col.index())] = C64::from_polar(a, ph);
    }
    m
}

/// One fundamental cycle: indices into the pattern's cell list, each with the
/// sign it carries in the alternating phase sum.
pub type Cycle = Vec<(usize, i8)>;

/// Fundamental cycles of the bipartite graph whose vertices are the three
/// rows and three columns and whose edges are the pattern's cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cells: Vec<BasisCell>,
    pub cycles: Vec<Cycle>,
}

impl CycleBasis {
    pub fn of(pattern: SupportPattern) -> Self {
        let cells = pattern.cells();
        // vertices 0..3 rows, 3..6 columns
        let ends = |e: usize| (cells[e].row.index(), 3 + cells[e].col.index());
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 6];
        for e in 0..cells.len() {
            let (r, c) = ends(e);
            adj[r].push((c, e));
            adj[c].push((r, e));
        }
        let mut parent: [Option<(usize, usize)>; 6] = [None; 6];
        let mut depth = [0usize; 6];
        let mut seen = [false; 6];
        let mut tree = vec![false; cells.len()];
        for root in 0..6 {
            if seen[root] || adj[root].is_empty() {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, e) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((v, e));
                        depth[w] = depth[v] + 1;
                        tree[e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut cycles = Vec::new();
        for e in (0..cells.len()).filter(|&e| !tree[e]) {
            let (r, c) = ends(e);
            // climb from both ends to the common ancestor
            let (mut a, mut b) = (c, r);
            let (mut from_c, mut from_r) = (Vec::new(), Vec::new());
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, pe) = parent[a].expect("tree path");
                    from_c.push(pe);
                    a = p;
                } else {
                    let (p, pe) = parent[b].expect("tree path");
                    from_r.push(pe);
                    b = p;
                }
            }
            let walk = std::iter::once(e).chain(from_c).chain(from_r.into_iter().rev());
            cycles.push(walk.enumerate().map(|(i, edge)| (edge, if i % 2 == 0 { 1 } else { -1 })).collect());
        }
        CycleBasis { cells, cycles }
    }

    /// `k − rows − cols + components` for the touched rows and columns.
    pub fn expected_count(pattern: SupportPattern) -> usize {
        let cells = pattern.cells();
        let rows: std::collections::BTreeSet<_> = cells.iter().map(|c| c.row).collect();
        let cols: std::collections::BTreeSet<_> = cells.iter().map(|c| c.col).collect();
        // union-find over the six vertices
        let mut up: Vec<usize> = (0..6).collect();
        fn find(up: &mut [usize], mut x: usize) -> usize {
            while up[x] != x {
                up[x] = up[up[x]];
                x = up[x];
            }
            x
        }
        for c in &cells {
            let (a, b) = (find(&mut up, c.row.index()), find(&mut up, 3 + c.col.index()));
            up[a] = b;
        }
        let touched: Vec<usize> = rows.iter().map(|r| r.index()).chain(cols.iter().map(|c| 3 + c.index())).collect();
        let mut roots: Vec<usize> = touched.iter().map(|&v| find(&mut up, v)).collect();
        roots.sort_unstable();
        roots.dedup();
        cells.len() + roots.len() - rows.len() - cols.len()
    }

    pub fn evaluate(&self, phases: &[f64]) -> Vec<f64> {
        self.cycles.iter().map(|cyc| wrap_phase(cyc.iter().map(|&(e, s)| f64::from(s) * phases[e]).sum())).collect()
    }
}

/// Alternating phase sums around the fundamental cycles, each in `[0, 2π)`.
pub fn cycle_invariants(p: &ParamPoint) -> Vec<f64> {
    CycleBasis::of(p.pattern).evaluate(&p.phases)
}

/// Signed distance between two angles, in `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Riemannian gradient of η: magnitude part tangent to the unit sphere,
/// phase part with the pinned first phase set to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gradient {
    pub magnitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl Gradient {
    pub fn norm(&self) -> f64 {
        self.magnitudes.iter().chain(&self.phases).map(|g| g * g).sum::<f64>().sqrt()
    }
}

pub fn eta_gradient(p: &ParamPoint) -> Result<Gradient> {
    if let Some((index, &value)) = p.magnitudes.iter().enumerate().find(|(_, m)| **m <= GRADIENT_DOMAIN_EPS) {
        return Err(Error::NearBoundary { index, value });
    }
    let obj = Objective::new(p.pattern);
    let ev = obj.eval(&obj.pack(p), true);
    if ev.zero_measure {
        return Err(Error::ZeroMeasureRegion);
    }
    let k = obj.k();
    let mut phases = vec![0.0];
    phases.extend_from_slice(&ev.grad[k..]);
    Ok(Gradient { magnitudes: ev.grad[..k].to_vec(), phases })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    InteriorStationary,
    BoundaryEscape,
    ZeroMeasureRegion,
    Unconverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Ascent,
    Descent,
    Stationarity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub eta: f64,
    #[serde(flatten)]
    pub params: ParamPoint,
    /// Norm of the Riemannian gradient; `None` where it is undefined.
    pub grad_residual: Option<f64>,
    pub kind: ExtremalKind,
    pub cycle_invariants: Vec<f64>,
    /// Descending squared Schmidt coefficients.
    pub schmidt_sq: [f64; 3],
    /// Which solver produced this representative.
    pub mode: RunMode,
    /// Runs that ended on this point (after deduplication).
    pub runs: usize,
}

impl ExtremalResult {
    fn from_point(params: ParamPoint, kind: ExtremalKind, mode: RunMode) -> Self {
        let state = state_from_params(&params);
        let eta = crate::measure::eta(&state);
        let schmidt_sq = schmidt_matrix(state.coeff(), DEFAULT_SCHMIDT_TOL).sigma_sq();
        let grad_residual = eta_gradient(&params).ok().map(|g| g.norm());
        let cycle_invariants = cycle_invariants(&params);
        ExtremalResult { eta, params, grad_residual, kind, cycle_invariants, schmidt_sq, mode, runs: 1 }
    }

    fn dedup_key(&self) -> (ExtremalKind, Vec<i64>) {
        let q = |x: f64, step: f64| (x / step).round() as i64;
        let mut key = match self.kind {
            ExtremalKind::InteriorStationary => vec![q(self.eta, ETA_KEY)],
            _ => return (self.kind, Vec::new()),
        };
        key.extend(self.schmidt_sq.iter().map(|&s| q(s, SPECTRUM_KEY)));
        let full_turn = q(TAU, CYCLE_KEY);
        key.extend(self.cycle_invariants.iter().map(|&c| {
            let v = q(c, CYCLE_KEY);
            if v == full_turn {
                0
            } else {
                v
            }
        }));
        (self.kind, key)
    }
}

/// η and its gradient in packed coordinates
/// `[m_0 .. m_{k-1}, φ_1 .. φ_{k-1}]` (φ_0 pinned to zero).
struct Objective {
    cells: Vec<BasisCell>,
}

struct Eval {
    eta: f64,
    zero_measure: bool,
    grad: Vec<f64>,
}

impl Objective {
    fn new(pattern: SupportPattern) -> Self {
        Objective { cells: pattern.cells() }
    }

    fn k(&self) -> usize {
        self.cells.len()
    }

    fn dim(&self) -> usize {
        2 * self.k() - 1
    }

    fn pack(&self, p: &ParamPoint) -> Vec<f64> {
        let mut x = p.magnitudes.clone();
        x.extend_from_slice(&p.phases[1..]);
        x
    }

    fn split(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let k = self.k();
        let norm = x[..k].iter().map(|m| m * m).sum::<f64>().sqrt();
        let mags = x[..k].iter().map(|m| m / norm).collect();
        let mut phases = vec![0.0];
        phases.extend_from_slice(&x[k..]);
        (mags, phases)
    }

    /// Back onto the sphere with nonnegative magnitudes; a sign flip becomes
    /// a phase shift of π (on the first cell, a global sign).
    fn retract(&self, x: &mut [f64]) {
        let k = self.k();
        for i in 0..k {
            if x[i] < 0.0 {
                x[i] = -x[i];
                if i == 0 {
                    for ph in &mut x[k..] {
                        *ph += PI;
                    }
                } else {
                    x[k + i - 1] += PI;
                }
            }
        }
        let norm = x[..k].iter().map(|m| m * m).sum::<f64>().sqrt();
        for m in &mut x[..k] {
            *m /= norm;
        }
        for ph in &mut x[k..] {
            *ph = wrap_phase(*ph);
        }
    }

    fn to_params(&self, x: &[f64]) -> ParamPoint {
        let (mags, phases) = self.split(x);
        ParamPoint::new(SupportPattern::from_cells(self.cells.iter().copied()).unwrap(), mags, phases)
            .expect("packed coordinates are valid")
    }

    fn eval(&self, x: &[f64], with_grad: bool) -> Eval {
        let k = self.k();
        let (mags, phases) = self.split(x);
        let m = param_matrix(&self.cells, &mags, &phases);
        let sd = schmidt_matrix(&m, 0.0);
        let probs = sd.sigma_sq();
        let eta = spectrum_entropy(&probs, 3.0);
        let zero_measure = eta <= ZERO_ENTROPY;
        if !with_grad || zero_measure {
            return Eval { eta: if zero_measure { 0.0 } else { eta }, zero_measure, grad: Vec::new() };
        }
        // dη = Re Σ conj(G) dM with G = -(2/ln 3) U diag(σ ln σ²) V†; the
        // radial part of the full derivative is removed by the projection.
        let scale = -2.0 / 3f64.ln();
        let f: [f64; 3] = sd.sigma.map(|s| if s > 1e-150 { scale * s * 2.0 * s.ln() } else { 0.0 });
        let mut g = CMatrix3::zeros();
        for (j, fj) in f.iter().enumerate() {
            let u = sd.left_u.column(j);
            let v = sd.right_v.column(j);
            g += (u * v.adjoint()) * C64::from(*fj);
        }
        let mut grad = vec![0.0; self.dim()];
        for (i, cell) in self.cells.iter().enumerate() {
            let gi = g[(cell.row.index(), cell.col.index())].conj() * C64::from_polar(1.0, phases[i]);
            grad[i] = gi.re;
            if i > 0 {
                grad[k + i - 1] = -mags[i] * gi.im;
            }
        }
        let radial: f64 = grad[..k].iter().zip(&mags).map(|(g, m)| g * m).sum();
        for i in 0..k {
            grad[i] -= radial * mags[i];
        }
        Eval { eta, zero_measure, grad }
    }

    fn min_mag(&self, x: &[f64]) -> f64 {
        x[..self.k()].iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        let mut jac = DMatrix::zeros(n, n);
        let mut xp = x.to_vec();
        for j in 0..n {
            let orig = xp[j];
            xp[j] = orig + JACOBIAN_H;
            let gp = self.eval(&xp, true).grad;
            xp[j] = orig - JACOBIAN_H;
            let gm = self.eval(&xp, true).grad;
            xp[j] = orig;
            if gp.is_empty() || gm.is_empty() {
                continue;
            }
            for i in 0..n {
                jac[(i, j)] = (gp[i] - gm[i]) / (2.0 * JACOBIAN_H);
            }
        }
        jac
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|g| g * g).sum::<f64>().sqrt()
}

enum RunEnd {
    Stationary,
    Boundary,
    ZeroMeasure,
    Unconverged,
}

/// Backtracking gradient ascent (`sign = 1`) or descent (`sign = -1`).
fn climb(obj: &Objective, x: &mut Vec<f64>, sign: f64) -> Option<RunEnd> {
    for _ in 0..MAX_ASCENT_ITERS {
        if obj.min_mag(x) < BOUNDARY_EPS {
            return Some(RunEnd::Boundary);
        }
        let ev = obj.eval(x, true);
        if ev.zero_measure {
            return Some(RunEnd::ZeroMeasure);
        }
        let gn2: f64 = ev.grad.iter().map(|g| g * g).sum();
        if gn2.sqrt() < HANDOFF_GRAD {
            return None;
        }
        let mut step = INITIAL_STEP;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial: Vec<f64> = x.iter().zip(&ev.grad).map(|(xi, gi)| xi + sign * step * gi).collect();
            obj.retract(&mut trial);
            let et = obj.eval(&trial, false).eta;
            if sign * (et - ev.eta) >= ARMIJO * step * gn2 {
                *x = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    None
}

/// Levenberg-Marquardt on `grad η = 0`. Converged when the gradient is below
/// `tol` and the next step is negligible or no longer reduces the gradient.
fn solve_stationary(obj: &Objective, x: &mut Vec<f64>, tol: f64) -> RunEnd {
    let n = obj.dim();
    let mut lambda = 1e-3;
    let mut ev = obj.eval(x, true);
    for _ in 0..MAX_LM_ITERS {
        if obj.min_mag(x) < BOUNDARY_EPS {
            return RunEnd::Boundary;
        }
        if ev.zero_measure {
            return RunEnd::ZeroMeasure;
        }
        let gnorm = norm(&ev.grad);
        let jac = obj.jacobian(x);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let b = &jt * DVector::from_column_slice(&ev.grad);
        let diag_max = (0..n).map(|i| a[(i, i)]).fold(0.0, f64::max).max(1e-300);
        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = a.clone();
            for i in 0..n {
                damped[(i, i)] += lambda * diag_max;
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&b));
            let step = delta.norm();
            let mut trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(xi, di)| xi + di).collect();
            obj.retract(&mut trial);
            let et = obj.eval(&trial, true);
            let tnorm = if et.zero_measure { f64::INFINITY } else { norm(&et.grad) };
            if tnorm < gnorm {
                *x = trial;
                ev = et;
                lambda = (lambda / 5.0).max(1e-15);
                accepted = true;
                if tnorm < tol && step < LM_STEP_TOL {
                    if obj.min_mag(x) < BOUNDARY_EPS {
                        return RunEnd::Boundary;
                    }
                    return RunEnd::Stationary;
                }
                break;
            }
            if gnorm < tol {
                // at the noise floor: no step improves the gradient further
                return RunEnd::Stationary;
            }
            lambda *= 5.0;
        }
        if !accepted {
            return RunEnd::Unconverged;
        }
    }
    RunEnd::Unconverged
}

/// Near a degenerate critical set on the boundary η is flat to high order,
/// so points with tiny magnitudes can pass the gradient test. Such a point
/// is rejected when, after shrinking its small magnitudes and solving again,
/// they do not grow back.
fn flat_toward_boundary(obj: &Objective, x: &[f64], tol: f64) -> bool {
    let k = obj.k();
    let small: Vec<usize> = (0..k).filter(|&i| x[i] < SMALL_MAG).collect();
    if small.is_empty() {
        return false;
    }
    let mut shrunk = x.to_vec();
    for &i in &small {
        shrunk[i] *= SHRINK;
    }
    obj.retract(&mut shrunk);
    match solve_stationary(obj, &mut shrunk, tol) {
        RunEnd::Boundary | RunEnd::ZeroMeasure => true,
        RunEnd::Unconverged => false,
        RunEnd::Stationary => small.iter().all(|&i| shrunk[i] < 0.5 * x[i]),
    }
}

fn random_start(obj: &Objective, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let k = obj.k();
    let mut x: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    x.extend((1..k).map(|_| rng.random_range(0.0..TAU)));
    obj.retract(&mut x);
    x
}

fn run_once(obj: &Objective, start: &[f64], mode: RunMode, tol: f64) -> (Vec<f64>, ExtremalKind) {
    let mut x = start.to_vec();
    let end = match mode {
        RunMode::Ascent | RunMode::Descent => {
            let sign = if mode == RunMode::Ascent { 1.0 } else { -1.0 };
            climb(obj, &mut x, sign).unwrap_or_else(|| solve_stationary(obj, &mut x, tol))
        }
        RunMode::Stationarity => solve_stationary(obj, &mut x, tol),
    };
    let kind = match end {
        RunEnd::Stationary if flat_toward_boundary(obj, &x, tol) => ExtremalKind::BoundaryEscape,
        RunEnd::Stationary => ExtremalKind::InteriorStationary,
        RunEnd::Boundary => ExtremalKind::BoundaryEscape,
        RunEnd::ZeroMeasure => ExtremalKind::ZeroMeasureRegion,
        RunEnd::Unconverged => ExtremalKind::Unconverged,
    };
    (x, kind)
}

/// Multi-start search for stationary points of η on `pattern`.
///
/// Start `i` is drawn from stream `i` of a ChaCha generator seeded with
/// `seed`, so results do not depend on scheduling. Interior points are
/// deduplicated by η, the Schmidt spectrum and the cycle invariants; every
/// other outcome is collapsed into one entry per kind. The list is sorted by
/// η descending.
pub fn find_stationary(pattern: SupportPattern, starts: usize, seed: u64, tol: f64) -> Vec<ExtremalResult> {
    let obj = Objective::new(pattern);
    if pattern.len() == 1 {
        // a single cell is a product state: nothing to optimize
        let p = ParamPoint::new(pattern, vec![1.0], vec![0.0]).unwrap();
        let mut r = ExtremalResult::from_point(p, ExtremalKind::ZeroMeasureRegion, RunMode::Stationarity);
        r.runs = starts.max(1) * 3;
        return vec![r];
    }
    let outcomes: Vec<ExtremalResult> = (0..starts.max(1) as u64)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let start = random_start(&obj, &mut rng);
            [RunMode::Ascent, RunMode::Descent, RunMode::Stationarity]
                .into_iter()
                .map(move |mode| (start.clone(), mode))
        })
        .map(|(start, mode)| {
            let (x, mut kind) = run_once(&obj, &start, mode, tol);
            let params = obj.to_params(&x);
            let mut r = ExtremalResult::from_point(params, kind, mode);
            if kind == ExtremalKind::InteriorStationary && !r.grad_residual.is_some_and(|g| g < tol) {
                // re-evaluation from the public gradient disagrees
                kind = ExtremalKind::Unconverged;
                r.kind = kind;
            }
            r
        })
        .collect();

    let mut merged: BTreeMap<(ExtremalKind, Vec<i64>), ExtremalResult> = BTreeMap::new();
    let mut order = Vec::new();
    for r in outcomes {
        let key = r.dedup_key();
        match merged.get_mut(&key) {
            Some(existing) => existing.runs += 1,
            None => {
                order.push(key.clone());
                merged.insert(key, r);
            }
        }
    }
    let mut out: Vec<ExtremalResult> = order.into_iter().map(|k| merged.remove(&k).unwrap()).collect();
    out.sort_by(|a, b| {
        (a.kind != ExtremalKind::InteriorStationary)
            .cmp(&(b.kind != ExtremalKind::InteriorStationary))
            .then(b.eta.total_cmp(&a.eta))
            .then(a.kind.cmp(&b.kind))
            .then(a.dedup_key().1.cmp(&b.dedup_key().1))
    });
    out
}

/// Interior stationary points with η > 0 from a [`find_stationary`] list.
pub fn interior(results: &[ExtremalResult]) -> impl Iterator<Item = &ExtremalResult> {
    results.iter().filter(|r| r.kind == ExtremalKind::InteriorStationary && r.eta > 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InteriorVerdict {
    Found {
        results: Vec<ExtremalResult>,
    },
    /// No interior stationary point in any run. Heuristic evidence only.
    NoneDetected {
        starts: usize,
        seed: u64,
        runs: usize,
    },
    /// Nothing found, but fewer than [`MIN_STARTS_FOR_VERDICT`] starts were used.
    Inconclusive {
        starts: usize,
        seed: u64,
    },
}

impl InteriorVerdict {
    pub fn is_found(&self) -> bool {
        matches!(self, InteriorVerdict::Found { .. })
    }
}

pub fn has_interior_extremum(pattern: SupportPattern, starts: usize, seed: u64) -> InteriorVerdict {
    verdict(&find_stationary(pattern, starts, seed, DEFAULT_TOL), starts, seed)
}

/// Verdict for a [`find_stationary`] list obtained with `starts` and `seed`.
pub fn verdict(results: &[ExtremalResult], starts: usize, seed: u64) -> InteriorVerdict {
    let found: Vec<_> = interior(results).cloned().collect();
    if !found.is_empty() {
        InteriorVerdict::Found { results: found }
    } else if starts >= MIN_STARTS_FOR_VERDICT {
        InteriorVerdict::NoneDetected { starts, seed, runs: results.iter().map(|r| r.runs).sum() }
    } else {
        InteriorVerdict::Inconclusive { starts, seed }
    }
}

/// η of a two-term state with equal weights, `log_3 2`.
pub fn log3_2() -> f64 {
    LN_2 / 3f64.ln()
}
