//! Wide-stencil monotone solver for the Dirichlet problem.
//!
//! A set built from `P`, `P~` and `Δ` (on all or part of the spectrum) with
//! shifts, negation, duals, intersections and unions compiles to a level
//! function of the Hessian made of `min`/`max` over the terms `λ_min`,
//! `λ_max` and `tr/2`. Each term is realized by centered second differences:
//! `λ_min ≈ min_θ D_θu/|θ|²`, `λ_max ≈ max_θ D_θu/|θ|²`, `tr/2 ≈ (D_x + D_y)/2`.
//! The operator is monotone when every term enters with a positive sign, and
//! the explicit iteration `u ← u + dt·g(Du)` then converges to the discrete
//! solution of `g(D²u) = 0` with `u = φ` on the boundary.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, Params};
use crate::cone::{Expr, Layout, Part, Prim, Set};
use crate::error::SolveError;
use crate::formula::Formula;
use crate::ge::{classify_type, GenEq};
use crate::grid::{directions, Domain, Grid, GridFn, NodeKind};
use crate::symmat::SymMat;
use crate::tol::Tolerances;
use crate::viscosity::{check_ge_harmonic, HarmonicReport};

/// Residual target `‖g(Du)‖∞` for a converged solve.
pub const TOL_SOLVE: f64 = 1e-8;
/// Floor for the existence tolerance `‖h_E − h_G‖∞`.
pub const MIN_TOL_EXIST: f64 = 1e-5;
/// Iterations between residual checkpoints.
pub const CHECK_EVERY: usize = 100;
/// Consecutive growing checkpoints that count as divergence.
pub const DIVERGE_CHECKPOINTS: usize = 100;

const SQUARE_CORNERS: &str =
    "rectangle corners are not smooth, so the strict boundary convexity assumed by the existence theory is not verified here";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    LambdaMin,
    LambdaMax,
    /// `tr/2`.
    Mean,
}

/// Compiled level function; a leaf evaluates to `sign·f(D²u) + offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum OpNode {
    Leaf {
        f: Functional,
        #[serde(default)]
        part: Part,
        sign: f64,
        offset: f64,
    },
    /// `+∞`: every matrix.
    Top,
    /// `−∞`: no matrix.
    Bottom,
    Min {
        of: Vec<OpNode>,
    },
    Max {
        of: Vec<OpNode>,
    },
}

impl OpNode {
    fn neg(self) -> OpNode {
        match self {
            OpNode::Leaf { f, part, sign, offset } => OpNode::Leaf {
                f,
                part,
                sign: -sign,
                offset: -offset,
            },
            OpNode::Top => OpNode::Bottom,
            OpNode::Bottom => OpNode::Top,
            OpNode::Min { of } => OpNode::Max {
                of: of.into_iter().map(OpNode::neg).collect(),
            },
            OpNode::Max { of } => OpNode::Min {
                of: of.into_iter().map(OpNode::neg).collect(),
            },
        }
    }

    fn min(of: Vec<OpNode>) -> OpNode {
        if of.contains(&OpNode::Bottom) {
            return OpNode::Bottom;
        }
        let mut of: Vec<OpNode> = of.into_iter().filter(|n| *n != OpNode::Top).collect();
        match of.len() {
            0 => OpNode::Top,
            1 => of.pop().expect("one term"),
            _ => OpNode::Min { of },
        }
    }

    fn max(of: Vec<OpNode>) -> OpNode {
        if of.contains(&OpNode::Top) {
            return OpNode::Top;
        }
        let mut of: Vec<OpNode> = of.into_iter().filter(|n| *n != OpNode::Bottom).collect();
        match of.len() {
            0 => OpNode::Bottom,
            1 => of.pop().expect("one term"),
            _ => OpNode::Max { of },
        }
    }

    fn leaves(&self) -> Vec<&OpNode> {
        match self {
            OpNode::Leaf { .. } => vec![self],
            OpNode::Top | OpNode::Bottom => vec![],
            OpNode::Min { of } | OpNode::Max { of } => of.iter().flat_map(OpNode::leaves).collect(),
        }
    }

    fn eval(&self, v: &NodeVals) -> f64 {
        match self {
            OpNode::Leaf { f, part, sign, offset } => {
                let x = match (part, f) {
                    (Part::A, _) => v.a,
                    (Part::B, _) => v.b,
                    (Part::All, Functional::LambdaMin) => v.min,
                    (Part::All, Functional::LambdaMax) => v.max,
                    (Part::All, Functional::Mean) => v.mean,
                };
                sign * x + offset
            }
            OpNode::Top => f64::INFINITY,
            OpNode::Bottom => f64::NEG_INFINITY,
            OpNode::Min { of } => of.iter().map(|n| n.eval(v)).fold(f64::INFINITY, f64::min),
            OpNode::Max { of } => of.iter().map(|n| n.eval(v)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// The same level evaluated on an exact Hessian.
    fn eval_matrix(&self, a: &SymMat, layout: Layout) -> f64 {
        let (xx, yy) = (a.get(0, 0), a.get(1, 1));
        let v = match layout {
            Layout::Full => {
                let e = a.eigenvalues();
                NodeVals {
                    min: e[0],
                    max: e[1],
                    mean: 0.5 * (xx + yy),
                    a: xx,
                    b: yy,
                }
            }
            Layout::Block { .. } => NodeVals {
                min: xx.min(yy),
                max: xx.max(yy),
                mean: 0.5 * (xx + yy),
                a: xx,
                b: yy,
            },
        };
        self.eval(&v)
    }
}

impl fmt::Display for OpNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpNode::Leaf { f: func, part, sign, offset } => {
                let name = match func {
                    Functional::LambdaMin => "lmin",
                    Functional::LambdaMax => "lmax",
                    Functional::Mean => "tr/2",
                };
                let part = match part {
                    Part::All => "",
                    Part::A => "[a]",
                    Part::B => "[b]",
                };
                let sign = if *sign < 0.0 { "-" } else { "" };
                if *offset == 0.0 {
                    write!(f, "{sign}{name}{part}")
                } else {
                    write!(f, "{sign}{name}{part} {} {}", if *offset < 0.0 { '-' } else { '+' }, offset.abs())
                }
            }
            OpNode::Top => write!(f, "+inf"),
            OpNode::Bottom => write!(f, "-inf"),
            OpNode::Min { of } | OpNode::Max { of } => {
                write!(f, "{}(", if matches!(self, OpNode::Min { .. }) { "min" } else { "max" })?;
                for (i, n) in of.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Second-difference summaries at one node.
struct NodeVals {
    min: f64,
    max: f64,
    mean: f64,
    a: f64,
    b: f64,
}

/// A set compiled to a stencil operator whose zero set is its boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub layout: Layout,
    pub root: OpNode,
    /// Every leaf enters with a positive sign, so the operator is
    /// nondecreasing in every directional second difference.
    pub monotone: bool,
    pub source: String,
}

impl OperatorSpec {
    /// The level of an exact Hessian under this operator.
    pub fn level(&self, a: &SymMat) -> f64 {
        self.root.eval_matrix(a, self.layout)
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// Level of `F` at `σA − cI`, as a function of `A`.
fn compile_expr(e: &Expr, sigma: f64, c: f64) -> Result<OpNode, SolveError> {
    Ok(match e {
        Expr::Prim { name, part } => {
            let (f, sign) = match (name, sigma > 0.0) {
                (Prim::P, true) => (Functional::LambdaMin, 1.0),
                (Prim::P, false) => (Functional::LambdaMax, -1.0),
                (Prim::Ptilde, true) => (Functional::LambdaMax, 1.0),
                (Prim::Ptilde, false) => (Functional::LambdaMin, -1.0),
                (Prim::Delta, _) => (Functional::Mean, sigma),
                (Prim::Full, _) => return Ok(OpNode::Top),
                (Prim::Empty, _) => return Ok(OpNode::Bottom),
                (other, _) => {
                    return Err(SolveError::NonCompilable(format!(
                        "`{}` has no stencil realization",
                        other.name()
                    )))
                }
            };
            OpNode::Leaf {
                f,
                part: *part,
                sign,
                offset: -c,
            }
        }
        Expr::Shift { t, of } => compile_expr(of, sigma, c + t)?,
        Expr::Negate { of } => compile_expr(of, -sigma, -c)?,
        Expr::Dual { of } => compile_expr(of, -sigma, -c)?.neg(),
        Expr::Intersect { of } => OpNode::min(of.iter().map(|e| compile_expr(e, sigma, c)).collect::<Result<_, _>>()?),
        Expr::Union { of } => OpNode::max(of.iter().map(|e| compile_expr(e, sigma, c)).collect::<Result<_, _>>()?),
        Expr::AddP { .. } | Expr::SubP { .. } => {
            return Err(SolveError::NonCompilable(
                "generic sums with P are only available as membership oracles".into(),
            ))
        }
    })
}

/// Compiles a set in dimension two to a monotone stencil operator.
pub fn compile_operator(f: &Set) -> Result<OperatorSpec, SolveError> {
    if f.n() != 2 {
        return Err(SolveError::NonCompilable(format!("dimension {} (the solver is planar)", f.n())));
    }
    let layout = f.layout();
    if let Layout::Block { k, l } = layout {
        if (k, l) != (1, 1) {
            return Err(SolveError::NonCompilable(format!("block layout ({k}, {l})")));
        }
    }
    let root = compile_expr(f.expr(), 1.0, 0.0)?;
    if matches!(root, OpNode::Top | OpNode::Bottom) {
        return Err(SolveError::NonCompilable(format!("`{f}` has no boundary")));
    }
    let monotone = root.leaves().iter().all(|l| matches!(l, OpNode::Leaf { sign, .. } if *sign > 0.0));
    if !monotone {
        return Err(SolveError::NonCompilable(format!(
            "`{f}` compiles to {root}, which decreases in some second difference"
        )));
    }
    Ok(OperatorSpec {
        layout,
        root,
        monotone,
        source: f.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Initial {
    /// Transfinite (Coons) interpolation of the boundary data on rectangles,
    /// the mean of the boundary data on disks.
    Coons,
    Constant { value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// 1 for axes and diagonals, 2 to add the knight directions.
    pub radius: usize,
    pub initial: Initial,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            tol: TOL_SOLVE,
            max_iters: 2_000_000,
            radius: 1,
            initial: Initial::Coons,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIters,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub operator: String,
    pub status: SolveStatus,
    pub residual: f64,
    pub iterations: usize,
    pub dt: f64,
    pub notes: Vec<String>,
    pub solution: GridFn,
}

fn initial_guess(grid: &Grid, phi: &dyn Fn(f64, f64) -> f64, init: Initial) -> Vec<f64> {
    let mut u = vec![0.0; grid.len()];
    let boundary_mean = {
        let vals: Vec<f64> = grid
            .indices()
            .filter(|&(i, j)| grid.kind(i, j) == NodeKind::Boundary)
            .map(|(i, j)| grid.boundary_value(i, j, phi))
            .collect();
        vals.iter().sum::<f64>() / vals.len().max(1) as f64
    };
    for (i, j) in grid.indices() {
        let k = grid.idx(i, j);
        u[k] = match grid.kind(i, j) {
            NodeKind::Outside => 0.0,
            NodeKind::Boundary => grid.boundary_value(i, j, phi),
            NodeKind::Interior => match (init, grid.domain()) {
                (Initial::Constant { value }, _) => value,
                (Initial::Coons, Domain::Rect { x0, x1, y0, y1 }) => {
                    let (x, y) = grid.coords(i, j);
                    let s = (x - x0) / (x1 - x0);
                    let t = (y - y0) / (y1 - y0);
                    let (x0, x1, y0, y1) = (*x0, *x1, *y0, *y1);
                    (1.0 - s) * phi(x0, y) + s * phi(x1, y) + (1.0 - t) * phi(x, y0) + t * phi(x, y1)
                        - (1.0 - s) * (1.0 - t) * phi(x0, y0)
                        - s * (1.0 - t) * phi(x1, y0)
                        - (1.0 - s) * t * phi(x0, y1)
                        - s * t * phi(x1, y1)
                }
                (Initial::Coons, Domain::Disk { .. }) => boundary_mean,
            },
        };
    }
    u
}

/// Solves `g(D²u) = 0` in the interior with `u = φ` on boundary nodes, where
/// `g` is the compiled level of `F`, so that `u` is `∂F`-harmonic at grid scale.
pub fn solve_boundary_equation(
    f: &Set,
    grid: &Grid,
    phi: &dyn Fn(f64, f64) -> f64,
    opts: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let op = compile_operator(f)?;
    let dirs = directions(opts.radius);
    let nd = dirs.len();
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let dt = h * h / (2.0 * nd as f64);
    let block = matches!(op.layout, Layout::Block { .. });

    let interior: Vec<(usize, usize)> = grid
        .indices()
        .filter(|&(i, j)| grid.kind(i, j) == NodeKind::Interior)
        .collect();
    const NONE: usize = usize::MAX;
    let mut nbrs = Vec::with_capacity(interior.len() * nd);
    let weights: Vec<f64> = dirs.iter().map(|&(a, b)| inv_h2 / (a * a + b * b) as f64).collect();
    for &(i, j) in &interior {
        for &(a, b) in dirs {
            match (grid.offset(i, j, a, b), grid.offset(i, j, -a, -b)) {
                (Some(p), Some(m)) => nbrs.push((p, m)),
                _ => nbrs.push((NONE, NONE)),
            }
        }
    }
    let centers: Vec<usize> = interior.iter().map(|&(i, j)| grid.idx(i, j)).collect();

    let mut u = initial_guess(grid, phi, opts.initial);
    let mut g = vec![0.0; centers.len()];
    let mut last_checkpoint = f64::INFINITY;
    let mut growing = 0;
    let mut residual;
    let mut iterations = 0;
    let mut status = SolveStatus::MaxIters;
    loop {
        residual = 0.0;
        for (s, &k) in centers.iter().enumerate() {
            let c = 2.0 * u[k];
            let nb = &nbrs[s * nd..(s + 1) * nd];
            // Axes come first in every direction set and are always present.
            let dx = (u[nb[0].0] + u[nb[0].1] - c) * weights[0];
            let dy = (u[nb[1].0] + u[nb[1].1] - c) * weights[1];
            let (mut lo, mut hi) = (dx.min(dy), dx.max(dy));
            if !block {
                for (d, &(p, m)) in nb.iter().enumerate().skip(2) {
                    if p != NONE {
                        let v = (u[p] + u[m] - c) * weights[d];
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
            }
            let v = op.root.eval(&NodeVals {
                min: lo,
                max: hi,
                mean: 0.5 * (dx + dy),
                a: dx,
                b: dy,
            });
            g[s] = v;
            residual = f64::max(residual, v.abs());
        }
        if !residual.is_finite() {
            return Err(SolveError::Diverged {
                checkpoints: growing,
                residual,
            });
        }
        if residual <= opts.tol {
            status = SolveStatus::Converged;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        for (s, &k) in centers.iter().enumerate() {
            u[k] += dt * g[s];
        }
        iterations += 1;
        if iterations % CHECK_EVERY == 0 {
            if residual > last_checkpoint {
                growing += 1;
                if growing >= DIVERGE_CHECKPOINTS {
                    return Err(SolveError::Diverged {
                        checkpoints: growing,
                        residual,
                    });
                }
            } else {
                growing = 0;
            }
            last_checkpoint = residual;
        }
    }
    let mut notes = Vec::new();
    if matches!(grid.domain(), Domain::Rect { .. }) {
        notes.push(SQUARE_CORNERS.to_string());
    }
    if status == SolveStatus::MaxIters {
        notes.push(format!("stopped after {iterations} iterations with residual {residual:.3e}"));
    }
    Ok(SolveReport {
        operator: op.to_string(),
        status,
        residual,
        iterations,
        dt,
        notes,
        solution: GridFn::new(grid.clone(), u)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `h_E = h_G` within `tol_exist` and the common function is `H`-harmonic.
    Solution,
    /// `h_E` and `h_G` differ by `gap ≥ tol_exist`. Evidence, not a proof.
    NoSolutionEvidence { gap: f64 },
    /// `h_E` and `h_G` agree, but the harmonic check failed.
    Unverified { gap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeSolveOptions {
    pub solve: SolveOptions,
    /// Estimate the discretization error from a solve on the grid with
    /// half as many intervals, when the grids nest.
    pub estimate_error: bool,
    /// Membership tolerance for the harmonic check (`10·tol_solve`).
    pub check_tol: f64,
}

impl Default for GeSolveOptions {
    fn default() -> GeSolveOptions {
        GeSolveOptions {
            solve: SolveOptions::default(),
            estimate_error: true,
            check_tol: 10.0 * TOL_SOLVE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeSolveReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub gap: f64,
    pub tol_exist: f64,
    /// Estimated `‖h_E − h_E^{coarse}‖∞/3`, if computed.
    pub discretization_error: Option<f64>,
    pub harmonic: Option<HarmonicReport>,
    pub notes: Vec<String>,
    pub h_e: SolveReport,
    pub h_g: SolveReport,
}

impl GeSolveReport {
    /// The common solution, when there is one.
    pub fn solution(&self) -> Option<&GridFn> {
        matches!(self.verdict, Verdict::Solution).then_some(&self.h_e.solution)
    }
}

fn coarse_grid(grid: &Grid) -> Option<Grid> {
    let n = grid.nodes();
    if n.is_multiple_of(2) || n < 9 {
        return None;
    }
    Grid::new(grid.domain().clone(), n.div_ceil(2)).ok()
}

/// Largest difference at the nodes shared with the grid of twice the spacing.
fn nested_difference(fine: &GridFn, coarse: &GridFn) -> f64 {
    let (gf, gc) = (&fine.grid, &coarse.grid);
    gc.indices()
        .filter(|&(i, j)| gc.kind(i, j) != NodeKind::Outside && gf.kind(2 * i, 2 * j) != NodeKind::Outside)
        .map(|(i, j)| (coarse.get(i, j) - fine.get(2 * i, 2 * j)).abs())
        .fold(0.0, f64::max)
}

/// Solves the boundary equations of `E` and `G` and compares the results:
/// the Dirichlet problem for `H` is solvable exactly when `h_E = h_G`.
pub fn solve_ge(
    ge: &GenEq,
    grid: &Grid,
    phi: &dyn Fn(f64, f64) -> f64,
    opts: &GeSolveOptions,
) -> Result<GeSolveReport, SolveError> {
    let mut notes = Vec::new();
    match classify_type(ge, &Tolerances::default()) {
        Ok(t) if !t.uniqueness() => notes.push(format!(
            "Int H is nonempty (type {:?}); h_E and h_G are the extreme candidates, not the only ones",
            t.label
        )),
        Ok(_) => {}
        Err(e) => notes.push(format!("type not determined: {e}")),
    }
    let h_e = solve_boundary_equation(ge.e(), grid, phi, &opts.solve)?;
    let h_g = solve_boundary_equation(ge.g(), grid, phi, &opts.solve)?;
    let gap = h_e.solution.max_abs_diff(&h_g.solution)?;
    let mut discretization_error = None;
    if opts.estimate_error {
        if let Some(cg) = coarse_grid(grid) {
            let coarse = solve_boundary_equation(ge.e(), &cg, phi, &opts.solve)?;
            discretization_error = Some(nested_difference(&h_e.solution, &coarse.solution) / 3.0);
        }
    }
    let tol_exist = MIN_TOL_EXIST.max(5.0 * discretization_error.unwrap_or(0.0));
    let (verdict, harmonic) = if gap <= tol_exist {
        let report = check_ge_harmonic(&h_e.solution, ge, opts.check_tol)?;
        if report.pass {
            (Verdict::Solution, Some(report))
        } else {
            (Verdict::Unverified { gap }, Some(report))
        }
    } else {
        (Verdict::NoSolutionEvidence { gap }, None)
    };
    notes.extend(h_e.notes.iter().cloned());
    notes.dedup();
    Ok(GeSolveReport {
        verdict,
        gap,
        tol_exist,
        discretization_error,
        harmonic,
        notes,
        h_e,
        h_g,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSolveReport {
    /// `‖h_{∂F~}(φ) + h_{∂F}(−φ)‖∞`.
    pub discrepancy: f64,
    pub dual: SolveReport,
    pub primal: SolveReport,
}

/// Compares the `∂F~` solution for `φ` with minus the `∂F` solution for `−φ`;
/// they coincide because `∂F~ = −∂F`.
pub fn dual_solve_identity(
    f: &Set,
    grid: &Grid,
    phi: &dyn Fn(f64, f64) -> f64,
    opts: &SolveOptions,
) -> Result<DualSolveReport, SolveError> {
    let dual = solve_boundary_equation(&f.dual(), grid, phi, opts)?;
    let neg_phi = |x: f64, y: f64| -phi(x, y);
    let primal = solve_boundary_equation(f, grid, &neg_phi, opts)?;
    let discrepancy = dual.solution.max_abs_diff(&primal.solution.neg())?;
    Ok(DualSolveReport {
        discrepancy,
        dual,
        primal,
    })
}

/// `(1 − s²)⁴` for `s < 1`, with `sup ‖D²ψ‖ = 8/R²` after rescaling to radius `R`.
pub fn bump(x: f64, y: f64, cx: f64, cy: f64, radius: f64) -> f64 {
    let s2 = ((x - cx).powi(2) + (y - cy).powi(2)) / (radius * radius);
    if s2 >= 1.0 {
        0.0
    } else {
        (1.0 - s2).powi(4)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Interior point of `H` defining `h₁ = ½⟨Ax, x⟩`.
    pub a: SymMat,
    /// `H` contains the operator-norm ball of radius `delta` about `A`.
    pub delta: f64,
    /// Bump amplitude `δ / (2‖D²ψ‖∞)`.
    pub epsilon: f64,
    pub center: (f64, f64),
    pub radius: f64,
    pub sup_difference: f64,
    pub same_boundary: bool,
    pub checks: [HarmonicReport; 2],
    pub h1: GridFn,
    pub h2: GridFn,
}

impl Witness {
    pub fn pass(&self) -> bool {
        self.same_boundary && self.sup_difference >= self.epsilon / 2.0 && self.checks.iter().all(|c| c.pass)
    }
}

fn ball_margin(ge: &GenEq, a: &SymMat) -> Result<f64, SolveError> {
    let e = ge.e().level(a)?;
    let gt = ge.g().dual().level(&a.neg())?;
    Ok(e.min(gt))
}

/// Confirms by sampling that the ball of radius `r` about `a` lies in `H`.
fn ball_inside(ge: &GenEq, a: &SymMat, r: f64, seed: u64) -> Result<bool, SolveError> {
    let h = ge.h();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..400 {
        let b = SymMat::new(2, (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())?;
        let b = b.scale(r * rng.random::<f64>().sqrt() / b.op_norm().max(1e-12));
        if h.level(&a.add(&b))? < 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Two `H`-harmonic functions with the same boundary values: the quadratic
/// `½⟨Ax, x⟩` for `A ∈ Int H`, and the same plus a small interior bump.
pub fn nonuniqueness_witness(ge: &GenEq, grid: &Grid, tol: &Tolerances) -> Result<Witness, SolveError> {
    if ge.n() != 2 {
        return Err(SolveError::NonCompilable(format!("dimension {} (witnesses are planar)", ge.n())));
    }
    let zero = SymMat::zeros(2);
    let (a, mut delta) = match ball_margin(ge, &zero)? {
        d if d > 0.0 => (zero, d),
        _ => {
            let report = classify_type(ge, tol)?;
            let a = report.int_h_witness.ok_or(SolveError::NoInteriorWitness)?;
            let d = ball_margin(ge, &a)?;
            if d <= 0.0 {
                return Err(SolveError::NoInteriorWitness);
            }
            (a, d)
        }
    };
    let mut tries = 0;
    while !ball_inside(ge, &a, delta, tol.seed)? {
        delta /= 2.0;
        tries += 1;
        if tries > 30 {
            return Err(SolveError::NoInteriorWitness);
        }
    }
    let (cx, cy, radius) = match grid.domain() {
        Domain::Rect { x0, x1, y0, y1 } => (0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.4 * (x1 - x0).min(y1 - y0)),
        Domain::Disk { cx, cy, r } => (*cx, *cy, 0.8 * r),
    };
    let hess_bound = 8.0 / (radius * radius);
    let epsilon = delta / (2.0 * hess_bound);
    let quad = |x: f64, y: f64| 0.5 * (a.get(0, 0) * x * x + 2.0 * a.get(0, 1) * x * y + a.get(1, 1) * y * y);
    let h1 = GridFn::sample(grid, quad);
    let h2 = GridFn::sample(grid, |x, y| quad(x, y) + epsilon * bump(x, y, cx, cy, radius));
    let check_tol = 10.0 * tol.member;
    let checks = [check_ge_harmonic(&h1, ge, check_tol)?, check_ge_harmonic(&h2, ge, check_tol)?];
    Ok(Witness {
        sup_difference: h1.max_abs_diff(&h2)?,
        same_boundary: h1.boundary_trace() == h2.boundary_trace(),
        a,
        delta,
        epsilon,
        center: (cx, cy),
        radius,
        checks,
        h1,
        h2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub h: f64,
    pub error: f64,
    pub iterations: usize,
    /// `log₂(e_prev / e)` against the previous row.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Smallest order over consecutive grids; `None` if any is undefined.
    pub observed_order: Option<f64>,
}

/// Solves `∂F` with exact boundary data on each grid and measures the
/// `L∞` error against the exact solution at interior nodes.
pub fn convergence_study(
    f: &Set,
    domain: &Domain,
    sizes: &[usize],
    exact: &dyn Fn(f64, f64) -> f64,
    opts: &SolveOptions,
) -> Result<ConvergenceStudy, SolveError> {
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in sizes {
        let grid = Grid::new(domain.clone(), n)?;
        let report = solve_boundary_equation(f, &grid, exact, opts)?;
        let error = report.solution.max_interior_error(exact);
        // Undefined when either error is zero: the scheme reproduces the data exactly.
        let order = rows
            .last()
            .filter(|p| p.error > 0.0 && error > 0.0)
            .map(|p| (p.error / error).log2() / (p.h / grid.h()).log2());
        rows.push(ConvergenceRow {
            nodes: n,
            h: grid.h(),
            error,
            iterations: report.iterations,
            order,
        });
    }
    let observed_order = rows
        .iter()
        .skip(1)
        .map(|r| r.order)
        .collect::<Option<Vec<f64>>>()
        .and_then(|o| o.into_iter().reduce(f64::min));
    Ok(ConvergenceStudy { rows, observed_order })
}

/// Which equation a problem file asks for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Both boundary equations and the existence verdict.
    #[default]
    Ge,
    /// `∂E` only.
    E,
    /// `∂G` only.
    G,
}

/// A Dirichlet problem as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub entry: String,
    #[serde(default)]
    pub params: Params,
    pub domain: Domain,
    pub nodes: usize,
    pub phi: Formula,
    #[serde(default)]
    pub target: Target,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum ProblemResult {
    Ge(Box<GeSolveReport>),
    E(Box<SolveReport>),
    G(Box<SolveReport>),
}

pub fn run_problem(p: &Problem, opts: &GeSolveOptions) -> Result<ProblemResult, SolveError> {
    let mut params = p.params.clone();
    params.n.get_or_insert(2);
    let entry = catalog::lookup(&p.entry, &params)?;
    let grid = Grid::new(p.domain.clone(), p.nodes)?;
    let phi = |x: f64, y: f64| p.phi.eval(x, y);
    for v in grid
        .indices()
        .filter(|&(i, j)| grid.kind(i, j) == NodeKind::Boundary)
        .map(|(i, j)| grid.boundary_value(i, j, phi))
    {
        if !v.is_finite() {
            return Err(SolveError::Formula(format!("`{}` is not finite on the boundary", p.phi)));
        }
    }
    Ok(match p.target {
        Target::Ge => ProblemResult::Ge(Box::new(solve_ge(&entry.ge, &grid, &phi, opts)?)),
        Target::E => ProblemResult::E(Box::new(solve_boundary_equation(entry.ge.e(), &grid, &phi, &opts.solve)?)),
        Target::G => ProblemResult::G(Box::new(solve_boundary_equation(entry.ge.g(), &grid, &phi, &opts.solve)?)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize) -> Grid {
        Grid::new(Domain::unit_square(), n).unwrap()
    }

    #[test]
    fn compiles_constrained_laplacian() {
        let e = catalog::constrained_laplacian(1.0, 2).unwrap();
        let op = compile_operator(e.ge.e()).unwrap();
        assert_eq!(op.to_string(), "min(tr/2, lmin + 1)");
        let op = compile_operator(e.ge.g()).unwrap();
        assert_eq!(op.to_string(), "max(tr/2, lmax - 1)");
        let a = SymMat::diag(&[2.0, -2.0]);
        assert_eq!(compile_operator(e.ge.e()).unwrap().level(&a), -1.0);
    }

    #[test]
    fn rejects_decreasing_and_oracle_sets() {
        assert!(matches!(
            compile_operator(&Set::p(2).negate()),
            Err(SolveError::NonCompilable(_))
        ));
        assert!(matches!(
            compile_operator(&Set::delta(2).add_p()),
            Err(SolveError::NonCompilable(_))
        ));
        assert!(compile_operator(&Set::p(3)).is_err());
    }

    #[test]
    fn harmonic_quadratic_is_reproduced() {
        let g = unit(17);
        let phi = |x: f64, y: f64| x * x - y * y;
        let r = solve_boundary_equation(&Set::delta(2), &g, &phi, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert!(r.solution.max_error(phi) < 1e-9);
    }

    #[test]
    fn constant_starts_reach_the_same_fixed_point() {
        let g = unit(9);
        let phi = |x: f64, y: f64| (3.0 * x).sin() + y * y;
        let f = catalog::constrained_laplacian(1.0, 2).unwrap().ge.e().clone();
        let run = |value| {
            let opts = SolveOptions {
                initial: Initial::Constant { value },
                ..SolveOptions::default()
            };
            solve_boundary_equation(&f, &g, &phi, &opts).unwrap().solution
        };
        assert!(run(5.0).max_abs_diff(&run(-5.0)).unwrap() < 1e-7);
    }

    #[test]
    fn convex_envelope_of_a_tent() {
        let g = unit(17);
        let phi = |x: f64, _: f64| (2.0 * x - 1.0).abs();
        let r = solve_boundary_equation(&Set::p(2), &g, &phi, &SolveOptions::default()).unwrap();
        assert!(r.solution.max_error(phi) < 1e-9);
    }

    #[test]
    fn witness_for_a_band() {
        let ge = catalog::quasi_band(1.0, 1.0, 2).unwrap().ge;
        let w = nonuniqueness_witness(&ge, &unit(33), &Tolerances::default()).unwrap();
        assert!(w.pass(), "{:?}", w.checks);
        let cl = catalog::constrained_laplacian(1.0, 2).unwrap().ge;
        assert!(matches!(
            nonuniqueness_witness(&cl, &unit(17), &Tolerances::default()),
            Err(SolveError::NoInteriorWitness)
        ));
    }
}
