//! Grid-scale subharmonicity and harmonicity checks.
//!
//! The viscosity definition is discretized: at every interior node the stencil
//! Hessian, raised by a consistency margin `ε = c·h`, must not lie outside the
//! constraint set. By default `c = 2·max|third difference|`, which vanishes
//! on quadratics.

use serde::{Deserialize, Serialize};

use crate::cone::Set;
use crate::error::{CheckError, ConeError};
use crate::ge::GenEq;
use crate::grid::{discrete_hessian, Domain, Grid, GridFn, NodeKind, DIRECTIONS_R1};

/// Slack factor in `c11_check`: gradients are compared against `λ(1 + C11_SLACK·h)`.
pub const C11_SLACK: f64 = 1.0;
/// Node offsets (in lattice units) compared by `c11_check`.
pub const C11_REACH: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstNode {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub pass: bool,
    /// Node with the smallest margin, if any node was checked.
    pub worst: Option<WorstNode>,
    pub tolerance: f64,
    pub radius: usize,
    /// Consistency margin added to stencil Hessians (0 for the
    /// quasiconvexity and gradient checks).
    pub epsilon: f64,
    pub nodes_checked: usize,
    /// Nodes whose membership fell within a search resolution.
    pub indeterminate: usize,
}

impl CheckReport {
    pub fn margin(&self) -> f64 {
        self.worst.map_or(f64::INFINITY, |w| w.margin)
    }

    fn build(worst: Option<WorstNode>, tolerance: f64, radius: usize, epsilon: f64, nodes_checked: usize) -> CheckReport {
        let pass = worst.is_none_or(|w| w.margin >= -tolerance);
        CheckReport {
            pass,
            worst,
            tolerance,
            radius,
            epsilon,
            nodes_checked,
            indeterminate: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub tol: f64,
    /// 1 for axes and diagonals, 2 to add the knight directions.
    pub radius: usize,
    /// Consistency constant `c` in `ε = c·h`; `None` derives it from third differences.
    pub consistency: Option<f64>,
}

impl CheckOptions {
    pub fn new(tol: f64) -> CheckOptions {
        CheckOptions {
            tol,
            radius: 1,
            consistency: None,
        }
    }
}

fn track(worst: &mut Option<WorstNode>, grid: &Grid, i: usize, j: usize, margin: f64) {
    if worst.is_none_or(|w| margin < w.margin) {
        let (x, y) = grid.coords(i, j);
        *worst = Some(WorstNode { i, j, x, y, margin });
    }
}

/// Whether `u ∈ F(X)` at grid scale.
pub fn check_subharmonic(u: &GridFn, f: &Set, tol: f64) -> Result<CheckReport, CheckError> {
    check_subharmonic_with(u, f, &CheckOptions::new(tol))
}

pub fn check_subharmonic_with(u: &GridFn, f: &Set, opts: &CheckOptions) -> Result<CheckReport, CheckError> {
    let g = &u.grid;
    let c = opts.consistency.unwrap_or_else(|| 2.0 * u.max_third_difference());
    let eps = c * g.h();
    let mut worst = None;
    let mut count = 0;
    let mut indeterminate = 0;
    for (i, j) in g.indices() {
        if !g.stencil_ok(i, j, opts.radius) {
            continue;
        }
        let a = discrete_hessian(u, i, j, opts.radius)?.shift(eps);
        count += 1;
        match f.member_with(&a, opts.tol) {
            Ok(v) => track(&mut worst, g, i, j, v.margin),
            Err(ConeError::Indeterminate(_)) => indeterminate += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let mut report = CheckReport::build(worst, opts.tol, opts.radius, eps, count);
    report.indeterminate = indeterminate;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicReport {
    pub pass: bool,
    /// `u ∈ E(X)`.
    pub e: CheckReport,
    /// `−u ∈ G~(X)`.
    pub g_tilde: CheckReport,
}

/// `u` is `H`-harmonic for `H = E ∩ (−G~)`: `u ∈ E(X)` and `−u ∈ G~(X)`.
pub fn check_ge_harmonic(u: &GridFn, ge: &GenEq, tol: f64) -> Result<HarmonicReport, CheckError> {
    check_ge_harmonic_with(u, ge, &CheckOptions::new(tol))
}

pub fn check_ge_harmonic_with(u: &GridFn, ge: &GenEq, opts: &CheckOptions) -> Result<HarmonicReport, CheckError> {
    let e = check_subharmonic_with(u, ge.e(), opts)?;
    let g_tilde = check_subharmonic_with(&u.neg(), &ge.g().dual(), opts)?;
    Ok(HarmonicReport {
        pass: e.pass && g_tilde.pass,
        e,
        g_tilde,
    })
}

/// Midpoint convexity of `u + λ|x|²/2` along every lattice segment in the axis
/// and diagonal directions. Margins are normalized second differences.
pub fn quasiconvex_check(u: &GridFn, lambda: f64) -> CheckReport {
    let g = &u.grid;
    let h = g.h();
    let v: Vec<f64> = g
        .indices()
        .map(|(i, j)| {
            let (x, y) = g.coords(i, j);
            u.get(i, j) + 0.5 * lambda * (x * x + y * y)
        })
        .collect();
    let mut worst = None;
    let mut count = 0;
    for (i, j) in g.indices() {
        if g.kind(i, j) != NodeKind::Interior {
            continue;
        }
        count += 1;
        let c = v[g.idx(i, j)];
        let mut local = f64::INFINITY;
        for &(a, b) in &DIRECTIONS_R1 {
            let len2 = ((a * a + b * b) as f64) * h * h;
            let mut k = 1;
            while let (Some(p), Some(m)) = (g.offset(i, j, k * a, k * b), g.offset(i, j, -k * a, -k * b)) {
                let d = (v[p] + v[m] - 2.0 * c) / (len2 * (k * k) as f64);
                local = local.min(d);
                k += 1;
            }
        }
        if local.is_finite() {
            track(&mut worst, g, i, j, local);
        }
    }
    CheckReport::build(worst, QUASI_TOL, 1, 0.0, count)
}

/// Tolerance for normalized second differences in `quasiconvex_check`.
pub const QUASI_TOL: f64 = 1e-9;

/// Lipschitz bound on centered-difference gradients over node pairs within
/// `C11_REACH` lattice steps, against `λ(1 + C11_SLACK·h)`.
pub fn c11_check(u: &GridFn, lambda: f64) -> CheckReport {
    let g = &u.grid;
    let h = g.h();
    let grad = |i: usize, j: usize| -> Option<(f64, f64)> {
        if g.kind(i, j) != NodeKind::Interior {
            return None;
        }
        let e = g.offset(i, j, 1, 0)?;
        let w = g.offset(i, j, -1, 0)?;
        let n = g.offset(i, j, 0, 1)?;
        let s = g.offset(i, j, 0, -1)?;
        let v = &u.values;
        Some(((v[e] - v[w]) / (2.0 * h), (v[n] - v[s]) / (2.0 * h)))
    };
    let grads: Vec<Option<(f64, f64)>> = g.indices().map(|(i, j)| grad(i, j)).collect();
    let bound = lambda * (1.0 + C11_SLACK * h);
    let mut offsets = Vec::new();
    for b in 0..=C11_REACH {
        for a in -C11_REACH..=C11_REACH {
            if (b == 0 && a <= 0) || a * a + b * b > C11_REACH * C11_REACH {
                continue;
            }
            offsets.push((a, b));
        }
    }
    let mut worst = None;
    let mut count = 0;
    for (i, j) in g.indices() {
        let Some(gp) = grads[g.idx(i, j)] else {
            continue;
        };
        count += 1;
        let mut local = f64::INFINITY;
        for &(a, b) in &offsets {
            let Some(q) = g.offset(i, j, a, b) else {
                continue;
            };
            let Some(gq) = grads[q] else {
                continue;
            };
            let dist = ((a * a + b * b) as f64).sqrt() * h;
            let ratio = (gp.0 - gq.0).hypot(gp.1 - gq.1) / dist;
            local = local.min(bound - ratio);
        }
        if local.is_finite() {
            track(&mut worst, g, i, j, local);
        }
    }
    CheckReport::build(worst, QUASI_TOL, C11_REACH as usize, 0.0, count)
}

/// A test function with its exact critical constant `sup ‖D²u‖`.
#[derive(Clone, Copy)]
pub struct CorpusFn {
    pub name: &'static str,
    pub u: fn(f64, f64) -> f64,
    /// `(u_xx, u_xy, u_yy)`, defined almost everywhere.
    pub hessian: fn(f64, f64) -> [f64; 3],
    /// `sup ‖D²u‖` over the corpus domain; both `±u` are `λ`-quasiconvex
    /// exactly when `λ` is at least this.
    pub critical: f64,
    /// `C²` (true) or only `C^{1,1}` (false).
    pub smooth: bool,
}

/// Domain shared by the corpus.
pub fn corpus_grid() -> Grid {
    Grid::new(Domain::square(-2.0, 2.0), 129).expect("valid corpus grid")
}

fn huber(s: f64) -> f64 {
    if s.abs() <= 1.0 {
        0.5 * s * s
    } else {
        s.abs() - 0.5
    }
}

fn huber2(s: f64) -> f64 {
    if s.abs() <= 1.0 {
        1.0
    } else {
        0.0
    }
}

const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Twenty smooth and five `C^{1,1}` functions on `[−2, 2]²` whose extreme
/// Hessian directions lie along the axes or diagonals, and whose suprema are
/// attained away from the edge of the square.
pub fn corpus() -> Vec<CorpusFn> {
    vec![
        CorpusFn {
            name: "sin x + sin y",
            u: |x, y| x.sin() + y.sin(),
            hessian: |x, y| [-x.sin(), 0.0, -y.sin()],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "x^2 - y^2",
            u: |x, y| x * x - y * y,
            hessian: |_, _| [2.0, 0.0, -2.0],
            critical: 2.0,
            smooth: true,
        },
        CorpusFn {
            name: "(x^2 + y^2)/2",
            u: |x, y| 0.5 * (x * x + y * y),
            hessian: |_, _| [1.0, 0.0, 1.0],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "x y",
            u: |x, y| x * y,
            hessian: |_, _| [0.0, 1.0, 0.0],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "cos x cos y",
            u: |x, y| x.cos() * y.cos(),
            hessian: |x, y| [-x.cos() * y.cos(), x.sin() * y.sin(), -x.cos() * y.cos()],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "sin x sin y",
            u: |x, y| x.sin() * y.sin(),
            hessian: |x, y| [-x.sin() * y.sin(), x.cos() * y.cos(), -x.sin() * y.sin()],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "(3x^2 + y^2)/2",
            u: |x, y| 0.5 * (3.0 * x * x + y * y),
            hessian: |_, _| [3.0, 0.0, 1.0],
            critical: 3.0,
            smooth: true,
        },
        CorpusFn {
            name: "exp(-x^2)",
            u: |x, _| (-x * x).exp(),
            hessian: |x, _| [(4.0 * x * x - 2.0) * (-x * x).exp(), 0.0, 0.0],
            critical: 2.0,
            smooth: true,
        },
        CorpusFn {
            name: "exp(-x^2) + exp(-y^2)/2",
            u: |x, y| (-x * x).exp() + 0.5 * (-y * y).exp(),
            hessian: |x, y| {
                [
                    (4.0 * x * x - 2.0) * (-x * x).exp(),
                    0.0,
                    0.5 * (4.0 * y * y - 2.0) * (-y * y).exp(),
                ]
            },
            critical: 2.0,
            smooth: true,
        },
        CorpusFn {
            name: "atan x",
            u: |x, _| x.atan(),
            hessian: |x, _| [-2.0 * x / (1.0 + x * x).powi(2), 0.0, 0.0],
            critical: 3.0 * 3f64.sqrt() / 8.0,
            smooth: true,
        },
        CorpusFn {
            name: "ln(1 + y^2)",
            u: |_, y| (1.0 + y * y).ln(),
            hessian: |_, y| [0.0, 0.0, 2.0 * (1.0 - y * y) / (1.0 + y * y).powi(2)],
            critical: 2.0,
            smooth: true,
        },
        CorpusFn {
            name: "sin((x + y)/sqrt 2)",
            u: |x, y| ((x + y) * R2).sin(),
            hessian: |x, y| {
                let s = -((x + y) * R2).sin() / 2.0;
                [s, s, s]
            },
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "cos(sqrt 2 (x - y))/4",
            u: |x, y| (2f64.sqrt() * (x - y)).cos() / 4.0,
            hessian: |x, y| {
                let s = -(2f64.sqrt() * (x - y)).cos() / 2.0;
                [s, -s, s]
            },
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "exp(-(x + y)^2/2)",
            u: |x, y| (-(x + y) * (x + y) / 2.0).exp(),
            hessian: |x, y| {
                let s2 = (x + y) * (x + y) / 2.0;
                let d = (4.0 * s2 - 2.0) * (-s2).exp() / 2.0;
                [d, d, d]
            },
            critical: 2.0,
            smooth: true,
        },
        CorpusFn {
            name: "atan((x - y)/sqrt 2)",
            u: |x, y| ((x - y) * R2).atan(),
            hessian: |x, y| {
                let s = (x - y) * R2;
                let d = -2.0 * s / (1.0 + s * s).powi(2) / 2.0;
                [d, -d, d]
            },
            critical: 3.0 * 3f64.sqrt() / 8.0,
            smooth: true,
        },
        CorpusFn {
            name: "x^2/2 + sin y",
            u: |x, y| 0.5 * x * x + y.sin(),
            hessian: |_, y| [1.0, 0.0, -y.sin()],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "sin(2x)/4 + y^2/4",
            u: |x, y| (2.0 * x).sin() / 4.0 + y * y / 4.0,
            hessian: |x, _| [-(2.0 * x).sin(), 0.0, 0.5],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "ln(1 + x^2) + ln(1 + y^2)",
            u: |x, y| (1.0 + x * x).ln() + (1.0 + y * y).ln(),
            hessian: |x, y| {
                [
                    2.0 * (1.0 - x * x) / (1.0 + x * x).powi(2),
                    0.0,
                    2.0 * (1.0 - y * y) / (1.0 + y * y).powi(2),
                ]
            },
            critical: 2.0,
            smooth: true,
        },
        CorpusFn {
            name: "x^2 + x y + y^2",
            u: |x, y| x * x + x * y + y * y,
            hessian: |_, _| [2.0, 1.0, 2.0],
            critical: 3.0,
            smooth: true,
        },
        CorpusFn {
            name: "cos x + cos(y)/2",
            u: |x, y| x.cos() + 0.5 * y.cos(),
            hessian: |x, y| [-x.cos(), 0.0, -0.5 * y.cos()],
            critical: 1.0,
            smooth: true,
        },
        CorpusFn {
            name: "x |x|",
            u: |x, _| x * x.abs(),
            hessian: |x, _| [2.0 * x.signum(), 0.0, 0.0],
            critical: 2.0,
            smooth: false,
        },
        CorpusFn {
            name: "huber(x)",
            u: |x, _| huber(x),
            hessian: |x, _| [huber2(x), 0.0, 0.0],
            critical: 1.0,
            smooth: false,
        },
        CorpusFn {
            name: "max(x + y, 0)^2/2",
            u: |x, y| 0.5 * (x + y).max(0.0).powi(2),
            hessian: |x, y| {
                let d = if x + y > 0.0 { 1.0 } else { 0.0 };
                [d, d, d]
            },
            critical: 2.0,
            smooth: false,
        },
        CorpusFn {
            name: "huber((x - y)/sqrt 2)",
            u: |x, y| huber((x - y) * R2),
            hessian: |x, y| {
                let d = huber2((x - y) * R2) / 2.0;
                [d, -d, d]
            },
            critical: 1.0,
            smooth: false,
        },
        CorpusFn {
            name: "y |y|/2 + x^2/4",
            u: |x, y| 0.5 * y * y.abs() + 0.25 * x * x,
            hessian: |_, y| [0.5, 0.0, y.signum()],
            critical: 1.0,
            smooth: false,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn square(n: usize) -> Grid {
        Grid::new(Domain::unit_square(), n).unwrap()
    }

    #[test]
    fn positive_cone_examples() {
        let g = square(17);
        let up = GridFn::sample(&g, |x, y| 0.5 * (x * x + y * y));
        assert!(check_subharmonic(&up, &Set::p(2), 1e-9).unwrap().pass);
        let down = up.neg();
        let r = check_subharmonic(&down, &Set::p(2), 1e-9).unwrap();
        assert!(!r.pass);
        assert!((r.margin() + 1.0).abs() < 1e-9);
        let harm = GridFn::sample(&g, |x, y| x * x - y * y);
        let r = check_subharmonic(&harm, &Set::delta(2), 1e-9).unwrap();
        assert!(r.pass && r.margin().abs() < 1e-9);
    }

    #[test]
    fn constrained_laplacian_harmonics() {
        let g = square(17);
        let u = GridFn::sample(&g, |x, y| x * x - y * y);
        let r2 = catalog::constrained_laplacian(2.0, 2).unwrap().ge;
        assert!(check_ge_harmonic(&u, &r2, 1e-9).unwrap().pass);
        let r1 = catalog::constrained_laplacian(1.0, 2).unwrap().ge;
        assert!(!check_ge_harmonic(&u, &r1, 1e-9).unwrap().pass);
    }

    #[test]
    fn band_intersection_harmonic() {
        let g = square(17);
        let u = GridFn::sample(&g, |x, y| 0.5 * x * x - 0.5 * y * y);
        let ge = catalog::band_intersection(1.0, 2).unwrap().ge;
        assert!(check_ge_harmonic(&u, &ge, 1e-9).unwrap().pass);
    }

    #[test]
    fn sine_sum_thresholds() {
        let g = corpus_grid();
        let u = GridFn::sample(&g, |x, y| x.sin() + y.sin());
        for (lambda, expect) in [(1.01, true), (0.9, false)] {
            assert_eq!(quasiconvex_check(&u, lambda).pass && quasiconvex_check(&u.neg(), lambda).pass, expect);
            assert_eq!(c11_check(&u, lambda).pass, expect);
        }
    }

    #[test]
    fn kink_profile_thresholds() {
        let g = corpus_grid();
        let u = GridFn::sample(&g, |x, _| x * x.abs());
        assert!(quasiconvex_check(&u, 2.01).pass && quasiconvex_check(&u.neg(), 2.01).pass);
        assert!(c11_check(&u, 2.01).pass);
    }
}
