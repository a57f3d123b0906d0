//! Piecewise-linear level trees and the exact `cl(H + Q⁺)` level via linear programs.
//!
//! Levels are written in block-sorted coordinates. For `H = {g ≥ 0}` with `g`
//! piecewise linear, the level of `cl(H + Q⁺)` is
//! `L(x) = sup { s : y + s·1 ≤ x, g(y) ≥ 0 }`, which splits into one LP per
//! disjunct of the min/max normal form of `g`. Restricting `y` to the sorted
//! chamber loses nothing since `y ≤ x` implies `sort(y) ≤ sort(x)`.

use super::lp::{maximize, LpResult};

use super::expr::{Expr, Part, Prim};
use super::point::{Layout, Pt};

/// `a·x + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Affine {
    pub a: Pt,
    pub b: f64,
}

impl Affine {
    fn unit(m: usize, i: usize) -> Affine {
        let mut a = Pt::zeros(m);
        a[i] = 1.0;
        Affine { a, b: 0.0 }
    }

    #[cfg(test)]
    pub fn eval(&self, x: &Pt) -> f64 {
        self.a.iter().zip(x.iter()).map(|(a, x)| a * x).sum::<f64>() + self.b
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Pl {
    Leaf(Affine),
    Min(Vec<Pl>),
    Max(Vec<Pl>),
    Top,
    Bottom,
}

impl Pl {
    fn map_leaves(self, f: &impl Fn(Affine) -> Affine) -> Pl {
        match self {
            Pl::Leaf(a) => Pl::Leaf(f(a)),
            Pl::Min(v) => Pl::Min(v.into_iter().map(|c| c.map_leaves(f)).collect()),
            Pl::Max(v) => Pl::Max(v.into_iter().map(|c| c.map_leaves(f)).collect()),
            t => t,
        }
    }

    fn swap_lattice(self) -> Pl {
        match self {
            Pl::Min(v) => Pl::Max(v.into_iter().map(Pl::swap_lattice).collect()),
            Pl::Max(v) => Pl::Min(v.into_iter().map(Pl::swap_lattice).collect()),
            Pl::Top => Pl::Bottom,
            Pl::Bottom => Pl::Top,
            leaf => leaf,
        }
    }

    #[cfg(test)]
    pub fn eval(&self, x: &Pt) -> f64 {
        match self {
            Pl::Leaf(a) => a.eval(x),
            Pl::Min(v) => v.iter().map(|c| c.eval(x)).fold(f64::INFINITY, f64::min),
            Pl::Max(v) => v.iter().map(|c| c.eval(x)).fold(f64::NEG_INFINITY, f64::max),
            Pl::Top => f64::INFINITY,
            Pl::Bottom => f64::NEG_INFINITY,
        }
    }
}

fn part_range(layout: Layout, n: usize, part: Part) -> Vec<(usize, usize)> {
    let blocks = layout.blocks(n);
    match part {
        Part::All => blocks,
        Part::A => vec![blocks[0]],
        Part::B => vec![blocks[1]],
    }
}

/// Compiles `expr` to a piecewise-linear tree, or `None` if some node is not
/// piecewise linear (products, nested sums with `P`).
pub(crate) fn compile(expr: &Expr, layout: Layout, n: usize) -> Option<Pl> {
    let leaf = |i: usize| Pl::Leaf(Affine::unit(n, i));
    Some(match expr {
        Expr::Prim { name, part } => {
            let ranges = part_range(layout, n, *part);
            match name {
                Prim::P => Pl::Min(ranges.iter().map(|&(lo, _)| leaf(lo)).collect()),
                Prim::Ptilde => Pl::Max(ranges.iter().map(|&(_, hi)| leaf(hi - 1)).collect()),
                Prim::Delta => {
                    let mut a = Pt::zeros(n);
                    let count: usize = ranges.iter().map(|(lo, hi)| hi - lo).sum();
                    for &(lo, hi) in &ranges {
                        for i in lo..hi {
                            a[i] = 1.0 / count as f64;
                        }
                    }
                    Pl::Leaf(Affine { a, b: 0.0 })
                }
                Prim::Scalar => {
                    let blocks = layout.blocks(n);
                    let mut terms = Vec::new();
                    for &(lo, _) in &blocks {
                        for &(_, hi) in &blocks {
                            let mut a = Pt::zeros(n);
                            a[lo] += 1.0;
                            a[hi - 1] -= 1.0;
                            terms.push(Pl::Leaf(Affine { a, b: 0.0 }));
                        }
                    }
                    Pl::Min(terms)
                }
                Prim::Empty => Pl::Bottom,
                Prim::Full => Pl::Top,
                Prim::Hyperbola | Prim::TwistedH | Prim::TwistedE | Prim::TwistedGt => return None,
            }
        }
        Expr::Shift { t, of } => {
            let t = *t;
            compile(of, layout, n)?.map_leaves(&|l| Affine {
                a: l.a,
                b: l.b - t * l.a.sum(),
            })
        }
        Expr::Negate { of } => compile(of, layout, n)?.map_leaves(&|l| Affine {
            a: layout.reflect(&l.a),
            b: l.b,
        }),
        Expr::Dual { of } => compile(of, layout, n)?
            .map_leaves(&|l| {
                let mut a = layout.reflect(&l.a);
                a.iter_mut().for_each(|v| *v = -*v);
                Affine { a, b: -l.b }
            })
            .swap_lattice(),
        Expr::Intersect { of } => Pl::Min(of.iter().map(|e| compile(e, layout, n)).collect::<Option<_>>()?),
        Expr::Union { of } => Pl::Max(of.iter().map(|e| compile(e, layout, n)).collect::<Option<_>>()?),
        Expr::AddP { .. } | Expr::SubP { .. } => return None,
    })
}

/// Disjunctive normal form: the set is the union over terms of the
/// intersection of `{leaf ≥ 0}`.
pub(crate) type Dnf = Vec<Vec<Affine>>;

const MAX_TERMS: usize = 4096;

pub(crate) fn dnf(pl: &Pl) -> Option<Dnf> {
    Some(match pl {
        Pl::Leaf(a) => vec![vec![*a]],
        Pl::Top => vec![vec![]],
        Pl::Bottom => vec![],
        Pl::Max(v) => {
            let mut out = Vec::new();
            for c in v {
                out.extend(dnf(c)?);
                if out.len() > MAX_TERMS {
                    return None;
                }
            }
            out
        }
        Pl::Min(v) => {
            let mut acc: Dnf = vec![vec![]];
            for c in v {
                let d = dnf(c)?;
                let mut next = Vec::with_capacity(acc.len() * d.len());
                for t in &acc {
                    for u in &d {
                        let mut w = t.clone();
                        w.extend(u.iter().copied());
                        next.push(w);
                    }
                }
                if next.len() > MAX_TERMS {
                    return None;
                }
                acc = next;
            }
            acc
        }
    })
}

/// `sup { s : y + s·1 ≤ x, y in the chamber, every literal ≥ 0 }`.
///
/// Returns `+∞` when unbounded and `−∞` when the term is empty.
pub(crate) fn term_value(term: &[Affine], x: &Pt, layout: Layout) -> f64 {
    let n = x.len();
    // Variables: (s, y_0, ..., y_{n-1}).
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        let mut r = vec![0.0; n + 1];
        r[0] = 1.0;
        r[i + 1] = 1.0;
        rows.push(r);
        rhs.push(x[i]);
    }
    for (lo, hi) in layout.blocks(n) {
        for j in lo..hi.saturating_sub(1) {
            let mut r = vec![0.0; n + 1];
            r[j + 1] = 1.0;
            r[j + 2] = -1.0;
            rows.push(r);
            rhs.push(0.0);
        }
    }
    for lit in term {
        if (0..n).all(|i| lit.a[i] == 0.0) {
            if lit.b < 0.0 {
                return f64::NEG_INFINITY;
            }
            continue;
        }
        let mut r = vec![0.0; n + 1];
        for i in 0..n {
            r[i + 1] = -lit.a[i];
        }
        rows.push(r);
        rhs.push(lit.b);
    }
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    match maximize(&c, &rows, &rhs) {
        LpResult::Optimal(v) => v,
        LpResult::Unbounded => f64::INFINITY,
        LpResult::Infeasible => f64::NEG_INFINITY,
    }
}

pub(crate) fn sum_level(terms: &Dnf, x: &Pt, layout: Layout) -> f64 {
    terms
        .iter()
        .map(|t| term_value(t, x, layout))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment() -> Expr {
        Expr::prim(Prim::Scalar)
            .intersect(Expr::prim(Prim::P).shift(-1.0))
            .intersect(Expr::prim(Prim::P).shift(-1.0).negate())
    }

    #[test]
    fn shift_and_negate_leaves() {
        let pl = compile(&Expr::prim(Prim::P).shift(-1.0).negate(), Layout::Full, 2).unwrap();
        // {x_max ≤ 1}
        assert_eq!(pl.eval(&Pt::from_slice(&[-3.0, 0.5])), 0.5);
        assert_eq!(pl.eval(&Pt::from_slice(&[-3.0, 2.0])), -1.0);
    }

    #[test]
    fn dual_of_p_is_ptilde() {
        let pl = compile(&Expr::prim(Prim::P).dual(), Layout::Full, 3).unwrap();
        let x = Pt::from_slice(&[-2.0, 0.0, 0.7]);
        assert_eq!(pl.eval(&x), 0.7);
    }

    #[test]
    fn segment_sum_is_shifted_cone() {
        let d = dnf(&compile(&segment(), Layout::Full, 2).unwrap()).unwrap();
        assert_eq!(d.len(), 1);
        for x in [[-1.0, 3.0], [0.5, 0.5], [-4.0, -2.0]] {
            let x = Pt::from_slice(&x);
            let v = sum_level(&d, &x, Layout::Full);
            assert!((v - (x[0] + 1.0)).abs() < 1e-9, "{x:?} -> {v}");
        }
    }

    #[test]
    fn traceless_sum_is_mean() {
        let h = Expr::prim(Prim::Delta).intersect(Expr::prim(Prim::Delta).negate());
        let d = dnf(&compile(&h, Layout::Full, 3).unwrap()).unwrap();
        let x = Pt::from_slice(&[-1.0, 0.25, 2.0]);
        assert!((sum_level(&d, &x, Layout::Full) - x.sum() / 3.0).abs() < 1e-9);
    }

    #[test]
    fn full_and_empty_terms() {
        let x = Pt::from_slice(&[0.0, 1.0]);
        assert_eq!(sum_level(&vec![vec![]], &x, Layout::Full), f64::INFINITY);
        assert_eq!(sum_level(&vec![], &x, Layout::Full), f64::NEG_INFINITY);
    }
}
