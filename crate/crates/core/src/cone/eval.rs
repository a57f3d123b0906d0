//! Compiled level functions.

use super::expr::{Expr, Part, Prim};
use super::pl::{self, Dnf};
use super::point::{Layout, Pt};

/// How a level responds to `x ↦ x + t·1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    /// `g(x + t) = g(x) + t`.
    Equi,
    /// `g(x + t) = g(x) − t`.
    Anti,
    /// `g(x + t) = g(x)`.
    Invariant,
    /// Constant `±∞`; compatible with every shape.
    Const,
    Other,
}

impl Shape {
    fn join(self, other: Shape) -> Shape {
        match (self, other) {
            (Shape::Const, s) | (s, Shape::Const) => s,
            (a, b) if a == b => a,
            _ => Shape::Other,
        }
    }

    fn negated(self) -> Shape {
        match self {
            Shape::Equi => Shape::Anti,
            Shape::Anti => Shape::Equi,
            s => s,
        }
    }
}

/// How `cl(F + P)` is evaluated.
#[derive(Clone, Debug)]
pub(crate) enum SumRule {
    /// Closed form substituted for a known inner set.
    Exact(Box<Node>),
    /// One linear program per disjunct.
    Lp(Dnf),
    /// Maximum of the inner level over the down-box `[x − reach·1, x]`.
    Search { inner: Box<Node>, reach: f64 },
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Prim(Prim, Part),
    Shift(f64, Box<Node>),
    Negate(Box<Node>),
    Dual(Box<Node>),
    Min(Vec<Node>),
    Max(Vec<Node>),
    AddP(SumRule),
}

/// Resolution reported by the down-box search.
pub(crate) const SEARCH_RESOLUTION: f64 = 1e-4;

/// A level value with an error bound (zero unless a search was involved).
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Lv {
    pub v: f64,
    pub err: f64,
}

fn exact_sum(inner: &Expr) -> Option<Expr> {
    let strip = |e: &Expr| match e {
        Expr::Negate { of } => Some((true, (**of).clone())),
        e => Some((false, e.clone())),
    };
    let (neg, base) = strip(inner)?;
    match (neg, base) {
        // The hyperbola branch is symmetric under negation.
        (_, Expr::Prim { name: Prim::Hyperbola, .. }) => Some(Expr::prim(Prim::Ptilde)),
        (false, Expr::Prim { name: Prim::TwistedH, .. }) => Some(Expr::prim(Prim::TwistedE)),
        (true, Expr::Prim { name: Prim::TwistedH, .. }) => Some(Expr::prim(Prim::TwistedGt)),
        _ => None,
    }
}

impl Node {
    pub fn compile(expr: &Expr, layout: Layout, n: usize) -> Node {
        match expr {
            Expr::Prim { name, part } => Node::Prim(*name, *part),
            Expr::Shift { t, of } => Node::Shift(*t, Box::new(Node::compile(of, layout, n))),
            Expr::Negate { of } => Node::Negate(Box::new(Node::compile(of, layout, n))),
            Expr::Dual { of } => Node::Dual(Box::new(Node::compile(of, layout, n))),
            Expr::Intersect { of } => Node::Min(of.iter().map(|e| Node::compile(e, layout, n)).collect()),
            Expr::Union { of } => Node::Max(of.iter().map(|e| Node::compile(e, layout, n)).collect()),
            Expr::AddP { of } => Node::AddP(Node::sum_rule(of, layout, n)),
            Expr::SubP { of } => {
                let inner = (**of).clone().negate();
                Node::Negate(Box::new(Node::AddP(Node::sum_rule(&inner, layout, n))))
            }
        }
    }

    fn sum_rule(inner: &Expr, layout: Layout, n: usize) -> SumRule {
        if let Some(e) = exact_sum(inner) {
            return SumRule::Exact(Box::new(Node::compile(&e, layout, n)));
        }
        if let Some(terms) = pl::compile(inner, layout, n).and_then(|p| pl::dnf(&p)) {
            return SumRule::Lp(terms);
        }
        SumRule::Search {
            inner: Box::new(Node::compile(inner, layout, n)),
            reach: 4.0 * inner.scale(),
        }
    }

    /// True when some `cl(F + P)` is computed generically rather than by a closed form.
    pub fn is_oracle(&self) -> bool {
        match self {
            Node::Prim(..) => false,
            Node::Shift(_, c) | Node::Negate(c) | Node::Dual(c) => c.is_oracle(),
            Node::Min(v) | Node::Max(v) => v.iter().any(Node::is_oracle),
            Node::AddP(SumRule::Exact(c)) => c.is_oracle(),
            Node::AddP(_) => true,
        }
    }

    pub fn uses_search(&self) -> bool {
        match self {
            Node::Prim(..) => false,
            Node::Shift(_, c) | Node::Negate(c) | Node::Dual(c) => c.uses_search(),
            Node::Min(v) | Node::Max(v) => v.iter().any(Node::uses_search),
            Node::AddP(SumRule::Exact(c)) => c.uses_search(),
            Node::AddP(SumRule::Lp(_)) => false,
            Node::AddP(SumRule::Search { .. }) => true,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Node::Prim(p, _) => match p {
                Prim::P | Prim::Ptilde | Prim::Delta => Shape::Equi,
                Prim::Empty | Prim::Full => Shape::Const,
                Prim::Scalar => Shape::Invariant,
                _ => Shape::Other,
            },
            Node::Shift(_, c) | Node::Dual(c) => c.shape(),
            Node::Negate(c) => c.shape().negated(),
            Node::Min(v) | Node::Max(v) => v.iter().fold(Shape::Const, |s, c| s.join(c.shape())),
            Node::AddP(SumRule::Search { .. }) => Shape::Other,
            // sup over H of min(x − y) commutes with diagonal translation.
            Node::AddP(_) => Shape::Equi,
        }
    }

    /// Level at a block-sorted point.
    pub fn eval(&self, x: &Pt, layout: Layout) -> Lv {
        match self {
            Node::Prim(p, part) => Lv {
                v: prim_level(*p, *part, x, layout),
                err: 0.0,
            },
            Node::Shift(t, c) => c.eval(&x.shifted(-t), layout),
            Node::Negate(c) => c.eval(&layout.reflect(x), layout),
            Node::Dual(c) => {
                let l = c.eval(&layout.reflect(x), layout);
                Lv { v: -l.v, err: l.err }
            }
            Node::Min(v) => v.iter().fold(
                Lv {
                    v: f64::INFINITY,
                    err: 0.0,
                },
                |acc, c| {
                    let l = c.eval(x, layout);
                    Lv {
                        v: acc.v.min(l.v),
                        err: acc.err.max(l.err),
                    }
                },
            ),
            Node::Max(v) => v.iter().fold(
                Lv {
                    v: f64::NEG_INFINITY,
                    err: 0.0,
                },
                |acc, c| {
                    let l = c.eval(x, layout);
                    Lv {
                        v: acc.v.max(l.v),
                        err: acc.err.max(l.err),
                    }
                },
            ),
            Node::AddP(SumRule::Exact(c)) => c.eval(x, layout),
            Node::AddP(SumRule::Lp(terms)) => Lv {
                v: pl::sum_level(terms, x, layout),
                err: 0.0,
            },
            Node::AddP(SumRule::Search { inner, reach }) => down_box_max(inner, x, layout, *reach),
        }
    }
}

fn range(layout: Layout, n: usize, part: Part) -> Vec<(usize, usize)> {
    let b = layout.blocks(n);
    match part {
        Part::All => b,
        Part::A => vec![b[0]],
        Part::B => vec![b[1]],
    }
}

fn prim_level(p: Prim, part: Part, x: &Pt, layout: Layout) -> f64 {
    let n = x.len();
    let coords = || range(layout, n, part).into_iter().flat_map(|(lo, hi)| lo..hi).map(|i| x[i]);
    match p {
        Prim::P => coords().fold(f64::INFINITY, f64::min),
        Prim::Ptilde => coords().fold(f64::NEG_INFINITY, f64::max),
        Prim::Delta => {
            let (s, c) = coords().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
            s / c as f64
        }
        Prim::Empty => f64::NEG_INFINITY,
        Prim::Full => f64::INFINITY,
        Prim::Scalar => x.min() - x.max(),
        Prim::Hyperbola => -(x[0] * x[1] + 1.0).abs(),
        Prim::TwistedH | Prim::TwistedE | Prim::TwistedGt => {
            let k = match layout {
                Layout::Block { k, .. } => k,
                Layout::Full => unreachable!("twisted primitives are validated to use block layouts"),
            };
            let (a, b) = (&x[..k], &x[k..]);
            let min = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
            let max = |s: &[f64]| s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let pos = |s: &[f64]| s.iter().map(|v| v.max(0.0)).product::<f64>();
            let neg = |s: &[f64]| s.iter().map(|v| v.min(0.0).abs()).product::<f64>();
            match p {
                Prim::TwistedH => {
                    let prod: f64 = a.iter().product();
                    let diff = prod - b.iter().product::<f64>().abs();
                    min(a).min(-max(b)).min(-diff.abs())
                }
                Prim::TwistedE => min(a).min(max(b).max(pos(a) - neg(b))),
                _ => min(b).min(max(a).max(pos(b) - neg(a))),
            }
        }
    }
}

/// `max g(y)` over `y ∈ [x − reach·1, x]`: a coarse grid followed by
/// compass refinement from the best cells.
fn down_box_max(inner: &Node, x: &Pt, layout: Layout, reach: f64) -> Lv {
    let n = x.len();
    let per_axis: usize = match n {
        1 => 65,
        2 => 33,
        3 => 13,
        _ => 7,
    };
    let eval = |y: &Pt| {
        let mut s = *y;
        layout.sort(&mut s);
        inner.eval(&s, layout)
    };
    let mut best: Vec<(f64, Pt)> = Vec::new();
    let total = per_axis.pow(n as u32);
    let step = reach / (per_axis - 1) as f64;
    let mut err = 0.0_f64;
    for idx in 0..total {
        let mut y = *x;
        let mut r = idx;
        for yi in y.iter_mut() {
            *yi -= step * (r % per_axis) as f64;
            r /= per_axis;
        }
        let l = eval(&y);
        err = err.max(l.err);
        best.push((l.v, y));
    }
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    best.truncate(4);
    let mut top = f64::NEG_INFINITY;
    for (mut v, mut y) in best {
        let mut h = step;
        while h > 1e-9 * reach.max(1.0) {
            let mut moved = false;
            for i in 0..n {
                for dir in [-1.0, 1.0] {
                    let mut z = y;
                    z[i] = (z[i] + dir * h).clamp(x[i] - reach, x[i]);
                    let l = eval(&z);
                    if l.v > v {
                        v = l.v;
                        y = z;
                        moved = true;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        top = top.max(v);
    }
    Lv {
        v: top,
        err: err.max(SEARCH_RESOLUTION),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(e: &Expr, x: &[f64]) -> f64 {
        Node::compile(e, Layout::Full, x.len()).eval(&Pt::from_slice(x), Layout::Full).v
    }

    #[test]
    fn primitives() {
        assert_eq!(lv(&Expr::prim(Prim::P), &[-1.0, 2.0]), -1.0);
        assert_eq!(lv(&Expr::prim(Prim::Ptilde), &[-1.0, 2.0]), 2.0);
        assert_eq!(lv(&Expr::prim(Prim::Delta), &[-1.0, 2.0]), 0.5);
        assert_eq!(lv(&Expr::prim(Prim::Hyperbola), &[-1.0, 1.0]), 0.0);
    }

    #[test]
    fn shift_moves_the_set() {
        // P − I = {λ_min ≥ −1}
        assert_eq!(lv(&Expr::prim(Prim::P).shift(-1.0), &[-1.0, 5.0]), 0.0);
    }

    #[test]
    fn dual_of_p_reads_max() {
        assert_eq!(lv(&Expr::prim(Prim::P).dual(), &[-3.0, 0.25]), 0.25);
    }

    #[test]
    fn shapes() {
        let c = |e: &Expr| Node::compile(e, Layout::Full, 2).shape();
        assert_eq!(c(&Expr::prim(Prim::P).shift(2.0).dual()), Shape::Equi);
        assert_eq!(c(&Expr::prim(Prim::P).negate()), Shape::Anti);
        assert_eq!(c(&Expr::prim(Prim::Scalar).intersect(Expr::prim(Prim::P))), Shape::Other);
        assert_eq!(c(&Expr::prim(Prim::Scalar).add_p()), Shape::Equi);
    }

    #[test]
    fn search_agrees_with_lp_on_a_halfspace() {
        let h = Expr::prim(Prim::Delta).intersect(Expr::prim(Prim::Delta).negate());
        let node = Node::compile(&h, Layout::Full, 2);
        let x = Pt::from_slice(&[-0.3, 0.8]);
        let l = down_box_max(&node, &x, Layout::Full, 4.0);
        // The band {tr = 0} meets the box, so the maximum of −|mean| is 0.
        assert!(l.v.abs() < 1e-6, "{:?}", l);
    }
}
