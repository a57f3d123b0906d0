use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::eval::{Lv, Node, Shape};
use super::expr::{Expr, Part, Prim};
use super::point::{Layout, Pt};
use crate::error::ConeError;
use crate::symmat::SymMat;
use crate::tol::Tolerances;

/// A closed subset of `Sym(ℝⁿ)` given by `{level ≥ 0}` on a spectrum layout.
///
/// Subequations, their boundaries and arbitrary closed sets such as the
/// hyperbola branch all use this one type; [`Subeq`] is an alias used where
/// positivity is expected.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub struct Set {
    n: usize,
    layout: Layout,
    expr: Expr,
    node: Arc<Node>,
}

pub type Subeq = Set;

#[derive(Serialize, Deserialize)]
struct SetRepr {
    n: usize,
    #[serde(default)]
    spectrum: Layout,
    expr: Expr,
}

impl TryFrom<SetRepr> for Set {
    type Error = ConeError;
    fn try_from(r: SetRepr) -> Result<Set, ConeError> {
        Set::new(r.n, r.spectrum, r.expr)
    }
}

impl From<Set> for SetRepr {
    fn from(s: Set) -> SetRepr {
        SetRepr {
            n: s.n,
            spectrum: s.layout,
            expr: s.expr,
        }
    }
}

/// Where a matrix sits relative to a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedVerdict {
    pub class: Class,
    pub margin: f64,
}

impl SignedVerdict {
    /// `Inside` or `Boundary`.
    pub fn holds(&self) -> bool {
        self.class != Class::Outside
    }
}

/// Whether a set's level is exact or involves a generic `cl(F + P)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    ClosedForm,
    Oracle,
}

fn validate(expr: &Expr, n: usize, layout: Layout) -> Result<(), ConeError> {
    let bad = |prim: Prim, reason: &str| ConeError::BadPrimitive {
        prim: prim.name().to_string(),
        reason: reason.to_string(),
    };
    match expr {
        Expr::Prim { name, part } => {
            if !Expr::part_is_valid(*name, *part) {
                return Err(bad(*name, "only p, ptilde and delta read a single block"));
            }
            if *part != Part::All && layout == Layout::Full {
                return Err(bad(*name, "block parts need a block layout"));
            }
            match name {
                Prim::Hyperbola if !(n == 2 && layout == Layout::Full) => {
                    Err(bad(*name, "defined for n = 2 with the full spectrum"))
                }
                Prim::TwistedH | Prim::TwistedE | Prim::TwistedGt if layout == Layout::Full => {
                    Err(bad(*name, "needs a block layout"))
                }
                _ => Ok(()),
            }
        }
        Expr::Dual { of } | Expr::Shift { of, .. } | Expr::Negate { of } | Expr::AddP { of } | Expr::SubP { of } => {
            if let Expr::Shift { t, .. } = expr {
                if !t.is_finite() {
                    return Err(ConeError::NonFinite);
                }
            }
            validate(of, n, layout)
        }
        Expr::Intersect { of } | Expr::Union { of } => {
            if of.is_empty() {
                return Err(ConeError::InvalidParameter("empty intersection or union".into()));
            }
            of.iter().try_for_each(|e| validate(e, n, layout))
        }
    }
}

impl Set {
    pub fn new(n: usize, layout: Layout, expr: Expr) -> Result<Set, ConeError> {
        layout.check(n)?;
        validate(&expr, n, layout)?;
        let node = Arc::new(Node::compile(&expr, layout, n));
        Ok(Set { n, layout, expr, node })
    }

    fn prim_set(n: usize, p: Prim) -> Set {
        Set::new(n, Layout::Full, Expr::prim(p)).expect("full-spectrum primitive")
    }

    /// `𝒫 = {A ≥ 0}`.
    pub fn p(n: usize) -> Set {
        Set::prim_set(n, Prim::P)
    }

    /// `𝒫̃ = {λ_max ≥ 0}`.
    pub fn ptilde(n: usize) -> Set {
        Set::prim_set(n, Prim::Ptilde)
    }

    /// `Δ = {tr A ≥ 0}`.
    pub fn delta(n: usize) -> Set {
        Set::prim_set(n, Prim::Delta)
    }

    pub fn empty(n: usize) -> Set {
        Set::prim_set(n, Prim::Empty)
    }

    pub fn full(n: usize) -> Set {
        Set::prim_set(n, Prim::Full)
    }

    /// Multiples of the identity.
    pub fn scalar(n: usize) -> Set {
        Set::prim_set(n, Prim::Scalar)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn kind(&self) -> SetKind {
        if self.node.is_oracle() {
            SetKind::Oracle
        } else {
            SetKind::ClosedForm
        }
    }

    pub fn is_empty_sentinel(&self) -> bool {
        self.expr.is_empty_sentinel()
    }

    pub fn is_full_sentinel(&self) -> bool {
        self.expr.is_full_sentinel()
    }

    pub fn is_sentinel(&self) -> bool {
        self.is_empty_sentinel() || self.is_full_sentinel()
    }

    fn with_expr(&self, expr: Expr) -> Set {
        Set::new(self.n, self.layout, expr).expect("combinator of a valid set")
    }

    /// Dirichlet dual `∼(−Int F)`.
    pub fn dual(&self) -> Set {
        self.with_expr(self.expr.clone().dual())
    }

    /// `F + t·I`.
    pub fn shift(&self, t: f64) -> Set {
        self.with_expr(self.expr.clone().shift(t))
    }

    /// `−F`.
    pub fn negate(&self) -> Set {
        self.with_expr(self.expr.clone().negate())
    }

    fn binary(&self, other: &Set, f: fn(Expr, Expr) -> Expr) -> Result<Set, ConeError> {
        if self.n != other.n {
            return Err(ConeError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let layout = if self.layout == other.layout || other.is_sentinel() {
            self.layout
        } else if self.is_sentinel() {
            other.layout
        } else {
            return Err(ConeError::LayoutMismatch);
        };
        Set::new(self.n, layout, f(self.expr.clone(), other.expr.clone()))
    }

    pub fn intersect(&self, other: &Set) -> Result<Set, ConeError> {
        self.binary(other, Expr::intersect)
    }

    pub fn union(&self, other: &Set) -> Result<Set, ConeError> {
        self.binary(other, Expr::union)
    }

    /// `cl(F + 𝒫)`.
    pub fn add_p(&self) -> Set {
        self.with_expr(self.expr.clone().add_p())
    }

    /// `cl(F − 𝒫)`.
    pub fn sub_p(&self) -> Set {
        self.with_expr(self.expr.clone().sub_p())
    }

    pub(crate) fn shape(&self) -> Shape {
        self.node.shape()
    }

    pub(crate) fn uses_search(&self) -> bool {
        self.node.uses_search()
    }

    pub(crate) fn level_lv(&self, x: &Pt) -> Lv {
        self.node.eval(x, self.layout)
    }

    /// Level at a spectrum vector, sorted within blocks first.
    pub fn level_at(&self, x: &[f64]) -> f64 {
        let mut p = Pt::from_slice(x);
        self.layout.sort(&mut p);
        self.level_lv(&p).v
    }

    pub fn level(&self, a: &SymMat) -> Result<f64, ConeError> {
        self.check_dim(a.n())?;
        Ok(self.level_lv(&self.layout.spectrum(a)).v)
    }

    fn check_dim(&self, n: usize) -> Result<(), ConeError> {
        if n != self.n {
            return Err(ConeError::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }

    pub(crate) fn verdict_at(&self, x: &Pt, tau: f64) -> Result<SignedVerdict, ConeError> {
        let l = self.level_lv(x);
        if l.err > 0.0 && l.v.abs() <= l.err + tau {
            return Err(ConeError::Indeterminate(format!(
                "level {:.3e} is within the search resolution {:.1e}",
                l.v, l.err
            )));
        }
        let class = if l.v.abs() <= tau {
            Class::Boundary
        } else if l.v > 0.0 {
            Class::Inside
        } else {
            Class::Outside
        };
        Ok(SignedVerdict { class, margin: l.v })
    }

    /// Membership with the default `τ_member`.
    pub fn member(&self, a: &SymMat) -> Result<SignedVerdict, ConeError> {
        self.member_with(a, Tolerances::default().member)
    }

    pub fn member_with(&self, a: &SymMat, tau: f64) -> Result<SignedVerdict, ConeError> {
        self.check_dim(a.n())?;
        self.verdict_at(&self.layout.spectrum(a), tau)
    }

    /// Membership of a spectrum vector (sorted within blocks first).
    pub fn member_vec(&self, x: &[f64], tau: f64) -> Result<SignedVerdict, ConeError> {
        self.check_dim(x.len())?;
        let mut p = Pt::from_slice(x);
        self.layout.sort(&mut p);
        self.verdict_at(&p, tau)
    }
}

impl fmt::Display for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

impl fmt::Debug for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Set")
            .field("n", &self.n)
            .field("layout", &self.layout)
            .field("expr", &self.expr.to_string())
            .finish()
    }
}

impl PartialEq for Set {
    /// Syntactic equality of the defining expression.
    fn eq(&self, other: &Set) -> bool {
        self.n == other.n && self.layout == other.layout && self.expr == other.expr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> SymMat {
        SymMat::diag(v)
    }

    #[test]
    fn basic_membership() {
        assert_eq!(Set::p(2).member(&SymMat::identity(2)).unwrap().class, Class::Inside);
        assert_eq!(Set::delta(2).member(&d(&[1.0, -1.0])).unwrap().class, Class::Boundary);
        assert_eq!(Set::p(3).member(&d(&[-1.0, 2.0, 2.0])).unwrap().class, Class::Outside);
    }

    #[test]
    fn dimension_is_checked() {
        assert!(matches!(
            Set::p(2).member(&SymMat::identity(3)),
            Err(ConeError::DimensionMismatch { .. })
        ));
        assert!(Set::p(2).intersect(&Set::p(3)).is_err());
    }

    #[test]
    fn bad_primitives_are_rejected() {
        assert!(Set::new(3, Layout::Full, Expr::prim(Prim::Hyperbola)).is_err());
        assert!(Set::new(2, Layout::Full, Expr::prim(Prim::TwistedH)).is_err());
        assert!(Set::new(2, Layout::Full, Expr::prim_on(Prim::P, Part::A)).is_err());
        assert!(Set::new(3, Layout::Block { k: 1, l: 1 }, Expr::prim(Prim::P)).is_err());
    }

    #[test]
    fn negate_is_an_involution() {
        let s = Set::p(2).shift(-1.0).intersect(&Set::delta(2)).unwrap();
        let nn = s.negate().negate();
        for a in [d(&[-0.5, 2.0]), d(&[-2.0, 3.0]), d(&[0.1, -0.1])] {
            assert_eq!(nn.level(&a).unwrap(), s.level(&a).unwrap());
        }
    }

    #[test]
    fn json_round_trip() {
        let s = Set::p(2).shift(-1.0).dual();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"n":2,"spectrum":{"kind":"full"},"expr":{"op":"dual","of":{"op":"shift","t":-1.0,"of":{"op":"prim","name":"p"}}}}"#
        );
        let back: Set = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Set>(r#"{"n":3,"expr":{"op":"prim","name":"hyperbola"}}"#).is_err());
    }

    #[test]
    fn segment_sum_is_shifted_cone() {
        // cl({tI : |t| ≤ 1} + P) = {A ≥ −I}
        let seg = Set::scalar(2)
            .intersect(&Set::p(2).shift(-1.0))
            .unwrap()
            .intersect(&Set::p(2).shift(-1.0).negate())
            .unwrap();
        let e = seg.add_p();
        assert_eq!(e.kind(), SetKind::Oracle);
        for a in [d(&[-1.0, 4.0]), d(&[-2.0, 0.0]), d(&[0.3, 0.3])] {
            let want = a.eigenvalues()[0] + 1.0;
            assert!((e.level(&a).unwrap() - want).abs() < 1e-9);
        }
    }
}
