//! Combinator trees describing sets at the eigenvalue level.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Which coordinates of the spectrum a primitive reads.
///
/// Under a block spectrum `(k, ℓ)`, `A` is the first `k` coordinates (the
/// eigenvalues of the leading block) and `B` the trailing `ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    #[default]
    All,
    A,
    B,
}

impl Part {
    fn is_all(&self) -> bool {
        *self == Part::All
    }
}

/// Named building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prim {
    /// `{λ_min ≥ 0}`, the convexity cone.
    P,
    /// `{λ_max ≥ 0}`, the subaffine subequation.
    Ptilde,
    /// `{tr ≥ 0}`.
    Delta,
    /// The empty set.
    Empty,
    /// Everything.
    Full,
    /// Multiples of the identity, `{λ_min = λ_max}`. A closed set, not a subequation.
    Scalar,
    /// `{λ₁λ₂ = −1}` in dimension two (the branch with `λ₁ < 0 < λ₂`).
    Hyperbola,
    /// `{x ∈ Q⁺, y ∈ Q⁻, ∏x = |∏y|}` on block spectra.
    TwistedH,
    /// `{x ∈ Q⁺, y ∈ (∼Q⁻) ∪ {|∏y| ≤ ∏x}}` on block spectra.
    TwistedE,
    /// `{y ∈ Q⁺, x ∈ (∼Q⁻) ∪ {|∏x| ≤ ∏y}}` on block spectra.
    TwistedGt,
}

impl Prim {
    pub fn name(&self) -> &'static str {
        match self {
            Prim::P => "p",
            Prim::Ptilde => "ptilde",
            Prim::Delta => "delta",
            Prim::Empty => "empty",
            Prim::Full => "full",
            Prim::Scalar => "scalar",
            Prim::Hyperbola => "hyperbola",
            Prim::TwistedH => "twisted_h",
            Prim::TwistedE => "twisted_e",
            Prim::TwistedGt => "twisted_gt",
        }
    }

    fn takes_part(&self) -> bool {
        matches!(self, Prim::P | Prim::Ptilde | Prim::Delta)
    }
}

/// A set expression. The JSON form is tagged by `op`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    Prim {
        name: Prim,
        #[serde(default, skip_serializing_if = "Part::is_all")]
        part: Part,
    },
    /// Dirichlet dual `∼(−Int F)`.
    Dual { of: Box<Expr> },
    /// `F + t·I`.
    Shift { t: f64, of: Box<Expr> },
    /// `−F`.
    Negate { of: Box<Expr> },
    Intersect { of: Vec<Expr> },
    Union { of: Vec<Expr> },
    /// `closure(F + P)`.
    #[serde(rename = "addP")]
    AddP { of: Box<Expr> },
    /// `closure(F − P)`.
    #[serde(rename = "subP")]
    SubP { of: Box<Expr> },
}

impl Expr {
    pub fn prim(name: Prim) -> Expr {
        Expr::Prim {
            name,
            part: Part::All,
        }
    }

    pub fn prim_on(name: Prim, part: Part) -> Expr {
        Expr::Prim { name, part }
    }

    pub fn is_empty_sentinel(&self) -> bool {
        matches!(self, Expr::Prim { name: Prim::Empty, .. })
    }

    pub fn is_full_sentinel(&self) -> bool {
        matches!(self, Expr::Prim { name: Prim::Full, .. })
    }

    pub fn dual(self) -> Expr {
        match self {
            e if e.is_empty_sentinel() => Expr::prim(Prim::Full),
            e if e.is_full_sentinel() => Expr::prim(Prim::Empty),
            e => Expr::Dual { of: Box::new(e) },
        }
    }

    pub fn shift(self, t: f64) -> Expr {
        if self.is_empty_sentinel() || self.is_full_sentinel() || t == 0.0 {
            return self;
        }
        Expr::Shift {
            t,
            of: Box::new(self),
        }
    }

    pub fn negate(self) -> Expr {
        if self.is_empty_sentinel() || self.is_full_sentinel() {
            return self;
        }
        Expr::Negate { of: Box::new(self) }
    }

    pub fn intersect(self, other: Expr) -> Expr {
        if self.is_empty_sentinel() || other.is_full_sentinel() {
            return self;
        }
        if other.is_empty_sentinel() || self.is_full_sentinel() {
            return other;
        }
        let mut of = Vec::new();
        for e in [self, other] {
            match e {
                Expr::Intersect { of: inner } => of.extend(inner),
                e => of.push(e),
            }
        }
        Expr::Intersect { of }
    }

    pub fn union(self, other: Expr) -> Expr {
        if self.is_full_sentinel() || other.is_empty_sentinel() {
            return self;
        }
        if other.is_full_sentinel() || self.is_empty_sentinel() {
            return other;
        }
        let mut of = Vec::new();
        for e in [self, other] {
            match e {
                Expr::Union { of: inner } => of.extend(inner),
                e => of.push(e),
            }
        }
        Expr::Union { of }
    }

    pub fn add_p(self) -> Expr {
        if self.is_empty_sentinel() || self.is_full_sentinel() {
            return self;
        }
        Expr::AddP { of: Box::new(self) }
    }

    pub fn sub_p(self) -> Expr {
        if self.is_empty_sentinel() || self.is_full_sentinel() {
            return self;
        }
        Expr::SubP { of: Box::new(self) }
    }

    /// Largest absolute shift in the tree plus one; sets the sampling radius.
    pub fn scale(&self) -> f64 {
        fn walk(e: &Expr) -> f64 {
            match e {
                Expr::Prim { .. } => 0.0,
                Expr::Shift { t, of } => t.abs() + walk(of),
                Expr::Dual { of } | Expr::Negate { of } | Expr::AddP { of } | Expr::SubP { of } => {
                    walk(of)
                }
                Expr::Intersect { of } | Expr::Union { of } => {
                    of.iter().map(walk).fold(0.0, f64::max)
                }
            }
        }
        1.0 + walk(self)
    }

    pub(crate) fn part_is_valid(name: Prim, part: Part) -> bool {
        part == Part::All || name.takes_part()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Prim { name, part } => {
                let base = match name {
                    Prim::P => "P",
                    Prim::Ptilde => "P~",
                    Prim::Delta => "Delta",
                    Prim::Empty => "EMPTY",
                    Prim::Full => "FULL",
                    Prim::Scalar => "Scalar",
                    Prim::Hyperbola => "Hyperbola",
                    Prim::TwistedH => "TwistedH",
                    Prim::TwistedE => "TwistedE",
                    Prim::TwistedGt => "TwistedG~",
                };
                match part {
                    Part::All => write!(f, "{base}"),
                    Part::A => write!(f, "{base}[a]"),
                    Part::B => write!(f, "{base}[b]"),
                }
            }
            Expr::Dual { of } => write!(f, "dual({of})"),
            Expr::Shift { t, of } => {
                if *t < 0.0 {
                    write!(f, "({of} - {}I)", -t)
                } else {
                    write!(f, "({of} + {t}I)")
                }
            }
            Expr::Negate { of } => write!(f, "-({of})"),
            Expr::Intersect { of } => join(f, of, " ∩ "),
            Expr::Union { of } => join(f, of, " ∪ "),
            Expr::AddP { of } => write!(f, "cl({of} + P)"),
            Expr::SubP { of } => write!(f, "cl({of} - P)"),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, of: &[Expr], sep: &str) -> fmt::Result {
    write!(f, "(")?;
    for (i, e) in of.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let e = Expr::prim(Prim::P).shift(-1.0).dual();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"op":"dual","of":{"op":"shift","t":-1.0,"of":{"op":"prim","name":"p"}}}"#);
        let back: Expr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        let a = Expr::prim_on(Prim::P, Part::A).add_p();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"op":"addP","of":{"op":"prim","name":"p","part":"a"}}"#);
    }

    #[test]
    fn sentinels_simplify() {
        assert!(Expr::prim(Prim::Empty).dual().is_full_sentinel());
        assert!(Expr::prim(Prim::Full).dual().is_empty_sentinel());
        let p = Expr::prim(Prim::P);
        assert_eq!(p.clone().intersect(Expr::prim(Prim::Full)), p);
        assert!(p.clone().intersect(Expr::prim(Prim::Empty)).is_empty_sentinel());
        assert!(p.union(Expr::prim(Prim::Full)).is_full_sentinel());
    }

    #[test]
    fn display_is_readable() {
        let e = Expr::prim(Prim::Delta).intersect(Expr::prim(Prim::P).shift(-2.0));
        assert_eq!(e.to_string(), "(Delta ∩ (P - 2I))");
    }
}
