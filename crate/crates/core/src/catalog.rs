//! Worked examples with exact closed forms.

use serde::{Deserialize, Serialize};

use crate::cone::{Expr, Layout, Part, Prim, Set};
use crate::error::ConeError;
use crate::ge::{diamond, GenEq, TypeLabel};

/// Parameters accepted by the catalog constructors. Unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    /// `E,G` names for the elementary pairs, e.g. `ptilde,p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    /// A cone name: `p`, `ptilde` or `delta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
}

/// Exact `E_min`, `G_max` and `G̃_max`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedForms {
    pub e_min: Set,
    pub g_max: Set,
    pub g_tilde_max: Set,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Params,
    pub summary: String,
    /// The closed set itself.
    pub h: Set,
    /// The presentation `(E, G)`; the diamond's canonical pair when `h` is not
    /// a generalized equation.
    pub ge: GenEq,
    pub closed_forms: Option<ClosedForms>,
    /// Whether `h` is a generalized equation (so `ge` presents it exactly).
    pub is_ge: bool,
    /// Type of `ge`, when known independently of the classifier.
    pub expected_type: Option<TypeLabel>,
}

/// Names accepted by [`lookup`], with one-line descriptions.
pub const NAMES: &[(&str, &str)] = &[
    ("constrained-laplacian", "{tr A = 0, -rI <= A <= rI} (--r, --n)"),
    ("quasi-band", "(P - r1 I) ∩ (-P + r2 I) (--r1 --r2 or --lambda, --n)"),
    ("subaffine-band", "(P~ - r1 I) ∩ (-P~ + r2 I) (--r1 --r2 or --lambda, --n)"),
    ("band-intersection", "quasi band ∩ its mirror: lambda_min = -lambda, lambda_max = lambda (--lambda, --n)"),
    ("twisted-ma", "universal twisted Monge-Ampere set x >= 0, y <= 0, prod x = |prod y| (--k, --l)"),
    ("split-constrained", "{tr A = 0, a >= 0, b <= 0} on a block split (--k, --l)"),
    ("segment", "{t I : -1 <= t <= 1} (--n)"),
    ("segment-or-traceless", "{tr A = 0} ∪ {t I : -1 <= t <= 1} (--n)"),
    ("hyperbola", "{l1 l2 = -1, l1 < 0 < l2}, n = 2; not a generalized equation"),
    ("affine", "(P, P~): H = {0} (--n)"),
    ("elementary", "pairs from P and P~ (--pair e,g with e, g in {p, ptilde}; --n)"),
    ("separate-convexity", "E = {a >= 0}, G~ = {b >= 0} on a block split (--k, --l)"),
    ("determined", "(F, F) for F in {p, ptilde, delta} (--f, --n)"),
    ("subequation-as-ge", "(F, EMPTY): H = F (--f, --n)"),
    ("boundary", "the set dF with its pair (F, F) (--f, --n)"),
];

fn dim(p: &Params, default: usize) -> Result<usize, ConeError> {
    let n = p.n.unwrap_or(default);
    if !(2..=4).contains(&n) {
        return Err(ConeError::UnsupportedDimension(n));
    }
    Ok(n)
}

fn cone(name: &str, n: usize) -> Result<Set, ConeError> {
    match name {
        "p" => Ok(Set::p(n)),
        "ptilde" => Ok(Set::ptilde(n)),
        "delta" => Ok(Set::delta(n)),
        other => Err(ConeError::InvalidParameter(format!(
            "unknown cone `{other}` (expected p, ptilde or delta)"
        ))),
    }
}

fn nonneg(name: &str, v: f64) -> Result<f64, ConeError> {
    if !v.is_finite() || v < 0.0 {
        return Err(ConeError::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(v)
}

fn split(p: &Params) -> Result<(usize, usize, Layout), ConeError> {
    let k = p.k.unwrap_or(1);
    let l = p.l.unwrap_or(1);
    let layout = Layout::Block { k, l };
    layout.check(k + l)?;
    Ok((k, l, layout))
}

fn both(a: Result<Set, ConeError>, b: Result<Set, ConeError>) -> Result<(Set, Set), ConeError> {
    Ok((a?, b?))
}

/// The set `{tr A = 0, −rI ≤ A ≤ rI}`.
pub fn constrained_laplacian(r: f64, n: usize) -> Result<CatalogEntry, ConeError> {
    let r = nonneg("r", r)?;
    let delta = Set::delta(n);
    let cap = Set::p(n).shift(-r);
    let h = delta
        .intersect(&delta.negate())?
        .intersect(&cap)?
        .intersect(&cap.negate())?;
    let e_min = delta.intersect(&cap)?;
    let g_max = e_min.dual();
    Ok(CatalogEntry {
        name: "constrained-laplacian".into(),
        params: Params {
            r: Some(r),
            n: Some(n),
            ..Params::default()
        },
        summary: format!("traceless matrices with eigenvalues in [-{r}, {r}]"),
        h,
        ge: GenEq::new(e_min.clone(), g_max.clone())?,
        closed_forms: Some(ClosedForms {
            e_min: e_min.clone(),
            g_max,
            g_tilde_max: e_min,
        }),
        is_ge: true,
        expected_type: Some(TypeLabel::II),
    })
}

/// `(P − r₁I) ∩ (−P + r₂I)`: functions that are `r₁`-quasiconvex and `r₂`-quasiconcave.
pub fn quasi_band(r1: f64, r2: f64, n: usize) -> Result<CatalogEntry, ConeError> {
    if !(r1.is_finite() && r2.is_finite()) || -r1 > r2 {
        return Err(ConeError::InvalidParameter(format!("need -r1 <= r2, got r1 = {r1}, r2 = {r2}")));
    }
    let e = Set::p(n).shift(-r1);
    let gt = Set::p(n).shift(-r2);
    let h = e.intersect(&gt.negate())?;
    Ok(CatalogEntry {
        name: "quasi-band".into(),
        params: Params {
            r1: Some(r1),
            r2: Some(r2),
            n: Some(n),
            ..Params::default()
        },
        summary: format!("-{r1} I <= A <= {r2} I"),
        h,
        ge: GenEq::new(e.clone(), gt.dual())?,
        closed_forms: Some(ClosedForms {
            e_min: e,
            g_max: gt.dual(),
            g_tilde_max: gt,
        }),
        is_ge: true,
        expected_type: Some(if r1 + r2 > 0.0 { TypeLabel::IV } else { TypeLabel::II }),
    })
}

/// `(P̃ − r₁I) ∩ (−P̃ + r₂I)`: quasi-subaffine and quasi-superaffine functions.
///
/// `subaffine_band(−λ, −λ)` is the mirror of `quasi_band(λ, λ)`.
pub fn subaffine_band(r1: f64, r2: f64, n: usize) -> Result<CatalogEntry, ConeError> {
    if !(r1.is_finite() && r2.is_finite()) {
        return Err(ConeError::NonFinite);
    }
    let e = Set::ptilde(n).shift(-r1);
    let gt = Set::ptilde(n).shift(-r2);
    let h = e.intersect(&gt.negate())?;
    Ok(CatalogEntry {
        name: "subaffine-band".into(),
        params: Params {
            r1: Some(r1),
            r2: Some(r2),
            n: Some(n),
            ..Params::default()
        },
        summary: format!("lambda_max(A) >= -{r1} and lambda_min(A) <= {r2}"),
        h,
        ge: GenEq::new(e, gt.dual())?,
        closed_forms: None,
        is_ge: true,
        expected_type: Some(if r1 + r2 >= 0.0 { TypeLabel::III } else { TypeLabel::IV }),
    })
}

/// The quasi band intersected with its mirror.
pub fn band_intersection(lambda: f64, n: usize) -> Result<CatalogEntry, ConeError> {
    let lambda = nonneg("lambda", lambda)?;
    let q = quasi_band(lambda, lambda, n)?;
    let ge = q.ge.intersect(&q.ge.mirror())?;
    Ok(CatalogEntry {
        name: "band-intersection".into(),
        params: Params {
            lambda: Some(lambda),
            n: Some(n),
            ..Params::default()
        },
        summary: format!("lambda_min(A) = -{lambda} and lambda_max(A) = {lambda}"),
        h: ge.h(),
        ge,
        closed_forms: None,
        is_ge: true,
        expected_type: None,
    })
}

/// The universal twisted Monge–Ampère set on `ℝᵏ × ℝˡ`.
pub fn twisted_ma(k: usize, l: usize) -> Result<CatalogEntry, ConeError> {
    let layout = Layout::Block { k, l };
    let n = k + l;
    layout.check(n)?;
    let s = |p| Set::new(n, layout, Expr::prim(p));
    let (h, e) = both(s(Prim::TwistedH), s(Prim::TwistedE))?;
    let gt = s(Prim::TwistedGt)?;
    Ok(CatalogEntry {
        name: "twisted-ma".into(),
        params: Params {
            k: Some(k),
            l: Some(l),
            ..Params::default()
        },
        summary: "x in Q+, y in Q-, x1...xk = |y1...yl| (vector level)".into(),
        h,
        ge: GenEq::new(e.clone(), gt.dual())?,
        closed_forms: Some(ClosedForms {
            e_min: e,
            g_max: gt.dual(),
            g_tilde_max: gt,
        }),
        is_ge: true,
        expected_type: Some(TypeLabel::II),
    })
}

/// `{tr A = 0, a ≥ 0, b ≤ 0}` for the block split `A = [[a, c], [cᵗ, b]]`.
///
/// The closed forms `E_min = {a ≥ 0, tr ≥ 0}`, `G̃_max = {b ≥ 0, tr ≥ 0}` are
/// attached only for `k = l = 1`; for larger blocks they are not the closures.
pub fn split_constrained(k: usize, l: usize) -> Result<CatalogEntry, ConeError> {
    let layout = Layout::Block { k, l };
    let n = k + l;
    layout.check(n)?;
    let s = |p, part| Set::new(n, layout, Expr::prim_on(p, part));
    let delta = s(Prim::Delta, Part::All)?;
    let a_pos = s(Prim::P, Part::A)?;
    let b_pos = s(Prim::P, Part::B)?;
    let h = delta
        .intersect(&delta.negate())?
        .intersect(&a_pos)?
        .intersect(&b_pos.negate())?;
    let closed_forms = if k == 1 && l == 1 {
        let e_min = a_pos.intersect(&delta)?;
        let g_tilde_max = b_pos.intersect(&delta)?;
        Some(ClosedForms {
            g_max: b_pos.union(&e_min)?,
            e_min,
            g_tilde_max,
        })
    } else {
        None
    };
    let ge = diamond(&h);
    Ok(CatalogEntry {
        name: "split-constrained".into(),
        params: Params {
            k: Some(k),
            l: Some(l),
            ..Params::default()
        },
        summary: "tr A = 0 with a >= 0 and b <= 0".into(),
        h,
        ge,
        closed_forms,
        is_ge: true,
        expected_type: if k == 1 && l == 1 { Some(TypeLabel::II) } else { None },
    })
}

fn segment_set(n: usize) -> Result<Set, ConeError> {
    let cap = Set::p(n).shift(-1.0);
    Set::scalar(n).intersect(&cap)?.intersect(&cap.negate())
}

/// `{t·I : −1 ≤ t ≤ 1}`, presented by its diamond `{−I ≤ A ≤ I}`.
pub fn segment(n: usize) -> Result<CatalogEntry, ConeError> {
    let h = segment_set(n)?;
    let e_min = Set::p(n).shift(-1.0);
    Ok(CatalogEntry {
        name: "segment".into(),
        params: Params {
            n: Some(n),
            ..Params::default()
        },
        summary: "multiples tI of the identity with |t| <= 1".into(),
        ge: diamond(&h),
        h,
        closed_forms: Some(ClosedForms {
            g_max: e_min.dual(),
            g_tilde_max: e_min.clone(),
            e_min,
        }),
        is_ge: false,
        expected_type: Some(TypeLabel::IV),
    })
}

/// `{tr A = 0} ∪ {t·I : |t| ≤ 1}`.
pub fn segment_or_traceless(n: usize) -> Result<CatalogEntry, ConeError> {
    let delta = Set::delta(n);
    let h = delta.intersect(&delta.negate())?.union(&segment_set(n)?)?;
    let e_min = Set::p(n).shift(-1.0).union(&delta)?;
    let g_max = Set::ptilde(n).shift(1.0).intersect(&delta)?;
    Ok(CatalogEntry {
        name: "segment-or-traceless".into(),
        params: Params {
            n: Some(n),
            ..Params::default()
        },
        summary: "traceless matrices together with tI, |t| <= 1".into(),
        ge: diamond(&h),
        h,
        closed_forms: Some(ClosedForms {
            g_tilde_max: e_min.clone(),
            e_min,
            g_max,
        }),
        is_ge: false,
        expected_type: Some(TypeLabel::III),
    })
}

/// The hyperbola branch `{λ₁λ₂ = −1, λ₁ < 0 < λ₂}` in dimension two.
///
/// `H + P` is not closed; its closure is `{λ₂ ≥ 0}`.
pub fn hyperbola() -> Result<CatalogEntry, ConeError> {
    let h = Set::new(2, Layout::Full, Expr::prim(Prim::Hyperbola))?;
    let pt = Set::ptilde(2);
    Ok(CatalogEntry {
        name: "hyperbola".into(),
        params: Params::default(),
        summary: "branch of l1 l2 = -1 with l1 < 0 < l2".into(),
        ge: diamond(&h),
        h,
        closed_forms: Some(ClosedForms {
            e_min: pt.clone(),
            g_max: pt.dual(),
            g_tilde_max: pt,
        }),
        is_ge: false,
        expected_type: Some(TypeLabel::III),
    })
}

/// `(P, P̃)` with `H = {0}`.
pub fn affine(n: usize) -> Result<CatalogEntry, ConeError> {
    let ge = GenEq::new(Set::p(n), Set::ptilde(n))?;
    Ok(CatalogEntry {
        name: "affine".into(),
        params: Params {
            n: Some(n),
            ..Params::default()
        },
        summary: "H = {0}; harmonics are affine".into(),
        h: ge.h(),
        closed_forms: Some(ClosedForms {
            e_min: Set::p(n),
            g_max: Set::ptilde(n),
            g_tilde_max: Set::p(n),
        }),
        ge,
        is_ge: true,
        expected_type: Some(TypeLabel::II),
    })
}

/// Pairs `(E, G)` drawn from `{P, P̃}`.
pub fn elementary(e: &str, g: &str, n: usize) -> Result<CatalogEntry, ConeError> {
    for c in [e, g] {
        if c != "p" && c != "ptilde" {
            return Err(ConeError::InvalidParameter(format!("elementary pairs use p or ptilde, got `{c}`")));
        }
    }
    let ge = GenEq::new(cone(e, n)?, cone(g, n)?)?;
    let (summary, expected) = match (e, g) {
        ("p", "p") => ("boundary of P (real Monge-Ampere)", TypeLabel::I),
        ("ptilde", "ptilde") => ("boundary of P~ = -boundary of P", TypeLabel::I),
        ("p", "ptilde") => ("H = {0}", TypeLabel::II),
        _ => ("matrices that are neither positive nor negative definite", TypeLabel::III),
    };
    Ok(CatalogEntry {
        name: "elementary".into(),
        params: Params {
            pair: Some(format!("{e},{g}")),
            n: Some(n),
            ..Params::default()
        },
        summary: summary.into(),
        h: ge.h(),
        ge,
        closed_forms: None,
        is_ge: true,
        expected_type: Some(expected),
    })
}

/// Separately convex in the first `k` variables and concave in the last `l`.
pub fn separate_convexity(k: usize, l: usize) -> Result<CatalogEntry, ConeError> {
    let layout = Layout::Block { k, l };
    let n = k + l;
    layout.check(n)?;
    let e = Set::new(n, layout, Expr::prim_on(Prim::P, Part::A))?;
    let gt = Set::new(n, layout, Expr::prim_on(Prim::P, Part::B))?;
    let ge = GenEq::new(e, gt.dual())?;
    Ok(CatalogEntry {
        name: "separate-convexity".into(),
        params: Params {
            k: Some(k),
            l: Some(l),
            ..Params::default()
        },
        summary: "a >= 0 and b <= 0 (blockwise)".into(),
        h: ge.h(),
        ge,
        closed_forms: None,
        is_ge: true,
        expected_type: None,
    })
}

/// The determined equation `(F, F)`.
pub fn determined(f: &str, n: usize) -> Result<CatalogEntry, ConeError> {
    let s = cone(f, n)?;
    let ge = GenEq::determined(s.clone());
    Ok(CatalogEntry {
        name: "determined".into(),
        params: Params {
            f: Some(f.into()),
            n: Some(n),
            ..Params::default()
        },
        summary: format!("boundary of {s}"),
        h: ge.h(),
        ge,
        closed_forms: Some(ClosedForms {
            e_min: s.clone(),
            g_max: s.clone(),
            g_tilde_max: s.dual(),
        }),
        is_ge: true,
        expected_type: Some(TypeLabel::I),
    })
}

/// `(F, EMPTY)`, presenting `F` itself.
pub fn subequation_as_ge(f: &str, n: usize) -> Result<CatalogEntry, ConeError> {
    let s = cone(f, n)?;
    let ge = GenEq::new(s.clone(), Set::empty(n))?;
    Ok(CatalogEntry {
        name: "subequation-as-ge".into(),
        params: Params {
            f: Some(f.into()),
            n: Some(n),
            ..Params::default()
        },
        summary: format!("H = {s}, H* = empty"),
        h: ge.h(),
        ge,
        closed_forms: None,
        is_ge: true,
        expected_type: Some(TypeLabel::III),
    })
}

/// `∂F` as a closed set; its canonical pair is `(F, F)`.
pub fn boundary(f: &str, n: usize) -> Result<CatalogEntry, ConeError> {
    let mut d = determined(f, n)?;
    d.name = "boundary".into();
    Ok(d)
}

/// Builds a catalog entry by name.
pub fn lookup(name: &str, p: &Params) -> Result<CatalogEntry, ConeError> {
    let r1r2 = || -> Result<(f64, f64), ConeError> {
        match (p.r1, p.r2, p.lambda) {
            (Some(a), Some(b), _) => Ok((a, b)),
            (None, None, Some(l)) => Ok((l, l)),
            (None, None, None) => Ok((1.0, 1.0)),
            _ => Err(ConeError::InvalidParameter("give both r1 and r2, or lambda".into())),
        }
    };
    let f = || p.f.clone().unwrap_or_else(|| "p".into());
    match name {
        "constrained-laplacian" => constrained_laplacian(p.r.unwrap_or(1.0), dim(p, 2)?),
        "quasi-band" => {
            let (a, b) = r1r2()?;
            quasi_band(a, b, dim(p, 2)?)
        }
        "subaffine-band" => {
            let (a, b) = r1r2()?;
            subaffine_band(a, b, dim(p, 2)?)
        }
        "band-intersection" => band_intersection(p.lambda.unwrap_or(1.0), dim(p, 2)?),
        "twisted-ma" => {
            let (k, l, _) = split(p)?;
            twisted_ma(k, l)
        }
        "split-constrained" => {
            let (k, l, _) = split(p)?;
            split_constrained(k, l)
        }
        "segment" => segment(dim(p, 2)?),
        "segment-or-traceless" => segment_or_traceless(dim(p, 2)?),
        "hyperbola" => hyperbola(),
        "affine" => affine(dim(p, 2)?),
        "elementary" => {
            let pair = p.pair.clone().unwrap_or_else(|| "p,ptilde".into());
            let (e, g) = pair
                .split_once(',')
                .ok_or_else(|| ConeError::InvalidParameter(format!("pair `{pair}` is not `e,g`")))?;
            elementary(e.trim(), g.trim(), dim(p, 2)?)
        }
        "separate-convexity" => {
            let (k, l, _) = split(p)?;
            separate_convexity(k, l)
        }
        "determined" => determined(&f(), dim(p, 2)?),
        "subequation-as-ge" => subequation_as_ge(&f(), dim(p, 2)?),
        "boundary" => boundary(&f(), dim(p, 2)?),
        other => Err(ConeError::InvalidParameter(format!("unknown catalog entry `{other}`"))),
    }
}

/// Fourteen subequations covering every construction in the catalog, in
/// dimension `n` (2 or 3). Block-split entries use `(1, 1)` or `(1, 2)`.
pub fn subequation_suite(n: usize) -> Result<Vec<(String, Set)>, ConeError> {
    let (k, l) = if n == 2 { (1, 1) } else { (1, n - 1) };
    let cl = constrained_laplacian(1.0, n)?;
    let cl_forms = cl.closed_forms.expect("constrained Laplacian has closed forms");
    let seg_or = segment_or_traceless(n)?;
    let seg_or_forms = seg_or.closed_forms.expect("closed forms");
    let split = split_constrained(k, l)?;
    let split_pair = crate::ge::canonical_pair(&split.h);
    let twisted = twisted_ma(k, l)?;
    let generic_segment = segment(n)?.h.add_p();
    Ok(vec![
        ("P".into(), Set::p(n)),
        ("P~".into(), Set::ptilde(n)),
        ("Delta".into(), Set::delta(n)),
        ("P - I".into(), Set::p(n).shift(-1.0)),
        ("P~ - I".into(), Set::ptilde(n).shift(-1.0)),
        ("constrained Laplacian E_min (r = 1)".into(), cl_forms.e_min),
        ("constrained Laplacian G_max (r = 1)".into(), cl_forms.g_max),
        ("segment G_max = P~ + I".into(), Set::ptilde(n).shift(1.0)),
        ("segment-or-traceless E_min".into(), seg_or_forms.e_min),
        ("segment-or-traceless G_max".into(), seg_or_forms.g_max),
        (format!("split ({k},{l}) E_min"), split_pair.e_min),
        (format!("split ({k},{l}) G~_max"), split_pair.g_tilde_max),
        (format!("twisted MA ({k},{l}) E"), twisted.ge.e().clone()),
        ("generic cl(segment + P)".into(), generic_segment),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Class;
    use crate::symmat::SymMat;

    #[test]
    fn constrained_laplacian_membership() {
        let c = constrained_laplacian(1.0, 2).unwrap();
        assert_eq!(c.h.member(&SymMat::diag(&[1.0, -1.0])).unwrap().class, Class::Boundary);
        assert_eq!(c.h.member(&SymMat::diag(&[2.0, -2.0])).unwrap().class, Class::Outside);
        assert_eq!(c.ge.h().member(&SymMat::diag(&[0.5, -0.5])).unwrap().class, Class::Boundary);
    }

    #[test]
    fn split_sample_points() {
        let s = split_constrained(1, 1).unwrap();
        assert!(s.h.member(&SymMat::diag(&[1.0, -1.0])).unwrap().holds());
        let f = s.closed_forms.unwrap();
        assert_eq!(f.g_tilde_max.member(&SymMat::diag(&[-1.0, 2.0])).unwrap().class, Class::Inside);
    }

    #[test]
    fn twisted_points() {
        let t = twisted_ma(1, 2).unwrap();
        assert!(t.h.member_vec(&[2.0, -1.0, -2.0], 1e-9).unwrap().holds());
        let e = t.ge.e();
        assert_eq!(e.member_vec(&[2.0, -1.0, -1.0], 1e-9).unwrap().class, Class::Inside);
        assert_eq!(e.member_vec(&[2.0, -1.0, -3.0], 1e-9).unwrap().class, Class::Outside);
    }

    #[test]
    fn every_name_resolves() {
        for (name, _) in NAMES {
            let e = lookup(name, &Params::default()).unwrap();
            assert_eq!(&e.name, name);
        }
        assert!(lookup("nope", &Params::default()).is_err());
    }

    #[test]
    fn suite_has_fourteen_members() {
        assert_eq!(subequation_suite(2).unwrap().len(), 14);
        assert_eq!(subequation_suite(3).unwrap().len(), 14);
    }
}
