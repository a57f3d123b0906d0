//! Generalized equations `H = E ∩ (−G̃)` and their classification.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cone::offset::radius_for;
use crate::cone::{contains, Class, Containment, Pt, Set};
use crate::error::ConeError;
use crate::symmat::SymMat;
use crate::tol::Tolerances;

/// A pair of subequations presenting `H = E ∩ (−G̃)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenEq {
    e: Set,
    g: Set,
}

impl GenEq {
    pub fn new(e: Set, g: Set) -> Result<GenEq, ConeError> {
        if e.n() != g.n() {
            return Err(ConeError::DimensionMismatch {
                expected: e.n(),
                found: g.n(),
            });
        }
        if e.layout() != g.layout() && !e.is_sentinel() && !g.is_sentinel() {
            return Err(ConeError::LayoutMismatch);
        }
        Ok(GenEq { e, g })
    }

    /// The determined equation `∂F`, presented as `(F, F)`.
    pub fn determined(f: Set) -> GenEq {
        GenEq { e: f.clone(), g: f }
    }

    pub fn e(&self) -> &Set {
        &self.e
    }

    pub fn g(&self) -> &Set {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.e.n()
    }

    /// `E ∩ (−G̃)`.
    pub fn h(&self) -> Set {
        self.e
            .intersect(&self.g.dual().negate())
            .expect("layouts checked at construction")
    }

    /// The mirror set `G ∩ (−Ẽ)`.
    pub fn h_star(&self) -> Set {
        self.mirror().h()
    }

    pub fn mirror(&self) -> GenEq {
        GenEq {
            e: self.g.clone(),
            g: self.e.clone(),
        }
    }

    /// Presents `−H` as `(G̃, Ẽ)`.
    pub fn negate(&self) -> GenEq {
        GenEq {
            e: self.g.dual(),
            g: self.e.dual(),
        }
    }

    /// Presents `H₁ ∩ H₂` as `(E₁ ∩ E₂, G₁ ∪ G₂)`.
    pub fn intersect(&self, other: &GenEq) -> Result<GenEq, ConeError> {
        GenEq::new(self.e.intersect(&other.e)?, self.g.union(&other.g)?)
    }
}

impl fmt::Display for GenEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(E = {}, G = {})", self.e, self.g)
    }
}

/// `E_min = cl(H + P)`, `G̃_max = cl(−H + P)` and `G_max` its dual.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalPair {
    pub e_min: Set,
    pub g_max: Set,
    pub g_tilde_max: Set,
    pub trace: Vec<String>,
}

impl CanonicalPair {
    pub fn as_ge(&self) -> GenEq {
        GenEq::new(self.e_min.clone(), self.g_max.clone()).expect("built from one set")
    }
}

pub fn canonical_pair(h: &Set) -> CanonicalPair {
    let e_min = h.add_p();
    let g_tilde_max = h.negate().add_p();
    let g_max = g_tilde_max.dual();
    let trace = vec![
        format!("H = {h}"),
        format!("E_min = {}", e_min),
        format!("G~_max = {}", g_tilde_max),
        format!("G_max = {}", g_max),
    ];
    CanonicalPair {
        e_min,
        g_max,
        g_tilde_max,
        trace,
    }
}

/// The smallest generalized equation containing `h`, `cl(H + P) ∩ cl(H − P)`,
/// presented by its canonical pair.
pub fn diamond(h: &Set) -> GenEq {
    canonical_pair(h).as_ge()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeLabel {
    I,
    II,
    III,
    IV,
    Unclassified,
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::I => "I",
            TypeLabel::II => "II",
            TypeLabel::III => "III",
            TypeLabel::IV => "IV",
            TypeLabel::Unclassified => "Unclassified",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeReport {
    pub label: TypeLabel,
    /// `E ⊆ G`, equivalently `Int H = ∅`.
    pub e_in_g: Containment,
    /// `G ⊆ E`, equivalently `Int H* = ∅`.
    pub g_in_e: Containment,
    pub int_h_witness: Option<SymMat>,
    pub int_h_star_witness: Option<SymMat>,
    pub notes: Vec<String>,
}

impl TypeReport {
    /// Uniqueness for the Dirichlet problem holds exactly when `Int H = ∅`.
    pub fn uniqueness(&self) -> bool {
        self.int_h_witness.is_none() && self.e_in_g.holds()
    }

    /// Existence holds exactly when `Int H* = ∅`.
    pub fn existence(&self) -> bool {
        self.int_h_star_witness.is_none() && self.g_in_e.holds()
    }
}

/// A point of `Int E ∖ G` built on the diagonal ray of a failed containment.
fn interior_witness(e: &Set, g: &Set, c: &Containment, tol: &Tolerances) -> Result<Option<SymMat>, ConeError> {
    let Containment::NotContained { witness, t_f, t_g, .. } = c else {
        return Ok(None);
    };
    let t = match (t_f.is_finite(), t_g.is_finite()) {
        (true, true) => 0.5 * (t_f + t_g),
        (true, false) => t_f + 1.0,
        (false, true) => t_g - 1.0,
        (false, false) => 0.0,
    };
    let a = witness.shift(t);
    let in_e = e.member_with(&a, tol.member)?;
    let in_g = g.member_with(&a, tol.member)?;
    if in_e.margin > tol.member && in_g.class == Class::Outside {
        Ok(Some(a))
    } else {
        Ok(None)
    }
}

/// Type I–IV from the two containments `E ⊆ G` and `G ⊆ E`.
pub fn classify_type(ge: &GenEq, tol: &Tolerances) -> Result<TypeReport, ConeError> {
    let e_in_g = contains(&ge.e, &ge.g, tol)?;
    let g_in_e = contains(&ge.g, &ge.e, tol)?;
    let int_h_witness = interior_witness(&ge.e, &ge.g, &e_in_g, tol)?;
    let int_h_star_witness = interior_witness(&ge.g, &ge.e, &g_in_e, tol)?;
    let mut notes = Vec::new();
    let mut label = match (e_in_g.holds(), g_in_e.holds()) {
        (true, true) => TypeLabel::I,
        (true, false) => TypeLabel::II,
        (false, true) => TypeLabel::III,
        (false, false) => TypeLabel::IV,
    };
    if !e_in_g.holds() && int_h_witness.is_none() {
        notes.push("no verified point of Int H on the worst direction".into());
        label = TypeLabel::Unclassified;
    }
    if !g_in_e.holds() && int_h_star_witness.is_none() {
        notes.push("no verified point of Int H* on the worst direction".into());
        label = TypeLabel::Unclassified;
    }
    for (name, c) in [("E in G", &e_in_g), ("G in E", &g_in_e)] {
        if let Containment::Contained {
            closed_form: false,
            samples,
            ..
        } = c
        {
            notes.push(format!("{name}: within tolerance at {samples} directions"));
        }
    }
    Ok(TypeReport {
        label,
        e_in_g,
        g_in_e,
        int_h_witness,
        int_h_star_witness,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// `(E, G) ≺ (E', G')` iff `E ⊆ E'` and `G' ⊆ G`.
pub fn pair_order(a: &GenEq, b: &GenEq, tol: &Tolerances) -> Result<PairOrder, ConeError> {
    let le = contains(&a.e, &b.e, tol)?.holds() && contains(&b.g, &a.g, tol)?.holds();
    let ge = contains(&b.e, &a.e, tol)?.holds() && contains(&a.g, &b.g, tol)?.holds();
    Ok(match (le, ge) {
        (true, true) => PairOrder::Equal,
        (true, false) => PairOrder::Less,
        (false, true) => PairOrder::Greater,
        (false, false) => PairOrder::Incomparable,
    })
}

/// Result of comparing `H` with `cl(H + P) ∩ cl(H − P)` on samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeCheck {
    pub is_ge: bool,
    /// A point of `H◇ ∖ H`, when one was found.
    pub witness: Option<SymMat>,
    pub samples: usize,
    pub disagreements: usize,
    /// Samples whose levels fell between the membership and rejection bands.
    pub indeterminate: usize,
}

/// Samples used to compare a set with its diamond: deterministic probes,
/// random spectra, and random directions pushed onto `∂cl(H + P)` and
/// `∂cl(H − P)` along the diagonal.
fn diamond_samples(h: &Set, dia: &GenEq, count: usize, seed: u64) -> Result<Vec<Pt>, ConeError> {
    let n = h.n();
    let layout = h.layout();
    let radius = radius_for(&[h]);
    let mut out = Vec::with_capacity(count);
    let mut probe = Pt::zeros(n);
    probe[n - 1] = 1.0;
    out.push(probe);
    let mut neg = Pt::zeros(n);
    neg[0] = -1.0;
    out.push(neg);
    out.push(Pt::zeros(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = dia.e();
    let gt = dia.g().dual();
    let mut round = 0usize;
    while out.len() < count {
        round += 1;
        let mut z = Pt::zeros(n);
        for v in z.iter_mut() {
            *v = rng.sample::<f64, _>(StandardNormal);
        }
        let mean = z.sum() / n as f64;
        let scale = radius * rng.random::<f64>();
        for v in z.iter_mut() {
            *v = (*v - mean) * scale;
        }
        layout.sort(&mut z);
        match round % 3 {
            0 => {
                let t = radius * (2.0 * rng.random::<f64>() - 1.0);
                out.push(z.shifted(t));
            }
            1 => {
                if e.is_sentinel() {
                    continue;
                }
                match crate::cone::offset::offset_at(e, &z) {
                    Ok(t) => out.push(z.shifted(t)),
                    Err(ConeError::BracketOverflow) => continue,
                    Err(err) => return Err(err),
                }
            }
            _ => {
                if gt.is_sentinel() {
                    continue;
                }
                let mz = layout.reflect(&z);
                match crate::cone::offset::offset_at(&gt, &mz) {
                    Ok(t) => out.push(z.shifted(-t)),
                    Err(ConeError::BracketOverflow) => continue,
                    Err(err) => return Err(err),
                }
            }
        }
    }
    Ok(out)
}

/// Tests `H = cl(H + P) ∩ cl(H − P)` by two-sided sampled membership.
pub fn is_generalized_equation(h: &Set, samples: usize, tol: &Tolerances) -> Result<GeCheck, ConeError> {
    let dia = diamond(h);
    let hd = dia.h();
    let points = diamond_samples(h, &dia, samples.max(3), tol.seed)?;
    let band = 10.0 * tol.member;
    let mut disagreements = 0;
    let mut indeterminate = 0;
    let mut witness = None;
    for z in &points {
        let (a, b) = match (h.verdict_at(z, tol.member), hd.verdict_at(z, tol.member)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(ConeError::Indeterminate(_)), _) | (_, Err(ConeError::Indeterminate(_))) => {
                indeterminate += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let in_h = a.holds();
        let in_d = b.holds();
        if in_h == in_d {
            continue;
        }
        let margin = if in_h { b.margin } else { a.margin };
        if margin > -band {
            indeterminate += 1;
            continue;
        }
        disagreements += 1;
        if witness.is_none() {
            witness = Some(h.layout().realize(z));
        }
    }
    Ok(GeCheck {
        is_ge: disagreements == 0,
        witness,
        samples: points.len(),
        disagreements,
        indeterminate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn determined_cones_are_type_one() {
        for f in [Set::p(2), Set::delta(3)] {
            let r = classify_type(&GenEq::determined(f), &tol()).unwrap();
            assert_eq!(r.label, TypeLabel::I);
        }
    }

    #[test]
    fn affine_pair_is_type_two() {
        let ge = GenEq::new(Set::p(2), Set::ptilde(2)).unwrap();
        let r = classify_type(&ge, &tol()).unwrap();
        assert_eq!(r.label, TypeLabel::II);
        let w = r.int_h_star_witness.unwrap();
        assert!(Set::ptilde(2).member(&w).unwrap().margin > 0.0);
    }

    #[test]
    fn subequation_with_empty_partner_is_type_three() {
        let ge = GenEq::new(Set::p(2), Set::empty(2)).unwrap();
        assert_eq!(classify_type(&ge, &tol()).unwrap().label, TypeLabel::III);
        let h = ge.h();
        assert!(h.member(&SymMat::identity(2)).unwrap().holds());
    }

    #[test]
    fn mirror_and_negate_are_involutions() {
        let ge = GenEq::new(Set::p(2).shift(-1.0), Set::ptilde(2).shift(1.0)).unwrap();
        assert_eq!(ge.mirror().mirror(), ge);
        let nn = ge.negate().negate();
        let a = SymMat::diag(&[-0.5, 0.75]);
        assert_eq!(nn.h().level(&a).unwrap(), ge.h().level(&a).unwrap());
    }

    #[test]
    fn pair_order_examples() {
        let pp = GenEq::determined(Set::p(2));
        assert_eq!(pair_order(&pp, &pp, &tol()).unwrap(), PairOrder::Equal);
        // P ⊆ P̃ serves both halves of the order.
        let a = GenEq::new(Set::p(2), Set::ptilde(2)).unwrap();
        let b = GenEq::new(Set::ptilde(2), Set::p(2)).unwrap();
        assert_eq!(pair_order(&a, &b, &tol()).unwrap(), PairOrder::Less);
        assert_eq!(pair_order(&b, &a, &tol()).unwrap(), PairOrder::Greater);
        let dd = GenEq::determined(Set::delta(2));
        assert_eq!(pair_order(&pp, &dd, &tol()).unwrap(), PairOrder::Incomparable);
    }

    #[test]
    fn boundary_of_p_is_a_generalized_equation() {
        let h = GenEq::determined(Set::p(2)).h();
        let c = is_generalized_equation(&h, 3000, &tol()).unwrap();
        assert!(c.is_ge, "{c:?}");
    }
}
