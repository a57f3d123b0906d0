//! Boundary graphs over the trace-free hyperplane and containment through them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::eval::Shape;
use super::point::{Layout, Pt};
use super::set::{Set, SetKind};
use crate::error::ConeError;
use crate::symmat::SymMat;
use crate::tol::Tolerances;

/// Bracket limit for the diagonal search.
pub const BRACKET_LIMIT: f64 = 1e6;

fn check_trace_free(mu: &SymMat) -> Result<(), ConeError> {
    let tr = mu.trace();
    if tr.abs() > 1e-9 * mu.norm().max(1.0) {
        return Err(ConeError::NotTraceFree(tr));
    }
    Ok(())
}

/// `t*(μ) = min { t : μ + t·I ∈ F }` for trace-free `μ`.
pub fn boundary_offset(f: &Set, mu: &SymMat) -> Result<f64, ConeError> {
    if mu.n() != f.n() {
        return Err(ConeError::DimensionMismatch {
            expected: f.n(),
            found: mu.n(),
        });
    }
    check_trace_free(mu)?;
    offset_at(f, &f.layout().spectrum(mu))
}

/// Offset along the diagonal through the block-sorted spectrum `z`.
pub(crate) fn offset_at(f: &Set, z: &Pt) -> Result<f64, ConeError> {
    if f.is_sentinel() {
        return Err(ConeError::BracketOverflow);
    }
    if f.shape() == Shape::Equi {
        let t = -f.level_lv(z).v;
        if !t.is_finite() || t.abs() > BRACKET_LIMIT {
            return Err(ConeError::BracketOverflow);
        }
        return Ok(t);
    }
    let inside = |t: f64| f.level_lv(&z.shifted(t)).v >= 0.0;
    let (mut lo, mut hi);
    if inside(0.0) {
        hi = 0.0;
        let mut step = 1.0;
        loop {
            if !inside(-step) {
                lo = -step;
                break;
            }
            hi = -step;
            step *= 2.0;
            if step > BRACKET_LIMIT {
                return Err(ConeError::BracketOverflow);
            }
        }
    } else {
        lo = 0.0;
        let mut step = 1.0;
        loop {
            if inside(step) {
                hi = step;
                break;
            }
            lo = step;
            step *= 2.0;
            if step > BRACKET_LIMIT {
                return Err(ConeError::BracketOverflow);
            }
        }
    }
    while hi - lo > 1e-14 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Offset of `F` at `μ`, with the sentinels mapped to `±∞`.
pub fn extended_offset(f: &Set, mu: &SymMat) -> Result<f64, ConeError> {
    if f.is_empty_sentinel() {
        return Ok(f64::INFINITY);
    }
    if f.is_full_sentinel() {
        return Ok(f64::NEG_INFINITY);
    }
    boundary_offset(f, mu)
}

/// Structured probes followed by random trace-free matrices.
///
/// When `layout` is given, random samples are diagonal with a uniformly
/// random trace-free spectrum; otherwise they are trace-free parts of
/// Gaussian symmetric matrices. Norms are spread uniformly in `(0, radius]`.
pub fn trace_free_samples(n: usize, layout: Option<Layout>, count: usize, radius: f64, seed: u64) -> Vec<SymMat> {
    let mut out = Vec::with_capacity(count + 3);
    let mut probe = vec![0.0; n];
    probe[0] = -1.0;
    probe[n - 1] = 1.0;
    out.push(SymMat::diag(&probe));
    if matches!(layout, Some(Layout::Block { .. })) {
        probe.reverse();
        out.push(SymMat::diag(&probe));
    }
    out.push(SymMat::zeros(n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count + 3 {
        let m = match layout {
            Some(_) => {
                let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                SymMat::diag(&v)
            }
            None => {
                let upper: Vec<f64> = (0..n * (n + 1) / 2).map(|_| rng.sample(StandardNormal)).collect();
                SymMat::new(n, upper).expect("finite gaussian entries")
            }
        };
        let w = m.trace_free();
        let norm = w.norm();
        if norm < 1e-9 {
            continue;
        }
        let r = radius * (1.0 - rng.random::<f64>());
        out.push(w.scale(r / norm).trace_free());
    }
    out
}

/// Outcome of a boundary-graph comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Containment {
    /// `t*_F ≥ t*_G − τ` at every sample. `closed_form` is false when either
    /// side involves a generic sum, in which case the verdict holds within
    /// tolerance at `samples` directions only.
    Contained { min_gap: f64, samples: usize, closed_form: bool },
    /// `witness + t·I` lies in `F` but not `G` for `t ∈ (t_f, t_g)`.
    NotContained { witness: SymMat, t_f: f64, t_g: f64, gap: f64 },
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Contained { .. })
    }
}

/// Sampling radius for comparisons involving `sets`.
pub(crate) fn radius_for(sets: &[&Set]) -> f64 {
    4.0 * sets.iter().map(|s| s.expr().scale()).fold(1.0, f64::max)
}

pub(crate) fn samples_for(f: &Set, g: &Set, tol: &Tolerances) -> Vec<SymMat> {
    let layout = if f.layout() == g.layout() || g.is_sentinel() {
        Some(f.layout())
    } else if f.is_sentinel() {
        Some(g.layout())
    } else {
        None
    };
    trace_free_samples(f.n(), layout, tol.dirs, radius_for(&[f, g]), tol.seed)
}

/// Decides `F ⊆ G` by comparing boundary graphs on sampled directions.
pub fn contains(f: &Set, g: &Set, tol: &Tolerances) -> Result<Containment, ConeError> {
    if f.n() != g.n() {
        return Err(ConeError::DimensionMismatch {
            expected: f.n(),
            found: g.n(),
        });
    }
    let samples = samples_for(f, g, tol);
    let closed_form = f.kind() == SetKind::ClosedForm && g.kind() == SetKind::ClosedForm;
    if f.is_empty_sentinel() || g.is_full_sentinel() {
        return Ok(Containment::Contained {
            min_gap: f64::INFINITY,
            samples: 0,
            closed_form,
        });
    }
    if f.is_full_sentinel() || g.is_empty_sentinel() {
        let mu = SymMat::zeros(f.n());
        let t_f = extended_offset(f, &mu)?;
        let t_g = extended_offset(g, &mu)?;
        return Ok(Containment::NotContained {
            witness: mu,
            t_f,
            t_g,
            gap: f64::NEG_INFINITY,
        });
    }
    let mut min_gap = f64::INFINITY;
    let mut worst: Option<(f64, SymMat, f64, f64)> = None;
    for mu in &samples {
        let t_f = boundary_offset(f, mu)?;
        let t_g = boundary_offset(g, mu)?;
        let gap = t_f - t_g;
        min_gap = min_gap.min(gap);
        let score = gap / mu.op_norm().max(1.0);
        if worst.as_ref().is_none_or(|w| score < w.0 - 1e-12) {
            worst = Some((score, mu.clone(), t_f, t_g));
        }
    }
    if min_gap >= -tol.contain {
        return Ok(Containment::Contained {
            min_gap,
            samples: samples.len(),
            closed_form,
        });
    }
    let (_, witness, t_f, t_g) = worst.expect("at least one sample");
    Ok(Containment::NotContained {
        witness,
        t_f,
        t_g,
        gap: t_f - t_g,
    })
}

/// Largest `|t*_F − t*_G|` over sampled directions.
pub fn offset_distance(f: &Set, g: &Set, tol: &Tolerances) -> Result<f64, ConeError> {
    let mut worst = 0.0_f64;
    for mu in samples_for(f, g, tol) {
        let a = extended_offset(f, &mu)?;
        let b = extended_offset(g, &mu)?;
        if a == b {
            continue;
        }
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_of_primitives() {
        let mu = SymMat::diag(&[-1.0, 1.0]);
        assert_eq!(boundary_offset(&Set::p(2), &mu).unwrap(), 1.0);
        assert_eq!(boundary_offset(&Set::ptilde(2), &mu).unwrap(), -1.0);
        assert_eq!(boundary_offset(&Set::delta(2), &mu).unwrap(), 0.0);
        assert_eq!(boundary_offset(&Set::p(2).shift(-1.0), &mu).unwrap(), 0.0);
    }

    #[test]
    fn bisection_matches_exact_offset() {
        // Intersection with the scalar line forces the bisection path.
        let s = Set::p(2).intersect(&Set::scalar(2).union(&Set::p(2)).unwrap()).unwrap();
        let mu = SymMat::diag(&[-0.3, 0.3]);
        let t = boundary_offset(&s, &mu).unwrap();
        assert!((t - 0.3).abs() < 1e-13, "{t}");
    }

    #[test]
    fn rejects_traceful_direction_and_sentinels() {
        assert!(matches!(
            boundary_offset(&Set::p(2), &SymMat::identity(2)),
            Err(ConeError::NotTraceFree(_))
        ));
        assert!(matches!(
            boundary_offset(&Set::empty(2), &SymMat::zeros(2)),
            Err(ConeError::BracketOverflow)
        ));
    }

    #[test]
    fn cone_containments() {
        let tol = Tolerances::default();
        assert!(contains(&Set::p(2), &Set::ptilde(2), &tol).unwrap().holds());
        match contains(&Set::ptilde(2), &Set::p(2), &tol).unwrap() {
            Containment::NotContained { witness, t_f, t_g, .. } => {
                assert_eq!(witness, SymMat::diag(&[-1.0, 1.0]));
                assert_eq!((t_f, t_g), (-1.0, 1.0));
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn sentinels_compare() {
        let tol = Tolerances::default();
        assert!(contains(&Set::empty(2), &Set::p(2), &tol).unwrap().holds());
        assert!(contains(&Set::p(2), &Set::full(2), &tol).unwrap().holds());
        assert!(!contains(&Set::p(2), &Set::empty(2), &tol).unwrap().holds());
    }

    #[test]
    fn samples_are_trace_free_and_deterministic() {
        let a = trace_free_samples(3, None, 20, 2.0, 7);
        let b = trace_free_samples(3, None, 20, 2.0, 7);
        assert_eq!(a, b);
        for m in &a {
            assert!(m.trace().abs() < 1e-12);
            assert!(m.norm() <= 2.0 + 1e-12);
        }
    }
}
