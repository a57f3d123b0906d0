//! Duality identities checked on boundary graphs.
//!
//! For a subequation `F` with dual `F~`:
//!
//! * `F~~ = F`
//! * `∂F = F ∩ (−F~)`
//! * `∂F~ = F~ ∩ (−F) = −∂F`
//! * `F = ∂F + P`
//! * `F~ = −∂F + P`
//!
//! Each identity is reduced to diagonal rays `μ + t·I` over trace-free `μ`,
//! where every subequation is an up-ray `[t*(μ), ∞)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cone::offset::{radius_for, trace_free_samples, BRACKET_LIMIT};
use crate::cone::{boundary_offset, Set, SetKind};
use crate::error::ConeError;
use crate::symmat::SymMat;
use crate::tol::Tolerances;

/// Resolution for sets with exact level functions.
pub const CLOSED_FORM_RESOLUTION: f64 = 1e-9;
/// Resolution for sets involving generic sums.
pub const ORACLE_RESOLUTION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `F~~ = F`.
    DualInvolution,
    /// `∂F = F ∩ (−F~)`.
    BoundaryIntersection,
    /// `∂F~ = −∂F`.
    DualBoundary,
    /// `F = ∂F + P`.
    BoundaryPlusP,
    /// `F~ = −∂F + P`.
    DualFromBoundary,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::DualInvolution,
        Identity::BoundaryIntersection,
        Identity::DualBoundary,
        Identity::BoundaryPlusP,
        Identity::DualFromBoundary,
    ];

    pub fn formula(self) -> &'static str {
        match self {
            Identity::DualInvolution => "dual(dual(F)) = F",
            Identity::BoundaryIntersection => "dF = F ∩ -dual(F)",
            Identity::DualBoundary => "d dual(F) = -dF",
            Identity::BoundaryPlusP => "F = dF + P",
            Identity::DualFromBoundary => "dual(F) = -dF + P",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityRow {
    pub set: String,
    pub n: usize,
    pub identity: Identity,
    /// Largest discrepancy in diagonal offset `t`.
    pub residual: f64,
    pub resolution: f64,
    pub directions: usize,
    /// Sampled matrices whose membership contradicts the identity by more
    /// than the resolution.
    pub violations: usize,
    pub pass: bool,
    /// Whether the generic `cl(· + P)` construction was compared as well.
    pub generic_sum: bool,
}

/// `sup { t : level(t) ≥ 0 }` for a level that is nonincreasing in `t`.
fn upper_edge(level: impl Fn(f64) -> f64) -> Option<f64> {
    let inside = |t: f64| level(t) >= 0.0;
    let (mut lo, mut hi);
    if inside(0.0) {
        lo = 0.0;
        let mut step = 1.0;
        loop {
            if !inside(step) {
                hi = step;
                break;
            }
            lo = step;
            step *= 2.0;
            if step > BRACKET_LIMIT {
                return None;
            }
        }
    } else {
        hi = 0.0;
        let mut step = 1.0;
        loop {
            if inside(-step) {
                lo = -step;
                break;
            }
            hi = -step;
            step *= 2.0;
            if step > BRACKET_LIMIT {
                return None;
            }
        }
    }
    while hi - lo > 1e-14 * lo.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn level(s: &Set, a: &SymMat) -> f64 {
    s.level(a).expect("dimension checked by caller")
}

fn random_sym(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> SymMat {
    let upper: Vec<f64> = (0..n * (n + 1) / 2).map(|_| rng.sample(StandardNormal)).collect();
    let m = SymMat::new(n, upper).expect("finite gaussian entries");
    let norm = m.norm().max(1e-12);
    m.scale(radius * rng.random::<f64>() / norm)
}

fn random_psd(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> SymMat {
    let g: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let mut upper = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            upper.push((0..n).map(|k| g[i * n + k] * g[j * n + k]).sum());
        }
    }
    let m = SymMat::new(n, upper).expect("finite product");
    let norm = m.norm().max(1e-12);
    m.scale(radius * rng.random::<f64>() / norm)
}

/// Offsets of `F` at `μ` and `−μ`; `None` when either ray misses the boundary.
fn offsets(f: &Set, mu: &SymMat) -> Result<Option<(f64, f64)>, ConeError> {
    match (boundary_offset(f, mu), boundary_offset(f, &mu.neg())) {
        (Ok(a), Ok(b)) => Ok(Some((a, b))),
        (Err(ConeError::BracketOverflow), _) | (_, Err(ConeError::BracketOverflow)) => Ok(None),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Checks all five identities for one subequation.
pub fn check_identities(name: &str, f: &Set, tol: &Tolerances) -> Result<Vec<IdentityRow>, ConeError> {
    let n = f.n();
    let resolution = match f.kind() {
        SetKind::ClosedForm => CLOSED_FORM_RESOLUTION,
        SetKind::Oracle => ORACLE_RESOLUTION,
    };
    let radius = radius_for(&[f]);
    let dirs = trace_free_samples(n, Some(f.layout()), tol.dirs, radius, tol.seed);
    let dual = f.dual();
    let dual_dual = dual.dual();
    let neg_dual = dual.negate();
    let neg_f = f.negate();
    let boundary = f.intersect(&neg_dual)?;
    let dual_boundary = dual.intersect(&neg_f)?;

    let mut res = [0.0_f64; 5];
    let mut violations = [0usize; 5];
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed ^ 0x1d);
    let mut used = 0;
    for mu in &dirs {
        let Some((t, t_neg)) = offsets(f, mu)? else {
            continue;
        };
        used += 1;
        let ray = |s: &Set| {
            let s = s.clone();
            let mu = mu.clone();
            move |x: f64| level(&s, &mu.shift(x))
        };

        // F~~ = F on the ray.
        res[0] = res[0].max((boundary_offset(&dual_dual, mu)? - t).abs());

        // ∂F = F ∩ (−F~): the down-ray of −F~ ends where the up-ray of F starts.
        match upper_edge(ray(&neg_dual)) {
            Some(u) => res[1] = res[1].max((u - t).abs()),
            None => violations[1] += 1,
        }
        let b = mu.shift(t);
        if level(&boundary, &b) < -resolution {
            violations[1] += 1;
        }

        // ∂F~ = F~ ∩ (−F) = −∂F.
        let t_dual = boundary_offset(&dual, mu)?;
        res[2] = res[2].max((t_dual + t_neg).abs());
        match upper_edge(ray(&neg_f)) {
            Some(u) => res[2] = res[2].max((u - t_dual).abs()),
            None => violations[2] += 1,
        }
        if level(&dual_boundary, &mu.shift(-t_neg)) < -resolution {
            violations[2] += 1;
        }

        // F = ∂F + P: a matrix on the ray is in F iff it lies above the boundary
        // point, and the boundary point plus any PSD matrix stays in F.
        let a = random_sym(n, radius, &mut rng);
        let m = a.trace_free();
        let s = a.trace() / n as f64;
        if let Some((tm, tm_neg)) = offsets(f, &m)? {
            let in_f = level(f, &a) >= 0.0;
            if in_f != (s >= tm) && (s - tm).abs() > resolution {
                violations[3] += 1;
            }
            // F~ = −∂F + P: the boundary of F~ on the ray is −(boundary of F at −μ).
            let in_dual = level(&dual, &a) >= 0.0;
            if in_dual != (s >= -tm_neg) && (s + tm_neg).abs() > resolution {
                violations[4] += 1;
            }
        }
        let q = random_psd(n, radius, &mut rng);
        if level(f, &b.add(&q)) < -resolution {
            violations[3] += 1;
        }
        if level(&dual, &mu.shift(-t_neg).add(&q)) < -resolution {
            violations[4] += 1;
        }
    }

    // Generic sums, where they reduce to linear programs.
    let sum = boundary.add_p();
    let neg_sum = boundary.negate().add_p();
    let generic_sum = !sum.uses_search() && !neg_sum.uses_search();
    if generic_sum {
        for mu in &dirs {
            if let Some((t, t_neg)) = offsets(f, mu)? {
                res[3] = res[3].max((boundary_offset(&sum, mu)? - t).abs());
                res[4] = res[4].max((boundary_offset(&neg_sum, mu)? + t_neg).abs());
            }
        }
    }

    Ok(Identity::ALL
        .iter()
        .enumerate()
        .map(|(i, &identity)| IdentityRow {
            set: name.to_string(),
            n,
            identity,
            residual: res[i],
            resolution,
            directions: used,
            violations: violations[i],
            pass: res[i] <= resolution && violations[i] == 0 && used > 0,
            generic_sum: generic_sum && i >= 3,
        })
        .collect())
}

/// The identities over the catalog's subequation suite in dimension `n`.
pub fn duality_suite(n: usize, tol: &Tolerances) -> Result<Vec<IdentityRow>, ConeError> {
    let mut rows = Vec::new();
    for (name, f) in crate::catalog::subequation_suite(n)? {
        rows.extend(check_identities(&name, &f, tol)?);
    }
    Ok(rows)
}
