//! Acceptance criteria, run in order by a custom harness. Each criterion
//! prints one `PASS`/`FAIL` line with its measurements and runtime; the
//! process fails if any criterion does. A panic counts as a failure.
//!
//! `cargo test --test acceptance -- NAME` runs the criteria whose function
//! name contains `NAME`.

use std::time::{Duration, Instant};

use jetcone::catalog::{self, CatalogEntry, Params};
use jetcone::cone::{contains, offset_distance, Class, Containment};
use jetcone::figure::{self, FigureSpec, Which};
use jetcone::ge::{classify_type, is_generalized_equation, TypeLabel};
use jetcone::grid::{Domain, Grid, GridFn};
use jetcone::identities::duality_suite;
use jetcone::solver::{
    convergence_study, dual_solve_identity, nonuniqueness_witness, solve_boundary_equation, solve_ge, GeSolveOptions,
    Initial, SolveOptions, Verdict,
};
use jetcone::tol::Tolerances;
use jetcone::viscosity::{c11_check, corpus, corpus_grid, quasiconvex_check};
use jetcone::Set;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, title: &str, pass: bool, detail: &str, elapsed: Duration) -> bool {
    println!(
        "criterion {id:>2} {}: {title}: {detail} [{:.2} s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

type Criterion = (u32, &'static str, fn() -> bool);

const CRITERIA: [Criterion; 12] = [
    (1, "duality_identities", duality_identities),
    (2, "characterization", characterization),
    (3, "type_classification", type_classification),
    (4, "canonical_pair_exactness", canonical_pair_exactness),
    (5, "sandwich", sandwich),
    (6, "manufactured_solutions", manufactured_solutions),
    (7, "existence_dichotomy", existence_dichotomy),
    (8, "nonuniqueness_witnesses", nonuniqueness_witnesses),
    (9, "quasiconvexity_corpus", quasiconvexity_corpus),
    (10, "dual_solve", dual_solve),
    (11, "figure_geometry", figure_geometry),
    (12, "twisted_monge_ampere", twisted_monge_ampere),
];

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut run = 0;
    let mut failed = Vec::new();
    for (id, name, check) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        run += 1;
        let pass = std::panic::catch_unwind(check).unwrap_or_else(|_| {
            println!("criterion {id:>2} FAIL: {name} panicked");
            false
        });
        if !pass {
            failed.push(id);
        }
    }
    println!("acceptance: {} of {run} criteria pass", run - failed.len());
    if !failed.is_empty() {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

fn entry(name: &str, p: Params) -> CatalogEntry {
    catalog::lookup(name, &p).unwrap()
}

fn with<F: FnOnce(&mut Params)>(f: F) -> Params {
    let mut p = Params::default();
    f(&mut p);
    p
}

fn saddle(x: f64, y: f64) -> f64 {
    x * x - y * y
}

fn duality_identities() -> bool {
    let t = Instant::now();
    let tol = Tolerances::default();
    let mut rows = duality_suite(2, &tol).unwrap();
    rows.extend(duality_suite(3, &tol).unwrap());
    let elapsed = t.elapsed();
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} n={} {}", r.set, r.n, r.identity.formula()))
        .collect();
    let sets: std::collections::BTreeSet<_> = rows.iter().map(|r| (r.set.clone(), r.n)).collect();
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let pass = failed.is_empty() && sets.len() == 28 && elapsed < Duration::from_secs(15);
    verdict(
        1,
        "duality identities",
        pass,
        &format!(
            "{} rows over {} sets, worst residual {worst:.1e}, failures {failed:?}",
            rows.len(),
            sets.len()
        ),
        elapsed,
    )
}

/// Entries whose set is a generalized equation, across parameter choices.
fn catalog_ges() -> Vec<(String, CatalogEntry)> {
    let mut out = Vec::new();
    let mut push = |label: String, e: CatalogEntry| {
        assert!(e.is_ge, "{label}");
        out.push((label, e));
    };
    for r in [1.0, 3.0] {
        push(format!("constrained-laplacian r={r}"), entry("constrained-laplacian", with(|p| p.r = Some(r))));
    }
    push("quasi-band 1,1".into(), entry("quasi-band", with(|p| p.lambda = Some(1.0))));
    push("quasi-band 0.5,2".into(), entry("quasi-band", with(|p| (p.r1, p.r2) = (Some(0.5), Some(2.0)))));
    push("subaffine-band 1,2".into(), entry("subaffine-band", with(|p| (p.r1, p.r2) = (Some(1.0), Some(2.0)))));
    push("band-intersection".into(), entry("band-intersection", Params::default()));
    for (k, l) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        push(format!("twisted-ma {k},{l}"), entry("twisted-ma", with(|p| (p.k, p.l) = (Some(k), Some(l)))));
    }
    push("split-constrained".into(), entry("split-constrained", Params::default()));
    push("affine".into(), entry("affine", Params::default()));
    for pair in ["p,p", "p,ptilde", "ptilde,p", "ptilde,ptilde"] {
        push(format!("elementary {pair}"), entry("elementary", with(|p| p.pair = Some(pair.into()))));
    }
    push("separate-convexity".into(), entry("separate-convexity", Params::default()));
    for f in ["p", "ptilde", "delta"] {
        push(format!("determined {f}"), entry("determined", with(|p| p.f = Some(f.into()))));
        push(format!("subequation-as-ge {f}"), entry("subequation-as-ge", with(|p| p.f = Some(f.into()))));
    }
    out
}

fn characterization() -> bool {
    let t = Instant::now();
    let tol = Tolerances::default();
    let ges = catalog_ges();
    let per_entry = 100_000usize.div_ceil(ges.len());
    let mut samples = 0;
    let mut failures = Vec::new();
    for (label, e) in &ges {
        let check = is_generalized_equation(&e.h, per_entry, &tol).unwrap();
        samples += check.samples;
        if !check.is_ge {
            failures.push(format!("{label}: {} disagreements", check.disagreements));
        }
    }
    let hyper = is_generalized_equation(&entry("hyperbola", Params::default()).h, 2000, &tol).unwrap();
    let witness_ok = match &hyper.witness {
        Some(w) => {
            let h = entry("hyperbola", Params::default()).h;
            let dia = jetcone::ge::diamond(&h).h();
            h.member(w).unwrap().class == Class::Outside && dia.member(w).unwrap().holds()
        }
        None => false,
    };
    let elapsed = t.elapsed();
    let pass = failures.is_empty()
        && samples >= 100_000
        && !hyper.is_ge
        && witness_ok
        && elapsed < Duration::from_secs(30);
    verdict(
        2,
        "generalized-equation characterization",
        pass,
        &format!(
            "{} entries, {samples} two-sided samples, failures {failures:?}; hyperbola rejected: {}, witness {:?}",
            ges.len(),
            !hyper.is_ge,
            hyper.witness.map(|w| w.rows())
        ),
        elapsed,
    )
}

fn type_classification() -> bool {
    let t = Instant::now();
    let tol = Tolerances::default();
    let cases: Vec<(&str, CatalogEntry, TypeLabel)> = vec![
        ("constrained Laplacian", entry("constrained-laplacian", Params::default()), TypeLabel::II),
        ("segment diamond", entry("segment", Params::default()), TypeLabel::IV),
        ("segment-or-traceless diamond", entry("segment-or-traceless", Params::default()), TypeLabel::III),
        ("(P, P)", entry("determined", with(|p| p.f = Some("p".into()))), TypeLabel::I),
        ("(Delta, Delta)", entry("determined", with(|p| p.f = Some("delta".into()))), TypeLabel::I),
        ("(P, EMPTY)", entry("subequation-as-ge", with(|p| p.f = Some("p".into()))), TypeLabel::III),
        ("(Delta, EMPTY)", entry("subequation-as-ge", with(|p| p.f = Some("delta".into()))), TypeLabel::III),
        ("affine", entry("affine", Params::default()), TypeLabel::II),
        ("quasi-band 1,1", entry("quasi-band", with(|p| p.lambda = Some(1.0))), TypeLabel::IV),
        ("quasi-band 2,2", entry("quasi-band", with(|p| p.lambda = Some(2.0))), TypeLabel::IV),
    ];
    let mut mismatches = Vec::new();
    for (label, e, want) in &cases {
        let got = classify_type(&e.ge, &tol).unwrap().label;
        if got != *want {
            mismatches.push(format!("{label}: expected {want}, got {got}"));
        }
    }
    verdict(
        3,
        "type classification",
        mismatches.is_empty(),
        &format!("{} cases, mismatches {mismatches:?}", cases.len()),
        t.elapsed(),
    )
}

fn canonical_pair_exactness() -> bool {
    let t = Instant::now();
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for name in ["constrained-laplacian", "segment", "segment-or-traceless", "split-constrained"] {
        let e = entry(name, Params::default());
        let cf = e.closed_forms.as_ref().unwrap();
        let cp = jetcone::ge::canonical_pair(&e.h);
        let d = [
            offset_distance(&cp.e_min, &cf.e_min, &tol).unwrap(),
            offset_distance(&cp.g_max, &cf.g_max, &tol).unwrap(),
            offset_distance(&cp.g_tilde_max, &cf.g_tilde_max, &tol).unwrap(),
        ];
        let m = d.iter().copied().fold(0.0, f64::max);
        worst = worst.max(m);
        lines.push(format!("{name} {m:.1e}"));
    }
    verdict(
        4,
        "canonical pair closed forms",
        worst <= 1e-7,
        &format!("{} directions, {}", tol.dirs, lines.join(", ")),
        t.elapsed(),
    )
}

fn sandwich() -> bool {
    let t = Instant::now();
    let tol = Tolerances::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for r in [0.5, 1.0, 3.0] {
        let e = entry("constrained-laplacian", with(|p| p.r = Some(r)));
        let cf = e.closed_forms.unwrap();
        let delta = Set::delta(2);
        let lower = contains(&cf.e_min, &delta, &tol).unwrap();
        let upper = contains(&delta, &cf.g_max, &tol).unwrap();
        let both = matches!(lower, Containment::Contained { .. }) && matches!(upper, Containment::Contained { .. });
        ok &= both;
        detail.push(format!("r={r}: {both}"));
    }
    verdict(5, "E_min in Delta in G_max", ok, &detail.join(", "), t.elapsed())
}

fn manufactured_solutions() -> bool {
    let t = Instant::now();
    let opts = SolveOptions::default();
    let grid = Grid::new(Domain::unit_square(), 65).unwrap();
    let e_min = entry("constrained-laplacian", with(|p| p.r = Some(3.0))).closed_forms.unwrap().e_min;
    let mut errors = Vec::new();
    for (label, f) in [("Delta", Set::delta(2)), ("E_min r=3", e_min)] {
        let rep = solve_boundary_equation(&f, &grid, &saddle, &opts).unwrap();
        errors.push((label, rep.solution.max_error(saddle)));
    }
    let quadratic_ok = errors.iter().all(|(_, e)| *e <= 1e-6);
    let cubic = |x: f64, y: f64| x * x * x - 3.0 * x * y * y;
    let study = convergence_study(&Set::delta(2), &Domain::unit_square(), &[17, 33, 65], &cubic, &opts).unwrap();
    // Second differences are exact on cubics, so a cold start lands on the
    // exact solution up to the solver tolerance as well.
    let cold = SolveOptions {
        initial: Initial::Constant { value: 0.0 },
        ..SolveOptions::default()
    };
    let cold = convergence_study(&Set::delta(2), &Domain::unit_square(), &[17, 33, 65], &cubic, &cold).unwrap();
    let elapsed = t.elapsed();
    let order_ok = study.observed_order.is_some_and(|o| o >= 1.9);
    let rows: Vec<String> = study
        .rows
        .iter()
        .map(|r| format!("{}: {:.1e}", r.nodes, r.error))
        .collect();
    verdict(
        6,
        "manufactured solutions",
        quadratic_ok && order_ok && elapsed < Duration::from_secs(60),
        &format!(
            "saddle errors {errors:?}; harmonic cubic errors [{}], observed order {:?}; from a zero start [{}]",
            rows.join(", "),
            study.observed_order,
            cold.rows.iter().map(|r| format!("{}: {:.1e}", r.nodes, r.error)).collect::<Vec<_>>().join(", ")
        ),
        elapsed,
    )
}

/// `‖h_E − h_G‖∞` for the constrained Laplacian with `r = 1` and saddle data,
/// pinned from the solver's own output.
const PINNED_GAP: f64 = 0.25;

fn existence_dichotomy() -> bool {
    let t = Instant::now();
    let opts = GeSolveOptions::default();
    let run = |r: f64, n: usize| {
        let e = entry("constrained-laplacian", with(|p| p.r = Some(r)));
        let grid = Grid::new(Domain::unit_square(), n).unwrap();
        solve_ge(&e.ge, &grid, &saddle, &opts).unwrap()
    };
    let solvable = run(3.0, 65);
    let coarse = run(1.0, 33);
    let fine = run(1.0, 65);
    let solution_ok = matches!(solvable.verdict, Verdict::Solution) && solvable.gap <= 1e-5;
    let gaps_ok = [&coarse, &fine]
        .iter()
        .all(|r| matches!(r.verdict, Verdict::NoSolutionEvidence { .. }) && r.gap >= 0.05);
    let persists = (fine.gap / coarse.gap - 1.0).abs() <= 0.2;
    let pinned = (fine.gap - PINNED_GAP).abs() <= 1e-6;
    verdict(
        7,
        "existence dichotomy",
        solution_ok && gaps_ok && persists && pinned,
        &format!(
            "r=3 gap {:.1e}; r=1 gap {:.10} at 33, {:.10} at 65 (pinned {PINNED_GAP})",
            solvable.gap, coarse.gap, fine.gap
        ),
        t.elapsed(),
    )
}

fn nonuniqueness_witnesses() -> bool {
    let t = Instant::now();
    let tol = Tolerances::default();
    let grid = Grid::new(Domain::unit_square(), 33).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (label, e) in [
        ("quasi-band 1,1", entry("quasi-band", with(|p| p.lambda = Some(1.0)))),
        ("segment diamond", entry("segment", Params::default())),
    ] {
        let w = nonuniqueness_witness(&e.ge, &grid, &tol).unwrap();
        // The bump peaks at 1.
        let good = w.pass() && w.sup_difference >= w.epsilon / 2.0;
        ok &= good;
        detail.push(format!(
            "{label}: eps {:.2e}, sup diff {:.2e}, same boundary {}, harmonic {}",
            w.epsilon,
            w.sup_difference,
            w.same_boundary,
            w.checks.iter().all(|c| c.pass)
        ));
    }
    verdict(8, "nonuniqueness witnesses", ok, &detail.join("; "), t.elapsed())
}

fn quasiconvexity_corpus() -> bool {
    let t = Instant::now();
    let grid = corpus_grid();
    let fns = corpus();
    let mut disagreements = Vec::new();
    for c in &fns {
        let u = GridFn::sample(&grid, c.u);
        for factor in [0.95, 1.05] {
            let lambda = factor * c.critical;
            let q = quasiconvex_check(&u, lambda).pass && quasiconvex_check(&u.neg(), lambda).pass;
            let l = c11_check(&u, lambda).pass;
            if q != l {
                disagreements.push(format!("{} at {factor}: quasiconvex {q}, c11 {l}", c.name));
            }
        }
    }
    let sine = GridFn::sample(&grid, |x, y| x.sin() + y.sin());
    let both = |lambda: f64| {
        [
            quasiconvex_check(&sine, lambda).pass,
            quasiconvex_check(&sine.neg(), lambda).pass,
            c11_check(&sine, lambda).pass,
        ]
    };
    let sine_ok = both(1.01) == [true; 3] && both(0.9) == [false; 3];
    verdict(
        9,
        "quasiconvexity and C^{1,1} agreement",
        fns.len() == 25 && disagreements.is_empty() && sine_ok,
        &format!(
            "{} functions, disagreements {disagreements:?}; sine at 1.01 {:?}, at 0.9 {:?}",
            fns.len(),
            both(1.01),
            both(0.9)
        ),
        t.elapsed(),
    )
}

fn dual_solve() -> bool {
    let t = Instant::now();
    let opts = SolveOptions::default();
    let grid = Grid::new(Domain::unit_square(), 33).unwrap();
    let e_min = entry("constrained-laplacian", with(|p| p.r = Some(3.0))).closed_forms.unwrap().e_min;
    let tent = |x: f64, _y: f64| (2.0 * x - 1.0).abs();
    type Case<'a> = (&'a str, Set, &'a dyn Fn(f64, f64) -> f64);
    let cases: [Case; 3] = [
        ("Delta", Set::delta(2), &saddle),
        ("E_min r=3", e_min, &saddle),
        ("P tent", Set::p(2), &tent),
    ];
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (label, f, phi) in cases {
        let rep = dual_solve_identity(&f, &grid, phi, &opts).unwrap();
        worst = worst.max(rep.discrepancy);
        detail.push(format!("{label} {:.1e}", rep.discrepancy));
    }
    verdict(10, "dual-solve identity", worst <= 1e-5, &detail.join(", "), t.elapsed())
}

fn figure_geometry() -> bool {
    let t = Instant::now();
    let mut worst: f64 = 1.0;
    let mut detail = Vec::new();
    let cl = with(|p| p.r = Some(1.0));
    for (name, params, which) in [
        ("constrained-laplacian", cl.clone(), Which::H),
        ("constrained-laplacian", cl.clone(), Which::EMin),
        ("constrained-laplacian", cl, Which::GMax),
        ("segment", Params::default(), Which::H),
        ("segment", Params::default(), Which::EMin),
        ("segment-or-traceless", Params::default(), Which::H),
        ("segment-or-traceless", Params::default(), Which::EMin),
        ("segment-or-traceless", Params::default(), Which::GMax),
    ] {
        let spec = FigureSpec::new(name, params, which);
        let (set, _) = figure::resolve(&spec).unwrap();
        let fig = figure::render(&set, spec.window, spec.resolution, &spec.style, "").unwrap();
        let rep = figure::membership_match(&fig, &set, 10_000, figure::default_band(&fig), 1);
        worst = worst.min(rep.fraction);
        detail.push(format!("{name} {which:?} {:.4}", rep.fraction));
    }
    verdict(11, "figure geometry", worst >= 0.995, &detail.join(", "), t.elapsed())
}

fn twisted_monge_ampere() -> bool {
    let t = Instant::now();
    let tau = Tolerances::default().member;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut mismatches = 0usize;
    let mut on_h = 0usize;
    for (k, l) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let e = entry("twisted-ma", with(|p| (p.k, p.l) = (Some(k), Some(l))));
        let (big_e, gt) = (e.ge.e().clone(), e.ge.g().dual());
        let n = k + l;
        for i in 0..100_000 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            if i % 2 == 0 {
                // Push onto H: x >= 0, y <= 0, prod x = |prod y|.
                for x in &mut v[..k] {
                    *x = x.abs();
                }
                for y in &mut v[k..] {
                    *y = -y.abs();
                }
                let px: f64 = v[..k].iter().product();
                let rest: f64 = v[k + 1..].iter().product::<f64>().abs();
                v[k] = -px / rest;
                if i % 4 == 0 {
                    let j = rng.random_range(0..n);
                    v[j] += rng.random_range(-1e-3..1e-3);
                }
            }
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let h = e.h.member_vec(&v, tau).unwrap().holds();
            let ge = big_e.member_vec(&v, tau).unwrap().holds() && gt.member_vec(&neg, tau).unwrap().holds();
            on_h += h as usize;
            mismatches += (h != ge) as usize;
        }
    }

    // Fibre of E over x in Q+: every y outside Q-, and y in Q- with |prod y| <= prod x.
    let mut fiber_mismatches = 0usize;
    let mut search_hits = 0usize;
    let mut fiber_samples = 0usize;
    for (k, l) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let e = entry("twisted-ma", with(|p| (p.k, p.l) = (Some(k), Some(l))));
        for _ in 0..2_500 {
            let x: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0)).collect();
            let y: Vec<f64> = (0..l)
                .map(|_| if rng.random_bool(0.8) { -rng.random_range(0.0..2.0) } else { rng.random_range(0.0..1.0) })
                .collect();
            let px: f64 = x.iter().product();
            let py: f64 = y.iter().product::<f64>().abs();
            let formula = y.iter().any(|&v| v > 0.0) || py <= px;
            if y.iter().all(|&v| v <= 0.0) && (py - px).abs() < 1e-6 {
                continue;
            }
            fiber_samples += 1;
            let point: Vec<f64> = x.iter().chain(&y).copied().collect();
            if e.ge.e().member_vec(&point, tau).unwrap().holds() != formula {
                fiber_mismatches += 1;
            }
            // Search for (x', y') in H below (x, y).
            let mut found = false;
            if y.iter().any(|&v| v > 0.0) {
                let below: Vec<f64> = (0..k)
                    .map(|_| 0.0)
                    .chain(y.iter().map(|&v| if v > 0.0 { 0.0 } else { v }))
                    .collect();
                found = e.h.member_vec(&below, tau).unwrap().holds();
            } else {
                let rest: f64 = y[1..].iter().product::<f64>().abs();
                for j in 0..=200 {
                    let s = j as f64 / 200.0;
                    let xs: Vec<f64> = x.iter().map(|v| v * s).collect();
                    let target: f64 = xs.iter().product();
                    // Push the first y coordinate down to hit the product exactly.
                    let y0 = if rest > 0.0 { -target / rest } else { y[0] };
                    if y0 <= y[0] {
                        let cand: Vec<f64> = xs.iter().copied().chain(std::iter::once(y0)).chain(y[1..].iter().copied()).collect();
                        if e.h.member_vec(&cand, tau).unwrap().holds() {
                            found = true;
                            break;
                        }
                    }
                }
            }
            if found != formula {
                search_hits += 1;
            }
        }
    }
    verdict(
        12,
        "twisted Monge-Ampere",
        mismatches == 0 && fiber_mismatches == 0 && search_hits == 0 && fiber_samples >= 9_900,
        &format!(
            "4 x 10^5 vectors ({on_h} in H), {mismatches} mismatches; {fiber_samples} fibre samples, \
             {fiber_mismatches} level mismatches, {search_hits} search mismatches"
        ),
        t.elapsed(),
    )
}
