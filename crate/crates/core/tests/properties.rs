use jetcone::catalog::subequation_suite;
use jetcone::cone::offset_distance;
use jetcone::formula::Formula;
use jetcone::grid::{Domain, Grid, GridFn};
use jetcone::solver::{solve_boundary_equation, solve_ge, GeSolveOptions, SolveOptions, Verdict, MIN_TOL_EXIST};
use jetcone::viscosity::check_subharmonic;
use jetcone::{contains, Set, SymMat, Tolerances};
use proptest::prelude::*;

fn sym2() -> impl Strategy<Value = SymMat> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| SymMat::new(2, vec![a, b, c]).unwrap())
}

fn sym3() -> impl Strategy<Value = SymMat> {
    prop::collection::vec(-3.0..3.0f64, 6).prop_map(|u| SymMat::new(3, u).unwrap())
}

fn suite_set(n: usize) -> impl Strategy<Value = Set> {
    let sets: Vec<Set> = subequation_suite(n).unwrap().into_iter().map(|(_, s)| s).collect();
    prop::sample::select(sets)
}

fn cheap_tol() -> Tolerances {
    Tolerances {
        dirs: 40,
        ..Tolerances::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(f in suite_set(2), a in sym2()) {
        let l = f.level(&a).unwrap();
        let ll = f.dual().dual().level(&a).unwrap();
        prop_assert!((l - ll).abs() <= 1e-6, "{f}: {l} vs {ll}");
    }

    #[test]
    fn dual_is_complement_of_negated_interior(f in suite_set(3), a in sym3()) {
        // A in dual(F) exactly when -A is not in Int F.
        let d = f.dual().level(&a).unwrap();
        let l = f.level(&a.neg()).unwrap();
        prop_assume!(d.abs() > 1e-6 && l.abs() > 1e-6);
        prop_assert_eq!(d >= 0.0, l <= 0.0);
    }

    #[test]
    fn positivity(f in suite_set(2), a in sym2(), p in sym2()) {
        let p = SymMat::diag(&[p.eigenvalues()[0].abs(), p.eigenvalues()[1].abs()]);
        let before = f.level(&a).unwrap();
        let after = f.level(&a.add(&p)).unwrap();
        prop_assert!(after >= before - 1e-6, "{f}: {before} then {after}");
    }

    #[test]
    fn shifting_a_set_shifts_its_level(f in suite_set(2), a in sym2(), t in -2.0..2.0f64) {
        let l = f.level(&a).unwrap();
        let lt = f.shift(t).level(&a.shift(t)).unwrap();
        prop_assert!((lt - l).abs() <= 1e-6, "{f}: {l} then {lt} after {t}");
    }

    #[test]
    fn shifted_sets_are_nested(f in suite_set(2), s in -2.0..2.0f64, t in 0.01..2.0f64) {
        prop_assume!(!f.is_sentinel());
        let tol = cheap_tol();
        prop_assert!(contains(&f.shift(s + t), &f.shift(s), &tol).unwrap().holds());
        let d = offset_distance(&f.shift(s), &f.shift(s + t), &tol).unwrap();
        prop_assert!((d - t).abs() <= 1e-6, "{f}: distance {d} for shift {t}");
    }

    #[test]
    fn eigenvalues_sum_to_the_trace(a in sym3()) {
        let e = a.eigenvalues();
        prop_assert!((e.iter().sum::<f64>() - a.trace()).abs() <= 1e-9);
        prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn grid_functions_round_trip_through_json(a in -5.0..5.0f64, b in -5.0..5.0f64, n in 3usize..12) {
        let g = Grid::new(Domain::unit_square(), n).unwrap();
        let u = GridFn::sample(&g, |x, y| a * x.sin() + b * y * y);
        let back: GridFn = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn formulas_round_trip_through_display(a in -5.0..5.0f64, b in 0.1..5.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let src = format!("{a}*x^2 - sin(y)/{b} + abs(x - y)");
        let f = Formula::parse(&src).unwrap();
        let g = Formula::parse(&f.to_string()).unwrap();
        prop_assert!((f.eval(x, y) - g.eval(x, y)).abs() <= 1e-12);
        let want = a * x * x - y.sin() / b + (x - y).abs();
        prop_assert!((f.eval(x, y) - want).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn harmonic_quadratics_are_reproduced(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -1.0..1.0f64) {
        let g = Grid::new(Domain::unit_square(), 9).unwrap();
        let u = |x: f64, y: f64| a * (x * x - y * y) + b * x * y + c * x;
        let rep = solve_boundary_equation(&Set::delta(2), &g, &u, &SolveOptions::default()).unwrap();
        prop_assert!(rep.solution.max_error(u) <= 1e-6);
    }

    #[test]
    fn discrete_comparison(a in -1.0..1.0f64, bump in 0.0..0.5f64, r in 0.5..3.0f64) {
        // Ordered boundary data give ordered solutions.
        let g = Grid::new(Domain::unit_square(), 9).unwrap();
        let f = Set::delta(2).intersect(&Set::p(2).shift(r)).unwrap();
        let lo = |x: f64, y: f64| a * x * y + (3.0 * x).sin();
        let hi = |x: f64, y: f64| lo(x, y) + bump * (1.0 + x);
        let opts = SolveOptions::default();
        let ul = solve_boundary_equation(&f, &g, &lo, &opts).unwrap().solution;
        let uh = solve_boundary_equation(&f, &g, &hi, &opts).unwrap().solution;
        for (i, j) in g.indices() {
            prop_assert!(ul.get(i, j) <= uh.get(i, j) + 1e-7);
        }
    }

    #[test]
    fn interior_quadratics_are_subharmonic(a in -2.0..2.0f64, b in -1.0..1.0f64, d in 0.2..1.0f64) {
        // D²u = [[2a + 2d, b], [b, -2a + 2d]] lies strictly inside Delta.
        let g = Grid::new(Domain::unit_square(), 17).unwrap();
        let u = GridFn::sample(&g, |x, y| (a + d) * x * x + b * x * y + (d - a) * y * y);
        prop_assert!(check_subharmonic(&u, &Set::delta(2), 1e-7).unwrap().pass);
        prop_assert!(!check_subharmonic(&u.neg(), &Set::delta(2), 1e-7).unwrap().pass);
    }
}

fn laplacian_solution(r: f64, mirror: bool) -> GridFn {
    let e = jetcone::catalog::constrained_laplacian(r, 2).unwrap();
    let ge = if mirror { e.ge.mirror() } else { e.ge };
    let grid = Grid::new(Domain::unit_square(), 17).unwrap();
    let rep = solve_ge(&ge, &grid, &|x, y| x * x - y * y + 0.5 * x * y, &GeSolveOptions::default()).unwrap();
    assert!(matches!(rep.verdict, Verdict::Solution), "r = {r}: {:?}", rep.verdict);
    rep.solution().unwrap().clone()
}

#[test]
fn mirror_problem_has_the_same_solution() {
    let u = laplacian_solution(3.0, false);
    let v = laplacian_solution(3.0, true);
    assert!(u.max_abs_diff(&v).unwrap() <= 10.0 * MIN_TOL_EXIST);
}

#[test]
fn solutions_persist_as_the_band_widens() {
    let u = laplacian_solution(3.0, false);
    for r in [4.0, 8.0] {
        assert!(u.max_abs_diff(&laplacian_solution(r, false)).unwrap() <= 10.0 * MIN_TOL_EXIST);
    }
}
