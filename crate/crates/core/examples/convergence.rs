//! Grid refinement for the wide-stencil solver.
//!
//! Second differences are exact on cubics, so the square case is reproduced
//! exactly. Disk boundary nodes take the data at the nearest point of the
//! circle, which makes the disk cases first order at best.

use jetcone::grid::Domain;
use jetcone::solver::{convergence_study, SolveOptions};
use jetcone::Set;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = SolveOptions::default();
    let disk = Domain::Disk { cx: 0.0, cy: 0.0, r: 1.0 };
    type Case = (&'static str, Set, Domain, fn(f64, f64) -> f64);
    let cases: [Case; 3] = [
        ("Delta, x^3 - 3xy^2, square", Set::delta(2), Domain::unit_square(), |x, y| x * x * x - 3.0 * x * y * y),
        ("Delta, exp(x) cos(y), disk", Set::delta(2), disk.clone(), |x, y| x.exp() * y.cos()),
        ("P, max(x, 0)^2, disk", Set::p(2), disk, |x, _| x.max(0.0).powi(2)),
    ];
    for (label, f, domain, exact) in cases {
        let study = convergence_study(&f, &domain, &[17, 33, 65], &exact, &opts)?;
        println!("{label}");
        for r in &study.rows {
            println!("  n = {:<3} error {:.2e}  order {:?}", r.nodes, r.error, r.order.map(|o| (o * 100.0).round() / 100.0));
        }
    }
    Ok(())
}
