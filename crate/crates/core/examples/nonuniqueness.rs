//! Two different harmonics with the same boundary values, built from a point
//! in the interior of H.

use jetcone::catalog::{lookup, Params};
use jetcone::grid::{Domain, Grid};
use jetcone::solver::nonuniqueness_witness;
use jetcone::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    for domain in [Domain::unit_square(), Domain::Disk { cx: 0.0, cy: 0.0, r: 1.0 }] {
        let grid = Grid::new(domain.clone(), 33)?;
        for (name, params) in [
            ("quasi-band", Params { lambda: Some(1.0), ..Params::default() }),
            ("segment", Params::default()),
        ] {
            let e = lookup(name, &params)?;
            let w = nonuniqueness_witness(&e.ge, &grid, &tol)?;
            println!(
                "{name} on {domain:?}: A = {:?}, bump {:.2e}, sup |h1 - h2| = {:.2e}, verified {}",
                w.a.rows(),
                w.epsilon,
                w.sup_difference,
                w.pass()
            );
        }
    }
    let cl = lookup("constrained-laplacian", &Params::default())?;
    let grid = Grid::new(Domain::unit_square(), 17)?;
    match nonuniqueness_witness(&cl.ge, &grid, &tol) {
        Ok(_) => println!("constrained-laplacian: unexpected witness"),
        Err(e) => println!("constrained-laplacian: {e}"),
    }
    Ok(())
}
