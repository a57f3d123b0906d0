//! Saddle boundary data for the constrained Laplacian: solvable for a wide
//! band, not for a narrow one.

use jetcone::catalog::{lookup, Params};
use jetcone::grid::{Domain, Grid};
use jetcone::solver::{solve_ge, GeSolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(Domain::unit_square(), 33)?;
    let phi = |x: f64, y: f64| x * x - y * y;
    for r in [3.0, 1.0] {
        let e = lookup("constrained-laplacian", &Params { r: Some(r), ..Params::default() })?;
        let rep = solve_ge(&e.ge, &grid, &phi, &GeSolveOptions::default())?;
        println!("r = {r}");
        println!("  E operator {} ({} iterations)", rep.h_e.operator, rep.h_e.iterations);
        println!("  G operator {} ({} iterations)", rep.h_g.operator, rep.h_g.iterations);
        println!("  gap {:.6}, verdict {:?}", rep.gap, rep.verdict);
    }
    Ok(())
}
