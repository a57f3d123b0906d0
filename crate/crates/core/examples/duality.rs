//! Dirichlet duals and the identities they satisfy, checked on boundary graphs.

use jetcone::catalog::subequation_suite;
use jetcone::identities::check_identities;
use jetcone::{Set, SymMat, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let p = Set::p(2);
    let a = SymMat::diag(&[-1.0, 2.0]);
    println!("A = diag(-1, 2)");
    println!("  in P:  {:?}", p.member(&a)?.class);
    println!("  in P~: {:?}", p.dual().member(&a)?.class);
    println!("  P~~ is P: {}", p.dual().dual().level(&a)? == p.level(&a)?);

    for (name, f) in subequation_suite(2)?.into_iter().take(5) {
        for row in check_identities(&name, &f, &tol)? {
            println!(
                "{:<8} {:<24} residual {:.1e} over {} directions",
                name,
                row.identity.formula(),
                row.residual,
                row.directions
            );
        }
    }
    Ok(())
}
