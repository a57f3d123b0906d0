//! The least pair presenting a closed set, against known closed forms.

use jetcone::catalog::{lookup, Params};
use jetcone::cone::offset_distance;
use jetcone::ge::{canonical_pair, is_generalized_equation};
use jetcone::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    for name in ["constrained-laplacian", "segment", "segment-or-traceless", "split-constrained"] {
        let e = lookup(name, &Params::default())?;
        let cp = canonical_pair(&e.h);
        let cf = e.closed_forms.as_ref().expect("closed forms");
        println!("{name}: H = {}", e.h);
        println!("  E_min = {}  (distance to closed form {:.1e})", cf.e_min, offset_distance(&cp.e_min, &cf.e_min, &tol)?);
        println!("  G_max = {}  (distance to closed form {:.1e})", cf.g_max, offset_distance(&cp.g_max, &cf.g_max, &tol)?);
        let check = is_generalized_equation(&e.h, 2000, &tol)?;
        println!("  H is its own diamond: {}", check.is_ge);
    }
    Ok(())
}
