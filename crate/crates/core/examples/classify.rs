//! Types I-IV for a handful of catalog generalized equations.

use jetcone::catalog::{lookup, Params};
use jetcone::ge::classify_type;
use jetcone::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    let entries = [
        ("constrained-laplacian", Params { r: Some(1.0), ..Params::default() }),
        ("segment", Params::default()),
        ("segment-or-traceless", Params::default()),
        ("determined", Params { f: Some("delta".into()), ..Params::default() }),
        ("elementary", Params { pair: Some("ptilde,p".into()), ..Params::default() }),
        ("quasi-band", Params { lambda: Some(1.0), ..Params::default() }),
    ];
    for (name, params) in entries {
        let e = lookup(name, &params)?;
        let t = classify_type(&e.ge, &tol)?;
        println!(
            "{:<24} type {:<4} uniqueness {:<5} existence {:<5} {}",
            name,
            t.label.to_string(),
            t.uniqueness(),
            t.existence(),
            e.summary
        );
    }
    Ok(())
}
