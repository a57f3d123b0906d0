//! Two-sided quasiconvexity against a Lipschitz bound on the gradient.

use jetcone::grid::GridFn;
use jetcone::viscosity::{c11_check, corpus, corpus_grid, quasiconvex_check};

fn main() {
    let grid = corpus_grid();
    for c in corpus() {
        let u = GridFn::sample(&grid, c.u);
        let row: Vec<String> = [0.95, 1.05]
            .iter()
            .map(|f| {
                let lambda = f * c.critical;
                let q = quasiconvex_check(&u, lambda).pass && quasiconvex_check(&u.neg(), lambda).pass;
                format!("{f}: {q}/{}", c11_check(&u, lambda).pass)
            })
            .collect();
        println!("{:<28} critical {:<6.3} {}", c.name, c.critical, row.join("  "));
    }
}
