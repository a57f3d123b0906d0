//! Eigenvalue-plane pictures of planar sets, written as SVG.

use jetcone::catalog::Params;
use jetcone::figure::{default_band, membership_match, render, resolve, FigureSpec, Which};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("jetcone-figures");
    std::fs::create_dir_all(&dir)?;
    let figures = [
        ("constrained-laplacian", Params { r: Some(1.0), ..Params::default() }, Which::H),
        ("constrained-laplacian", Params { r: Some(1.0), ..Params::default() }, Which::EMin),
        ("segment", Params::default(), Which::H),
        ("segment-or-traceless", Params::default(), Which::GMax),
    ];
    for (name, params, which) in figures {
        let spec = FigureSpec::new(name, params, which);
        let (set, caption) = resolve(&spec)?;
        let fig = render(&set, spec.window, spec.resolution, &spec.style, &caption)?;
        let m = membership_match(&fig, &set, 10_000, default_band(&fig), 1);
        let path = dir.join(format!("{name}-{which:?}.svg"));
        std::fs::write(&path, &fig.svg)?;
        println!("{caption}: {:.2}% agreement, {}", 100.0 * m.fraction, path.display());
    }
    Ok(())
}
