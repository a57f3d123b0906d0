//! det A = |det B| at the level of block spectra.

use jetcone::catalog::twisted_ma;
use jetcone::ge::classify_type;
use jetcone::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = twisted_ma(1, 2)?;
    let (big_e, gt) = (e.ge.e(), e.ge.g().dual());
    let tau = Tolerances::default().member;
    let points: [[f64; 3]; 4] = [[2.0, -1.0, -2.0], [2.0, -1.0, -1.0], [2.0, 1.0, -3.0], [0.5, -1.0, -1.0]];
    for x in points {
        let neg = x.map(|v| -v);
        println!(
            "x = {x:?}: H {:?}, E {:?}, -G~ {:?}",
            e.h.member_vec(&x, tau)?.class,
            big_e.member_vec(&x, tau)?.class,
            gt.member_vec(&neg, tau)?.class
        );
    }
    for (k, l) in [(1, 1), (2, 2)] {
        let t = classify_type(&twisted_ma(k, l)?.ge, &Tolerances::default())?;
        println!("({k},{l}): type {}", t.label);
    }
    Ok(())
}
