//! Modified diagonals of curves and abelian varieties, and the smallest
//! power at which they vanish.

use std::sync::Arc;

use moddiag::diagonals::{albanese_image_dim, gamma_expansion, gamma_map, modified_diagonal, vanishing_threshold};
use moddiag::{Builtin, TensorClass};

fn main() -> moddiag::Result<()> {
    let c = Arc::new("curve:g=2".parse::<Builtin>()?.build()?);
    println!("Γ²(C) = {}", modified_diagonal(&c, 2)?);

    let fundamental = TensorClass::fundamental(&c, 1)?;
    for n in 1..=4 {
        let p = gamma_map(&fundamental, n)?;
        let e = gamma_expansion(&fundamental, n)?;
        println!("n = {n}: zero {} routes agree {}", p.is_zero(), p.result == e.result);
    }

    for spec in ["curve:g=0", "curve:g=1", "curve:g=3", "abelian:g=2", "k3:rho=2"] {
        let m = Arc::new(spec.parse::<Builtin>()?.build()?);
        let search = vanishing_threshold(&m, 5)?;
        println!(
            "{spec:12} d = {} e = {} vanishing {:?} threshold {:?}",
            m.dimension(),
            albanese_image_dim(&m)?,
            search.vanishing,
            search.threshold
        );
    }
    Ok(())
}
