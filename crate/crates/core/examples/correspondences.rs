//! Pullback, pushforward and correspondences between powers of a curve.

use std::sync::Arc;

use moddiag::correspondence::diagonal_class;
use moddiag::{Builtin, Coord, Correspondence, PowerMorphism, TensorClass};

fn main() -> moddiag::Result<()> {
    let x = Arc::new("curve:g=1".parse::<Builtin>()?.build()?);

    let delta = diagonal_class(&x)?;
    println!("[Δ] = {delta}");
    println!("∫[Δ]·[Δ] = {} (Euler characteristic)", delta.multiply(&delta)?.integrate());

    // the small diagonal X → X^3 and the map forgetting the middle factor
    let small = PowerMorphism::new(&x, 1, vec![Coord::source(0); 3])?;
    let fundamental = TensorClass::fundamental(&x, 1)?;
    let small_diagonal = small.pushforward(&fundamental)?;
    println!("[Δ_123] has {} terms", small_diagonal.len());

    let forget = PowerMorphism::projection(&x, 3, &[0, 2])?;
    println!("p_13 of the small diagonal: {}", forget.pushforward(&small_diagonal)?);

    // x ↦ (x, o): pulling back along it evaluates the second slot at the point
    let with_point = PowerMorphism::new(&x, 1, vec![Coord::source(0), Coord::BasePoint])?;
    println!("(id, o)^*[Δ] = {}", with_point.pullback(&delta)?);

    let graph = Correspondence::graph(&small)?;
    let id = Correspondence::identity(&x, 1)?;
    let a1 = TensorClass::basis_by_ids(&x, &["a1"])?;
    println!("Γ_δ(a1) = {}", graph.apply(&a1)?);
    println!("Δ∘Δ = Δ: {}", id.then(&id)?.kernel() == id.kernel());
    Ok(())
}
