//! Formal sums of partial diagonals, their calculus, and realization on a
//! concrete model.

use std::sync::Arc;

use moddiag::formal::{formal_gamma, stirling, weight_support_nonempty};
use moddiag::projectors::filtration_level;
use moddiag::Builtin;

fn main() -> moddiag::Result<()> {
    let g3 = formal_gamma(3)?;
    println!("γ³ = {g3}");
    println!("formal level {:?}", g3.formal_level());
    println!("δ(γ³) = {}", g3.delta()?);
    println!("p_3(γ³) = {}", g3.project(2, true)?);

    let c = Arc::new("curve:g=1".parse::<Builtin>()?.build()?);
    let realized = g3.realize(&c)?;
    println!("on a genus 1 curve: zero {} level {:?}", realized.is_zero(), filtration_level(&realized)?);

    let row: Vec<String> = (0..=6).map(|k| stirling(6, k).to_string()).collect();
    println!("S(6, k) = {}", row.join(" "));
    for (n, g) in [(2, 1), (3, 2), (5, 2)] {
        let w = weight_support_nonempty(n, g)?;
        println!("weights n = {n} g = {g}: nonempty {} witness {:?}", w.nonempty, w.witness);
    }
    Ok(())
}
