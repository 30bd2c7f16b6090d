//! Builtin models, a hand-assembled model, and what validation reports
//! when the algebra data is inconsistent.

use moddiag::model::{validate_model, BasisElement, Builtin};
use moddiag::rational::{int, one};
use moddiag::reports::{ModelFile, resolve_model};
use moddiag::ModelParts;

fn main() -> moddiag::Result<()> {
    for spec in ["point", "curve:g=2", "abelian:g=2", "k3:rho=3", "product:curve:g=1,curve:g=1", "cover:g=3,h=1"] {
        let m = resolve_model(spec)?;
        println!("{spec:32} dim {} ranks {:?}", m.dimension(), m.ranks());
    }
    for line in Builtin::catalogue() {
        println!("  {line}");
    }

    // P^1 by hand: 1, pt with pt·pt = 0
    let basis = vec![BasisElement { id: "1".into(), degree: 0 }, BasisElement { id: "pt".into(), degree: 2 }];
    let mut parts = ModelParts::new("P1", 1, basis, 1);
    parts.set_unit(0);
    parts.trace = vec![int(0), one()];
    let p1 = parts.clone().build()?;
    println!("\n{p1}: ranks {:?}", p1.ranks());

    // a trace on the unit breaks the pairing's degree condition
    parts.trace[0] = one();
    let broken = parts.build_unchecked();
    for v in validate_model(&broken) {
        println!("violation: {v}");
    }

    let file = ModelFile::from_model(resolve_model("curve:g=1")?.as_ref());
    println!("\n{}", serde_json::to_string_pretty(&file).expect("serializable"));
    Ok(())
}
