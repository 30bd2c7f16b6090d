//! The Künneth projectors, the grading of a class on a power, and the
//! filtration level it sits in.

use std::sync::Arc;

use moddiag::correspondence::diagonal_class;
use moddiag::projectors::{filtration_level, grading_decomposition, projector, projector_identity_failures, ProjectorKind};
use moddiag::Builtin;

fn main() -> moddiag::Result<()> {
    let x = Arc::new("curve:g=2".parse::<Builtin>()?.build()?);
    for kind in ProjectorKind::ALL {
        println!("{kind}: {}", projector(&x, kind)?.kernel());
    }
    let failures = projector_identity_failures(&x)?;
    println!("projector identities: {}", if failures.is_empty() { "ok".to_string() } else { failures.join("; ") });

    let delta = diagonal_class(&x)?;
    for (m, part) in grading_decomposition(&delta)?.iter().enumerate() {
        if !part.is_zero() {
            println!("⟨{m}⟩ part of [Δ]: {part}");
        }
    }
    println!("[Δ] has filtration level {:?}", filtration_level(&delta)?);
    Ok(())
}
