//! The base-point projectors `π₀`, `π₊`, `π⋆`, `π_{2d}`, Künneth components
//! of classes on `X^n`, the `⟨m⟩`-grading and the filtration `Fil^r`.
//!
//! All four projectors preserve degree, so on `X^n` they are applied slot
//! by slot without signs. [`tensor_projector_kernel`] builds the same
//! operators as honest kernels on `X^{2n}` for small `n`; the two agree.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;

use crate::correspondence::{diagonal_class, Correspondence, PowerMorphism};
use crate::error::{Error, Result};
use crate::model::{Model, SparseVec};
use crate::rational::Rational;
use crate::subset::Subset;
use crate::tensor::{expand_slots, TensorClass, Terms};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectorKind {
    Pi0,
    PiPlus,
    PiStar,
    Pi2d,
}

impl ProjectorKind {
    pub const ALL: [ProjectorKind; 4] =
        [ProjectorKind::Pi0, ProjectorKind::PiPlus, ProjectorKind::PiStar, ProjectorKind::Pi2d];

    fn needs_positive_dimension(self) -> bool {
        matches!(self, ProjectorKind::PiStar | ProjectorKind::Pi2d)
    }
}

impl fmt::Display for ProjectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectorKind::Pi0 => "pi0",
            ProjectorKind::PiPlus => "piPlus",
            ProjectorKind::PiStar => "piStar",
            ProjectorKind::Pi2d => "pi2d",
        })
    }
}

impl FromStr for ProjectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProjectorKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown projector {s:?}")))
    }
}

fn check_kind(model: &Model, kind: ProjectorKind) -> Result<()> {
    if kind.needs_positive_dimension() && model.dimension() == 0 {
        return Err(Error::Precondition(format!("{kind} needs dim X > 0")));
    }
    Ok(())
}

/// `π` as a correspondence `X → X`:
/// `π₀ = 1⊗[a]`, `π_{2d} = [a]⊗1`, `π₊ = Δ − π₀`, `π⋆ = Δ − π₀ − π_{2d}`.
pub fn projector(model: &Arc<Model>, kind: ProjectorKind) -> Result<Correspondence> {
    check_kind(model, kind)?;
    let unit = model.unit()?;
    let pt = model.point();
    let pi0 = TensorClass::basis(model, vec![unit, pt])?;
    let pi2d = TensorClass::basis(model, vec![pt, unit])?;
    let kernel = match kind {
        ProjectorKind::Pi0 => pi0,
        ProjectorKind::Pi2d => pi2d,
        ProjectorKind::PiPlus => diagonal_class(model)?.sub(&pi0)?,
        ProjectorKind::PiStar => diagonal_class(model)?.sub(&pi0)?.sub(&pi2d)?,
    };
    Correspondence::new(1, 1, kernel)
}

/// The action of `π` on basis elements, from the closed forms
/// `π₀(x) = (∫x)[a]` and `π_{2d}(x) = a^*(x)[X]`.
pub fn projector_matrix(model: &Model, kind: ProjectorKind) -> Result<Vec<SparseVec>> {
    check_kind(model, kind)?;
    let unit = model.unit()?;
    let pt = model.point();
    let mut out = Vec::with_capacity(model.len());
    for b in 0..model.len() {
        let mut v: Vec<(usize, Rational)> = Vec::new();
        let keep_self = !matches!(kind, ProjectorKind::Pi0 | ProjectorKind::Pi2d);
        if keep_self {
            v.push((b, Rational::from_integer(1.into())));
        }
        let p0 = model.trace(b).clone();
        let p2d = model.eval_at_point(b);
        let mut bump = |i: usize, c: Rational| {
            if c.is_zero() {
                return;
            }
            match v.iter_mut().find(|(j, _)| *j == i) {
                Some((_, x)) => *x += c,
                None => v.push((i, c)),
            }
        };
        match kind {
            ProjectorKind::Pi0 => bump(pt, p0),
            ProjectorKind::Pi2d => bump(unit, p2d),
            ProjectorKind::PiPlus => bump(pt, -p0),
            ProjectorKind::PiStar => {
                bump(pt, -p0);
                bump(unit, -p2d);
            }
        }
        v.retain(|(_, c)| !c.is_zero());
        v.sort_by_key(|(i, _)| *i);
        out.push(v);
    }
    Ok(out)
}

/// `π_1 ⊗ … ⊗ π_n` applied to a class on `X^n`, slot by slot.
pub fn apply_tensor_projector(alpha: &TensorClass, kinds: &[ProjectorKind]) -> Result<TensorClass> {
    let model = alpha.model();
    let mut cache: Vec<(ProjectorKind, Vec<SparseVec>)> = Vec::new();
    for &k in kinds {
        if !cache.iter().any(|(c, _)| *c == k) {
            cache.push((k, projector_matrix(model, k)?));
        }
    }
    let maps: Vec<&[SparseVec]> =
        kinds.iter().map(|k| cache.iter().find(|(c, _)| c == k).unwrap().1.as_slice()).collect();
    alpha.map_slots(&maps)
}

/// `π^{⊗n}` for a single kind.
pub fn apply_power(alpha: &TensorClass, kind: ProjectorKind) -> Result<TensorClass> {
    apply_tensor_projector(alpha, &vec![kind; alpha.power()])
}

/// `π_1 ⊗ … ⊗ π_n` as a kernel on `X^{2n}`; only for `n ≤ 3`.
pub fn tensor_projector_kernel(model: &Arc<Model>, kinds: &[ProjectorKind]) -> Result<Correspondence> {
    if kinds.is_empty() || kinds.len() > 3 {
        return Err(Error::param("tensor projector kernels are materialized only for 1 <= n <= 3"));
    }
    let mut acc = projector(model, kinds[0])?;
    for &k in &kinds[1..] {
        acc = acc.tensor(&projector(model, k)?)?;
    }
    Ok(acc)
}

fn kinds_for(j: Subset, n: usize) -> Vec<ProjectorKind> {
    (0..n).map(|i| if j.contains(i) { ProjectorKind::PiPlus } else { ProjectorKind::Pi0 }).collect()
}

/// The component of `α` in `h_J(X^n)`: `π₊` on `J`, `π₀` elsewhere.
pub fn kunneth_component(alpha: &TensorClass, j: Subset) -> Result<TensorClass> {
    let n = alpha.power();
    if !j.is_subset_of(Subset::full(n)) {
        return Err(Error::shape(format!("subset {j} not inside 1..{n}")));
    }
    apply_tensor_projector(alpha, &kinds_for(j, n))
}

/// All `⟨m⟩`-components at once, indexed by `m = 0..=n`.
pub fn grading_decomposition(alpha: &TensorClass) -> Result<Vec<TensorClass>> {
    let model = alpha.model();
    let n = alpha.power();
    let p0 = projector_matrix(model, ProjectorKind::Pi0)?;
    let pp = projector_matrix(model, ProjectorKind::PiPlus)?;
    let mut parts: Vec<Terms> = vec![Terms::new(); n + 1];
    for (key, c) in alpha.terms() {
        // choose π₀ or π₊ per slot; empty images prune the choice
        let mut stack: Vec<(usize, usize, Vec<&SparseVec>)> = vec![(0, 0, Vec::with_capacity(n))];
        while let Some((slot, plus, chosen)) = stack.pop() {
            if slot == n {
                expand_slots(&chosen, c, &mut parts[plus]);
                continue;
            }
            let b = key[slot];
            for (v, extra) in [(&p0[b], 0), (&pp[b], 1)] {
                if !v.is_empty() {
                    let mut next = chosen.clone();
                    next.push(v);
                    stack.push((slot + 1, plus + extra, next));
                }
            }
        }
    }
    Ok(parts.into_iter().map(|t| TensorClass::from_terms_unchecked(model, n, t)).collect())
}

/// The sum of the Künneth components with `|J| = m`.
pub fn grading_component(alpha: &TensorClass, m: usize) -> Result<TensorClass> {
    if m > alpha.power() {
        return Err(Error::param(format!("grading index {m} exceeds power {}", alpha.power())));
    }
    Ok(grading_decomposition(alpha)?.swap_remove(m))
}

/// The largest `r` with `α ∈ Fil^r`, or `None` for `α = 0`.
pub fn filtration_level(alpha: &TensorClass) -> Result<Option<usize>> {
    let parts = grading_decomposition(alpha)?;
    let n = alpha.power();
    Ok(parts.iter().rposition(|p| !p.is_zero()).map(|m| n - m))
}

/// `α ∈ Fil^r`.
pub fn in_filtration(alpha: &TensorClass, r: usize) -> Result<bool> {
    Ok(filtration_level(alpha)?.is_none_or(|l| l >= r))
}

/// The two auxiliary product identities on `X × X^n`:
/// `(id×p_i)^*π_{2d} · (id×p_j)^*π_{2d} = 0` and
/// `(id×p_i)^*π_{2d} · (id×p_j)^*π⋆ = 0` for `i ≠ j`.
/// Returns the offending `(i, j)` pairs.
pub fn auxiliary_product_failures(model: &Arc<Model>, n: usize) -> Result<Vec<(usize, usize, &'static str)>> {
    let pi2d = projector(model, ProjectorKind::Pi2d)?;
    let pistar = projector(model, ProjectorKind::PiStar)?;
    let lift = |i: usize, k: &Correspondence| -> Result<TensorClass> {
        PowerMorphism::projection(model, n + 1, &[0, i + 1])?.pullback(k.kernel())
    };
    let mut failures = Vec::new();
    for i in 0..n {
        let a = lift(i, &pi2d)?;
        for j in (0..n).filter(|&j| j != i) {
            if !a.multiply(&lift(j, &pi2d)?)?.is_zero() {
                failures.push((i, j, "pi2d*pi2d"));
            }
            if !a.multiply(&lift(j, &pistar)?)?.is_zero() {
                failures.push((i, j, "pi2d*piStar"));
            }
        }
    }
    Ok(failures)
}

/// Orthogonality, idempotence and completeness of the projectors as kernel
/// equalities on `X × X`. Returns the names of the identities that fail.
pub fn projector_identity_failures(model: &Arc<Model>) -> Result<Vec<String>> {
    let delta = Correspondence::identity(model, 1)?;
    let p0 = projector(model, ProjectorKind::Pi0)?;
    let pp = projector(model, ProjectorKind::PiPlus)?;
    let mut failures = Vec::new();
    let mut expect = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    expect("pi0+piPlus=id", p0.add(&pp)? == delta);
    expect("pi0^2=pi0", p0.then(&p0)? == p0);
    expect("piPlus^2=piPlus", pp.then(&pp)? == pp);
    expect("pi0*piPlus=0", p0.then(&pp)?.kernel().is_zero());
    expect("piPlus*pi0=0", pp.then(&p0)?.kernel().is_zero());
    if model.dimension() > 0 {
        let ps = projector(model, ProjectorKind::PiStar)?;
        let p2 = projector(model, ProjectorKind::Pi2d)?;
        expect("pi0+piStar+pi2d=id", p0.add(&ps)?.add(&p2)? == delta);
        expect("piStar^2=piStar", ps.then(&ps)? == ps);
        expect("pi2d^2=pi2d", p2.then(&p2)? == p2);
        let named = [("pi0", &p0), ("piStar", &ps), ("pi2d", &p2)];
        for (a, x) in named {
            for (b, y) in named {
                if a != b {
                    expect(&format!("{a}*{b}=0"), x.then(y)?.kernel().is_zero());
                }
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{abelian, curve, k3, point};
    use crate::rational::int;

    fn models() -> Vec<Arc<Model>> {
        vec![curve(0), curve(1), curve(2), abelian(2), k3(2)].into_iter().map(|m| Arc::new(m.unwrap())).collect()
    }

    #[test]
    fn closed_forms_match_kernels() {
        for m in models() {
            for kind in ProjectorKind::ALL {
                let corr = projector(&m, kind).unwrap();
                assert_eq!(corr.action_matrix().unwrap(), projector_matrix(&m, kind).unwrap(), "{} {kind}", m.name());
            }
        }
    }

    #[test]
    fn kernel_identities() {
        for m in models().into_iter().chain([Arc::new(point().unwrap())]) {
            assert_eq!(projector_identity_failures(&m).unwrap(), Vec::<String>::new(), "{}", m.name());
        }
        // a broken projector is caught: swap in π₀ for π₊
        let m = Arc::new(curve(1).unwrap());
        let p0 = projector(&m, ProjectorKind::Pi0).unwrap();
        assert_ne!(p0.then(&p0).unwrap().add(&p0).unwrap(), Correspondence::identity(&m, 1).unwrap());
    }

    #[test]
    fn slotwise_agrees_with_kernel_route() {
        let m = Arc::new(curve(1).unwrap());
        let delta3 = PowerMorphism::diagonal(&m, 3).pushforward(&TensorClass::fundamental(&m, 1).unwrap()).unwrap();
        let delta2 = diagonal_class(&m).unwrap();
        let kinds = [ProjectorKind::PiPlus, ProjectorKind::Pi0, ProjectorKind::PiStar];
        for n in 1..=3 {
            let alpha = match n {
                1 => TensorClass::basis_by_ids(&m, &["a1"]).unwrap(),
                2 => delta2.clone(),
                _ => delta3.clone(),
            };
            let ks = &kinds[..n];
            let via_kernel = tensor_projector_kernel(&m, ks).unwrap().apply(&alpha).unwrap();
            assert_eq!(apply_tensor_projector(&alpha, ks).unwrap(), via_kernel);
        }
    }

    #[test]
    fn resolution_of_identity() {
        let m = Arc::new(curve(2).unwrap());
        let alpha = PowerMorphism::diagonal(&m, 3).pushforward(&TensorClass::fundamental(&m, 1).unwrap()).unwrap();
        let mut sum = TensorClass::zero(&m, 3);
        for j in Subset::all(3) {
            sum = sum.add(&kunneth_component(&alpha, j).unwrap()).unwrap();
        }
        assert_eq!(sum, alpha);
        let parts = grading_decomposition(&alpha).unwrap();
        for (mm, part) in parts.iter().enumerate() {
            let mut direct = TensorClass::zero(&m, 3);
            for j in Subset::of_size(3, mm) {
                direct = direct.add(&kunneth_component(&alpha, j).unwrap()).unwrap();
            }
            assert_eq!(part, &direct);
        }
    }

    #[test]
    fn point_class_levels() {
        let m = Arc::new(k3(4).unwrap());
        for n in 1..=3 {
            let a = TensorClass::point_class(&m, n);
            assert_eq!(filtration_level(&a).unwrap(), Some(n));
            assert_eq!(grading_component(&a, 0).unwrap(), a);
        }
        assert_eq!(filtration_level(&TensorClass::zero(&m, 2)).unwrap(), None);
        let d3 = PowerMorphism::diagonal(&m, 3).pushforward(&TensorClass::fundamental(&m, 1).unwrap()).unwrap();
        assert!(filtration_level(&d3).unwrap().unwrap() >= 1);
    }

    #[test]
    fn positive_dimension_required() {
        let p = Arc::new(point().unwrap());
        assert!(projector(&p, ProjectorKind::PiStar).is_err());
        assert!(projector(&p, ProjectorKind::Pi2d).is_err());
        assert!(projector(&p, ProjectorKind::PiPlus).unwrap().kernel().is_zero());
    }

    #[test]
    fn pi_plus_on_fundamental_and_point() {
        let m = Arc::new(curve(1).unwrap());
        let pp = projector(&m, ProjectorKind::PiPlus).unwrap();
        let x = TensorClass::fundamental(&m, 1).unwrap();
        assert_eq!(pp.apply(&x).unwrap(), x);
        assert!(pp.apply(&TensorClass::point_class(&m, 1)).unwrap().is_zero());
        assert_eq!(x.integrate(), int(0));
    }

    #[test]
    fn auxiliary_products_vanish() {
        for g in 0..=2 {
            let m = Arc::new(curve(g).unwrap());
            for n in 2..=3 {
                assert!(auxiliary_product_failures(&m, n).unwrap().is_empty());
            }
        }
    }
}
