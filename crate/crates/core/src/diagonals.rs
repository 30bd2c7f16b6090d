//! The maps `γⁿ = π₊^{⊗n} ∘ Δ^{(n)}_*`, the modified diagonals
//! `Γⁿ(X,a) = γⁿ[X]`, their inclusion–exclusion expansion, vanishing
//! thresholds and the structural propositions about them.

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::correspondence::{ModelMorphism, PowerMorphism};
use crate::error::{Error, Result};
use crate::model::{product, Model};
use crate::projectors::{apply_power, ProjectorKind};
use crate::rational::{sign, Rational};
use crate::subset::Subset;
use crate::tensor::TensorClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Projector,
    Expansion,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Projector => "projector",
            Route::Expansion => "expansion",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaResult {
    pub n: usize,
    pub input: TensorClass,
    pub result: TensorClass,
    pub route: Route,
}

impl GammaResult {
    pub fn is_zero(&self) -> bool {
        self.result.is_zero()
    }
}

fn check_input(alpha: &TensorClass, n: usize) -> Result<()> {
    if alpha.power() != 1 {
        return Err(Error::shape(format!("gamma takes a class on X, got power {}", alpha.power())));
    }
    if n == 0 {
        return Err(Error::param("gamma needs n >= 1"));
    }
    Ok(())
}

/// `γⁿ(α) = π₊^{⊗n}(Δ^{(n)}_* α)`.
pub fn gamma_map(alpha: &TensorClass, n: usize) -> Result<GammaResult> {
    check_input(alpha, n)?;
    let pushed = PowerMorphism::diagonal(alpha.model(), n).pushforward(alpha)?;
    let result = apply_power(&pushed, ProjectorKind::PiPlus)?;
    Ok(GammaResult { n, input: alpha.clone(), result, route: Route::Projector })
}

/// `γⁿ(α)` by expanding `π₊ = Δ − π₀` in every slot:
/// `Σ_J (−1)^{n−|J|} (φ_J ∘ Δ)_* α`, including `J = ∅`.
pub fn gamma_expansion(alpha: &TensorClass, n: usize) -> Result<GammaResult> {
    check_input(alpha, n)?;
    let model = alpha.model();
    let mut result = TensorClass::zero(model, n);
    for j in Subset::all(n) {
        let term = PowerMorphism::partial_diagonal(model, j, n).pushforward(alpha)?;
        result.add_scaled(&term, &sign((n - j.len()) % 2 == 1))?;
    }
    Ok(GammaResult { n, input: alpha.clone(), result, route: Route::Expansion })
}

/// `Γⁿ(X,a)` through the projector route.
pub fn modified_diagonal(model: &Arc<Model>, n: usize) -> Result<TensorClass> {
    Ok(gamma_map(&TensorClass::fundamental(model, 1)?, n)?.result)
}

/// `Γⁿ(X,a) = Σ_{∅≠J} (−1)^{n−|J|} [Δ^{(J)}]`.
pub fn gross_schoen_gamma(model: &Arc<Model>, n: usize) -> Result<GammaResult> {
    if model.dimension() == 0 {
        return Err(Error::Precondition("the expansion is only defined for dim X > 0; γⁿ is zero there".into()));
    }
    if n == 0 {
        return Err(Error::param("gamma needs n >= 1"));
    }
    let fundamental = TensorClass::fundamental(model, 1)?;
    let mut result = TensorClass::zero(model, n);
    for j in Subset::all(n).filter(|j| !j.is_empty()) {
        let term = PowerMorphism::partial_diagonal(model, j, n).pushforward(&fundamental)?;
        result.add_scaled(&term, &sign((n - j.len()) % 2 == 1))?;
    }
    Ok(GammaResult { n, input: fundamental, result, route: Route::Expansion })
}

/// Whether `π₊^{⊗n}∘Δ_*` and `π⋆^{⊗n}∘Δ_*` agree on every basis class.
pub fn pi_star_equivalence(model: &Arc<Model>, n: usize) -> Result<bool> {
    for b in 0..model.len() {
        let pushed = PowerMorphism::diagonal(model, n).pushforward(&TensorClass::basis(model, vec![b])?)?;
        if apply_power(&pushed, ProjectorKind::PiPlus)? != apply_power(&pushed, ProjectorKind::PiStar)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The degree count: `2d(n−1) > 2e + 2nd − 2n`, i.e. `n > d + e`.
pub fn degree_criterion(n: u64, d: u64, e: u64) -> Result<bool> {
    if d == 0 || e > d {
        return Err(Error::param(format!("degree criterion needs d >= 1 and e <= d, got d={d}, e={e}")));
    }
    let (n, d, e) = (n as i128, d as i128, e as i128);
    Ok(2 * d * (n - 1) > 2 * e + 2 * n * d - 2 * n)
}

/// Half the largest `i` for which some product of `i` degree-one classes is
/// nonzero, unless the model carries an override.
pub fn albanese_image_dim(model: &Model) -> Result<u32> {
    if let Some(e) = model.albanese_override() {
        return Ok(e);
    }
    let ranks = model.degree_one_power_ranks();
    // ranks[k] belongs to products of k + 1 classes
    let top = ranks.iter().rposition(|&r| r > 0).map_or(0, |k| k as u32 + 1);
    if top % 2 == 1 {
        return Err(Error::Model(format!("odd top power {top} of degree-one classes")));
    }
    Ok(top / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdSearch {
    /// `vanishing[k]` is whether `Γ^{k+1} = 0`.
    pub vanishing: Vec<bool>,
    pub threshold: Option<usize>,
}

/// Smallest `n ≤ n_max` with `Γⁿ = 0`, after checking that every larger
/// `n ≤ n_max` vanishes too.
pub fn vanishing_threshold(model: &Arc<Model>, n_max: usize) -> Result<ThresholdSearch> {
    if n_max < 2 {
        return Err(Error::param("threshold search needs max n >= 2"));
    }
    let mut vanishing = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        vanishing.push(modified_diagonal(model, n)?.is_zero());
    }
    let threshold = vanishing.iter().position(|&v| v).map(|k| k + 1);
    if let Some(t) = threshold {
        if let Some(bad) = (t..=n_max).find(|&n| !vanishing[n - 1]) {
            return Err(Error::Model(format!(
                "{}: Γ^{t} vanishes but Γ^{bad} does not",
                model.name()
            )));
        }
    }
    Ok(ThresholdSearch { vanishing, threshold })
}

/// `Σ_{∅≠K⊆{1..m}} (−1)^{|K|} γⁿ(Δ^{(K),*} ξ)` for `ξ` on `X^m` without
/// degree-zero part.
pub fn gamma_correspondence_identity(model: &Arc<Model>, m: usize, n: usize, xi: &TensorClass) -> Result<TensorClass> {
    if xi.power() != m {
        return Err(Error::shape(format!("ξ lives on power {} but m = {m}", xi.power())));
    }
    if xi.has_degree_zero_part() {
        return Err(Error::Precondition("ξ must have no degree-zero component".into()));
    }
    let mut total = TensorClass::zero(model, n);
    for k in Subset::all(m).filter(|k| !k.is_empty()) {
        let restricted = PowerMorphism::partial_diagonal(model, k, m).pullback(xi)?;
        let g = gamma_map(&restricted, n)?.result;
        total.add_scaled(&g, &sign(k.len() % 2 == 1))?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioOutcome {
    Skipped(String),
    Checked { vanishes: bool },
}

/// If `Γ^m(X) = 0` and `Γ^n(Y) = 0`, computes whether `Γ^{m+n−1}(X×Y) = 0`.
pub fn product_scenario(x: &Arc<Model>, y: &Arc<Model>, m: usize, n: usize) -> Result<ScenarioOutcome> {
    if x.dimension() == 0 || y.dimension() == 0 {
        return Ok(ScenarioOutcome::Skipped("a factor has dimension 0".into()));
    }
    if m == 0 || n == 0 || m + n < 2 {
        return Err(Error::param("product scenario needs m, n >= 1"));
    }
    if !modified_diagonal(x, m)?.is_zero() {
        return Ok(ScenarioOutcome::Skipped(format!("Γ^{m}({}) is nonzero", x.name())));
    }
    if !modified_diagonal(y, n)?.is_zero() {
        return Ok(ScenarioOutcome::Skipped(format!("Γ^{n}({}) is nonzero", y.name())));
    }
    let xy = Arc::new(product(x, y)?);
    Ok(ScenarioOutcome::Checked { vanishes: modified_diagonal(&xy, m + n - 1)?.is_zero() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub degree: Rational,
    /// `γⁿ_Y(f_*α) = f^{⊗n}_* γⁿ_X(α)` on every basis class.
    pub commutes: bool,
    /// `N · Γⁿ(Y) = f^{⊗n}_* Γⁿ(X)`.
    pub degree_identity: bool,
}

/// Checks both pushforward compatibilities for a pointed morphism.
pub fn pushforward_compatibility(f: &ModelMorphism, n: usize) -> Result<Compatibility> {
    if !f.is_pointed() {
        return Err(Error::Precondition("morphism does not send base point to base point".into()));
    }
    let (x, y) = (f.source(), f.target());
    let mut commutes = true;
    for b in 0..x.len() {
        let alpha = TensorClass::basis(x, vec![b])?;
        let lhs = gamma_map(&f.pushforward_power(&alpha)?, n)?.result;
        let rhs = f.pushforward_power(&gamma_map(&alpha, n)?.result)?;
        if lhs != rhs {
            commutes = false;
            break;
        }
    }
    let degree = f.degree();
    let lhs = modified_diagonal(y, n)?.scale(&degree);
    let rhs = f.pushforward_power(&modified_diagonal(x, n)?)?;
    Ok(Compatibility { degree, commutes, degree_identity: lhs == rhs })
}

/// Basis classes `α` and `n < n_max` where `γⁿ(α) = 0` but `γ^{n+1}(α) ≠ 0`.
pub fn stability_failures(model: &Arc<Model>, n_max: usize) -> Result<Vec<(String, usize)>> {
    let mut failures = Vec::new();
    for b in 0..model.len() {
        let alpha = TensorClass::basis(model, vec![b])?;
        let mut prev_zero = false;
        for n in 1..=n_max {
            let zero = gamma_map(&alpha, n)?.is_zero();
            if prev_zero && !zero {
                failures.push((model.id(b).to_string(), n - 1));
            }
            prev_zero = zero;
        }
    }
    Ok(failures)
}

/// `Γⁿ = 0` if and only if `γⁿ` kills every basis class.
pub fn gamma_vanishing_equivalence(model: &Arc<Model>, n: usize) -> Result<bool> {
    let whole = modified_diagonal(model, n)?.is_zero();
    let mut all = true;
    for b in 0..model.len() {
        if !gamma_map(&TensorClass::basis(model, vec![b])?, n)?.is_zero() {
            all = false;
            break;
        }
    }
    Ok(whole == all)
}

/// If `Γ^{m+n} = 0`, checks `γⁿ(ξ₁⋯ξ_m) = 0` for every product of `m`
/// positive-degree basis classes. `None` when the hypothesis fails.
pub fn product_map_corollary(model: &Arc<Model>, m: usize, n: usize) -> Result<Option<bool>> {
    if !modified_diagonal(model, m + n)?.is_zero() {
        return Ok(None);
    }
    let positive: Vec<usize> = (0..model.len()).filter(|&b| model.degree(b) > 0).collect();
    let mut products: Vec<crate::model::SparseVec> = positive.iter().map(|&b| vec![(b, Rational::one())]).collect();
    for _ in 1..m {
        let mut next = Vec::new();
        for p in &products {
            for &b in &positive {
                let q = model.mul_vec(p, &vec![(b, Rational::one())]);
                if !q.is_empty() && !next.contains(&q) {
                    next.push(q);
                }
            }
        }
        products = next;
    }
    for p in &products {
        let class = TensorClass::lift_slot(model, 1, 0, p)?;
        if !gamma_map(&class, n)?.is_zero() {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeDimension {
    /// `Γ^{n+r}(X×Y) = 0`.
    pub hypothesis: bool,
    /// `Γⁿ(Y) = 0`.
    pub conclusion: bool,
    /// `Γⁿ(Y) = f^{⊗n}_* γⁿ([{a}×Y])`, where `f_*[{a}×Y] = [Y]`.
    pub proportional: bool,
}

/// The projection `X × Y → Y` with `r = dim X`.
pub fn relative_dimension_check(x: &Arc<Model>, y: &Arc<Model>, n: usize) -> Result<RelativeDimension> {
    let xy = Arc::new(product(x, y)?);
    let f = ModelMorphism::second_projection(&xy, x, y)?;
    let r = x.dimension() as usize;
    let hypothesis = modified_diagonal(&xy, n + r)?.is_zero();
    let gamma_y = modified_diagonal(y, n)?;
    let fiber = TensorClass::basis(&xy, vec![x.point() * y.len() + y.unit()?])?;
    let pushed = f.pushforward_power(&gamma_map(&fiber, n)?.result)?;
    Ok(RelativeDimension { hypothesis, conclusion: gamma_y.is_zero(), proportional: pushed == gamma_y })
}

/// `Γ²` written out: `Δ − [X×{a}] − [{a}×X]`.
pub fn gamma_two_closed_form(model: &Arc<Model>) -> Result<TensorClass> {
    let unit = model.unit()?;
    let pt = model.point();
    let delta = crate::correspondence::diagonal_class(model)?;
    delta.sub(&TensorClass::basis(model, vec![unit, pt])?)?.sub(&TensorClass::basis(model, vec![pt, unit])?)
}

#[cfg(test)]
fn integral_of_gamma_one(alpha: &TensorClass) -> Rational {
    gamma_map(alpha, 1).map(|g| g.result.integrate()).unwrap_or_else(|_| crate::rational::zero())
}
