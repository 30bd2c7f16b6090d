//! Algebra maps between two different models (covers, projections).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Model, SparseVec};
use crate::rational::Rational;
use crate::tensor::{expand_slots, TensorClass, Terms};

/// A morphism `f: X → Y`, given by its pullback `f^*: A(Y) → A(X)`.
/// Pushforward is the pairing adjoint.
#[derive(Clone, Debug)]
pub struct ModelMorphism {
    source: Arc<Model>,
    target: Arc<Model>,
    pullback: Vec<SparseVec>,
    pushforward: Vec<SparseVec>,
}

fn apply(matrix: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, c) in v {
        for (k, d) in &matrix[*i] {
            *acc.entry(*k).or_insert_with(Rational::zero) += c * d;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl ModelMorphism {
    /// `pullback[y]` is `f^*(e_y)` in `A(X)`. Checks that `f^*` is a unital
    /// algebra map preserving degree, and that `dim X ≥ dim Y`.
    pub fn new(source: &Arc<Model>, target: &Arc<Model>, pullback: Vec<SparseVec>) -> Result<Self> {
        if pullback.len() != target.len() {
            return Err(Error::shape("pullback needs one image per target basis element"));
        }
        if source.dimension() < target.dimension() {
            return Err(Error::param("source dimension below target dimension"));
        }
        for (y, img) in pullback.iter().enumerate() {
            if img.iter().any(|(x, _)| *x >= source.len() || source.degree(*x) != target.degree(y)) {
                return Err(Error::param(format!("f^* of {} is not homogeneous of its degree", target.id(y))));
            }
        }
        let pullback: Vec<SparseVec> = pullback.into_iter().map(|v| apply_identity(v)).collect();
        let ux = source.unit()?;
        let uy = target.unit()?;
        if pullback[uy] != vec![(ux, Rational::one())] {
            return Err(Error::param("f^* is not unital"));
        }
        for y1 in 0..target.len() {
            for y2 in 0..target.len() {
                let lhs = apply(&pullback, target.product(y1, y2));
                let rhs = source.mul_vec(&pullback[y1], &pullback[y2]);
                if lhs != rhs {
                    return Err(Error::param(format!(
                        "f^* does not respect {}*{}",
                        target.id(y1),
                        target.id(y2)
                    )));
                }
            }
        }
        // f_*(e_x) = Σ_y ⟨e_x, f^* e_y⟩_X · e^y
        let mut pushforward = vec![SparseVec::new(); source.len()];
        for (x, slot) in pushforward.iter_mut().enumerate() {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for y in 0..target.len() {
                let r = source.integrate_vec(&source.mul_vec(&vec![(x, Rational::one())], &pullback[y]));
                if r.is_zero() {
                    continue;
                }
                for (k, c) in target.left_dual(y)? {
                    *acc.entry(k).or_insert_with(Rational::zero) += &r * c;
                }
            }
            *slot = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        Ok(ModelMorphism { source: source.clone(), target: target.clone(), pullback, pushforward })
    }

    pub fn identity(model: &Arc<Model>) -> Result<Self> {
        Self::new(model, model, (0..model.len()).map(|i| vec![(i, Rational::one())]).collect())
    }

    /// The projection `X × Y → Y` out of [`crate::model::product`]`(x, y)`.
    pub fn second_projection(product: &Arc<Model>, x: &Model, y: &Arc<Model>) -> Result<Self> {
        if product.len() != x.len() * y.len() {
            return Err(Error::shape("product model size mismatch"));
        }
        let ux = x.unit()?;
        let pullback = (0..y.len()).map(|j| vec![(ux * y.len() + j, Rational::one())]).collect();
        Self::new(product, y, pullback)
    }

    /// The projection `X × Y → X`.
    pub fn first_projection(product: &Arc<Model>, x: &Arc<Model>, y: &Model) -> Result<Self> {
        if product.len() != x.len() * y.len() {
            return Err(Error::shape("product model size mismatch"));
        }
        let uy = y.unit()?;
        let pullback = (0..x.len()).map(|i| vec![(i * y.len() + uy, Rational::one())]).collect();
        Self::new(product, x, pullback)
    }

    pub fn source(&self) -> &Arc<Model> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Model> {
        &self.target
    }

    pub fn pullback_matrix(&self) -> &[SparseVec] {
        &self.pullback
    }

    pub fn pushforward_matrix(&self) -> &[SparseVec] {
        &self.pushforward
    }

    /// `∫_X f^*[pt_Y]`: the degree for generically finite maps, `0` for
    /// maps with positive-dimensional fibres.
    pub fn degree(&self) -> Rational {
        self.source.integrate_vec(&self.pullback[self.target.point()])
    }

    /// Base point goes to base point: `f_*[a] = [b]`.
    pub fn is_pointed(&self) -> bool {
        self.pushforward[self.source.point()] == vec![(self.target.point(), Rational::one())]
    }

    /// `(f^n)^*: A(Y^n) → A(X^n)`.
    pub fn pullback_power(&self, beta: &TensorClass) -> Result<TensorClass> {
        if !crate::tensor::same_model(beta.model(), &self.target) {
            return Err(Error::shape("pullback: class not on the target model"));
        }
        Ok(map_tensor(beta, &self.source, &self.pullback))
    }

    /// `(f^n)_*: A(X^n) → A(Y^n)`. Degree shifts are even, so no Koszul
    /// signs appear slot-wise.
    pub fn pushforward_power(&self, alpha: &TensorClass) -> Result<TensorClass> {
        if !crate::tensor::same_model(alpha.model(), &self.source) {
            return Err(Error::shape("pushforward: class not on the source model"));
        }
        Ok(map_tensor(alpha, &self.target, &self.pushforward))
    }
}

fn apply_identity(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    v.retain(|(_, c)| !c.is_zero());
    v
}

fn map_tensor(c: &TensorClass, target: &Arc<Model>, matrix: &[SparseVec]) -> TensorClass {
    let mut out = Terms::new();
    for (k, x) in c.terms() {
        let slots: Vec<&SparseVec> = k.iter().map(|&b| &matrix[b]).collect();
        if slots.iter().any(|s| s.is_empty()) {
            continue;
        }
        expand_slots(&slots, x, &mut out);
    }
    TensorClass::from_terms_unchecked(target, c.power(), out)
}
