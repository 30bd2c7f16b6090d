//! Correspondences between powers of a model: composition, action on
//! classes, graphs of power morphisms.

mod model_map;
mod morphism;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Model, SparseVec};
use crate::tensor::TensorClass;

pub use model_map::ModelMorphism;
pub use morphism::{Coord, PowerMorphism, Twist};


/// A class on `X^m × X^n` viewed as acting from `X^m` to `X^n`.
/// Only arities are tracked, not the degree of the correspondence.
#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence {
    source: usize,
    target: usize,
    kernel: TensorClass,
}

impl Correspondence {
    pub fn new(source: usize, target: usize, kernel: TensorClass) -> Result<Self> {
        if kernel.power() != source + target {
            return Err(Error::shape(format!(
                "kernel on power {} cannot act {source} -> {target}",
                kernel.power()
            )));
        }
        Ok(Correspondence { source, target, kernel })
    }

    pub fn kernel(&self) -> &TensorClass {
        &self.kernel
    }

    pub fn model(&self) -> &Arc<Model> {
        self.kernel.model()
    }

    pub fn source_power(&self) -> usize {
        self.source
    }

    pub fn target_power(&self) -> usize {
        self.target
    }

    /// Graph of `f`: `(id, f)_*[X^m]`; acts as `f_*`.
    pub fn graph(f: &PowerMorphism) -> Result<Self> {
        let fundamental = TensorClass::fundamental(f.model(), f.source_power())?;
        let kernel = f.graph_map().pushforward(&fundamental)?;
        Self::new(f.source_power(), f.target_power(), kernel)
    }

    /// `[Δ_{X^m}]`, the identity correspondence on `X^m`.
    pub fn identity(model: &Arc<Model>, m: usize) -> Result<Self> {
        Self::graph(&PowerMorphism::identity(model, m))
    }

    /// `p_{target,*}(p_source^*(α) · kernel)`.
    pub fn apply(&self, alpha: &TensorClass) -> Result<TensorClass> {
        if alpha.power() != self.source {
            return Err(Error::shape(format!(
                "apply: class on power {} but correspondence starts at {}",
                alpha.power(),
                self.source
            )));
        }
        let model = self.model();
        let total = self.source + self.target;
        let src: Vec<usize> = (0..self.source).collect();
        let tgt: Vec<usize> = (self.source..total).collect();
        let lifted = PowerMorphism::projection(model, total, &src)?.pullback(alpha)?;
        let prod = lifted.multiply(&self.kernel)?;
        PowerMorphism::projection(model, total, &tgt)?.pushforward(&prod)
    }

    /// `self` then `next`: `pr_{XZ,*}(pr_{XY}^*(self) · pr_{YZ}^*(next))`.
    pub fn then(&self, next: &Correspondence) -> Result<Correspondence> {
        if self.target != next.source {
            return Err(Error::shape(format!(
                "compose: middle powers {} and {} differ",
                self.target, next.source
            )));
        }
        let model = self.model();
        let (a, b, c) = (self.source, self.target, next.target);
        let total = a + b + c;
        let xy: Vec<usize> = (0..a + b).collect();
        let yz: Vec<usize> = (a..total).collect();
        let xz: Vec<usize> = (0..a).chain(a + b..total).collect();
        let left = PowerMorphism::projection(model, total, &xy)?.pullback(&self.kernel)?;
        let right = PowerMorphism::projection(model, total, &yz)?.pullback(&next.kernel)?;
        let kernel = PowerMorphism::projection(model, total, &xz)?.pushforward(&left.multiply(&right)?)?;
        Correspondence::new(a, c, kernel)
    }

    pub fn add(&self, other: &Correspondence) -> Result<Correspondence> {
        self.check_arity(other)?;
        Correspondence::new(self.source, self.target, self.kernel.add(&other.kernel)?)
    }

    pub fn sub(&self, other: &Correspondence) -> Result<Correspondence> {
        self.check_arity(other)?;
        Correspondence::new(self.source, self.target, self.kernel.sub(&other.kernel)?)
    }

    fn check_arity(&self, other: &Correspondence) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::shape("correspondence arities differ"));
        }
        Ok(())
    }

    /// External tensor product: acts on `X^{m1+m2} → X^{n1+n2}`.
    pub fn tensor(&self, other: &Correspondence) -> Result<Correspondence> {
        let model = self.model();
        let (m1, n1, m2, n2) = (self.source, self.target, other.source, other.target);
        let (m, n) = (m1 + m2, n1 + n2);
        let total = m + n;
        let first: Vec<usize> = (0..m1).chain(m..m + n1).collect();
        let second: Vec<usize> = (m1..m).chain(m + n1..total).collect();
        let a = PowerMorphism::projection(model, total, &first)?.pullback(&self.kernel)?;
        let b = PowerMorphism::projection(model, total, &second)?.pullback(&other.kernel)?;
        Correspondence::new(m, n, a.multiply(&b)?)
    }

    /// For `X → X` correspondences: the image of every basis element.
    pub fn action_matrix(&self) -> Result<Vec<SparseVec>> {
        if self.source != 1 || self.target != 1 {
            return Err(Error::shape("action matrix needs a correspondence X -> X"));
        }
        let model = self.model();
        (0..model.len())
            .map(|b| {
                let img = self.apply(&TensorClass::basis(model, vec![b])?)?;
                Ok(img.terms().map(|(k, c)| (k[0], c.clone())).collect())
            })
            .collect()
    }
}

/// `[Δ_X]` as the Casimir element `Σ_b e_b ⊗ e^b` of the pairing, with
/// `∫ e^b · e_c = δ_bc`.
pub fn diagonal_class(model: &Arc<Model>) -> Result<TensorClass> {
    let mut terms = crate::tensor::Terms::new();
    for b in 0..model.len() {
        for (c, x) in model.left_dual(b)? {
            crate::tensor::add_term(&mut terms, vec![b, c], x);
        }
    }
    Ok(TensorClass::from_terms_unchecked(model, 2, terms))
}

/// `mult(k)` on an abelian model, as a twist map `X → X`.
pub fn mult_endo(model: &Arc<Model>, k: i64) -> Result<PowerMorphism> {
    if !model.is_abelian() {
        return Err(Error::param(format!("mult({k}) needs an abelian model, got {}", model.name())));
    }
    PowerMorphism::twist(model, Twist::mult(k))
}
