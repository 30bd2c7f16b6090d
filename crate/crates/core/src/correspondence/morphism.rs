//! Maps `X^m → X^n` built from coordinate selection, base-point insertion
//! and automorphism twists, with pullback and adjoint pushforward.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{DerivedTables, Model, SparseVec};
use crate::rational::Rational;
use crate::subset::Subset;
use crate::tensor::{add_term, Key, TensorClass, Terms};

/// `σ^ε ∘ [k]`: an optional involution composed with multiplication by `k`.
/// The two commute, so composites stay in this form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Twist {
    pub involution: bool,
    pub scale: i64,
}

impl Twist {
    pub const IDENTITY: Twist = Twist { involution: false, scale: 1 };
    pub const INVOLUTION: Twist = Twist { involution: true, scale: 1 };

    pub fn mult(k: i64) -> Twist {
        Twist { involution: false, scale: k }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// `self ∘ inner`.
    pub fn after(self, inner: Twist) -> Twist {
        Twist { involution: self.involution ^ inner.involution, scale: self.scale * inner.scale }
    }

    fn check(&self, model: &Model) -> Result<()> {
        if self.involution && model.involution().is_none() {
            return Err(Error::param(format!("{} has no involution", model.name())));
        }
        if self.scale != 1 && !model.is_abelian() {
            return Err(Error::param(format!("mult({}) needs an abelian model, got {}", self.scale, model.name())));
        }
        Ok(())
    }

    /// Pullback of a basis element: `σ^*` then `k^{deg}`.
    pub fn pullback_basis(&self, model: &Model, b: usize) -> Result<SparseVec> {
        let mut v: SparseVec =
            if self.involution { model.involution_image(b)?.clone() } else { vec![(b, Rational::one())] };
        if self.scale != 1 {
            let f = Rational::from_integer(self.scale.into()).pow(model.degree(b) as i32);
            v = v.into_iter().map(|(i, c)| (i, c * &f)).filter(|(_, c)| !c.is_zero()).collect();
        }
        Ok(v)
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.involution, self.scale) {
            (false, 1) => write!(f, "id"),
            (true, 1) => write!(f, "σ"),
            (false, k) => write!(f, "[{k}]"),
            (true, k) => write!(f, "σ∘[{k}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    /// Target coordinate `τ(x_index)`.
    Source { index: usize, twist: Twist },
    /// Target coordinate pinned to the base point.
    BasePoint,
}

impl Coord {
    pub fn source(index: usize) -> Coord {
        Coord::Source { index, twist: Twist::IDENTITY }
    }

    pub fn twisted(index: usize, twist: Twist) -> Coord {
        Coord::Source { index, twist }
    }
}

/// A morphism `X^m → X^n`; coordinates are 0-based.
#[derive(Clone, Debug)]
pub struct PowerMorphism {
    model: Arc<Model>,
    source: usize,
    coords: Vec<Coord>,
}

impl PartialEq for PowerMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.coords == other.coords
            && crate::tensor::same_model(&self.model, &other.model)
    }
}

impl PowerMorphism {
    pub fn new(model: &Arc<Model>, source: usize, coords: Vec<Coord>) -> Result<Self> {
        for c in &coords {
            if let Coord::Source { index, twist } = c {
                if *index >= source {
                    return Err(Error::param(format!("source index {index} outside power {source}")));
                }
                twist.check(model)?;
            }
        }
        Ok(PowerMorphism { model: model.clone(), source, coords })
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn source_power(&self) -> usize {
        self.source
    }

    pub fn target_power(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn identity(model: &Arc<Model>, m: usize) -> Self {
        Self::new(model, m, (0..m).map(Coord::source).collect()).expect("in range")
    }

    /// `X^m → X^k` selecting the listed coordinates in order.
    pub fn projection(model: &Arc<Model>, m: usize, keep: &[usize]) -> Result<Self> {
        Self::new(model, m, keep.iter().map(|&i| Coord::source(i)).collect())
    }

    /// Small diagonal `Δ^(n): X → X^n`.
    pub fn diagonal(model: &Arc<Model>, n: usize) -> Self {
        Self::new(model, 1, vec![Coord::source(0); n]).expect("in range")
    }

    /// `φ_J ∘ Δ: X → X^n`: coordinates in `J` follow `x`, the rest are `a`.
    pub fn partial_diagonal(model: &Arc<Model>, j: Subset, n: usize) -> Self {
        let coords = (0..n).map(|i| if j.contains(i) { Coord::source(0) } else { Coord::BasePoint }).collect();
        Self::new(model, 1, coords).expect("in range")
    }

    /// `φ_J: X^{|J|} → X^n`, inserting the base point off `J`.
    pub fn inclusion(model: &Arc<Model>, j: Subset, n: usize) -> Self {
        let mut next = 0;
        let coords = (0..n)
            .map(|i| {
                if j.contains(i) {
                    next += 1;
                    Coord::source(next - 1)
                } else {
                    Coord::BasePoint
                }
            })
            .collect();
        Self::new(model, j.len(), coords).expect("in range")
    }

    /// `ζ_J: X → X^m` with `pr_j ∘ ζ_J = σ` for `j ∈ J`, identity otherwise.
    pub fn zeta(model: &Arc<Model>, j: Subset, m: usize) -> Result<Self> {
        let coords = (0..m)
            .map(|i| Coord::twisted(0, if j.contains(i) { Twist::INVOLUTION } else { Twist::IDENTITY }))
            .collect();
        Self::new(model, 1, coords)
    }

    /// `φ_{i,j}: X^m → X^{m+1}`, inserting `σ(x_i)` at position `j`
    /// (both 0-based).
    pub fn phi(model: &Arc<Model>, m: usize, i: usize, j: usize) -> Result<Self> {
        if i >= m || j > m {
            return Err(Error::param(format!("phi({i},{j}) out of range for m = {m}")));
        }
        let mut coords: Vec<Coord> = (0..m).map(Coord::source).collect();
        coords.insert(j, Coord::twisted(i, Twist::INVOLUTION));
        Self::new(model, m, coords)
    }

    /// `δ^(n): X^n → X^{n+1}`, repeating the last coordinate.
    pub fn delta(model: &Arc<Model>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("delta needs n >= 1"));
        }
        let mut coords: Vec<Coord> = (0..n).map(Coord::source).collect();
        coords.push(Coord::source(n - 1));
        Self::new(model, n, coords)
    }

    /// The constant map `X^m → X^n` to `(a, …, a)`.
    pub fn constant(model: &Arc<Model>, m: usize, n: usize) -> Self {
        Self::new(model, m, vec![Coord::BasePoint; n]).expect("no sources")
    }

    /// An automorphism-twist map `X → X`.
    pub fn twist(model: &Arc<Model>, twist: Twist) -> Result<Self> {
        Self::new(model, 1, vec![Coord::twisted(0, twist)])
    }

    /// `x ↦ (x, f(x))`: `X^m → X^{m+n}`.
    pub fn graph_map(&self) -> Self {
        let mut coords: Vec<Coord> = (0..self.source).map(Coord::source).collect();
        coords.extend_from_slice(&self.coords);
        PowerMorphism { model: self.model.clone(), source: self.source, coords }
    }

    /// `self × id_{X^k}`.
    pub fn times_identity(&self, k: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.extend((0..k).map(|i| Coord::source(self.source + i)));
        PowerMorphism { model: self.model.clone(), source: self.source + k, coords }
    }

    /// `id_{X^k} × self`.
    pub fn identity_times(&self, k: usize) -> Self {
        let mut coords: Vec<Coord> = (0..k).map(Coord::source).collect();
        coords.extend(self.coords.iter().map(|c| match *c {
            Coord::Source { index, twist } => Coord::Source { index: index + k, twist },
            Coord::BasePoint => Coord::BasePoint,
        }));
        PowerMorphism { model: self.model.clone(), source: self.source + k, coords }
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &PowerMorphism) -> Result<PowerMorphism> {
        if outer.source != self.coords.len() {
            return Err(Error::shape(format!(
                "compose: target power {} vs source power {}",
                self.coords.len(),
                outer.source
            )));
        }
        if !crate::tensor::same_model(&self.model, &outer.model) {
            return Err(Error::shape("compose: models differ"));
        }
        let coords = outer
            .coords
            .iter()
            .map(|c| match *c {
                Coord::BasePoint => Coord::BasePoint,
                Coord::Source { index, twist } => match self.coords[index] {
                    Coord::BasePoint => Coord::BasePoint,
                    Coord::Source { index: inner, twist: t0 } => {
                        Coord::Source { index: inner, twist: twist.after(t0) }
                    }
                },
            })
            .collect();
        Ok(PowerMorphism { model: self.model.clone(), source: self.source, coords })
    }

    /// The same map as a set map on coordinates: target slot `j` records
    /// `(source index, twist)` or `None` for the base point.
    pub fn coordinate_table(&self) -> Vec<Option<(usize, Twist)>> {
        self.coords
            .iter()
            .map(|c| match *c {
                Coord::Source { index, twist } => Some((index, twist)),
                Coord::BasePoint => None,
            })
            .collect()
    }

    fn twist_cache(&self) -> Result<HashMap<(Twist, usize), SparseVec>> {
        let mut cache = HashMap::new();
        for c in &self.coords {
            if let Coord::Source { twist, .. } = c {
                for b in 0..self.model.len() {
                    if !cache.contains_key(&(*twist, b)) {
                        cache.insert((*twist, b), twist.pullback_basis(&self.model, b)?);
                    }
                }
            }
        }
        Ok(cache)
    }

    fn pullback_key(
        &self,
        key: &[usize],
        c: &Rational,
        unit: usize,
        cache: &HashMap<(Twist, usize), SparseVec>,
        out: &mut Terms,
    ) {
        let model = &*self.model;
        let mut scalar = c.clone();
        for (j, coord) in self.coords.iter().enumerate() {
            if let Coord::BasePoint = coord {
                scalar *= model.eval_at_point(key[j]);
                if scalar.is_zero() {
                    return;
                }
            }
        }
        // running product in A^{⊗m}, multiplied on the right by each factor
        let mut acc: Terms = Terms::new();
        acc.insert(vec![unit; self.source], scalar);
        for (j, coord) in self.coords.iter().enumerate() {
            let Coord::Source { index, twist } = *coord else { continue };
            let v = &cache[&(twist, key[j])];
            if v.len() == 1 && v[0].0 == unit && v[0].1.is_one() {
                continue;
            }
            let mut next = Terms::new();
            for (k, a) in &acc {
                // sign of (x)(1⊗…⊗v⊗…⊗1): |v| · Σ_{s > index} |x_s|
                let tail_odd = k[index + 1..].iter().filter(|&&b| model.is_odd(b)).count();
                for (w, cw) in v {
                    let prod = model.product(k[index], *w);
                    if prod.is_empty() {
                        continue;
                    }
                    let negative = model.is_odd(*w) && tail_odd % 2 == 1;
                    for (r, cr) in prod {
                        let mut nk = k.clone();
                        nk[index] = *r;
                        let t = a * cw * cr;
                        add_term(&mut next, nk, if negative { -t } else { t });
                    }
                }
            }
            acc = next;
            if acc.is_empty() {
                return;
            }
        }
        for (k, a) in acc {
            add_term(out, k, a);
        }
    }

    /// `f^*: A(X^n) → A(X^m)`, an algebra homomorphism.
    pub fn pullback(&self, beta: &TensorClass) -> Result<TensorClass> {
        self.check_class(beta, self.coords.len(), "pullback")?;
        let unit = self.model.unit()?;
        let cache = self.twist_cache()?;
        let mut out = Terms::new();
        for (k, c) in beta.terms() {
            self.pullback_key(k, c, unit, &cache, &mut out);
        }
        Ok(TensorClass::from_terms_unchecked(&self.model, self.source, out))
    }

    /// `f_*: A(X^m) → A(X^n)`, the pairing adjoint of `f^*`:
    /// `⟨f_*α, β⟩ = ⟨α, f^*β⟩`.
    pub fn pushforward(&self, alpha: &TensorClass) -> Result<TensorClass> {
        self.check_class(alpha, self.source, "pushforward")?;
        let n = self.coords.len();
        self.model.check_power(n, "pushforward target")?;
        let model = &*self.model;
        let tables = model.derived_tables()?;
        let unit = model.unit()?;
        let cache = self.twist_cache()?;
        let top = model.top_degree();
        let mut out = Terms::new();
        for (deg, part) in alpha.homogeneous_parts() {
            let want = top as i64 * self.source as i64 - deg as i64;
            if want < 0 || want > top as i64 * n as i64 {
                continue;
            }
            let mut memo: HashMap<Key, Rational> = HashMap::new();
            for_each_tuple_of_degree(&tables, n, top, want as u32, &mut |b: &[usize]| {
                let mut pulled = Terms::new();
                self.pullback_key(b, &Rational::one(), unit, &cache, &mut pulled);
                let mut r = Rational::zero();
                for (t, ct) in &pulled {
                    let v = memo.entry(t.clone()).or_insert_with(|| part.pair_with_basis(t, &tables));
                    if !v.is_zero() {
                        r += &*v * ct;
                    }
                }
                if !r.is_zero() {
                    add_dual(model, &tables, b, &r, &mut out);
                }
            });
        }
        Ok(TensorClass::from_terms_unchecked(&self.model, n, out))
    }

    fn check_class(&self, c: &TensorClass, power: usize, op: &str) -> Result<()> {
        if c.power() != power {
            return Err(Error::shape(format!("{op}: class on power {} but map needs {power}", c.power())));
        }
        if !crate::tensor::same_model(c.model(), &self.model) {
            return Err(Error::shape(format!("{op}: model mismatch")));
        }
        Ok(())
    }
}

/// Adds `r · e^b` (the left dual of the tuple `b`) to `out`.
pub(crate) fn add_dual(model: &Model, tables: &DerivedTables, b: &[usize], r: &Rational, out: &mut Terms) {
    let mut odd_before = 0usize;
    let mut exponent = 0usize;
    for &x in b {
        if model.is_odd(x) {
            exponent += odd_before;
            odd_before += 1;
        }
    }
    let c = if exponent % 2 == 1 { -r.clone() } else { r.clone() };
    let slots: Vec<&SparseVec> = b.iter().map(|&x| tables.left_dual(x)).collect();
    crate::tensor::expand_slots(&slots, &c, out);
}

/// Calls `f` on every basis tuple of length `n` with total degree `want`.
pub(crate) fn for_each_tuple_of_degree(
    tables: &DerivedTables,
    n: usize,
    top: u32,
    want: u32,
    f: &mut dyn FnMut(&[usize]),
) {
    fn rec(
        tables: &DerivedTables,
        slot: usize,
        n: usize,
        top: u32,
        left: u32,
        buf: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if slot == n {
            if left == 0 {
                f(buf);
            }
            return;
        }
        let rest = (n - slot - 1) as u32;
        for k in 0..=top.min(left) {
            if left - k > rest * top {
                continue;
            }
            for &b in tables.by_degree(k) {
                buf.push(b);
                rec(tables, slot + 1, n, top, left - k, buf, f);
                buf.pop();
            }
        }
    }
    let mut buf = Vec::with_capacity(n);
    rec(tables, 0, n, top, want, &mut buf, f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{abelian, curve};
    use crate::rational::int;

    fn elliptic() -> Arc<Model> {
        Arc::new(curve(1).unwrap())
    }

    #[test]
    fn projection_pullback() {
        let m = elliptic();
        let p1 = PowerMorphism::projection(&m, 2, &[0]).unwrap();
        let a = TensorClass::basis_by_ids(&m, &["a1"]).unwrap();
        assert_eq!(p1.pullback(&a).unwrap(), TensorClass::basis_by_ids(&m, &["a1", "1"]).unwrap());
    }

    #[test]
    fn diagonal_pullback_is_product() {
        let m = Arc::new(curve(2).unwrap());
        let d = PowerMorphism::diagonal(&m, 2);
        for x in 0..m.len() {
            for y in 0..m.len() {
                let xy = TensorClass::basis(&m, vec![x, y]).unwrap();
                let prod =
                    TensorClass::basis(&m, vec![x]).unwrap().multiply(&TensorClass::basis(&m, vec![y]).unwrap());
                assert_eq!(d.pullback(&xy).unwrap(), prod.unwrap());
            }
        }
    }

    #[test]
    fn projection_pushforward_integrates_first_factor() {
        let m = elliptic();
        let p2 = PowerMorphism::projection(&m, 2, &[1]).unwrap();
        for b in 0..m.len() {
            let x = TensorClass::basis(&m, vec![m.point(), b]).unwrap();
            assert_eq!(p2.pushforward(&x).unwrap(), TensorClass::basis(&m, vec![b]).unwrap());
        }
    }

    #[test]
    fn base_point_inclusion_pushes_one_to_point() {
        let m = Arc::new(curve(2).unwrap());
        let inc = PowerMorphism::constant(&m, 0, 1);
        let one = TensorClass::scalar(&m, int(1));
        assert_eq!(inc.pushforward(&one).unwrap(), TensorClass::point_class(&m, 1));
    }

    #[test]
    fn composite_coordinates() {
        let m = elliptic();
        let d = PowerMorphism::diagonal(&m, 2);
        let swap = PowerMorphism::projection(&m, 2, &[1, 0]).unwrap();
        assert_eq!(d.then(&swap).unwrap(), d);
        let p = PowerMorphism::projection(&m, 2, &[0]).unwrap();
        assert_eq!(d.then(&p).unwrap(), PowerMorphism::identity(&m, 1));
        assert!(p.then(&d).is_ok());
        assert!(d.then(&d).is_err());
    }

    #[test]
    fn mult_twist_requires_abelian() {
        let m = Arc::new(curve(2).unwrap());
        assert!(PowerMorphism::twist(&m, Twist::mult(2)).is_err());
        assert!(PowerMorphism::twist(&m, Twist::INVOLUTION).is_err());
        let a = Arc::new(abelian(1).unwrap());
        assert!(PowerMorphism::twist(&a, Twist::mult(2)).is_ok());
    }

    #[test]
    fn tuple_enumeration_counts() {
        let m = abelian(2).unwrap();
        let t = m.derived_tables().unwrap();
        let mut count = 0;
        for_each_tuple_of_degree(&t, 5, 4, 4, &mut |_| count += 1);
        // degree-4 part of Λ(20)
        assert_eq!(count, 4845);
    }
}
