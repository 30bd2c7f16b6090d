//! Sparse exact classes on powers `X^n` of a model.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Model, SparseVec};
use crate::rational::{self, Rational};

/// A basis tuple `(b_1, …, b_n)` of `A^{⊗n}`.
pub type Key = Vec<usize>;

pub(crate) type Terms = BTreeMap<Key, Rational>;

pub(crate) fn add_term(terms: &mut Terms, key: Key, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Koszul sign of `(x_1⊗…⊗x_n)(y_1⊗…⊗y_n)`: `(-1)^{Σ_{i<j}|y_i||x_j|}`.
pub(crate) fn koszul_negative(model: &Model, x: &[usize], y: &[usize]) -> bool {
    let mut odd_y = 0usize;
    let mut exponent = 0usize;
    for j in 0..x.len() {
        if model.is_odd(x[j]) {
            exponent += odd_y;
        }
        if model.is_odd(y[j]) {
            odd_y += 1;
        }
    }
    exponent % 2 == 1
}

/// An element of `A(X^n) = A^{⊗n}`, stored as canonical sparse terms.
#[derive(Clone)]
pub struct TensorClass {
    model: Arc<Model>,
    power: usize,
    terms: Terms,
}

impl PartialEq for TensorClass {
    fn eq(&self, other: &Self) -> bool {
        self.power == other.power && same_model(&self.model, &other.model) && self.terms == other.terms
    }
}

impl Eq for TensorClass {}

pub(crate) fn same_model(a: &Arc<Model>, b: &Arc<Model>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TensorClass {
    pub fn zero(model: &Arc<Model>, power: usize) -> Self {
        TensorClass { model: model.clone(), power, terms: Terms::new() }
    }

    /// Builds a class, dropping zero coefficients and merging duplicates.
    pub fn from_terms(
        model: &Arc<Model>,
        power: usize,
        terms: impl IntoIterator<Item = (Key, Rational)>,
    ) -> Result<Self> {
        let mut out = Terms::new();
        for (k, c) in terms {
            if k.len() != power {
                return Err(Error::shape(format!("key of length {} on power {power}", k.len())));
            }
            if let Some(&bad) = k.iter().find(|&&i| i >= model.len()) {
                return Err(Error::shape(format!("basis index {bad} out of range")));
            }
            add_term(&mut out, k, c);
        }
        Ok(TensorClass { model: model.clone(), power, terms: out })
    }

    pub(crate) fn from_terms_unchecked(model: &Arc<Model>, power: usize, terms: Terms) -> Self {
        TensorClass { model: model.clone(), power, terms }
    }

    /// A single pure tensor of basis elements.
    pub fn basis(model: &Arc<Model>, key: Key) -> Result<Self> {
        let n = key.len();
        Self::from_terms(model, n, [(key, Rational::one())])
    }

    /// Looks basis elements up by id.
    pub fn basis_by_ids(model: &Arc<Model>, ids: &[&str]) -> Result<Self> {
        let key = ids
            .iter()
            .map(|id| model.index_of(id).ok_or_else(|| Error::param(format!("unknown basis id {id:?}"))))
            .collect::<Result<Key>>()?;
        Self::basis(model, key)
    }

    /// The fundamental class `[X^n] = 1⊗…⊗1`.
    pub fn fundamental(model: &Arc<Model>, power: usize) -> Result<Self> {
        let u = model.unit()?;
        Self::basis(model, vec![u; power])
    }

    /// `[a]⊗…⊗[a]`.
    pub fn point_class(model: &Arc<Model>, power: usize) -> Self {
        Self::basis(model, vec![model.point(); power]).expect("point index in range")
    }

    /// A scalar on `X^0`.
    pub fn scalar(model: &Arc<Model>, c: Rational) -> Self {
        Self::from_terms(model, 0, [(Key::new(), c)]).expect("empty key")
    }

    /// `1⊗…⊗v⊗…⊗1` with `v` in slot `slot`.
    pub fn lift_slot(model: &Arc<Model>, power: usize, slot: usize, v: &SparseVec) -> Result<Self> {
        if slot >= power {
            return Err(Error::shape(format!("slot {slot} outside power {power}")));
        }
        let u = model.unit()?;
        let mut terms = Terms::new();
        for (i, c) in v {
            let mut k = vec![u; power];
            k[slot] = *i;
            add_term(&mut terms, k, c.clone());
        }
        Ok(TensorClass { model: model.clone(), power, terms })
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &[usize]) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total cohomological degree of a key.
    pub fn key_degree(&self, key: &[usize]) -> u32 {
        key.iter().map(|&i| self.model.degree(i)).sum()
    }

    /// Scalar value of a class on `X^0`.
    pub fn as_scalar(&self) -> Option<Rational> {
        (self.power == 0).then(|| self.coefficient(&[]))
    }

    fn check_same(&self, other: &Self, op: &str) -> Result<()> {
        if self.power != other.power {
            return Err(Error::shape(format!("{op}: powers {} and {} differ", self.power, other.power)));
        }
        if !same_model(&self.model, &other.model) {
            return Err(Error::shape(format!(
                "{op}: models {} and {} differ",
                self.model.name(),
                other.model.name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "add")?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            add_term(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.model, self.power);
        }
        let terms = self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect();
        TensorClass { model: self.model.clone(), power: self.power, terms }
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) -> Result<()> {
        self.check_same(other, "add")?;
        for (k, x) in &other.terms {
            add_term(&mut self.terms, k.clone(), x * c);
        }
        Ok(())
    }

    /// Graded super-commutative product on `A^{⊗n}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "multiply")?;
        let model = &self.model;
        let mut out = Terms::new();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let slots: Vec<&SparseVec> = (0..self.power).map(|i| model.product(x[i], y[i])).collect();
                if slots.iter().any(|s| s.is_empty()) {
                    continue;
                }
                let mut c = cx * cy;
                if koszul_negative(model, x, y) {
                    c = -c;
                }
                expand_slots(&slots, &c, &mut out);
            }
        }
        Ok(TensorClass { model: model.clone(), power: self.power, terms: out })
    }

    /// `∫` over `X^n`: product of factor traces on each term.
    pub fn integrate(&self) -> Rational {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut t = c.clone();
                for &i in k {
                    t *= self.model.trace(i);
                    if t.is_zero() {
                        break;
                    }
                }
                t
            })
            .sum()
    }

    /// `⟨self, other⟩ = ∫ self · other`, computed without forming the product.
    pub fn pair(&self, other: &Self) -> Result<Rational> {
        self.check_same(other, "pair")?;
        let tables = self.model.derived_tables()?;
        let mut total = Rational::zero();
        for (t, ct) in &other.terms {
            let v = self.pair_with_basis(t, &tables);
            if !v.is_zero() {
                total += v * ct;
            }
        }
        Ok(total)
    }

    /// `⟨self, e_t⟩` for a basis tuple `t`.
    pub(crate) fn pair_with_basis(&self, t: &[usize], tables: &crate::model::DerivedTables) -> Rational {
        let n = t.len();
        let mut total = Rational::zero();
        let lists: Vec<&SparseVec> = t.iter().map(|&b| tables.partners(b)).collect();
        if lists.iter().any(|l| l.is_empty()) {
            return total;
        }
        let mut idx = vec![0usize; n];
        let mut key = vec![0usize; n];
        loop {
            let mut g = Rational::one();
            for s in 0..n {
                let (c, v) = &lists[s][idx[s]];
                key[s] = *c;
                g *= v;
            }
            if let Some(a) = self.terms.get(&key) {
                // ⟨e_c, e_t⟩ carries the Koszul sign of (e_c)(e_t)
                let term = a * g;
                if koszul_negative(&self.model, &key, t) {
                    total -= term;
                } else {
                    total += term;
                }
            }
            let mut s = n;
            loop {
                if s == 0 {
                    return total;
                }
                s -= 1;
                idx[s] += 1;
                if idx[s] < lists[s].len() {
                    break;
                }
                idx[s] = 0;
            }
        }
    }

    /// External product `self ⊗ other` on `X^{m+n}`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !same_model(&self.model, &other.model) {
            return Err(Error::shape("tensor: models differ"));
        }
        let mut out = Terms::new();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let mut k = x.clone();
                k.extend_from_slice(y);
                add_term(&mut out, k, cx * cy);
            }
        }
        Ok(TensorClass { model: self.model.clone(), power: self.power + other.power, terms: out })
    }

    /// Applies one degree-preserving linear endomorphism per slot;
    /// `maps[s][b]` is the image of basis element `b` in slot `s`.
    pub fn map_slots(&self, maps: &[&[SparseVec]]) -> Result<Self> {
        if maps.len() != self.power {
            return Err(Error::shape("map_slots: one map per slot required"));
        }
        let mut out = Terms::new();
        for (k, c) in &self.terms {
            let slots: Vec<&SparseVec> = k.iter().enumerate().map(|(s, &b)| &maps[s][b]).collect();
            if slots.iter().any(|s| s.is_empty()) {
                continue;
            }
            expand_slots(&slots, c, &mut out);
        }
        Ok(TensorClass { model: self.model.clone(), power: self.power, terms: out })
    }

    /// Parts of fixed total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, TensorClass> {
        let mut parts: BTreeMap<u32, Terms> = BTreeMap::new();
        for (k, c) in &self.terms {
            parts.entry(self.key_degree(k)).or_default().insert(k.clone(), c.clone());
        }
        parts
            .into_iter()
            .map(|(d, terms)| (d, TensorClass { model: self.model.clone(), power: self.power, terms }))
            .collect()
    }

    /// True if some term has total degree zero.
    pub fn has_degree_zero_part(&self) -> bool {
        self.terms.keys().any(|k| self.key_degree(k) == 0)
    }

    /// Terms as `([ids…], "p/q")` pairs in canonical order.
    pub fn to_id_terms(&self) -> Vec<(Vec<String>, String)> {
        self.terms
            .iter()
            .map(|(k, c)| (k.iter().map(|&i| self.model.id(i).to_string()).collect(), rational::format(c)))
            .collect()
    }
}

/// Expands a product of per-slot sparse vectors times `c` into `out`.
pub(crate) fn expand_slots(slots: &[&SparseVec], c: &Rational, out: &mut Terms) {
    let n = slots.len();
    if n == 0 {
        add_term(out, Key::new(), c.clone());
        return;
    }
    let mut idx = vec![0usize; n];
    loop {
        let mut coeff = c.clone();
        let mut key = Vec::with_capacity(n);
        for s in 0..n {
            let (b, v) = &slots[s][idx[s]];
            key.push(*b);
            coeff *= v;
        }
        add_term(out, key, coeff);
        let mut s = n;
        loop {
            if s == 0 {
                return;
            }
            s -= 1;
            idx[s] += 1;
            if idx[s] < slots[s].len() {
                break;
            }
            idx[s] = 0;
        }
    }
}

impl fmt::Debug for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorClass[{}^{}]({self})", self.model.name(), self.power)
    }
}

impl fmt::Display for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let ids: Vec<&str> = k.iter().map(|&i| self.model.id(i)).collect();
                format!("{}*({})", rational::format(c), ids.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
