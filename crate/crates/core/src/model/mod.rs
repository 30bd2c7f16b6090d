//! Graded super-commutative Frobenius algebras standing in for the
//! cohomology of a pointed variety.

mod builtin;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Rational};

pub use builtin::{abelian, curve, k3, point, product, Builtin};
pub use validate::{validate_model, Violation};

/// Sparse linear combination of basis indices, sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// Default bound on the dense term count `(dim H)^n` of a computation.
pub const DEFAULT_TERM_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub id: String,
    pub degree: u32,
}

/// Raw algebra data. Nothing is checked until [`ModelParts::build`].
#[derive(Clone, Debug)]
pub struct ModelParts {
    pub name: String,
    pub dimension: u32,
    pub basis: Vec<BasisElement>,
    /// Products of ordered basis pairs; missing pairs are zero.
    pub products: BTreeMap<(usize, usize), SparseVec>,
    pub trace: Vec<Rational>,
    pub point: usize,
    /// Image of each basis element under the involution.
    pub involution: Option<Vec<SparseVec>>,
    pub albanese_e: Option<u32>,
}

impl ModelParts {
    pub fn new(name: impl Into<String>, dimension: u32, basis: Vec<BasisElement>, point: usize) -> Self {
        let n = basis.len();
        ModelParts {
            name: name.into(),
            dimension,
            basis,
            products: BTreeMap::new(),
            trace: vec![Rational::zero(); n],
            point,
            involution: None,
            albanese_e: None,
        }
    }

    /// Sets `x*y = v` and fills `y*x` by the super-commutative sign.
    pub fn set_product_pair(&mut self, x: usize, y: usize, v: SparseVec) {
        let odd = self.basis[x].degree % 2 == 1 && self.basis[y].degree % 2 == 1;
        let w: SparseVec = if odd {
            v.iter().map(|(i, c)| (*i, -c.clone())).collect()
        } else {
            v.clone()
        };
        self.products.insert((x, y), v);
        self.products.insert((y, x), w);
    }

    /// Declares `u` the unit: `u*x = x*u = x`.
    pub fn set_unit(&mut self, u: usize) {
        for x in 0..self.basis.len() {
            self.products.insert((u, x), vec![(x, Rational::one())]);
            self.products.insert((x, u), vec![(x, Rational::one())]);
        }
    }

    /// Builds without validation. Invalid data may later surface as
    /// [`Error::Model`] from operations that need the pairing.
    pub fn build_unchecked(self) -> Model {
        let n = self.basis.len();
        let mut products = vec![SparseVec::new(); n * n];
        for ((x, y), v) in self.products {
            if x < n && y < n {
                products[x * n + y] = normalize(v);
            }
        }
        let involution = self.involution.map(|m| m.into_iter().map(normalize).collect());
        Model {
            name: self.name,
            dimension: self.dimension,
            basis: self.basis,
            products,
            trace: self.trace,
            point: self.point,
            involution,
            albanese_e: self.albanese_e,
            term_cap: DEFAULT_TERM_CAP,
            derived: OnceLock::new(),
        }
    }

    /// Builds and validates.
    pub fn build(self) -> Result<Model> {
        let model = self.build_unchecked();
        let violations = validate_model(&model);
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(Error::InvalidModel(violations))
        }
    }
}

fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

#[derive(Debug)]
struct Derived {
    unit: usize,
    left_dual: Vec<SparseVec>,
    /// For each `b`: the `(c, <e_c, e_b>)` with nonzero pairing.
    partners: Vec<SparseVec>,
    by_degree: Vec<Vec<usize>>,
}

/// A pointed graded Frobenius algebra. Immutable once built.
#[derive(Clone)]
pub struct Model {
    name: String,
    dimension: u32,
    basis: Vec<BasisElement>,
    products: Vec<SparseVec>,
    trace: Vec<Rational>,
    point: usize,
    involution: Option<Vec<SparseVec>>,
    albanese_e: Option<u32>,
    term_cap: u128,
    derived: OnceLock<std::result::Result<Arc<Derived>, String>>,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.dimension == other.dimension
            && self.basis == other.basis
            && self.products == other.products
            && self.trace == other.trace
            && self.point == other.point
            && self.involution == other.involution
            && self.albanese_e == other.albanese_e
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("ranks", &self.ranks())
            .finish()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Model {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension `d`; the top cohomological degree is `2d`.
    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn top_degree(&self) -> u32 {
        2 * self.dimension
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].degree % 2 == 1
    }

    pub fn id(&self, i: usize) -> &str {
        &self.basis[i].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.id == id)
    }

    pub fn product(&self, x: usize, y: usize) -> &SparseVec {
        &self.products[x * self.basis.len() + y]
    }

    pub fn trace(&self, i: usize) -> &Rational {
        &self.trace[i]
    }

    pub fn traces(&self) -> &[Rational] {
        &self.trace
    }

    /// Index of the base point class `[a]`.
    pub fn point(&self) -> usize {
        self.point
    }

    pub fn involution(&self) -> Option<&[SparseVec]> {
        self.involution.as_deref()
    }

    pub fn albanese_override(&self) -> Option<u32> {
        self.albanese_e
    }

    pub fn term_cap(&self) -> u128 {
        self.term_cap
    }

    pub fn with_term_cap(mut self, cap: u128) -> Self {
        self.term_cap = cap;
        self
    }

    /// Returns a validated copy carrying the given involution.
    pub fn with_involution(&self, images: Vec<SparseVec>) -> Result<Model> {
        let mut parts = self.to_parts();
        parts.involution = Some(images);
        Ok(parts.build()?.with_term_cap(self.term_cap))
    }

    pub fn to_parts(&self) -> ModelParts {
        let n = self.basis.len();
        let mut products = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                let v = self.product(x, y);
                if !v.is_empty() {
                    products.insert((x, y), v.clone());
                }
            }
        }
        ModelParts {
            name: self.name.clone(),
            dimension: self.dimension,
            basis: self.basis.clone(),
            products,
            trace: self.trace.clone(),
            point: self.point,
            involution: self.involution.clone(),
            albanese_e: self.albanese_e,
        }
    }

    /// Betti-style ranks per degree `0..=2d`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.top_degree() as usize + 1];
        for b in &self.basis {
            if let Some(slot) = r.get_mut(b.degree as usize) {
                *slot += 1;
            }
        }
        r
    }

    /// Checks that `(dim H)^power` stays under the term cap.
    pub fn check_power(&self, power: usize, what: &str) -> Result<()> {
        let bound = (self.len() as u128).checked_pow(power as u32).unwrap_or(u128::MAX);
        if bound > self.term_cap {
            return Err(Error::Resource { what: what.to_string(), bound, cap: self.term_cap });
        }
        Ok(())
    }

    fn derived(&self) -> Result<Arc<Derived>> {
        self.derived
            .get_or_init(|| compute_derived(self).map(Arc::new))
            .clone()
            .map_err(Error::Model)
    }

    pub fn unit(&self) -> Result<usize> {
        Ok(self.derived()?.unit)
    }

    /// Left dual `e^b` of basis element `b`: `∫ e^b e_c = δ_bc`.
    pub fn left_dual(&self, b: usize) -> Result<SparseVec> {
        Ok(self.derived()?.left_dual[b].clone())
    }

    /// Pairs `(c, ∫ e_c e_b)` with nonzero value.
    pub fn pairing_partners(&self, b: usize) -> Result<SparseVec> {
        Ok(self.derived()?.partners[b].clone())
    }

    pub(crate) fn derived_tables(&self) -> Result<DerivedTables> {
        let d = self.derived()?;
        Ok(DerivedTables(d))
    }

    pub fn basis_of_degree(&self, k: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == k).collect()
    }

    /// Product of two sparse combinations in this algebra.
    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in self.product(*i, *j) {
                    *acc.entry(*k).or_insert_with(Rational::zero) += a * b * c;
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `∫ x` of a sparse combination.
    pub fn integrate_vec(&self, x: &SparseVec) -> Rational {
        x.iter().map(|(i, c)| c * &self.trace[*i]).sum()
    }

    /// Evaluation at the base point: `x ↦ ∫ x·[a]`. This is the pullback
    /// along the inclusion of the point.
    pub fn eval_at_point(&self, i: usize) -> Rational {
        self.product(i, self.point)
            .iter()
            .map(|(k, c)| c * &self.trace[*k])
            .sum()
    }

    /// Image of a basis element under the involution's pullback.
    pub fn involution_image(&self, i: usize) -> Result<&SparseVec> {
        self.involution
            .as_ref()
            .map(|m| &m[i])
            .ok_or_else(|| Error::Model(format!("{} has no involution", self.name)))
    }

    /// Ranks of the spans of `i`-fold products of degree-one classes,
    /// for `i = 1..=2d`.
    pub fn degree_one_power_ranks(&self) -> Vec<usize> {
        let ones = self.basis_of_degree(1);
        let mut out = Vec::new();
        let mut current: Vec<SparseVec> = ones.iter().map(|&i| vec![(i, Rational::one())]).collect();
        for i in 1..=self.top_degree() {
            let target = self.basis_of_degree(i);
            let rows: linalg::Matrix = current
                .iter()
                .map(|v| {
                    target
                        .iter()
                        .map(|t| v.iter().find(|(k, _)| k == t).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero))
                        .collect()
                })
                .collect();
            let r = if target.is_empty() { 0 } else { linalg::rank(&rows) };
            out.push(r);
            if r == 0 {
                for _ in i + 1..=self.top_degree() {
                    out.push(0);
                }
                break;
            }
            let basis_rows = row_basis(&rows);
            let reduced: Vec<SparseVec> = basis_rows
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(j, c)| (target[j], c))
                        .collect()
                })
                .collect();
            let mut next = Vec::new();
            for v in &reduced {
                for &g in &ones {
                    let p = self.mul_vec(v, &vec![(g, Rational::one())]);
                    if !p.is_empty() {
                        next.push(p);
                    }
                }
            }
            current = next;
        }
        out
    }

    /// True when the algebra looks like the cohomology of an abelian
    /// variety: `H^1` has rank `2d` and generates everything.
    pub fn is_abelian(&self) -> bool {
        if self.dimension == 0 {
            return false;
        }
        let ranks = self.ranks();
        if ranks[1] != 2 * self.dimension as usize {
            return false;
        }
        let powers = self.degree_one_power_ranks();
        powers.iter().enumerate().all(|(i, &r)| r == ranks[i + 1])
    }
}

/// Cheap handle on derived tables for hot loops.
pub(crate) struct DerivedTables(Arc<Derived>);

impl DerivedTables {
    pub fn left_dual(&self, b: usize) -> &SparseVec {
        &self.0.left_dual[b]
    }

    pub fn partners(&self, b: usize) -> &SparseVec {
        &self.0.partners[b]
    }

    pub fn by_degree(&self, k: u32) -> &[usize] {
        self.0.by_degree.get(k as usize).map(Vec::as_slice).unwrap_or(&[])
    }
}

fn row_basis(rows: &linalg::Matrix) -> linalg::Matrix {
    let mut a = rows.clone();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[rank][col];
            for j in col..cols {
                let t = &f * &a[rank][j];
                a[r][j] -= t;
            }
        }
        rank += 1;
    }
    a.truncate(rank);
    a
}

fn find_unit(model: &Model) -> Option<usize> {
    let n = model.len();
    (0..n).filter(|&u| model.degree(u) == 0).find(|&u| {
        (0..n).all(|x| {
            let id = vec![(x, Rational::one())];
            model.product(u, x) == &id && model.product(x, u) == &id
        })
    })
}

fn compute_derived(model: &Model) -> std::result::Result<Derived, String> {
    let n = model.len();
    let top = model.top_degree();
    let unit = find_unit(model).ok_or_else(|| format!("{}: no unit in degree 0", model.name))?;
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); top as usize + 1];
    for i in 0..n {
        let k = model.degree(i);
        if k > top {
            return Err(format!("{}: basis element {} has degree {k} > {top}", model.name, model.id(i)));
        }
        by_degree[k as usize].push(i);
    }
    let pairing = |x: usize, y: usize| -> Rational { model.integrate_vec(model.product(x, y)) };

    let mut partners = vec![SparseVec::new(); n];
    for b in 0..n {
        let comp = &by_degree[(top - model.degree(b)) as usize];
        partners[b] = comp
            .iter()
            .map(|&c| (c, pairing(c, b)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
    }

    let mut left_dual = vec![SparseVec::new(); n];
    for k in 0..=top {
        let this = &by_degree[k as usize];
        let comp = &by_degree[(top - k) as usize];
        if this.len() != comp.len() {
            return Err(format!(
                "{}: degrees {k} and {} have ranks {} and {}",
                model.name,
                top - k,
                this.len(),
                comp.len()
            ));
        }
        if this.is_empty() {
            continue;
        }
        // g[u][c] = ∫ e_u e_c, u in degree 2d-k, c in degree k
        let g: linalg::Matrix = comp
            .iter()
            .map(|&u| this.iter().map(|&c| pairing(u, c)).collect())
            .collect();
        let inv = linalg::inverse(&g).ok_or_else(|| format!("{}: pairing degenerate in degree {k}", model.name))?;
        for (bi, &b) in this.iter().enumerate() {
            left_dual[b] = comp
                .iter()
                .enumerate()
                .map(|(ui, &u)| (u, inv[bi][ui].clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
    }
    Ok(Derived { unit, left_dual, partners, by_degree })
}

pub(crate) fn fmt_vec(model: &Model, v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(i, c)| format!("{}*{}", rational::format(c), model.id(*i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn curve_left_duals() {
        let c = curve(1).unwrap();
        let a = c.index_of("a1").unwrap();
        let b = c.index_of("b1").unwrap();
        assert_eq!(c.left_dual(a).unwrap(), vec![(b, int(-1))]);
        assert_eq!(c.left_dual(b).unwrap(), vec![(a, int(1))]);
        assert_eq!(c.left_dual(c.unit().unwrap()).unwrap(), vec![(c.point(), int(1))]);
    }

    #[test]
    fn eval_at_point_is_degree_zero_coefficient() {
        let c = curve(2).unwrap();
        assert_eq!(c.eval_at_point(c.unit().unwrap()), int(1));
        assert_eq!(c.eval_at_point(c.point()), int(0));
        let p = point().unwrap();
        assert_eq!(p.eval_at_point(p.point()), int(1));
    }

    #[test]
    fn abelian_detection() {
        assert!(abelian(2).unwrap().is_abelian());
        assert!(curve(1).unwrap().is_abelian());
        assert!(!curve(2).unwrap().is_abelian());
        assert!(!k3(2).unwrap().is_abelian());
        let e = curve(1).unwrap();
        assert!(product(&e, &e).unwrap().is_abelian());
    }

    #[test]
    fn term_cap_guard() {
        let a = abelian(2).unwrap().with_term_cap(1000);
        assert!(a.check_power(2, "test").is_ok());
        assert!(matches!(a.check_power(3, "test"), Err(Error::Resource { .. })));
    }
}
