//! Model-free bookkeeping: formal sums of diagonal symbols `Δ^{(J)}`, the
//! weight-support count for abelian varieties, the extremal degree
//! sequence, Stirling coefficients for curves and the base-point binomial.
//!
//! Symbols are treated as linearly independent, so formal vanishing
//! implies vanishing in any model but not conversely.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::correspondence::PowerMorphism;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::rational::{self, sign, Rational};
use crate::subset::Subset;
use crate::tensor::TensorClass;

/// `Σ c_J [Δ^{(J)}]` on `X^n`; `Δ^{(∅)}` is the point `(a, …, a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDiagonalSum {
    n: usize,
    terms: BTreeMap<Subset, Rational>,
}

impl FormalDiagonalSum {
    pub fn zero(n: usize) -> Self {
        FormalDiagonalSum { n, terms: BTreeMap::new() }
    }

    pub fn symbol(n: usize, j: Subset) -> Result<Self> {
        let mut s = Self::zero(n);
        s.add_term(j, Rational::one())?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, j: Subset) -> Rational {
        self.terms.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, j: Subset, c: Rational) -> Result<()> {
        if !j.is_subset_of(Subset::full(self.n)) {
            return Err(Error::shape(format!("subset {j} not inside 1..{}", self.n)));
        }
        let e = self.terms.entry(j).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&j);
        }
        Ok(())
    }

    /// `min_J (n − |J|)` over the support: the filtration level the
    /// expression visibly has. `None` for the empty sum.
    pub fn formal_level(&self) -> Option<usize> {
        self.terms.keys().map(|j| self.n - j.len()).min()
    }

    /// Pushforward along the projection forgetting slot `drop` (0-based).
    /// `Δ^{({i})}` dies when `dim X > 0` and becomes `Δ^{(∅)}` otherwise.
    pub fn project(&self, drop: usize, d_positive: bool) -> Result<FormalDiagonalSum> {
        if drop >= self.n {
            return Err(Error::param(format!("slot {} outside 1..{}", drop + 1, self.n)));
        }
        let mut out = FormalDiagonalSum::zero(self.n - 1);
        for (&j, c) in &self.terms {
            if j == Subset::singleton(drop) && d_positive {
                continue;
            }
            out.add_term(j.drop_position(drop), c.clone())?;
        }
        Ok(out)
    }

    /// Pushforward along `δ^{(n)}`, which repeats the last coordinate:
    /// `J ∌ n` stays, `J ∋ n` becomes `J ∪ {n+1}`.
    pub fn delta(&self) -> Result<FormalDiagonalSum> {
        let mut out = FormalDiagonalSum::zero(self.n + 1);
        for (&j, c) in &self.terms {
            let image = if self.n > 0 && j.contains(self.n - 1) { j.insert(self.n) } else { j };
            out.add_term(image, c.clone())?;
        }
        Ok(out)
    }

    /// Evaluates each symbol as `(φ_J ∘ Δ)_*[X]`, and `Δ^{(∅)}` as
    /// `[a]^{⊗n}`.
    pub fn realize(&self, model: &Arc<Model>) -> Result<TensorClass> {
        let fundamental = TensorClass::fundamental(model, 1)?;
        let mut total = TensorClass::zero(model, self.n);
        for (&j, c) in &self.terms {
            let class = if j.is_empty() {
                TensorClass::point_class(model, self.n)
            } else {
                PowerMorphism::partial_diagonal(model, j, self.n).pushforward(&fundamental)?
            };
            total.add_scaled(&class, c)?;
        }
        Ok(total)
    }
}

impl fmt::Display for FormalDiagonalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(j, c)| format!("{}·Δ{}", rational::format(c), j)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Γⁿ = Σ_{∅≠J} (−1)^{n−|J|} [Δ^{(J)}]` as a formal sum.
pub fn formal_gamma(n: usize) -> Result<FormalDiagonalSum> {
    if n == 0 {
        return Err(Error::param("formal gamma needs n >= 1"));
    }
    let mut s = FormalDiagonalSum::zero(n);
    for j in Subset::all(n).filter(|j| !j.is_empty()) {
        s.add_term(j, sign((n - j.len()) % 2 == 1))?;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSupport {
    pub n: usize,
    pub g: usize,
    /// Some tuple in `{1..2g}^n` has sum exactly `2g`.
    pub nonempty: bool,
    pub witness: Option<Vec<usize>>,
}

/// Searches `{1..2g}^n` for a tuple summing to `2g` by dynamic programming
/// over partial sums, returning a witness when one exists.
pub fn weight_support_nonempty(n: usize, g: usize) -> Result<WeightSupport> {
    if n == 0 || g == 0 {
        return Err(Error::param("weight support needs n, g >= 1"));
    }
    let target = 2 * g;
    // reach[k][s]: some k-tuple of entries in 1..=2g sums to s
    let mut reach = vec![vec![false; target + 1]; n + 1];
    reach[0][0] = true;
    for k in 1..=n {
        for s in 0..=target {
            reach[k][s] = (1..=target.min(s)).any(|i| reach[k - 1][s - i]);
        }
    }
    let nonempty = reach[n][target];
    let witness = nonempty.then(|| {
        let mut out = Vec::with_capacity(n);
        let mut s = target;
        for k in (1..=n).rev() {
            let i = (1..=target.min(s)).find(|&i| reach[k - 1][s - i]).expect("reachable");
            out.push(i);
            s -= i;
        }
        out.reverse();
        out
    });
    Ok(WeightSupport { n, g, nonempty, witness })
}

/// Largest tuple count [`weight_support_exhaustive`] will list.
pub const EXHAUSTIVE_TUPLE_CAP: u64 = 1 << 22;

/// The same question by listing every tuple; only for small inputs.
pub fn weight_support_exhaustive(n: usize, g: usize) -> Result<bool> {
    let base = 2 * g;
    let total = (base as u64).checked_pow(n as u32).filter(|&t| t <= EXHAUSTIVE_TUPLE_CAP).ok_or(Error::Resource {
        what: "weight tuples".into(),
        bound: (base as u128).saturating_pow(n as u32),
        cap: EXHAUSTIVE_TUPLE_CAP as u128,
    })?;
    Ok((0..total).any(|mut code| {
        let mut sum = 0;
        for _ in 0..n {
            sum += (code % base as u64) as usize + 1;
            code /= base as u64;
        }
        sum == base
    }))
}

/// Sequences `(m_0, …, m_{2d})` with `Σ m_j = d+e`, `m_0 = m_{2d} = 0`,
/// `m_{2d−1} ≤ 2e` and `Σ j·m_j = 2d(d+e−1)`.
pub fn extremal_sequences(d: usize, e: usize) -> Result<Vec<Vec<usize>>> {
    if d == 0 || e > d {
        return Err(Error::param(format!("extremal sequences need d >= 1 and e <= d, got d={d}, e={e}")));
    }
    let n = d + e;
    let target = 2 * d * (n - 1);
    let mut found = Vec::new();
    let mut current = vec![0usize; 2 * d + 1];
    fn fill(pos: usize, left: usize, d: usize, e: usize, target: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == 2 * d {
            if left == 0 && cur.iter().enumerate().map(|(j, m)| j * m).sum::<usize>() == target {
                out.push(cur.clone());
            }
            return;
        }
        let max = if pos == 2 * d - 1 { left.min(2 * e) } else { left };
        for k in 0..=max {
            cur[pos] = k;
            fill(pos + 1, left - k, d, e, target, cur, out);
        }
        cur[pos] = 0;
    }
    fill(1, n, d, e, target, &mut current, &mut found);
    Ok(found)
}

/// The unique extremal sequence `(0, …, 0, d−e, 2e, 0)`. For `d = 1,
/// e = 0` the form would need `m_0 = 1`, which the constraints exclude.
pub fn unique_extremal_sequence(d: usize, e: usize) -> Result<Vec<usize>> {
    if d == 1 && e == 0 {
        return Err(Error::Precondition("no extremal sequence when d = 1, e = 0".into()));
    }
    let all = extremal_sequences(d, e)?;
    let mut expected = vec![0usize; 2 * d + 1];
    expected[2 * d - 2] += d - e;
    expected[2 * d - 1] += 2 * e;
    match all.as_slice() {
        [only] if *only == expected => Ok(expected),
        _ => Err(Error::Model(format!("extremal sequences for d={d}, e={e}: {all:?}"))),
    }
}

/// `S(i, n)` by `S(i,n) = n·S(i−1,n) + S(i−1,n−1)`.
pub fn stirling(i: usize, n: usize) -> BigUint {
    let mut row = vec![BigUint::zero(); n + 1];
    row[0] = BigUint::one();
    for _ in 0..i {
        let mut next = vec![BigUint::zero(); n + 1];
        for k in 1..=n {
            next[k] = BigUint::from(k) * &row[k] + &row[k - 1];
        }
        row = next;
    }
    row[n].clone()
}

/// Counts set partitions of `{1..i}` into exactly `n` blocks by listing
/// restricted growth strings.
pub fn stirling_brute_force(i: usize, n: usize) -> u64 {
    fn walk(pos: usize, i: usize, blocks: usize, n: usize) -> u64 {
        if pos == i {
            return u64::from(blocks == n);
        }
        // a new element joins one of the existing blocks or opens the next one
        let mut total = 0;
        for b in 0..=blocks {
            if b == blocks && blocks == n {
                break;
            }
            total += walk(pos + 1, i, blocks.max(b + 1), n);
        }
        total
    }
    walk(0, i, 0, n)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n!·S(i,n)` for `i = 2..=g+1`: the coefficients of `γ_i` in `Γⁿ` of a
/// curve of genus `g`.
pub fn curve_coefficients(n: usize, g: usize) -> Result<Vec<BigUint>> {
    if g == 0 {
        return Err(Error::param("curve coefficients need g >= 1"));
    }
    let f = factorial(n);
    Ok((2..=g + 1).map(|i| &f * stirling(i, n)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialExpansion {
    pub slots: usize,
    /// Each term is `π₊` on `J` and `T` on the complement.
    pub terms: Vec<Subset>,
    /// Number of terms with `|J| = k`, for `k = 0..=slots`.
    pub counts: Vec<u64>,
}

impl BinomialExpansion {
    pub fn counts_are_binomial(&self) -> bool {
        self.counts.iter().enumerate().all(|(k, &c)| c == binomial(self.slots as u64, k as u64))
    }

    /// Setting `T = 0` leaves only the all-`π₊` term.
    pub fn t_zero_terms(&self) -> Vec<Subset> {
        self.terms.iter().copied().filter(|j| j.len() == self.slots).collect()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(π₊ + T)^{⊗(2n−2)} = Σ_J π₊^{⊗J} ⊗ T^{⊗J'}`.
pub fn base_point_binomial(n: usize) -> Result<BinomialExpansion> {
    if n < 2 {
        return Err(Error::param("base-point expansion needs n >= 2"));
    }
    let slots = 2 * n - 2;
    let terms: Vec<Subset> = Subset::all(slots).collect();
    let mut counts = vec![0u64; slots + 1];
    for j in &terms {
        counts[j.len()] += 1;
    }
    Ok(BinomialExpansion { slots, terms, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonals::gross_schoen_gamma;
    use crate::model::curve;
    use crate::rational::int;

    #[test]
    fn gamma_signs() {
        let g2 = formal_gamma(2).unwrap();
        assert_eq!(g2.coefficient(Subset::full(2)), int(1));
        assert_eq!(g2.coefficient(Subset::singleton(0)), int(-1));
        assert_eq!(g2.coefficient(Subset::singleton(1)), int(-1));
        let g3 = formal_gamma(3).unwrap();
        for j in Subset::all(3).filter(|j| !j.is_empty()) {
            assert_eq!(g3.coefficient(j), sign(j.len() % 2 == 0));
        }
    }

    #[test]
    fn realization_reproduces_expansion() {
        let m = Arc::new(curve(2).unwrap());
        for n in 1..=3 {
            assert_eq!(formal_gamma(n).unwrap().realize(&m).unwrap(), gross_schoen_gamma(&m, n).unwrap().result);
        }
    }

    #[test]
    fn projection_rules() {
        let full = FormalDiagonalSum::symbol(3, Subset::full(3)).unwrap();
        assert_eq!(full.project(1, true).unwrap(), FormalDiagonalSum::symbol(2, Subset::full(2)).unwrap());
        assert!(FormalDiagonalSum::symbol(3, Subset::singleton(1)).unwrap().project(1, true).unwrap().is_zero());
        assert_eq!(
            FormalDiagonalSum::symbol(3, Subset::singleton(1)).unwrap().project(1, false).unwrap(),
            FormalDiagonalSum::symbol(2, Subset::EMPTY).unwrap()
        );
        let m = Arc::new(curve(1).unwrap());
        let g3 = formal_gamma(3).unwrap();
        let dropped = g3.project(2, true).unwrap();
        let numeric = PowerMorphism::projection(&m, 3, &[0, 1]).unwrap().pushforward(&g3.realize(&m).unwrap()).unwrap();
        assert_eq!(dropped.realize(&m).unwrap(), numeric);
        assert!(numeric.is_zero());
    }

    #[test]
    fn delta_rules() {
        let full = FormalDiagonalSum::symbol(3, Subset::full(3)).unwrap();
        assert_eq!(full.delta().unwrap(), FormalDiagonalSum::symbol(4, Subset::full(4)).unwrap());
        for n in 1..=4 {
            let g = formal_gamma(n).unwrap();
            assert!(g.delta().unwrap().formal_level() >= g.formal_level());
        }
    }

    #[test]
    fn weight_support() {
        assert!(!weight_support_nonempty(3, 1).unwrap().nonempty);
        assert_eq!(weight_support_nonempty(2, 1).unwrap().witness, Some(vec![1, 1]));
        assert_eq!(weight_support_nonempty(4, 2).unwrap().witness, Some(vec![1, 1, 1, 1]));
        for g in 1..=3 {
            for n in 1..=6 {
                assert_eq!(weight_support_nonempty(n, g).unwrap().nonempty, weight_support_exhaustive(n, g).unwrap());
            }
        }
        assert!(matches!(weight_support_exhaustive(25, 10), Err(Error::Resource { .. })));
    }

    #[test]
    fn extremal() {
        assert_eq!(unique_extremal_sequence(1, 1).unwrap(), vec![0, 2, 0]);
        assert_eq!(unique_extremal_sequence(2, 0).unwrap(), vec![0, 0, 2, 0, 0]);
        assert_eq!(unique_extremal_sequence(2, 1).unwrap(), vec![0, 0, 1, 2, 0]);
        assert!(extremal_sequences(1, 0).unwrap().is_empty());
        assert!(unique_extremal_sequence(1, 0).is_err());
        for d in 1..=4 {
            for e in (0..=d).filter(|&e| d > 1 || e > 0) {
                unique_extremal_sequence(d, e).unwrap();
            }
        }
    }

    #[test]
    fn stirling_numbers() {
        assert_eq!(stirling(3, 2), BigUint::from(3u32));
        assert_eq!(stirling(4, 2), BigUint::from(7u32));
        assert_eq!(stirling(0, 0), BigUint::one());
        for i in 0..=8 {
            for n in 0..=8 {
                assert_eq!(stirling(i, n), BigUint::from(stirling_brute_force(i, n)), "S({i},{n})");
            }
        }
        let c = curve_coefficients(2, 3).unwrap();
        assert_eq!(c, vec![BigUint::from(2u32), BigUint::from(6u32), BigUint::from(14u32)]);
    }

    #[test]
    fn binomial_expansion() {
        let b = base_point_binomial(2).unwrap();
        assert_eq!(b.terms.len(), 4);
        assert!(b.counts_are_binomial());
        assert_eq!(b.t_zero_terms(), vec![Subset::full(2)]);
    }
}
