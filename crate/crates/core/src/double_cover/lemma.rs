//! The symmetric-polynomial reduction behind the `Φ` induction, and the
//! Vandermonde certificate closing the double-cover argument.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::bareiss_determinant;
use crate::rational::{int, Rational};

/// A polynomial in two variables, keyed by exponent pairs.
pub type Poly2 = BTreeMap<(u32, u32), Rational>;

fn poly_add(acc: &mut Poly2, key: (u32, u32), c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(key).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn poly_mul(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut out = Poly2::new();
    for ((i, j), c) in a {
        for ((k, l), d) in b {
            poly_add(&mut out, (i + k, j + l), c * d);
        }
    }
    out
}

fn poly_pow(a: &Poly2, e: u32) -> Poly2 {
    let mut out = Poly2::from([((0, 0), Rational::one())]);
    for _ in 0..e {
        out = poly_mul(&out, a);
    }
    out
}

fn linear(cx: i64, cy: i64, c0: i64) -> Poly2 {
    let mut p = Poly2::new();
    poly_add(&mut p, (1, 0), int(cx));
    poly_add(&mut p, (0, 1), int(cy));
    poly_add(&mut p, (0, 0), int(c0));
    p
}

/// `x^m (y−1)^m + (x−1)^m y^m` in `ℚ[x, y]`.
pub fn lemma_polynomial(m: u32) -> Poly2 {
    let x = linear(1, 0, 0);
    let y = linear(0, 1, 0);
    let xm1 = linear(1, 0, -1);
    let ym1 = linear(0, 1, -1);
    let mut out = poly_mul(&poly_pow(&x, m), &poly_pow(&ym1, m));
    for (k, c) in poly_mul(&poly_pow(&xm1, m), &poly_pow(&y, m)) {
        poly_add(&mut out, k, c);
    }
    out
}

/// Rewrites a symmetric polynomial in `x, y` in terms of `s = x + y` and
/// `p = xy`; keys of the result are `(deg_s, deg_p)`.
pub fn to_sp(f: &Poly2) -> Result<Poly2> {
    // power sums P_k = x^k + y^k as polynomials in (s, p)
    let max = f.keys().map(|(a, b)| a.max(b) - a.min(b)).max().unwrap_or(0) as usize;
    let mut power_sums: Vec<Poly2> = vec![Poly2::from([((0, 0), int(2))]), Poly2::from([((1, 0), int(1))])];
    while power_sums.len() <= max {
        let k = power_sums.len();
        let mut next = poly_mul(&power_sums[k - 1], &Poly2::from([((1, 0), int(1))]));
        for (key, c) in poly_mul(&power_sums[k - 2], &Poly2::from([((0, 1), int(1))])) {
            poly_add(&mut next, key, -c);
        }
        power_sums.push(next);
    }
    let mut out = Poly2::new();
    for (&(a, b), c) in f {
        if a < b {
            continue;
        }
        if f.get(&(b, a)) != Some(c) {
            return Err(Error::Model(format!("polynomial is not symmetric at x^{a} y^{b}")));
        }
        // x^a y^b + x^b y^a = p^b P_{a−b}; the diagonal term is counted once
        let factor = if a == b { Rational::new(1.into(), 2.into()) } else { Rational::one() };
        for ((i, j), d) in &power_sums[(a - b) as usize] {
            poly_add(&mut out, (*i, j + b), c * d * &factor);
        }
    }
    Ok(out)
}

/// Back-substitutes `s = x + y`, `p = xy`.
pub fn from_sp(g: &Poly2) -> Poly2 {
    let s = linear(1, 1, 0);
    let p = Poly2::from([((1, 1), Rational::one())]);
    let mut out = Poly2::new();
    for (&(i, j), c) in g {
        for (k, d) in poly_mul(&poly_pow(&s, i), &poly_pow(&p, j)) {
            poly_add(&mut out, k, c * d);
        }
    }
    out
}

/// A polynomial in `s`, coefficients in increasing degree.
pub type PolyS = Vec<Rational>;

pub fn eval_s(c: &PolyS, s: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * s + a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialReduction {
    pub m: u32,
    /// `c_0, …, c_{m−1}` as polynomials in `s`.
    pub coefficients: Vec<PolyS>,
    /// The back-substituted expansion equals the original polynomial.
    pub verified: bool,
}

/// Writes `x^m(y−1)^m + (x−1)^m y^m = 2p^m + Σ_{j<m} c_j(s) p^j`.
pub fn polynomial_reduction(m: u32) -> Result<PolynomialReduction> {
    if m == 0 {
        return Err(Error::param("the reduction needs m >= 1"));
    }
    let f = lemma_polynomial(m);
    let sp = to_sp(&f)?;
    let mut coefficients: Vec<PolyS> = vec![Vec::new(); m as usize];
    let mut lead_ok = false;
    for (&(i, j), c) in &sp {
        if j > m {
            return Err(Error::Model(format!("p-degree {j} exceeds {m}")));
        }
        if j == m {
            lead_ok = i == 0 && *c == int(2);
            if !lead_ok {
                return Err(Error::Model("leading coefficient is not 2".into()));
            }
            continue;
        }
        let row = &mut coefficients[j as usize];
        if row.len() <= i as usize {
            row.resize(i as usize + 1, Rational::zero());
        }
        row[i as usize] = c.clone();
    }
    let verified = lead_ok && from_sp(&sp) == f;
    Ok(PolynomialReduction { m, coefficients, verified })
}

impl PolynomialReduction {
    /// `2 (xy)^m + Σ c_j(x+y) (xy)^j` at a point.
    pub fn evaluate(&self, x: &Rational, y: &Rational) -> Rational {
        let s = x + y;
        let p = x * y;
        let mut total = int(2) * pow(&p, self.m);
        for (j, c) in self.coefficients.iter().enumerate() {
            total += eval_s(c, &s) * pow(&p, j as u32);
        }
        total
    }
}

pub(crate) fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// `x^m(y−1)^m + (x−1)^m y^m` evaluated directly.
pub fn lemma_direct(m: u32, x: &Rational, y: &Rational) -> Rational {
    let one = Rational::one();
    pow(x, m) * pow(&(y - &one), m) + pow(&(x - &one), m) * pow(y, m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeCertificate {
    pub n: usize,
    /// `r(2n−1−r)` for `r = 0..n`.
    pub values: Vec<BigInt>,
    pub strictly_increasing: bool,
    pub determinant: BigInt,
    /// `∏_{i<j} (v_j − v_i)`.
    pub product_formula: BigInt,
}

impl VandermondeCertificate {
    pub fn holds(&self) -> bool {
        self.strictly_increasing && !self.determinant.is_zero() && self.determinant == self.product_formula
    }
}

/// Invertibility of `((r(2n−1−r))^j)_{r,j<n}`, by exact elimination and by
/// the product formula.
pub fn vandermonde_certificate(n: usize) -> Result<VandermondeCertificate> {
    if n == 0 {
        return Err(Error::param("the certificate needs n >= 1"));
    }
    let values: Vec<BigInt> = (0..n).map(|r| BigInt::from(r * (2 * n - 1 - r))).collect();
    let strictly_increasing = values.windows(2).all(|w| w[0] < w[1]);
    let matrix: Vec<Vec<BigInt>> = values
        .iter()
        .map(|v| {
            let mut row = Vec::with_capacity(n);
            let mut acc = BigInt::one();
            for _ in 0..n {
                row.push(acc.clone());
                acc *= v;
            }
            row
        })
        .collect();
    let determinant = bareiss_determinant(&matrix);
    let mut product_formula = BigInt::one();
    for j in 0..n {
        for i in 0..j {
            product_formula *= &values[j] - &values[i];
        }
    }
    Ok(VandermondeCertificate { n, values, strictly_increasing, determinant, product_formula })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_cases() {
        let l1 = polynomial_reduction(1).unwrap();
        assert_eq!(l1.coefficients, vec![vec![int(0), int(-1)]]);
        assert!(l1.verified);
        let l2 = polynomial_reduction(2).unwrap();
        assert_eq!(l2.coefficients[1], vec![int(-2), int(-2)]);
        assert_eq!(l2.coefficients[0], vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn reduction_holds_at_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(54);
        for m in 1..=8 {
            let l = polynomial_reduction(m).unwrap();
            assert!(l.verified);
            for _ in 0..50 {
                let x = ratio(rng.gen_range(-40..40), rng.gen_range(1..9));
                let s = ratio(rng.gen_range(-40..40), rng.gen_range(1..9));
                let y = &s - &x;
                assert_eq!(l.evaluate(&x, &y), lemma_direct(m, &x, &y));
            }
        }
    }

    #[test]
    fn vandermonde_small() {
        let c2 = vandermonde_certificate(2).unwrap();
        assert_eq!(c2.values, vec![BigInt::from(0), BigInt::from(2)]);
        let c3 = vandermonde_certificate(3).unwrap();
        assert_eq!(c3.values, vec![BigInt::from(0), BigInt::from(4), BigInt::from(6)]);
        assert!(c2.holds() && c3.holds());
        assert_eq!(c3.determinant, BigInt::from(4 * 6 * 2));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let f = Poly2::from([((1, 0), int(1))]);
        assert!(to_sp(&f).is_err());
    }
}
