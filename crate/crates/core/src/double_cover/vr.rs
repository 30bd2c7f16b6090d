//! Formal combinations of the classes `V_r^{(m)}` and the operator `Φ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::subset::Subset;

/// `Σ_r c_r V_r^{(m)}`, with all `m + 1` coefficients kept literally.
/// Folding by `V_{m−r} = V_r` happens only in [`VrVector::folded`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VrVector {
    m: usize,
    coeffs: Vec<Rational>,
}

impl VrVector {
    pub fn zero(m: usize) -> Self {
        VrVector { m, coeffs: vec![Rational::zero(); m + 1] }
    }

    pub fn unit(r: usize, m: usize) -> Result<Self> {
        if r > m {
            return Err(Error::param(format!("V_{r} needs r <= m = {m}")));
        }
        let mut v = Self::zero(m);
        v.coeffs[r] = int(1);
        Ok(v)
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("a V_r vector needs at least one coefficient"));
        }
        Ok(VrVector { m: coeffs.len() - 1, coeffs })
    }

    /// `Σ_r r^j (m−r)^j V_r^{(m)}` with `0^0 = 1`.
    pub fn weighted(j: u32, m: usize) -> Self {
        let coeffs = (0..=m).map(|r| int(r as i64).pow(j as i32) * int((m - r) as i64).pow(j as i32)).collect();
        VrVector { m, coeffs }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> &Rational {
        &self.coeffs[r]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(VrVector { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VrVector { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::shape(format!("V_r vectors on m = {} and m = {}", self.m, other.m)));
        }
        Ok(())
    }

    /// Coefficients after identifying `V_{m−r}` with `V_r`, indexed by
    /// `r = 0..=⌊m/2⌋`.
    pub fn folded(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.m / 2 + 1];
        for (r, c) in self.coeffs.iter().enumerate() {
            out[r.min(self.m - r)] += c;
        }
        out
    }

    pub fn equal_folded(&self, other: &Self) -> bool {
        self.m == other.m && self.folded() == other.folded()
    }
}

impl fmt::Display for VrVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(rational::format).collect();
        write!(f, "({})^({})", parts.join(", "), self.m)
    }
}

/// `Φ_*(V_r^{(m)}) = r(m+1−r) V_r^{(m+1)} + (r+1)(m−r) V_{r+1}^{(m+1)}`,
/// extended linearly.
pub fn phi_symbolic(v: &VrVector) -> VrVector {
    let m = v.m;
    let mut out = VrVector::zero(m + 1);
    for (r, c) in v.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out.coeffs[r] += c * int((r * (m + 1 - r)) as i64);
        out.coeffs[r + 1] += c * int(((r + 1) * (m - r)) as i64);
    }
    out
}

/// Largest `m` accepted by [`phi_brute_force`] unless the caller raises it.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 12;

/// `Φ_*(V_r^{(m)})` by enumerating every `J` with `|J| = r` and every
/// `φ_{i,j}`, composing `φ_{i,j} ∘ ζ_J` as a map of coordinate labels and
/// recording which coordinates of the image carry `σ`.
pub fn phi_brute_force(m: usize, r: usize, cap: usize) -> Result<VrVector> {
    if m > cap {
        return Err(Error::Resource { what: "phi brute force m".into(), bound: m as u128, cap: cap as u128 });
    }
    if r > m {
        return Err(Error::param(format!("V_{r} needs r <= m = {m}")));
    }
    let mut hits: BTreeMap<u32, u64> = BTreeMap::new();
    for big_j in Subset::of_size(m, r) {
        // ζ_J: coordinate k of X^m is σ^{[k∈J]}(x)
        let twisted: Vec<bool> = (0..m).map(|k| big_j.contains(k)).collect();
        for i in 0..m {
            for j in 0..=m {
                // φ_{i,j} inserts σ(x_i) at position j
                let mut image = twisted.clone();
                image.insert(j, !twisted[i]);
                let k = Subset::from_positions(&image.iter().enumerate().filter(|(_, &t)| t).map(|(p, _)| p).collect::<Vec<_>>());
                *hits.entry(k.bits()).or_default() += 1;
            }
        }
    }
    // Σ_K count(K) [Z_K] must be constant on each |K|
    let mut out = VrVector::zero(m + 1);
    for size in 0..=m + 1 {
        let counts: Vec<u64> = Subset::of_size(m + 1, size).map(|k| hits.get(&k.bits()).copied().unwrap_or(0)).collect();
        let first = counts[0];
        if counts.iter().any(|&c| c != first) {
            return Err(Error::Model(format!("Φ image counts are not uniform on |K| = {size}")));
        }
        out.coeffs[size] = int(first as i64);
    }
    Ok(out)
}
