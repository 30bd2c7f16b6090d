//! Built-in models: point, curves, abelian varieties, K3-type surfaces and
//! products.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::{BasisElement, Model, ModelParts, SparseVec};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn one_vec(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

/// `Spec k`: a single degree-0 class that is both unit and point class.
pub fn point() -> Result<Model> {
    let mut parts = ModelParts::new("point", 0, vec![BasisElement { id: "1".into(), degree: 0 }], 0);
    parts.set_unit(0);
    parts.trace[0] = Rational::one();
    parts.build()
}

/// Curve of genus `g`: basis `1, a_1..a_g, b_1..b_g, pt` with `a_i b_i = pt`.
pub fn curve(g: u32) -> Result<Model> {
    let g = g as usize;
    let mut basis = vec![BasisElement { id: "1".into(), degree: 0 }];
    for i in 1..=g {
        basis.push(BasisElement { id: format!("a{i}"), degree: 1 });
    }
    for i in 1..=g {
        basis.push(BasisElement { id: format!("b{i}"), degree: 1 });
    }
    basis.push(BasisElement { id: "pt".into(), degree: 2 });
    let pt = basis.len() - 1;
    let mut parts = ModelParts::new(format!("curve(g={g})"), 1, basis, pt);
    parts.set_unit(0);
    for i in 0..g {
        parts.set_product_pair(1 + i, 1 + g + i, one_vec(pt));
    }
    parts.trace[pt] = Rational::one();
    parts.build()
}

/// Abelian variety of dimension `g`: exterior algebra on `2g` degree-one
/// generators, trace on the top wedge `x1 x2 … x2g`.
pub fn abelian(g: u32) -> Result<Model> {
    if g == 0 {
        return Err(Error::param("abelian model needs g >= 1"));
    }
    if g > 6 {
        return Err(Error::param("abelian model limited to g <= 6"));
    }
    let gens = 2 * g as usize;
    let mut masks: Vec<u32> = (0..1u32 << gens).collect();
    masks.sort_by_key(|&m| (m.count_ones(), (0..gens).filter(|k| m >> k & 1 == 1).collect::<Vec<_>>()));
    let name_of = |m: u32| -> String {
        if m == 0 {
            "1".into()
        } else {
            (0..gens).filter(|k| m >> k & 1 == 1).map(|k| format!("x{}", k + 1)).collect()
        }
    };
    let basis: Vec<BasisElement> =
        masks.iter().map(|&m| BasisElement { id: name_of(m), degree: m.count_ones() }).collect();
    let index_of = |m: u32| masks.iter().position(|&x| x == m).unwrap();
    let top = index_of((1 << gens) - 1);
    let mut parts = ModelParts::new(format!("abelian(g={g})"), g, basis, top);
    for (i, &s) in masks.iter().enumerate() {
        for (j, &t) in masks.iter().enumerate() {
            if s & t != 0 {
                continue;
            }
            // sign of moving each generator of t past the larger ones of s
            let mut swaps = 0;
            for k in 0..gens {
                if t >> k & 1 == 1 {
                    swaps += (s >> (k + 1)).count_ones();
                }
            }
            let c = if swaps % 2 == 1 { -Rational::one() } else { Rational::one() };
            parts.products.insert((i, j), vec![(index_of(s | t), c)]);
        }
    }
    parts.trace[top] = Rational::one();
    parts.build()
}

/// K3-type surface: ranks `(1, 0, rho, 0, 1)` with a diagonal `+1`
/// pairing on the middle degree.
pub fn k3(rho: u32) -> Result<Model> {
    if rho == 0 {
        return Err(Error::param("k3 model needs rho >= 1"));
    }
    let rho = rho as usize;
    let mut basis = vec![BasisElement { id: "1".into(), degree: 0 }];
    for i in 1..=rho {
        basis.push(BasisElement { id: format!("e{i}"), degree: 2 });
    }
    basis.push(BasisElement { id: "pt".into(), degree: 4 });
    let pt = rho + 1;
    let mut parts = ModelParts::new(format!("k3(rho={rho})"), 2, basis, pt);
    parts.set_unit(0);
    for i in 1..=rho {
        parts.products.insert((i, i), one_vec(pt));
    }
    parts.trace[pt] = Rational::one();
    parts.build()
}

/// Künneth product `X × Y` with Koszul signs:
/// `(x⊗y)(x'⊗y') = (-1)^{|y||x'|} xx' ⊗ yy'`.
pub fn product(x: &Model, y: &Model) -> Result<Model> {
    product_unchecked(x, y).build()
}

pub(crate) fn product_unchecked(x: &Model, y: &Model) -> ModelParts {
    let ny = y.len();
    let idx = |i: usize, j: usize| i * ny + j;
    let mut basis = Vec::with_capacity(x.len() * ny);
    for i in 0..x.len() {
        for j in 0..ny {
            basis.push(BasisElement {
                id: format!("{}|{}", x.id(i), y.id(j)),
                degree: x.degree(i) + y.degree(j),
            });
        }
    }
    let point = idx(x.point(), y.point());
    let mut parts =
        ModelParts::new(format!("{}x{}", x.name(), y.name()), x.dimension() + y.dimension(), basis, point);
    for i in 0..x.len() {
        for j in 0..ny {
            for k in 0..x.len() {
                for l in 0..ny {
                    let px = x.product(i, k);
                    let py = y.product(j, l);
                    if px.is_empty() || py.is_empty() {
                        continue;
                    }
                    let negative = y.is_odd(j) && x.is_odd(k);
                    let mut v = SparseVec::new();
                    for (a, ca) in px {
                        for (b, cb) in py {
                            let c = ca * cb;
                            v.push((idx(*a, *b), if negative { -c } else { c }));
                        }
                    }
                    parts.products.insert((idx(i, j), idx(k, l)), v);
                }
            }
        }
    }
    for i in 0..x.len() {
        for j in 0..ny {
            parts.trace[idx(i, j)] = x.trace(i) * y.trace(j);
        }
    }
    if let (Some(sx), Some(sy)) = (x.involution(), y.involution()) {
        let mut inv = Vec::with_capacity(x.len() * ny);
        for i in 0..x.len() {
            for j in 0..ny {
                let mut v = SparseVec::new();
                for (a, ca) in &sx[i] {
                    for (b, cb) in &sy[j] {
                        v.push((idx(*a, *b), ca * cb));
                    }
                }
                inv.push(v);
            }
        }
        parts.involution = Some(inv);
    }
    if x.albanese_override().is_some() || y.albanese_override().is_some() {
        let ex = x.albanese_override().or_else(|| crate::diagonals::albanese_image_dim(x).ok());
        let ey = y.albanese_override().or_else(|| crate::diagonals::albanese_image_dim(y).ok());
        if let (Some(a), Some(b)) = (ex, ey) {
            parts.albanese_e = Some(a + b);
        }
    }
    parts
}

/// Names of the built-in model families, parsed from spec strings such as
/// `curve:g=2`, `abelian:g=2`, `k3:rho=4`, `point` or
/// `product:curve:g=1,curve:g=1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Point,
    Curve { genus: u32 },
    Abelian { dim: u32 },
    K3 { rho: u32 },
    Product(Box<Builtin>, Box<Builtin>),
}

impl Builtin {
    pub fn build(&self) -> Result<Model> {
        match self {
            Builtin::Point => point(),
            Builtin::Curve { genus } => curve(*genus),
            Builtin::Abelian { dim } => abelian(*dim),
            Builtin::K3 { rho } => k3(*rho),
            Builtin::Product(a, b) => product(&a.build()?, &b.build()?),
        }
    }

    /// One line per family, for `model builtin --list`.
    pub fn catalogue() -> &'static [&'static str] {
        &[
            "point                      zero-dimensional model",
            "curve:g=<g>                curve of genus g >= 0",
            "abelian:g=<g>              abelian variety of dimension 1 <= g <= 6",
            "k3:rho=<rho>               K3-type surface, middle rank rho >= 1",
            "product:<spec>,<spec>      Künneth product of two builtins",
        ]
    }
}

fn parse_kv(s: &str, key: &str) -> Result<u32> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected {key}=<n>, got {s:?}")))?;
    if k.trim() != key {
        return Err(Error::Parse(format!("expected {key}=<n>, got {s:?}")));
    }
    v.trim().parse().map_err(|_| Error::Parse(format!("bad number in {s:?}")))
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "point" {
            return Ok(Builtin::Point);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown model spec {s:?}")))?;
        match kind {
            "curve" => Ok(Builtin::Curve { genus: parse_kv(rest, "g")? }),
            "abelian" => Ok(Builtin::Abelian { dim: parse_kv(rest, "g")? }),
            "k3" => Ok(Builtin::K3 { rho: parse_kv(rest, "rho")? }),
            "product" => {
                // split at the comma that separates two complete specs
                for (pos, _) in rest.match_indices(',') {
                    let (a, b) = (&rest[..pos], &rest[pos + 1..]);
                    if let (Ok(a), Ok(b)) = (a.parse::<Builtin>(), b.parse::<Builtin>()) {
                        return Ok(Builtin::Product(Box::new(a), Box::new(b)));
                    }
                }
                Err(Error::Parse(format!("cannot split product spec {rest:?}")))
            }
            _ => Err(Error::Parse(format!("unknown model kind {kind:?}"))),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Point => write!(f, "point"),
            Builtin::Curve { genus } => write!(f, "curve:g={genus}"),
            Builtin::Abelian { dim } => write!(f, "abelian:g={dim}"),
            Builtin::K3 { rho } => write!(f, "k3:rho={rho}"),
            Builtin::Product(a, b) => write!(f, "product:{a},{b}"),
        }
    }
}
