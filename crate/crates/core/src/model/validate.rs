use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_vec, Model, SparseVec};
use crate::linalg;
use crate::rational::{self, Rational};

/// A broken model invariant. Violations are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Structure(String),
    DuplicateId(String),
    DegreeOutOfRange { id: String, degree: u32 },
    InhomogeneousProduct { left: String, right: String },
    NoUnit,
    NotAssociative { a: String, b: String, c: String },
    NotSuperCommutative { a: String, b: String },
    TraceOutsideTop { id: String },
    PointClass(String),
    DegeneratePairing { degree: u32 },
    Involution(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(s) => write!(f, "structure: {s}"),
            Violation::DuplicateId(id) => write!(f, "duplicate basis id {id}"),
            Violation::DegreeOutOfRange { id, degree } => write!(f, "basis {id} has degree {degree} outside 0..=2d"),
            Violation::InhomogeneousProduct { left, right } => {
                write!(f, "product {left}*{right} is not of degree |{left}|+|{right}|")
            }
            Violation::NoUnit => write!(f, "no unit element in degree 0"),
            Violation::NotAssociative { a, b, c } => write!(f, "associativity fails on ({a},{b},{c})"),
            Violation::NotSuperCommutative { a, b } => write!(f, "super-commutativity fails on ({a},{b})"),
            Violation::TraceOutsideTop { id } => write!(f, "trace nonzero on {id} outside the top degree"),
            Violation::PointClass(s) => write!(f, "point class: {s}"),
            Violation::DegeneratePairing { degree } => write!(f, "pairing not perfect in degree {degree}"),
            Violation::Involution(s) => write!(f, "involution: {s}"),
        }
    }
}

fn scaled(v: &SparseVec, c: &Rational) -> SparseVec {
    v.iter().map(|(i, x)| (*i, x * c)).filter(|(_, x)| !x.is_zero()).collect()
}

/// Checks every model invariant; an empty list means the model is valid.
pub fn validate_model(model: &Model) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = model.len();
    let top = model.top_degree();

    if n == 0 {
        out.push(Violation::Structure("empty basis".into()));
        return out;
    }
    if model.traces().len() != n {
        out.push(Violation::Structure("trace length differs from basis size".into()));
        return out;
    }
    let mut ids: Vec<&str> = model.basis().iter().map(|b| b.id.as_str()).collect();
    ids.sort_unstable();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            out.push(Violation::DuplicateId(w[0].to_string()));
        }
    }
    for b in model.basis() {
        if b.degree > top {
            out.push(Violation::DegreeOutOfRange { id: b.id.clone(), degree: b.degree });
        }
    }
    if !out.is_empty() {
        return out;
    }
    if model.point() >= n {
        out.push(Violation::PointClass("point index out of range".into()));
        return out;
    }
    for x in 0..n {
        for y in 0..n {
            let d = model.degree(x) + model.degree(y);
            if model.product(x, y).iter().any(|(k, _)| *k >= n || model.degree(*k) != d) {
                out.push(Violation::InhomogeneousProduct { left: model.id(x).into(), right: model.id(y).into() });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }

    let one = |i: usize| vec![(i, Rational::one())];
    let has_unit = (0..n).filter(|&u| model.degree(u) == 0).any(|u| {
        (0..n).all(|x| model.product(u, x) == &one(x) && model.product(x, u) == &one(x))
    });
    if !has_unit {
        out.push(Violation::NoUnit);
    }

    for x in 0..n {
        for y in x..n {
            let xy = model.product(x, y);
            let yx = model.product(y, x);
            let expect = if model.is_odd(x) && model.is_odd(y) { scaled(xy, &-Rational::one()) } else { xy.clone() };
            if yx != &expect {
                out.push(Violation::NotSuperCommutative { a: model.id(x).into(), b: model.id(y).into() });
            }
        }
    }

    let by_degree: Vec<Vec<usize>> = (0..=top).map(|k| model.basis_of_degree(k)).collect();
    for a in 0..n {
        for b in 0..n {
            let da = model.degree(a) + model.degree(b);
            if da > top {
                continue;
            }
            let ab = model.product(a, b);
            for c in 0..n {
                if da + model.degree(c) > top {
                    continue;
                }
                let left = model.mul_vec(ab, &one(c));
                let right = model.mul_vec(&one(a), model.product(b, c));
                if left != right {
                    out.push(Violation::NotAssociative {
                        a: model.id(a).into(),
                        b: model.id(b).into(),
                        c: model.id(c).into(),
                    });
                }
            }
        }
    }

    for i in 0..n {
        if model.degree(i) != top && !model.trace(i).is_zero() {
            out.push(Violation::TraceOutsideTop { id: model.id(i).into() });
        }
    }
    let p = model.point();
    if model.degree(p) != top {
        out.push(Violation::PointClass(format!("{} is not in degree {top}", model.id(p))));
    }
    if !model.trace(p).is_one() {
        out.push(Violation::PointClass(format!(
            "trace of {} is {}, not 1",
            model.id(p),
            rational::format(model.trace(p))
        )));
    }

    for k in 0..=top {
        let this = &by_degree[k as usize];
        let comp = &by_degree[(top - k) as usize];
        if this.len() != comp.len() {
            out.push(Violation::DegeneratePairing { degree: k });
            continue;
        }
        if this.is_empty() {
            continue;
        }
        let g: linalg::Matrix = comp
            .iter()
            .map(|&u| this.iter().map(|&c| model.integrate_vec(model.product(u, c))).collect())
            .collect();
        if linalg::rank(&g) != this.len() {
            out.push(Violation::DegeneratePairing { degree: k });
        }
    }

    if let Some(sigma) = model.involution() {
        out.extend(check_involution(model, sigma));
    }
    out
}

fn check_involution(model: &Model, sigma: &[SparseVec]) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = model.len();
    if sigma.len() != n {
        out.push(Violation::Involution("matrix size differs from basis size".into()));
        return out;
    }
    for (i, img) in sigma.iter().enumerate() {
        if img.iter().any(|(k, _)| *k >= n || model.degree(*k) != model.degree(i)) {
            out.push(Violation::Involution(format!("image of {} is not homogeneous of its degree", model.id(i))));
            return out;
        }
    }
    let apply = |v: &SparseVec| -> SparseVec {
        let mut acc = std::collections::BTreeMap::<usize, Rational>::new();
        for (i, c) in v {
            for (k, d) in &sigma[*i] {
                *acc.entry(*k).or_insert_with(Rational::zero) += c * d;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    };
    for x in 0..n {
        for y in 0..n {
            let lhs = apply(model.product(x, y));
            let rhs = model.mul_vec(&sigma[x], &sigma[y]);
            if lhs != rhs {
                out.push(Violation::Involution(format!(
                    "does not preserve the product {}*{}: {} vs {}",
                    model.id(x),
                    model.id(y),
                    fmt_vec(model, &lhs),
                    fmt_vec(model, &rhs)
                )));
            }
        }
    }
    for x in 0..n {
        if model.integrate_vec(&sigma[x]) != *model.trace(x) {
            out.push(Violation::Involution(format!("does not preserve the trace of {}", model.id(x))));
        }
        let twice = apply(&sigma[x]);
        if twice != vec![(x, Rational::one())] {
            out.push(Violation::Involution(format!("is not an involution on {}", model.id(x))));
        }
    }
    let p = model.point();
    if sigma[p] != vec![(p, Rational::one())] {
        out.push(Violation::Involution("does not fix the point class".into()));
    }
    out
}
