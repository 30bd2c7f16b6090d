//! JSON model files, class files and model spec strings.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::double_cover::build_curve_cover;
use crate::error::{Error, Result};
use crate::model::{BasisElement, Builtin, Model, ModelParts, SparseVec, Violation};
use crate::rational;
use crate::tensor::TensorClass;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub id: String,
    pub degree: u32,
}

/// `[[id, "p/q"], …]`
pub type IdTerms = Vec<(String, String)>;

/// On-disk form of a [`Model`]. Products not listed are zero; for a listed
/// `x*y` whose mirror `y*x` is absent, the mirror is filled in by the
/// super-commutative sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub dimension: u32,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub products: Vec<(String, String, IdTerms)>,
    pub trace: IdTerms,
    /// Id of the point class. Defaults to the only top-degree basis
    /// element with trace `1/1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<Vec<(String, IdTerms)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub albanese_e: Option<u32>,
}

impl ModelFile {
    pub fn from_model(model: &Model) -> Self {
        let terms = |v: &SparseVec| -> IdTerms {
            v.iter().map(|(i, c)| (model.id(*i).to_string(), rational::format(c))).collect()
        };
        let mut products = Vec::new();
        for x in 0..model.len() {
            for y in 0..model.len() {
                let v = model.product(x, y);
                if !v.is_empty() {
                    products.push((model.id(x).to_string(), model.id(y).to_string(), terms(v)));
                }
            }
        }
        let trace = (0..model.len())
            .filter(|&i| !num_traits::Zero::is_zero(model.trace(i)))
            .map(|i| (model.id(i).to_string(), rational::format(model.trace(i))))
            .collect();
        let involution = model.involution().map(|images| {
            images.iter().enumerate().map(|(i, v)| (model.id(i).to_string(), terms(v))).collect()
        });
        ModelFile {
            name: model.name().to_string(),
            dimension: model.dimension(),
            basis: model.basis().iter().map(|b| BasisEntry { id: b.id.clone(), degree: b.degree }).collect(),
            products,
            trace,
            point: Some(model.id(model.point()).to_string()),
            involution,
            albanese_e: model.albanese_override(),
        }
    }

    /// Resolves ids and assembles the raw algebra data. Unknown ids and
    /// duplicated entries are parse errors; algebraic problems are left
    /// to validation.
    pub fn to_parts(&self) -> Result<ModelParts> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            index.entry(b.id.as_str()).or_insert(i);
        }
        let lookup = |id: &str| -> Result<usize> {
            index.get(id).copied().ok_or_else(|| Error::Parse(format!("unknown basis id {id:?}")))
        };
        let vector = |terms: &IdTerms| -> Result<SparseVec> {
            terms.iter().map(|(id, c)| Ok((lookup(id)?, rational::parse(c)?))).collect()
        };

        let mut trace = vec![rational::zero(); self.basis.len()];
        let mut seen_trace = vec![false; self.basis.len()];
        for (id, c) in &self.trace {
            let i = lookup(id)?;
            if std::mem::replace(&mut seen_trace[i], true) {
                return Err(Error::Parse(format!("trace of {id:?} given twice")));
            }
            trace[i] = rational::parse(c)?;
        }

        let top = 2 * self.dimension;
        let point = match &self.point {
            Some(id) => lookup(id)?,
            None => {
                let candidates: Vec<usize> = (0..self.basis.len())
                    .filter(|&i| self.basis[i].degree == top && trace[i] == rational::one())
                    .collect();
                match candidates[..] {
                    [p] => p,
                    _ => {
                        return Err(Error::InvalidModel(vec![Violation::PointClass(format!(
                            "{} top-degree classes with trace 1/1; name one with \"point\"",
                            candidates.len()
                        ))]))
                    }
                }
            }
        };

        let basis = self.basis.iter().map(|b| BasisElement { id: b.id.clone(), degree: b.degree }).collect();
        let mut parts = ModelParts::new(self.name.clone(), self.dimension, basis, point);
        parts.trace = trace;
        parts.albanese_e = self.albanese_e;

        let mut given: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (l, r, terms) in &self.products {
            let key = (lookup(l)?, lookup(r)?);
            if given.insert(key, vector(terms)?).is_some() {
                return Err(Error::Parse(format!("product {l}*{r} given twice")));
            }
        }
        for (&(x, y), v) in &given {
            if given.contains_key(&(y, x)) {
                parts.products.insert((x, y), v.clone());
            } else {
                parts.set_product_pair(x, y, v.clone());
            }
        }

        if let Some(inv) = &self.involution {
            let mut images: Vec<Option<SparseVec>> = vec![None; self.basis.len()];
            for (id, terms) in inv {
                let i = lookup(id)?;
                if images[i].replace(vector(terms)?).is_some() {
                    return Err(Error::Parse(format!("involution image of {id:?} given twice")));
                }
            }
            // unlisted classes are fixed
            parts.involution =
                Some(images.into_iter().enumerate().map(|(i, v)| v.unwrap_or_else(|| vec![(i, rational::one())])).collect());
        }
        Ok(parts)
    }

    /// Builds and validates.
    pub fn to_model(&self) -> Result<Model> {
        self.to_parts()?.build()
    }
}

pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))
}

/// Reads, parses and validates a model file. A malformed document is
/// [`Error::Parse`]; invalid algebra data is [`Error::InvalidModel`].
pub fn load_model_file(path: impl AsRef<Path>) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    parse_model_file(&text)?.to_model()
}

/// Resolves a model spec: a builtin (`curve:g=2`, `product:…`), the total
/// space of a cover (`cover:g=2,h=1`), or `file:<path>`.
pub fn resolve_model(spec: &str) -> Result<Arc<Model>> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(Arc::new(load_model_file(path)?));
    }
    if let Some(rest) = spec.strip_prefix("cover:") {
        let (g, h) = parse_cover_pair(rest)?;
        return Ok(build_curve_cover(g, h)?.x().clone());
    }
    Ok(Arc::new(spec.parse::<Builtin>()?.build()?))
}

fn parse_cover_pair(s: &str) -> Result<(u32, u32)> {
    let mut g = None;
    let mut h = None;
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad cover spec {s:?}")))?;
        let v: u32 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in {part:?}")))?;
        match k.trim() {
            "g" => g = Some(v),
            "h" => h = Some(v),
            _ => return Err(Error::Parse(format!("unknown cover key {k:?}"))),
        }
    }
    match (g, h) {
        (Some(g), Some(h)) => Ok((g, h)),
        _ => Err(Error::Parse(format!("cover spec needs g= and h=, got {s:?}"))),
    }
}

/// On-disk form of a class on `X^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub power: usize,
    pub terms: Vec<(Vec<String>, String)>,
}

impl ClassFile {
    pub fn from_class(class: &TensorClass) -> Self {
        ClassFile { power: class.power(), terms: class.to_id_terms() }
    }

    pub fn to_class(&self, model: &Arc<Model>) -> Result<TensorClass> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (ids, c) in &self.terms {
            let key = ids
                .iter()
                .map(|id| model.index_of(id).ok_or_else(|| Error::Parse(format!("unknown basis id {id:?}"))))
                .collect::<Result<Vec<usize>>>()?;
            terms.push((key, rational::parse(c)?));
        }
        TensorClass::from_terms(model, self.power, terms)
    }
}

pub fn load_class_file(path: impl AsRef<Path>, model: &Arc<Model>) -> Result<TensorClass> {
    let text = std::fs::read_to_string(path)?;
    let file: ClassFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("class file: {e}")))?;
    file.to_class(model)
}

/// `[[[ids…], "p/q"], …]` in canonical term order.
pub fn class_to_json(class: &TensorClass) -> Value {
    serde_json::to_value(class.to_id_terms()).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::curve;

    #[test]
    fn builtin_roundtrip() {
        for spec in ["point", "curve:g=1", "curve:g=2", "k3:rho=2", "abelian:g=2"] {
            let m = resolve_model(spec).unwrap();
            let text = serde_json::to_string(&ModelFile::from_model(&m)).unwrap();
            assert_eq!(parse_model_file(&text).unwrap().to_model().unwrap(), *m, "{spec}");
        }
        let cover = resolve_model("cover:g=2,h=1").unwrap();
        let back = ModelFile::from_model(&cover).to_model().unwrap();
        assert_eq!(back.involution(), cover.involution());
    }

    #[test]
    fn mirrors_are_completed() {
        // only a1*b1 is given; b1*a1 = −pt follows
        let text = r#"{
            "name": "curve(g=1)", "dimension": 1,
            "basis": [{"id":"1","degree":0},{"id":"a1","degree":1},{"id":"b1","degree":1},{"id":"pt","degree":2}],
            "products": [["1","1",[["1","1/1"]]],["1","a1",[["a1","1/1"]]],["1","b1",[["b1","1/1"]]],
                         ["1","pt",[["pt","1/1"]]],["a1","b1",[["pt","1/1"]]]],
            "trace": [["pt","1/1"]]
        }"#;
        assert_eq!(parse_model_file(text).unwrap().to_model().unwrap(), curve(1).unwrap());
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(parse_model_file("{").unwrap_err(), Error::Parse(_)));
        let mut f = ModelFile::from_model(&curve(1).unwrap());
        f.trace.push(("a1".into(), "1/1".into()));
        assert!(matches!(f.to_model().unwrap_err(), Error::InvalidModel(_)));
        f.trace = vec![("zz".into(), "1/1".into())];
        assert!(matches!(f.to_model().unwrap_err(), Error::Parse(_)));
        assert!(resolve_model("cover:g=2").is_err());
    }

    #[test]
    fn class_roundtrip() {
        let m = resolve_model("curve:g=1").unwrap();
        let c = crate::diagonals::modified_diagonal(&m, 2).unwrap();
        let file = ClassFile::from_class(&c);
        assert_eq!(file.to_class(&m).unwrap(), c);
    }
}
