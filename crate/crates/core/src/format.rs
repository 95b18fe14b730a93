//! JSON interchange: instance documents, element expressions and growth
//! certificates.
//!
//! Serialization is canonical (basis order, then index order for every
//! table, canonical scalar text), so `write(parse(write(x)))` reproduces
//! `write(x)` byte for byte.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::action::{GroupActionWindow, LengthFunction, Operator};
use crate::error::{Error, Result};
use crate::field::{parse_rational, FieldSpec, Scalar};
use crate::growth::GrowthCertificate;
use crate::hopf::{BasisElement, BasisIndex, BialgebraInstance, Element, ModuleWindow, TensorElement, Window};

pub const FORMAT_VERSION: u32 = 1;

/// Inputs larger than this are rejected before parsing.
pub const MAX_DOCUMENT_BYTES: usize = 64 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Structure {
    Bialgebra,
    Module,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    format: u32,
    structure: Structure,
    field: String,
    window: WindowDoc,
    basis: Vec<BasisDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    product: Vec<ProductDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    coproduct: Vec<CoproductDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<ActionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowDoc {
    max_degree: u32,
    max_value: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisDoc {
    id: String,
    degree: u32,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductDoc {
    left: String,
    right: String,
    terms: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoproductDoc {
    of: String,
    terms: Vec<(String, String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    generators: Vec<GeneratorDoc>,
    lengths: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    id: String,
    blocks: Vec<BlockDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    degree: u32,
    #[serde(default)]
    forward: Vec<MapDoc>,
    #[serde(default)]
    inverse: Vec<MapDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    from: String,
    to: Vec<(String, String)>,
}

/// The algebraic part of a loaded document.
#[derive(Debug, Clone)]
pub enum Structured {
    Bialgebra(BialgebraInstance),
    Module(ModuleWindow),
}

/// A parsed instance document: a bialgebra or bare module plus its action
/// (trivial when the document has none).
#[derive(Debug, Clone)]
pub struct Instance {
    pub structure: Structured,
    pub action: GroupActionWindow,
}

impl Instance {
    pub fn module(&self) -> &ModuleWindow {
        match &self.structure {
            Structured::Bialgebra(b) => b.module(),
            Structured::Module(m) => m,
        }
    }

    pub fn bialgebra(&self) -> Option<&BialgebraInstance> {
        match &self.structure {
            Structured::Bialgebra(b) => Some(b),
            Structured::Module(_) => None,
        }
    }
}

fn parse_value(text: &str) -> Result<BigRational> {
    parse_rational(text)
}

fn coefficient(field: FieldSpec, text: &str) -> Result<Scalar> {
    field.parse_scalar(text)
}

/// Parses and validates an instance document. `field_override` replaces the
/// document's field, reinterpreting every coefficient in it.
pub fn parse_instance(text: &str, field_override: Option<FieldSpec>) -> Result<Instance> {
    if text.len() > MAX_DOCUMENT_BYTES {
        return Err(Error::schema("document too large"));
    }
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: e.column(),
        reason: format!("line {}: {e}", e.line()),
    })?;
    if doc.format != FORMAT_VERSION {
        return Err(Error::schema(format!("unsupported format {}", doc.format)));
    }
    let field = match field_override {
        Some(f) => f,
        None => doc.field.parse()?,
    };
    let window = Window {
        max_degree: doc.window.max_degree,
        max_value: parse_value(&doc.window.max_value)?,
    };
    let basis = doc
        .basis
        .iter()
        .map(|b| {
            Ok(BasisElement {
                id: b.id.clone(),
                degree: b.degree,
                value: parse_value(&b.value)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let module = ModuleWindow::new(field, basis, window)?;

    let element = |terms: &[(String, String)]| -> Result<Element> {
        let mut e = Element::zero();
        for (c, id) in terms {
            e.add_term(module.lookup(id)?, coefficient(field, c)?);
        }
        Ok(e)
    };

    let action = match &doc.action {
        None => GroupActionWindow::trivial(field),
        Some(a) => {
            let mut generators = BTreeMap::new();
            for g in &a.generators {
                let mut forward = BTreeMap::new();
                let mut inverse = BTreeMap::new();
                for block in &g.blocks {
                    for (docs, map) in [(&block.forward, &mut forward), (&block.inverse, &mut inverse)] {
                        for entry in docs {
                            let from = module.lookup(&entry.from)?;
                            if module.degree(from) != block.degree {
                                return Err(Error::schema(format!(
                                    "`{}` listed in the degree {} block of `{}`",
                                    entry.from, block.degree, g.id
                                )));
                            }
                            if map.insert(from, element(&entry.to)?).is_some() {
                                return Err(Error::schema(format!(
                                    "`{}` mapped twice by `{}`",
                                    entry.from, g.id
                                )));
                            }
                        }
                    }
                }
                if generators
                    .insert(g.id.clone(), Operator::new(forward, inverse))
                    .is_some()
                {
                    return Err(Error::schema(format!("generator `{}` listed twice", g.id)));
                }
            }
            let weights = a
                .lengths
                .iter()
                .map(|(g, w)| Ok((g.clone(), parse_value(w)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            let action = GroupActionWindow::new(field, generators, LengthFunction::new(weights)?)?;
            action.validate(&module)?;
            action
        }
    };

    let structure = match doc.structure {
        Structure::Module => {
            if !doc.product.is_empty() || !doc.coproduct.is_empty() {
                return Err(Error::schema("a module document has no product or coproduct"));
            }
            Structured::Module(module)
        }
        Structure::Bialgebra => {
            let mut product = BTreeMap::new();
            for p in &doc.product {
                let key = (module.lookup(&p.left)?, module.lookup(&p.right)?);
                if product.insert(key, element(&p.terms)?).is_some() {
                    return Err(Error::schema(format!(
                        "product {}·{} listed twice",
                        p.left, p.right
                    )));
                }
            }
            let mut coproduct: Vec<Option<TensorElement>> = vec![None; module.len()];
            for c in &doc.coproduct {
                let of = module.lookup(&c.of)?;
                let mut t = TensorElement::zero();
                for (coef, l, r) in &c.terms {
                    t.add_term(module.lookup(l)?, module.lookup(r)?, coefficient(field, coef)?);
                }
                if coproduct[of].replace(t).is_some() {
                    return Err(Error::schema(format!("coproduct of `{}` listed twice", c.of)));
                }
            }
            let coproduct = coproduct
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    t.ok_or_else(|| Error::schema(format!("no coproduct for `{}`", module.id(i))))
                })
                .collect::<Result<Vec<_>>>()?;
            Structured::Bialgebra(BialgebraInstance::new(module, product, coproduct)?)
        }
    };
    Ok(Instance { structure, action })
}

fn element_terms(module: &ModuleWindow, e: &Element) -> Vec<(String, String)> {
    e.terms()
        .map(|(i, c)| (c.to_string(), module.id(i).to_string()))
        .collect()
}

fn action_doc(module: &ModuleWindow, action: &GroupActionWindow) -> Option<ActionDoc> {
    if action.generators().is_empty() {
        return None;
    }
    let map_docs = |map: &BTreeMap<BasisIndex, Element>, degree: u32| -> Vec<MapDoc> {
        map.iter()
            .filter(|(&b, _)| module.degree(b) == degree)
            .map(|(&b, e)| MapDoc {
                from: module.id(b).to_string(),
                to: element_terms(module, e),
            })
            .collect()
    };
    let generators = action
        .generators()
        .iter()
        .map(|(id, op)| {
            let mut degrees: Vec<u32> = op
                .forward()
                .keys()
                .chain(op.inverse().keys())
                .map(|&b| module.degree(b))
                .collect();
            degrees.sort_unstable();
            degrees.dedup();
            GeneratorDoc {
                id: id.clone(),
                blocks: degrees
                    .into_iter()
                    .map(|d| BlockDoc {
                        degree: d,
                        forward: map_docs(op.forward(), d),
                        inverse: map_docs(op.inverse(), d),
                    })
                    .collect(),
            }
        })
        .collect();
    let lengths = action
        .lengths()
        .weights()
        .iter()
        .map(|(g, w)| (g.clone(), w.to_string()))
        .collect();
    Some(ActionDoc { generators, lengths })
}

fn module_doc(module: &ModuleWindow, structure: Structure) -> InstanceDoc {
    InstanceDoc {
        format: FORMAT_VERSION,
        structure,
        field: module.field().to_string(),
        window: WindowDoc {
            max_degree: module.window().max_degree,
            max_value: module.window().max_value.to_string(),
        },
        basis: module
            .basis()
            .iter()
            .map(|b| BasisDoc {
                id: b.id.clone(),
                degree: b.degree,
                value: b.value.to_string(),
            })
            .collect(),
        product: Vec::new(),
        coproduct: Vec::new(),
        action: None,
    }
}

/// Canonical pretty JSON, newline terminated.
pub fn write_instance(instance: &Instance) -> String {
    let module = instance.module();
    let mut doc = match &instance.structure {
        Structured::Module(m) => module_doc(m, Structure::Module),
        Structured::Bialgebra(b) => {
            let mut doc = module_doc(module, Structure::Bialgebra);
            doc.product = b
                .product_table()
                .iter()
                .map(|(&(l, r), e)| ProductDoc {
                    left: module.id(l).to_string(),
                    right: module.id(r).to_string(),
                    terms: element_terms(module, e),
                })
                .collect();
            doc.coproduct = b
                .coproduct_table()
                .iter()
                .enumerate()
                .map(|(i, t)| CoproductDoc {
                    of: module.id(i).to_string(),
                    terms: t
                        .terms()
                        .map(|((l, r), c)| {
                            (c.to_string(), module.id(l).to_string(), module.id(r).to_string())
                        })
                        .collect(),
                })
                .collect();
            doc
        }
    };
    doc.action = action_doc(module, &instance.action);
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

/// Parses `x1 + 2*x2 - 1/2*x1x3`. A coefficient is recognised only when it
/// is followed by `*`, so a bare `1` names the unit. `0` is the zero vector.
pub fn parse_element(module: &ModuleWindow, text: &str) -> Result<Element> {
    if text.len() > MAX_DOCUMENT_BYTES {
        return Err(Error::schema("expression too long"));
    }
    if text.trim() == "0" && module.index_of("0").is_none() {
        return Ok(Element::zero());
    }
    let field = module.field();
    let mut out = Element::zero();
    let mut flush = |from: usize, to: usize, positive: bool| -> Result<()> {
        let raw = &text[from..to];
        let term = raw.trim();
        let offset = from + (raw.len() - raw.trim_start().len());
        let err = |reason: &str| Error::Parse {
            offset,
            reason: reason.to_string(),
        };
        if term.is_empty() {
            return Err(err("expected a term"));
        }
        let (coef, id) = match term.split_once('*') {
            Some((c, id)) => (
                field
                    .parse_scalar(c.trim())
                    .map_err(|e| err(&e.to_string()))?,
                id.trim(),
            ),
            None => (field.one(), term),
        };
        let index = module
            .index_of(id)
            .ok_or_else(|| err(&format!("unknown basis element `{}`", id.chars().take(64).collect::<String>())))?;
        out.add_term(index, if positive { coef } else { -coef });
        Ok(())
    };
    let mut positive = true;
    let mut start = 0;
    let mut leading_sign_allowed = true;
    for (i, b) in text.bytes().enumerate() {
        if b != b'+' && b != b'-' {
            continue;
        }
        if text[start..i].trim().is_empty() {
            if !leading_sign_allowed {
                return Err(Error::Parse {
                    offset: i,
                    reason: "expected a term".into(),
                });
            }
        } else {
            flush(start, i, positive)?;
        }
        positive = b == b'+';
        leading_sign_allowed = false;
        start = i + 1;
    }
    flush(start, text.len(), positive)?;
    Ok(out)
}

fn certificate_value(cert: &GrowthCertificate, terse: bool) -> Value {
    let rows: Vec<Value> = cert
        .rows
        .iter()
        .map(|r| {
            let mut row = json!({
                "n": r.n,
                "q": r.q.to_string(),
                "rank": r.rank,
                "rank_exact_sum": r.rank_exact_sum,
                "passed": r.passed(),
            });
            if !terse {
                row["subsets"] = json!(r.subsets);
            }
            row
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "kind": "growth-certificate",
        "field": cert.field.to_string(),
        "slope": cert.slope.to_string(),
        "degree": cert.degree,
        "n_max_requested": cert.n_max_requested,
        "n_max_certified": cert.n_max_certified,
        "truncation": cert.truncation,
        "vectors": cert.vectors,
        "rows": rows,
        "passed": cert.passed(),
    })
}

fn digest_of(value: &Value) -> String {
    let compact = serde_json::to_string(value).expect("value serializes");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

/// Certificate JSON with a `digest` field: SHA-256 of the compact,
/// key-sorted serialization of everything else.
pub fn write_certificate(cert: &GrowthCertificate, terse: bool) -> String {
    let mut value = certificate_value(cert, terse);
    let digest = digest_of(&value);
    value["digest"] = Value::String(digest);
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

/// Recomputes the digest of a certificate document and compares.
pub fn verify_certificate_digest(text: &str) -> Result<bool> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: e.column(),
        reason: e.to_string(),
    })?;
    let claimed = value
        .as_object_mut()
        .and_then(|o| o.remove("digest"))
        .and_then(|d| d.as_str().map(str::to_string))
        .ok_or_else(|| Error::schema("certificate has no digest"))?;
    Ok(digest_of(&value) == claimed)
}
