//! JSON documents describing symbols.
//!
//! A symbol document is one of
//!
//! * explicit: `{"dims":[d0,...],"blocks":[[[re,im],...],...],"multiplicity":[...]}`
//!   with each block listed row-major (`d²` entries) and `multiplicity`
//!   optional;
//! * generated: `{"generator":"<name>","params":{...}}`;
//! * tensor product: `{"factors":[doc, doc, ...]}` with at least two factors.
//!
//! A document nested under `"symbol"`, or under `"result"` of a CLI artifact,
//! is accepted as input too.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so an
//! explicit symbol survives `save → load → save` bit for bit.

use blockspec_core::generators::{
    anharmonic_galerkin_spectrum, inv_power_multiplier, so3_schrodinger_symbol,
    su2_laplacian_power_symbol, torus_multiplier_symbol, AnharmonicSpec,
};
use blockspec_core::{CMatrix, MatrixSymbol, Partition, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Generator names accepted in `{"generator": ...}` documents.
pub const GENERATORS: [&str; 4] = [
    "su2-laplacian",
    "so3-schrodinger",
    "torus-multiplier",
    "anharmonic",
];

/// Explicitly listed symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSymbol {
    pub dims: Vec<usize>,
    /// Row-major `[re, im]` entries of each block.
    pub blocks: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<Vec<u64>>,
}

/// Symbol produced by a built-in generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSymbol {
    pub generator: String,
    #[serde(default)]
    pub params: serde_json::Map<String, Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Su2Params {
    alpha: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct So3Params {
    gamma: f64,
}

/// `β(j) = (1 + |j|²)^{−s/2}` on the lattice `|j|_∞ ≤ radius` of `ℤ^dim`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusParams {
    s: f64,
    #[serde(default = "one")]
    dim: usize,
    radius: usize,
}

/// `(1 + E_m)^{−μ}` for the lowest `count` levels of the anharmonic
/// oscillator, one scalar block per level.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnharmonicParams {
    k: u32,
    ell: u32,
    mu: f64,
    count: usize,
    points: Option<usize>,
    extent: Option<f64>,
}

fn one() -> usize {
    1
}

/// A parsed document: one symbol or the factors of a tensor product.
#[derive(Clone, Debug)]
pub enum Document {
    Single(MatrixSymbol),
    Tensor(Vec<MatrixSymbol>),
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text)?;
    document_from_value(&value)
}

pub fn document_from_value(value: &Value) -> Result<Document> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Format("a symbol document must be a JSON object".into()))?;
    if let Some(inner) = obj.get("symbol") {
        return document_from_value(inner);
    }
    if obj.contains_key("blockspec_version") {
        if let Some(inner) = obj.get("result") {
            return document_from_value(inner);
        }
    }
    match obj.get("factors") {
        Some(Value::Array(factors)) => {
            if factors.len() < 2 {
                return Err(Error::Format(
                    "a tensor document needs at least two factors".into(),
                ));
            }
            let symbols = factors
                .iter()
                .map(symbol_from_value)
                .collect::<Result<Vec<_>>>()?;
            Ok(Document::Tensor(symbols))
        }
        Some(_) => Err(Error::Format("\"factors\" must be an array".into())),
        None => symbol_from_value(value).map(Document::Single),
    }
}

/// Parse a single (non-tensor) symbol document.
pub fn symbol_from_value(value: &Value) -> Result<MatrixSymbol> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Format("a symbol document must be a JSON object".into()))?;
    if obj.contains_key("generator") {
        let doc: GeneratorSymbol = serde_json::from_value(value.clone())?;
        generate(&doc)
    } else if obj.contains_key("dims") {
        let doc: ExplicitSymbol = serde_json::from_value(value.clone())?;
        doc.to_symbol()
    } else {
        Err(Error::Format(
            "expected \"dims\"/\"blocks\", \"generator\" or \"factors\"".into(),
        ))
    }
}

fn params<T: serde::de::DeserializeOwned>(doc: &GeneratorSymbol) -> Result<T> {
    serde_json::from_value(Value::Object(doc.params.clone()))
        .map_err(|e| Error::Format(format!("parameters of {}: {e}", doc.generator)))
}

/// Build the symbol named by a generator document.
pub fn generate(doc: &GeneratorSymbol) -> Result<MatrixSymbol> {
    match doc.generator.as_str() {
        "su2-laplacian" => {
            let p: Su2Params = params(doc)?;
            Ok(su2_laplacian_power_symbol(p.alpha)?)
        }
        "so3-schrodinger" => {
            let p: So3Params = params(doc)?;
            Ok(so3_schrodinger_symbol(p.gamma)?)
        }
        "torus-multiplier" => {
            let p: TorusParams = params(doc)?;
            if !p.s.is_finite() {
                return Err(Error::Format("s must be finite".into()));
            }
            Ok(torus_multiplier_symbol(inv_power_multiplier(p.s), p.dim, p.radius)?.symbol)
        }
        "anharmonic" => {
            let p: AnharmonicParams = params(doc)?;
            let mut spec = AnharmonicSpec::new(p.k, p.ell, p.mu);
            spec = spec.with_grid(
                p.points.unwrap_or(spec.points),
                p.extent.unwrap_or(spec.extent),
            );
            let spectrum = anharmonic_galerkin_spectrum(&spec, p.count)?;
            let values: Vec<C64> = spectrum
                .eigenvalues
                .iter()
                .map(|e| C64::new((1.0 + e).powf(-p.mu), 0.0))
                .collect();
            let partition = Partition::uniform(1, Some(values.len()))?;
            Ok(MatrixSymbol::scalar(partition, move |m| values[m]))
        }
        other => Err(Error::Format(format!(
            "unknown generator {other:?}; expected one of {}",
            GENERATORS.join(", ")
        ))),
    }
}

impl ExplicitSymbol {
    /// Validate shapes and values and build the symbol.
    pub fn to_symbol(&self) -> Result<MatrixSymbol> {
        if self.dims.len() != self.blocks.len() {
            return Err(Error::Format(format!(
                "{} dims but {} blocks",
                self.dims.len(),
                self.blocks.len()
            )));
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (ell, (&d, entries)) in self.dims.iter().zip(&self.blocks).enumerate() {
            if entries.len() != d * d {
                return Err(Error::Format(format!(
                    "block {ell} has {} entries, expected {d}x{d}",
                    entries.len()
                )));
            }
            if entries.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Format(format!("block {ell} has a non-finite entry")));
            }
            blocks.push(CMatrix::from_row_iterator(
                d,
                d,
                entries.iter().map(|[re, im]| C64::new(*re, *im)),
            ));
        }
        let symbol = MatrixSymbol::from_blocks(blocks)?;
        match &self.multiplicity {
            Some(m) => Ok(symbol.with_multiplicities(m.clone())?),
            None => Ok(symbol),
        }
    }

    /// Explicit document of a symbol on a finite partition.
    pub fn from_symbol(s: &MatrixSymbol) -> Result<Self> {
        let len = s.partition().len().ok_or_else(|| {
            Error::Format("only symbols on finite partitions can be listed explicitly".into())
        })?;
        Self::from_symbol_prefix(s, len)
    }

    /// Explicit document of blocks `0..len` of any symbol.
    pub fn from_symbol_prefix(s: &MatrixSymbol, len: usize) -> Result<Self> {
        let mut dims = Vec::with_capacity(len);
        let mut blocks = Vec::with_capacity(len);
        for ell in 0..len {
            let b = s.block(ell)?;
            dims.push(b.nrows());
            blocks.push(
                b.transpose()
                    .iter()
                    .map(|z| {
                        if z.re.is_finite() && z.im.is_finite() {
                            Ok([z.re, z.im])
                        } else {
                            Err(Error::Format(format!("block {ell} has a non-finite entry")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let multiplicity: Vec<u64> = (0..len).map(|ell| s.multiplicity(ell)).collect();
        Ok(Self {
            dims,
            blocks,
            multiplicity: multiplicity.iter().any(|&m| m != 1).then_some(multiplicity),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}
