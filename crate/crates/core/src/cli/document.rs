//! Spec files in, result documents out.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::CliError;
use crate::model::{
    validate_spec, CustomTailFamily, EntryFamily, ExactPower, GeometricPrimeFamily, OperatorSpec, ScaleEntry,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema_version: String,
    pub dimension: usize,
    #[serde(default)]
    pub entries: Vec<EntryDocument>,
    #[serde(default)]
    pub generator: Option<GeneratorDocument>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDocument {
    pub k: i64,
    pub c: [f64; 2],
    /// Row-major `d × d` reals.
    pub matrix: Vec<f64>,
    #[serde(default)]
    pub exact: Option<Vec<ExactPower>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "name", content = "parameters", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorDocument {
    GeometricPrime(GeometricPrimeParams),
    CustomTail(CustomTailParams),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricPrimeParams {
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomTailParams {
    #[serde(default)]
    pub tail_constant: Option<f64>,
    #[serde(default)]
    pub tail_ratio: Option<f64>,
}

/// A parsed spec file: either a finite operator or a generator of truncations.
pub enum LoadedSpec {
    Finite(OperatorSpec),
    Family(Box<dyn EntryFamily>),
}

impl LoadedSpec {
    pub fn dimension(&self) -> usize {
        match self {
            Self::Finite(s) => s.dimension(),
            Self::Family(f) => f.dimension(),
        }
    }

    /// The operator itself, or the truncation of order `n` for generators.
    pub fn operator(&self, n: u64) -> Result<OperatorSpec, CliError> {
        match self {
            Self::Finite(s) => Ok(s.clone()),
            Self::Family(f) => Ok(f.truncation(n)?),
        }
    }

    pub fn family(&self) -> &dyn EntryFamily {
        match self {
            Self::Finite(s) => s,
            Self::Family(f) => f.as_ref(),
        }
    }

    pub fn is_generator(&self) -> bool {
        matches!(self, Self::Family(_))
    }
}

/// The spec file's bytes together with the parsed operator.
pub struct SpecInput {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub spec: LoadedSpec,
}

impl SpecInput {
    pub fn digest(&self) -> String {
        digest_hex(&self.bytes)
    }
}

pub fn read_spec(path: &Path) -> Result<SpecInput, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let spec = parse_spec(&bytes, path)?;
    Ok(SpecInput {
        path: path.to_path_buf(),
        bytes,
        spec,
    })
}

pub fn parse_spec(bytes: &[u8], path: &Path) -> Result<LoadedSpec, CliError> {
    let doc: SpecDocument = serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_spec(path)
}

impl SpecDocument {
    pub fn into_spec(self, path: &Path) -> Result<LoadedSpec, CliError> {
        let invalid = |message: String| CliError::Invalid {
            path: path.to_path_buf(),
            message,
        };
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "schema_version \"{}\" is not supported (expected \"{SCHEMA_VERSION}\")",
                self.schema_version
            )));
        }
        let d = self.dimension;
        if d == 0 {
            return Err(invalid("dimension must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (pos, e) in self.entries.into_iter().enumerate() {
            let at = |msg: String| invalid(format!("entries[{pos}] (k = {}): {msg}", e.k));
            if e.matrix.len() != d * d {
                return Err(at(format!("matrix has {} values, expected {}", e.matrix.len(), d * d)));
            }
            let mut entry = ScaleEntry::new(
                e.k,
                Complex64::new(e.c[0], e.c[1]),
                DMatrix::from_row_slice(d, d, &e.matrix),
            );
            if let Some(exact) = e.exact {
                if exact.len() != d {
                    return Err(at(format!("exact has {} eigenvalues, expected {d}", exact.len())));
                }
                entry = entry.with_exact(exact);
            }
            entries.push(entry);
        }
        let at_model = |source| CliError::Validation {
            path: path.to_path_buf(),
            source,
        };
        match self.generator {
            None => Ok(LoadedSpec::Finite(validate_spec(d, entries).map_err(at_model)?)),
            Some(GeneratorDocument::GeometricPrime(p)) => {
                if !entries.is_empty() {
                    return Err(invalid("generator geometric-prime takes no explicit entries".into()));
                }
                Ok(LoadedSpec::Family(Box::new(
                    GeometricPrimeFamily::new(p.ratio, d).map_err(at_model)?,
                )))
            }
            Some(GeneratorDocument::CustomTail(p)) => {
                let listed = validate_spec(d, entries).map_err(at_model)?;
                Ok(LoadedSpec::Family(Box::new(
                    CustomTailFamily::new(listed, p.tail_constant, p.tail_ratio).map_err(at_model)?,
                )))
            }
        }
    }
}

/// Spec-file JSON for a finite operator, the inverse of [`parse_spec`].
pub fn spec_to_json(spec: &OperatorSpec) -> Value {
    let d = spec.dimension();
    let entries: Vec<Value> = spec
        .entries()
        .iter()
        .map(|e| {
            let matrix: Vec<f64> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|ij| e.matrix[ij]).collect();
            let mut obj = json!({
                "k": e.index,
                "c": [e.coefficient.re, e.coefficient.im],
                "matrix": matrix,
            });
            if let Some(exact) = &e.exact_eigenvalues {
                obj["exact"] = json!(exact);
            }
            obj
        })
        .collect();
    json!({ "schema_version": SCHEMA_VERSION, "dimension": d, "entries": entries })
}

pub fn digest_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Output of one invocation. Keys serialize in sorted order, so equal inputs
/// give equal bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultDocument {
    pub operation: String,
    pub input_digest: String,
    pub parameters: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub seed: u64,
}

impl ResultDocument {
    pub fn new(operation: &str, input_digest: String, seed: u64) -> Self {
        Self {
            operation: operation.to_string(),
            input_digest,
            parameters: Map::new(),
            outputs: Map::new(),
            seed,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "operation": self.operation,
            "input_digest": self.input_digest,
            "parameters": self.parameters,
            "outputs": self.outputs,
            "provenance": {
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "seed": self.seed,
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("result documents hold finite JSON");
        s.push('\n');
        s
    }
}

/// Points as `[re, im]` pairs.
pub fn cloud_json(points: &[Complex64]) -> Value {
    Value::Array(points.iter().map(|z| json!([finite(z.re), finite(z.im)])).collect())
}

pub fn complex_json(z: Complex64) -> Value {
    json!([finite(z.re), finite(z.im)])
}

/// JSON has no infinities or NaN; they are written as strings.
pub fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn cloud_csv(points: &[Complex64]) -> String {
    let mut out = String::from("re,im\n");
    for z in points {
        out.push_str(&format!("{:e},{:e}\n", z.re, z.im));
    }
    out
}
