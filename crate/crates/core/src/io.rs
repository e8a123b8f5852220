//! JSON artifacts on disk: a versioned envelope, canonical output and schema
//! errors located by JSON pointer.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{build_algebra, AlgebraRecord, ClusterTiltedAlgebra};
use crate::cluster::{ClusterCategory, TiltingObject};
use crate::derived::{DerivedModel, RawModel};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::quiver::Quiver;
use crate::slices::SliceCandidate;
use crate::translation::TranslationQuiver;

pub const FORMAT_VERSION: &str = "cluster-slices/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArtifactKind {
    Quiver,
    TranslationQuiver,
    Model,
    Tilting,
    Algebra,
    Slice,
    Presentation,
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

#[derive(Serialize)]
struct EnvelopeOut<'a, T> {
    format: &'static str,
    kind: ArtifactKind,
    data: &'a T,
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut s = String::new();
    for seg in path.iter() {
        s.push('/');
        match seg {
            Segment::Seq { index } => s.push_str(&index.to_string()),
            Segment::Map { key } => s.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => s.push_str(variant),
            Segment::Unknown => s.push('?'),
        }
    }
    s
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.into(), message: message.into() }
}

/// Deserializes `value`, reporting failures with a JSON pointer relative to `base`.
pub fn from_value<T: DeserializeOwned>(value: Value, base: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let p = pointer_of(e.path());
        schema(format!("{base}{p}"), e.into_inner().to_string())
    })
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| schema("", e.to_string()))?;
    from_value(value, "")
}

/// Reads an artifact of `kind`. Bare data without an envelope is accepted;
/// an envelope must carry the current version and the expected kind.
pub fn load_str<T: DeserializeOwned>(text: &str, kind: ArtifactKind) -> Result<T> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| schema("", e.to_string()))?;
    let Some(obj) = value.as_object_mut().filter(|o| o.contains_key("format")) else {
        return from_value(value, "");
    };
    match obj.get("format").and_then(Value::as_str) {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(schema("/format", format!("unsupported version {v:?}, expected {FORMAT_VERSION:?}"))),
        None => return Err(schema("/format", "version tag must be a string")),
    }
    let found: ArtifactKind = from_value(obj.get("kind").cloned().unwrap_or(Value::Null), "/kind")?;
    if found != kind {
        return Err(schema("/kind", format!("expected {kind}, found {found}")));
    }
    let data = obj.remove("data").ok_or_else(|| schema("/data", "missing"))?;
    from_value(data, "/data")
}

/// Canonical text: struct fields in declaration order, maps sorted, two-space
/// indent, trailing newline.
pub fn to_canonical<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::AlgorithmFailure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn save_str<T: Serialize>(value: &T, kind: ArtifactKind) -> Result<String> {
    to_canonical(&EnvelopeOut { format: FORMAT_VERSION, kind, data: value })
}

/// Checks a stored algebra against a fresh rebuild.
pub fn check_algebra_record(rec: &AlgebraRecord, alg: &ClusterTiltedAlgebra) -> Result<()> {
    let fresh = alg.record();
    let checks = [
        ("basis", fresh.basis == rec.basis),
        ("structure", fresh.structure == rec.structure),
        ("arrows", fresh.arrows == rec.arrows),
        ("presentation", fresh.presentation == rec.presentation),
    ];
    for (field, ok) in checks {
        if !ok {
            return Err(schema(format!("/{field}"), "does not match the rebuilt algebra"));
        }
    }
    Ok(())
}

/// Rebuilds the algebra of a record and runs `f` on it.
pub fn with_algebra<R>(rec: &AlgebraRecord, f: impl FnOnce(&ClusterTiltedAlgebra) -> Result<R>) -> Result<R> {
    let m = DerivedModel::from_raw(rec.model.clone())?;
    let c = ClusterCategory::new(&m);
    let alg = build_algebra(&c, &rec.tilting)?;
    check_algebra_record(rec, &alg)?;
    f(&alg)
}

/// A validated artifact.
#[derive(Clone, Debug)]
pub enum Artifact {
    Quiver(Quiver),
    TranslationQuiver(TranslationQuiver),
    Model(Box<DerivedModel>),
    Tilting(TiltingObject),
    Algebra(Box<AlgebraRecord>),
    Slice(SliceCandidate),
    Presentation(Presentation),
}

impl Artifact {
    pub fn kind(&self) -> ArtifactKind {
        match self {
            Artifact::Quiver(_) => ArtifactKind::Quiver,
            Artifact::TranslationQuiver(_) => ArtifactKind::TranslationQuiver,
            Artifact::Model(_) => ArtifactKind::Model,
            Artifact::Tilting(_) => ArtifactKind::Tilting,
            Artifact::Algebra(_) => ArtifactKind::Algebra,
            Artifact::Slice(_) => ArtifactKind::Slice,
            Artifact::Presentation(_) => ArtifactKind::Presentation,
        }
    }

    /// Parses and validates text as an artifact of `kind`.
    pub fn from_str(text: &str, kind: ArtifactKind) -> Result<Self> {
        Ok(match kind {
            ArtifactKind::Quiver => Artifact::Quiver(load_str(text, kind)?),
            ArtifactKind::TranslationQuiver => {
                let g: TranslationQuiver = load_str(text, kind)?;
                g.check_axioms()?;
                Artifact::TranslationQuiver(g)
            }
            ArtifactKind::Model => Artifact::Model(Box::new(DerivedModel::from_raw(load_str::<RawModel>(text, kind)?)?)),
            ArtifactKind::Tilting => Artifact::Tilting(load_str(text, kind)?),
            ArtifactKind::Algebra => {
                let rec: AlgebraRecord = load_str(text, kind)?;
                with_algebra(&rec, |_| Ok(()))?;
                Artifact::Algebra(Box::new(rec))
            }
            ArtifactKind::Slice => Artifact::Slice(load_str(text, kind)?),
            ArtifactKind::Presentation => {
                let p: Presentation = load_str(text, kind)?;
                p.validate()?;
                Artifact::Presentation(p)
            }
        })
    }

    pub fn to_text(&self) -> Result<String> {
        let k = self.kind();
        match self {
            Artifact::Quiver(q) => save_str(q, k),
            Artifact::TranslationQuiver(g) => save_str(g, k),
            Artifact::Model(m) => save_str(&m.to_raw(), k),
            Artifact::Tilting(t) => save_str(t, k),
            Artifact::Algebra(a) => save_str(a, k),
            Artifact::Slice(s) => save_str(s, k),
            Artifact::Presentation(p) => save_str(p, k),
        }
    }
}

/// Artifacts keyed by the path they were read from.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub artifacts: BTreeMap<PathBuf, Artifact>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn load(&mut self, path: &Path, kind: ArtifactKind) -> Result<&Artifact> {
        let text = std::fs::read_to_string(path)?;
        let a = Artifact::from_str(&text, kind).map_err(|e| match e {
            Error::Schema { pointer, message } => Error::Schema { pointer, message: format!("{}: {message}", path.display()) },
            other => other,
        })?;
        self.artifacts.insert(path.to_path_buf(), a);
        Ok(&self.artifacts[path])
    }

    pub fn save(&mut self, path: &Path, artifact: Artifact) -> Result<()> {
        std::fs::write(path, artifact.to_text()?)?;
        self.artifacts.insert(path.to_path_buf(), artifact);
        Ok(())
    }
}
