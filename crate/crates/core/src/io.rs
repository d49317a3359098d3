//! The JSON model file: `{"states": [...], "rel": [[x, y], ...],
//! "valuation": {"p": [...]}, "semantics": "fixpoint"}` where `[x, y]`
//! means `x ◁ y`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{Frame, FrameError};
use crate::semantics::{Model, SemanticsError, SemanticsId};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub rel: Vec<[String; 2]>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantics: Option<SemanticsId>,
}

impl ModelFile {
    pub fn from_model(model: &Model, semantics: Option<SemanticsId>) -> Self {
        let frame = model.frame();
        ModelFile {
            states: frame.labels().to_vec(),
            rel: frame
                .pairs()
                .map(|(x, y)| [frame.label(x).to_string(), frame.label(y).to_string()])
                .collect(),
            valuation: model
                .valuation()
                .iter()
                .map(|(v, set)| (v.clone(), model.labels_of(set)))
                .collect(),
            semantics,
        }
    }

    pub fn to_model(&self) -> Result<Model, FileError> {
        let frame = Frame::from_labelled_pairs(
            self.states.clone(),
            self.rel.iter().map(|[x, y]| (x.as_str(), y.as_str())),
        )?;
        Ok(Model::from_labels(
            frame,
            self.valuation.iter().map(|(v, ls)| (v.clone(), ls.clone())),
        )?)
    }
}

pub(crate) fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FileError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: shown.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json { path: shown, source })
}

/// Reads a model file, returning the model and its declared semantics.
pub fn read_model(path: &Path) -> Result<(Model, Option<SemanticsId>), FileError> {
    let file: ModelFile = read_json(path)?;
    Ok((file.to_model()?, file.semantics))
}

pub fn write_model(path: &Path, model: &Model, semantics: Option<SemanticsId>) -> Result<(), FileError> {
    let text = serde_json::to_string_pretty(&ModelFile::from_model(model, semantics)).expect("model serializes");
    std::fs::write(path, text + "\n").map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}
