use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};

use super::{Homology, TruncatedTensor, Word};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub word: Vec<String>,
    pub coef: String,
}

/// Serialized form `{"rank": .., "trunc": .., "terms": [{"word": [..], "coef": ".."}]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TensorJson {
    pub rank: usize,
    pub trunc: usize,
    pub terms: Vec<TermJson>,
}

impl TruncatedTensor {
    pub fn to_json_struct(&self) -> TensorJson {
        let h = self.homology();
        TensorJson {
            rank: h.rank(),
            trunc: self.trunc(),
            terms: self
                .terms()
                .map(|(w, c)| TermJson {
                    word: w.letters().iter().map(|&x| h.label(x)).collect(),
                    coef: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_struct()).expect("tensor serialization")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("tensor serialization")
    }

    pub fn from_json_struct(data: &TensorJson, homology: Homology) -> Result<Self> {
        if data.rank != homology.rank() {
            return Err(Error::Config(format!(
                "serialized rank {} does not match homology rank {}",
                data.rank,
                homology.rank()
            )));
        }
        let mut terms = Vec::with_capacity(data.terms.len());
        for t in &data.terms {
            if t.word.len() > data.trunc {
                return Err(Error::Parse(format!("word longer than truncation {}", data.trunc)));
            }
            let letters = t
                .word
                .iter()
                .map(|s| homology.parse_label(s))
                .collect::<Result<Vec<u8>>>()?;
            terms.push((Word::from_slice(&letters), parse_rational(&t.coef)?));
        }
        Ok(TruncatedTensor::from_terms(homology, data.trunc, terms))
    }

    pub fn from_json(text: &str, homology: Homology) -> Result<Self> {
        let data: TensorJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("tensor JSON: {e}")))?;
        Self::from_json_struct(&data, homology)
    }
}
