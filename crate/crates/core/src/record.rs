//! Line-delimited JSON records for search results.

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_code, CanonicalKey};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permuted::PermutedCode;
use crate::sequence::TransitionSequence;
use crate::spread::{Code, CodeKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub d: usize,
    pub k: usize,
    pub kind: CodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leap: Option<String>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub initial_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(rename = "N")]
    pub n: usize,
    pub transitions: String,
    pub key: String,
}

impl Record {
    pub fn from_code(code: &Code) -> Self {
        Record {
            d: code.dim(),
            k: code.spread(),
            kind: code.kind(),
            perm: None,
            leap: None,
            period: None,
            initial_len: None,
            truncation: None,
            n: code.len(),
            transitions: code.seq().to_string(),
            key: canonical_code(code).to_hex(),
        }
    }

    pub fn from_permuted(p: &PermutedCode) -> Self {
        Record {
            perm: Some(p.perm.cycle_notation()),
            leap: Some(p.leap0.to_string()),
            period: Some(p.period),
            initial_len: Some(p.initial.len()),
            truncation: p.truncation,
            ..Record::from_code(&p.code)
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// Parses one record line and checks it for internal consistency: the
    /// transitions verify at the stated spread, `N` and the key match, and
    /// the permutation (if any) parses.
    pub fn parse(line: &str) -> Result<Self> {
        let rec: Record = serde_json::from_str(line.trim()).map_err(|e| Error::MalformedRecord(e.to_string()))?;
        rec.code()?;
        if let Some(perm) = &rec.perm {
            Permutation::parse_cycles(perm, rec.d)?;
        }
        Ok(rec)
    }

    /// The code this record describes, verified.
    pub fn code(&self) -> Result<Code> {
        let seq = TransitionSequence::parse(&self.transitions, self.d)?;
        if seq.len() != self.n {
            return Err(Error::MalformedRecord(format!(
                "N is {} but there are {} transitions",
                self.n,
                seq.len()
            )));
        }
        let code = Code::new(self.kind, self.k, seq)?;
        let key = CanonicalKey::from_hex(&self.key)?;
        if key != canonical_code(&code) {
            return Err(Error::MalformedRecord("canonical key does not match the transitions".into()));
        }
        Ok(code)
    }
}

/// Parses a stream of records, skipping blank lines.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(Record::parse)
        .collect()
}
