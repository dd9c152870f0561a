//! Certificates: JSON records tying a verification or construction outcome
//! to the exact files it covers, via content digests.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    /// One of: family-verify, decomposition, lp-bound, count-bound,
    /// exhaustion, pipeline.
    pub kind: String,
    pub inputs: Vec<FileDigest>,
    pub payload: serde_json::Value,
    pub tool_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

impl Certificate {
    pub fn new(kind: &str, payload: serde_json::Value) -> Self {
        Certificate {
            kind: kind.to_string(),
            inputs: Vec::new(),
            payload,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn with_input(mut self, path: &str, contents: &[u8]) -> Self {
        self.inputs.push(FileDigest { path: path.to_string(), sha256: sha256_hex(contents) });
        self
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization")
    }
}
