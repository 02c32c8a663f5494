//! On-disk cache of minimization results keyed by the labeled graph and m.
//!
//! An entry is trusted only after its witness is rebuilt on the requested
//! graph and recounted to the stored value; anything else is a miss.

use std::fs;
use std::path::{Path, PathBuf};

use dpchroma_core::{count_colorings, DPValue, Graph};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::format::{cover_from_json, cover_json};

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    graph: String,
    m: usize,
    reduced: bool,
    value: String,
    witness_rank: u64,
    covers_examined: u64,
    witness: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

fn graph_key(graph: &Graph) -> String {
    graph.to_string().replace('\n', ";")
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, CliError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, graph: &Graph, m: usize, reduced: bool) -> PathBuf {
        let mut h = Sha256::new();
        h.update(graph_key(graph).as_bytes());
        h.update(format!("|m={m}|reduced={reduced}").as_bytes());
        self.dir.join(format!("{:x}.json", h.finalize()))
    }

    pub fn load<'g>(&self, graph: &'g Graph, m: usize, reduced: bool) -> Option<DPValue<'g>> {
        let text = fs::read_to_string(self.path(graph, m, reduced)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.graph != graph_key(graph) || entry.m != m || entry.reduced != reduced {
            return None;
        }
        let value: BigUint = entry.value.parse().ok()?;
        let witness = cover_from_json(&entry.witness, graph).ok()?;
        if witness.m() != m || count_colorings(&witness) != value {
            return None;
        }
        Some(DPValue {
            m,
            value,
            witness,
            witness_rank: entry.witness_rank,
            covers_examined: entry.covers_examined,
            reduced,
        })
    }

    pub fn store(&self, v: &DPValue<'_>) -> Result<(), CliError> {
        let graph = v.witness.graph();
        let entry = Entry {
            graph: graph_key(graph),
            m: v.m,
            reduced: v.reduced,
            value: v.value.to_string(),
            witness_rank: v.witness_rank,
            covers_examined: v.covers_examined,
            witness: cover_json(&v.witness),
        };
        let path = self.path(graph, v.m, v.reduced);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))
    }
}
