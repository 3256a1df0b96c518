//! Versioned, self-describing sweep checkpoints.
//!
//! A checkpoint is a single JSON document: the hash of the semantic sweep
//! parameters, the chunk geometry, the set of completed chunks, and the
//! merged partial tallies. Resuming replays only the missing chunks, and the
//! assembled report is identical to an uninterrupted run.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::engine::Tally;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub spec_sha256: String,
    pub chunk_pairs: u64,
    pub total_pairs: u64,
    pub done_chunks: Vec<u64>,
    pub(crate) tally: Tally,
    pub elapsed_ms: u64,
}

impl Checkpoint {
    pub const VERSION: u32 = 1;

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cp: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("corrupt checkpoint {path:?}: {e}")))?;
        if cp.version != Self::VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint version {} (expected {})",
                cp.version,
                Self::VERSION
            )));
        }
        Ok(cp)
    }

    /// Atomic save: write to a sibling temp file, then rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).expect("checkpoint serializes");
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub(crate) fn compatible_with(
        &self,
        spec_sha256: &str,
        chunk_pairs: u64,
        total_pairs: u64,
    ) -> Result<()> {
        if self.spec_sha256 != spec_sha256 {
            return Err(Error::Checkpoint(
                "spec hash mismatch: the checkpoint was written by a different sweep".into(),
            ));
        }
        if self.chunk_pairs != chunk_pairs || self.total_pairs != total_pairs {
            return Err(Error::Checkpoint(format!(
                "chunk geometry mismatch: checkpoint has {} pairs in chunks of {}, sweep has {} in chunks of {}",
                self.total_pairs, self.chunk_pairs, total_pairs, chunk_pairs
            )));
        }
        Ok(())
    }
}
