use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tree_core::VertexId;

use crate::error::EngineError;
use crate::residual::Residual;

pub const LOG_MAGIC: &[u8; 6] = b"TCLOG\0";
pub const LOG_VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecordKind {
    Connected,
    Sibling,
}

/// Edge from a child to a removed vertex at contraction time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChildRef<E> {
    pub id: VertexId,
    pub slot: VertexId,
    pub edge: E,
}

/// A vertex removed by a contraction, with what is needed to recompute its
/// value once its children are known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Removed<N, E> {
    pub id: VertexId,
    pub payload: Residual<N, E>,
    pub children: Vec<ChildRef<E>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord<N, E> {
    pub phase: u32,
    pub kind: RecordKind,
    pub survivor: VertexId,
    /// Connected records list members in preorder.
    pub removed: Vec<Removed<N, E>>,
    pub words: u64,
}

/// Everything needed to replay a run backwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionLog<N, E> {
    /// Number of original vertices; larger ids are virtual.
    pub n: usize,
    pub records: Vec<LogRecord<N, E>>,
    pub root: VertexId,
    pub root_payload: Option<Residual<N, E>>,
}

impl<N, E> ContractionLog<N, E> {
    pub fn new(n: usize) -> Self {
        ContractionLog {
            n,
            records: Vec::new(),
            root: 0,
            root_payload: None,
        }
    }

    pub fn total_words(&self) -> u64 {
        self.records.iter().map(|r| r.words).sum()
    }

    /// How many times each id (original or virtual) is removed.
    pub fn removal_counts(&self) -> std::collections::HashMap<VertexId, usize> {
        let mut out = std::collections::HashMap::new();
        for r in &self.records {
            for m in &r.removed {
                *out.entry(m.id).or_insert(0) += 1;
            }
        }
        out
    }
}

impl<N, E> ContractionLog<N, E>
where
    N: Serialize + DeserializeOwned,
    E: Serialize + DeserializeOwned,
{
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), EngineError> {
        let io = |e: std::io::Error| EngineError::LogFile(e.to_string());
        w.write_all(LOG_MAGIC).map_err(io)?;
        w.write_all(&LOG_VERSION.to_le_bytes()).map_err(io)?;
        bincode::serialize_into(&mut w, self).map_err(|e| EngineError::LogFile(e.to_string()))
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, EngineError> {
        let io = |e: std::io::Error| EngineError::LogFile(e.to_string());
        let mut magic = [0u8; 6];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != LOG_MAGIC {
            return Err(EngineError::LogFile("not a contraction log".into()));
        }
        let mut ver = [0u8; 2];
        r.read_exact(&mut ver).map_err(io)?;
        let ver = u16::from_le_bytes(ver);
        if ver != LOG_VERSION {
            return Err(EngineError::LogFile(format!(
                "unsupported log version {ver}"
            )));
        }
        bincode::deserialize_from(r).map_err(|e| EngineError::LogFile(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), EngineError> {
        let f = std::fs::File::create(path).map_err(|e| EngineError::LogFile(e.to_string()))?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<Self, EngineError> {
        let f = std::fs::File::open(path).map_err(|e| EngineError::LogFile(e.to_string()))?;
        Self::read_from(std::io::BufReader::new(f))
    }
}
