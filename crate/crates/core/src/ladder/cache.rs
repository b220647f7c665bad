use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{build_ladder, LadderConfig, LadderError, LadderTable, PANEL_RULE};
use crate::rszeta::ZEvaluator;

pub const LADDER_CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Document {
    version: u32,
    config_hash: String,
    evaluator_hash: String,
    panel_rule: String,
    evaluator: ZEvaluator,
    config: LadderConfig,
    anchor_value: f64,
    checksum: String,
    phi: Vec<f64>,
}

fn checksum(phi: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in phi {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Directory of ladder files, one per (evaluator, ladder configuration).
#[derive(Debug, Clone)]
pub struct LadderCache {
    dir: PathBuf,
}

impl LadderCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, ev: &ZEvaluator, cfg: &LadderConfig) -> PathBuf {
        self.dir.join(format!("ladder-{}.json", cfg.config_hash(ev)))
    }

    pub fn encode(table: &LadderTable) -> String {
        let doc = Document {
            version: LADDER_CACHE_VERSION,
            config_hash: table.config_hash(),
            evaluator_hash: table.evaluator.config_hash(),
            panel_rule: PANEL_RULE.to_string(),
            evaluator: table.evaluator,
            config: table.config.clone(),
            anchor_value: table.anchor_value,
            checksum: checksum(&table.phi),
            phi: table.phi.clone(),
        };
        serde_json::to_string(&doc).expect("ladder serialises")
    }

    /// Parses and checks a cache document on its own terms: version,
    /// checksum, internal hashes and checkpoint count.
    pub fn decode(text: &str) -> Result<LadderTable, LadderError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| LadderError::Cache(format!("unreadable document: {e}")))?;
        if doc.version != LADDER_CACHE_VERSION {
            return Err(LadderError::Cache(format!("version {} (expected {LADDER_CACHE_VERSION})", doc.version)));
        }
        if doc.panel_rule != PANEL_RULE {
            return Err(LadderError::Cache(format!("panel rule {}", doc.panel_rule)));
        }
        if checksum(&doc.phi) != doc.checksum {
            return Err(LadderError::Cache("checkpoint checksum mismatch".into()));
        }
        doc.config.validate().map_err(|e| LadderError::Cache(e.to_string()))?;
        if doc.evaluator.config_hash() != doc.evaluator_hash || doc.config.config_hash(&doc.evaluator) != doc.config_hash {
            return Err(LadderError::Cache("stored hashes do not match stored configuration".into()));
        }
        let table = LadderTable {
            evaluator: doc.evaluator,
            config: doc.config,
            anchor_value: doc.anchor_value,
            phi: doc.phi,
        };
        if table.phi.len() != table.panel_count() + 1 || table.phi.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(LadderError::Cache("checkpoint array is malformed".into()));
        }
        Ok(table)
    }

    /// Loads the ladder for `(ev, cfg)` if present. A file whose
    /// configuration differs from the request is rejected.
    pub fn load(&self, ev: &ZEvaluator, cfg: &LadderConfig) -> Result<Option<LadderTable>, LadderError> {
        let path = self.path_for(ev, cfg);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let table = Self::decode(&text)?;
        let expected = cfg.config_hash(ev);
        let found = table.config_hash();
        if expected != found {
            return Err(LadderError::CacheMismatch { expected, found });
        }
        Ok(Some(table))
    }

    /// Writes via a temporary file and rename so readers never see a
    /// partial document.
    pub fn store(&self, table: &LadderTable) -> Result<PathBuf, LadderError> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&table.evaluator, &table.config);
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(Self::encode(table).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Returns the cached ladder, building and storing it if absent. The
    /// flag is true when the cache was reused.
    pub fn load_or_build(&self, ev: &ZEvaluator, cfg: &LadderConfig) -> Result<(LadderTable, bool), LadderError> {
        if let Some(t) = self.load(ev, cfg)? {
            return Ok((t, true));
        }
        let table = build_ladder(ev, cfg)?;
        self.store(&table)?;
        Ok((table, false))
    }
}
