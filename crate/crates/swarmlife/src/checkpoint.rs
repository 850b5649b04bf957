//! Resumable run state as JSON.

use std::path::Path;

use anyhow::Context as _;
use serde::{Deserialize, Serialize};
use swarmlife_core::evolve::LifelongState;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub state: LifelongState,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string(self)?;
        std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cp: Checkpoint =
            serde_json::from_str(&text).with_context(|| format!("parsing checkpoint {}", path.display()))?;
        anyhow::ensure!(
            cp.format_version == FORMAT_VERSION,
            "{}: unsupported checkpoint version {}",
            path.display(),
            cp.format_version
        );
        Ok(cp)
    }
}
