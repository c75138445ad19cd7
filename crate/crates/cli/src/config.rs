//! Optional TOML key/value file mirroring the command-line flags. Flags given on
//! the command line take precedence.

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Default, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<String>,
    pub d: Option<u64>,
    pub m: Option<u64>,
    pub degree: Option<u64>,
    pub polar2: Option<bool>,
    pub b_denominator: Option<String>,
    pub b_direction: Option<String>,
    pub grid_max: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }
}
