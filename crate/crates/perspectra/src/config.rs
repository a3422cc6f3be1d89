//! TOML pipeline configuration. Every key is optional; omitted keys take the
//! library defaults.
//!
//! ```toml
//! k = 10
//! alpha = 0.7
//! beta = 0.6
//! theta = 0.6
//! min_relevance = 0.05
//! evidence_consistency = "perspective"
//! seed = 0
//!
//! [stance]
//! mode = "baseline"            # or "remote"
//! endpoint = "http://127.0.0.1:9000/stance"
//! timeout_ms = 2000
//! fallback_to_baseline = true
//! overlap_gate = 0.1
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use perspectra_core::pipeline::{ConfigError, PipelineConfig};
use thiserror::Error;

/// Environment variable naming the config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "PERSPECTRA_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigFileError {
    #[error("cannot read config `{}`: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config `{}`: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("invalid config `{}`: {source}", path.display())]
    Invalid {
        path: PathBuf,
        #[source]
        source: ConfigError,
    },
}

pub fn parse_config(text: &str, path: &Path) -> Result<PipelineConfig, ConfigFileError> {
    let config: PipelineConfig = toml::from_str(text).map_err(|e| ConfigFileError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    config.validate().map_err(|source| ConfigFileError::Invalid {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(config)
}

/// Loads `path`, or returns the defaults when no path is given.
pub fn load_config(path: Option<&Path>) -> Result<PipelineConfig, ConfigFileError> {
    let Some(path) = path else {
        return Ok(PipelineConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|source| ConfigFileError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path)
}
