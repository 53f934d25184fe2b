use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::ServiceError;

pub const DEFAULT_PORT: u16 = 8890;
pub const DEFAULT_INTERVAL_HOURS: u64 = 96;

/// Server settings, read from a TOML file and `INFLUENCE_*` environment
/// variables (the environment wins).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    /// Namespace under which resource IRIs are minted.
    pub base: String,
    pub port: u16,
    /// Directory of `<screen_name>.json` timelines.
    pub fixtures: Option<PathBuf>,
    /// Period of the background update cycle; 0 disables it.
    pub interval_hours: u64,
    /// N-Triples file loaded at startup and rewritten after each cycle.
    pub graph: Option<PathBuf>,
    /// Metrics history CSV.
    pub log: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            base: influence_core::ontology::DEFAULT_BASE.to_string(),
            port: DEFAULT_PORT,
            fixtures: None,
            interval_hours: DEFAULT_INTERVAL_HOURS,
            graph: None,
            log: None,
        }
    }
}

impl ServiceConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ServiceError> {
        toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))
    }

    /// Reads `path` if given, then applies the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ServiceError> {
        let mut config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ServiceError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                Self::from_toml_str(&text)?
            }
            None => Self::default(),
        };
        config.apply_env(std::env::vars())?;
        Ok(config)
    }

    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<(), ServiceError> {
        for (key, value) in vars {
            let invalid = |what: &str| ServiceError::Config(format!("{key}: {value:?} is not a valid {what}"));
            match key.as_str() {
                "INFLUENCE_BASE" => self.base = value.clone(),
                "INFLUENCE_PORT" => self.port = value.parse().map_err(|_| invalid("port"))?,
                "INFLUENCE_FIXTURES" => self.fixtures = Some(PathBuf::from(&value)),
                "INFLUENCE_INTERVAL_HOURS" => {
                    self.interval_hours = value.parse().map_err(|_| invalid("hour count"))?
                }
                "INFLUENCE_GRAPH" => self.graph = Some(PathBuf::from(&value)),
                "INFLUENCE_LOG" => self.log = Some(PathBuf::from(&value)),
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ServiceConfig::from_toml_str("").unwrap();
        assert_eq!(c.port, 8890);
        assert_eq!(c.interval_hours, 96);
        assert_eq!(c.base, "http://www.influencetracker.com/");
    }

    #[test]
    fn toml_then_env() {
        let mut c = ServiceConfig::from_toml_str("port = 9000\nfixtures = \"fx\"\ninterval_hours = 0\n").unwrap();
        assert_eq!((c.port, c.interval_hours), (9000, 0));
        c.apply_env([
            ("INFLUENCE_PORT".to_string(), "9100".to_string()),
            ("INFLUENCE_GRAPH".to_string(), "g.nt".to_string()),
            ("PATH".to_string(), "/bin".to_string()),
        ])
        .unwrap();
        assert_eq!(c.port, 9100);
        assert_eq!(c.fixtures, Some(PathBuf::from("fx")));
        assert_eq!(c.graph, Some(PathBuf::from("g.nt")));
        assert!(c
            .apply_env([("INFLUENCE_PORT".to_string(), "many".to_string())])
            .is_err());
        assert!(ServiceConfig::from_toml_str("colour = 1").is_err());
    }
}
