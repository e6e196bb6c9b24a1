//! Scenario configuration for `demo`.

use std::path::Path;

use chrono::{DateTime, Utc};
use eticket::policy::{PolicyFile, PolicyUniverse, SatisfiedPolicies, UserAttributes};
use eticket::scheme::TicketTerms;
use serde::Deserialize;

use crate::{Backend, CliError, DEFAULT_PRIME};

/// The built-in scenario: two range policies and four set policies.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/demo.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct DemoConfig {
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default = "default_prime")]
    pub prime: u64,
    #[serde(flatten)]
    pub policies: PolicyFile,
    pub seller: PartyConfig,
    pub user: UserConfig,
    pub ticket: TicketConfig,
    pub validation: ValidationConfig,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PartyConfig {
    pub id: String,
    pub vp: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct UserConfig {
    pub id: String,
    pub vp: String,
    #[serde(default)]
    pub attributes: UserAttributes,
    /// Policies to prove when buying; every policy when absent.
    pub request: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct TicketConfig {
    pub price: String,
    pub serv: String,
    pub vp: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ValidationConfig {
    pub verifiers: [String; 2],
    /// Validation clock; the system clock when absent.
    pub now: Option<DateTime<Utc>>,
}

fn default_backend() -> Backend {
    Backend::Pairing
}

fn default_prime() -> u64 {
    DEFAULT_PRIME
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("built-in config parses")
    }
}

impl DemoConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn universe(&self) -> Result<PolicyUniverse, CliError> {
        Ok(self.policies.clone().into_universe()?)
    }

    pub fn requested(&self) -> SatisfiedPolicies {
        match &self.user.request {
            Some(names) => SatisfiedPolicies::new(names),
            None => SatisfiedPolicies::new(
                self.policies
                    .range
                    .iter()
                    .map(|r| &r.name)
                    .chain(self.policies.set.iter().map(|s| &s.name)),
            ),
        }
    }

    pub fn terms(&self) -> TicketTerms {
        TicketTerms {
            price: self.ticket.price.clone(),
            serv: self.ticket.serv.clone(),
            vp: self.ticket.vp.clone(),
        }
    }

    pub fn now(&self) -> DateTime<Utc> {
        self.validation.now.unwrap_or_else(Utc::now)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_has_two_ranges_and_four_sets() {
        let cfg = DemoConfig::default();
        assert_eq!(cfg.policies.range.len(), 2);
        assert_eq!(cfg.policies.set.len(), 4);
        assert_eq!(cfg.requested().len(), 6);
        assert_eq!(cfg.universe().unwrap().width(), 3);
    }

    #[test]
    fn request_defaults_to_every_policy() {
        let text = DEFAULT_CONFIG.replace(
            "request = [\"age\", \"trips\", \"profession\", \"zone\", \"card\", \"mode\"]\n",
            "",
        );
        let cfg = DemoConfig::parse(&text).unwrap();
        assert!(cfg.user.request.is_none());
        assert_eq!(cfg.requested(), DemoConfig::default().requested());
    }

    #[test]
    fn unknown_backend_is_a_config_error() {
        let text = DEFAULT_CONFIG.replace("backend = \"pairing\"", "backend = \"rsa\"");
        assert!(matches!(DemoConfig::parse(&text), Err(CliError::Config(_))));
    }
}
