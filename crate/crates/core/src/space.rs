//! Names of convex spaces and axial lines.

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the carrier space that surrounds a settlement.
pub const DEFAULT_ROOT: &str = "outside";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceIdError {
    #[error("empty space name")]
    Empty,
    #[error("invalid character {ch:?} in space name {name:?}")]
    InvalidChar { name: String, ch: char },
}

/// Identifier of a space: a non-empty token of ASCII letters, digits and
/// underscores. Comparison is case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SpaceId(String);

impl SpaceId {
    pub fn new(name: impl Into<String>) -> Result<Self, SpaceIdError> {
        let name = name.into();
        if name.is_empty() {
            return Err(SpaceIdError::Empty);
        }
        if let Some(ch) = name.chars().find(|c| !is_token_char(*c)) {
            return Err(SpaceIdError::InvalidChar { name, ch });
        }
        Ok(SpaceId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the name is also a valid unquoted Prolog atom
    /// (`[a-z][a-zA-Z0-9_]*`).
    pub fn is_prolog_atom(&self) -> bool {
        self.0.as_bytes()[0].is_ascii_lowercase()
    }
}

pub(crate) fn is_token_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SpaceId {
    type Err = SpaceIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpaceId::new(s)
    }
}

impl TryFrom<String> for SpaceId {
    type Error = SpaceIdError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        SpaceId::new(s)
    }
}

impl From<SpaceId> for String {
    fn from(id: SpaceId) -> String {
        id.0
    }
}

impl AsRef<str> for SpaceId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for SpaceId {
    fn borrow(&self) -> &str {
        &self.0
    }
}
