//! JSON channel files.
//!
//! ```json
//! { "name": "two-user", "K": 2,
//!   "receivers": [ { "states": [["1", "0.5"], ["0.8", 0.2]] },
//!                  { "states": [["0.5", "1"]] } ],
//!   "targets": [["0.5", "0.5"]] }
//! ```
//!
//! Levels may be strings or JSON numbers; numbers keep their literal text so
//! `0.1` is read as exactly one tenth.

use std::path::Path;

use compound_tin::channel::ChannelError;
use compound_tin::rational::{parse_rational, render};
use compound_tin::{CompoundChannel, GdofTuple, Q};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Level {
    Text(String),
    Number(serde_json::Number),
}

impl Level {
    fn literal(&self) -> String {
        match self {
            Level::Text(s) => s.clone(),
            Level::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverEntry {
    pub states: Vec<Vec<Level>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "K")]
    pub users: usize,
    pub receivers: Vec<ReceiverEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<Vec<Level>>>,
}

/// A parsed file: the raw document plus its validated channel and targets.
pub struct Loaded {
    pub name: Option<String>,
    pub channel: CompoundChannel,
    pub targets: Vec<GdofTuple>,
}

fn parse_level(level: &Level, context: &str) -> Result<Q, CliError> {
    let text = level.literal();
    parse_rational(&text).map_err(|e| CliError::Parse(format!("{context}: {e}")))
}

impl ChannelFile {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{origin}: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Converts the levels to rationals (parse errors) and validates the
    /// channel and targets (validation errors).
    pub fn load(&self) -> Result<Loaded, CliError> {
        let receivers = self
            .receivers
            .iter()
            .enumerate()
            .map(|(k, r)| {
                r.states
                    .iter()
                    .enumerate()
                    .map(|(l, s)| {
                        s.iter()
                            .enumerate()
                            .map(|(j, v)| {
                                parse_level(v, &format!("receiver {} state {} entry {}", k + 1, l + 1, j + 1))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<Vec<Q>>>, _>>()?;
        let channel = CompoundChannel::new(self.users, receivers).map_err(|e: ChannelError| CliError::Invalid(e.to_string()))?;
        let targets = self
            .targets
            .iter()
            .flatten()
            .enumerate()
            .map(|(n, t)| {
                let values = t
                    .iter()
                    .map(|v| parse_level(v, &format!("target {}", n + 1)))
                    .collect::<Result<Vec<_>, _>>()?;
                check_target(&channel, values)
            })
            .collect::<Result<_, _>>()?;
        Ok(Loaded {
            name: self.name.clone(),
            channel,
            targets,
        })
    }

    /// File describing `channel` with every level as an exact string.
    pub fn from_channel(name: Option<String>, channel: &CompoundChannel) -> Self {
        let receivers = channel
            .receivers()
            .iter()
            .map(|states| ReceiverEntry {
                states: states
                    .iter()
                    .map(|s| s.iter().map(|v| Level::Text(render(v))).collect())
                    .collect(),
            })
            .collect();
        ChannelFile {
            name,
            users: channel.user_count(),
            receivers,
            targets: None,
        }
    }
}

pub fn check_target(channel: &CompoundChannel, values: Vec<Q>) -> Result<GdofTuple, CliError> {
    if values.len() != channel.user_count() {
        return Err(CliError::Invalid(format!(
            "target has {} entries, channel has {} users",
            values.len(),
            channel.user_count()
        )));
    }
    GdofTuple::new(values).map_err(|e| CliError::Invalid(e.to_string()))
}

/// Parses `d1,d2,...`.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<Q>, CliError> {
    text.split(',')
        .map(|part| parse_rational(part.trim()).map_err(|e| CliError::Parse(format!("{what}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_their_literal_text() {
        let file = ChannelFile::from_json(r#"{"K": 1, "receivers": [{"states": [[0.1]]}]}"#, "inline").unwrap();
        let loaded = file.load().unwrap();
        assert_eq!(*loaded.channel.level(0, 0, 0), Q::new(1.into(), 10.into()));
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(
            ChannelFile::from_json("{\"K\": 1,", "inline"),
            Err(CliError::Parse(_))
        ));
        let negative = ChannelFile::from_json(r#"{"K": 1, "receivers": [{"states": [["-1"]]}]}"#, "inline").unwrap();
        assert!(matches!(negative.load(), Err(CliError::Invalid(_))));
        let garbage = ChannelFile::from_json(r#"{"K": 1, "receivers": [{"states": [["x"]]}]}"#, "inline").unwrap();
        assert!(matches!(garbage.load(), Err(CliError::Parse(_))));
    }

    #[test]
    fn round_trip() {
        let file = ChannelFile::from_json(
            r#"{"K": 2, "receivers": [{"states": [["1", "0.5"], ["0.8", "0.2"]]}, {"states": [["0.5", "1"]]}]}"#,
            "inline",
        )
        .unwrap();
        let channel = file.load().unwrap().channel;
        let text = serde_json::to_string(&ChannelFile::from_channel(None, &channel)).unwrap();
        let again = ChannelFile::from_json(&text, "inline").unwrap().load().unwrap().channel;
        assert_eq!(again, channel);
    }
}
