//! Static prompt blocklist.
//!
//! Terms match case-insensitively as whole words (or whole phrases): the
//! characters on either side of a match must be non-word characters or the
//! ends of the prompt.

use std::path::Path;

use regex::Regex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockCheck {
    Pass,
    Blocked(String),
}

#[derive(Debug, Clone, Default)]
pub struct Blocklist {
    terms: Vec<(String, Regex)>,
}

impl Blocklist {
    pub fn new<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let terms = terms
            .into_iter()
            .map(|t| t.as_ref().trim().to_string())
            .filter(|t| !t.is_empty())
            .map(|t| {
                let pattern = format!(r"(?i)(?:^|\W){}(?:\W|$)", regex::escape(&t));
                let re = Regex::new(&pattern).expect("escaped term is a valid pattern");
                (t, re)
            })
            .collect();
        Self { terms }
    }

    /// One term per line; blank lines and `#` comments are ignored.
    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::new(
            text.lines().filter(|l| !l.trim_start().starts_with('#')),
        ))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check(&self, prompt: &str) -> BlockCheck {
        blocklist_check(prompt, self)
    }
}

/// First listed term found in `prompt`, if any.
pub fn blocklist_check(prompt: &str, list: &Blocklist) -> BlockCheck {
    list.terms
        .iter()
        .find(|(_, re)| re.is_match(prompt))
        .map_or(BlockCheck::Pass, |(t, _)| BlockCheck::Blocked(t.clone()))
}
