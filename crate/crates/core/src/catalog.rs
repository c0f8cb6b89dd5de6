//! Font catalog and category taxonomy.
//!
//! A catalog is a single JSON document with two arrays, `categories` and
//! `fonts`. Fonts reference categories by id through their `tags`. The
//! catalog is validated on load and immutable afterwards.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An expert-defined mood/appearance label such as `fun` or `elegant`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub id: String,
    pub name: String,
    /// Usage description whose embedding represents the category.
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FontRecord {
    pub id: String,
    pub family: String,
    pub display_name: String,
    /// Path to a scalable font file. Optional at load time; glyph stages
    /// report a per-font error when it is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glyph_source: Option<PathBuf>,
    pub tags: BTreeSet<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub categories: Vec<Category>,
    pub fonts: Vec<FontRecord>,
    /// Directory the catalog was loaded from; relative glyph paths resolve against it.
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateCategoryId(String),
    DuplicateId(String),
    EmptyDescription(String),
    EmptyTags(String),
    UnknownTag { font: String, tag: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateCategoryId(id) => write!(f, "duplicate category id `{id}`"),
            Violation::DuplicateId(id) => write!(f, "duplicate font id `{id}`"),
            Violation::EmptyDescription(id) => write!(f, "category `{id}` has an empty description"),
            Violation::EmptyTags(id) => write!(f, "font `{id}` has no tags"),
            Violation::UnknownTag { font, tag } => {
                write!(f, "font `{font}` references unknown category `{tag}`")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed catalog: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid catalog: {0}")]
    Validation(Violation),
}

impl Catalog {
    pub fn new(categories: Vec<Category>, fonts: Vec<FontRecord>) -> Self {
        Self {
            categories,
            fonts,
            base_dir: None,
        }
    }

    /// Parses and validates a catalog document.
    pub fn from_json_str(text: &str) -> Result<Self, CatalogError> {
        let catalog: Catalog = serde_json::from_str(text)?;
        if let Some(v) = validate_catalog(&catalog).into_iter().next() {
            return Err(CatalogError::Validation(v));
        }
        Ok(catalog)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn font(&self, id: &str) -> Option<&FontRecord> {
        self.fonts.iter().find(|f| f.id == id)
    }

    pub fn category(&self, id: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.id == id)
    }

    /// Glyph source of `font`, joined onto the catalog directory when relative.
    pub fn glyph_path(&self, font: &FontRecord) -> Option<PathBuf> {
        let src = font.glyph_source.as_ref()?;
        match &self.base_dir {
            Some(base) if src.is_relative() => Some(base.join(src)),
            _ => Some(src.clone()),
        }
    }

    pub fn base_dir(&self) -> Option<&Path> {
        self.base_dir.as_deref()
    }
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut catalog = Catalog::from_json_str(&text)?;
    catalog.base_dir = path.parent().map(Path::to_path_buf);
    Ok(catalog)
}

/// Lists every invariant violation in `catalog`, in document order.
pub fn validate_catalog(catalog: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut category_ids = HashSet::new();
    for c in &catalog.categories {
        if !category_ids.insert(c.id.as_str()) {
            out.push(Violation::DuplicateCategoryId(c.id.clone()));
        }
        if c.description.trim().is_empty() {
            out.push(Violation::EmptyDescription(c.id.clone()));
        }
    }
    let mut font_ids = HashSet::new();
    for f in &catalog.fonts {
        if !font_ids.insert(f.id.as_str()) {
            out.push(Violation::DuplicateId(f.id.clone()));
        }
        if f.tags.is_empty() {
            out.push(Violation::EmptyTags(f.id.clone()));
        }
        for tag in &f.tags {
            if !category_ids.contains(tag.as_str()) {
                out.push(Violation::UnknownTag {
                    font: f.id.clone(),
                    tag: tag.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(id: &str) -> Category {
        Category {
            id: id.into(),
            name: id.to_uppercase(),
            description: format!("{id} fonts"),
        }
    }

    fn font(id: &str, tags: &[&str]) -> FontRecord {
        FontRecord {
            id: id.into(),
            family: format!("{id} family"),
            display_name: format!("Font {id}"),
            glyph_source: None,
            tags: tags.iter().map(|t| t.to_string()).collect(),
        }
    }

    #[test]
    fn minimal_catalog_loads() {
        let text = r#"{"categories":[{"id":"fun","name":"Fun","description":"playful"}],
            "fonts":[{"id":"A","family":"A","display_name":"Font A","glyph_source":"a.ttf","tags":["fun"]}]}"#;
        let c = Catalog::from_json_str(text).unwrap();
        assert_eq!(c.categories.len(), 1);
        assert_eq!(c.fonts.len(), 1);
        assert!(validate_catalog(&c).is_empty());
    }

    #[test]
    fn dangling_tag_is_reported_with_ids() {
        let text = r#"{"categories":[{"id":"fun","name":"Fun","description":"playful"}],
            "fonts":[{"id":"A","family":"A","display_name":"Font A","tags":["wedding"]}]}"#;
        match Catalog::from_json_str(text) {
            Err(CatalogError::Validation(Violation::UnknownTag { font, tag })) => {
                assert_eq!((font.as_str(), tag.as_str()), ("A", "wedding"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(
            Catalog::from_json_str("{\"categories\": ["),
            Err(CatalogError::Parse(_))
        ));
    }

    #[test]
    fn duplicate_and_empty_tag_violations() {
        let c = Catalog::new(vec![cat("fun")], vec![font("A", &["fun"]), font("A", &["fun"])]);
        assert_eq!(validate_catalog(&c), vec![Violation::DuplicateId("A".into())]);

        let c = Catalog::new(vec![cat("fun")], vec![font("H", &[])]);
        assert_eq!(validate_catalog(&c), vec![Violation::EmptyTags("H".into())]);

        let mut empty = cat("x");
        empty.description = "  ".into();
        let c = Catalog::new(vec![empty, cat("x")], vec![]);
        assert_eq!(
            validate_catalog(&c),
            vec![
                Violation::EmptyDescription("x".into()),
                Violation::DuplicateCategoryId("x".into())
            ]
        );
    }

    #[test]
    fn category_ids_are_case_sensitive() {
        let c = Catalog::new(vec![cat("Fun")], vec![font("A", &["fun"])]);
        assert_eq!(validate_catalog(&c).len(), 1);
    }

    #[test]
    fn relative_glyph_paths_resolve_against_catalog_dir() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("catalog.json");
        let mut f = font("A", &["fun"]);
        f.glyph_source = Some("fonts/a.ttf".into());
        let c = Catalog::new(vec![cat("fun")], vec![f]);
        std::fs::write(&path, c.to_json_string()).unwrap();
        let loaded = load_catalog(&path).unwrap();
        assert_eq!(
            loaded.glyph_path(&loaded.fonts[0]).unwrap(),
            dir.path().join("fonts/a.ttf")
        );
    }
}
