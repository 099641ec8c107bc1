//! Dataset manifests: a small TOML file naming a CSV, its label column and k.
//!
//! ```toml
//! name = "iris"
//! path = "iris.csv"        # relative to the manifest
//! label_column = "species" # or a zero-based index
//! k = 3
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dataset_io::LabelColumn;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: Option<String>,
    path: PathBuf,
    label_column: Option<RawLabel>,
    k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub name: Option<String>,
    /// Resolved against the manifest's directory.
    pub path: PathBuf,
    pub label_column: Option<LabelColumn>,
    pub k: Option<usize>,
}

impl Manifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw: RawManifest = toml::from_str(text)?;
        let path = if raw.path.is_absolute() {
            raw.path
        } else {
            base.join(raw.path)
        };
        Ok(Manifest {
            name: raw.name,
            path,
            label_column: raw.label_column.map(|l| match l {
                RawLabel::Index(i) => LabelColumn::Index(i),
                RawLabel::Name(n) => LabelColumn::Name(n),
            }),
            k: raw.k,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_and_indexed_labels() {
        let m = Manifest::parse(
            "name = \"iris\"\npath = \"iris.csv\"\nlabel_column = \"species\"\nk = 3\n",
            Path::new("/data"),
        )
        .unwrap();
        assert_eq!(m.path, PathBuf::from("/data/iris.csv"));
        assert_eq!(m.label_column, Some(LabelColumn::Name("species".into())));
        assert_eq!(m.k, Some(3));

        let m = Manifest::parse("path = \"/x.csv\"\nlabel_column = 4\n", Path::new("/data")).unwrap();
        assert_eq!(m.path, PathBuf::from("/x.csv"));
        assert_eq!(m.label_column, Some(LabelColumn::Index(4)));
        assert_eq!(m.name, None);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Manifest::parse("path = \"a\"\nklusters = 3\n", Path::new(".")).is_err());
        assert!(Manifest::parse("k = 3\n", Path::new(".")).is_err());
    }
}
