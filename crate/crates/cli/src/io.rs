//! Complex files: JSON `{"facets": [[..]], "labels": {..}}` or plain text with
//! one facet per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use topocert::{Simplex, SimplicialComplex, Vertex};

use crate::Fail;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A complex plus optional human-readable vertex names.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub facets: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<Vertex, String>,
}

impl ComplexFile {
    pub fn new(c: &SimplicialComplex) -> Self {
        ComplexFile { facets: c.facets().iter().map(|f| f.vertices().to_vec()).collect(), labels: BTreeMap::new() }
    }

    pub fn with_labels(c: &SimplicialComplex, labels: BTreeMap<Vertex, String>) -> Self {
        ComplexFile { labels, ..Self::new(c) }
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_facets(self.facets.iter().map(|f| Simplex::new(f.iter().copied())))
    }

    /// Name of `v`, falling back to its number.
    pub fn label(&self, v: Vertex) -> String {
        self.labels.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    /// Canonical form: facets re-maximalized and sorted, labels restricted
    /// to vertices that occur.
    pub fn canonical(&self) -> Self {
        let c = self.complex();
        let verts = c.vertices();
        let labels = self.labels.iter().filter(|(v, _)| verts.binary_search(v).is_ok()).map(|(&v, s)| (v, s.clone()));
        ComplexFile::with_labels(&c, labels.collect())
    }

    pub fn parse(name: &str, text: &str) -> Result<Self, Fail> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Fail::data(format!("{name}:{}:{}: {e}", e.line(), e.column())))
        } else {
            parse_text(name, text)
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("serializable") + "\n",
            Format::Text => {
                let mut out = String::new();
                for (v, l) in &self.labels {
                    writeln!(out, "#label {v} {l}").unwrap();
                }
                for f in &self.facets {
                    let line: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "{}", line.join(" ")).unwrap();
                }
                out
            }
        }
    }
}

fn parse_text(name: &str, text: &str) -> Result<ComplexFile, Fail> {
    let mut file = ComplexFile::default();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("#label") {
            let rest = rest.trim_start();
            let (id, label) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let v = id
                .parse::<Vertex>()
                .map_err(|_| Fail::data(format!("{name}:{lineno}: bad vertex id `{id}` in label line")))?;
            file.labels.insert(v, label.trim().to_string());
            continue;
        }
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let facet = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Vertex>()
                    .map_err(|_| Fail::data(format!("{name}:{lineno}: expected a vertex number, found `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        file.facets.push(facet);
    }
    Ok(file)
}

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &Path) -> Result<(String, String), Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Fail::no_input(format!("stdin: {e}")))?;
        return Ok(("<stdin>".into(), s));
    }
    let name = path.display().to_string();
    let s = std::fs::read_to_string(path).map_err(|e| Fail::no_input(format!("{name}: {e}")))?;
    Ok((name, s))
}

pub fn load(path: &Path) -> Result<ComplexFile, Fail> {
    let (name, text) = read_source(path)?;
    ComplexFile::parse(&name, &text)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), Fail> {
    std::fs::write(path, contents).map_err(|e| Fail::io(format!("{}: {e}", path.display())))
}
