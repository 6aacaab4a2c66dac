use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use ptssh::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::manifest::{RunManifest, Schema};

/// Row-major `[re, im]` pairs.
pub type Entries = Vec<Vec<[f64; 2]>>;

pub fn to_entries(m: &ComplexMatrix) -> Entries {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn from_entries(n: usize, entries: &Entries) -> anyhow::Result<ComplexMatrix> {
    if entries.len() != n || entries.iter().any(|r| r.len() != n) {
        bail!("matrix entries do not form an {n}x{n} array");
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::new(entries[i][j][0], entries[i][j][1])
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Entries,
    pub manifest: RunManifest,
}

impl MatrixFile {
    pub fn new(m: &ComplexMatrix, manifest: RunManifest) -> Self {
        Self {
            n: m.nrows(),
            entries: to_entries(m),
            manifest,
        }
    }

    pub fn matrix(&self) -> anyhow::Result<ComplexMatrix> {
        from_entries(self.n, &self.entries)
    }
}

pub fn read_matrix(path: &Path) -> anyhow::Result<(ComplexMatrix, RunManifest)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((file.matrix()?, file.manifest))
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Shortest round-trip form; non-finite values as `inf`, `-inf`, `nan`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

/// CSV document with the manifest on a leading `#` line and a header row.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(manifest: &RunManifest, schema: &Schema) -> anyhow::Result<Self> {
        let mut text = String::new();
        writeln!(text, "# {}", serde_json::to_string(manifest)?)?;
        writeln!(text, "{}", schema.columns.join(","))?;
        Ok(Self {
            text,
            columns: schema.columns.len(),
        })
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn emit(out: Option<&Path>, payload: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, payload).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
