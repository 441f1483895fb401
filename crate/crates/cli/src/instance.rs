//! JSON instance files. Integers stay integers; rationals travel as `"p/q"`.

use proxflat::linalg::{rank, IntMatrix};
use proxflat::polyhedra::HPolyhedron;
use proxflat::rational::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<i64>>,
    /// Square transform for the transfer and two-level checks.
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b_mat: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub metadata: Metadata,
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub file: InstanceFile,
    pub p: HPolyhedron,
    pub c: Option<Vec<Rational>>,
    pub b_mat: Option<IntMatrix>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {msg}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

impl InstanceFile {
    pub fn from_parts(p: &HPolyhedron, c: Option<&[Rational]>, metadata: Metadata) -> Self {
        Self {
            n: p.n(),
            m: p.m(),
            a: p.a().to_rows(),
            b: p.b().to_vec(),
            c: c.map(|c| c.iter().map(format_rational).collect()),
            alpha: None,
            b_mat: None,
            metadata,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    fn validate(self, path: &str) -> Result<Instance, LoadError> {
        let invalid = |msg: String| LoadError::Invalid {
            path: path.to_string(),
            msg,
        };
        if self.a.len() != self.m || self.b.len() != self.m {
            return Err(invalid(format!(
                "m = {} but A has {} rows and b has {} entries",
                self.m,
                self.a.len(),
                self.b.len()
            )));
        }
        if let Some(i) = self.a.iter().position(|r| r.len() != self.n) {
            return Err(invalid(format!(
                "row {i} of A has {} entries, expected n = {}",
                self.a[i].len(),
                self.n
            )));
        }
        let a = IntMatrix::from_rows_with_cols(&self.a, self.n).map_err(|e| invalid(e.to_string()))?;
        if rank(&a) != self.n {
            return Err(invalid("A does not have full column rank".into()));
        }
        let c = match &self.c {
            Some(c) if c.len() != self.n => {
                return Err(invalid(format!("c has {} entries, expected {}", c.len(), self.n)))
            }
            Some(c) => Some(
                c.iter()
                    .enumerate()
                    .map(|(i, s)| parse_rational(s).map_err(|e| invalid(format!("c[{i}]: {}", e.0))))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        if let Some(alpha) = &self.alpha {
            if alpha.len() != self.n {
                return Err(invalid(format!(
                    "alpha has {} entries, expected {}",
                    alpha.len(),
                    self.n
                )));
            }
        }
        let b_mat = match &self.b_mat {
            Some(rows) if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) => {
                return Err(invalid(format!("B must be {0} x {0}", self.n)))
            }
            Some(rows) => Some(IntMatrix::from_rows_with_cols(rows, self.n).map_err(|e| invalid(e.to_string()))?),
            None => None,
        };
        let p = HPolyhedron::new(a, self.b.clone()).map_err(|e| invalid(e.to_string()))?;
        Ok(Instance {
            file: self,
            p,
            c,
            b_mat,
        })
    }
}

pub fn parse_instance(text: &str, path: &str) -> Result<Instance, LoadError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| LoadError::Syntax {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    file.validate(path)
}

pub fn load_instance(path: &Path) -> Result<Instance, LoadError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_instance(&text, &shown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proxflat::rational::ratio;

    const TRIANGLE: &str = r#"{"n": 2, "m": 3, "A": [[1, 2], [-1, 0], [0, -1]], "b": [1, 0, 0], "c": ["0", "1/2"]}"#;

    #[test]
    fn round_trip() {
        let inst = parse_instance(TRIANGLE, "t").unwrap();
        assert_eq!(inst.c.as_deref(), Some(&[ratio(0, 1), ratio(1, 2)][..]));
        let again = parse_instance(&inst.file.to_json(), "t").unwrap();
        assert_eq!(again.file, inst.file);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_instance("{\n  \"n\": 2,\n  \"m\": ]\n}", "bad").unwrap_err();
        assert!(matches!(err, LoadError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn shape_and_rank_are_validated() {
        let short = r#"{"n": 2, "m": 3, "A": [[1, 2], [-1, 0]], "b": [1, 0, 0]}"#;
        assert!(matches!(parse_instance(short, "x"), Err(LoadError::Invalid { .. })));
        let flat = r#"{"n": 2, "m": 2, "A": [[1, 2], [2, 4]], "b": [1, 0]}"#;
        assert!(parse_instance(flat, "x").unwrap_err().to_string().contains("rank"));
        let bad_c = r#"{"n": 2, "m": 3, "A": [[1, 2], [-1, 0], [0, -1]], "b": [1, 0, 0], "c": ["1/0", "1"]}"#;
        assert!(parse_instance(bad_c, "x").unwrap_err().to_string().contains("c[0]"));
    }
}
