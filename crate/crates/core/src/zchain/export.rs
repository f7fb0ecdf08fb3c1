//! Sparse text format for integer matrices and a directory layout for whole
//! complexes.
//!
//! ```text
//! zmatrix <rows> <cols> <nnz>
//! <r> <c> <v>        one line per nonzero, 0-based, ascending row-major
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::complex::ZComplex;
use super::matrix::ZMatrix;
use crate::error::{Error, Result};

pub fn write_zmatrix(m: &ZMatrix) -> String {
    let mut out = format!("zmatrix {} {} {}\n", m.rows(), m.cols(), m.nnz());
    for (r, c, v) in m.nonzeros() {
        out.push_str(&format!("{r} {c} {v}\n"));
    }
    out
}

pub fn parse_zmatrix(text: &str) -> Result<ZMatrix> {
    let err = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [tag, rows, cols, nnz] = fields.as_slice() else {
        return Err(err(1, "header must be `zmatrix <rows> <cols> <nnz>`"));
    };
    if *tag != "zmatrix" {
        return Err(err(1, "header must start with `zmatrix`"));
    }
    let num = |s: &str, line: usize| {
        s.parse::<usize>()
            .map_err(|_| err(line, "expected a nonnegative integer"))
    };
    let (rows, cols, nnz) = (num(rows, 1)?, num(cols, 1)?, num(nnz, 1)?);
    let mut m = ZMatrix::zeros(rows, cols);
    let mut last: Option<(usize, usize)> = None;
    let mut count = 0;
    for (k, line) in lines {
        let line_no = k + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        let [r, c, v] = f.as_slice() else {
            return Err(err(line_no, "expected `<row> <col> <value>`"));
        };
        let (r, c) = (num(r, line_no)?, num(c, line_no)?);
        let v: BigInt = v
            .parse()
            .map_err(|_| err(line_no, "expected an integer value"))?;
        if r >= rows || c >= cols {
            return Err(err(line_no, "entry outside the matrix"));
        }
        if last.is_some_and(|p| p >= (r, c)) {
            return Err(err(line_no, "entries must be in ascending row-major order"));
        }
        if v == BigInt::from(0) {
            return Err(err(line_no, "explicit zero entry"));
        }
        last = Some((r, c));
        m.set(r, c, v);
        count += 1;
    }
    if count != nnz {
        return Err(err(
            1,
            &format!("header announces {nnz} entries, found {count}"),
        ));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    /// Free-form descriptive fields (spec, sheaf, column, …).
    pub metadata: BTreeMap<String, String>,
    pub start_degree: i32,
    pub ranks: Vec<usize>,
    pub labels: Option<Vec<Vec<String>>>,
    /// One file per differential, `files[k]` holding `d` out of degree
    /// `start_degree + k`.
    pub files: Vec<String>,
}

/// Writes `manifest.json` and one `d<n>.zmatrix` file per differential.
pub fn export_complex(
    c: &ZComplex,
    dir: &Path,
    metadata: BTreeMap<String, String>,
) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (k, d) in c.differentials().iter().enumerate() {
        let n = c.start() + k as i32;
        let name = format!("d{n}.zmatrix");
        fs::write(dir.join(&name), write_zmatrix(d))?;
        files.push(name);
    }
    let labels = c
        .degrees()
        .map(|n| c.labels(n).map(<[String]>::to_vec))
        .collect::<Option<Vec<_>>>();
    let manifest = Manifest {
        metadata,
        start_degree: c.start(),
        ranks: c.ranks().to_vec(),
        labels,
        files,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}

pub fn import_complex(dir: &Path) -> Result<(ZComplex, Manifest)> {
    let text = fs::read_to_string(dir.join("manifest.json"))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let diffs = manifest
        .files
        .iter()
        .map(|f| parse_zmatrix(&fs::read_to_string(dir.join(f))?))
        .collect::<Result<Vec<_>>>()?;
    let mut c = ZComplex::new(manifest.start_degree, manifest.ranks.clone(), diffs)?;
    if let Some(l) = &manifest.labels {
        c = c.with_labels(l.clone())?;
    }
    Ok((c, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = ZMatrix::from_i64(&[vec![0, 3, 0], vec![-1, 0, 0]]);
        let s = write_zmatrix(&m);
        assert_eq!(s, "zmatrix 2 3 2\n0 1 3\n1 0 -1\n");
        assert_eq!(parse_zmatrix(&s).unwrap(), m);
        assert_eq!(
            parse_zmatrix("zmatrix 0 4 0\n").unwrap(),
            ZMatrix::zeros(0, 4)
        );
    }

    #[test]
    fn malformed_input() {
        assert!(parse_zmatrix("").is_err());
        assert!(parse_zmatrix("matrix 1 1 0").is_err());
        assert!(parse_zmatrix("zmatrix 1 1 1\n0 1 2").is_err());
        assert!(parse_zmatrix("zmatrix 2 2 2\n1 0 2\n0 0 1").is_err());
        assert!(parse_zmatrix("zmatrix 2 2 2\n0 0 2").is_err());
        assert!(parse_zmatrix("zmatrix 1 1 1\n0 0 x").is_err());
    }
}
