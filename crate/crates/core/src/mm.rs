//! Matrix Market reader and writer (real or integer fields; array or
//! coordinate storage; general or symmetric).
//!
//! Values are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every `f64` bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{CsrMatrix, SpdOperator};

#[derive(Clone, Debug, PartialEq)]
pub enum MmObject {
    Dense(Matrix),
    Sparse(CsrMatrix),
}

impl MmObject {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            MmObject::Dense(m) => m.shape(),
            MmObject::Sparse(s) => (s.rows(), s.cols()),
        }
    }

    pub fn into_matrix(self) -> Matrix {
        match self {
            MmObject::Dense(m) => m,
            MmObject::Sparse(s) => s.to_dense(),
        }
    }

    /// Coordinate files become sparse operators, array files dense ones.
    pub fn into_operator(self) -> Result<SpdOperator> {
        match self {
            MmObject::Dense(m) => SpdOperator::dense(m),
            MmObject::Sparse(s) => SpdOperator::sparse(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Storage {
    Array,
    Coordinate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MmObject> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_market(&text)
}

pub fn write_matrix_market(path: impl AsRef<Path>, object: &MmObject) -> Result<()> {
    let path = path.as_ref();
    let text = match object {
        MmObject::Dense(m) => format_dense(m),
        MmObject::Sparse(s) => format_coordinate(s),
    };
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_matrix_market(text: &str) -> Result<MmObject> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("bad header `{header}`")));
    }
    let storage = match tokens[2].as_str() {
        "array" => Storage::Array,
        "coordinate" => Storage::Coordinate,
        other => return Err(Error::UnsupportedFormat(format!("storage `{other}`"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(Error::UnsupportedFormat(format!("field `{other}`"))),
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(Error::UnsupportedFormat(format!("symmetry `{other}`"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| parse_err(size_line, format!("`{t}`: {e}")))
        })
        .collect::<Result<_>>()?;

    match storage {
        Storage::Array => {
            let [rows, cols] = dims[..] else {
                return Err(parse_err(size_line, "array size line needs `rows cols`"));
            };
            if symmetry == Symmetry::Symmetric && rows != cols {
                return Err(parse_err(size_line, "symmetric matrix must be square"));
            }
            let mut m = Matrix::zeros(rows, cols);
            // column-major; symmetric files store the lower triangle
            let positions: Vec<(usize, usize)> = match symmetry {
                Symmetry::General => (0..cols)
                    .flat_map(|j| (0..rows).map(move |i| (i, j)))
                    .collect(),
                Symmetry::Symmetric => (0..cols)
                    .flat_map(|j| (j..rows).map(move |i| (i, j)))
                    .collect(),
            };
            let mut count = 0;
            for (lineno, line) in body {
                for tok in line.split_whitespace() {
                    let &(i, j) = positions.get(count).ok_or_else(|| {
                        parse_err(lineno, "more values than the size line declares")
                    })?;
                    let v = parse_value(tok, lineno)?;
                    m[(i, j)] = v;
                    if symmetry == Symmetry::Symmetric {
                        m[(j, i)] = v;
                    }
                    count += 1;
                }
            }
            if count != positions.len() {
                return Err(parse_err(
                    text.lines().count(),
                    format!("expected {} values, found {count}", positions.len()),
                ));
            }
            Ok(MmObject::Dense(m))
        }
        Storage::Coordinate => {
            let [rows, cols, nnz] = dims[..] else {
                return Err(parse_err(
                    size_line,
                    "coordinate size line needs `rows cols nnz`",
                ));
            };
            let mut trip = Vec::with_capacity(nnz * 2);
            let mut count = 0;
            for (lineno, line) in body {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(parse_err(lineno, "coordinate entry needs `row col value`"));
                }
                let i = parse_index(toks[0], rows, lineno)?;
                let j = parse_index(toks[1], cols, lineno)?;
                let v = parse_value(toks[2], lineno)?;
                trip.push((i, j, v));
                if symmetry == Symmetry::Symmetric && i != j {
                    trip.push((j, i, v));
                }
                count += 1;
            }
            if count != nnz {
                return Err(parse_err(
                    text.lines().count(),
                    format!("expected {nnz} entries, found {count}"),
                ));
            }
            Ok(MmObject::Sparse(CsrMatrix::from_triplets(
                rows, cols, &trip,
            )?))
        }
    }
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|e| parse_err(line, format!("value `{tok}`: {e}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

fn parse_index(tok: &str, bound: usize, line: usize) -> Result<usize> {
    let i: usize = tok
        .parse()
        .map_err(|e| parse_err(line, format!("index `{tok}`: {e}")))?;
    if i == 0 || i > bound {
        return Err(parse_err(line, format!("index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

/// Dense array format, column-major, general symmetry.
pub fn format_dense(m: &Matrix) -> String {
    let mut s = String::with_capacity(m.as_slice().len() * 24 + 64);
    s.push_str("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for v in m.as_slice() {
        let _ = writeln!(s, "{v:e}");
    }
    s
}

/// Coordinate format. Exactly symmetric matrices are written with the
/// `symmetric` qualifier (lower triangle only).
pub fn format_coordinate(a: &CsrMatrix) -> String {
    let symmetric = a.rows() == a.cols() && is_symmetric(a);
    let entries: Vec<(usize, usize, f64)> = a
        .triplets()
        .filter(|&(i, j, _)| !symmetric || i >= j)
        .collect();
    let mut s = String::with_capacity(entries.len() * 32 + 64);
    let _ = writeln!(
        s,
        "%%MatrixMarket matrix coordinate real {}",
        if symmetric { "symmetric" } else { "general" }
    );
    let _ = writeln!(s, "{} {} {}", a.rows(), a.cols(), entries.len());
    for (i, j, v) in entries {
        let _ = writeln!(s, "{} {} {v:e}", i + 1, j + 1);
    }
    s
}

fn is_symmetric(a: &CsrMatrix) -> bool {
    let t = {
        let trip: Vec<_> = a.triplets().map(|(i, j, v)| (j, i, v)).collect();
        CsrMatrix::from_triplets(a.cols(), a.rows(), &trip).expect("transpose in range")
    };
    t == *a
}
