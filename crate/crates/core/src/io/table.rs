use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::selection::Adjacency;

pub(crate) fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: line as usize,
        message: message.into(),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => parse_error(path, line, format!("{other:?}")),
    }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_error(path))
}

fn reader(path: &Path, headers: bool) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(io_error(path))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(headers)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn parse_f64(path: &Path, line: u64, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| parse_error(path, line, format!("`{field}` is not a number")))
}

/// Writes a dense matrix without a header, 17 significant digits per entry.
pub fn write_matrix<T: Real>(path: &Path, m: ArrayView2<T>) -> Result<()> {
    let mut out = create(path)?;
    let mut line = String::new();
    for row in m.rows() {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        line.push('\n');
        out.write_all(line.as_bytes()).map_err(io_error(path))?;
    }
    out.flush().map_err(io_error(path))
}

/// Reads a rectangular numeric CSV without a header.
pub fn read_matrix(path: &Path) -> Result<Array2<f64>> {
    let mut rdr = reader(path, false)?;
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(rec.len()),
            Some(c) if c != rec.len() => {
                return Err(parse_error(path, line, format!("expected {c} fields, found {}", rec.len())));
            }
            _ => {}
        }
        for field in rec.iter() {
            values.push(parse_f64(path, line, field)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_error(path, 1, "no rows"))?;
    Array2::from_shape_vec((rows, cols), values).map_err(|e| parse_error(path, 0, e.to_string()))
}

/// One value per line under a single-column header.
pub fn write_vector<T: Real>(path: &Path, header: &str, values: &[T]) -> Result<()> {
    let mut out = create(path)?;
    let mut body = format!("{header}\n");
    for v in values {
        body.push_str(&format!("{v:.16e}\n"));
    }
    out.write_all(body.as_bytes()).map_err(io_error(path))?;
    out.flush().map_err(io_error(path))
}

pub fn read_vector(path: &Path) -> Result<Array1<f64>> {
    let mut rdr = reader(path, true)?;
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != 1 {
            return Err(parse_error(path, line, format!("expected 1 field, found {}", rec.len())));
        }
        values.push(parse_f64(path, line, &rec[0])?);
    }
    Ok(Array1::from(values))
}

/// Writes an `i,j` edge list (1-based, `i < j`). Extra columns, if any, are
/// named in `extra_header` and supplied per edge.
pub fn write_edges(path: &Path, edges: &[(usize, usize)], extra_header: &[&str], extra: &[Vec<String>]) -> Result<()> {
    let mut out = create(path)?;
    let mut body = String::from("i,j");
    for h in extra_header {
        body.push(',');
        body.push_str(h);
    }
    body.push('\n');
    for (idx, &(i, j)) in edges.iter().enumerate() {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        body.push_str(&format!("{},{}", a + 1, b + 1));
        if let Some(cols) = extra.get(idx) {
            for c in cols {
                body.push(',');
                body.push_str(c);
            }
        }
        body.push('\n');
    }
    out.write_all(body.as_bytes()).map_err(io_error(path))?;
    out.flush().map_err(io_error(path))
}

/// Reads the first two columns of an edge list into 0-based pairs.
pub fn read_edges(path: &Path, p: usize) -> Result<Adjacency> {
    let mut rdr = reader(path, true)?;
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.len() < 2 || &header[0] != "i" || &header[1] != "j" {
        return Err(parse_error(path, 1, "expected header starting with `i,j`"));
    }
    let mut adj = Adjacency::empty(p);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() < 2 {
            return Err(parse_error(path, line, "expected at least 2 fields"));
        }
        let node = |s: &str| -> Result<usize> {
            let v: usize = s
                .parse()
                .map_err(|_| parse_error(path, line, format!("`{s}` is not a node index")))?;
            if v == 0 || v > p {
                return Err(parse_error(path, line, format!("node {v} outside 1..={p}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (node(&rec[0])?, node(&rec[1])?);
        if i == j {
            return Err(parse_error(path, line, format!("self-loop at node {}", i + 1)));
        }
        adj.set(i, j, true);
    }
    Ok(adj)
}

pub fn write_json<S: Serialize + ?Sized>(path: &Path, value: &S) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    out.write_all(b"\n").map_err(io_error(path))?;
    out.flush().map_err(io_error(path))
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D> {
    let file = File::open(path).map_err(io_error(path))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Undirected DOT graph with nodes `1..=p`.
pub fn to_dot(adj: &Adjacency, name: &str) -> String {
    let mut s = format!("graph {name} {{\n");
    for k in 1..=adj.p() {
        s.push_str(&format!("  {k};\n"));
    }
    for (i, j) in adj.edges() {
        s.push_str(&format!("  {} -- {};\n", i + 1, j + 1));
    }
    s.push_str("}\n");
    s
}

pub fn write_dot(path: &Path, adj: &Adjacency, name: &str) -> Result<()> {
    std::fs::write(path, to_dot(adj, name)).map_err(io_error(path))
}
