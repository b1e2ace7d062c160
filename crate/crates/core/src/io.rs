//! FHF1 field files and CSV export.
//!
//! An FHF1 file is a short text header followed by a blank line and the
//! values as little-endian `f64`, time index slowest:
//!
//! ```text
//! FHF1
//! dims = 1
//! nodes = 64 64
//! extents = 2 2
//! normalization = unitary-riemann
//!
//! <binary>
//! ```
//!
//! `extents` are the half periods `L_t L_x`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{Field, NORMALIZATION_TAG};
use crate::grid::GridConfig;
use crate::scalar::Real;

pub const FHF1_MAGIC: &str = "FHF1";

fn io_err(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_fhf1<T: Real, W: Write>(mut w: W, field: &Field<T>) -> Result<()> {
    let g = &field.grid;
    write!(
        w,
        "{FHF1_MAGIC}\ndims = {}\nnodes = {} {}\nextents = {} {}\nnormalization = {NORMALIZATION_TAG}\n\n",
        g.n_space_dims,
        g.nodes_time,
        g.nodes_space,
        g.half_period_time.to_f64_lossy(),
        g.half_period_space.to_f64_lossy(),
    )
    .map_err(io_err)?;
    let mut buf = Vec::with_capacity(field.values.len() * 8);
    for v in &field.values {
        buf.extend_from_slice(&v.to_f64_lossy().to_le_bytes());
    }
    w.write_all(&buf).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn read_fhf1<T: Real, R: Read>(r: R) -> Result<Field<T>> {
    let mut r = BufReader::new(r);
    let mut header = Vec::new();
    loop {
        let mut line = String::new();
        if r.read_line(&mut line).map_err(io_err)? == 0 {
            return Err(Error::Format("header ends before the blank line".into()));
        }
        let line = line.trim_end_matches(['\n', '\r']).to_string();
        if line.is_empty() {
            break;
        }
        header.push(line);
    }
    if header.first().map(String::as_str) != Some(FHF1_MAGIC) {
        return Err(Error::Format(format!("missing {FHF1_MAGIC} magic")));
    }
    let mut dims = None;
    let mut nodes = None;
    let mut extents = None;
    let mut norm = None;
    for (i, line) in header.iter().enumerate().skip(1) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("header line {}: expected key = value", i + 1)))?;
        let value = value.trim();
        let bad = |what: &str| Error::Format(format!("header line {}: bad {what} '{value}'", i + 1));
        match key.trim() {
            "dims" => dims = Some(value.parse::<usize>().map_err(|_| bad("dims"))?),
            "nodes" => {
                let v: Vec<usize> = value
                    .split_whitespace()
                    .map(|p| p.parse().map_err(|_| bad("nodes")))
                    .collect::<Result<_>>()?;
                if v.len() != 2 {
                    return Err(bad("nodes"));
                }
                nodes = Some((v[0], v[1]));
            }
            "extents" => {
                let v: Vec<f64> = value
                    .split_whitespace()
                    .map(|p| p.parse().map_err(|_| bad("extents")))
                    .collect::<Result<_>>()?;
                if v.len() != 2 {
                    return Err(bad("extents"));
                }
                extents = Some((v[0], v[1]));
            }
            "normalization" => norm = Some(value.to_string()),
            other => return Err(Error::Format(format!("header line {}: unknown key '{other}'", i + 1))),
        }
    }
    let missing = |k: &str| Error::Format(format!("header lacks '{k}'"));
    let dims = dims.ok_or_else(|| missing("dims"))?;
    let (nt, nx) = nodes.ok_or_else(|| missing("nodes"))?;
    let (lt, lx) = extents.ok_or_else(|| missing("extents"))?;
    let norm = norm.ok_or_else(|| missing("normalization"))?;
    if norm != NORMALIZATION_TAG {
        return Err(Error::Format(format!(
            "normalization '{norm}' differs from '{NORMALIZATION_TAG}'"
        )));
    }
    let grid = GridConfig::new(dims, T::lit(lt), T::lit(lx), nt, nx).map_err(|e| Error::Format(e.to_string()))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(io_err)?;
    if bytes.len() != grid.len() * 8 {
        return Err(Error::Format(format!(
            "expected {} values, found {} bytes",
            grid.len(),
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8-byte chunk"))))
        .collect();
    Field::from_values(&grid, values)
}

pub fn save_fhf1<T: Real>(path: impl AsRef<Path>, field: &Field<T>) -> Result<()> {
    write_fhf1(BufWriter::new(File::create(path).map_err(io_err)?), field)
}

pub fn load_fhf1<T: Real>(path: impl AsRef<Path>) -> Result<Field<T>> {
    read_fhf1(File::open(path).map_err(io_err)?)
}

/// One row per node: `t, x, value` (`t, x1, x2, value` in two space dimensions).
pub fn write_field_csv<T: Real, W: Write>(w: W, field: &Field<T>) -> Result<()> {
    let g = &field.grid;
    let mut out = csv::Writer::from_writer(w);
    let header: &[&str] = if g.n_space_dims == 1 {
        &["t", "x", "value"]
    } else {
        &["t", "x1", "x2", "value"]
    };
    out.write_record(header).map_err(|e| Error::Format(e.to_string()))?;
    for (n, v) in field.values.iter().enumerate() {
        let t = g.time_at(g.time_index(n)).to_f64_lossy();
        let x = g.space_at(g.space_index(n));
        let mut row = vec![t.to_string()];
        for a in x.iter().take(g.n_space_dims) {
            row.push(a.to_f64_lossy().to_string());
        }
        row.push(v.to_f64_lossy().to_string());
        out.write_record(&row).map_err(|e| Error::Format(e.to_string()))?;
    }
    out.flush().map_err(io_err)
}

pub fn save_field_csv<T: Real>(path: impl AsRef<Path>, field: &Field<T>) -> Result<()> {
    write_field_csv(File::create(path).map_err(io_err)?, field)
}
