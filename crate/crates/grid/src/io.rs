//! Grid import and export.
//!
//! Binary: a 32-byte header (`b"NCGRID01"`, `N` as `u64`, box length as
//! `f64`, theta as `f64`) followed by `N * N` pairs `(re, im)` of `f64`,
//! row-major; everything little-endian.
//!
//! CSV: a first record `NCGRID01,N,box_length,theta`, then one record
//! `i,j,re,im` per sample.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{GridError, Result};
use crate::field::GridField;

pub const MAGIC: &[u8; 8] = b"NCGRID01";
pub const HEADER_LEN: usize = 32;

pub fn write_binary<W: Write>(field: &GridField, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(field.n() as u64).to_le_bytes())?;
    w.write_all(&field.box_length().to_le_bytes())?;
    w.write_all(&field.theta().to_le_bytes())?;
    let mut buf = Vec::with_capacity(field.values().len() * 16);
    for z in field.values() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("8 bytes"))
}

pub fn read_binary<R: Read>(mut r: R) -> Result<GridField> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|_| GridError::Format("truncated header".into()))?;
    if &header[..8] != MAGIC {
        return Err(GridError::Format("bad magic".into()));
    }
    let n = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes"));
    let n = usize::try_from(n).map_err(|_| GridError::Format(format!("grid size {n}")))?;
    if n == 0 || n > 1 << 15 {
        return Err(GridError::Format(format!("grid size {n} out of range")));
    }
    let box_length = f64_at(&header, 16);
    let theta = f64_at(&header, 24);
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != n * n * 16 {
        return Err(GridError::Format(format!(
            "expected {} data bytes, found {}",
            n * n * 16,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(16)
        .map(|c| Complex64::new(f64_at(c, 0), f64_at(c, 8)))
        .collect();
    GridField::new(n, box_length, theta, values)
}

pub fn write_csv<W: Write>(field: &GridField, w: W) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().flexible(true).from_writer(w);
    wr.write_record([
        "NCGRID01".to_string(),
        field.n().to_string(),
        field.box_length().to_string(),
        field.theta().to_string(),
    ])?;
    let n = field.n();
    for (idx, z) in field.values().iter().enumerate() {
        wr.write_record([
            (idx / n).to_string(),
            (idx % n).to_string(),
            z.re.to_string(),
            z.im.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, k: usize, what: &str) -> Result<T> {
    rec.get(k)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| GridError::Format(format!("bad {what} in record {rec:?}")))
}

pub fn read_csv<R: Read>(r: R) -> Result<GridField> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(r);
    let mut records = rd.records();
    let head = records
        .next()
        .ok_or_else(|| GridError::Format("empty file".into()))??;
    if head.get(0) != Some("NCGRID01") || head.len() != 4 {
        return Err(GridError::Format("missing NCGRID01 header record".into()));
    }
    let n: usize = field(&head, 1, "size")?;
    if n == 0 || n > 1 << 12 {
        return Err(GridError::Format(format!("grid size {n} out of range for CSV")));
    }
    let box_length: f64 = field(&head, 2, "box length")?;
    let theta: f64 = field(&head, 3, "theta")?;
    let mut values = vec![None; n * n];
    for rec in records {
        let rec = rec?;
        if rec.len() != 4 {
            return Err(GridError::Format(format!("expected 4 fields, got {rec:?}")));
        }
        let i: usize = field(&rec, 0, "row index")?;
        let j: usize = field(&rec, 1, "column index")?;
        if i >= n || j >= n {
            return Err(GridError::Format(format!("index ({i}, {j}) outside {n}x{n}")));
        }
        let z = Complex64::new(field(&rec, 2, "real part")?, field(&rec, 3, "imaginary part")?);
        if values[i * n + j].replace(z).is_some() {
            return Err(GridError::Format(format!("duplicate sample ({i}, {j})")));
        }
    }
    let values: Option<Vec<_>> = values.into_iter().collect();
    let values = values.ok_or_else(|| GridError::Format("missing samples".into()))?;
    GridField::new(n, box_length, theta, values)
}

/// Read either format, choosing by the leading magic bytes.
pub fn load(path: &Path) -> Result<GridField> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(MAGIC) && bytes.get(8) != Some(&b',') {
        read_binary(bytes.as_slice())
    } else {
        read_csv(bytes.as_slice())
    }
}

pub fn save_binary(field: &GridField, path: &Path) -> Result<()> {
    write_binary(field, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn save_csv(field: &GridField, path: &Path) -> Result<()> {
    write_csv(field, std::fs::File::create(path)?)
}
