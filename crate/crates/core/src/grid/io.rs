//! Raw import/export of cell values: CSV text or little-endian binary, each
//! preceded by a one-line grid header.

use std::io::{BufRead, BufReader, Read, Write};

use super::{GridSpec, SampledFunction, TailDescriptor};
use crate::error::{Error, Result};

fn header(f: &SampledFunction) -> String {
    let mut h = f.spec().to_string();
    if let Some(t) = f.tail() {
        h.push_str(&format!(",tail_amp={},tail_alpha={},tail_beta={}", t.amp, t.alpha, t.beta));
    }
    h
}

fn parse_header(line: &str) -> Result<(GridSpec, Option<TailDescriptor>)> {
    let body = line.trim().trim_start_matches('#').trim();
    let body = body.strip_prefix("hardylab-grid").unwrap_or(body).trim();
    let (mut dim, mut r, mut m) = (None, None, None);
    let (mut amp, mut alpha, mut beta) = (None, None, None);
    for kv in body.split(',') {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Spec { field: "header".into(), msg: format!("expected key=value, got `{kv}`") })?;
        let bad = |field: &str| Error::Spec { field: field.into(), msg: format!("cannot parse `{v}`") };
        match k.trim() {
            "dim" => dim = Some(v.trim().parse::<usize>().map_err(|_| bad("dim"))?),
            "box_radius" | "R" => r = Some(v.trim().parse::<u32>().map_err(|_| bad("box_radius"))?),
            "cells_per_unit" | "m" => m = Some(v.trim().parse::<u32>().map_err(|_| bad("cells_per_unit"))?),
            "tail_amp" => amp = Some(v.trim().parse::<f64>().map_err(|_| bad("tail_amp"))?),
            "tail_alpha" => alpha = Some(v.trim().parse::<f64>().map_err(|_| bad("tail_alpha"))?),
            "tail_beta" => beta = Some(v.trim().parse::<f64>().map_err(|_| bad("tail_beta"))?),
            other => {
                return Err(Error::Spec { field: other.into(), msg: "unknown header key".into() });
            }
        }
    }
    let missing = |field: &str| Error::Spec { field: field.into(), msg: "missing".into() };
    let spec = GridSpec::new(
        dim.ok_or_else(|| missing("dim"))?,
        r.ok_or_else(|| missing("box_radius"))?,
        m.ok_or_else(|| missing("cells_per_unit"))?,
    )?;
    let tail = match (amp, alpha, beta) {
        (Some(amp), Some(alpha), Some(beta)) => Some(TailDescriptor { amp, alpha, beta }),
        (None, None, None) => None,
        _ => return Err(missing("tail_amp/tail_alpha/tail_beta")),
    };
    Ok((spec, tail))
}

fn finish(spec: GridSpec, values: Vec<f64>, tail: Option<TailDescriptor>) -> Result<SampledFunction> {
    let f = SampledFunction::new(spec, values)?;
    match tail {
        Some(t) => f.with_tail(t),
        None => Ok(f),
    }
}

/// One row of cells per line (a single value per line in 1-D).
pub fn write_csv<W: Write>(f: &SampledFunction, mut w: W) -> Result<()> {
    writeln!(w, "# {}", header(f))?;
    let row = if f.spec().dim == 1 { 1 } else { f.spec().cells_per_axis() };
    for chunk in f.values().chunks(row) {
        let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<SampledFunction> {
    let mut lines = BufReader::new(r).lines();
    let first = lines.next().ok_or_else(|| Error::Spec { field: "header".into(), msg: "empty input".into() })??;
    let (spec, tail) = parse_header(&first)?;
    let mut values = Vec::with_capacity(spec.len());
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for tok in line.split(',') {
            values.push(tok.trim().parse::<f64>().map_err(|_| Error::Spec {
                field: format!("values (line {})", lineno + 2),
                msg: format!("cannot parse `{tok}`"),
            })?);
        }
    }
    finish(spec, values, tail)
}

pub fn write_binary<W: Write>(f: &SampledFunction, mut w: W) -> Result<()> {
    writeln!(w, "hardylab-grid {}", header(f))?;
    for v in f.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(r: R) -> Result<SampledFunction> {
    let mut reader = BufReader::new(r);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let (spec, tail) = parse_header(&first)?;
    let mut buf = Vec::new();
    reader.read_to_end(&mut buf)?;
    if buf.len() != 8 * spec.len() {
        return Err(Error::Spec {
            field: "values".into(),
            msg: format!("expected {} bytes, got {}", 8 * spec.len(), buf.len()),
        });
    }
    let values = buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    finish(spec, values, tail)
}
