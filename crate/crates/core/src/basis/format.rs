//! `modalbasis v1` text format.
//!
//! ```text
//! modalbasis v1 p_max=<int> lmin=<int> lmax=<int> R=<int>
//! [C]
//! <L values>
//! [v]
//! <L values>
//! [q]
//! <p_max rows of L values>
//! [r]
//! <R values>
//! [qtilde]
//! <p_max * R rows of L values, basis index slowest, l fastest>
//! ```
//!
//! Values are printed in shortest round-trip form, so write followed by read
//! reproduces every table bit for bit.

use std::io::Write;

use crate::error::{FormatError, ModalError, Result};

use super::mapping::parse_header;
use super::{BasisParts, BasisTables, RadialGrid};

const SECTIONS: [&str; 5] = ["C", "v", "q", "r", "qtilde"];

pub fn write_basis<W: Write>(out: &mut W, tables: &BasisTables, grid: &RadialGrid) -> Result<()> {
    if grid.len() != tables.radial_count() {
        return Err(ModalError::DimensionMismatch(format!(
            "grid has {} points, tables expect {}",
            grid.len(),
            tables.radial_count()
        )));
    }
    let p = tables.parts();
    let n_l = tables.n_l();
    writeln!(
        out,
        "modalbasis v1 p_max={} lmin={} lmax={} R={}",
        p.p_max, p.l_min, p.l_max, p.radial_count
    )?;
    let mut section = |name: &str, values: &[f64], row: usize| -> std::io::Result<()> {
        writeln!(out, "[{name}]")?;
        for chunk in values.chunks(row.max(1)) {
            let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    };
    section("C", &p.c, n_l)?;
    section("v", &p.v, n_l)?;
    section("q", &p.q, n_l)?;
    section("r", grid.samples(), grid.len())?;
    section("qtilde", &p.q_tilde, n_l)?;
    Ok(())
}

pub fn read_basis(text: &str) -> Result<(BasisTables, RadialGrid)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| FormatError::Header { line: 1, reason: "empty input".into() })?;
    let fields = parse_header(header, "modalbasis", &["p_max", "lmin", "lmax", "R"])
        .map_err(|reason| FormatError::Header { line: 1, reason })?;
    let (p_max, l_min, l_max, radial_count) = (fields[0], fields[1], fields[2], fields[3]);
    if l_min > l_max {
        return Err(FormatError::Header { line: 1, reason: "lmin exceeds lmax".into() }.into());
    }
    let n_l = l_max - l_min + 1;

    let mut sections: Vec<Vec<f64>> = vec![Vec::new(); SECTIONS.len()];
    let mut seen = [false; SECTIONS.len()];
    let mut current: Option<usize> = None;
    for (k, raw) in lines.enumerate() {
        let line = k + 2;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let idx = SECTIONS.iter().position(|s| *s == name).ok_or_else(|| {
                FormatError::Malformed { line, reason: format!("unknown section [{name}]") }
            })?;
            seen[idx] = true;
            current = Some(idx);
            continue;
        }
        let idx = current.ok_or_else(|| FormatError::Malformed {
            line,
            reason: "values before first section".into(),
        })?;
        for token in trimmed.split_whitespace() {
            let value = token.parse::<f64>().map_err(|_| FormatError::Malformed {
                line,
                reason: format!("not a number: {token}"),
            })?;
            sections[idx].push(value);
        }
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(FormatError::MissingSection(SECTIONS[k].into()).into());
    }

    let expected = [n_l, n_l, p_max * n_l, radial_count, p_max * radial_count * n_l];
    for ((name, values), want) in SECTIONS.iter().zip(&sections).zip(expected) {
        if values.len() != want {
            return Err(FormatError::Dimension(format!(
                "section [{name}] has {} values, expected {want}",
                values.len()
            ))
            .into());
        }
    }
    let mut it = sections.into_iter();
    let (c, v, q, r, q_tilde) = (
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    );
    let grid = RadialGrid::from_samples(r)?;
    let tables =
        BasisTables::from_parts(BasisParts { p_max, l_min, l_max, radial_count, c, v, q, q_tilde })?;
    Ok((tables, grid))
}
