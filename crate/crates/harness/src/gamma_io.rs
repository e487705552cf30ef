//! `modalgamma v1` text and `MGAM` binary matrix files.
//!
//! Binary layout, little-endian: `MGAM`, `u32` version, `u32` rows, `u32`
//! columns, `u8` engine, `u8` integrator, `u8` h2 mode (0 none, 1 gosper,
//! 2 exact), `u8` padding, `u32` l_min, `u32` l_max, `u32` p_max, three `u64`
//! fingerprints (grid, mapping, basis), then `rows * columns` `f64` values
//! row-major.

use std::io::Write;

use modal_core::{EngineId, FormatError, GammaMatrix, GammaMeta, H2Mode, Integrator};

use crate::error::Result;

const MAGIC: &[u8; 4] = b"MGAM";
const VERSION: u32 = 1;
const HEADER_BYTES: usize = 4 + 4 + 4 + 4 + 4 + 4 * 3 + 8 * 3;

const ENGINES: [EngineId; 5] = [
    EngineId::Modal2d,
    EngineId::Modal2dNaive,
    EngineId::Modal3d,
    EngineId::Modal3dNaive,
    EngineId::External,
];

/// Writes the text form. `config`, when given, becomes a second comment line.
pub fn write_csv<W: Write>(out: &mut W, g: &GammaMatrix, config: Option<&str>) -> Result<()> {
    let m = g.meta();
    writeln!(
        out,
        "# modalgamma v1 engine={} nmax={} lmin={} lmax={} integrator={}",
        m.engine,
        g.n_max(),
        m.l_min,
        m.l_max,
        m.integrator.id()
    )?;
    if let Some(line) = config {
        writeln!(out, "# config {line}")?;
    }
    let mut row = String::new();
    for r in 0..g.n_max() {
        row.clear();
        for (k, v) in g.row(r).iter().enumerate() {
            if k > 0 {
                row.push(',');
            }
            row.push_str(&format!("{v:e}"));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn header_error(reason: impl Into<String>) -> FormatError {
    FormatError::Header { line: 1, reason: reason.into() }
}

/// Parses the text form. Fingerprints and `p_max` are not stored in it and
/// come back as zero.
pub fn read_csv(text: &str) -> Result<GammaMatrix, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| header_error("empty file"))?;
    let rest = header
        .strip_prefix("# modalgamma v1 ")
        .ok_or_else(|| header_error("expected `# modalgamma v1`"))?;
    let mut engine = None;
    let mut n = None;
    let mut l_min = None;
    let mut l_max = None;
    let mut integrator = None;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| header_error(format!("field `{field}` is not key=value")))?;
        let bad = || header_error(format!("bad value for {key}: `{value}`"));
        match key {
            "engine" => engine = Some(value.parse::<EngineId>().map_err(|_| bad())?),
            "nmax" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            "lmin" => l_min = Some(value.parse::<usize>().map_err(|_| bad())?),
            "lmax" => l_max = Some(value.parse::<usize>().map_err(|_| bad())?),
            "integrator" => integrator = Some(value.parse::<Integrator>().map_err(|_| bad())?),
            _ => return Err(header_error(format!("unknown field `{key}`"))),
        }
    }
    let missing = |k: &str| header_error(format!("missing {k}"));
    let n = n.ok_or_else(|| missing("nmax"))?;
    let meta = GammaMeta {
        engine: engine.ok_or_else(|| missing("engine"))?,
        l_min: l_min.ok_or_else(|| missing("lmin"))?,
        l_max: l_max.ok_or_else(|| missing("lmax"))?,
        p_max: 0,
        integrator: integrator.ok_or_else(|| missing("integrator"))?,
        h2: None,
        grid_fingerprint: 0,
        mapping_fingerprint: 0,
        basis_fingerprint: 0,
    };

    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (k, line) in lines {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let before = data.len();
        for cell in line.split(',') {
            let v = cell.trim().parse::<f64>().map_err(|_| FormatError::Malformed {
                line: k + 1,
                reason: format!("`{}` is not a number", cell.trim()),
            })?;
            data.push(v);
        }
        if data.len() - before != n {
            return Err(FormatError::Dimension(format!(
                "line {} has {} values, nmax is {n}",
                k + 1,
                data.len() - before
            )));
        }
        rows += 1;
    }
    if rows != n {
        return Err(FormatError::Dimension(format!("{rows} rows, nmax is {n}")));
    }
    Ok(GammaMatrix::from_data(n, data, meta).expect("shape checked"))
}

fn h2_code(h2: Option<H2Mode>) -> u8 {
    match h2 {
        None => 0,
        Some(H2Mode::Gosper) => 1,
        Some(H2Mode::Exact) => 2,
    }
}

pub fn write_bin<W: Write>(out: &mut W, g: &GammaMatrix) -> Result<()> {
    let m = g.meta();
    let n = u32::try_from(g.n_max()).expect("matrix dimension fits in u32");
    let engine = ENGINES.iter().position(|e| *e == m.engine).expect("known engine") as u8;
    let integrator =
        Integrator::ALL.iter().position(|i| *i == m.integrator).expect("known integrator") as u8;
    let mut buf = Vec::with_capacity(HEADER_BYTES + g.as_slice().len() * 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&[engine, integrator, h2_code(m.h2), 0]);
    for v in [m.l_min, m.l_max, m.p_max] {
        buf.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for f in [m.grid_fingerprint, m.mapping_fingerprint, m.basis_fingerprint] {
        buf.extend_from_slice(&f.to_le_bytes());
    }
    for v in g.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out = self.bytes[self.pos..self.pos + N].try_into().expect("length checked");
        self.pos += N;
        out
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn u64(&mut self) -> u64 {
        u64::from_le_bytes(self.take())
    }
}

pub fn read_bin(bytes: &[u8]) -> Result<GammaMatrix, FormatError> {
    if bytes.len() < HEADER_BYTES {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(header_error("bad magic"));
        }
        return Err(header_error(format!("header needs {HEADER_BYTES} bytes, found {}", bytes.len())));
    }
    let mut r = Reader { bytes, pos: 0 };
    if &r.take::<4>() != MAGIC {
        return Err(header_error("bad magic"));
    }
    let version = r.u32();
    if version != VERSION {
        return Err(header_error(format!("unsupported version {version}")));
    }
    let rows = r.u32() as usize;
    let cols = r.u32() as usize;
    if rows != cols {
        return Err(FormatError::Dimension(format!("{rows}x{cols} is not square")));
    }
    let [engine, integrator, h2, _] = r.take::<4>();
    let engine = *ENGINES
        .get(engine as usize)
        .ok_or_else(|| header_error(format!("unknown engine code {engine}")))?;
    let integrator = *Integrator::ALL
        .get(integrator as usize)
        .ok_or_else(|| header_error(format!("unknown integrator code {integrator}")))?;
    let h2 = match h2 {
        0 => None,
        1 => Some(H2Mode::Gosper),
        2 => Some(H2Mode::Exact),
        other => return Err(header_error(format!("unknown h2 code {other}"))),
    };
    let l_min = r.u32() as usize;
    let l_max = r.u32() as usize;
    let p_max = r.u32() as usize;
    let meta = GammaMeta {
        engine,
        l_min,
        l_max,
        p_max,
        integrator,
        h2,
        grid_fingerprint: r.u64(),
        mapping_fingerprint: r.u64(),
        basis_fingerprint: r.u64(),
    };

    let expected = rows * cols * 8;
    let payload = &bytes[HEADER_BYTES..];
    if payload.len() < expected {
        return Err(FormatError::Truncated { expected, found: payload.len() });
    }
    if payload.len() > expected {
        return Err(FormatError::Dimension(format!(
            "{} trailing bytes after a {rows}x{cols} payload",
            payload.len() - expected
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok(GammaMatrix::from_data(rows, data, meta).expect("shape checked"))
}
