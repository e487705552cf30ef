use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{FormatError, ModalError, Result};

/// One-to-one map from a mode index `n` to an ordered basis triple
/// `(i, j, k)` with `i <= j <= k < p_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeMapping {
    p_max: usize,
    entries: Vec<[usize; 3]>,
    lookup: HashMap<[usize; 3], usize>,
}

impl ModeMapping {
    pub fn new(p_max: usize, entries: Vec<[usize; 3]>) -> Result<Self> {
        if p_max == 0 {
            return Err(ModalError::InvalidParameter("p_max must be at least 1".into()));
        }
        let mut lookup = HashMap::with_capacity(entries.len());
        for (n, e) in entries.iter().enumerate() {
            if !(e[0] <= e[1] && e[1] <= e[2]) {
                return Err(ModalError::InvalidParameter(format!(
                    "entry {n} is not an ordered triple: {e:?}"
                )));
            }
            if e[2] >= p_max {
                return Err(ModalError::IndexOutOfRange { index: e[2], limit: p_max });
            }
            if lookup.insert(*e, n).is_some() {
                return Err(ModalError::InvalidParameter(format!(
                    "entry {n} duplicates triple {e:?}"
                )));
            }
        }
        Ok(Self { p_max, entries, lookup })
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    /// Number of modes `n_max`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[[usize; 3]] {
        &self.entries
    }

    pub fn get(&self, n: usize) -> Result<[usize; 3]> {
        self.entries
            .get(n)
            .copied()
            .ok_or(ModalError::IndexOutOfRange { index: n, limit: self.entries.len() })
    }

    pub fn index_of(&self, triple: [usize; 3]) -> Option<usize> {
        self.lookup.get(&triple).copied()
    }

    pub fn fingerprint(&self) -> u64 {
        super::fnv1a(
            std::iter::once(self.p_max as u64)
                .chain(self.entries.iter().flatten().map(|&x| x as u64)),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("modalmap v1 p_max={} n_max={}\n", self.p_max, self.len());
        for (n, [i, j, k]) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "{n} {i} {j} {k}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| FormatError::Header {
            line: 1,
            reason: "empty input".into(),
        })?;
        let fields = parse_header(header, "modalmap", &["p_max", "n_max"])
            .map_err(|reason| FormatError::Header { line: 1, reason })?;
        let (p_max, n_max) = (fields[0], fields[1]);
        if p_max == 0 {
            return Err(FormatError::Header { line: 1, reason: "p_max must be at least 1".into() });
        }

        let mut entries = Vec::with_capacity(n_max);
        let mut lookup = HashMap::with_capacity(n_max);
        for (line, raw) in lines {
            if raw.trim().is_empty() {
                continue;
            }
            let values: Vec<usize> = raw
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| FormatError::Malformed { line, reason: format!("{e}") })?;
            let [n, i, j, k] = values[..] else {
                return Err(FormatError::Malformed {
                    line,
                    reason: format!("expected 4 integers, found {}", values.len()),
                });
            };
            if n != entries.len() {
                return Err(FormatError::OutOfSequence { line, expected: entries.len(), found: n });
            }
            if !(i <= j && j <= k) {
                return Err(FormatError::UnorderedTriple { line });
            }
            if k >= p_max {
                return Err(FormatError::IndexOutOfRange { line, index: k, p_max });
            }
            if lookup.insert([i, j, k], n).is_some() {
                return Err(FormatError::DuplicateTriple { line });
            }
            entries.push([i, j, k]);
        }
        if entries.len() != n_max {
            return Err(FormatError::CountMismatch { declared: n_max, found: entries.len() });
        }
        Ok(Self { p_max, entries, lookup })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Every ordered triple below `p_max`, `k`-major then `j` then `i`:
/// `(0,0,0), (0,0,1), (0,1,1), (1,1,1), (0,0,2), ...`.
pub fn default_mode_mapping(p_max: usize) -> Result<ModeMapping> {
    let mut entries = Vec::with_capacity(p_max * (p_max + 1) * (p_max + 2) / 6);
    for k in 0..p_max {
        for j in 0..=k {
            for i in 0..=j {
                entries.push([i, j, k]);
            }
        }
    }
    ModeMapping::new(p_max, entries)
}

/// Parses `"<magic> v1 key=value ..."` and returns the values of `keys` in
/// order.
pub(crate) fn parse_header(
    header: &str,
    magic: &str,
    keys: &[&str],
) -> std::result::Result<Vec<usize>, String> {
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some(magic) {
        return Err(format!("expected magic `{magic}`"));
    }
    if tokens.next() != Some("v1") {
        return Err("unsupported version".into());
    }
    let pairs: HashMap<&str, &str> = tokens.filter_map(|t| t.split_once('=')).collect();
    keys.iter()
        .map(|key| {
            let raw = pairs.get(key).ok_or_else(|| format!("missing `{key}`"))?;
            raw.parse().map_err(|_| format!("bad value for `{key}`: {raw}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prefix_and_sizes() {
        let m = default_mode_mapping(3).unwrap();
        assert_eq!(
            &m.entries()[..6],
            &[[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1], [0, 0, 2], [0, 1, 2]]
        );
        assert_eq!(default_mode_mapping(2).unwrap().len(), 4);
        assert_eq!(default_mode_mapping(4).unwrap().len(), 20);
    }

    #[test]
    fn default_is_prefix_of_next() {
        for p in 1..8 {
            let small = default_mode_mapping(p).unwrap();
            let big = default_mode_mapping(p + 1).unwrap();
            assert_eq!(small.entries(), &big.entries()[..small.len()]);
            assert!(big.entries()[small.len()..].iter().all(|e| e[2] == p));
        }
    }

    #[test]
    fn bijection() {
        let m = default_mode_mapping(6).unwrap();
        for (n, e) in m.entries().iter().enumerate() {
            assert_eq!(m.index_of(*e), Some(n));
        }
    }

    #[test]
    fn parses_two_entries() {
        let m = ModeMapping::parse("modalmap v1 p_max=2 n_max=2\n0 0 0 0\n1 0 0 1\n").unwrap();
        assert_eq!(m.entries(), &[[0, 0, 0], [0, 0, 1]]);
    }

    #[test]
    fn rejects_unordered_triple() {
        let err = ModeMapping::parse("modalmap v1 p_max=2 n_max=3\n0 0 0 0\n1 0 0 1\n2 0 1 0\n")
            .unwrap_err();
        assert_eq!(err, FormatError::UnorderedTriple { line: 4 });

        let err = ModeMapping::parse("modalmap v1 p_max=2 n_max=2\n0 0 0 0\n1 0 1 0\n")
            .unwrap_err();
        assert_eq!(err.to_string(), "unordered triple at line 3");
    }

    #[test]
    fn distinct_errors() {
        let cases = [
            ("modalmap v1 p_max=2 n_max=1\n0 0 0\n", "malformed line 2"),
            ("modalmap v1 p_max=2 n_max=2\n0 0 0 0\n1 0 0 0\n", "duplicate triple at line 3"),
            ("modalmap v1 p_max=2 n_max=1\n0 0 0 2\n", "basis index 2 >= p_max 2 at line 2"),
            ("modalmap v1 p_max=2 n_max=1\n1 0 0 0\n", "mode index out of sequence at line 2"),
            ("modalmap v1 p_max=2 n_max=2\n0 0 0 0\n", "count mismatch"),
            ("modalbasis v1 p_max=2 n_max=2\n", "bad header at line 1"),
            ("modalmap v1 p_max=2\n", "bad header at line 1"),
        ];
        for (text, prefix) in cases {
            let msg = ModeMapping::parse(text).unwrap_err().to_string();
            assert!(msg.starts_with(prefix), "{text:?} -> {msg}");
        }
    }

    #[test]
    fn round_trip_through_file() {
        let m = default_mode_mapping(4).unwrap();
        let dir = std::env::temp_dir().join(format!("modalmap-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("map.txt");
        m.save(&path).unwrap();
        assert_eq!(ModeMapping::load(&path).unwrap(), m);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn constructor_validates() {
        assert!(ModeMapping::new(2, vec![[0, 1, 0]]).is_err());
        assert!(ModeMapping::new(2, vec![[0, 0, 2]]).is_err());
        assert!(ModeMapping::new(2, vec![[0, 0, 1], [0, 0, 1]]).is_err());
        assert!(ModeMapping::new(0, vec![]).is_err());
    }
}
