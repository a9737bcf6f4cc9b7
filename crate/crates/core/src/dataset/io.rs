//! NDJSON dataset files: a `#!manifest` line, then one padded record per line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{pad, Dataset, Input, Manifest, Record, RecordMeta, Table};
use crate::error::{Error, Result};

/// Prefix of the first line of a dataset file.
pub const MANIFEST_PREFIX: &str = "#!manifest ";

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum X {
    Single(Vec<u32>),
    Pair(Vec<u32>, Vec<u32>),
}

#[derive(Serialize, Deserialize)]
struct Line {
    id: usize,
    x: X,
    n: usize,
    label: usize,
    meta: RecordMeta,
}

fn unpad(cells: &[u32], n: usize, size: usize) -> Result<Table> {
    if cells.len() != size * size {
        return Err(Error::shape(format!("{} entries where {size}x{size} was declared", cells.len())));
    }
    if n > size {
        return Err(Error::shape(format!("live order {n} exceeds n_max {size}")));
    }
    let live = (0..n).flat_map(|r| cells[r * size..r * size + n].iter().copied()).collect();
    Ok(Table { n, cells: live })
}

/// Writes the manifest line followed by every record padded to `n_max`.
pub fn write_dataset(mut w: impl Write, data: &Dataset) -> Result<()> {
    let size = data.n_max();
    w.write_all(MANIFEST_PREFIX.as_bytes())?;
    serde_json::to_writer(&mut w, &data.manifest)?;
    w.write_all(b"\n")?;
    for r in &data.records {
        let x = match &r.x {
            Input::Single(t) => X::Single(pad(&t.cells, t.n, size)?),
            Input::Pair(a, b) => X::Pair(pad(&a.cells, a.n, size)?, pad(&b.cells, b.n, size)?),
        };
        let line = Line { id: r.id, x, n: r.x.order(), label: r.label, meta: r.meta.clone() };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Parses the first line of a dataset file.
pub fn parse_manifest_line(line: &str) -> Result<Manifest> {
    let body = line.strip_prefix(MANIFEST_PREFIX).ok_or_else(|| Error::Record {
        line: 1,
        message: format!("first line must start with {MANIFEST_PREFIX:?}"),
    })?;
    serde_json::from_str(body).map_err(|e| Error::Record { line: 1, message: format!("bad manifest: {e}") })
}

/// Parses and unpads one record line; errors carry `line_no`.
pub fn parse_record_line(line: &str, manifest: &Manifest, line_no: usize) -> Result<Record> {
    let err = |message: String| Error::Record { line: line_no, message };
    let size = manifest.n_max;
    let l: Line = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
    if l.label > manifest.classes {
        return Err(err(format!("label {} above {}", l.label, manifest.classes)));
    }
    let x = match l.x {
        X::Single(c) => Input::Single(unpad(&c, l.n, size).map_err(|e| err(e.to_string()))?),
        X::Pair(a, b) => Input::Pair(
            unpad(&a, l.n, size).map_err(|e| err(e.to_string()))?,
            unpad(&b, l.n, size).map_err(|e| err(e.to_string()))?,
        ),
    };
    Ok(Record { id: l.id, x, label: l.label, meta: l.meta })
}

/// Reads a dataset file. Errors carry the 1-based line number.
pub fn read_dataset(reader: impl BufRead) -> Result<Dataset> {
    let mut lines = reader.lines().enumerate();
    let manifest = match lines.next() {
        Some((_, line)) => parse_manifest_line(&line?)?,
        None => return Err(Error::Record { line: 1, message: "empty dataset file".into() }),
    };
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(parse_record_line(&line, &manifest, idx + 1)?);
    }
    Ok(Dataset { manifest, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::build_cayley_vs_latin;
    use crate::dataset::{build_group_iso_pairs, build_ring_collection, RingMatchConfig};
    use crate::group::{cyclic_group, dihedral_group, direct_product};

    fn bytes(d: &Dataset) -> Vec<u8> {
        let mut out = Vec::new();
        write_dataset(&mut out, d).unwrap();
        out
    }

    #[test]
    fn roundtrip_single() {
        let d = build_cayley_vs_latin(4, 2, 5, 3).unwrap();
        let text = bytes(&d);
        assert!(text.starts_with(MANIFEST_PREFIX.as_bytes()));
        let back = read_dataset(text.as_slice()).unwrap();
        assert_eq!(back.records, d.records);
        assert_eq!(back.manifest, d.manifest);
        assert_eq!(bytes(&back), text);
    }

    #[test]
    fn roundtrip_padded_pairs() {
        let cfg = RingMatchConfig { k_correct: 8, k_incorrect: 2 };
        let (t, _) = build_ring_collection(5, 2, cfg, 1).unwrap();
        let back = read_dataset(bytes(&t).as_slice()).unwrap();
        assert_eq!(back.records, t.records);

        let c2 = cyclic_group(2).unwrap();
        let s1 = vec![cyclic_group(6).unwrap(), dihedral_group(6).unwrap()];
        let s2 = vec![cyclic_group(4).unwrap(), direct_product(&c2, &c2)];
        let (a, _) = build_group_iso_pairs(&s1, &s2, 3, 1).unwrap();
        assert_eq!(read_dataset(bytes(&a).as_slice()).unwrap().records, a.records);
    }

    #[test]
    fn bad_lines_are_located() {
        let d = build_cayley_vs_latin(3, 1, 2, 3).unwrap();
        let mut text = String::from_utf8(bytes(&d)).unwrap();
        text.push_str("{\"id\":9}\n");
        match read_dataset(text.as_bytes()) {
            Err(Error::Record { line, .. }) => assert_eq!(line, d.len() + 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_dataset("{}\n".as_bytes()), Err(Error::Record { line: 1, .. })));
    }
}
