//! Family catalog of small groups and the NDJSON table format.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::families::{
    alternating_group, cyclic_group, dicyclic_group, dihedral_group, direct_product, symmetric_group,
};
use super::iso::find_isomorphism;
use super::GroupTable;
use crate::error::{Error, Result};

/// Position of each group inside its order slice, following the SmallGroup
/// numbering for the orders where the family set is complete. Groups not
/// listed here follow in construction order.
const SLICE_ORDER: &[(usize, &[&str])] = &[
    (4, &["C4", "C2xC2"]),
    (6, &["D6", "C6"]),
    (8, &["C8", "C4xC2", "D8", "Q8", "C2xC2xC2"]),
    (9, &["C9", "C3xC3"]),
    (10, &["D10", "C10"]),
    (12, &["Dic12", "C12", "A4", "D12", "C6xC2"]),
    (14, &["D14", "C14"]),
];

/// Every group of order `<= max_order` constructible from cyclic groups,
/// direct products of cyclic groups, dihedral, dicyclic, alternating and
/// symmetric groups, deduplicated up to isomorphism and sorted by order.
pub fn catalog(max_order: usize) -> Vec<GroupTable> {
    let mut out: Vec<GroupTable> = Vec::new();
    for n in 1..=max_order {
        let mut slice: Vec<GroupTable> = Vec::new();
        for g in candidates_of_order(n) {
            let profile = g.order_profile();
            let dup = slice
                .iter()
                .any(|h| h.order_profile() == profile && find_isomorphism(&g, h, |_| true).is_some());
            if !dup {
                slice.push(g);
            }
        }
        if let Some((_, names)) = SLICE_ORDER.iter().find(|(order, _)| *order == n) {
            slice.sort_by_key(|g| names.iter().position(|name| *name == g.name()).unwrap_or(names.len()));
        }
        out.extend(slice);
    }
    out
}

/// Groups of one order from the catalog, in slice order.
pub fn groups_of_order(n: usize) -> Vec<GroupTable> {
    catalog(n).into_iter().filter(|g| g.order() == n).collect()
}

/// Finds a catalog group by name (e.g. `"C4xC2"`, `"Q8"`, `"A5"`).
pub fn group_by_name(name: &str, max_order: usize) -> Option<GroupTable> {
    catalog(max_order).into_iter().find(|g| g.name() == name)
}

fn candidates_of_order(n: usize) -> Vec<GroupTable> {
    let mut out = Vec::new();
    out.push(cyclic_group(n).expect("n >= 1"));
    for factors in invariant_factor_chains(n) {
        if factors.len() < 2 {
            continue;
        }
        // largest factor first: C4xC2, C6xC2, C2xC2xC2
        let mut it = factors.iter().rev();
        let first = cyclic_group(*it.next().unwrap()).unwrap();
        out.push(it.fold(first, |acc, &d| direct_product(&acc, &cyclic_group(d).unwrap())));
    }
    if n >= 2 && n.is_multiple_of(2) {
        out.push(dihedral_group(n).unwrap());
    }
    if n >= 4 && n.is_multiple_of(4) {
        out.push(dicyclic_group(n).unwrap());
    }
    for m in 1..=6 {
        if factorial(m) / 2 == n {
            out.push(alternating_group(m).unwrap());
        }
    }
    for m in 1..=5 {
        if factorial(m) == n {
            out.push(symmetric_group(m).unwrap());
        }
    }
    out
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// Invariant factor sequences `d1 | d2 | .. | dk` with each `di >= 2` and
/// product `n`: one per abelian group of order `n`.
fn invariant_factor_chains(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, min_multiple_of: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in 2..=rest {
            if rest.is_multiple_of(d) && d % min_multiple_of == 0 {
                // every later factor must be a multiple of d and divide what's left
                let tail = rest / d;
                if tail != 1 && !tail.is_multiple_of(d) {
                    continue;
                }
                cur.push(d);
                rec(tail, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 1 {
        return out;
    }
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// One line of the NDJSON group-table format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRecord {
    pub n: usize,
    pub table: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl From<&GroupTable> for TableRecord {
    fn from(g: &GroupTable) -> Self {
        TableRecord { n: g.order(), table: g.cells().to_vec(), name: Some(g.name().to_string()) }
    }
}

/// Reads and validates group tables from an NDJSON file.
pub fn import_tables(path: impl AsRef<Path>) -> Result<Vec<GroupTable>> {
    let file = std::fs::File::open(path)?;
    parse_tables(BufReader::new(file))
}

/// Parses NDJSON group tables. Blank lines are skipped; the first invalid
/// record aborts with its 1-based line number.
pub fn parse_tables(reader: impl BufRead) -> Result<Vec<GroupTable>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TableRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Record { line: line_no, message: format!("malformed record: {e}") })?;
        let name = rec.name.unwrap_or_else(|| format!("G{line_no}"));
        let g = GroupTable::new(name, rec.n, rec.table)
            .map_err(|e| Error::Record { line: line_no, message: e.to_string() })?;
        out.push(g);
    }
    Ok(out)
}

/// Writes group tables as NDJSON, one per line.
pub fn write_tables<'a>(mut w: impl Write, tables: impl IntoIterator<Item = &'a GroupTable>) -> Result<()> {
    for g in tables {
        serde_json::to_writer(&mut w, &TableRecord::from(g))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_chains() {
        assert_eq!(invariant_factor_chains(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(invariant_factor_chains(12), vec![vec![2, 6], vec![12]]);
        assert_eq!(invariant_factor_chains(7), vec![vec![7]]);
    }

    #[test]
    fn order_eight_slice_matches_smallgroup_numbering() {
        let names: Vec<String> = groups_of_order(8).iter().map(|g| g.name().to_string()).collect();
        assert_eq!(names, ["C8", "C4xC2", "D8", "Q8", "C2xC2xC2"]);
    }

    #[test]
    fn order_twelve_slice() {
        let names: Vec<String> = groups_of_order(12).iter().map(|g| g.name().to_string()).collect();
        assert_eq!(names, ["Dic12", "C12", "A4", "D12", "C6xC2"]);
    }

    #[test]
    fn parse_c3_record() {
        let text = r#"{"n":3,"table":[1,2,3,2,3,1,3,1,2],"name":"C3"}"#;
        let gs = parse_tables(text.as_bytes()).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].name(), "C3");
    }

    #[test]
    fn empty_input_is_empty() {
        assert!(parse_tables("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "{\"n\":1,\"table\":[1]}\n{oops}\n";
        match parse_tables(text.as_bytes()) {
            Err(Error::Record { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
