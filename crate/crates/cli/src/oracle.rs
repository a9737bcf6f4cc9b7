//! Exact verdicts over NDJSON input, one output line per record.
//!
//! Two inputs are accepted: plain table files (group tables
//! `{n, table, name?}` or ring tables `{n, moduli?, mult, add}`) and dataset
//! files starting with a manifest line, whose stored labels are re-derived
//! and compared.

use std::io::{BufRead, Write};

use algebra_learn::dataset::{
    oracle_label, parse_manifest_line, parse_record_line, Input, Manifest, Task, MANIFEST_PREFIX,
};
use algebra_learn::group::{self, GroupTable, TableRecord};
use algebra_learn::latin::LatinSquare;
use algebra_learn::ring::{self, RingTables};
use algebra_learn::Error;
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Quadrangle criterion on Latin squares
    Quadrangle,
    /// Simplicity via normal closures of conjugacy classes
    Simple,
    /// Subgroup counts (total and up to isomorphism)
    Subgroups,
    /// Isomorphism classes among the input tables, or pair labels in a dataset
    Iso,
    /// Ring-axiom scan of (mult, add) table pairs
    Distrib,
}

impl Check {
    fn matches(self, task: &Task) -> bool {
        matches!(
            (self, task),
            (Check::Quadrangle, Task::CayleyTable)
                | (Check::Simple, Task::Simplicity)
                | (Check::Subgroups, Task::SubgroupClasses { .. })
                | (Check::Iso, Task::GroupIsomorphism)
                | (Check::Distrib, Task::RingMatch)
        )
    }
}

#[derive(Debug, Default)]
pub struct Tally {
    pub records: usize,
    pub malformed: usize,
    pub disagreements: usize,
}

impl Tally {
    pub fn failed(&self) -> bool {
        self.malformed > 0 || self.disagreements > 0
    }
}

struct State {
    check: Check,
    manifest: Option<Manifest>,
    iso_reps: Vec<(usize, GroupTable)>,
}

fn emit(out: &mut impl Write, v: Value) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, &v)?;
    out.write_all(b"\n")
}

/// Streams verdicts for every line of `input` to `out`; malformed lines are
/// reported on `err` with their line numbers and counted.
pub fn run(
    check: Check,
    input: impl BufRead,
    out: &mut impl Write,
    err: &mut impl Write,
) -> std::io::Result<Tally> {
    let mut tally = Tally::default();
    let mut st = State { check, manifest: None, iso_reps: Vec::new() };
    let mut first = true;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if first {
            first = false;
            if line.starts_with(MANIFEST_PREFIX.trim_end()) {
                match parse_manifest_line(&line) {
                    Ok(m) if check.matches(&m.task) => st.manifest = Some(m),
                    Ok(m) => {
                        writeln!(
                            err,
                            "error: line 1: `{check:?}` does not check datasets of task {:?}",
                            m.task
                        )?;
                        tally.malformed += 1;
                        return Ok(tally);
                    }
                    Err(e) => {
                        writeln!(err, "error: {e}")?;
                        tally.malformed += 1;
                        return Ok(tally);
                    }
                }
                continue;
            }
        }
        match verdict(&mut st, &line, line_no) {
            Ok((v, agrees)) => {
                tally.records += 1;
                if agrees == Some(false) {
                    tally.disagreements += 1;
                }
                emit(out, v)?;
            }
            Err(e) => {
                tally.malformed += 1;
                match e {
                    Error::Record { .. } => writeln!(err, "error: {e}")?,
                    other => writeln!(err, "error: line {line_no}: {other}")?,
                }
            }
        }
    }
    out.flush()?;
    Ok(tally)
}

fn verdict(st: &mut State, line: &str, line_no: usize) -> Result<(Value, Option<bool>), Error> {
    if let Some(m) = &st.manifest {
        let r = parse_record_line(line, m, line_no)?;
        let v = match (st.check, &r.x) {
            // independent of the associativity route used by oracle_label
            (Check::Quadrangle, Input::Single(t)) => match LatinSquare::new(t.n, t.unshifted(r.meta.delta)) {
                Ok(sq) => group::quadrangle_criterion(&sq) as usize,
                Err(Error::NotLatin(_)) => 0,
                Err(e) => return Err(e),
            },
            _ => oracle_label(&m.task, &r)?,
        };
        let agrees = v == r.label;
        return Ok((
            json!({ "line": line_no, "id": r.id, "label": r.label, "verdict": v, "agrees": agrees }),
            Some(agrees),
        ));
    }
    let bad =
        |e: serde_json::Error| Error::Record { line: line_no, message: format!("malformed record: {e}") };
    if st.check == Check::Distrib {
        let r: RingTables = serde_json::from_str(line).map_err(bad)?;
        let n = r.n;
        if r.mult.len() != n * n || r.add.len() != n * n {
            return Err(Error::Record {
                line: line_no,
                message: format!("tables must hold {} entries", n * n),
            });
        }
        let in_range = r.mult.iter().chain(&r.add).all(|&v| v >= 1 && v as usize <= n);
        let violation = if in_range {
            r.first_distributivity_violation().map(|(a, b, c)| json!([a + 1, b + 1, c + 1]))
        } else {
            None
        };
        let ok = ring::is_ring_pair(n, &r.mult, &r.add);
        return Ok((json!({ "line": line_no, "n": n, "ring": ok, "violation": violation }), None));
    }
    let rec: TableRecord = serde_json::from_str(line).map_err(bad)?;
    let name = rec.name.clone().unwrap_or_else(|| format!("line {line_no}"));
    if st.check == Check::Quadrangle {
        let (latin, quad) = match LatinSquare::new(rec.n, rec.table) {
            Ok(sq) => (true, group::quadrangle_criterion(&sq)),
            Err(Error::NotLatin(_)) => (false, false),
            Err(e) => return Err(e),
        };
        return Ok((
            json!({ "line": line_no, "name": name, "n": rec.n, "latin": latin, "quadrangle": quad }),
            None,
        ));
    }
    let g = GroupTable::new(name.clone(), rec.n, rec.table)?;
    let v = match st.check {
        Check::Simple => {
            json!({ "line": line_no, "name": name, "n": g.order(), "simple": group::is_simple(&g) })
        }
        Check::Subgroups => {
            let lat = group::subgroups(&g)?;
            json!({ "line": line_no, "name": name, "n": g.order(), "subgroups": lat.total(), "iso_classes": lat.iso_classes })
        }
        Check::Iso => {
            let hit = st.iso_reps.iter().position(|(_, h)| group::are_isomorphic(&g, h).is_some());
            let class = hit.unwrap_or_else(|| {
                st.iso_reps.push((line_no, g.clone()));
                st.iso_reps.len() - 1
            });
            let first_line = st.iso_reps[class].0;
            json!({ "line": line_no, "name": name, "n": g.order(), "iso_class": class, "first_line": first_line })
        }
        Check::Quadrangle | Check::Distrib => unreachable!("handled above"),
    };
    Ok((v, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use algebra_learn::group::{cyclic_group, write_tables};

    fn lines(bytes: &[u8]) -> Vec<Value> {
        String::from_utf8_lossy(bytes).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
    }

    #[test]
    fn malformed_lines_are_numbered() {
        let mut buf = Vec::new();
        write_tables(&mut buf, &[cyclic_group(2).unwrap()]).unwrap();
        buf.extend_from_slice(b"{\"n\": 2}\n");
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let t = run(Check::Simple, &buf[..], &mut out, &mut err).unwrap();
        assert_eq!((t.records, t.malformed), (1, 1));
        assert!(String::from_utf8_lossy(&err).contains("line 2"));
        assert_eq!(lines(&out)[0]["simple"], true);
    }

    #[test]
    fn iso_classes_point_at_first_member() {
        let c4 = cyclic_group(4).unwrap();
        let v4 = group::direct_product(&cyclic_group(2).unwrap(), &cyclic_group(2).unwrap());
        let mut buf = Vec::new();
        write_tables(&mut buf, &[c4.clone(), v4, c4]).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        run(Check::Iso, &buf[..], &mut out, &mut err).unwrap();
        let v = lines(&out);
        assert_eq!(v[2]["iso_class"], 0);
        assert_eq!(v[1]["iso_class"], 1);
        assert_eq!(v[2]["first_line"], 1);
    }
}
