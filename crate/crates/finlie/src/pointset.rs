//! PointSet line files: a header record, then one tuple per line.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::records::{ElemRecord, GroupRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetHeader {
    pub group: GroupRecord,
    /// Weyl words of the twists of `T` and `T'`.
    pub twists: (Vec<usize>, Vec<usize>),
    pub level: u32,
    pub predicate: String,
    pub count: usize,
}

/// One point: named coordinates, each a serialized element.
pub type Point = Vec<(String, ElemRecord)>;

/// Write `points` in canonical order: the serialized lines are sorted.
pub fn write_pointset(out: &mut impl Write, header: &PointSetHeader, points: &[Point]) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(header)?)?;
    let mut lines: Vec<String> = points.iter().map(serde_json::to_string).collect::<Result<_, _>>()?;
    lines.sort();
    for l in lines {
        writeln!(out, "{l}")?;
    }
    Ok(())
}

pub fn read_pointset(input: impl BufRead) -> io::Result<(PointSetHeader, Vec<Point>)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| io::Error::new(io::ErrorKind::UnexpectedEof, "empty point set"))??;
    let header: PointSetHeader = serde_json::from_str(&first)?;
    let mut points = Vec::new();
    for l in lines {
        let l = l?;
        if l.trim().is_empty() {
            continue;
        }
        points.push(serde_json::from_str(&l)?);
    }
    if points.len() != header.count {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("header announces {} points, file has {}", header.count, points.len()),
        ));
    }
    Ok((header, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::RingRecord;

    #[test]
    fn round_trip() {
        let header = PointSetHeader {
            group: GroupRecord {
                preset: "SL2".into(),
                ring: RingRecord { p: 2, r: 2, n: 1, kind: "witt".into(), f: vec![0, 1] },
                twist: vec![],
            },
            twists: (vec![], vec![0]),
            level: 1,
            predicate: "sigma".into(),
            count: 2,
        };
        let b: Point = vec![("y".into(), vec![vec![vec![1], vec![0]], vec![vec![0], vec![1]]])];
        let a: Point = vec![("y".into(), vec![vec![vec![0], vec![1]], vec![vec![3], vec![0]]])];
        let mut buf = Vec::new();
        write_pointset(&mut buf, &header, &[b.clone(), a.clone()]).unwrap();
        let (h, pts) = read_pointset(&buf[..]).unwrap();
        assert_eq!(h, header);
        assert_eq!(pts, vec![a, b]);
    }
}
