//! Serialized forms of rings, elements, characters and results.

use finlie_core::abelian::{Character, Qz};
use finlie_core::group::{Group, Mat};
use finlie_core::oracle::{Mode, Outcome, VerificationReport};
use finlie_core::ring::Ring;
use finlie_core::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingRecord {
    pub p: u32,
    pub r: u32,
    pub n: u32,
    pub kind: String,
    /// Coefficients of the residue modulus, constant term first.
    pub f: Vec<u32>,
}

impl RingRecord {
    pub fn of(ring: &Ring) -> RingRecord {
        RingRecord {
            p: ring.p(),
            r: ring.r(),
            n: ring.n(),
            kind: ring.kind().name().to_string(),
            f: ring.modulus().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub preset: String,
    pub ring: RingRecord,
    pub twist: Vec<usize>,
}

impl GroupRecord {
    pub fn of(g: &Group) -> GroupRecord {
        GroupRecord {
            preset: g.preset().name().to_string(),
            ring: RingRecord::of(g.ring()),
            twist: g.datum().weyl()[g.twist()].word.clone(),
        }
    }
}

/// Row-major matrix whose entries are coefficient lists.
pub type ElemRecord = Vec<Vec<Vec<u32>>>;

pub fn elem(g: &Group, m: &Mat) -> ElemRecord {
    g.coord_rows(m)
}

/// Parse a serialized element. A bare integer entry stands for the
/// one-coordinate list `[v]`.
pub fn parse_elem(g: &Group, text: &str) -> Result<Mat> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("element: {e}")))?;
    let rows = v.as_array().ok_or_else(|| Error::InvalidArgument("element must be a list of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::InvalidArgument("row must be a list".into()))?;
        let mut entries = Vec::with_capacity(row.len());
        for e in row {
            entries.push(coeffs(e)?);
        }
        out.push(entries);
    }
    let m = g.from_coord_rows(&out)?;
    if m.dim() != g.dim() || !g.is_member(&m) {
        return Err(Error::NotInSubgroup(g.preset().name().to_string()));
    }
    Ok(m)
}

fn coeffs(v: &Value) -> Result<Vec<u32>> {
    let one = |x: &Value| {
        x.as_u64()
            .and_then(|c| u32::try_from(c).ok())
            .ok_or_else(|| Error::InvalidArgument(format!("bad coefficient {x}")))
    };
    match v {
        Value::Array(cs) => cs.iter().map(one).collect(),
        _ => Ok(vec![one(v)?]),
    }
}

pub fn qz_string(q: &Qz) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_qz(s: &str) -> Result<Qz> {
    let bad = || Error::InvalidArgument(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Qz::new(a, b))
        }
        None => Ok(Qz::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub invariant_factors: Vec<u64>,
    /// Values on the generators, as fractions of a turn.
    pub images: Vec<String>,
}

impl CharacterRecord {
    pub fn of(ch: &Character) -> CharacterRecord {
        CharacterRecord {
            invariant_factors: ch.factors().to_vec(),
            images: ch.image_values().iter().map(qz_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub tag: String,
    pub elem: ElemRecord,
}

pub fn factor(g: &Group, tag: &str, m: &Mat) -> Factor {
    Factor { tag: tag.to_string(), elem: elem(g, m) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub property: String,
    pub scope: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub outcome: String,
    pub witness: Option<String>,
}

impl ReportRecord {
    /// The report without its wall time, which belongs in the footer.
    pub fn of(rep: &VerificationReport) -> ReportRecord {
        let (mode, seed, samples) = match rep.mode {
            Mode::Exhaustive => ("exhaustive", None, None),
            Mode::Sampled { count, seed } => ("sampled", Some(seed), Some(count)),
        };
        let (outcome, witness) = match &rep.outcome {
            Outcome::Pass => ("pass", None),
            Outcome::Fail(w) => ("fail", Some(w.clone())),
            Outcome::Aborted(w) => ("aborted", Some(w.clone())),
        };
        ReportRecord {
            property: rep.property.clone(),
            scope: rep.scope.clone(),
            mode: mode.to_string(),
            seed,
            samples,
            outcome: outcome.to_string(),
            witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use finlie_core::group::{build_group, Preset};
    use finlie_core::ring::{make_ring, RingKind};

    #[test]
    fn element_round_trip() {
        let g = build_group(Preset::SL2, make_ring(2, 2, 2, RingKind::Witt).unwrap(), 0).unwrap();
        assert!(matches!(parse_elem(&g, "[[1,1],[1,1]]"), Err(Error::NotInSubgroup(_))));
        assert!(matches!(parse_elem(&g, "[[1,1],[1]"), Err(Error::InvalidArgument(_))));
        let x = g.root_element(0, g.ring().gen());
        let text = serde_json::to_string(&elem(&g, &x)).unwrap();
        assert_eq!(parse_elem(&g, &text).unwrap(), x);
    }

    #[test]
    fn bare_integers() {
        let g = build_group(Preset::SL2, make_ring(2, 2, 1, RingKind::Witt).unwrap(), 0).unwrap();
        let x = parse_elem(&g, "[[2,1],[3,0]]").unwrap();
        assert_eq!(x, parse_elem(&g, "[[[2],[1]],[[3],[0]]]").unwrap());
    }

    #[test]
    fn rationals() {
        assert_eq!(qz_string(&parse_qz("2/4").unwrap()), "1/2");
        assert_eq!(qz_string(&parse_qz("0").unwrap()), "0");
        assert!(parse_qz("1/0").is_err());
    }
}
