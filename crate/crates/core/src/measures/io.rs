//! Text formats: measures as `position,mass` CSV lines, random measures as
//! JSON `{"weights": [...], "measures": [[[position, mass], ...], ...]}`.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{DiscreteMeasure, RandomMeasure};
use crate::error::{Error, Result};

/// One `position,mass` line per atom, LF-terminated, shortest round-trip
/// decimal representation.
pub fn measure_to_csv(measure: &DiscreteMeasure) -> String {
    let mut out = String::new();
    for (p, m) in measure.atoms() {
        writeln!(out, "{p},{m}").expect("write to String");
    }
    out
}

/// Parses `position,mass` lines. Blank lines, `#` comments and a leading
/// non-numeric header are skipped; atoms may come in any order and repeated
/// positions are merged.
pub fn measure_from_csv(text: &str) -> Result<DiscreteMeasure> {
    let mut atoms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let (Some(p), Some(m), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse(format!("line {}: expected `position,mass`", lineno + 1)));
        };
        match (p.parse::<f64>(), m.parse::<f64>()) {
            (Ok(p), Ok(m)) => atoms.push((p, m)),
            _ if atoms.is_empty() && lineno == 0 => continue,
            _ => return Err(Error::Parse(format!("line {}: not a number pair", lineno + 1))),
        }
    }
    if atoms.is_empty() {
        return Err(Error::Parse("no atoms".into()));
    }
    DiscreteMeasure::from_unsorted(atoms)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomMeasureDoc {
    weights: Vec<f64>,
    measures: Vec<Vec<(f64, f64)>>,
}

pub fn random_measure_to_json(rm: &RandomMeasure) -> String {
    let doc = RandomMeasureDoc {
        weights: rm.weights().collect(),
        measures: rm.components().iter().map(|(_, m)| m.atoms().collect()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serialises")
}

pub fn random_measure_from_json(text: &str) -> Result<RandomMeasure> {
    let doc: RandomMeasureDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.weights.len() != doc.measures.len() {
        return Err(Error::Parse(format!(
            "{} weights but {} measures",
            doc.weights.len(),
            doc.measures.len()
        )));
    }
    let components = doc
        .weights
        .into_iter()
        .zip(doc.measures)
        .map(|(w, atoms)| Ok((w, DiscreteMeasure::from_unsorted(atoms)?)))
        .collect::<Result<Vec<_>>>()?;
    RandomMeasure::new(components)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let m = DiscreteMeasure::new(vec![(-0.1, 0.3), (2.5, 0.7)]).unwrap();
        let text = measure_to_csv(&m);
        assert_eq!(text, "-0.1,0.3\n2.5,0.7\n");
        assert_eq!(measure_from_csv(&text).unwrap(), m);
    }

    #[test]
    fn csv_header_and_errors() {
        let m = measure_from_csv("position,mass\n1,0.5\n0,0.5\n").unwrap();
        assert_eq!(m.positions(), &[0.0, 1.0]);
        assert!(measure_from_csv("").is_err());
        assert!(measure_from_csv("1,0.5\nx,0.5\n").is_err());
        assert!(measure_from_csv("1,0.5,3\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let rm = RandomMeasure::new(vec![
            (0.25, DiscreteMeasure::dirac(0.0)),
            (0.75, DiscreteMeasure::rademacher()),
        ])
        .unwrap();
        let back = random_measure_from_json(&random_measure_to_json(&rm)).unwrap();
        assert_eq!(back, rm);
        assert!(random_measure_from_json(r#"{"weights":[1.0],"measures":[]}"#).is_err());
        assert!(random_measure_from_json(r#"{"weights":[1.0],"measures":[[[0,1]]],"x":1}"#).is_err());
    }
}
