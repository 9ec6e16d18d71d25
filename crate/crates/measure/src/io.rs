//! On-disk measure format: one JSON header line, then one CSV row
//! `x1,...,xd,w` per atom. Floats round-trip losslessly (shortest
//! representation), so save/load is an identity on the atom data.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{DiscreteMeasure, MeasureError};

#[derive(Serialize, Deserialize)]
struct Header {
    d: usize,
    h: f64,
    count: usize,
}

pub fn save_measure(mu: &DiscreteMeasure, path: &Path) -> Result<(), MeasureError> {
    let mut out = BufWriter::new(File::create(path)?);
    let header = Header {
        d: mu.dim(),
        h: mu.resolution(),
        count: mu.len(),
    };
    serde_json::to_writer(&mut out, &header)
        .map_err(|e| MeasureError::MalformedFile(e.to_string()))?;
    out.write_all(b"\n")?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for i in 0..mu.len() {
        let mut row: Vec<f64> = mu.point(i).to_vec();
        row.push(mu.weight(i));
        w.serialize(row)
            .map_err(|e| MeasureError::MalformedFile(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_measure(path: &Path) -> Result<DiscreteMeasure, MeasureError> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut header_line = String::new();
    reader.read_line(&mut header_line)?;
    let header: Header = serde_json::from_str(header_line.trim())
        .map_err(|e| MeasureError::MalformedFile(format!("header: {e}")))?;

    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(reader);
    let mut points = Vec::with_capacity(header.d * header.count);
    let mut weights = Vec::with_capacity(header.count);
    for (line, record) in csv_reader.deserialize::<Vec<f64>>().enumerate() {
        let row = record.map_err(|e| MeasureError::MalformedFile(format!("row {line}: {e}")))?;
        if row.len() != header.d + 1 {
            return Err(MeasureError::MalformedFile(format!(
                "row {line} has {} fields, expected {}",
                row.len(),
                header.d + 1
            )));
        }
        let (coords, w) = row.split_at(header.d);
        if w[0] < 0.0 {
            return Err(MeasureError::MalformedFile(format!(
                "row {line} carries a negative weight {}",
                w[0]
            )));
        }
        points.extend_from_slice(coords);
        weights.push(w[0]);
    }
    if weights.len() != header.count {
        return Err(MeasureError::MalformedFile(format!(
            "header promised {} atoms, file carries {}",
            header.count,
            weights.len()
        )));
    }
    DiscreteMeasure::new(header.d, points, weights, header.h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let mu = DiscreteMeasure::new(
            2,
            vec![0.1, 0.2, -1.5, 2.25, 1.0 / 3.0, 0.7071067811865476],
            vec![1.0, 0.25, 1e-9],
            0.05,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mu.csv");
        save_measure(&mu, &path).unwrap();
        let back = load_measure(&path).unwrap();
        assert_eq!(mu, back);
    }

    #[test]
    fn rejects_negative_weight_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "{\"d\":2,\"h\":0.1,\"count\":1}\n0.0,0.0,-1.0\n").unwrap();
        let err = load_measure(&path).unwrap_err();
        assert!(err.to_string().contains("negative weight"));
    }

    #[test]
    fn rejects_count_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "{\"d\":2,\"h\":0.1,\"count\":2}\n0.0,0.0,1.0\n").unwrap();
        assert!(load_measure(&path).is_err());
    }
}
