use std::collections::BTreeMap;

use rieszlab_measure::{dist2, DiscreteMeasure};

use crate::TransformError;

/// Smooth nu by a tent bump of the given radius, sampling the result on a
/// regular grid of the given spacing. Each atom's mass is spread over the
/// grid cells inside its bump with weights renormalized per atom, so the
/// total mass is preserved exactly rather than up to quadrature error.
pub fn mollify(
    nu: &DiscreteMeasure,
    radius: f64,
    spacing: f64,
) -> Result<DiscreteMeasure, TransformError> {
    if !(radius > 0.0) || !radius.is_finite() || !(spacing > 0.0) || !spacing.is_finite() {
        return Err(TransformError::InvalidParams(format!(
            "bump radius and grid spacing must be positive reals, got {radius} and {spacing}"
        )));
    }
    if radius < spacing {
        return Err(TransformError::InvalidParams(format!(
            "bump radius {radius} is below the grid spacing {spacing}; the bump must cover \
             at least one cell"
        )));
    }
    let d = nu.dim();
    if nu.len() == 0 {
        return Ok(DiscreteMeasure::new(d, Vec::new(), Vec::new(), spacing)?);
    }

    let reach = (radius / spacing).ceil() as i64;
    let mut cells: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    let mut offsets: Vec<Vec<i64>> = Vec::new();
    let mut cursor = vec![-reach; d];
    loop {
        offsets.push(cursor.clone());
        let mut carry = true;
        for slot in cursor.iter_mut().rev() {
            if !carry {
                break;
            }
            *slot += 1;
            if *slot > reach {
                *slot = -reach;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }

    let cell_center = |cell: &[i64]| -> Vec<f64> {
        cell.iter()
            .map(|&c| (c as f64 + 0.5) * spacing)
            .collect()
    };
    let mut scratch: Vec<(Vec<i64>, f64)> = Vec::new();
    for i in 0..nu.len() {
        let p = nu.point(i);
        let base: Vec<i64> = p.iter().map(|&x| (x / spacing).floor() as i64).collect();
        scratch.clear();
        let mut total = 0.0;
        for off in &offsets {
            let cell: Vec<i64> = base.iter().zip(off).map(|(b, o)| b + o).collect();
            let center = cell_center(&cell);
            let dist = dist2(&center, p).sqrt();
            let bump = 1.0 - dist / radius;
            if bump > 0.0 {
                total += bump;
                scratch.push((cell, bump));
            }
        }
        if total <= 0.0 {
            // The atom's own cell center can sit exactly on the bump edge
            // only if radius < spacing, which is excluded; keep the mass in
            // the atom's cell as a last resort.
            *cells.entry(base).or_insert(0.0) += nu.weight(i);
            continue;
        }
        for (cell, bump) in scratch.drain(..) {
            *cells.entry(cell).or_insert(0.0) += nu.weight(i) * bump / total;
        }
    }

    let mut points = Vec::with_capacity(cells.len() * d);
    let mut weights = Vec::with_capacity(cells.len());
    for (cell, w) in cells {
        if w > 0.0 {
            points.extend(cell_center(&cell));
            weights.push(w);
        }
    }
    Ok(DiscreteMeasure::new(d, points, weights, spacing)?)
}
