use std::io::Write;

use crate::{LatticeConfig, LatticeError, TripleCube};

/// Closed axis-aligned box, `lo <= hi` strictly per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, LatticeError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(LatticeError::DegenerateWindow(
                "box corners must share a positive dimension".into(),
            ));
        }
        for (l, h) in lo.iter().zip(&hi) {
            if !(l < h) {
                return Err(LatticeError::DegenerateWindow(format!(
                    "box is degenerate: lo {l} !< hi {h}"
                )));
            }
        }
        Ok(AxisBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(x)
            .all(|((l, h), v)| l <= v && v <= h)
    }

    /// Grow the box by `margin` on every side.
    pub fn inflated(&self, margin: f64) -> AxisBox {
        AxisBox {
            lo: self.lo.iter().map(|v| v - margin).collect(),
            hi: self.hi.iter().map(|v| v + margin).collect(),
        }
    }

    pub fn contains_box(&self, other: &AxisBox) -> bool {
        self.lo
            .iter()
            .zip(&other.lo)
            .all(|(a, b)| a <= b)
            && self.hi.iter().zip(&other.hi).all(|(a, b)| a >= b)
    }
}

/// A finite slab of the lattice: generations `g_min..=g_max`, restricted to
/// cubes whose underlying cell meets `bbox`.
#[derive(Clone, Debug)]
pub struct LatticeWindow {
    pub bbox: AxisBox,
    pub g_min: i32,
    pub g_max: i32,
}

impl LatticeWindow {
    pub fn new(bbox: AxisBox, g_min: i32, g_max: i32) -> Result<Self, LatticeError> {
        if g_min > g_max {
            return Err(LatticeError::DegenerateWindow(format!(
                "generation range [{g_min}, {g_max}] is empty"
            )));
        }
        Ok(LatticeWindow { bbox, g_min, g_max })
    }

    pub fn contains_generation(&self, g: i32) -> bool {
        self.g_min <= g && g <= self.g_max
    }

    /// Per-coordinate index range (inclusive) of underlying cells meeting the
    /// box at `generation`.
    pub fn index_ranges(
        &self,
        config: &LatticeConfig,
        generation: i32,
    ) -> Vec<(i64, i64)> {
        let l = config.cell_side(generation);
        self.bbox
            .lo
            .iter()
            .zip(&self.bbox.hi)
            .zip(&config.origin)
            .map(|((lo, hi), o)| {
                // Cell [i*l, (i+1)*l) meets [lo, hi] iff i*l <= hi and (i+1)*l > lo.
                let i_lo = ((lo - o) / l).floor() as i64;
                let i_hi = ((hi - o) / l).floor() as i64;
                (i_lo, i_hi)
            })
            .collect()
    }

    /// Grandparent of `q`, checked to stay within the window's generations.
    pub fn grandparent(&self, q: &TripleCube) -> Result<TripleCube, LatticeError> {
        let g = q.generation - 2;
        if !self.contains_generation(g) {
            return Err(LatticeError::GenerationOutsideWindow {
                requested: g,
                g_min: self.g_min,
                g_max: self.g_max,
            });
        }
        Ok(q.grandparent())
    }
}

const ENUMERATION_CAP: u128 = 20_000_000;

/// All window cubes in deterministic order: generation ascending, then
/// lexicographic index.
pub fn enumerate_window(
    config: &LatticeConfig,
    window: &LatticeWindow,
) -> Result<Vec<TripleCube>, LatticeError> {
    let mut total: u128 = 0;
    for g in window.g_min..=window.g_max {
        let mut count: u128 = 1;
        for (lo, hi) in window.index_ranges(config, g) {
            count = count.saturating_mul((hi - lo + 1).max(0) as u128);
        }
        total = total.saturating_add(count);
    }
    if total > ENUMERATION_CAP {
        return Err(LatticeError::EnumerationTooLarge {
            estimate: total,
            cap: ENUMERATION_CAP,
        });
    }

    let mut out = Vec::with_capacity(total as usize);
    for g in window.g_min..=window.g_max {
        let ranges = window.index_ranges(config, g);
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'cells: loop {
            out.push(TripleCube::new(g, idx.clone()));
            // Odometer increment in lexicographic order (last coordinate fastest).
            for j in (0..idx.len()).rev() {
                if idx[j] < ranges[j].1 {
                    idx[j] += 1;
                    continue 'cells;
                }
                idx[j] = ranges[j].0;
            }
            break;
        }
    }
    Ok(out)
}

/// CSV rows: generation, index per axis, center per axis, triple sidelength.
pub fn write_cubes_csv<W: Write>(
    config: &LatticeConfig,
    cubes: &[TripleCube],
    out: W,
) -> csv::Result<()> {
    let d = config.dim();
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let mut header = vec!["generation".to_string()];
    header.extend((0..d).map(|j| format!("index_{j}")));
    header.extend((0..d).map(|j| format!("center_{j}")));
    header.push("side".to_string());
    w.write_record(&header)?;
    for q in cubes {
        let mut rec = vec![q.generation.to_string()];
        rec.extend(q.index.iter().map(|i| i.to_string()));
        let center = q.center(config);
        rec.extend(center.iter().map(|c| format!("{c}")));
        rec.push(format!("{}", q.side(config)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
