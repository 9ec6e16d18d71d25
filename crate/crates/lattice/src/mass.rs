use std::collections::{BTreeSet, HashMap};

use rieszlab_measure::DiscreteMeasure;

use crate::{LatticeConfig, LatticeError, TripleCube};

/// Per-generation histogram of atom mass over half-open lattice cells.
///
/// A triple cube's mass is the sum over its 3^d underlying cells, which tile
/// the triple exactly, so lookups match direct cube masses up to summation
/// order.
pub struct TripleMassIndex {
    config: LatticeConfig,
    g_min: i32,
    g_max: i32,
    cells: Vec<HashMap<Vec<i64>, f64>>,
}

impl TripleMassIndex {
    pub fn build(
        mu: &DiscreteMeasure,
        config: &LatticeConfig,
        g_min: i32,
        g_max: i32,
    ) -> Result<Self, LatticeError> {
        if g_min > g_max {
            return Err(LatticeError::InvalidConfig(format!(
                "generation range [{g_min}, {g_max}] is empty"
            )));
        }
        if mu.dim() != config.dim() {
            return Err(LatticeError::InvalidConfig(format!(
                "measure dimension {} does not match lattice dimension {}",
                mu.dim(),
                config.dim()
            )));
        }
        let mut cells = Vec::with_capacity((g_max - g_min + 1) as usize);
        for g in g_min..=g_max {
            let mut layer: HashMap<Vec<i64>, f64> = HashMap::new();
            for (i, p) in mu.iter_points().enumerate() {
                *layer.entry(config.cell_of(g, p)).or_insert(0.0) += mu.weight(i);
            }
            cells.push(layer);
        }
        Ok(TripleMassIndex {
            config: config.clone(),
            g_min,
            g_max,
            cells,
        })
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn generations(&self) -> std::ops::RangeInclusive<i32> {
        self.g_min..=self.g_max
    }

    fn layer(&self, g: i32) -> Result<&HashMap<Vec<i64>, f64>, LatticeError> {
        if g < self.g_min || g > self.g_max {
            return Err(LatticeError::GenerationOutsideWindow {
                requested: g,
                g_min: self.g_min,
                g_max: self.g_max,
            });
        }
        Ok(&self.cells[(g - self.g_min) as usize])
    }

    /// Mass of the half-open cell `index` at `generation`.
    pub fn cell_mass(&self, generation: i32, index: &[i64]) -> Result<f64, LatticeError> {
        Ok(self.layer(generation)?.get(index).copied().unwrap_or(0.0))
    }

    /// Mass of the triple cube: its 3^d underlying cells summed in a fixed
    /// lexicographic offset order.
    pub fn triple_mass(&self, q: &TripleCube) -> Result<f64, LatticeError> {
        let layer = self.layer(q.generation)?;
        let d = q.index.len();
        let mut total = 0.0;
        let mut offset = vec![-1i64; d];
        let mut probe = vec![0i64; d];
        'cells: loop {
            for j in 0..d {
                probe[j] = q.index[j] + offset[j];
            }
            if let Some(m) = layer.get(&probe) {
                total += m;
            }
            for j in (0..d).rev() {
                if offset[j] < 1 {
                    offset[j] += 1;
                    continue 'cells;
                }
                offset[j] = -1;
            }
            break;
        }
        Ok(total)
    }

    /// Triples of positive mass at `generation`, sorted by index.
    pub fn positive_triples(&self, generation: i32) -> Result<Vec<TripleCube>, LatticeError> {
        let layer = self.layer(generation)?;
        let d = self.config.dim();
        let mut indices: BTreeSet<Vec<i64>> = BTreeSet::new();
        for cell in layer.keys() {
            let mut offset = vec![-1i64; d];
            'shifts: loop {
                indices.insert(cell.iter().zip(&offset).map(|(c, o)| c - o).collect());
                for j in (0..d).rev() {
                    if offset[j] < 1 {
                        offset[j] += 1;
                        continue 'shifts;
                    }
                    offset[j] = -1;
                }
                break;
            }
        }
        Ok(indices
            .into_iter()
            .map(|index| TripleCube::new(generation, index))
            .collect())
    }

    /// Cells of positive mass at `generation`, sorted by index.
    pub fn occupied_cells(&self, generation: i32) -> Result<Vec<Vec<i64>>, LatticeError> {
        let layer = self.layer(generation)?;
        let mut cells: Vec<Vec<i64>> = layer.keys().cloned().collect();
        cells.sort();
        Ok(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_atoms() -> DiscreteMeasure {
        DiscreteMeasure::new(
            2,
            vec![0.25, 0.25, 0.75, 0.25, 0.26, 0.80],
            vec![1.0, 2.0, 4.0],
            1.0 / 64.0,
        )
        .unwrap()
    }

    #[test]
    fn cell_and_triple_masses() {
        let mu = three_atoms();
        let config = LatticeConfig::unit(2);
        let index = TripleMassIndex::build(&mu, &config, 0, 4).unwrap();
        // Generation 1 cells have side 1/2.
        assert_eq!(index.cell_mass(1, &[0, 0]).unwrap(), 1.0);
        assert_eq!(index.cell_mass(1, &[1, 0]).unwrap(), 2.0);
        assert_eq!(index.cell_mass(1, &[0, 1]).unwrap(), 4.0);
        // The triple at [0,0] covers cells [-1..=1]^2, hence everything.
        let q = TripleCube::new(1, vec![0, 0]);
        assert_eq!(index.triple_mass(&q).unwrap(), 7.0);
        // A distant triple carries nothing.
        let far = TripleCube::new(1, vec![9, 9]);
        assert_eq!(index.triple_mass(&far).unwrap(), 0.0);
    }

    #[test]
    fn positive_triples_are_sorted_and_complete() {
        let mu = three_atoms();
        let config = LatticeConfig::unit(2);
        let index = TripleMassIndex::build(&mu, &config, 0, 3).unwrap();
        let triples = index.positive_triples(2).unwrap();
        assert!(triples.windows(2).all(|w| w[0].index < w[1].index));
        for q in &triples {
            assert!(index.triple_mass(q).unwrap() > 0.0);
        }
        // Every triple with positive mass must be listed.
        for i0 in -2..8 {
            for i1 in -2..8 {
                let q = TripleCube::new(2, vec![i0, i1]);
                let m = index.triple_mass(&q).unwrap();
                assert_eq!(m > 0.0, triples.contains(&q), "index [{i0}, {i1}]");
            }
        }
    }

    #[test]
    fn out_of_range_generation_errors() {
        let mu = three_atoms();
        let config = LatticeConfig::unit(2);
        let index = TripleMassIndex::build(&mu, &config, 0, 2).unwrap();
        assert!(index.cell_mass(3, &[0, 0]).is_err());
        assert!(index.positive_triples(-1).is_err());
    }
}
