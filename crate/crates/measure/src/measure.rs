use std::collections::HashMap;

use crate::geometry::{dist2, linf_dist, Ball, Cube};
use crate::params::KernelParams;
use crate::MeasureError;

/// Weighted atoms at resolution `h`.
///
/// Construction enforces: finite coordinates, finite non-negative weights,
/// `h > 0`, and pairwise atom separation of at least `h/2`. The separation
/// floor is what lets every radial quantity truncate at `h` without hiding
/// genuinely coincident mass.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    d: usize,
    points: Vec<f64>, // row-major, len = d * count
    weights: Vec<f64>,
    resolution: f64,
}

impl DiscreteMeasure {
    pub fn new(
        d: usize,
        points: Vec<f64>,
        weights: Vec<f64>,
        resolution: f64,
    ) -> Result<Self, MeasureError> {
        if d == 0 {
            return Err(MeasureError::InvalidMeasure("dimension must be positive".into()));
        }
        if !resolution.is_finite() || resolution <= 0.0 {
            return Err(MeasureError::InvalidMeasure(format!(
                "resolution must be positive and finite, got {resolution}"
            )));
        }
        if points.len() != d * weights.len() {
            return Err(MeasureError::InvalidMeasure(format!(
                "{} coordinates do not form {} points of dimension {}",
                points.len(),
                weights.len(),
                d
            )));
        }
        if let Some(bad) = points.iter().find(|v| !v.is_finite()) {
            return Err(MeasureError::InvalidMeasure(format!(
                "non-finite coordinate {bad}"
            )));
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(MeasureError::InvalidMeasure(format!(
                    "weight {w} at atom {i} (weights must be finite and non-negative)"
                )));
            }
        }
        let mu = DiscreteMeasure {
            d,
            points,
            weights,
            resolution,
        };
        mu.check_separation()?;
        Ok(mu)
    }

    /// Rejects atom pairs closer than `h/2` with a cell hash, so construction
    /// stays near-linear even for large grids.
    fn check_separation(&self) -> Result<(), MeasureError> {
        let n = self.len();
        if n < 2 {
            return Ok(());
        }
        let cell = self.resolution / 2.0;
        let min2 = cell * cell;
        let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let key: Vec<i64> = self
                .point(i)
                .iter()
                .map(|v| (v / cell).floor() as i64)
                .collect();
            grid.entry(key).or_default().push(i);
        }
        let offsets = neighbor_offsets(self.d);
        for (key, members) in &grid {
            for off in &offsets {
                let nkey: Vec<i64> = key.iter().zip(off).map(|(k, o)| k + o).collect();
                // Visit each unordered cell pair once.
                if nkey < *key {
                    continue;
                }
                let Some(others) = grid.get(&nkey) else {
                    continue;
                };
                for &i in members {
                    for &j in others {
                        if nkey == *key && j <= i {
                            continue;
                        }
                        if dist2(self.point(i), self.point(j)) < min2 {
                            return Err(MeasureError::InvalidMeasure(format!(
                                "atoms {i} and {j} are closer than half the resolution {}",
                                self.resolution
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    pub fn coords(&self) -> &[f64] {
        &self.points
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Axis-aligned bounding box of the atoms, `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter_points().skip(1) {
            for j in 0..self.d {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        Some((lo, hi))
    }

    /// Exact diameter of the atom cloud (largest pairwise distance).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            let pi = self.point(i);
            for l in (i + 1)..n {
                best = best.max(dist2(pi, self.point(l)));
            }
        }
        best.sqrt()
    }

    /// Mass of the open ball.
    pub fn ball_mass(&self, ball: &Ball) -> f64 {
        let r2 = ball.radius * ball.radius;
        let mut m = 0.0;
        for (i, p) in self.iter_points().enumerate() {
            if dist2(&ball.center, p) < r2 {
                m += self.weights[i];
            }
        }
        m
    }

    /// Mass of the closed ball; used for candidate-radius suprema.
    pub fn ball_mass_closed(&self, ball: &Ball) -> f64 {
        let r2 = ball.radius * ball.radius;
        let mut m = 0.0;
        for (i, p) in self.iter_points().enumerate() {
            if dist2(&ball.center, p) <= r2 {
                m += self.weights[i];
            }
        }
        m
    }

    /// Mass of the half-open cube.
    pub fn cube_mass(&self, cube: &Cube) -> f64 {
        let mut m = 0.0;
        for (i, p) in self.iter_points().enumerate() {
            if cube.contains(p) {
                m += self.weights[i];
            }
        }
        m
    }

    /// Mass of the closed cube (max-norm distance to the center at most
    /// side/2); the shell scan works with closures.
    pub fn cube_mass_closed(&self, cube: &Cube) -> f64 {
        let half = cube.side / 2.0;
        let mut m = 0.0;
        for (i, p) in self.iter_points().enumerate() {
            if linf_dist(&cube.center, p) <= half {
                m += self.weights[i];
            }
        }
        m
    }

    /// `mass(B) / r^s`.
    pub fn density_ball(&self, k: &KernelParams, ball: &Ball) -> Result<f64, MeasureError> {
        if !(ball.radius > 0.0) {
            return Err(MeasureError::InvalidParams(format!(
                "ball density needs a positive radius, got {}",
                ball.radius
            )));
        }
        Ok(self.ball_mass(ball) / ball.radius.powf(k.s))
    }

    /// `mass(Q) / l^s` with `l` the full sidelength of `cube`.
    pub fn density_cube(&self, k: &KernelParams, cube: &Cube) -> Result<f64, MeasureError> {
        if !(cube.side > 0.0) {
            return Err(MeasureError::InvalidParams(format!(
                "cube density needs a positive sidelength, got {}",
                cube.side
            )));
        }
        Ok(self.cube_mass(cube) / cube.side.powf(k.s))
    }

    /// Supremum over r > 0 of `mass(B(x,r)) / r^s`, truncated below at the
    /// resolution. The supremum over open balls is attained in the limit
    /// r -> dist(x, p) from above, so each candidate radius
    /// `max(h, |x - p_i|)` is evaluated with a closed ball. Membership is
    /// decided on squared distances from a single code path; taking a square
    /// root and squaring back can round below the defining distance and drop
    /// the atom that generated the candidate.
    pub fn maximal_density(&self, k: &KernelParams, x: &[f64]) -> f64 {
        let h2 = self.resolution * self.resolution;
        let d2s: Vec<f64> = self.iter_points().map(|p| dist2(x, p)).collect();
        let mut best = 0.0f64;
        for &c in &d2s {
            let r2 = c.max(h2);
            let mut m = 0.0;
            for (j, &dj) in d2s.iter().enumerate() {
                if dj <= r2 {
                    m += self.weights[j];
                }
            }
            // r2^(s/2) = r^s without reconstructing r.
            best = best.max(m / r2.powf(k.s / 2.0));
        }
        best
    }

    /// Least `k >= 0` such that `B(x, 15^k r)` is doubling, i.e.
    /// `mass(B(x, 15^{k+1} r)) <= 225^s * mass(B(x, 15^k r))`.
    pub fn doubling_ball_index(
        &self,
        k: &KernelParams,
        x: &[f64],
        r: f64,
    ) -> Result<u32, MeasureError> {
        if !(r > 0.0) {
            return Err(MeasureError::InvalidParams(format!(
                "doubling scan needs a positive starting radius, got {r}"
            )));
        }
        if self.ball_mass(&Ball::new(x.to_vec(), r)) <= 0.0 {
            return Err(MeasureError::NoDoublingIndex(format!(
                "the ball of radius {r} at the scan origin has zero mass"
            )));
        }
        let factor = 225.0f64.powf(k.s);
        let mut radius = r;
        for step in 0..=MAX_DOUBLING_STEPS {
            let inner = self.ball_mass(&Ball::new(x.to_vec(), radius));
            let outer = self.ball_mass(&Ball::new(x.to_vec(), radius * 15.0));
            if outer <= factor * inner {
                return Ok(step);
            }
            radius *= 15.0;
        }
        // A positive-mass start makes the scan terminate: once the inner ball
        // swallows the support, inner == outer == total.
        unreachable!("doubling scan failed to terminate on a finite measure");
    }
}

/// 15x radius jumps cover any finite spread long before this.
const MAX_DOUBLING_STEPS: u32 = 300;

fn neighbor_offsets(d: usize) -> Vec<Vec<i64>> {
    let mut offsets = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::with_capacity(offsets.len() * 3);
        for base in &offsets {
            for step in [-1i64, 0, 1] {
                let mut v = base.clone();
                v.push(step);
                next.push(v);
            }
        }
        offsets = next;
    }
    offsets
}

/// `sup_T T^2 * mass({value > T})` for a finite list of (value, weight)
/// pairs. The supremum is approached as T increases to one of the values, so
/// candidates are the distinct values with mass taken over `value >= v`.
pub fn weak_l2_quasinorm(values: &[f64], weights: &[f64]) -> f64 {
    assert_eq!(
        values.len(),
        weights.len(),
        "values and weights must pair up"
    );
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite values"));
    let mut best = 0.0f64;
    let mut cum = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let v = values[order[i]];
        // Fold ties into the cumulative mass before evaluating the candidate.
        while i < order.len() && values[order[i]] == v {
            cum += weights[order[i]];
            i += 1;
        }
        if v > 0.0 {
            best = best.max(v * v * cum);
        }
    }
    best
}
