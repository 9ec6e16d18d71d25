//! Points are flat `&[f64]` slices of runtime dimension; balls and cubes own
//! their centers.

pub fn dist2(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn dist(x: &[f64], y: &[f64]) -> f64 {
    dist2(x, y).sqrt()
}

pub fn linf_dist(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Ball { center, radius }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains_open(&self, x: &[f64]) -> bool {
        dist2(&self.center, x) < self.radius * self.radius
    }

    pub fn contains_closed(&self, x: &[f64]) -> bool {
        dist2(&self.center, x) <= self.radius * self.radius
    }

    /// Concentric dilation by `t`.
    pub fn scaled(&self, t: f64) -> Ball {
        Ball {
            center: self.center.clone(),
            radius: self.radius * t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cube {
    pub center: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn new(center: Vec<f64>, side: f64) -> Self {
        Cube { center, side }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Half-open membership: `c - l/2 <= x < c + l/2` per coordinate.
    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.center.len());
        let half = self.side / 2.0;
        self.center
            .iter()
            .zip(x)
            .all(|(c, v)| c - half <= *v && *v < c + half)
    }

    /// Concentric dilation by `t`.
    pub fn scaled(&self, t: f64) -> Cube {
        Cube {
            center: self.center.clone(),
            side: self.side * t,
        }
    }

    pub fn diam(&self) -> f64 {
        self.side * (self.center.len() as f64).sqrt()
    }

    pub fn min_corner(&self) -> Vec<f64> {
        self.center.iter().map(|c| c - self.side / 2.0).collect()
    }

    pub fn max_corner(&self) -> Vec<f64> {
        self.center.iter().map(|c| c + self.side / 2.0).collect()
    }

    /// True when the closed boxes overlap in every coordinate.
    pub fn intersects(&self, other: &Cube) -> bool {
        let ha = self.side / 2.0;
        let hb = other.side / 2.0;
        self.center
            .iter()
            .zip(&other.center)
            .all(|(a, b)| (a - b).abs() < ha + hb)
    }

    /// True when `other` lies inside `self` (closed containment).
    pub fn contains_cube(&self, other: &Cube) -> bool {
        let ha = self.side / 2.0;
        let hb = other.side / 2.0;
        self.center
            .iter()
            .zip(&other.center)
            .all(|(a, b)| (a - b).abs() <= ha - hb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_open_membership() {
        let q = Cube::new(vec![0.0, 0.0], 2.0);
        assert!(q.contains(&[-1.0, -1.0]));
        assert!(!q.contains(&[1.0, 0.0]));
        assert!(q.contains(&[0.999999, -0.5]));
    }

    #[test]
    fn open_ball_excludes_boundary() {
        let b = Ball::new(vec![0.0, 0.0], 1.0);
        assert!(!b.contains_open(&[1.0, 0.0]));
        assert!(b.contains_closed(&[1.0, 0.0]));
    }

    #[test]
    fn cube_containment_and_intersection() {
        let big = Cube::new(vec![0.0, 0.0], 4.0);
        let small = Cube::new(vec![1.0, 1.0], 2.0);
        assert!(big.contains_cube(&small));
        assert!(big.intersects(&small));
        let far = Cube::new(vec![2.4, 0.0], 1.0);
        assert!(!big.contains_cube(&far));
        assert!(big.intersects(&far));
        let outside = Cube::new(vec![5.0, 0.0], 1.0);
        assert!(!big.intersects(&outside));
        // Cubes sharing only a face count as disjoint (open interiors).
        let touching = Cube::new(vec![2.5, 0.0], 1.0);
        assert!(!big.intersects(&touching));
    }
}
