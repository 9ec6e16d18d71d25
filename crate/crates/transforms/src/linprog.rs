//! Dense two-phase simplex, small and deterministic. Problem sizes here are
//! a few hundred rows, so a tableau with Bland's rule is plenty: it cannot
//! cycle, and the pivot order is reproducible.

/// Maximize `objective . x` over free x subject to `a_ub x <= b_ub` and
/// `a_eq x = b_eq`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

const PIVOT_TOL: f64 = 1e-9;

struct Tableau {
    rows: usize,
    cols: usize,
    // (rows + 1) x (cols + 1), row-major; last row is the objective, last
    // column the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.t[r * (self.cols + 1) + c]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.cols + 1;
        let inv = 1.0 / self.at(row, col);
        for c in 0..width {
            self.t[row * width + c] *= inv;
        }
        for r in 0..=self.rows {
            if r == row {
                continue;
            }
            let factor = self.at(r, col);
            if factor == 0.0 {
                continue;
            }
            for c in 0..width {
                self.t[r * width + c] -= factor * self.t[row * width + c];
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the lowest index with positive
    /// reduced cost; the leaving row breaks ratio ties by lowest basis index.
    /// Returns false if the problem is unbounded.
    fn run(&mut self, allowed_cols: usize) -> bool {
        loop {
            let mut enter = None;
            for c in 0..allowed_cols {
                if self.at(self.rows, c) > PIVOT_TOL {
                    enter = Some(c);
                    break;
                }
            }
            let Some(col) = enter else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, col);
                if a > PIVOT_TOL {
                    let ratio = self.at(r, self.cols) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - PIVOT_TOL
                                || (ratio < lratio + PIVOT_TOL
                                    && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else { return false };
            self.pivot(row, col);
        }
    }
}

/// Returns the maximizer and value, or None when infeasible or unbounded.
pub fn simplex_maximize(lp: &LinearProgram) -> Option<(Vec<f64>, f64)> {
    let n = lp.objective.len();
    let m_ub = lp.a_ub.len();
    let m_eq = lp.a_eq.len();
    let rows = m_ub + m_eq;
    // Free variables split as x = u - v; then slacks, then one artificial
    // per row for a trivial phase-1 basis.
    let structural = 2 * n + m_ub;
    let cols = structural + rows;
    let width = cols + 1;
    let mut t = Tableau {
        rows,
        cols,
        t: vec![0.0; (rows + 1) * width],
        basis: (structural..cols).collect(),
    };

    for r in 0..rows {
        let (coeffs, rhs, slack) = if r < m_ub {
            (&lp.a_ub[r], lp.b_ub[r], Some(2 * n + r))
        } else {
            (&lp.a_eq[r - m_ub], lp.b_eq[r - m_ub], None)
        };
        assert_eq!(coeffs.len(), n, "constraint row arity mismatch");
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        for (j, &a) in coeffs.iter().enumerate() {
            *t.at_mut(r, 2 * j) = sign * a;
            *t.at_mut(r, 2 * j + 1) = -sign * a;
        }
        if let Some(sc) = slack {
            *t.at_mut(r, sc) = sign;
        }
        *t.at_mut(r, structural + r) = 1.0;
        *t.at_mut(r, cols) = sign * rhs;
    }

    // Phase 1: drive the artificials to zero. The objective row holds the
    // reduced costs of maximizing -sum(artificials) for the artificial basis.
    for c in 0..=cols {
        let mut sum = 0.0;
        for r in 0..rows {
            sum += t.at(r, c);
        }
        *t.at_mut(rows, c) = if c >= structural && c < cols {
            0.0
        } else {
            sum
        };
    }
    if !t.run(structural) {
        return None;
    }
    if t.at(rows, cols).abs() > 1e-7 {
        return None; // infeasible
    }
    // Pivot any artificial still basic (necessarily at zero) out of the
    // basis; a row with no structural pivot left is redundant and inert.
    for r in 0..rows {
        if t.basis[r] >= structural {
            if let Some(col) = (0..structural).find(|&c| t.at(r, c).abs() > PIVOT_TOL) {
                t.pivot(r, col);
            }
        }
    }

    // Phase 2 objective: reduced costs of the real objective.
    for c in 0..=cols {
        *t.at_mut(rows, c) = 0.0;
    }
    for j in 0..n {
        *t.at_mut(rows, 2 * j) = lp.objective[j];
        *t.at_mut(rows, 2 * j + 1) = -lp.objective[j];
    }
    for r in 0..rows {
        let b = t.basis[r];
        let cost = if b < 2 * n {
            let j = b / 2;
            if b % 2 == 0 {
                lp.objective[j]
            } else {
                -lp.objective[j]
            }
        } else {
            0.0
        };
        if cost != 0.0 {
            let width = cols + 1;
            for c in 0..width {
                t.t[rows * width + c] -= cost * t.t[r * width + c];
            }
        }
    }
    if !t.run(structural) {
        return None; // unbounded
    }

    let mut x = vec![0.0; n];
    for r in 0..rows {
        let b = t.basis[r];
        if b < 2 * n {
            let v = t.at(r, cols);
            if b % 2 == 0 {
                x[b / 2] += v;
            } else {
                x[b / 2] -= v;
            }
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Some((x, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_constrained_linear_functional() {
        // max x + 2y with |x| <= 1, |y| <= 2 -> 5 at (1, 2).
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            a_ub: vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ],
            b_ub: vec![1.0, 1.0, 2.0, 2.0],
            ..Default::default()
        };
        let (x, v) = simplex_maximize(&lp).unwrap();
        assert!((v - 5.0).abs() < 1e-9);
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn equality_ties_the_coordinates() {
        // max x + y with x = -y, x <= 3: free direction is flat, value 0.
        let lp = LinearProgram {
            objective: vec![1.0, 1.0],
            a_ub: vec![vec![1.0, 0.0]],
            b_ub: vec![3.0],
            a_eq: vec![vec![1.0, 1.0]],
            b_eq: vec![0.0],
        };
        let (_, v) = simplex_maximize(&lp).unwrap();
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded_are_none() {
        let infeasible = LinearProgram {
            objective: vec![1.0],
            a_ub: vec![vec![1.0], vec![-1.0]],
            b_ub: vec![-2.0, 1.0], // x <= -2 and x >= -1
            ..Default::default()
        };
        assert!(simplex_maximize(&infeasible).is_none());

        let unbounded = LinearProgram {
            objective: vec![1.0],
            a_ub: vec![vec![-1.0]],
            b_ub: vec![0.0],
            ..Default::default()
        };
        assert!(simplex_maximize(&unbounded).is_none());
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // max -x subject to -x <= -2  (x >= 2): optimum -2 at x = 2.
        let lp = LinearProgram {
            objective: vec![-1.0],
            a_ub: vec![vec![-1.0]],
            b_ub: vec![-2.0],
            ..Default::default()
        };
        let (x, v) = simplex_maximize(&lp).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-9);
        assert!((v + 2.0).abs() < 1e-9);
    }
}
