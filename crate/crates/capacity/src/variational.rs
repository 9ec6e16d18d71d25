use rieszlab_measure::{DiscreteMeasure, KernelParams};
use rieszlab_transforms::{adjoint_riesz, truncated_riesz};

use crate::potential::riesz_potential;
use crate::CapacityError;

/// Parameters of the penalized defect functional
///
///   I(a) = integral of H_a^p d(a nu) + lambda / (a nu)(core cube),
///   H_a  = (|R(a nu)| - G_A(mu) - tau)_+ ,
///
/// minimized over densities 0 <= a <= 1 on the atoms of nu.
#[derive(Clone, Debug)]
pub struct VariationalConfig {
    /// Exponent of the defect, strictly between 1 and 2.
    pub p: f64,
    /// Defect threshold; only the excess above G_A(mu) + tau is penalized.
    pub tau: f64,
    /// Weight of the 1/mass barrier that keeps the core cube charged.
    pub lambda_reg: f64,
    /// Scale of the comparison potential G_A.
    pub a_param: f64,
    /// Initial gradient step.
    pub step: f64,
    pub max_iter: usize,
    /// Relative-decrease threshold for declaring convergence.
    pub tol: f64,
}

impl Default for VariationalConfig {
    fn default() -> Self {
        VariationalConfig {
            p: 1.5,
            tau: 0.1,
            lambda_reg: 1e-2,
            a_param: 4.0,
            step: 0.1,
            max_iter: 400,
            tol: 1e-9,
        }
    }
}

impl VariationalConfig {
    fn validate(&self) -> Result<(), CapacityError> {
        if !(self.p > 1.0 && self.p < 2.0) {
            return Err(CapacityError::InvalidParams(format!(
                "defect exponent must lie in (1, 2), got {}",
                self.p
            )));
        }
        if !(self.tau >= 0.0) || !self.tau.is_finite() {
            return Err(CapacityError::InvalidParams(format!(
                "threshold must be a finite nonnegative real, got {}",
                self.tau
            )));
        }
        if !(self.lambda_reg > 0.0) || !self.lambda_reg.is_finite() {
            return Err(CapacityError::InvalidParams(format!(
                "barrier weight must be positive, got {}",
                self.lambda_reg
            )));
        }
        if !(self.a_param > 1.0) || !self.a_param.is_finite() {
            return Err(CapacityError::InvalidParams(format!(
                "potential scale must exceed 1, got {}",
                self.a_param
            )));
        }
        if !(self.step > 0.0) || !(self.tol > 0.0) {
            return Err(CapacityError::InvalidParams(format!(
                "step and tolerance must be positive, got step = {}, tol = {}",
                self.step, self.tol
            )));
        }
        Ok(())
    }
}

/// A fixed instance of the minimization: the carrier nu, the comparison
/// potential sampled on its atoms, and the core-cube membership mask.
///
/// The core cube is the closed triple [-1, 2]^d of the unit cube, matching
/// the normalization of the generators in this workspace.
pub struct VariationalProblem {
    k: KernelParams,
    nu: DiscreteMeasure,
    config: VariationalConfig,
    /// G_A(mu) at each atom of nu, h-truncated at mu's resolution.
    g: Vec<f64>,
    core: Vec<bool>,
    eps: f64,
}

/// Result of a projected-gradient run.
#[derive(Clone, Debug)]
pub struct VariationalOutcome {
    /// Minimizing density, one entry per atom of the carrier.
    pub a: Vec<f64>,
    pub objective: f64,
    /// Objective at the full density a = 1.
    pub baseline: f64,
    /// Accepted objective values, starting from the baseline.
    pub trace: Vec<f64>,
    /// Accepted steps.
    pub iterations: usize,
    pub converged: bool,
    /// Mass the minimizer keeps inside the core cube.
    pub core_mass: f64,
    /// sup over charged atoms of H^p + p R*(H^{p-1} E a nu), the quantity
    /// the first-variation inequality controls.
    pub first_variation_sup: f64,
    /// Same sup evaluated at a = 1, for comparison.
    pub baseline_first_variation_sup: f64,
    /// 9 lambda, the reference level the sup is measured against.
    pub nine_lambda: f64,
}

struct FieldState {
    h: Vec<f64>,
    /// Direction field E per atom: -R/|R| where |R| >= tau/2, a fixed
    /// unit vector elsewhere.
    e: Vec<f64>,
    core_mass: f64,
}

impl VariationalProblem {
    pub fn new(
        k: &KernelParams,
        nu: &DiscreteMeasure,
        mu: &DiscreteMeasure,
        config: VariationalConfig,
    ) -> Result<Self, CapacityError> {
        config.validate()?;
        if nu.dim() != k.d || mu.dim() != k.d {
            return Err(CapacityError::InvalidParams(format!(
                "measures must live in dimension {}, got {} and {}",
                k.d,
                nu.dim(),
                mu.dim()
            )));
        }
        if nu.is_empty() {
            return Err(CapacityError::InvalidParams(
                "carrier measure has no atoms".into(),
            ));
        }
        let g: Vec<f64> = (0..nu.len())
            .map(|j| riesz_potential(k, mu, nu.point(j)) / config.a_param)
            .collect();
        let core: Vec<bool> = (0..nu.len())
            .map(|j| nu.point(j).iter().all(|&c| (c - 0.5).abs() <= 1.5))
            .collect();
        let charged_core = (0..nu.len()).any(|j| core[j] && nu.weight(j) > 0.0);
        if !charged_core {
            return Err(CapacityError::InvalidParams(
                "the barrier needs carrier mass inside the core cube [-1, 2]^d".into(),
            ));
        }
        let eps = nu.resolution() * (1.0 - 1e-12);
        Ok(VariationalProblem {
            k: k.clone(),
            nu: nu.clone(),
            config,
            g,
            core,
            eps,
        })
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    pub fn config(&self) -> &VariationalConfig {
        &self.config
    }

    fn check_density(&self, a: &[f64]) -> Result<(), CapacityError> {
        if a.len() != self.nu.len() {
            return Err(CapacityError::BadWeights(format!(
                "density has {} entries for {} atoms",
                a.len(),
                self.nu.len()
            )));
        }
        for (j, &v) in a.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(CapacityError::BadWeights(format!(
                    "density entry {j} = {v} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    fn field_state(&self, a: &[f64]) -> FieldState {
        let n = self.nu.len();
        let d = self.k.d;
        let tau = self.config.tau;
        let mut h = vec![0.0; n];
        let mut e = vec![0.0; n * d];
        let mut core_mass = 0.0;
        for j in 0..n {
            let r = truncated_riesz(&self.k, &self.nu, a, self.eps, self.nu.point(j));
            let mag = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            h[j] = (mag - self.g[j] - tau).max(0.0);
            if mag >= tau / 2.0 && mag > 0.0 {
                for t in 0..d {
                    e[j * d + t] = -r[t] / mag;
                }
            } else {
                e[j * d] = 1.0;
            }
            if self.core[j] {
                core_mass += a[j] * self.nu.weight(j);
            }
        }
        FieldState { h, e, core_mass }
    }

    /// I(a); infinite when the density abandons the core cube entirely.
    pub fn functional_value(&self, a: &[f64]) -> Result<f64, CapacityError> {
        self.check_density(a)?;
        let state = self.field_state(a);
        Ok(self.objective_from(&state, a))
    }

    fn objective_from(&self, state: &FieldState, a: &[f64]) -> f64 {
        let p = self.config.p;
        let mut defect = 0.0;
        for j in 0..self.nu.len() {
            defect += state.h[j].powf(p) * a[j] * self.nu.weight(j);
        }
        if state.core_mass <= 0.0 {
            return f64::INFINITY;
        }
        defect + self.config.lambda_reg / state.core_mass
    }

    /// sup over atoms with a > 0 of H^p + p R*(H^{p-1} E a nu),
    /// the left side of the first-variation inequality.
    pub fn first_variation_sup(&self, a: &[f64]) -> Result<f64, CapacityError> {
        self.check_density(a)?;
        let state = self.field_state(a);
        Ok(self.variation_sup_from(&state, a))
    }

    fn variation_sup_from(&self, state: &FieldState, a: &[f64]) -> f64 {
        let n = self.nu.len();
        let p = self.config.p;
        let field = self.adjoint_field(state, a);
        let mut sup = f64::NEG_INFINITY;
        for m in 0..n {
            if a[m] <= 0.0 || self.nu.weight(m) <= 0.0 {
                continue;
            }
            let adj = adjoint_riesz(&self.k, &self.nu, &field, self.nu.point(m)).unwrap_or(0.0);
            sup = sup.max(state.h[m].powf(p) + p * adj);
        }
        if sup == f64::NEG_INFINITY {
            0.0
        } else {
            sup
        }
    }

    /// H^{p-1} E a, the vector density fed to the adjoint transform.
    fn adjoint_field(&self, state: &FieldState, a: &[f64]) -> Vec<f64> {
        let n = self.nu.len();
        let d = self.k.d;
        let p = self.config.p;
        let mut field = vec![0.0; n * d];
        for l in 0..n {
            let scale = state.h[l].powf(p - 1.0) * a[l];
            if scale == 0.0 {
                continue;
            }
            for t in 0..d {
                field[l * d + t] = scale * state.e[l * d + t];
            }
        }
        field
    }

    /// Exact gradient of the discrete objective; valid wherever atom
    /// spacing is at least the carrier resolution, so the forward and
    /// adjoint truncations see the same pair set.
    fn gradient(&self, state: &FieldState, a: &[f64]) -> Vec<f64> {
        let n = self.nu.len();
        let p = self.config.p;
        let lambda = self.config.lambda_reg;
        let field = self.adjoint_field(state, a);
        let m2 = state.core_mass * state.core_mass;
        (0..n)
            .map(|m| {
                let adj =
                    adjoint_riesz(&self.k, &self.nu, &field, self.nu.point(m)).unwrap_or(0.0);
                let barrier = if self.core[m] { lambda / m2 } else { 0.0 };
                self.nu.weight(m) * (state.h[m].powf(p) + p * adj - barrier)
            })
            .collect()
    }
}

/// Projected-gradient descent from the full density a = 1, with a
/// backtracking line search that only ever accepts strict decrease. The
/// returned trace is therefore non-increasing by construction, and the
/// minimizer can never do worse than the baseline.
pub fn minimize_functional(
    problem: &VariationalProblem,
) -> Result<VariationalOutcome, CapacityError> {
    let n = problem.nu.len();
    let mut a = vec![1.0; n];
    let mut state = problem.field_state(&a);
    let mut value = problem.objective_from(&state, &a);
    let baseline = value;
    let baseline_first_variation_sup = problem.variation_sup_from(&state, &a);
    if !value.is_finite() {
        return Err(CapacityError::Diverged {
            message: "objective is not finite at the starting density".into(),
            trace: vec![value],
        });
    }

    let mut trace = vec![value];
    let mut step = problem.config.step;
    let mut flat = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;

    for _ in 0..problem.config.max_iter {
        let grad = problem.gradient(&state, &a);
        let mut accepted = false;
        while step >= 1e-14 {
            let cand: Vec<f64> = (0..n)
                .map(|m| (a[m] - step * grad[m]).clamp(0.0, 1.0))
                .collect();
            let cand_state = problem.field_state(&cand);
            let cand_value = problem.objective_from(&cand_state, &cand);
            if cand_value < value {
                let gain = value - cand_value;
                a = cand;
                state = cand_state;
                value = cand_value;
                trace.push(value);
                iterations += 1;
                step = (step * 1.3).min(1e6);
                accepted = true;
                if gain <= problem.config.tol * value.abs().max(1.0) {
                    flat += 1;
                } else {
                    flat = 0;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent at any step length: projected-stationary point.
            converged = true;
            break;
        }
        if !value.is_finite() {
            return Err(CapacityError::Diverged {
                message: "objective left the reals during descent".into(),
                trace,
            });
        }
        if flat >= 2 {
            converged = true;
            break;
        }
    }

    let first_variation_sup = problem.variation_sup_from(&state, &a);
    Ok(VariationalOutcome {
        a,
        objective: value,
        baseline,
        trace,
        iterations,
        converged,
        core_mass: state.core_mass,
        first_variation_sup,
        baseline_first_variation_sup,
        nine_lambda: 9.0 * problem.config.lambda_reg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_measure(n: usize) -> DiscreteMeasure {
        let h = 1.0 / n as f64;
        let mut pts = Vec::new();
        let mut w = Vec::new();
        for i in 0..n {
            for j in 0..n {
                pts.push((i as f64 + 0.5) * h);
                pts.push((j as f64 + 0.5) * h);
                w.push(1.0 / (n * n) as f64);
            }
        }
        DiscreteMeasure::new(2, pts, w, h).unwrap()
    }

    fn far_ring() -> DiscreteMeasure {
        let m = 12;
        let mut pts = Vec::new();
        let mut w = Vec::new();
        for j in 0..m {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            pts.push(0.5 + 3.0 * angle.cos());
            pts.push(0.5 + 3.0 * angle.sin());
            w.push(1.0 / m as f64);
        }
        DiscreteMeasure::new(2, pts, w, 0.05).unwrap()
    }

    fn problem(config: VariationalConfig) -> VariationalProblem {
        let k = KernelParams::new(2, 1.5).unwrap();
        VariationalProblem::new(&k, &grid_measure(8), &far_ring(), config).unwrap()
    }

    #[test]
    fn functional_matches_a_direct_evaluation_at_full_density() {
        let config = VariationalConfig::default();
        let p = problem(config.clone());
        let ones = vec![1.0; p.len()];
        let value = p.functional_value(&ones).unwrap();
        let state = p.field_state(&ones);
        let mut direct = 0.0;
        for j in 0..p.len() {
            direct += state.h[j].powf(config.p) * p.nu.weight(j);
        }
        direct += config.lambda_reg / state.core_mass;
        assert!((value - direct).abs() <= 1e-15 * direct.abs().max(1.0));
        // The 8x8 unit grid sits inside the core cube, so the barrier sees
        // the full mass.
        assert!((state.core_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn densities_outside_the_unit_interval_are_rejected() {
        let p = problem(VariationalConfig::default());
        let mut a = vec![1.0; p.len()];
        a[3] = 1.5;
        assert!(p.functional_value(&a).is_err());
        a[3] = -0.1;
        assert!(p.functional_value(&a).is_err());
        assert!(p.functional_value(&a[1..]).is_err());
    }

    #[test]
    fn empty_density_pays_an_infinite_barrier() {
        let p = problem(VariationalConfig::default());
        let zeros = vec![0.0; p.len()];
        assert!(p.functional_value(&zeros).unwrap().is_infinite());
    }

    #[test]
    fn huge_threshold_makes_full_density_optimal() {
        let config = VariationalConfig {
            tau: 1e9,
            ..VariationalConfig::default()
        };
        let p = problem(config);
        let out = minimize_functional(&p).unwrap();
        // With the defect dead, the objective is lambda / mass, which the
        // full density already minimizes: descent accepts nothing.
        assert_eq!(out.iterations, 0);
        assert!(out.converged);
        assert!(out.a.iter().all(|&v| v == 1.0));
        assert!((out.objective - out.baseline).abs() == 0.0);
        assert_eq!(out.first_variation_sup, 0.0);
    }

    #[test]
    fn minimizer_never_exceeds_the_baseline_and_trace_descends() {
        let config = VariationalConfig {
            tau: 0.05,
            lambda_reg: 1e-3,
            max_iter: 60,
            ..VariationalConfig::default()
        };
        let p = problem(config);
        let out = minimize_functional(&p).unwrap();
        assert!(out.objective <= out.baseline);
        assert!(out.core_mass > 0.0);
        for w in out.trace.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(out.a.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
}
